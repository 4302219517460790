#include "fieldsel/covariance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fieldsel {

namespace {

void require_same_dim(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("point dimension mismatch: " + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()));
    }
}

bool all_finite(const Point& p) {
    for (double c : p.coords) {
        if (!std::isfinite(c)) return false;
    }
    return true;
}

}  // namespace

double CovarianceModel::clique_radius() const { return std::sqrt(2.0) * length_scale; }

void CovarianceModel::validate() const {
    if (!(std::isfinite(sigma0) && sigma0 > 0.0)) {
        throw std::invalid_argument("CovarianceModel: sigma0 must be finite and > 0");
    }
    if (!(std::isfinite(length_scale) && length_scale > 0.0)) {
        throw std::invalid_argument("CovarianceModel: length_scale must be finite and > 0");
    }
    if (!(std::isfinite(noise_var) && noise_var > 0.0)) {
        throw std::invalid_argument("CovarianceModel: noise_var must be finite and > 0");
    }
}

double squared_distance(const Point& a, const Point& b) {
    require_same_dim(a, b);
    double sum = 0.0;
    for (int i = 0; i < a.dim(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double distance(const Point& a, const Point& b) { return std::sqrt(squared_distance(a, b)); }

bool Box::contains(const Point& p, double tol) const {
    require_same_dim(lo, p);
    for (int i = 0; i < dim(); ++i) {
        if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    }
    return true;
}

Point Box::center() const {
    Point c;
    c.coords.resize(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
    return c;
}

void Box::validate() const {
    require_same_dim(lo, hi);
    if (dim() < 1) throw std::invalid_argument("Box: dimension must be >= 1");
    if (!all_finite(lo) || !all_finite(hi)) {
        throw std::invalid_argument("Box: coordinates must be finite");
    }
    for (int i = 0; i < dim(); ++i) {
        if (lo[i] > hi[i]) {
            throw std::invalid_argument("Box: lo[" + std::to_string(i) + "] exceeds hi");
        }
    }
}

double se_cov(const CovarianceModel& model, double r) {
    if (r < 0.0 || !std::isfinite(r)) {
        throw std::domain_error("se_cov: distance must be finite and nonnegative");
    }
    const double l2 = model.length_scale * model.length_scale;
    return model.prior_var() * std::exp(-0.5 * r * r / l2);
}

Eigen::VectorXd cov_vector(const CovarianceModel& model, const Point& x, std::span<const Point> s) {
    Eigen::VectorXd b(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        b[static_cast<Eigen::Index>(i)] = se_cov(model, distance(x, s[i]));
    }
    return b;
}

Eigen::MatrixXd cross_cov(const CovarianceModel& model, std::span<const Point> rows,
                          std::span<const Point> cols) {
    Eigen::MatrixXd k(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    const double var0 = model.prior_var();
    const double inv_2l2 = 0.5 / (model.length_scale * model.length_scale);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                var0 * std::exp(-squared_distance(rows[i], cols[j]) * inv_2l2);
        }
    }
    return k;
}

Eigen::MatrixXd cov_matrix(const CovarianceModel& model, std::span<const Point> s) {
    if (s.empty()) throw std::invalid_argument("cov_matrix: set must be non-empty");
    const auto n = static_cast<Eigen::Index>(s.size());
    Eigen::MatrixXd c(n, n);
    // Entries computed once and mirrored, so the matrix is symmetric exactly.
    for (Eigen::Index j = 0; j < n; ++j) {
        c(j, j) = model.measured_var();
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double v = se_cov(model, distance(s[static_cast<std::size_t>(i)],
                                                    s[static_cast<std::size_t>(j)]));
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return c;
}

}  // namespace fieldsel
