#include "fieldsel/estimation.hpp"

#include <Eigen/Cholesky>

#include <atomic>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fieldsel {

namespace {

std::atomic<int> g_sweep_threads{0};

Eigen::LLT<Eigen::MatrixXd> factorize(const CovarianceModel& model, std::span<const Point> s) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov_matrix(model, s));
    if (llt.info() != Eigen::Success) {
        // sigma^2 > 0 makes C(S) strictly positive definite; reaching this
        // indicates a broken model or corrupted state, not a user error.
        throw std::runtime_error("estimation: Cholesky factorization of C(S) failed");
    }
    return llt;
}

}  // namespace

void set_sweep_threads(int n) { g_sweep_threads.store(n < 0 ? 0 : n); }
int sweep_threads() { return g_sweep_threads.load(); }

double variance_reduction_single(const CovarianceModel& model, const Point& y,
                                 std::span<const Point> s) {
    if (s.empty()) return 0.0;
    const auto llt = factorize(model, s);
    const Eigen::VectorXd b = cov_vector(model, y, s);
    const Eigen::VectorXd u = llt.matrixL().solve(b);
    return u.squaredNorm();
}

double objective(const CovarianceModel& model, std::span<const Point> omega,
                 std::span<const Point> s) {
    if (omega.empty()) throw std::invalid_argument("objective: omega must be non-empty");
    if (s.empty()) return 0.0;
    const auto llt = factorize(model, s);
    Eigen::MatrixXd b = cross_cov(model, s, omega);  // k x m
    llt.matrixL().solveInPlace(b);
    return b.squaredNorm();
}

double total_mse(const CovarianceModel& model, std::span<const Point> omega,
                 std::span<const Point> s) {
    return static_cast<double>(omega.size()) * model.prior_var() - objective(model, omega, s);
}

SelectionState::SelectionState(CovarianceModel model, std::vector<Point> omega)
    : model_(model), omega_(std::move(omega)) {
    model_.validate();
    if (omega_.empty()) throw std::invalid_argument("SelectionState: omega must be non-empty");
    const int d = omega_.front().dim();
    for (const Point& y : omega_) {
        if (y.dim() != d) throw std::invalid_argument("SelectionState: omega dimension mismatch");
    }
    const auto m = static_cast<Eigen::Index>(omega_.size());
    chol_.resize(0, 0);
    pred_cross_.resize(0, m);
    whitened_.resize(0, m);
}

double SelectionState::total_mse() const {
    return static_cast<double>(omega_.size()) * model_.prior_var() - objective_;
}

SelectionState SelectionState::extend(const Point& x) const {
    const Eigen::Index k = chol_.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(omega_.size());

    const Eigen::VectorXd b = cov_vector(model_, x, points_);
    Eigen::VectorXd w = b;
    if (k > 0) chol_.triangularView<Eigen::Lower>().solveInPlace(w);

    // Schur complement of the appended row; equals 1 / T_x.
    const double s2 = model_.measured_var() - w.squaredNorm();
    if (!(s2 > 0.0)) {
        throw std::runtime_error("SelectionState::extend: posterior variance underflow");
    }
    const double s = std::sqrt(s2);

    SelectionState next(*this);
    next.points_.push_back(x);

    next.chol_.conservativeResize(k + 1, k + 1);
    next.chol_.row(k).head(k) = w.transpose();
    next.chol_.col(k).head(k).setZero();
    next.chol_(k, k) = s;

    Eigen::RowVectorXd phi_x(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        phi_x[j] = se_cov(model_, distance(x, omega_[static_cast<std::size_t>(j)]));
    }

    // New whitened row: (phi_x - w^T W) / s. Its squared norm is exactly the
    // marginal gain T_x * sum_y (R_{x,y} - phi_SE(x, y))^2.
    Eigen::RowVectorXd w_row = phi_x;
    if (k > 0) w_row -= w.transpose() * whitened_;
    w_row /= s;

    next.pred_cross_.conservativeResize(k + 1, m);
    next.pred_cross_.row(k) = phi_x;
    next.whitened_.conservativeResize(k + 1, m);
    next.whitened_.row(k) = w_row;
    next.objective_ = objective_ + w_row.squaredNorm();
    return next;
}

Eigen::VectorXd SelectionState::marginal_gains(const Eigen::MatrixXd& cand_sel,
                                               const Eigen::MatrixXd& cand_pred) const {
    const Eigen::Index k = chol_.rows();
    const Eigen::Index m = static_cast<Eigen::Index>(omega_.size());
    const Eigen::Index n = cand_pred.cols();
    if (cand_sel.rows() != k || (cand_sel.cols() != n && k > 0) || cand_pred.rows() != m) {
        throw std::invalid_argument("marginal_gains: kernel block shape mismatch");
    }

    Eigen::VectorXd gains(n);
    const double diag = model_.measured_var();
    std::atomic<bool> bad_denom{false};

    // Fixed block size keeps the per-block temporaries cache-friendly and the
    // result independent of the thread count.
    constexpr Eigen::Index kBlock = 1024;
    const Eigen::Index n_blocks = (n + kBlock - 1) / kBlock;

#ifdef _OPENMP
    const int requested = sweep_threads();
    const int threads = requested > 0 ? requested : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
#endif
    for (Eigen::Index blk = 0; blk < n_blocks; ++blk) {
        const Eigen::Index lo = blk * kBlock;
        const Eigen::Index len = std::min(kBlock, n - lo);
        if (k == 0) {
            for (Eigen::Index j = 0; j < len; ++j) {
                gains[lo + j] = cand_pred.col(lo + j).squaredNorm() / diag;
            }
            continue;
        }
        Eigen::MatrixXd u = cand_sel.middleCols(lo, len);  // k x len
        chol_.triangularView<Eigen::Lower>().solveInPlace(u);
        Eigen::MatrixXd r = whitened_.transpose() * u;  // m x len, R_{x,y}(S)
        r -= cand_pred.middleCols(lo, len);
        for (Eigen::Index j = 0; j < len; ++j) {
            const double denom = diag - u.col(j).squaredNorm();
            if (!(denom > 0.0)) {
                bad_denom.store(true);
                gains[lo + j] = 0.0;
                continue;
            }
            gains[lo + j] = r.col(j).squaredNorm() / denom;
        }
    }
    if (bad_denom.load()) {
        // sigma^2 > 0 bounds the denominator away from zero; this signals a
        // corrupted factorization, not a property of the instance.
        throw std::runtime_error("marginal_gains: T_x denominator not positive");
    }
    return gains;
}

Eigen::VectorXd marginal_gain_sweep(const SelectionState& state,
                                    std::span<const Point> candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("marginal_gain_sweep: candidates must be non-empty");
    }
    const Eigen::MatrixXd cand_sel = cross_cov(state.model(), state.points(), candidates);
    const Eigen::MatrixXd cand_pred = cross_cov(state.model(), state.omega(), candidates);
    return state.marginal_gains(cand_sel, cand_pred);
}

}  // namespace fieldsel
