#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fieldsel {

/// Squared-exponential covariance model plus measurement noise.
///
/// All covariance evaluations in the library go through this type. The
/// field value at a location has prior variance sigma0^2; two locations at
/// distance r have covariance sigma0^2 * exp(-r^2 / (2 L^2)); every
/// measurement carries independent noise of variance noise_var.
struct CovarianceModel {
    double sigma0 = 1.0;        // field standard deviation
    double length_scale = 1.0;  // L, meters
    double noise_var = 1.0;     // sigma^2, noise variance (> 0 keeps C(S) nonsingular)

    [[nodiscard]] double prior_var() const { return sigma0 * sigma0; }

    /// sigma0^2 + sigma^2, the diagonal of any measurement covariance matrix.
    [[nodiscard]] double measured_var() const { return sigma0 * sigma0 + noise_var; }

    /// Edge threshold for the prediction graph: sqrt(2) * L.
    [[nodiscard]] double clique_radius() const;

    /// Throws std::invalid_argument unless sigma0, length_scale, noise_var are
    /// all finite and strictly positive.
    void validate() const;
};

/// A location in R^d, d >= 1.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(c) {}

    [[nodiscard]] int dim() const { return static_cast<int>(coords.size()); }
    double& operator[](int i) { return coords[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return coords[static_cast<std::size_t>(i)]; }

    bool operator==(const Point& other) const = default;
};

[[nodiscard]] double squared_distance(const Point& a, const Point& b);
[[nodiscard]] double distance(const Point& a, const Point& b);

/// Axis-aligned box, the measurement region Theta.
struct Box {
    Point lo;
    Point hi;

    [[nodiscard]] int dim() const { return lo.dim(); }
    [[nodiscard]] bool contains(const Point& p, double tol = 0.0) const;
    [[nodiscard]] Point center() const;

    /// Throws std::invalid_argument unless lo/hi dimensions match and
    /// lo[i] <= hi[i] with finite coordinates.
    void validate() const;
};

/// phi_SE(r) = sigma0^2 * exp(-r^2 / (2 L^2)). Throws std::domain_error for r < 0.
[[nodiscard]] double se_cov(const CovarianceModel& model, double r);

/// Covariance vector b_x(S): entry i is phi_SE(||x - S[i]||), ordered as S.
[[nodiscard]] Eigen::VectorXd cov_vector(const CovarianceModel& model, const Point& x,
                                         std::span<const Point> s);

/// Cross-covariance matrix: entry (i, j) is phi_SE(||rows[i] - cols[j]||).
[[nodiscard]] Eigen::MatrixXd cross_cov(const CovarianceModel& model,
                                        std::span<const Point> rows,
                                        std::span<const Point> cols);

/// Measurement covariance C(S): phi_SE off-diagonal, sigma0^2 + sigma^2 on the
/// diagonal. Strictly positive definite for any S, duplicates included.
[[nodiscard]] Eigen::MatrixXd cov_matrix(const CovarianceModel& model, std::span<const Point> s);

}  // namespace fieldsel
