#pragma once

#include "fieldsel/covariance.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace fieldsel {

/// Variance reduction at a single prediction point:
///   f_y(S) = b_y(S)^T C(S)^-1 b_y(S),
/// computed through a fresh Cholesky factorization of C(S). Returns 0 for
/// empty S. This direct route is deliberately independent of SelectionState's
/// incremental path so the two can check each other.
[[nodiscard]] double variance_reduction_single(const CovarianceModel& model, const Point& y,
                                               std::span<const Point> s);

/// Total variance reduction f(S) = sum over omega of f_y(S), direct route.
[[nodiscard]] double objective(const CovarianceModel& model, std::span<const Point> omega,
                               std::span<const Point> s);

/// Total a-priori MSE: |omega| * sigma0^2 - f(S).
[[nodiscard]] double total_mse(const CovarianceModel& model, std::span<const Point> omega,
                               std::span<const Point> s);

/// Chosen measurement set S with cached factorization state.
///
/// Caches the lower Cholesky factor L of C(S) and the whitened prediction
/// cross-covariance W = L^-1 B, where column y of B is b_y(S). With these,
///   f_y(S) = ||W.col(y)||^2,   f(S) = ||W||_F^2,
/// and the marginal gain of a candidate x reduces to one triangular solve
/// plus inner products against W. Immutable: extend() returns a new state.
class SelectionState {
public:
    SelectionState(CovarianceModel model, std::vector<Point> omega);

    [[nodiscard]] const CovarianceModel& model() const { return model_; }
    [[nodiscard]] const std::vector<Point>& omega() const { return omega_; }
    [[nodiscard]] const std::vector<Point>& points() const { return points_; }
    [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }

    /// Current f(S).
    [[nodiscard]] double objective() const { return objective_; }
    [[nodiscard]] double total_mse() const;

    /// Lower Cholesky factor of C(S); size x size.
    [[nodiscard]] const Eigen::MatrixXd& chol() const { return chol_; }

    /// Cached b_y(S) columns over omega; size x |omega|.
    [[nodiscard]] const Eigen::MatrixXd& pred_cross() const { return pred_cross_; }

    /// New state over S + {x}. The factor grows by one row (O(k^2)) and the
    /// objective by the marginal gain of x.
    [[nodiscard]] SelectionState extend(const Point& x) const;

    /// Marginal gains f(S + {x_j}) - f(S) for every candidate, given
    /// precomputed kernel blocks:
    ///   cand_sel:  size x n, column j is b_{x_j}(S)
    ///   cand_pred: |omega| x n, entry (y, j) is phi_SE(||x_j - y||)
    /// All entries are nonnegative by construction.
    [[nodiscard]] Eigen::VectorXd marginal_gains(const Eigen::MatrixXd& cand_sel,
                                                 const Eigen::MatrixXd& cand_pred) const;

private:
    CovarianceModel model_;
    std::vector<Point> omega_;
    std::vector<Point> points_;
    Eigen::MatrixXd chol_;        // L, lower triangular, k x k
    Eigen::MatrixXd pred_cross_;  // B, k x m
    Eigen::MatrixXd whitened_;    // W = L^-1 B, k x m
    double objective_ = 0.0;
};

/// Marginal gain of each candidate against the current state; computes the
/// kernel blocks on the fly. Candidate sweeps inside the greedy loop reuse
/// precomputed blocks through SelectionState::marginal_gains instead.
[[nodiscard]] Eigen::VectorXd marginal_gain_sweep(const SelectionState& state,
                                                  std::span<const Point> candidates);

/// Max worker threads for candidate sweeps; 0 means the OpenMP default.
/// Results are identical for any setting (candidates are partitioned into
/// fixed blocks and each block is computed independently).
void set_sweep_threads(int n);
[[nodiscard]] int sweep_threads();

}  // namespace fieldsel
