#pragma once

#include "fieldsel/covariance.hpp"

#include <span>
#include <string>
#include <vector>

namespace fieldsel {

struct ProblemInstance {
    Box box;                   // measurement region Theta
    std::vector<Point> omega;  // prediction locations, inside box
    int budget = 1;            // k
    CovarianceModel model;

    /// Throws std::invalid_argument on empty omega, budget < 1, points
    /// outside the box, or inconsistent dimensions.
    void validate() const;
};

enum class Method { grid, centroid };

[[nodiscard]] std::string method_name(Method m);

struct SelectionReport {
    std::vector<Point> selected;  // in selection order
    double objective = 0.0;
    double total_mse = 0.0;
    std::vector<double> gains;  // per-iteration marginal gains
    std::size_t ground_set_size = 0;
    double elapsed_seconds = 0.0;
    Method method = Method::grid;
    int rho = 0;  // grid resolution; 0 when the method never builds a grid
};

/// Gains this small count as numerically exhausted; greedy stops early and
/// reports the remaining budget unused.
inline constexpr double kGainExhausted = 1e-12;

/// Merge tolerance for coincident ground-set points (meters).
inline constexpr double kGroundSetMergeTol = 1e-9;

/// Cardinality-constrained greedy over a finite ground set. Each iteration
/// adds the candidate with the largest marginal gain (ties broken by lowest
/// index). Selected points stay eligible: a repeated measurement still
/// reduces noise, so its gain is strictly positive. Runs for budget
/// iterations or until the best gain falls to kGainExhausted.
[[nodiscard]] SelectionReport greedy_select(const ProblemInstance& instance,
                                            std::span<const Point> ground_set);

/// Greedy over the rho-per-axis grid discretization of the instance box.
[[nodiscard]] SelectionReport grid_greedy(const ProblemInstance& instance, int rho);

/// Greedy over the clique centroids of the prediction graph joined with the
/// prediction locations themselves. Never builds a grid.
[[nodiscard]] SelectionReport centroid_greedy(const ProblemInstance& instance);

/// Grid side for resource parity with centroid_greedy: ceil(sqrt(2 n_pred)).
[[nodiscard]] int matched_resource_rho(std::size_t n_pred);

}  // namespace fieldsel
