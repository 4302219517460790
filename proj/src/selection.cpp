#include "fieldsel/selection.hpp"

#include "fieldsel/estimation.hpp"
#include "fieldsel/geometry.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fieldsel {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

SelectionReport greedy_core(const ProblemInstance& instance, std::span<const Point> ground_set,
                            Method method, int rho, Clock::time_point start) {
    SelectionState state(instance.model, instance.omega);

    const auto n = static_cast<Eigen::Index>(ground_set.size());
    // Candidate-to-omega kernels never change across iterations; the
    // candidate-to-S block grows by the one row of the point just selected.
    const Eigen::MatrixXd cand_pred = cross_cov(instance.model, instance.omega, ground_set);
    Eigen::MatrixXd cand_sel(0, n);

    SelectionReport report;
    report.method = method;
    report.rho = rho;
    report.ground_set_size = ground_set.size();

    for (int iter = 0; iter < instance.budget; ++iter) {
        const Eigen::VectorXd gains = state.marginal_gains(cand_sel, cand_pred);
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < n; ++j) {
            if (gains[j] > gains[best]) best = j;
        }
        if (!(gains[best] > kGainExhausted)) break;

        const Point& chosen = ground_set[static_cast<std::size_t>(best)];
        state = state.extend(chosen);
        report.selected.push_back(chosen);
        report.gains.push_back(gains[best]);

        cand_sel.conservativeResize(state.size(), n);
        for (Eigen::Index j = 0; j < n; ++j) {
            cand_sel(state.size() - 1, j) =
                se_cov(instance.model, distance(chosen, ground_set[static_cast<std::size_t>(j)]));
        }
    }

    report.objective = state.objective();
    report.total_mse = state.total_mse();
    report.elapsed_seconds = seconds_since(start);
    return report;
}

}  // namespace

void ProblemInstance::validate() const {
    model.validate();
    box.validate();
    if (budget < 1) throw std::invalid_argument("ProblemInstance: budget must be >= 1");
    if (omega.empty()) throw std::invalid_argument("ProblemInstance: omega must be non-empty");
    for (const Point& y : omega) {
        if (y.dim() != box.dim()) {
            throw std::invalid_argument("ProblemInstance: omega dimension differs from box");
        }
        if (!box.contains(y)) {
            throw std::invalid_argument("ProblemInstance: prediction point outside box");
        }
    }
}

std::string method_name(Method m) { return m == Method::grid ? "grid" : "centroid"; }

SelectionReport greedy_select(const ProblemInstance& instance, std::span<const Point> ground_set) {
    instance.validate();
    if (ground_set.empty()) throw std::invalid_argument("greedy_select: empty ground set");
    return greedy_core(instance, ground_set, Method::grid, 0, Clock::now());
}

SelectionReport grid_greedy(const ProblemInstance& instance, int rho) {
    instance.validate();
    const auto start = Clock::now();
    const std::vector<Point> grid = make_grid(GridSpec{rho, instance.box});
    return greedy_core(instance, grid, Method::grid, rho, start);
}

SelectionReport centroid_greedy(const ProblemInstance& instance) {
    instance.validate();
    const auto start = Clock::now();
    const PredictionGraph graph = build_graph(instance.model, instance.omega);
    const std::vector<Clique> cliques = greedy_maximal_cliques(graph);
    std::vector<Point> ground = clique_centroids(instance.omega, cliques);
    ground.insert(ground.end(), instance.omega.begin(), instance.omega.end());
    ground = dedup_points(ground, kGroundSetMergeTol);
    return greedy_core(instance, ground, Method::centroid, 0, start);
}

int matched_resource_rho(std::size_t n_pred) {
    return static_cast<int>(std::ceil(std::sqrt(2.0 * static_cast<double>(n_pred))));
}

}  // namespace fieldsel
