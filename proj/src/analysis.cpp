#include "fieldsel/analysis.hpp"

#include "fieldsel/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace fieldsel {

namespace {

// C(n, k) with saturation just past the guard threshold.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

}  // namespace

void OneDTwoPointCase::validate() const {
    model.validate();
    if (!(y1 < y2)) throw std::invalid_argument("OneDTwoPointCase: requires y1 < y2");
}

OracleResult brute_force_subsets(const ProblemInstance& instance,
                                 std::span<const Point> ground_set, int k) {
    instance.validate();
    if (ground_set.empty()) throw std::invalid_argument("brute_force_subsets: empty ground set");
    const std::size_t n = ground_set.size();
    const auto kk = static_cast<std::size_t>(std::min<int>(k, static_cast<int>(n)));
    constexpr std::size_t kEvalCap = 1'000'000;
    if (binomial_capped(n, kk, kEvalCap) > kEvalCap) {
        throw std::invalid_argument("brute_force_subsets: C(n, k) exceeds evaluation cap");
    }

    OracleResult result;
    result.best_value = -1.0;

    std::vector<std::size_t> idx(kk);
    for (std::size_t i = 0; i < kk; ++i) idx[i] = i;
    std::vector<Point> subset(kk);
    while (true) {
        for (std::size_t i = 0; i < kk; ++i) subset[i] = ground_set[idx[i]];
        const double value = objective(instance.model, instance.omega, subset);
        ++result.evaluations;
        if (value > result.best_value) {
            result.best_value = value;
            result.best_set = subset;
        }
        // next combination in lexicographic order
        std::size_t i = kk;
        while (i > 0 && idx[i - 1] == n - kk + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < kk; ++j) idx[j] = idx[j - 1] + 1;
    }
    return result;
}

OracleResult dense_line_search(const OneDTwoPointCase& c, int resolution) {
    c.validate();
    if (resolution < 1000) {
        throw std::invalid_argument("dense_line_search: resolution must be >= 1000");
    }
    // k = 1 objective for omega = {y1, y2}, up to the constant
    // sigma0^4 / (sigma0^2 + sigma^2):
    //   e^{-(x - y1)^2 / L^2} + e^{-(x - y2)^2 / L^2}
    const double inv_l2 = 1.0 / (c.model.length_scale * c.model.length_scale);
    const double scale =
        std::pow(c.model.prior_var(), 2) / c.model.measured_var();
    const double step = (c.y2 - c.y1) / static_cast<double>(resolution - 1);

    double best_x = c.y1;
    double best_value = -1.0;
    for (int i = 0; i < resolution; ++i) {
        const double x = (i + 1 == resolution) ? c.y2 : c.y1 + step * i;
        const double d1 = x - c.y1;
        const double d2 = x - c.y2;
        const double value = std::exp(-d1 * d1 * inv_l2) + std::exp(-d2 * d2 * inv_l2);
        if (value > best_value) {
            best_value = value;
            best_x = x;
        }
    }

    OracleResult result;
    result.best_set = {Point{best_x}};
    result.best_value = scale * best_value;
    result.evaluations = static_cast<std::size_t>(resolution);
    return result;
}

bool check_midpoint_criterion(const OneDTwoPointCase& c, int resolution) {
    const OracleResult search = dense_line_search(c, resolution);
    const double step = (c.y2 - c.y1) / static_cast<double>(resolution - 1);
    return std::abs(search.best_set.front()[0] - c.midpoint()) <= 2.0 * step;
}

double check_endpoint_ratio(const OneDTwoPointCase& c, int resolution) {
    c.validate();
    if (!(c.separation() > c.model.clique_radius())) {
        throw std::invalid_argument("check_endpoint_ratio: requires separation > sqrt(2) L");
    }
    const double inv_l2 = 1.0 / (c.model.length_scale * c.model.length_scale);
    const double sep = c.separation();
    const double at_endpoint = 1.0 + std::exp(-sep * sep * inv_l2);
    const OracleResult search = dense_line_search(c, resolution);
    const double scale = std::pow(c.model.prior_var(), 2) / c.model.measured_var();
    return scale * at_endpoint / search.best_value;
}

std::pair<double, double> reproduce_example1() {
    const CovarianceModel model{1.0, 1.0, 1.0};
    const std::vector<Point> omega{Point{0.0}};
    const std::vector<Point> set_a{Point{0.6784}};
    const std::vector<Point> set_b{Point{0.6784}, Point{1.4869}};
    const Point x{0.6892};

    std::vector<Point> a_x = set_a;
    a_x.push_back(x);
    std::vector<Point> b_x = set_b;
    b_x.push_back(x);

    const double gain_a = objective(model, omega, a_x) - objective(model, omega, set_a);
    const double gain_b = objective(model, omega, b_x) - objective(model, omega, set_b);
    if (!(gain_a < gain_b)) {
        throw std::logic_error("reproduce_example1: diminishing-returns violation missing");
    }
    return {gain_a, gain_b};
}

}  // namespace fieldsel
