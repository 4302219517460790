#include "fieldsel/estimation.hpp"
#include "fieldsel/instance.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fieldsel;

namespace {

Point random_point(UniformRng& rng, int d, double side) {
    Point p;
    p.coords.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) p.coords.push_back(rng.next_in(0.0, side));
    return p;
}

}  // namespace

TEST_CASE("single-point variance reduction") {
    const CovarianceModel model{2.0, 1.0, 0.5};

    SUBCASE("empty set reduces nothing") {
        const std::vector<Point> empty;
        CHECK(variance_reduction_single(model, Point{1.0}, empty) == 0.0);
    }

    SUBCASE("measuring the prediction point itself") {
        // b = sigma0^2, C = sigma0^2 + sigma^2, so f = sigma0^4 / (sigma0^2 + sigma^2)
        const std::vector<Point> s{Point{3.0}};
        CHECK(variance_reduction_single(model, Point{3.0}, s) ==
              doctest::Approx(16.0 / 4.5).epsilon(1e-14));
    }

    SUBCASE("scalar case from the 1D counterexample geometry") {
        const CovarianceModel unit{1.0, 1.0, 1.0};
        const std::vector<Point> s{Point{0.6784}};
        CHECK(variance_reduction_single(unit, Point{0.0}, s) ==
              doctest::Approx(std::exp(-0.6784 * 0.6784) / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("objective basics") {
    const CovarianceModel model{1.0, 1.0, 1.0};
    const std::vector<Point> omega{Point{0.0}, Point{2.0}};

    SUBCASE("empty selection scores zero") {
        const std::vector<Point> empty;
        CHECK(objective(model, omega, empty) == 0.0);
    }

    SUBCASE("midpoint measurement sees both symmetric predictions equally") {
        const std::vector<Point> s{Point{1.0}};
        CHECK(variance_reduction_single(model, omega[0], s) ==
              doctest::Approx(variance_reduction_single(model, omega[1], s)).epsilon(1e-15));
        CHECK(objective(model, omega, s) ==
              doctest::Approx(2.0 * variance_reduction_single(model, omega[0], s))
                  .epsilon(1e-14));
    }

    SUBCASE("empty omega is rejected") {
        const std::vector<Point> empty;
        const std::vector<Point> s{Point{1.0}};
        CHECK_THROWS_AS((void)objective(model, empty, s), std::invalid_argument);
    }
}

TEST_CASE("objective is monotone, bounded, and order-invariant") {
    UniformRng rng(321);
    for (int trial = 0; trial < 20; ++trial) {
        CovarianceModel model{rng.next_in(0.5, 3.0), rng.next_in(0.4, 1.5),
                              rng.next_in(0.01, 0.5)};
        std::vector<Point> omega;
        const int m = 2 + static_cast<int>(rng.next_raw() % 8);
        for (int i = 0; i < m; ++i) omega.push_back(random_point(rng, 2, 2.0));
        std::vector<Point> s;
        const int k = 1 + static_cast<int>(rng.next_raw() % 6);
        for (int i = 0; i < k; ++i) s.push_back(random_point(rng, 2, 2.0));

        const double before = objective(model, omega, s);
        CHECK(before < static_cast<double>(m) * model.prior_var());

        std::vector<Point> grown = s;
        grown.push_back(random_point(rng, 2, 2.0));
        CHECK(objective(model, omega, grown) >= before - 1e-12);

        std::vector<Point> s_shuffled = s;
        std::reverse(s_shuffled.begin(), s_shuffled.end());
        std::vector<Point> omega_shuffled = omega;
        std::rotate(omega_shuffled.begin(), omega_shuffled.begin() + 1, omega_shuffled.end());
        CHECK(objective(model, omega_shuffled, s_shuffled) ==
              doctest::Approx(before).epsilon(1e-10));
    }
}

TEST_CASE("total_mse identities") {
    const CovarianceModel model{2.0, 1.0, 0.5};

    SUBCASE("no measurements leave the prior variance") {
        const std::vector<Point> omega{Point{0.0}, Point{1.0}, Point{5.0}};
        const std::vector<Point> empty;
        CHECK(total_mse(model, omega, empty) == doctest::Approx(12.0).epsilon(1e-15));
    }

    SUBCASE("measuring the lone prediction point") {
        // sigma0^2 sigma^2 / (sigma0^2 + sigma^2)
        const std::vector<Point> omega{Point{2.0}};
        const std::vector<Point> s{Point{2.0}};
        CHECK(total_mse(model, omega, s) == doctest::Approx(4.0 * 0.5 / 4.5).epsilon(1e-12));
    }

    SUBCASE("complement of the objective on a random instance") {
        UniformRng rng(5);
        std::vector<Point> omega;
        for (int i = 0; i < 7; ++i) omega.push_back(random_point(rng, 2, 3.0));
        std::vector<Point> s;
        for (int i = 0; i < 4; ++i) s.push_back(random_point(rng, 2, 3.0));
        CHECK(total_mse(model, omega, s) ==
              doctest::Approx(7.0 * model.prior_var() - objective(model, omega, s))
                  .epsilon(1e-14));
    }
}

TEST_CASE("gain sweep from the empty state uses the first-step formula") {
    const CovarianceModel model{1.5, 0.8, 0.3};
    const std::vector<Point> omega{Point{0.0, 0.0}, Point{1.0, 0.5}, Point{2.0, 2.0}};
    SelectionState state(model, omega);

    const std::vector<Point> candidates{Point{0.5, 0.5}, Point{1.8, 1.1}};
    const Eigen::VectorXd gains = marginal_gain_sweep(state, candidates);
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        double expected = 0.0;
        for (const Point& y : omega) {
            const double phi = se_cov(model, distance(candidates[j], y));
            expected += phi * phi;
        }
        expected /= model.measured_var();
        CHECK(gains[static_cast<Eigen::Index>(j)] == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("gain reversal pair from the 1D counterexample") {
    const CovarianceModel model{1.0, 1.0, 1.0};
    const std::vector<Point> omega{Point{0.0}};
    const std::vector<Point> candidates{Point{0.6892}};

    SelectionState at_a = SelectionState(model, omega).extend(Point{0.6784});
    SelectionState at_b = at_a.extend(Point{1.4869});

    const double gain_a = marginal_gain_sweep(at_a, candidates)[0];
    const double gain_b = marginal_gain_sweep(at_b, candidates)[0];
    CHECK(gain_a == doctest::Approx(0.1021).epsilon(5e-3));
    CHECK(gain_b == doctest::Approx(0.1025).epsilon(5e-3));
    CHECK(std::abs(gain_a - 0.1021) <= 5e-4);
    CHECK(std::abs(gain_b - 0.1025) <= 5e-4);
    CHECK(gain_a < gain_b);  // larger set, larger gain: diminishing returns fails
}

TEST_CASE("incremental gains equal direct objective differences") {
    UniformRng rng(88);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_raw() % 2);
        CovarianceModel model{rng.next_in(0.5, 4.0), rng.next_in(0.3, 1.5),
                              rng.next_in(0.005, 0.8)};
        std::vector<Point> omega;
        const int m = 1 + static_cast<int>(rng.next_raw() % 30);
        for (int i = 0; i < m; ++i) omega.push_back(random_point(rng, d, 3.0));

        SelectionState state(model, omega);
        std::vector<Point> chosen;
        const int k = static_cast<int>(rng.next_raw() % 12);
        for (int i = 0; i < k; ++i) {
            chosen.push_back(random_point(rng, d, 3.0));
            state = state.extend(chosen.back());
        }

        std::vector<Point> candidates;
        for (int i = 0; i < 3; ++i) candidates.push_back(random_point(rng, d, 3.0));
        const Eigen::VectorXd gains = marginal_gain_sweep(state, candidates);

        const double base = objective(model, omega, chosen);
        for (int i = 0; i < 3; ++i) {
            CHECK(gains[i] >= 0.0);
            std::vector<Point> grown = chosen;
            grown.push_back(candidates[static_cast<std::size_t>(i)]);
            const double direct = objective(model, omega, grown) - base;
            const double scale = std::max(1.0, objective(model, omega, grown));
            CHECK(std::abs(gains[i] - direct) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("extend keeps the cached factorization consistent") {
    UniformRng rng(13);
    const CovarianceModel model{2.2, 0.9, 0.1};
    std::vector<Point> omega;
    for (int i = 0; i < 9; ++i) omega.push_back(random_point(rng, 2, 2.5));

    SelectionState state(model, omega);
    std::vector<Point> chosen;
    for (int i = 0; i < 10; ++i) {
        chosen.push_back(random_point(rng, 2, 2.5));
        state = state.extend(chosen.back());

        const Eigen::MatrixXd c = cov_matrix(model, chosen);
        const Eigen::MatrixXd rebuilt = state.chol() * state.chol().transpose();
        CHECK((rebuilt - c).cwiseAbs().maxCoeff() <= 1e-10 * c.cwiseAbs().maxCoeff());

        const double direct = objective(model, omega, chosen);
        CHECK(state.objective() == doctest::Approx(direct).epsilon(1e-8));
        CHECK(state.pred_cross().rows() == state.size());
    }
}

TEST_CASE("extending the empty state matches the one-point objective") {
    const CovarianceModel model{1.0, 1.0, 0.2};
    const std::vector<Point> omega{Point{0.0}, Point{0.7}};
    const Point x{0.3};
    const SelectionState state = SelectionState(model, omega).extend(x);
    const std::vector<Point> s{x};
    CHECK(state.objective() == doctest::Approx(objective(model, omega, s)).epsilon(1e-12));
}

TEST_CASE("a repeated measurement still has strictly positive gain") {
    const CovarianceModel model{1.0, 1.0, 0.5};
    const std::vector<Point> omega{Point{0.0}, Point{1.0}};
    const Point x{0.4};

    SelectionState state = SelectionState(model, omega).extend(x);
    const std::vector<Point> candidates{x};
    const double gain = marginal_gain_sweep(state, candidates)[0];
    CHECK(gain > 0.0);

    const std::vector<Point> once{x};
    const std::vector<Point> twice{x, x};
    const double direct = objective(model, omega, twice) - objective(model, omega, once);
    CHECK(gain == doctest::Approx(direct).epsilon(1e-10));

    CHECK_NOTHROW(state = state.extend(x));
    CHECK(state.objective() == doctest::Approx(objective(model, omega, twice)).epsilon(1e-10));
}

TEST_CASE("sweep thread setting does not change results") {
    UniformRng rng(4242);
    const CovarianceModel model{1.0, 1.0, 0.1};
    std::vector<Point> omega;
    for (int i = 0; i < 40; ++i) omega.push_back(random_point(rng, 2, 4.0));
    SelectionState state(model, omega);
    for (int i = 0; i < 5; ++i) state = state.extend(random_point(rng, 2, 4.0));

    std::vector<Point> candidates;
    for (int i = 0; i < 2500; ++i) candidates.push_back(random_point(rng, 2, 4.0));

    set_sweep_threads(1);
    const Eigen::VectorXd serial = marginal_gain_sweep(state, candidates);
    set_sweep_threads(0);
    const Eigen::VectorXd parallel = marginal_gain_sweep(state, candidates);
    CHECK(serial == parallel);  // bitwise: blocks are computed independently
}
