#include "fieldsel/bench.hpp"
#include "fieldsel/instance.hpp"
#include "fieldsel/io.hpp"

#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fieldsel;

namespace {

std::filesystem::path temp_dir(const std::string& leaf) {
    const auto dir = std::filesystem::temp_directory_path() / ("fieldsel_test_" + leaf);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

BenchmarkSuite micro_suite() {
    BenchmarkSuite suite;
    suite.environments = {{"tiny", Box{Point{0.0, 0.0}, Point{12.0, 12.0}}}};
    suite.regimes = {{"mini", 8, 3}};
    suite.model = CovarianceModel{2.0, 2.5, 0.04};
    suite.instances_per_cell = 2;
    suite.base_seed = 7;
    return suite;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("instance generation is deterministic and in bounds") {
    const Box box{Point{0.0, 0.0}, Point{40.0, 40.0}};
    const CovarianceModel model{12.87, 8.33, 0.0361};

    const ProblemInstance a = generate_instance(box, 20, 8, model, 1234);
    const ProblemInstance b = generate_instance(box, 20, 8, model, 1234);
    CHECK(a.omega == b.omega);
    CHECK(instance_hash(a) == instance_hash(b));

    const ProblemInstance c = generate_instance(box, 20, 8, model, 1235);
    CHECK(a.omega != c.omega);
    CHECK(instance_hash(a) != instance_hash(c));

    for (const Point& p : a.omega) CHECK(box.contains(p));
}

TEST_CASE("generated points cover the box uniformly") {
    const Box box{Point{0.0, 0.0}, Point{40.0, 40.0}};
    const ProblemInstance big =
        generate_instance(box, 100000, 1, CovarianceModel{1.0, 1.0, 1.0}, 77);
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (const Point& p : big.omega) {
        mean_x += p[0];
        mean_y += p[1];
    }
    mean_x /= 100000.0;
    mean_y /= 100000.0;
    CHECK(std::abs(mean_x - 20.0) <= 0.2);
    CHECK(std::abs(mean_y - 20.0) <= 0.2);
}

TEST_CASE("omega CSV round trip") {
    const auto dir = temp_dir("csv");
    const auto path = dir / "omega.csv";
    const std::vector<Point> omega{Point{0.5, 1.25}, Point{39.125, 0.0625}, Point{7.0, 8.0}};
    write_omega_csv(path, omega);
    const auto back = read_omega_csv(path);
    CHECK(back == omega);  // binary-exact coordinates survive the text form
}

TEST_CASE("omega CSV rejects malformed input") {
    const auto dir = temp_dir("csv_bad");

    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)read_omega_csv(dir / "absent.csv"), IoError);
    }

    SUBCASE("bad header") {
        std::ofstream(dir / "bad_header.csv") << "a,b\n1,2\n";
        CHECK_THROWS_AS((void)read_omega_csv(dir / "bad_header.csv"), IoError);
    }

    SUBCASE("ragged row") {
        std::ofstream(dir / "ragged.csv") << "x,y\n1,2\n3\n";
        CHECK_THROWS_AS((void)read_omega_csv(dir / "ragged.csv"), IoError);
    }

    SUBCASE("non-numeric value") {
        std::ofstream(dir / "nan.csv") << "x,y\n1,two\n";
        CHECK_THROWS_AS((void)read_omega_csv(dir / "nan.csv"), IoError);
    }

    SUBCASE("header only") {
        std::ofstream(dir / "empty.csv") << "x,y\n";
        CHECK_THROWS_AS((void)read_omega_csv(dir / "empty.csv"), IoError);
    }
}

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, 1.0 / 3.0, 165.6369, 1e-300, 12345678.90123456, 0.0}) {
        const std::string text = format_double(v);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == v);
    }
}

TEST_CASE("run executes the requested methods") {
    const ProblemInstance instance = generate_instance(
        Box{Point{0.0, 0.0}, Point{15.0, 15.0}}, 10, 3, CovarianceModel{2.0, 2.0, 0.05}, 3);

    SUBCASE("both methods, grid first") {
        RunConfig config;
        config.method = MethodChoice::both;
        config.matched_resource = true;
        const auto reports = run(config, instance);
        REQUIRE(reports.size() == 2);
        CHECK(reports[0].method == Method::grid);
        CHECK(reports[1].method == Method::centroid);
        CHECK(reports[0].rho == matched_resource_rho(10));
    }

    SUBCASE("centroid ignores rho entirely") {
        RunConfig config;
        config.method = MethodChoice::centroid;
        config.rho = 50;
        const auto with_rho = run(config, instance);
        config.rho = 3;
        const auto with_other = run(config, instance);
        REQUIRE(with_rho.size() == 1);
        CHECK(with_rho[0].selected == with_other[0].selected);
        CHECK(with_rho[0].objective == with_other[0].objective);
    }

    SUBCASE("grid without a resolution is a usage error") {
        RunConfig config;
        config.method = MethodChoice::grid;
        CHECK_THROWS_AS((void)run(config, instance), std::invalid_argument);
    }

    SUBCASE("repeats duplicate the report list") {
        RunConfig config;
        config.method = MethodChoice::grid;
        config.rho = 4;
        config.repeats = 3;
        CHECK(run(config, instance).size() == 3);
    }
}

TEST_CASE("bench writes sorted, reproducible outputs") {
    const auto suite = micro_suite();
    const auto dir_a = temp_dir("bench_a");
    const auto dir_b = temp_dir("bench_b");

    const BenchResult first = bench(suite, dir_a);
    const BenchResult second = bench(suite, dir_b);

    // 1 env x 1 regime x 2 instances x 2 methods
    REQUIRE(first.rows.size() == 4);
    REQUIRE(second.rows.size() == 4);

    for (std::size_t i = 0; i < first.rows.size(); ++i) {
        CHECK(first.rows[i].objective == second.rows[i].objective);
        CHECK(first.rows[i].mse == second.rows[i].mse);
        CHECK(first.rows[i].ground_set == second.rows[i].ground_set);
    }

    // rows are sorted by (env, regime, seed, method)
    for (std::size_t i = 1; i < first.rows.size(); ++i) {
        const auto key = [](const BenchRow& r) {
            return std::make_tuple(r.env, r.regime, r.seed, r.method);
        };
        CHECK(key(first.rows[i - 1]) < key(first.rows[i]));
    }

    const auto lines_a = read_lines(dir_a / "bench.csv");
    const auto lines_b = read_lines(dir_b / "bench.csv");
    REQUIRE(lines_a.size() == 5);
    CHECK(lines_a[0] == "env,regime,seed,method,rho,ground_set,k,objective,mse,seconds");
    // objective and mse columns are bit-identical between reruns
    for (std::size_t i = 1; i < lines_a.size(); ++i) {
        std::stringstream sa(lines_a[i]);
        std::stringstream sb(lines_b[i]);
        std::string fa;
        std::string fb;
        for (int col = 0; col < 10; ++col) {
            std::getline(sa, fa, ',');
            std::getline(sb, fb, ',');
            if (col == 7 || col == 8) CHECK(fa == fb);
        }
    }

    CHECK(std::filesystem::exists(dir_a / "aggregates.csv"));
    CHECK(std::filesystem::exists(dir_a / "escalation.csv"));
    CHECK(std::filesystem::exists(dir_a / "runs"));
    REQUIRE(first.escalations.size() == 2);
    for (const EscalationRow& esc : first.escalations) {
        CHECK(esc.base_rho == matched_resource_rho(8));
        CHECK(esc.final_rho >= esc.base_rho);
        if (esc.parity_reached) {
            CHECK(esc.grid_objective >= suite.parity_tol * esc.centroid_objective);
        }
    }
}

TEST_CASE("bench with a worker pool reproduces the serial rows") {
    const auto suite = micro_suite();
    const auto dir_serial = temp_dir("bench_serial");
    const auto dir_pool = temp_dir("bench_pool");
    const BenchResult serial = bench(suite, dir_serial, 1);
    const BenchResult pool = bench(suite, dir_pool, 2);
    REQUIRE(serial.rows.size() == pool.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].objective == pool.rows[i].objective);
        CHECK(serial.rows[i].mse == pool.rows[i].mse);
    }
}

TEST_CASE("suite JSON loading overrides the defaults") {
    const auto dir = temp_dir("suite");
    const auto path = dir / "suite.json";
    std::ofstream(path) << R"({
        "model": {"sigma0": 2.0, "length_scale": 1.5, "noise_var": 0.01},
        "environments": [{"name": "one", "lo": [0, 0], "hi": [10, 10]}],
        "regimes": [{"name": "r", "n_pred": 5, "budget": 2}],
        "instances_per_cell": 3,
        "base_seed": 99,
        "rho_cap": 64,
        "parity_tol": 0.99
    })";
    const BenchmarkSuite suite = load_suite(path);
    CHECK(suite.model.sigma0 == 2.0);
    CHECK(suite.environments.size() == 1);
    CHECK(suite.environments[0].name == "one");
    CHECK(suite.regimes[0].n_pred == 5);
    CHECK(suite.instances_per_cell == 3);
    CHECK(suite.base_seed == 99);
    CHECK(suite.rho_cap == 64);
    CHECK(suite.parity_tol == 0.99);

    CHECK_THROWS_AS((void)load_suite(dir / "missing.json"), IoError);
    std::ofstream(dir / "broken.json") << "{not json";
    CHECK_THROWS_AS((void)load_suite(dir / "broken.json"), IoError);
}

TEST_CASE("default suite matches the published protocol") {
    const BenchmarkSuite suite = default_suite();
    REQUIRE(suite.environments.size() == 3);
    CHECK(suite.environments[0].box.hi[0] == 40.0);
    CHECK(suite.environments[1].box.hi[0] == 120.0);
    CHECK(suite.environments[2].box.hi[0] == 600.0);
    REQUIRE(suite.regimes.size() == 3);
    CHECK(suite.regimes[0].n_pred == 20);
    CHECK(suite.regimes[0].budget == 8);
    CHECK(suite.regimes[1].n_pred == 300);
    CHECK(suite.regimes[1].budget == 75);
    CHECK(suite.regimes[2].n_pred == 1000);
    CHECK(suite.regimes[2].budget == 200);
    CHECK(suite.model.sigma0 == 12.87);
    CHECK(suite.model.length_scale == 8.33);
    CHECK(suite.model.noise_var == 0.0361);
    CHECK(suite.instances_per_cell == 10);
}
