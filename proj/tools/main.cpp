// Command-line front end: solve one instance, run the benchmark protocol, or
// run the verification checks.
//
// Exit codes: 0 success, 1 usage error, 2 verification failure, 3 I/O error.

#include "fieldsel/bench.hpp"
#include "fieldsel/estimation.hpp"
#include "fieldsel/instance.hpp"
#include "fieldsel/io.hpp"
#include "fieldsel/selection.hpp"
#include "fieldsel/verification.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerificationFailed = 2;
constexpr int kExitIo = 3;

struct SolveOptions {
    std::string method = "both";
    int rho = 0;
    bool matched = false;
    std::string omega_file;
    int budget = 0;
    double sigma0 = 12.87;
    double length_scale = 8.33;
    double noise_var = 0.0361;
    std::uint64_t seed = 0;
    std::string out;
};

struct BenchOptions {
    std::string suite_file;
    std::string out_dir = "bench_out";
    int instances = 0;  // 0 keeps the suite's own value
    int jobs = 1;
};

struct VerifyOptions {
    int sweep_size = 200;
    int resolution = 100000;
};

fieldsel::Box bounding_box(const std::vector<fieldsel::Point>& omega) {
    fieldsel::Box box{omega.front(), omega.front()};
    for (const auto& p : omega) {
        for (int i = 0; i < p.dim(); ++i) {
            box.lo[i] = std::min(box.lo[i], p[i]);
            box.hi[i] = std::max(box.hi[i], p[i]);
        }
    }
    return box;
}

int run_solve(const SolveOptions& opt) {
    fieldsel::CovarianceModel model{opt.sigma0, opt.length_scale, opt.noise_var};
    model.validate();

    fieldsel::ProblemInstance instance;
    std::string omega_source;
    if (!opt.omega_file.empty()) {
        instance.omega = fieldsel::read_omega_csv(opt.omega_file);
        instance.box = bounding_box(instance.omega);
        omega_source = "file:" + opt.omega_file;
    } else {
        // Default generated instance: 20 points uniform over a 40 m square.
        const fieldsel::Box box{fieldsel::Point{0.0, 0.0}, fieldsel::Point{40.0, 40.0}};
        instance = fieldsel::generate_instance(box, 20, 1, model, opt.seed);
        omega_source = "generated(seed=" + std::to_string(opt.seed) + ",n=20,box=[0,40]^2)";
    }
    instance.model = model;
    instance.budget = opt.budget;
    instance.validate();

    fieldsel::RunConfig config;
    config.method = opt.method == "grid"       ? fieldsel::MethodChoice::grid
                    : opt.method == "centroid" ? fieldsel::MethodChoice::centroid
                                               : fieldsel::MethodChoice::both;
    if (opt.rho > 0) config.rho = opt.rho;
    config.matched_resource = opt.matched;
    config.seed = opt.seed;
    const auto reports = fieldsel::run(config, instance);

    nlohmann::json doc;
    doc["instance"] = {{"hash", fieldsel::instance_hash(instance)},
                       {"dim", instance.box.dim()},
                       {"n_pred", instance.omega.size()},
                       {"budget", instance.budget},
                       {"box", {{"lo", instance.box.lo.coords}, {"hi", instance.box.hi.coords}}},
                       {"model",
                        {{"sigma0", model.sigma0},
                         {"length_scale", model.length_scale},
                         {"noise_var", model.noise_var}}},
                       {"omega_source", omega_source}};
    doc["reports"] = nlohmann::json::array();
    for (const auto& report : reports) {
        nlohmann::json entry = fieldsel::report_to_json(report);
        if (report.method == fieldsel::Method::centroid && opt.rho > 0) {
            entry["note"] = "rho ignored: centroid method never builds a grid";
        }
        doc["reports"].push_back(std::move(entry));
    }

    if (opt.out.empty()) {
        std::cout << doc.dump(2) << '\n';
    } else {
        std::ofstream out(opt.out);
        if (!out) throw fieldsel::IoError("cannot write report", opt.out);
        out << doc.dump(2) << '\n';
        if (!out) throw fieldsel::IoError("failed while writing report", opt.out);
    }
    return kExitOk;
}

int run_bench(const BenchOptions& opt) {
    fieldsel::BenchmarkSuite suite = opt.suite_file.empty()
                                         ? fieldsel::default_suite()
                                         : fieldsel::load_suite(opt.suite_file);
    if (opt.instances > 0) suite.instances_per_cell = opt.instances;
    const auto result = fieldsel::bench(suite, opt.out_dir, opt.jobs);
    std::cout << "wrote " << result.rows.size() << " rows to " << opt.out_dir << "/bench.csv\n";
    return kExitOk;
}

int run_verify(const VerifyOptions& opt) {
    const auto results = fieldsel::run_verification(opt.sweep_size, opt.resolution);
    bool all_passed = true;
    for (const auto& check : results) {
        std::printf("[%s] %-30s %s (%.2f s)\n", check.passed ? "PASS" : "FAIL",
                    check.name.c_str(), check.detail.c_str(), check.seconds);
        all_passed = all_passed && check.passed;
    }
    return all_passed ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurement-location selection in a spatial field"};
    app.require_subcommand(1);

    SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "Select measurement locations for one instance");
    solve->add_option("--method", solve_opt.method, "grid, centroid, or both")
        ->check(CLI::IsMember({"grid", "centroid", "both"}))
        ->capture_default_str();
    solve->add_option("--rho", solve_opt.rho, "grid resolution per axis");
    solve->add_flag("--matched", solve_opt.matched, "use rho = ceil(sqrt(2 |omega|))");
    solve->add_option("--omega-file", solve_opt.omega_file,
                      "CSV of prediction locations (header x,y[,z...])");
    solve->add_option("--budget", solve_opt.budget, "number of measurements k")
        ->required()
        ->check(CLI::PositiveNumber);
    solve->add_option("--sigma0", solve_opt.sigma0, "field standard deviation")
        ->capture_default_str();
    solve->add_option("--length-scale", solve_opt.length_scale, "kernel length scale (m)")
        ->capture_default_str();
    solve->add_option("--noise-var", solve_opt.noise_var, "measurement noise variance")
        ->capture_default_str();
    solve->add_option("--seed", solve_opt.seed, "seed for generated instances")
        ->capture_default_str();
    solve->add_option("--out", solve_opt.out, "write the JSON report here (default stdout)");

    BenchOptions bench_opt;
    auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark protocol");
    bench_cmd->add_option("--suite-file", bench_opt.suite_file, "JSON suite description");
    bench_cmd->add_option("--out-dir", bench_opt.out_dir, "output directory")
        ->capture_default_str();
    bench_cmd->add_option("--instances", bench_opt.instances, "override instances per cell");
    bench_cmd->add_option("--jobs", bench_opt.jobs, "parallel instance workers")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    VerifyOptions verify_opt;
    auto* verify = app.add_subcommand("verify", "Run the verification checks");
    verify->add_option("--sweep-size", verify_opt.sweep_size, "randomized sweep size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--resolution", verify_opt.resolution, "dense line-search resolution")
        ->check(CLI::Range(1000, 100000000))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed()) return run_solve(solve_opt);
        if (bench_cmd->parsed()) return run_bench(bench_opt);
        if (verify->parsed()) return run_verify(verify_opt);
    } catch (const fieldsel::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
