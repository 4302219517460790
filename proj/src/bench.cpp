#include "fieldsel/bench.hpp"

#include "fieldsel/estimation.hpp"
#include "fieldsel/io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace fieldsel {

namespace {

Box square_box(double side) {
    return Box{Point{0.0, 0.0}, Point{side, side}};
}

double mean_of(const std::vector<double>& v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mu) * (x - mu);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct InstanceTask {
    std::size_t env_idx;
    std::size_t regime_idx;
    int instance_idx;
};

struct InstanceOutcome {
    std::vector<BenchRow> rows;
    std::optional<EscalationRow> escalation;
    nlohmann::json grid_json;
    nlohmann::json centroid_json;
    std::string json_stem;
};

BenchRow make_row(const std::string& env, const std::string& regime, std::uint64_t seed,
                  const SelectionReport& report, int budget) {
    BenchRow row;
    row.env = env;
    row.regime = regime;
    row.seed = seed;
    row.method = method_name(report.method);
    row.rho = report.rho;
    row.ground_set = report.ground_set_size;
    row.k = budget;
    row.objective = report.objective;
    row.mse = report.total_mse;
    row.seconds = report.elapsed_seconds;
    return row;
}

InstanceOutcome run_cell_instance(const BenchmarkSuite& suite, const InstanceTask& task) {
    const NamedBox& env = suite.environments[task.env_idx];
    const Regime& regime = suite.regimes[task.regime_idx];
    const std::uint64_t seed = cell_instance_seed(suite, env.name, regime.name, task.instance_idx);

    const ProblemInstance instance =
        generate_instance(env.box, regime.n_pred, regime.budget, suite.model, seed);
    const int base_rho = matched_resource_rho(instance.omega.size());

    const SelectionReport grid_report = grid_greedy(instance, base_rho);
    const SelectionReport centroid_report = centroid_greedy(instance);

    InstanceOutcome outcome;
    outcome.rows.push_back(make_row(env.name, regime.name, seed, grid_report, regime.budget));
    outcome.rows.push_back(make_row(env.name, regime.name, seed, centroid_report, regime.budget));

    const std::string hash = instance_hash(instance);
    outcome.json_stem = env.name + "_" + regime.name + "_" + std::to_string(seed);
    outcome.grid_json = report_to_json(grid_report);
    outcome.grid_json["instance_hash"] = hash;
    outcome.centroid_json = report_to_json(centroid_report);
    outcome.centroid_json["instance_hash"] = hash;

    if (suite.escalate) {
        EscalationRow esc;
        esc.env = env.name;
        esc.regime = regime.name;
        esc.seed = seed;
        esc.base_rho = base_rho;
        esc.final_rho = base_rho;
        esc.centroid_objective = centroid_report.objective;
        esc.centroid_seconds = centroid_report.elapsed_seconds;
        esc.grid_objective = grid_report.objective;
        esc.grid_seconds = grid_report.elapsed_seconds;
        esc.parity_reached = grid_report.objective >= suite.parity_tol * centroid_report.objective;

        int rho = base_rho;
        while (!esc.parity_reached && rho < suite.rho_cap) {
            rho = std::min(rho * 2, suite.rho_cap);
            const SelectionReport next = grid_greedy(instance, rho);
            esc.final_rho = rho;
            esc.grid_objective = next.objective;
            esc.grid_seconds = next.elapsed_seconds;
            esc.parity_reached = next.objective >= suite.parity_tol * centroid_report.objective;
        }
        outcome.escalation = esc;
    }
    return outcome;
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write", path);
    out << "env,regime,seed,method,rho,ground_set,k,objective,mse,seconds\n";
    for (const BenchRow& r : rows) {
        out << r.env << ',' << r.regime << ',' << r.seed << ',' << r.method << ',' << r.rho << ','
            << r.ground_set << ',' << r.k << ',' << format_double(r.objective) << ','
            << format_double(r.mse) << ',' << format_double(r.seconds) << '\n';
    }
}

void write_aggregates_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write", path);
    out << "env,regime,method,instances,mse_mean,mse_std,seconds_mean,seconds_std\n";
    // rows arrive sorted, so equal (env, regime, method) triples are found by scan
    std::vector<std::tuple<std::string, std::string, std::string>> keys;
    for (const BenchRow& r : rows) {
        auto key = std::make_tuple(r.env, r.regime, r.method);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    for (const auto& [env, regime, method] : keys) {
        std::vector<double> mses;
        std::vector<double> secs;
        for (const BenchRow& r : rows) {
            if (r.env == env && r.regime == regime && r.method == method) {
                mses.push_back(r.mse);
                secs.push_back(r.seconds);
            }
        }
        out << env << ',' << regime << ',' << method << ',' << mses.size() << ','
            << format_double(mean_of(mses)) << ',' << format_double(sample_std(mses)) << ','
            << format_double(mean_of(secs)) << ',' << format_double(sample_std(secs)) << '\n';
    }
}

void write_escalation_csv(const std::filesystem::path& path,
                          const std::vector<EscalationRow>& rows) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write", path);
    out << "env,regime,seed,base_rho,final_rho,grid_objective,centroid_objective,"
           "grid_seconds,centroid_seconds,status\n";
    for (const EscalationRow& r : rows) {
        out << r.env << ',' << r.regime << ',' << r.seed << ',' << r.base_rho << ','
            << r.final_rho << ',' << format_double(r.grid_objective) << ','
            << format_double(r.centroid_objective) << ',' << format_double(r.grid_seconds) << ','
            << format_double(r.centroid_seconds) << ','
            << (r.parity_reached ? "parity" : "parity_not_reached") << '\n';
    }
}

}  // namespace

void RunConfig::validate() const {
    if (repeats < 1) throw std::invalid_argument("RunConfig: repeats must be >= 1");
    const bool needs_grid = method != MethodChoice::centroid;
    if (needs_grid && !rho.has_value() && !matched_resource) {
        throw std::invalid_argument(
            "RunConfig: grid method requires an explicit rho or matched_resource");
    }
    if (rho.has_value() && *rho < 1) throw std::invalid_argument("RunConfig: rho must be >= 1");
}

std::vector<SelectionReport> run(const RunConfig& config, const ProblemInstance& instance) {
    config.validate();
    instance.validate();
    std::vector<SelectionReport> reports;
    const int rho = config.rho.has_value() ? *config.rho
                                           : matched_resource_rho(instance.omega.size());
    for (int r = 0; r < config.repeats; ++r) {
        if (config.method != MethodChoice::centroid) {
            reports.push_back(grid_greedy(instance, rho));
        }
        if (config.method != MethodChoice::grid) {
            reports.push_back(centroid_greedy(instance));
        }
    }
    return reports;
}

void BenchmarkSuite::validate() const {
    model.validate();
    if (environments.empty()) throw std::invalid_argument("BenchmarkSuite: no environments");
    if (regimes.empty()) throw std::invalid_argument("BenchmarkSuite: no regimes");
    if (instances_per_cell < 1) {
        throw std::invalid_argument("BenchmarkSuite: instances_per_cell must be >= 1");
    }
    if (rho_cap < 1) throw std::invalid_argument("BenchmarkSuite: rho_cap must be >= 1");
    if (!(parity_tol > 0.0 && parity_tol <= 1.0)) {
        throw std::invalid_argument("BenchmarkSuite: parity_tol must be in (0, 1]");
    }
    for (const NamedBox& env : environments) env.box.validate();
    for (const Regime& regime : regimes) {
        if (regime.n_pred < 1 || regime.budget < 1) {
            throw std::invalid_argument("BenchmarkSuite: regime sizes must be >= 1");
        }
    }
}

BenchmarkSuite default_suite() {
    BenchmarkSuite suite;
    suite.environments = {{"small", square_box(40.0)},
                          {"med", square_box(120.0)},
                          {"large", square_box(600.0)}};
    suite.regimes = {{"sparse", 20, 8}, {"moderate", 300, 75}, {"dense", 1000, 200}};
    suite.model = CovarianceModel{12.87, 8.33, 0.0361};
    suite.instances_per_cell = 10;
    return suite;
}

BenchmarkSuite load_suite(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open suite file", path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("suite file is not valid JSON (") + e.what() + ")", path);
    }

    BenchmarkSuite suite = default_suite();
    if (doc.contains("model")) {
        const auto& m = doc["model"];
        suite.model.sigma0 = m.value("sigma0", suite.model.sigma0);
        suite.model.length_scale = m.value("length_scale", suite.model.length_scale);
        suite.model.noise_var = m.value("noise_var", suite.model.noise_var);
    }
    if (doc.contains("environments")) {
        suite.environments.clear();
        for (const auto& e : doc["environments"]) {
            NamedBox env;
            env.name = e.at("name").get<std::string>();
            env.box.lo = Point{e.at("lo").get<std::vector<double>>()};
            env.box.hi = Point{e.at("hi").get<std::vector<double>>()};
            suite.environments.push_back(std::move(env));
        }
    }
    if (doc.contains("regimes")) {
        suite.regimes.clear();
        for (const auto& r : doc["regimes"]) {
            suite.regimes.push_back(Regime{r.at("name").get<std::string>(),
                                           r.at("n_pred").get<int>(), r.at("budget").get<int>()});
        }
    }
    suite.instances_per_cell = doc.value("instances_per_cell", suite.instances_per_cell);
    suite.base_seed = doc.value("base_seed", suite.base_seed);
    suite.escalate = doc.value("escalate", suite.escalate);
    suite.rho_cap = doc.value("rho_cap", suite.rho_cap);
    suite.parity_tol = doc.value("parity_tol", suite.parity_tol);
    suite.validate();
    return suite;
}

std::uint64_t cell_instance_seed(const BenchmarkSuite& suite, const std::string& env_name,
                                 const std::string& regime_name, int index) {
    return suite.base_seed + fnv1a(env_name + ":" + regime_name) + static_cast<std::uint64_t>(index);
}

BenchResult bench(const BenchmarkSuite& suite, const std::filesystem::path& out_dir, int jobs) {
    suite.validate();
    if (jobs < 1) throw std::invalid_argument("bench: jobs must be >= 1");
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "runs", ec);
    if (ec) throw IoError("cannot create output directory", out_dir);

    std::vector<InstanceTask> tasks;
    for (std::size_t e = 0; e < suite.environments.size(); ++e) {
        for (std::size_t r = 0; r < suite.regimes.size(); ++r) {
            for (int i = 0; i < suite.instances_per_cell; ++i) tasks.push_back({e, r, i});
        }
    }

    // Warm-up so allocator and thread-pool start-up costs stay out of the
    // first timed run.
    {
        const ProblemInstance warm =
            generate_instance(square_box(10.0), 12, 4, suite.model, suite.base_seed);
        (void)grid_greedy(warm, 5);
        (void)centroid_greedy(warm);
    }

    std::vector<InstanceOutcome> outcomes(tasks.size());
    if (jobs == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            outcomes[t] = run_cell_instance(suite, tasks[t]);
        }
    } else {
        // Split sweep threads across workers so parallel cells do not
        // oversubscribe the machine.
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const int prev_threads = sweep_threads();
        set_sweep_threads(std::max(1, static_cast<int>(hw) / jobs));
        std::atomic<std::size_t> cursor{0};
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        std::atomic<bool> failed{false};
        std::string error_message;
        std::mutex error_mutex;
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&]() {
                while (true) {
                    const std::size_t t = cursor.fetch_add(1);
                    if (t >= tasks.size() || failed.load()) break;
                    try {
                        outcomes[t] = run_cell_instance(suite, tasks[t]);
                    } catch (const std::exception& e) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        failed.store(true);
                        error_message = e.what();
                    }
                }
            });
        }
        for (auto& worker : workers) worker.join();
        set_sweep_threads(prev_threads);
        if (failed.load()) throw std::runtime_error("bench worker failed: " + error_message);
    }

    BenchResult result;
    for (auto& outcome : outcomes) {
        for (auto& row : outcome.rows) result.rows.push_back(std::move(row));
        if (outcome.escalation.has_value()) result.escalations.push_back(*outcome.escalation);
        std::ofstream grid_out(out_dir / "runs" / (outcome.json_stem + "_grid.json"));
        grid_out << outcome.grid_json.dump(2) << '\n';
        std::ofstream centroid_out(out_dir / "runs" / (outcome.json_stem + "_centroid.json"));
        centroid_out << outcome.centroid_json.dump(2) << '\n';
    }

    auto row_key = [](const BenchRow& r) {
        return std::make_tuple(r.env, r.regime, r.seed, r.method);
    };
    std::sort(result.rows.begin(), result.rows.end(),
              [&](const BenchRow& a, const BenchRow& b) { return row_key(a) < row_key(b); });
    std::sort(result.escalations.begin(), result.escalations.end(),
              [](const EscalationRow& a, const EscalationRow& b) {
                  return std::make_tuple(a.env, a.regime, a.seed) <
                         std::make_tuple(b.env, b.regime, b.seed);
              });

    write_bench_csv(out_dir / "bench.csv", result.rows);
    write_aggregates_csv(out_dir / "aggregates.csv", result.rows);
    if (suite.escalate) write_escalation_csv(out_dir / "escalation.csv", result.escalations);
    return result;
}

}  // namespace fieldsel
