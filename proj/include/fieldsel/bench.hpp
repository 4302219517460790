#pragma once

#include "fieldsel/instance.hpp"
#include "fieldsel/selection.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fieldsel {

enum class MethodChoice { grid, centroid, both };

/// One solver invocation as requested from the CLI.
struct RunConfig {
    MethodChoice method = MethodChoice::both;
    std::optional<int> rho;        // explicit grid resolution
    bool matched_resource = false; // rho = ceil(sqrt(2 |omega|)) per axis
    std::uint64_t seed = 0;        // instance-generation seed (when omega is generated)
    int repeats = 1;               // timing repeats per method
    std::filesystem::path output_path;

    /// Grid runs need a resolution from somewhere; throws otherwise.
    void validate() const;
};

/// Reports for one instance under a config, in method order (grid first),
/// repeated `repeats` times each. Centroid runs ignore any configured rho.
[[nodiscard]] std::vector<SelectionReport> run(const RunConfig& config,
                                               const ProblemInstance& instance);

struct NamedBox {
    std::string name;
    Box box;
};

struct Regime {
    std::string name;
    int n_pred = 1;
    int budget = 1;
};

/// Benchmark protocol: every environment crossed with every point regime,
/// instances_per_cell random instances per cell, both methods at matched
/// resources, plus a grid-resolution escalation pass per instance.
struct BenchmarkSuite {
    std::vector<NamedBox> environments;
    std::vector<Regime> regimes;
    CovarianceModel model;
    int instances_per_cell = 10;
    std::uint64_t base_seed = 42;
    bool escalate = true;
    int rho_cap = 512;
    double parity_tol = 0.999;  // grid objective >= tol * centroid objective

    void validate() const;
};

/// Field defaults: 40/120/600 meter square environments, sparse (20, 8),
/// moderate (300, 75) and dense (1000, 200) regimes, and the organic-matter
/// field model sigma0 = 12.87, L = 8.33 m, noise variance 0.0361.
[[nodiscard]] BenchmarkSuite default_suite();

/// Parses a suite from JSON; missing fields keep the defaults above.
[[nodiscard]] BenchmarkSuite load_suite(const std::filesystem::path& path);

/// Seed of instance index i in a named cell, derived so rows stay stable
/// when cells are added or removed.
[[nodiscard]] std::uint64_t cell_instance_seed(const BenchmarkSuite& suite,
                                               const std::string& env_name,
                                               const std::string& regime_name, int index);

struct BenchRow {
    std::string env;
    std::string regime;
    std::uint64_t seed = 0;
    std::string method;
    int rho = 0;
    std::size_t ground_set = 0;
    int k = 0;
    double objective = 0.0;
    double mse = 0.0;
    double seconds = 0.0;
};

struct EscalationRow {
    std::string env;
    std::string regime;
    std::uint64_t seed = 0;
    int base_rho = 0;
    int final_rho = 0;
    double grid_objective = 0.0;
    double centroid_objective = 0.0;
    double grid_seconds = 0.0;      // time of the final grid resolution only
    double centroid_seconds = 0.0;
    bool parity_reached = true;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    std::vector<EscalationRow> escalations;
};

/// Runs the suite and writes bench.csv, aggregates.csv, escalation.csv and
/// runs/*.json under out_dir. Rows are sorted by (env, regime, seed, method)
/// for diffability. jobs > 1 distributes instances over a worker pool;
/// numeric results are unaffected by the job count.
BenchResult bench(const BenchmarkSuite& suite, const std::filesystem::path& out_dir,
                  int jobs = 1);

}  // namespace fieldsel
