#pragma once

#include "fieldsel/selection.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace fieldsel {

/// Deterministic uniform draws with a platform-independent bit stream:
/// std::mt19937_64 (whose output sequence is fixed by the standard) mapped to
/// [0, 1) through the top 53 bits. Identical seeds give identical values on
/// every platform; std::uniform_real_distribution is avoided because its
/// algorithm is implementation-defined.
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    std::uint64_t next_raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// n_pred prediction points drawn i.i.d. uniform over the box,
/// coordinate by coordinate in point order.
[[nodiscard]] ProblemInstance generate_instance(const Box& box, int n_pred, int budget,
                                                const CovarianceModel& model,
                                                std::uint64_t seed);

/// FNV-1a over the instance's defining bytes (box, model, budget, omega
/// coordinates), as a fixed-width hex string. Reports generated from the
/// same instance share this value.
[[nodiscard]] std::string instance_hash(const ProblemInstance& instance);

/// FNV-1a of a string, for deriving per-cell benchmark seeds from names.
[[nodiscard]] std::uint64_t fnv1a(const std::string& text);

}  // namespace fieldsel
