#include "fieldsel/instance.hpp"

#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace fieldsel {

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= kFnvPrime;
    }
}

void hash_double(std::uint64_t& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    hash_bytes(h, &bits, sizeof(bits));
}

}  // namespace

ProblemInstance generate_instance(const Box& box, int n_pred, int budget,
                                  const CovarianceModel& model, std::uint64_t seed) {
    box.validate();
    model.validate();
    if (n_pred < 1) throw std::invalid_argument("generate_instance: n_pred must be >= 1");

    UniformRng rng(seed);
    ProblemInstance instance;
    instance.box = box;
    instance.budget = budget;
    instance.model = model;
    instance.omega.reserve(static_cast<std::size_t>(n_pred));
    const int d = box.dim();
    for (int i = 0; i < n_pred; ++i) {
        Point p;
        p.coords.resize(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) p[j] = rng.next_in(box.lo[j], box.hi[j]);
        instance.omega.push_back(std::move(p));
    }
    instance.validate();
    return instance;
}

std::string instance_hash(const ProblemInstance& instance) {
    std::uint64_t h = kFnvOffset;
    for (double c : instance.box.lo.coords) hash_double(h, c);
    for (double c : instance.box.hi.coords) hash_double(h, c);
    hash_double(h, instance.model.sigma0);
    hash_double(h, instance.model.length_scale);
    hash_double(h, instance.model.noise_var);
    hash_double(h, static_cast<double>(instance.budget));
    for (const Point& p : instance.omega) {
        for (double c : p.coords) hash_double(h, c);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = kFnvOffset;
    hash_bytes(h, text.data(), text.size());
    return h;
}

}  // namespace fieldsel
