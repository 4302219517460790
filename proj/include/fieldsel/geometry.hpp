#pragma once

#include "fieldsel/covariance.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fieldsel {

/// Uniform grid over a box: rho points per dimension, rho^d total.
struct GridSpec {
    int rho = 1;
    Box box;
};

/// Largest grid this library will materialize (rho^d points).
inline constexpr std::uint64_t kMaxGridPoints = std::uint64_t{1} << 26;

/// Grid points of the spec, one per lattice site. With rho >= 2 each axis
/// carries rho equally spaced values including both box endpoints; rho == 1
/// yields the box center. Throws std::invalid_argument when rho^d overflows
/// kMaxGridPoints (the message reports the requested size).
[[nodiscard]] std::vector<Point> make_grid(const GridSpec& spec);

/// Undirected graph over prediction locations: vertices are index-aligned
/// with omega, an edge joins i != j iff ||omega[i] - omega[j]|| <= sqrt(2) L.
class PredictionGraph {
public:
    PredictionGraph(std::vector<Point> vertices, double radius);

    [[nodiscard]] int size() const { return static_cast<int>(vertices_.size()); }
    [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
    [[nodiscard]] bool adjacent(int i, int j) const;
    [[nodiscard]] int degree(int v) const;

    /// Adjacency bitmask of vertex v, packed 64 vertices per word.
    [[nodiscard]] std::span<const std::uint64_t> row(int v) const;
    [[nodiscard]] int words_per_row() const { return words_; }

private:
    std::vector<Point> vertices_;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;  // size() * words_, row-major
};

[[nodiscard]] PredictionGraph build_graph(const CovarianceModel& model,
                                          std::span<const Point> omega);

/// Maximal clique as sorted vertex indices into the graph's vertex list.
struct Clique {
    std::vector<int> members;
    bool operator==(const Clique& other) const = default;
};

/// One greedily grown maximal clique per seed vertex: starting from {v},
/// remaining vertices are scanned in ascending index order and admitted iff
/// adjacent to every current member. Duplicate member sets are removed, so
/// the result has at most |V| cliques, each maximal.
[[nodiscard]] std::vector<Clique> greedy_maximal_cliques(const PredictionGraph& graph);

/// Arithmetic mean of each clique's member locations, deduplicated.
[[nodiscard]] std::vector<Point> clique_centroids(std::span<const Point> omega,
                                                  std::span<const Clique> cliques);

/// Removes points that lie within tol (Euclidean) of an earlier point,
/// keeping first occurrences in order.
[[nodiscard]] std::vector<Point> dedup_points(std::span<const Point> points, double tol);

}  // namespace fieldsel
