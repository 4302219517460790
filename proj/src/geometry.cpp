#include "fieldsel/geometry.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <string>

namespace fieldsel {

std::vector<Point> make_grid(const GridSpec& spec) {
    spec.box.validate();
    if (spec.rho < 1) throw std::invalid_argument("make_grid: rho must be >= 1");
    const int d = spec.box.dim();

    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= static_cast<std::uint64_t>(spec.rho);
        if (total > kMaxGridPoints) {
            throw std::invalid_argument("make_grid: grid of rho=" + std::to_string(spec.rho) +
                                        " in " + std::to_string(d) + " dimensions exceeds " +
                                        std::to_string(kMaxGridPoints) + " points");
        }
    }

    if (spec.rho == 1) return {spec.box.center()};

    // Per-axis coordinate values, endpoints included.
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        auto& axis = axes[static_cast<std::size_t>(i)];
        axis.resize(static_cast<std::size_t>(spec.rho));
        const double lo = spec.box.lo[i];
        const double step = (spec.box.hi[i] - lo) / static_cast<double>(spec.rho - 1);
        for (int r = 0; r < spec.rho; ++r) axis[static_cast<std::size_t>(r)] = lo + step * r;
        axis.back() = spec.box.hi[i];
    }

    std::vector<Point> grid;
    grid.reserve(static_cast<std::size_t>(total));
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    Point p;
    p.coords.resize(static_cast<std::size_t>(d));
    for (std::uint64_t count = 0; count < total; ++count) {
        for (int i = 0; i < d; ++i) {
            p[i] = axes[static_cast<std::size_t>(i)][static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])];
        }
        grid.push_back(p);
        for (int i = d - 1; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < spec.rho) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
    }
    return grid;
}

PredictionGraph::PredictionGraph(std::vector<Point> vertices, double radius)
    : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("PredictionGraph: no vertices");
    const int n = size();
    const int d = vertices_.front().dim();
    for (const Point& v : vertices_) {
        if (v.dim() != d) throw std::invalid_argument("PredictionGraph: dimension mismatch");
    }
    words_ = (n + 63) / 64;
    bits_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(words_), 0);
    const double r2 = radius * radius;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            // Threshold inclusive: boundary pairs belong with the connected case.
            if (squared_distance(vertices_[static_cast<std::size_t>(i)],
                                 vertices_[static_cast<std::size_t>(j)]) <= r2) {
                bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j / 64)] |=
                    std::uint64_t{1} << (j % 64);
                bits_[static_cast<std::size_t>(j) * words_ + static_cast<std::size_t>(i / 64)] |=
                    std::uint64_t{1} << (i % 64);
            }
        }
    }
}

bool PredictionGraph::adjacent(int i, int j) const {
    return (bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j / 64)] >>
            (j % 64)) &
           1U;
}

int PredictionGraph::degree(int v) const {
    int deg = 0;
    for (std::uint64_t word : row(v)) deg += std::popcount(word);
    return deg;
}

std::span<const std::uint64_t> PredictionGraph::row(int v) const {
    return {bits_.data() + static_cast<std::size_t>(v) * words_, static_cast<std::size_t>(words_)};
}

PredictionGraph build_graph(const CovarianceModel& model, std::span<const Point> omega) {
    if (omega.empty()) throw std::invalid_argument("build_graph: omega must be non-empty");
    return PredictionGraph(std::vector<Point>(omega.begin(), omega.end()), model.clique_radius());
}

std::vector<Clique> greedy_maximal_cliques(const PredictionGraph& graph) {
    const int n = graph.size();
    const int words = graph.words_per_row();
    std::set<std::vector<int>> seen;
    std::vector<Clique> cliques;
    std::vector<std::uint64_t> common(static_cast<std::size_t>(words));

    for (int seed = 0; seed < n; ++seed) {
        auto seed_row = graph.row(seed);
        std::copy(seed_row.begin(), seed_row.end(), common.begin());
        std::vector<int> members{seed};
        // common holds the vertices adjacent to every current member; a set
        // bit at u means u can join. Scanning u in ascending order makes the
        // grown clique deterministic.
        for (int u = 0; u < n; ++u) {
            if (!((common[static_cast<std::size_t>(u / 64)] >> (u % 64)) & 1U)) continue;
            members.push_back(u);
            auto u_row = graph.row(u);
            for (int w = 0; w < words; ++w) {
                common[static_cast<std::size_t>(w)] &= u_row[static_cast<std::size_t>(w)];
            }
        }
        std::sort(members.begin(), members.end());
        if (seen.insert(members).second) {
            cliques.push_back(Clique{std::move(members)});
        }
    }
    return cliques;
}

std::vector<Point> clique_centroids(std::span<const Point> omega, std::span<const Clique> cliques) {
    std::vector<Point> centroids;
    centroids.reserve(cliques.size());
    for (const Clique& clique : cliques) {
        if (clique.members.empty()) throw std::invalid_argument("clique_centroids: empty clique");
        const int d = omega[static_cast<std::size_t>(clique.members.front())].dim();
        Point c;
        c.coords.assign(static_cast<std::size_t>(d), 0.0);
        for (int idx : clique.members) {
            const Point& y = omega[static_cast<std::size_t>(idx)];
            for (int i = 0; i < d; ++i) c[i] += y[i];
        }
        const double inv = 1.0 / static_cast<double>(clique.members.size());
        for (int i = 0; i < d; ++i) c[i] *= inv;
        centroids.push_back(std::move(c));
    }
    return dedup_points(centroids, 1e-9);
}

std::vector<Point> dedup_points(std::span<const Point> points, double tol) {
    std::vector<Point> kept;
    kept.reserve(points.size());
    const double t2 = tol * tol;
    for (const Point& p : points) {
        bool dup = false;
        for (const Point& q : kept) {
            if (squared_distance(p, q) <= t2) {
                dup = true;
                break;
            }
        }
        if (!dup) kept.push_back(p);
    }
    return kept;
}

}  // namespace fieldsel
