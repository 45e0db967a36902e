// Independent oracles and meters: brute-force metric oracles for trees
// and polygons, spanning-ratio certification, size/complexity/Steiner
// accounting, and scaling-exponent fits.
#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geospan/core.hpp"
#include "geospan/geometry.hpp"

namespace geospan {

// ── Reports ─────────────────────────────────────────────────────────

struct RatioReport {
    double max_ratio = 0.0;
    int argmax_a = -1, argmax_b = -1;  // site node indices
    double bound = 0.0;
    bool pass = false;
    bool exhaustive = true;
    std::vector<std::vector<double>> pair_table;  // optional, small n only
};

struct Measure {
    int size = 0;
    long long complexity = 0;
    int steiner_count = 0;
    double runtime_ms = 0.0;
};

struct ExperimentRecord {
    std::string family;
    int n = 0, m = 0, k = 0, t = 0;
    Measure measure;
    double max_ratio = 0.0;
};

// ── Spanner-side distances ──────────────────────────────────────────

/// Exact shortest-path distances between all site pairs over the link
/// graph; Steiner nodes are free intermediates. Indexed by position in
/// site_nodes().
inline std::vector<std::vector<double>> spanner_distances(const SpannerGraph& g) {
    auto sites = g.site_nodes();
    LinkGraph lg(g);
    std::vector<std::vector<double>> table(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) {
        auto dist = lg.distances_from(sites[i]);
        table[i].resize(sites.size());
        for (size_t j = 0; j < sites.size(); ++j) table[i][j] = dist[sites[j]];
    }
    return table;
}

/// Second route for cross-checking spanner_distances: Floyd-Warshall
/// over the full node set.
inline std::vector<std::vector<double>> spanner_distances_floyd(const SpannerGraph& g) {
    const double inf = std::numeric_limits<double>::infinity();
    int v = static_cast<int>(g.nodes().size());
    std::vector<std::vector<double>> d(v, std::vector<double>(v, inf));
    for (int i = 0; i < v; ++i) d[i][i] = 0.0;
    for (const auto& l : g.links()) {
        d[l.a][l.b] = std::min(d[l.a][l.b], l.length);
        d[l.b][l.a] = d[l.a][l.b];
    }
    for (int mid = 0; mid < v; ++mid)
        for (int i = 0; i < v; ++i) {
            if (d[i][mid] == inf) continue;
            for (int j = 0; j < v; ++j)
                if (d[i][mid] + d[mid][j] < d[i][j]) d[i][j] = d[i][mid] + d[mid][j];
        }
    auto sites = g.site_nodes();
    std::vector<std::vector<double>> table(sites.size(), std::vector<double>(sites.size()));
    for (size_t i = 0; i < sites.size(); ++i)
        for (size_t j = 0; j < sites.size(); ++j) table[i][j] = d[sites[i]][sites[j]];
    return table;
}

// ── Ratio certification ─────────────────────────────────────────────

/// Exhaustive (or sampled beyond the per-metric cap) maximum of
/// d_G(p,q)/d(p,q) over site pairs, judged against the bound with
/// relative tolerance 1e-9. The metric oracle is indexed like
/// site_nodes(); pairs at metric distance zero are rejected.
inline RatioReport check_ratio(const SpannerGraph& g,
                               const std::function<double(int, int)>& metric, double bound,
                               bool keep_table = false) {
    auto sites = g.site_nodes();
    int n = static_cast<int>(sites.size());
    RatioReport report;
    report.bound = bound;
    int cap = g.metric() == MetricTag::Polygon ? 128 : 512;
    report.exhaustive = n <= cap;

    LinkGraph lg(g);
    auto consider = [&](int i, int j, double dg) {
        double d = metric(i, j);
        if (!(d > 0.0)) throw input_error("coincident sites are not allowed");
        double ratio = dg / d;
        if (ratio > report.max_ratio) {
            report.max_ratio = ratio;
            report.argmax_a = sites[i];
            report.argmax_b = sites[j];
        }
    };

    if (report.exhaustive) {
        if (keep_table && n <= 512) report.pair_table.assign(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) {
            auto dist = lg.distances_from(sites[i]);
            for (int j = i + 1; j < n; ++j) {
                consider(i, j, dist[sites[j]]);
                if (!report.pair_table.empty()) {
                    report.pair_table[i][j] = dist[sites[j]];
                    report.pair_table[j][i] = dist[sites[j]];
                }
            }
        }
    } else {
        std::mt19937_64 rng(1234577);
        std::uniform_int_distribution<int> pick(0, n - 1);
        std::map<int, std::vector<double>> cache;
        for (int s = 0; s < 10000; ++s) {
            int i = pick(rng), j = pick(rng);
            if (i == j) continue;
            auto it = cache.find(i);
            if (it == cache.end()) it = cache.emplace(i, lg.distances_from(sites[i])).first;
            consider(i, j, it->second[sites[j]]);
        }
    }
    report.pass = report.max_ratio <= bound * (1.0 + kRelTol);
    return report;
}

/// Ratio check for a single-tree spanner against the tree metric.
inline RatioReport check_tree_ratio(const SpannerGraph& g, const EdgeWeightedTree& tree,
                                    double bound) {
    auto sites = g.site_nodes();
    return check_ratio(
        g,
        [&](int i, int j) {
            return tree.tree_distance(g.nodes()[sites[i]].host.vertex,
                                      g.nodes()[sites[j]].host.vertex);
        },
        bound);
}

/// Per-tree ratio check for a forest spanner; cross-tree pairs carry no
/// guarantee and are skipped.
inline RatioReport check_forest_ratio(const SpannerGraph& g, const Forest& forest, double bound) {
    RatioReport report;
    report.bound = bound;
    report.pass = true;
    LinkGraph lg(g);
    for (size_t tree_idx = 0; tree_idx < forest.trees.size(); ++tree_idx) {
        std::vector<int> nodes;
        for (int i = 0; i < static_cast<int>(g.nodes().size()); ++i) {
            const auto& node = g.nodes()[i];
            if (node.kind == NodeKind::Site && node.tree == static_cast<int>(tree_idx))
                nodes.push_back(i);
        }
        const EdgeWeightedTree& tree = forest.trees[tree_idx];
        for (size_t i = 0; i < nodes.size(); ++i) {
            auto dist = lg.distances_from(nodes[i]);
            for (size_t j = i + 1; j < nodes.size(); ++j) {
                double d = tree.tree_distance(g.nodes()[nodes[i]].host.vertex,
                                              g.nodes()[nodes[j]].host.vertex);
                if (!(d > 0.0)) throw input_error("coincident sites are not allowed");
                double ratio = dist[nodes[j]] / d;
                if (ratio > report.max_ratio) {
                    report.max_ratio = ratio;
                    report.argmax_a = nodes[i];
                    report.argmax_b = nodes[j];
                }
            }
        }
    }
    report.pass = report.max_ratio <= bound * (1.0 + kRelTol);
    return report;
}

// ── Measures ────────────────────────────────────────────────────────

inline Measure measure(const SpannerGraph& g) {
    Measure out;
    out.size = static_cast<int>(g.links().size());
    for (const auto& l : g.links()) out.complexity += l.complexity;
    out.steiner_count = g.steiner_count();
    return out;
}

// ── Shared link validator ───────────────────────────────────────────

/// Re-derives every link's length and complexity from its realized path
/// and the host metric; throws on any mismatch.
inline void validate_tree_spanner_links(const SpannerGraph& g,
                                        const std::function<const EdgeWeightedTree&(int)>& tree_of) {
    for (const auto& l : g.links()) {
        check(l.a != l.b, "no self links");
        const auto& path = l.path.tree_points;
        check(path.size() >= 2, "realized path present");
        const EdgeWeightedTree& tree = tree_of(g.nodes()[l.a].tree);
        double len = 0.0;
        int cx = 0;
        for (size_t i = 1; i < path.size(); ++i) {
            if (path[i - 1].on_vertex() && path[i].on_vertex()) {
                VertexId a = path[i - 1].vertex, b = path[i].vertex;
                EdgeId pe = tree.parent_edge(tree.depth(a) > tree.depth(b) ? a : b);
                check(pe >= 0, "path step follows an edge");
                len += tree.edge(pe).weight;
                cx += tree.edge(pe).synthetic ? 0 : 1;
            } else {
                len += tree_point_distance(tree, path[i - 1], path[i]);
                ++cx;
            }
        }
        check(approx_eq(len, l.length, 1e-12), "link length equals metric length of its path");
        check(cx == l.complexity, "link complexity equals path edge count");
        check(l.complexity >= 1 || l.length == 0.0, "links carry at least one segment");
    }
}

/// When a positive scale is supplied (the host polygon's extent), the
/// segment count is re-derived from the polyline with the same
/// collinearity rule used at construction.
inline void validate_polygon_spanner_links(const SpannerGraph& g, double scale = 0.0) {
    for (const auto& l : g.links()) {
        check(l.a != l.b, "no self links");
        const auto& poly = l.path.polyline;
        check(poly.size() >= 2, "realized polyline present");
        check(approx_eq(polyline_length(poly), l.length, 1e-9), "link length equals polyline length");
        check(l.complexity >= 1, "polygon links carry at least one segment");
        if (scale > 0.0) {
            auto recount = make_geodesic_path(poly, scale);
            check(recount.complexity == l.complexity, "link complexity equals its segment count");
        }
    }
}

// ── Tree metric oracles ─────────────────────────────────────────────

/// All-pairs site distances by a full traversal from every site
/// (independent of EdgeWeightedTree::tree_distance).
inline std::vector<std::vector<double>> tree_site_distance_table(const EdgeWeightedTree& t,
                                                                 const std::vector<VertexId>& sites) {
    std::vector<std::vector<std::pair<VertexId, double>>> adj(t.vertex_count());
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        const TreeEdge& te = t.edge(e);
        adj[te.parent].emplace_back(te.child, te.weight);
        adj[te.child].emplace_back(te.parent, te.weight);
    }
    std::vector<std::vector<double>> table(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) {
        std::vector<double> dist(t.vertex_count(), -1.0);
        std::vector<VertexId> stack{sites[i]};
        dist[sites[i]] = 0.0;
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (auto [w, wt] : adj[v])
                if (dist[w] < 0.0) {
                    dist[w] = dist[v] + wt;
                    stack.push_back(w);
                }
        }
        table[i].resize(sites.size());
        for (size_t j = 0; j < sites.size(); ++j) table[i][j] = dist[sites[j]];
    }
    return table;
}

/// Binary-lifting LCA with leaf-up weight summation; an independent
/// recomputation path that must agree with tree_distance bit for bit.
struct LcaOracle {
    const EdgeWeightedTree* tree;
    std::vector<std::vector<VertexId>> up;
    int levels = 1;

    explicit LcaOracle(const EdgeWeightedTree& t) : tree(&t) {
        int m = t.vertex_count();
        while ((1 << levels) < std::max(m, 2)) ++levels;
        up.assign(levels, std::vector<VertexId>(m, -1));
        for (VertexId v = 0; v < m; ++v) up[0][v] = t.parent(v);
        for (int l = 1; l < levels; ++l)
            for (VertexId v = 0; v < m; ++v)
                up[l][v] = up[l - 1][v] < 0 ? -1 : up[l - 1][up[l - 1][v]];
    }

    VertexId lca(VertexId a, VertexId b) const {
        const auto& t = *tree;
        if (t.depth(a) < t.depth(b)) std::swap(a, b);
        int diff = t.depth(a) - t.depth(b);
        for (int l = 0; l < levels; ++l)
            if (diff & (1 << l)) a = up[l][a];
        if (a == b) return a;
        for (int l = levels - 1; l >= 0; --l)
            if (up[l][a] != up[l][b]) {
                a = up[l][a];
                b = up[l][b];
            }
        return up[0][a];
    }

    double distance(VertexId a, VertexId b) const {
        VertexId meet = lca(a, b);
        double sum_a = 0.0, sum_b = 0.0;
        for (VertexId v = a; v != meet; v = tree->parent(v)) sum_a += tree->edge(tree->parent_edge(v)).weight;
        for (VertexId v = b; v != meet; v = tree->parent(v)) sum_b += tree->edge(tree->parent_edge(v)).weight;
        return sum_a + sum_b;
    }

    int complexity(VertexId a, VertexId b) const {
        VertexId meet = lca(a, b);
        return tree->depth(a) + tree->depth(b) - 2 * tree->depth(meet);
    }
};

// ── Polygon metric oracle ───────────────────────────────────────────

/// Geodesic distances by Dijkstra over the visibility graph; the
/// independent counterpart to the funnel implementation.
class VisibilityOracle {
public:
    VisibilityOracle(const SimplePolygon& poly, const std::vector<Point2>& extra_points)
        : poly_(&poly) {
        for (const auto& v : poly.pts) points_.push_back(v);
        base_count_ = static_cast<int>(points_.size());
        for (const auto& p : extra_points) points_.push_back(p);
        int v = static_cast<int>(points_.size());
        adj_.resize(v);
        for (int i = 0; i < v; ++i)
            for (int j = i + 1; j < v; ++j)
                if (segment_inside(poly, points_[i], points_[j])) {
                    double w = dist(points_[i], points_[j]);
                    adj_[i].emplace_back(j, w);
                    adj_[j].emplace_back(i, w);
                }
    }

    /// Distance table over the extra points.
    std::vector<std::vector<double>> extra_table() const {
        int extras = static_cast<int>(points_.size()) - base_count_;
        std::vector<std::vector<double>> table(extras);
        for (int i = 0; i < extras; ++i) {
            auto d = dijkstra(base_count_ + i);
            table[i].resize(extras);
            for (int j = 0; j < extras; ++j) table[i][j] = d[base_count_ + j];
        }
        return table;
    }

    /// Distance between two ad-hoc points.
    double distance(const Point2& a, const Point2& b) const {
        if (segment_inside(*poly_, a, b)) return dist(a, b);
        int v = static_cast<int>(points_.size());
        std::vector<std::vector<std::pair<int, double>>> adj = adj_;
        adj.resize(v + 2);
        for (int i = 0; i < v; ++i) {
            if (segment_inside(*poly_, a, points_[i])) {
                double w = dist(a, points_[i]);
                adj[v].emplace_back(i, w);
                adj[i].emplace_back(v, w);
            }
            if (segment_inside(*poly_, b, points_[i])) {
                double w = dist(b, points_[i]);
                adj[v + 1].emplace_back(i, w);
                adj[i].emplace_back(v + 1, w);
            }
        }
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> d(v + 2, inf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[v] = 0.0;
        pq.emplace(0.0, v);
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d[u]) continue;
            for (auto [w, len] : adj[u])
                if (du + len < d[w]) {
                    d[w] = du + len;
                    pq.emplace(d[w], w);
                }
        }
        return d[v + 1];
    }

private:
    std::vector<double> dijkstra(int src) const {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> d(points_.size(), inf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        d[src] = 0.0;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > d[u]) continue;
            for (auto [w, len] : adj_[u])
                if (du + len < d[w]) {
                    d[w] = du + len;
                    pq.emplace(d[w], w);
                }
        }
        return d;
    }

    const SimplePolygon* poly_;
    std::vector<Point2> points_;
    int base_count_ = 0;
    std::vector<std::vector<std::pair<int, double>>> adj_;
};

// ── Scaling fits ────────────────────────────────────────────────────

/// Least-squares slope of log(y) against log(x).
inline double fit_scaling(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 4)
        throw input_error("scaling fit needs at least 4 aligned samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = static_cast<int>(xs.size());
    for (int i = 0; i < n; ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw input_error("scaling fit needs positive samples");
        double lx = std::log(xs[i]);
        double ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double fit_scaling(const std::vector<ExperimentRecord>& records,
                          const std::function<double(const ExperimentRecord&)>& x,
                          const std::function<double(const ExperimentRecord&)>& y) {
    std::vector<double> xs, ys;
    for (const auto& r : records) {
        xs.push_back(x(r));
        ys.push_back(y(r));
    }
    return fit_scaling(xs, ys);
}

}  // namespace geospan
