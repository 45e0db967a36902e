// Core data model: edge-weighted rooted trees, forests, Steiner points,
// and spanner graphs, plus the elementary tree queries shared by every
// construction module.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace geospan {

// ── Errors ──────────────────────────────────────────────────────────

/// Malformed or out-of-contract input (CLI exit code 2).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Structurally valid input on which the operation is undefined
/// (e.g. balancing edge of a single-site tree).
struct degenerate_input_error : input_error {
    explicit degenerate_input_error(const std::string& msg) : input_error(msg) {}
};

/// Operation not supported for this metric or representation.
struct unsupported_error : std::runtime_error {
    explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline void check(bool cond, const char* msg) {
    if (!cond) throw std::logic_error(std::string("internal invariant violated: ") + msg);
}

constexpr double kRelTol = 1e-9;

inline bool approx_le(double a, double b, double tol = kRelTol) {
    return a <= b + tol * std::max({std::abs(a), std::abs(b), 1.0});
}

inline bool approx_eq(double a, double b, double tol = kRelTol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1.0});
}

// ── Edge-weighted rooted tree ───────────────────────────────────────

using VertexId = int;
using EdgeId = int;

struct TreeEdge {
    VertexId parent = -1;
    VertexId child = -1;
    double weight = 0.0;
    bool synthetic = false;  // zero-weight anchor leaves; excluded from complexity
};

/// Rooted tree with positive edge weights and a fixed left-to-right
/// child order (the order defines the in-order traversal). Sites live
/// at leaves.
class EdgeWeightedTree {
public:
    EdgeWeightedTree() = default;

    VertexId add_vertex() {
        parent_edge_.push_back(-1);
        child_edges_.emplace_back();
        is_site_.push_back(false);
        depth_.push_back(0);
        if (root_ < 0) root_ = 0;
        return static_cast<VertexId>(parent_edge_.size() - 1);
    }

    EdgeId add_edge(VertexId parent, VertexId child, double weight, bool synthetic = false) {
        require_vertex(parent);
        require_vertex(child);
        if (!synthetic && !(weight > 0.0)) throw input_error("edge weight must be strictly positive");
        if (synthetic && weight < 0.0) throw input_error("synthetic edge weight must be nonnegative");
        if (parent_edge_[child] >= 0 || child == root_)
            throw input_error("vertex already attached");
        EdgeId e = static_cast<EdgeId>(edges_.size());
        edges_.push_back(TreeEdge{parent, child, weight, synthetic});
        parent_edge_[child] = e;
        child_edges_[parent].push_back(e);
        depth_[child] = depth_[parent] + 1;
        return e;
    }

    void set_site(VertexId v, bool site = true) {
        require_vertex(v);
        is_site_[v] = site;
    }

    void set_root(VertexId v) {
        require_vertex(v);
        root_ = v;
    }

    VertexId root() const { return root_; }
    int vertex_count() const { return static_cast<int>(parent_edge_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const TreeEdge& edge(EdgeId e) const { return edges_.at(e); }
    EdgeId parent_edge(VertexId v) const { require_vertex(v); return parent_edge_[v]; }
    const std::vector<EdgeId>& child_edges(VertexId v) const { require_vertex(v); return child_edges_[v]; }
    bool is_site(VertexId v) const { require_vertex(v); return is_site_[v]; }
    int depth(VertexId v) const { require_vertex(v); return depth_[v]; }
    bool is_leaf(VertexId v) const { require_vertex(v); return child_edges_[v].empty(); }

    VertexId parent(VertexId v) const {
        EdgeId e = parent_edge(v);
        return e < 0 ? -1 : edges_[e].parent;
    }

    int site_count() const {
        int n = 0;
        for (bool s : is_site_) n += s ? 1 : 0;
        return n;
    }

    /// Depth-first traversal respecting stored child order; returns all
    /// vertices in visit order.
    std::vector<VertexId> in_order_vertices() const {
        std::vector<VertexId> out;
        if (root_ < 0) return out;
        out.reserve(parent_edge_.size());
        std::vector<std::pair<VertexId, size_t>> stack;
        stack.emplace_back(root_, 0);
        out.push_back(root_);
        while (!stack.empty()) {
            auto& [v, idx] = stack.back();
            if (idx < child_edges_[v].size()) {
                VertexId c = edges_[child_edges_[v][idx]].child;
                ++idx;
                out.push_back(c);
                stack.emplace_back(c, 0);
            } else {
                stack.pop_back();
            }
        }
        return out;
    }

    /// Sites in the order the in-order traversal reaches them.
    std::vector<VertexId> in_order_sites() const {
        std::vector<VertexId> out;
        for (VertexId v : in_order_vertices())
            if (is_site_[v]) out.push_back(v);
        return out;
    }

    VertexId lca(VertexId a, VertexId b) const {
        require_vertex(a);
        require_vertex(b);
        while (a != b) {
            if (depth_[a] >= depth_[b]) a = parent(a);
            else b = parent(b);
        }
        return a;
    }

    /// Vertices on the unique a-b path, from a to b inclusive.
    std::vector<VertexId> path_vertices(VertexId a, VertexId b) const {
        VertexId l = lca(a, b);
        std::vector<VertexId> up, down;
        for (VertexId v = a; v != l; v = parent(v)) up.push_back(v);
        up.push_back(l);
        for (VertexId v = b; v != l; v = parent(v)) down.push_back(v);
        up.insert(up.end(), down.rbegin(), down.rend());
        return up;
    }

    /// Sum of weights along the unique a-b path. Summation walks each
    /// endpoint up to the meeting vertex, so identical derivations give
    /// identical bits.
    double tree_distance(VertexId a, VertexId b) const {
        require_vertex(a);
        require_vertex(b);
        double sum_a = 0.0, sum_b = 0.0;
        while (a != b) {
            if (depth_[a] >= depth_[b]) {
                sum_a += edges_[parent_edge_[a]].weight;
                a = parent(a);
            } else {
                sum_b += edges_[parent_edge_[b]].weight;
                b = parent(b);
            }
        }
        return sum_a + sum_b;
    }

    /// Edge count of the unique a-b path. Synthetic zero-weight leaf
    /// edges are construction artifacts and do not count.
    int path_complexity(VertexId a, VertexId b) const {
        require_vertex(a);
        require_vertex(b);
        int cx = 0;
        while (a != b) {
            VertexId& lower = depth_[a] >= depth_[b] ? a : b;
            if (!edges_[parent_edge_[lower]].synthetic) ++cx;
            lower = parent(lower);
        }
        return cx;
    }

    /// Validates the core invariants: one root, connectivity/acyclicity
    /// (implied by the parent structure plus full reachability), strict
    /// positivity of non-synthetic weights, and sites at leaves.
    void validate(bool all_leaves_are_sites = false) const {
        if (root_ < 0) throw input_error("tree has no root");
        if (parent_edge_[root_] >= 0) throw input_error("root has a parent");
        int reached = static_cast<int>(in_order_vertices().size());
        if (reached != vertex_count()) throw input_error("tree is not connected");
        for (const TreeEdge& e : edges_) {
            if (!e.synthetic && !(e.weight > 0.0)) throw input_error("nonpositive edge weight");
        }
        for (VertexId v = 0; v < vertex_count(); ++v) {
            if (is_site_[v] && !is_leaf(v) )
                throw input_error("site is not a leaf");
            if (all_leaves_are_sites && is_leaf(v) && !is_site_[v] && v != root_)
                throw input_error("non-site leaf");
        }
    }

private:
    friend class TreeSurgeon;

    void require_vertex(VertexId v) const {
        if (v < 0 || v >= vertex_count()) throw input_error("unknown vertex id " + std::to_string(v));
    }

    VertexId root_ = -1;
    std::vector<TreeEdge> edges_;
    std::vector<EdgeId> parent_edge_;
    std::vector<std::vector<EdgeId>> child_edges_;
    std::vector<bool> is_site_;
    mutable std::vector<int> depth_;
};

/// Subdivides edge e = (u,v) of weight w at the given fraction: e keeps
/// its id and becomes (u,s) of weight fraction*w; a new edge (s,v) gets
/// weight (1-fraction)*w. All pre-existing pairwise distances are
/// preserved. Returns the new vertex s.
inline VertexId insert_point_on_edge(EdgeWeightedTree& tree, EdgeId e, double fraction);

// EdgeWeightedTree exposes only const accessors for edges; subdivision
// needs a friend-free mutation path, so the tree grants it via a tiny
// builder facade.
class TreeSurgeon {
public:
    static VertexId subdivide(EdgeWeightedTree& t, EdgeId e, double fraction) {
        if (!(fraction > 0.0 && fraction < 1.0))
            throw input_error("fraction must lie strictly between 0 and 1");
        if (e < 0 || e >= t.edge_count()) throw input_error("unknown edge id");
        TreeEdge old = t.edge(e);
        VertexId s = t.add_vertex();
        // Rewire in place: e becomes (u,s); new edge (s,v).
        auto& edges = t.edges_;
        auto& parent_edge = t.parent_edge_;
        auto& depth = t.depth_;
        edges[e].child = s;
        edges[e].weight = fraction * old.weight;
        parent_edge[s] = e;
        t.child_edges_[s].clear();
        EdgeId e2 = static_cast<EdgeId>(edges.size());
        edges.push_back(TreeEdge{s, old.child, (1.0 - fraction) * old.weight, old.synthetic});
        parent_edge[old.child] = e2;
        t.child_edges_[s].push_back(e2);
        depth[s] = depth[old.parent] + 1;
        // Depths below v shift by one.
        std::vector<VertexId> stack{old.child};
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            depth[v] += 1;
            for (EdgeId ce : t.child_edges_[v]) stack.push_back(edges[ce].child);
        }
        return s;
    }

private:
    friend class EdgeWeightedTree;
};

inline VertexId insert_point_on_edge(EdgeWeightedTree& tree, EdgeId e, double fraction) {
    return TreeSurgeon::subdivide(tree, e, fraction);
}

// ── Forest ──────────────────────────────────────────────────────────

/// Ordered list of trees; the order fixes the cross-tree traversal.
struct Forest {
    std::vector<EdgeWeightedTree> trees;

    int site_count() const {
        int n = 0;
        for (const auto& t : trees) n += t.site_count();
        return n;
    }
    int vertex_count() const {
        int n = 0;
        for (const auto& t : trees) n += t.vertex_count();
        return n;
    }
};

// ── Points in a tree (vertices or edge interiors) ───────────────────

/// A point of the tree metric: either a vertex, or an interior point of
/// an edge at parameter frac measured from the parent endpoint.
struct TreePoint {
    VertexId vertex = -1;
    EdgeId edge = -1;
    double frac = 0.0;  // in (0,1) when edge-hosted

    bool on_vertex() const { return vertex >= 0; }
    static TreePoint at_vertex(VertexId v) { return TreePoint{v, -1, 0.0}; }
    static TreePoint on_edge(EdgeId e, double f) { return TreePoint{-1, e, f}; }

    friend bool operator==(const TreePoint& a, const TreePoint& b) {
        return a.vertex == b.vertex && a.edge == b.edge && a.frac == b.frac;
    }
    friend bool operator<(const TreePoint& a, const TreePoint& b) {
        return std::tie(a.vertex, a.edge, a.frac) < std::tie(b.vertex, b.edge, b.frac);
    }
};

/// Distance between two tree points; generalizes tree_distance to edge
/// interiors.
inline double tree_point_distance(const EdgeWeightedTree& t, const TreePoint& a, const TreePoint& b) {
    if (a.on_vertex() && b.on_vertex()) return t.tree_distance(a.vertex, b.vertex);
    if (!a.on_vertex() && !b.on_vertex() && a.edge == b.edge)
        return std::abs(a.frac - b.frac) * t.edge(a.edge).weight;
    if (!a.on_vertex()) {
        const TreeEdge& e = t.edge(a.edge);
        double via_parent = a.frac * e.weight + tree_point_distance(t, TreePoint::at_vertex(e.parent), b);
        double via_child = (1.0 - a.frac) * e.weight + tree_point_distance(t, TreePoint::at_vertex(e.child), b);
        return std::min(via_parent, via_child);
    }
    return tree_point_distance(t, b, a);
}

/// Whether vertex v lies in T(e), the subtree hanging below edge e.
inline bool below_edge(const EdgeWeightedTree& t, EdgeId e, VertexId v) {
    VertexId c = t.edge(e).child;
    while (v >= 0 && t.depth(v) >= t.depth(c)) {
        if (v == c) return true;
        v = t.parent(v);
    }
    return false;
}

// ── Steiner points ──────────────────────────────────────────────────

struct SteinerPoint {
    int id = -1;
    TreePoint host;
    int origin_tree = 0;  // forest / polygon contexts
};

// ── Spanner graph ───────────────────────────────────────────────────

enum class MetricTag { Tree, Forest, Polygon };
enum class NodeKind { Site, Steiner };

struct Point2 {
    double x = 0.0, y = 0.0;
    friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator<(const Point2& a, const Point2& b) {
        return std::tie(a.x, a.y) < std::tie(b.x, b.y);
    }
};

struct SpannerNode {
    NodeKind kind = NodeKind::Site;
    int tree = 0;        // forest tree index (0 for plain trees)
    TreePoint host;      // tree/forest metrics
    int site = -1;       // global site index (polygon) or host vertex id (tree)
    Point2 position{};   // polygon metric
};

/// Realized path of a link: a chain of tree points (tree metrics) or a
/// polyline (polygon metric).
struct LinkPath {
    std::vector<TreePoint> tree_points;
    std::vector<Point2> polyline;
};

struct SpannerLink {
    int a = -1, b = -1;  // node indices, a < b
    double length = 0.0;
    int complexity = 0;
    LinkPath path;
    int prov_tree = -1;  // which forest tree produced the link
    int prov_sub = -1;   // which carved subtree produced the link
};

/// Links between sites and Steiner points; every link carries its
/// realized path, metric length, and complexity.
class SpannerGraph {
public:
    explicit SpannerGraph(MetricTag tag = MetricTag::Tree) : metric_(tag) {}

    MetricTag metric() const { return metric_; }
    const std::vector<SpannerNode>& nodes() const { return nodes_; }
    const std::vector<SpannerLink>& links() const { return links_; }
    std::vector<SpannerLink>& mutable_links() { return links_; }

    int add_node(const SpannerNode& n) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size() - 1);
    }

    /// Node registry keyed by (kind, tree, host) for tree metrics.
    int node_for(NodeKind kind, int tree, const TreePoint& host) {
        auto key = std::make_tuple(static_cast<int>(kind), tree, host);
        auto it = tree_keys_.find(key);
        if (it != tree_keys_.end()) return it->second;
        SpannerNode n;
        n.kind = kind;
        n.tree = tree;
        n.host = host;
        n.site = (kind == NodeKind::Site && host.on_vertex()) ? host.vertex : -1;
        int id = add_node(n);
        tree_keys_.emplace(key, id);
        return id;
    }

    int find_node(NodeKind kind, int tree, const TreePoint& host) const {
        auto it = tree_keys_.find(std::make_tuple(static_cast<int>(kind), tree, host));
        return it == tree_keys_.end() ? -1 : it->second;
    }

    /// Adds an undirected link; self-links are dropped, duplicates keep
    /// the shorter realized path.
    bool add_link(int a, int b, double length, int complexity, LinkPath path,
                  int prov_tree = -1, int prov_sub = -1) {
        if (a == b) return false;
        if (a > b) std::swap(a, b);
        auto key = std::make_pair(a, b);
        auto it = link_keys_.find(key);
        if (it != link_keys_.end()) {
            SpannerLink& existing = links_[it->second];
            if (length < existing.length) {
                existing.length = length;
                existing.complexity = complexity;
                existing.path = std::move(path);
                existing.prov_tree = prov_tree;
                existing.prov_sub = prov_sub;
            }
            return false;
        }
        SpannerLink l;
        l.a = a;
        l.b = b;
        l.length = length;
        l.complexity = complexity;
        l.path = std::move(path);
        l.prov_tree = prov_tree;
        l.prov_sub = prov_sub;
        link_keys_.emplace(key, static_cast<int>(links_.size()));
        links_.push_back(std::move(l));
        return true;
    }

    std::vector<int> site_nodes() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(nodes_.size()); ++i)
            if (nodes_[i].kind == NodeKind::Site) out.push_back(i);
        return out;
    }

    int steiner_count() const {
        int n = 0;
        for (const auto& node : nodes_) n += node.kind == NodeKind::Steiner ? 1 : 0;
        return n;
    }

    void rebuild_index() {
        tree_keys_.clear();
        link_keys_.clear();
        for (int i = 0; i < static_cast<int>(nodes_.size()); ++i) {
            tree_keys_.emplace(std::make_tuple(static_cast<int>(nodes_[i].kind), nodes_[i].tree, nodes_[i].host), i);
        }
        for (int i = 0; i < static_cast<int>(links_.size()); ++i)
            link_keys_.emplace(std::make_pair(links_[i].a, links_[i].b), i);
    }

private:
    MetricTag metric_;
    std::vector<SpannerNode> nodes_;
    std::vector<SpannerLink> links_;
    std::map<std::tuple<int, int, TreePoint>, int> tree_keys_;
    std::map<std::pair<int, int>, int> link_keys_;
};

/// Adjacency view of a spanner's links for shortest-path queries.
struct LinkGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;

    explicit LinkGraph(const SpannerGraph& g) : adj(g.nodes().size()) {
        for (const auto& l : g.links()) {
            adj[l.a].emplace_back(l.b, l.length);
            adj[l.b].emplace_back(l.a, l.length);
        }
    }

    /// Dijkstra over links; unreachable nodes get +infinity.
    std::vector<double> distances_from(int src) const {
        const double inf = std::numeric_limits<double>::infinity();
        std::vector<double> dist(adj.size(), inf);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[src] = 0.0;
        pq.emplace(0.0, src);
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[v]) continue;
            for (auto [w, len] : adj[v]) {
                if (d + len < dist[w]) {
                    dist[w] = d + len;
                    pq.emplace(dist[w], w);
                }
            }
        }
        return dist;
    }
};

/// Computes length/complexity/path for a link between two tree points
/// of one host tree. Synthetic edges contribute length but never
/// complexity.
struct TreeLinkRealizer {
    const EdgeWeightedTree* tree = nullptr;
    int tree_index = 0;

    struct Realized {
        double length = 0.0;
        int complexity = 0;
        LinkPath path;
    };

    Realized realize(const TreePoint& a, const TreePoint& b) const {
        Realized r;
        if (a.on_vertex() && b.on_vertex()) {
            auto verts = tree->path_vertices(a.vertex, b.vertex);
            r.length = tree->tree_distance(a.vertex, b.vertex);
            r.complexity = tree->path_complexity(a.vertex, b.vertex);
            r.path.tree_points.reserve(verts.size());
            for (VertexId v : verts) r.path.tree_points.push_back(TreePoint::at_vertex(v));
            return r;
        }
        // Edge-interior endpoints: partial segments at the ends.
        if (!a.on_vertex() && !b.on_vertex() && a.edge == b.edge) {
            r.length = std::abs(a.frac - b.frac) * tree->edge(a.edge).weight;
            r.complexity = tree->edge(a.edge).synthetic ? 0 : 1;
            r.path.tree_points = {a, b};
            return r;
        }
        // Route via whichever edge endpoints give the shorter total.
        auto attach = [&](const TreePoint& p) -> std::vector<std::pair<VertexId, double>> {
            if (p.on_vertex()) return {{p.vertex, 0.0}};
            const TreeEdge& e = tree->edge(p.edge);
            return {{e.parent, p.frac * e.weight}, {e.child, (1.0 - p.frac) * e.weight}};
        };
        double best = -1.0;
        VertexId best_u = -1, best_v = -1;
        for (auto [u, wa] : attach(a))
            for (auto [v, wb] : attach(b)) {
                double len = wa + tree->tree_distance(u, v) + wb;
                if (best < 0 || len < best) {
                    best = len;
                    best_u = u;
                    best_v = v;
                }
            }
        r.length = best;
        r.complexity = tree->path_complexity(best_u, best_v);
        if (!a.on_vertex() && !tree->edge(a.edge).synthetic) ++r.complexity;
        if (!b.on_vertex() && !tree->edge(b.edge).synthetic) ++r.complexity;
        if (!a.on_vertex()) r.path.tree_points.push_back(a);
        for (VertexId v : tree->path_vertices(best_u, best_v))
            r.path.tree_points.push_back(TreePoint::at_vertex(v));
        if (!b.on_vertex()) r.path.tree_points.push_back(b);
        return r;
    }
};

}  // namespace geospan
