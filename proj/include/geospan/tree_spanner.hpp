// Steiner-free 2t-spanner for an edge-weighted tree: balancing-edge
// split, hierarchical grouping with centers closest to the cut, and
// recursion on both subtrees.
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "geospan/core.hpp"

namespace geospan {

// ── Subtree extraction ──────────────────────────────────────────────

/// A copy of a region of a host tree, with a mapping back to host ids.
struct TreeExtract {
    EdgeWeightedTree tree;
    std::vector<VertexId> host_of;  // extract vertex -> host vertex
};

/// Copies the region reachable from `root` along edges accepted by
/// `take_edge`, preserving child order and site flags.
inline TreeExtract extract_subtree(const EdgeWeightedTree& t, VertexId root,
                                   const std::function<bool(EdgeId)>& take_edge) {
    TreeExtract out;
    std::vector<std::pair<VertexId, VertexId>> stack;  // (host vertex, extract vertex)
    VertexId r = out.tree.add_vertex();
    out.tree.set_root(r);
    out.tree.set_site(r, t.is_site(root));
    out.host_of.push_back(root);
    stack.emplace_back(root, r);
    while (!stack.empty()) {
        auto [hv, ev] = stack.back();
        stack.pop_back();
        // Children pushed in reverse so they are processed in order; order
        // of add_edge is what matters, so attach immediately instead.
        for (EdgeId he : t.child_edges(hv)) {
            if (take_edge && !take_edge(he)) continue;
            const TreeEdge& e = t.edge(he);
            VertexId ec = out.tree.add_vertex();
            out.tree.add_edge(ev, ec, e.weight, e.synthetic);
            out.tree.set_site(ec, t.is_site(e.child));
            out.host_of.push_back(e.child);
            stack.emplace_back(e.child, ec);
        }
    }
    return out;
}

// ── Balancing edge ──────────────────────────────────────────────────

/// Number of sites inside T(e) for every edge.
inline std::vector<int> sites_below_edges(const EdgeWeightedTree& t) {
    std::vector<int> below(t.edge_count(), 0);
    std::vector<int> site_cnt(t.vertex_count(), 0);
    auto order = t.in_order_vertices();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        VertexId v = *it;
        site_cnt[v] += t.is_site(v) ? 1 : 0;
        EdgeId pe = t.parent_edge(v);
        if (pe >= 0) {
            below[pe] = site_cnt[v];
            site_cnt[t.edge(pe).parent] += site_cnt[v];
        }
    }
    return below;
}

/// Edge maximizing min(#sites in T(e), #sites outside); ties to the
/// smallest edge id.
inline EdgeId balancing_edge(const EdgeWeightedTree& t) {
    int n = t.site_count();
    if (n < 2) throw degenerate_input_error("balancing edge needs at least 2 sites");
    auto below = sites_below_edges(t);
    EdgeId best = -1;
    int best_min = -1;
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        int m = std::min(below[e], n - below[e]);
        if (m > best_min) {
            best_min = m;
            best = e;
        }
    }
    check(best >= 0, "balancing edge exists");
    return best;
}

// ── Grouping hierarchy ──────────────────────────────────────────────

struct GroupingNode {
    int lo = 0, hi = 0;   // half-open range into the ordered site sequence
    int center = -1;      // index into the ordered site sequence
    int level = 0;
    std::vector<GroupingNode> children;

    int size() const { return hi - lo; }
};

namespace detail {

/// Smallest integer N with N^t >= len, i.e. ceil(len^(1/t)) computed
/// without floating point.
inline int group_fanout(int len, int t) {
    if (len <= 1) return 1;
    auto pow_ge = [](long long base, int exp, long long target) {
        long long acc = 1;
        for (int i = 0; i < exp; ++i) {
            acc *= base;
            if (acc >= target) return true;
        }
        return acc >= target;
    };
    int n = 1;
    while (!pow_ge(n, t, len)) ++n;
    return n;
}

inline void split_grouping(GroupingNode& node, int fanout, int t,
                           const std::vector<double>& dist_to_cut) {
    int len = node.size();
    if (len <= 1) {
        node.center = node.lo;
        return;
    }
    int chunk = (len <= fanout) ? 1 : (len + fanout - 1) / fanout;
    for (int lo = node.lo; lo < node.hi; lo += chunk) {
        GroupingNode child;
        child.lo = lo;
        child.hi = std::min(lo + chunk, node.hi);
        child.level = node.level + 1;
        split_grouping(child, fanout, t, dist_to_cut);
        node.children.push_back(std::move(child));
    }
    check(node.level < t || node.children.empty(), "grouping depth stays within t");
    node.center = node.children.front().center;
    for (const auto& c : node.children) {
        if (dist_to_cut[c.center] < dist_to_cut[node.center]) node.center = c.center;
    }
}

}  // namespace detail

/// Distances from one vertex to every other vertex, in one sweep over
/// the undirected tree.
inline std::vector<double> distances_from(const EdgeWeightedTree& t, VertexId src) {
    std::vector<std::vector<std::pair<VertexId, double>>> adj(t.vertex_count());
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        const TreeEdge& te = t.edge(e);
        adj[te.parent].emplace_back(te.child, te.weight);
        adj[te.child].emplace_back(te.parent, te.weight);
    }
    std::vector<double> dist(t.vertex_count(), -1.0);
    std::vector<VertexId> stack{src};
    dist[src] = 0.0;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (auto [w, wt] : adj[v]) {
            if (dist[w] < 0.0) {
                dist[w] = dist[v] + wt;
                stack.push_back(w);
            }
        }
    }
    return dist;
}

/// Distance from every site to the cut vertex on its own side of e.
inline std::vector<double> distances_to_cut(const EdgeWeightedTree& t, EdgeId e,
                                            const std::vector<VertexId>& ordered_sites) {
    VertexId upper = t.edge(e).parent;
    VertexId lower = t.edge(e).child;
    auto d_lower = distances_from(t, lower);
    auto d_upper = distances_from(t, upper);
    // Entry intervals of one traversal decide which side a site is on.
    std::vector<int> tin(t.vertex_count(), 0);
    auto order = t.in_order_vertices();
    for (int i = 0; i < static_cast<int>(order.size()); ++i) tin[order[i]] = i;
    std::vector<int> tout(t.vertex_count(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        VertexId v = *it;
        tout[v] = std::max(tout[v], tin[v]);
        if (t.parent(v) >= 0) tout[t.parent(v)] = std::max(tout[t.parent(v)], tout[v]);
    }
    std::vector<double> out(ordered_sites.size(), 0.0);
    for (size_t i = 0; i < ordered_sites.size(); ++i) {
        VertexId s = ordered_sites[i];
        bool below = tin[lower] <= tin[s] && tin[s] <= tout[lower];
        out[i] = below ? d_lower[s] : d_upper[s];
    }
    return out;
}

/// Builds the grouping hierarchy over an ordered site sequence: every
/// node splits into contiguous chunks of size ceil(range/N) with
/// N = ceil(n^(1/t)) fixed from the full range, bottoming out at
/// singleton leaf groups by depth t. Centers minimize distance to the
/// balancing edge, ties to the smallest in-order index.
inline GroupingNode build_grouping(const EdgeWeightedTree& tree,
                                   const std::vector<VertexId>& ordered_sites, EdgeId e, int t) {
    if (t < 1) throw input_error("t must be a positive integer");
    if (ordered_sites.empty()) throw input_error("grouping needs at least one site");
    auto dist = distances_to_cut(tree, e, ordered_sites);
    GroupingNode root;
    root.lo = 0;
    root.hi = static_cast<int>(ordered_sites.size());
    root.level = 0;
    detail::split_grouping(root, detail::group_fanout(root.size(), t), t, dist);
    return root;
}

// ── Plain spanner construction ──────────────────────────────────────

namespace detail {

struct PlainBuildSink {
    SpannerGraph* graph = nullptr;
    const EdgeWeightedTree* host = nullptr;  // realization metric
    int tree_index = 0;
    int prov_tree = -1;
    int prov_sub = -1;
    std::function<int(VertexId)> node_of;  // host vertex -> graph node

    void emit(VertexId host_a, VertexId host_b) const {
        int na = node_of(host_a);
        int nb = node_of(host_b);
        if (na == nb) return;
        TreeLinkRealizer realizer{host, tree_index};
        auto r = realizer.realize(TreePoint::at_vertex(host_a), TreePoint::at_vertex(host_b));
        graph->add_link(na, nb, r.length, r.complexity, std::move(r.path), prov_tree, prov_sub);
    }
};

inline void emit_grouping_links(const GroupingNode& node, const std::vector<VertexId>& sites,
                                const std::vector<VertexId>& host_of, const PlainBuildSink& sink) {
    for (const auto& child : node.children) {
        if (child.center != node.center)
            sink.emit(host_of[sites[child.center]], host_of[sites[node.center]]);
        emit_grouping_links(child, sites, host_of, sink);
    }
}

inline void build_plain_recursive(const EdgeWeightedTree& sub, const std::vector<VertexId>& host_of,
                                  int t, const PlainBuildSink& sink) {
    auto sites = sub.in_order_sites();
    int n = static_cast<int>(sites.size());
    if (n <= 1) return;
    if (n == 2) {
        sink.emit(host_of[sites[0]], host_of[sites[1]]);
        return;
    }
    EdgeId e = balancing_edge(sub);
    GroupingNode grouping = build_grouping(sub, sites, e, t);
    emit_grouping_links(grouping, sites, host_of, sink);

    // Recurse on the two subtrees obtained by removing e.
    VertexId lower = sub.edge(e).child;
    TreeExtract below = extract_subtree(sub, lower, [](EdgeId) { return true; });
    TreeExtract above = extract_subtree(sub, sub.root(), [&](EdgeId id) { return id != e; });
    for (auto& h : below.host_of) h = host_of[h];
    for (auto& h : above.host_of) h = host_of[h];
    build_plain_recursive(below.tree, below.host_of, t, sink);
    build_plain_recursive(above.tree, above.host_of, t, sink);
}

}  // namespace detail

/// Emits the 2t-spanner links for one tree into an existing graph. The
/// node mapping decides whether a given host vertex is a site node or a
/// Steiner node; realization runs against `realization_host` (the tree
/// whose metric defines link paths), which may differ from `tree` when
/// building on a carved subtree.
inline void build_plain_spanner_into(const EdgeWeightedTree& tree,
                                     const std::vector<VertexId>& host_of,
                                     const EdgeWeightedTree& realization_host, int t,
                                     SpannerGraph& graph, int tree_index,
                                     const std::function<int(VertexId)>& node_of,
                                     int prov_tree = -1, int prov_sub = -1) {
    if (t < 1) throw input_error("t must be a positive integer");
    detail::PlainBuildSink sink;
    sink.graph = &graph;
    sink.host = &realization_host;
    sink.tree_index = tree_index;
    sink.prov_tree = prov_tree;
    sink.prov_sub = prov_sub;
    sink.node_of = node_of;
    detail::build_plain_recursive(tree, host_of, t, sink);
}

/// Builds the plain (Steiner-free) 2t-spanner of a tree. All host
/// vertices become site nodes.
inline SpannerGraph build_plain_tree_spanner(const EdgeWeightedTree& tree, int t) {
    if (t < 1) throw input_error("t must be a positive integer");
    tree.validate();
    SpannerGraph graph(MetricTag::Tree);
    std::vector<VertexId> identity(tree.vertex_count());
    for (int i = 0; i < tree.vertex_count(); ++i) identity[i] = i;
    auto node_of = [&graph](VertexId v) {
        return graph.node_for(NodeKind::Site, 0, TreePoint::at_vertex(v));
    };
    // Register site nodes up front so ordering is the in-order site order.
    for (VertexId s : tree.in_order_sites()) node_of(s);
    build_plain_spanner_into(tree, identity, tree, t, graph, 0, node_of, 0, -1);
    return graph;
}

}  // namespace geospan
