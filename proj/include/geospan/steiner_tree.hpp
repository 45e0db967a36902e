// Steiner spanner pipeline for a tree: in-order site partition,
// two-phase coloring, Steiner anchors at color-tree roots, carving the
// tree into subtrees around the anchors, and a plain spanner per
// carved subtree. Also the normalization that clears edge interiors of
// surplus Steiner points.
#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "geospan/core.hpp"
#include "geospan/tree_spanner.hpp"

namespace geospan {

// ── Site partition ──────────────────────────────────────────────────

/// Contiguous ranges over the in-order site sequence, each of size
/// ceil(n/k) except possibly the last; empty trailing ranges dropped.
struct SitePartition {
    std::vector<VertexId> ordered_sites;
    std::vector<std::pair<int, int>> ranges;  // half-open
    int range_size = 0;                       // ceil(n/k) of the request

    int effective_k() const { return static_cast<int>(ranges.size()); }
};

inline SitePartition partition_sites(const EdgeWeightedTree& tree, int k) {
    SitePartition part;
    part.ordered_sites = tree.in_order_sites();
    int n = static_cast<int>(part.ordered_sites.size());
    if (k < 1 || k > n) throw input_error("k must lie in [1, n]");
    part.range_size = (n + k - 1) / k;
    for (int lo = 0; lo < n; lo += part.range_size)
        part.ranges.emplace_back(lo, std::min(lo + part.range_size, n));
    return part;
}

// ── Two-phase coloring ──────────────────────────────────────────────

/// Colors with their origin phase; an edge carries at most two colors.
struct Coloring {
    struct Entry {
        int color = -1;
        bool bottom_up = false;  // phase 2
    };
    std::vector<std::vector<Entry>> edge_colors;    // per edge
    std::vector<std::vector<Entry>> vertex_colors;  // per vertex

    bool edge_has(EdgeId e, int c) const {
        for (const auto& en : edge_colors[e])
            if (en.color == c) return true;
        return false;
    }
    bool vertex_has(VertexId v, int c) const {
        for (const auto& en : vertex_colors[v])
            if (en.color == c) return true;
        return false;
    }
    int edge_max_color(EdgeId e) const {
        int m = -1;
        for (const auto& en : edge_colors[e]) m = std::max(m, en.color);
        return m;
    }
};

/// Phase 1 colors the minimal subtree spanning each range; phase 2
/// colors the remaining edges bottom-up with the lowest color of the
/// lower endpoint (decreasing depth, ties by vertex id). Vertices with
/// no colored descendants (possible in unpruned shortest path trees)
/// stay uncolored.
inline Coloring color_tree(const EdgeWeightedTree& tree, const SitePartition& part) {
    Coloring col;
    col.edge_colors.resize(tree.edge_count());
    col.vertex_colors.resize(tree.vertex_count());

    auto add_vertex_color = [&](VertexId v, int c, bool bu) {
        if (!col.vertex_has(v, c)) col.vertex_colors[v].push_back({c, bu});
    };
    auto add_edge_color = [&](EdgeId e, int c, bool bu) {
        if (!col.edge_has(e, c)) col.edge_colors[e].push_back({c, bu});
    };

    // Phase 1: minimal subtree of each range = union of paths from its
    // sites to the fold-LCA.
    for (int i = 0; i < part.effective_k(); ++i) {
        auto [lo, hi] = part.ranges[i];
        VertexId meet = part.ordered_sites[lo];
        for (int j = lo + 1; j < hi; ++j) meet = tree.lca(meet, part.ordered_sites[j]);
        for (int j = lo; j < hi; ++j) {
            VertexId v = part.ordered_sites[j];
            add_vertex_color(v, i, false);
            while (v != meet) {
                EdgeId pe = tree.parent_edge(v);
                if (col.edge_has(pe, i)) break;
                add_edge_color(pe, i, false);
                v = tree.parent(v);
                add_vertex_color(v, i, false);
            }
        }
    }

    // Phase 2: uncolored edges take the lowest color of their lower
    // endpoint, processed bottom-up.
    std::vector<VertexId> order(tree.vertex_count());
    for (int v = 0; v < tree.vertex_count(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
        if (tree.depth(a) != tree.depth(b)) return tree.depth(a) > tree.depth(b);
        return a < b;
    });
    for (VertexId v : order) {
        EdgeId pe = tree.parent_edge(v);
        if (pe < 0 || !col.edge_colors[pe].empty()) continue;
        if (col.vertex_colors[v].empty()) continue;  // pruned-out branch
        int lowest = col.vertex_colors[v][0].color;
        for (const auto& en : col.vertex_colors[v]) lowest = std::min(lowest, en.color);
        add_edge_color(pe, lowest, true);
        add_vertex_color(tree.edge(pe).parent, lowest, true);
    }

    for (EdgeId e = 0; e < tree.edge_count(); ++e)
        check(col.edge_colors[e].size() <= 2, "an edge carries at most two colors");
    return col;
}

// ── Steiner placement ───────────────────────────────────────────────

/// One Steiner point per color, at the root of that color's subtree
/// (its unique highest vertex). Multiple points may share a vertex.
inline std::vector<SteinerPoint> place_steiner_points(const EdgeWeightedTree& tree,
                                                      const Coloring& col) {
    int k = 0;
    for (const auto& vc : col.vertex_colors)
        for (const auto& en : vc) k = std::max(k, en.color + 1);
    std::vector<VertexId> highest(k, -1);
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
        for (const auto& en : col.vertex_colors[v]) {
            VertexId& h = highest[en.color];
            if (h < 0 || tree.depth(v) < tree.depth(h)) h = v;
        }
    }
    std::vector<SteinerPoint> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        check(highest[i] >= 0, "every color has a root");
        out.push_back(SteinerPoint{i, TreePoint::at_vertex(highest[i]), 0});
    }
    return out;
}

// ── Carving ─────────────────────────────────────────────────────────

struct CarvedSubtree {
    int color = -1;
    VertexId anchor = -1;
    std::vector<VertexId> vertices;      // host vertices, anchors shared
    std::vector<EdgeId> edges;           // host edges owned by this subtree
    std::vector<VertexId> anchor_vertices_inside;  // distinct anchor-hosting vertices
    TreeExtract extract;                 // with the zero-weight anchor leaf
    VertexId anchor_leaf = -1;           // extract id of the zero-weight leaf
};

struct CarvedSubtrees {
    std::vector<CarvedSubtree> subtrees;
    std::vector<int> edge_owner;    // host edge -> color
    std::vector<VertexId> anchors;  // color -> anchor vertex
};

namespace detail {

/// Owner of a child edge at a vertex hosting the sorted anchor colors
/// `at_vertex`: the edge's highest color if anchored here, otherwise
/// the nearest anchored color below it (the lowest/highest anchor
/// absorbs colors beyond the ends). Colorless edges (pruned-out
/// branches of shortest path trees) follow the walk's active color.
inline int edge_owner_at_anchor(const std::vector<int>& at_vertex, int edge_max_color, int active) {
    if (edge_max_color < 0) return active < 0 ? at_vertex.front() : active;
    if (std::binary_search(at_vertex.begin(), at_vertex.end(), edge_max_color))
        return edge_max_color;
    if (edge_max_color > at_vertex.back()) return at_vertex.back();
    int best = at_vertex.front();
    for (int c : at_vertex) {
        if (c <= edge_max_color) best = c;
    }
    return best;
}

}  // namespace detail

/// Assigns every vertex and edge to exactly one carved subtree via a
/// single in-order walk (anchors shared between adjacent subtrees), and
/// appends the zero-weight leaf that turns each anchor into a site of
/// its own subtree.
inline CarvedSubtrees carve_subtrees(const EdgeWeightedTree& tree, const Coloring& col,
                                     const std::vector<SteinerPoint>& steiner) {
    int k = static_cast<int>(steiner.size());
    CarvedSubtrees out;
    out.edge_owner.assign(tree.edge_count(), -1);
    out.anchors.resize(k);
    std::vector<std::vector<int>> anchors_at(tree.vertex_count());
    for (const auto& s : steiner) {
        out.anchors[s.id] = s.host.vertex;
        anchors_at[s.host.vertex].push_back(s.id);
    }
    for (auto& v : anchors_at) std::sort(v.begin(), v.end());

    check(!anchors_at[tree.root()].empty(), "the root hosts a Steiner point");

    // Iterative walk carrying the owning color; at anchor vertices the
    // active color sweeps through the co-located anchors in order.
    struct Frame {
        VertexId v;
        size_t child = 0;
        int active = -1;  // sweep state at anchor vertices
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{tree.root(), 0, -1});
    while (!stack.empty()) {
        Frame& f = stack.back();
        const auto& children = tree.child_edges(f.v);
        if (f.child >= children.size()) {
            stack.pop_back();
            continue;
        }
        EdgeId e = children[f.child++];
        int owner;
        if (!anchors_at[f.v].empty()) {
            owner = detail::edge_owner_at_anchor(anchors_at[f.v], col.edge_max_color(e), f.active);
            f.active = owner;
        } else {
            // Inherit from the parent edge.
            owner = out.edge_owner[tree.parent_edge(f.v)];
        }
        out.edge_owner[e] = owner;
        stack.push_back(Frame{tree.edge(e).child, 0, -1});
    }

    // Materialize the subtrees.
    for (int i = 0; i < k; ++i) {
        CarvedSubtree sub;
        sub.color = i;
        sub.anchor = out.anchors[i];
        for (EdgeId e = 0; e < tree.edge_count(); ++e)
            if (out.edge_owner[e] == i) sub.edges.push_back(e);
        std::vector<char> seen(tree.vertex_count(), 0);
        auto touch = [&](VertexId v) {
            if (!seen[v]) {
                seen[v] = 1;
                sub.vertices.push_back(v);
            }
        };
        touch(sub.anchor);
        for (EdgeId e : sub.edges) {
            touch(tree.edge(e).parent);
            touch(tree.edge(e).child);
        }
        std::sort(sub.vertices.begin(), sub.vertices.end());
        for (VertexId v : sub.vertices)
            if (!anchors_at[v].empty()) sub.anchor_vertices_inside.push_back(v);

        sub.extract = extract_subtree(tree, sub.anchor,
                                      [&](EdgeId e) { return out.edge_owner[e] == i; });
        // Descendant anchors are leaves of the extract and act as sites.
        for (size_t ev = 0; ev < sub.extract.host_of.size(); ++ev) {
            VertexId hv = sub.extract.host_of[ev];
            if (hv != sub.anchor && !anchors_at[hv].empty())
                sub.extract.tree.set_site(static_cast<VertexId>(ev), true);
        }
        // The anchor itself becomes a site through a zero-weight leaf.
        VertexId leaf = sub.extract.tree.add_vertex();
        sub.extract.tree.add_edge(0, leaf, 0.0, /*synthetic=*/true);
        sub.extract.tree.set_site(leaf, true);
        sub.extract.host_of.push_back(sub.anchor);
        sub.anchor_leaf = leaf;
        out.subtrees.push_back(std::move(sub));
    }
    return out;
}

// ── Full pipeline ───────────────────────────────────────────────────

/// Emits the Steiner spanner for one tree into an existing graph under
/// the given tree index. Returns the number of Steiner points used.
inline int build_steiner_spanner_into(const EdgeWeightedTree& tree, int t, int k,
                                      SpannerGraph& graph, int tree_index) {
    if (t < 1) throw input_error("t must be a positive integer");
    int n = tree.site_count();
    if (k < 0 || k > n) throw input_error("k must lie in [0, n]");
    auto node_of = [&](VertexId host_v) {
        if (tree.is_site(host_v))
            return graph.node_for(NodeKind::Site, tree_index, TreePoint::at_vertex(host_v));
        return graph.node_for(NodeKind::Steiner, tree_index, TreePoint::at_vertex(host_v));
    };
    std::vector<VertexId> identity(tree.vertex_count());
    for (int i = 0; i < tree.vertex_count(); ++i) identity[i] = i;
    for (VertexId s : tree.in_order_sites()) node_of(s);

    if (k == 0 || n <= 2) {
        build_plain_spanner_into(tree, identity, tree, t, graph, tree_index, node_of, tree_index, -1);
        return 0;
    }

    SitePartition part = partition_sites(tree, k);
    Coloring col = color_tree(tree, part);
    auto steiner = place_steiner_points(tree, col);
    CarvedSubtrees carved = carve_subtrees(tree, col, steiner);

    int steiner_before = graph.steiner_count();
    for (const auto& sub : carved.subtrees) {
        build_plain_spanner_into(sub.extract.tree, sub.extract.host_of, tree, t, graph, tree_index,
                                 node_of, tree_index, sub.color);
    }
    int used = graph.steiner_count() - steiner_before;
    check(used <= k, "Steiner budget respected");
    return used;
}

/// 2t-spanner for the tree using at most k Steiner points: partition,
/// color, place, carve, then a plain spanner per carved subtree. k = 0
/// (or trees too small to matter) falls back to the plain construction.
inline SpannerGraph build_steiner_tree_spanner(const EdgeWeightedTree& tree, int t, int k) {
    tree.validate();
    SpannerGraph graph(MetricTag::Tree);
    build_steiner_spanner_into(tree, t, k, graph, 0);
    return graph;
}

// ── Normalization (interior Steiner points) ─────────────────────────

namespace detail {

inline bool point_below_edge(const EdgeWeightedTree& t, EdgeId e, const TreePoint& p) {
    if (p.on_vertex()) return below_edge(t, e, p.vertex);
    if (p.edge == e) return false;  // interior of e itself is neither side
    return below_edge(t, e, t.edge(p.edge).child);
}

inline double max_site_pair_ratio(const EdgeWeightedTree& tree, const SpannerGraph& g) {
    auto sites = g.site_nodes();
    LinkGraph lg(g);
    double worst = 0.0;
    for (size_t i = 0; i < sites.size(); ++i) {
        auto dist = lg.distances_from(sites[i]);
        for (size_t j = i + 1; j < sites.size(); ++j) {
            double d = tree_point_distance(tree, g.nodes()[sites[i]].host, g.nodes()[sites[j]].host);
            if (d <= 0.0) continue;
            worst = std::max(worst, dist[sites[j]] / d);
        }
    }
    return worst;
}

}  // namespace detail

/// Rewrites a tree spanner so that no edge keeps more than one Steiner
/// point in its interior: on every edge hosting two or more, the
/// interior points collapse onto the edge endpoints, crossing links are
/// rerouted to the endpoint they pass, links between interior points of
/// the edge disappear, and the edge itself becomes a link. Steiner
/// count, complexity, and the maximum spanning ratio never increase.
inline SpannerGraph normalize_spanner(const SpannerGraph& g, const EdgeWeightedTree& tree) {
    if (g.metric() != MetricTag::Tree) throw unsupported_error("normalization needs a tree metric");

    std::vector<int> degree(g.nodes().size(), 0);
    for (const auto& l : g.links()) {
        ++degree[l.a];
        ++degree[l.b];
    }

    // Interior Steiner points per edge (unused ones are dropped outright).
    std::map<EdgeId, std::vector<int>> interior;
    for (int i = 0; i < static_cast<int>(g.nodes().size()); ++i) {
        const auto& node = g.nodes()[i];
        if (node.kind == NodeKind::Steiner && !node.host.on_vertex() && degree[i] > 0)
            interior[node.host.edge].push_back(i);
    }
    std::vector<char> collapse_node(g.nodes().size(), 0);
    std::vector<EdgeId> marked;
    for (const auto& [e, pts] : interior) {
        if (pts.size() < 2) continue;
        marked.push_back(e);
        for (int i : pts) collapse_node[i] = 1;
    }

    SpannerGraph out(MetricTag::Tree);
    TreeLinkRealizer realizer{&tree, 0};
    std::vector<int> remap(g.nodes().size(), -1);
    for (int i = 0; i < static_cast<int>(g.nodes().size()); ++i) {
        const auto& node = g.nodes()[i];
        if (collapse_node[i]) continue;
        if (node.kind == NodeKind::Steiner && degree[i] == 0) continue;  // unused
        remap[i] = out.node_for(node.kind, node.tree, node.host);
    }
    auto endpoint_for = [&](int old_node, const TreePoint& other) -> int {
        if (!collapse_node[old_node]) return remap[old_node];
        EdgeId e = g.nodes()[old_node].host.edge;
        // Reroute to whichever endpoint the link passes through.
        bool from_below = detail::point_below_edge(tree, e, other);
        VertexId target = from_below ? tree.edge(e).child : tree.edge(e).parent;
        return out.node_for(NodeKind::Steiner, 0, TreePoint::at_vertex(target));
    };

    for (const auto& l : g.links()) {
        const TreePoint& ha = g.nodes()[l.a].host;
        const TreePoint& hb = g.nodes()[l.b].host;
        if (collapse_node[l.a] && collapse_node[l.b] &&
            g.nodes()[l.a].host.edge == g.nodes()[l.b].host.edge)
            continue;  // wholly between interior points of one edge
        int na = endpoint_for(l.a, hb);
        int nb = endpoint_for(l.b, ha);
        if (!collapse_node[l.a] && !collapse_node[l.b]) {
            out.add_link(na, nb, l.length, l.complexity, l.path, l.prov_tree, l.prov_sub);
        } else {
            auto r = realizer.realize(out.nodes()[na].host, out.nodes()[nb].host);
            out.add_link(na, nb, r.length, r.complexity, std::move(r.path), l.prov_tree, l.prov_sub);
        }
    }
    for (EdgeId e : marked) {
        int nu = out.node_for(NodeKind::Steiner, 0, TreePoint::at_vertex(tree.edge(e).parent));
        int nv = out.node_for(NodeKind::Steiner, 0, TreePoint::at_vertex(tree.edge(e).child));
        auto r = realizer.realize(out.nodes()[nu].host, out.nodes()[nv].host);
        out.add_link(nu, nv, r.length, r.complexity, std::move(r.path));
    }

    // Post-conditions of the rewrite.
    std::map<EdgeId, int> interior_after;
    for (const auto& node : out.nodes())
        if (node.kind == NodeKind::Steiner && !node.host.on_vertex()) ++interior_after[node.host.edge];
    for (const auto& [e, cnt] : interior_after) check(cnt <= 1, "at most one interior Steiner point per edge");
    check(out.steiner_count() <= g.steiner_count(), "normalization never adds Steiner points");
    long long cx_before = 0, cx_after = 0;
    for (const auto& l : g.links()) cx_before += l.complexity;
    for (const auto& l : out.links()) cx_after += l.complexity;
    check(cx_after <= cx_before, "normalization never increases complexity");
    if (!g.site_nodes().empty()) {
        double before = detail::max_site_pair_ratio(tree, g);
        double after = detail::max_site_pair_ratio(tree, out);
        check(after <= before * (1.0 + kRelTol) + 1e-12, "normalization never increases the ratio");
    }
    return out;
}

}  // namespace geospan
