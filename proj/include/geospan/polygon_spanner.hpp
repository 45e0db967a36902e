// Polygon spanner pipeline: recursive chord splitting, pruned chord
// SPTs per recursion cell, large/small classification, the forest
// Steiner spanner on the large trees, plain spanners on the small
// trees, and lifting links back into the polygon as geodesics.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "geospan/core.hpp"
#include "geospan/forest_spanner.hpp"
#include "geospan/geometry.hpp"
#include "geospan/steiner_tree.hpp"
#include "geospan/tree_spanner.hpp"

namespace geospan {

// ── Recursion forest ────────────────────────────────────────────────

struct SptRecord {
    int level = 0;
    int cell = 0;
    int cell_vertices = 0;  // vertex count of the cell polygon
    ChordSPT unpruned;
    EdgeWeightedTree pruned;
    std::vector<ChordSPT::NodeInfo> pruned_info;      // per pruned vertex
    std::vector<VertexId> pruned_to_unpruned;
    int site_count = 0;
};

struct RecursionForest {
    std::vector<SptRecord> trees;  // ordered by (level, cell)
    int levels = 0;
    int total_site_copies = 0;
};

namespace detail {

/// Keeps only sites and their ancestors, then contracts chord-spine
/// vertices of degree two so every surviving chord node is the root, an
/// endpoint of a surviving branch, or a site projection.
inline void prune_spt(const ChordSPT& spt, SptRecord& record) {
    const EdgeWeightedTree& t = spt.tree;
    std::vector<char> keep(t.vertex_count(), 0);
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        if (!t.is_site(v)) continue;
        for (VertexId u = v; u >= 0 && !keep[u]; u = t.parent(u)) keep[u] = 1;
    }
    std::vector<int> kept_children(t.vertex_count(), 0);
    for (VertexId v = 0; v < t.vertex_count(); ++v) {
        if (!keep[v]) continue;
        VertexId p = t.parent(v);
        if (p >= 0) ++kept_children[p];
    }
    auto is_chord_edge = [&](VertexId child) {
        EdgeId pe = t.parent_edge(child);
        return pe >= 0 && spt.edge_on_chord[pe];
    };
    auto contractable = [&](VertexId v) {
        if (!keep[v] || v == t.root()) return false;
        if (spt.info[v].kind != ChordSPT::Kind::ChordPoint) return false;
        if (kept_children[v] != 1) return false;
        if (!is_chord_edge(v)) return false;
        // The single kept child edge must also run along the chord.
        for (EdgeId e : t.child_edges(v))
            if (keep[t.edge(e).child] && !spt.edge_on_chord[e]) return false;
        return true;
    };

    // Emit the pruned tree in the original child order.
    record.pruned = EdgeWeightedTree{};
    record.pruned_info.clear();
    record.pruned_to_unpruned.clear();
    VertexId root = record.pruned.add_vertex();
    record.pruned.set_root(root);
    record.pruned_info.push_back(spt.info[t.root()]);
    record.pruned_to_unpruned.push_back(t.root());

    struct Frame {
        VertexId host;
        VertexId attach;   // pruned parent vertex
        double carry;      // weight accumulated over contracted nodes
        bool synthetic;
        bool from_root;
    };
    std::vector<Frame> stack;
    for (auto it = t.child_edges(t.root()).rbegin(); it != t.child_edges(t.root()).rend(); ++it) {
        const TreeEdge& e = t.edge(*it);
        if (keep[e.child]) stack.push_back({e.child, root, e.weight, e.synthetic, true});
    }
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (contractable(f.host)) {
            for (auto it = t.child_edges(f.host).rbegin(); it != t.child_edges(f.host).rend(); ++it) {
                const TreeEdge& e = t.edge(*it);
                if (keep[e.child])
                    stack.push_back({e.child, f.attach, f.carry + e.weight, f.synthetic && e.synthetic, false});
            }
            continue;
        }
        VertexId v = record.pruned.add_vertex();
        record.pruned.add_edge(f.attach, v, f.carry, f.synthetic);
        record.pruned.set_site(v, t.is_site(f.host));
        record.pruned_info.push_back(spt.info[f.host]);
        record.pruned_to_unpruned.push_back(f.host);
        for (auto it = t.child_edges(f.host).rbegin(); it != t.child_edges(f.host).rend(); ++it) {
            const TreeEdge& e = t.edge(*it);
            if (keep[e.child]) stack.push_back({e.child, v, e.weight, e.synthetic, false});
        }
    }
    record.site_count = record.pruned.site_count();
}

}  // namespace detail

/// Splits the polygon recursively by vertical separators until every
/// cell holds at most one site; each splitting cell contributes one
/// pruned chord SPT whose leaves are that cell's site copies.
inline RecursionForest collect_recursion_forest(const SimplePolygon& polygon,
                                                const std::vector<Point2>& sites) {
    if (sites.size() < 2) throw degenerate_input_error("recursion forest needs at least 2 sites");
    RecursionForest forest;

    struct Cell {
        SimplePolygon poly;
        std::vector<int> site_ids;
        int level;
        int index;
    };
    SimplePolygon root_poly = polygon;
    if (root_poly.origin.empty()) {
        root_poly.origin.resize(root_poly.size());
        for (int i = 0; i < root_poly.size(); ++i) root_poly.origin[i] = i;
    }
    std::vector<int> all(sites.size());
    for (size_t i = 0; i < sites.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<Cell> queue{Cell{root_poly, all, 0, 0}};

    for (size_t qi = 0; qi < queue.size(); ++qi) {
        Cell cell = queue[qi];
        if (cell.site_ids.size() < 2) continue;
        forest.levels = std::max(forest.levels, cell.level + 1);
        std::vector<Point2> pts;
        for (int id : cell.site_ids) pts.push_back(sites[id]);
        Chord chord = vertical_separator(cell.poly, pts);
        ChordSPT spt = build_spt(cell.poly, chord, pts, &cell.site_ids);

        SptRecord record;
        record.level = cell.level;
        record.cell = cell.index;
        record.cell_vertices = cell.poly.size();
        record.unpruned = std::move(spt);
        detail::prune_spt(record.unpruned, record);
        record.pruned.validate(true);
        forest.total_site_copies += record.site_count;
        forest.trees.push_back(std::move(record));

        auto [left, right] = split_polygon(cell.poly, chord);
        Cell lc{left, {}, cell.level + 1, 2 * cell.index};
        Cell rc{right, {}, cell.level + 1, 2 * cell.index + 1};
        for (int id : cell.site_ids) {
            const Point2& s = sites[id];
            if (chord.on_chord(s) || contains(left, s)) lc.site_ids.push_back(id);
            else rc.site_ids.push_back(id);
        }
        check(lc.site_ids.size() < cell.site_ids.size() && rc.site_ids.size() < cell.site_ids.size(),
              "separator makes progress");
        queue.push_back(std::move(lc));
        queue.push_back(std::move(rc));
    }
    return forest;
}

/// Trees at recursion level <= floor(log2 k) are large; the rest small.
inline std::pair<std::vector<int>, std::vector<int>> classify_trees(const RecursionForest& forest,
                                                                    int k) {
    if (k < 1) throw input_error("k must be at least 1");
    int threshold = 0;
    while ((2 << threshold) <= k) ++threshold;  // floor(log2 k)
    std::vector<int> large, small;
    for (int i = 0; i < static_cast<int>(forest.trees.size()); ++i) {
        if (forest.trees[i].level <= threshold) large.push_back(i);
        else small.push_back(i);
    }
    return {large, small};
}

// ── Full pipeline ───────────────────────────────────────────────────

struct PolygonBuild {
    SpannerGraph spanner{MetricTag::Polygon};
    SpannerGraph forest_graph{MetricTag::Forest};  // over the SPT copies
    RecursionForest forest;
    std::vector<int> record_of_tree;  // forest_graph tree index -> record
    std::vector<int> budget_of_record;
    int t = 1;
    int k = 1;
};

/// Geodesic 2*sqrt(2)*t spanner using at most k Steiner points.
inline PolygonBuild build_polygon_spanner(const SimplePolygon& polygon,
                                          const std::vector<Point2>& sites, int t, int k) {
    if (t < 1) throw input_error("t must be a positive integer");
    int n = static_cast<int>(sites.size());
    if (k < 1 || k > n) throw input_error("k must lie in [1, n]");
    polygon.validate();

    PolygonBuild build;
    build.t = t;
    build.k = k;
    if (n == 1) return build;
    build.forest = collect_recursion_forest(polygon, sites);
    auto [large, small] = classify_trees(build.forest, k);
    build.budget_of_record.assign(build.forest.trees.size(), 0);

    // Large forest gets the whole budget; small trees run plain.
    Forest large_forest;
    for (int idx : large) large_forest.trees.push_back(build.forest.trees[idx].pruned);
    ForestPlan plan = plan_forest(large_forest, k);
    int used = 0;
    for (size_t i = 0; i < large_forest.trees.size(); ++i) {
        const auto& tp = plan.trees[i];
        int budget = tp.multi_range ? std::min(tp.steiner_budget, tp.sites) : 0;
        build.budget_of_record[large[i]] = budget;
        build.record_of_tree.push_back(large[i]);
        used += build_steiner_spanner_into(large_forest.trees[i], t, budget, build.forest_graph,
                                           static_cast<int>(i));
    }
    check(used <= k, "polygon Steiner budget respected");
    for (size_t j = 0; j < small.size(); ++j) {
        int tree_index = static_cast<int>(large.size() + j);
        build.record_of_tree.push_back(small[j]);
        build_steiner_spanner_into(build.forest.trees[small[j]].pruned, t, 0, build.forest_graph,
                                   tree_index);
    }

    // Lift every forest link into the polygon as a geodesic.
    PolygonGeometry engine(polygon);
    auto site_node = [&](int site_id) {
        int gp = build.spanner.node_for(NodeKind::Site, -1, TreePoint::at_vertex(site_id));
        auto& n = const_cast<SpannerNode&>(build.spanner.nodes()[gp]);
        n.site = site_id;
        n.position = sites[site_id];
        return gp;
    };
    auto lift_node = [&](int fg_node) {
        const SpannerNode& node = build.forest_graph.nodes()[fg_node];
        const SptRecord& record = build.forest.trees[build.record_of_tree[node.tree]];
        const auto& info = record.pruned_info[node.host.vertex];
        if (node.kind == NodeKind::Site) return site_node(info.ref);
        // A Steiner junction anchored where a site sits on the chord (the
        // site hangs by a zero-weight leaf) coincides with that site.
        const EdgeWeightedTree& pruned = record.pruned;
        for (EdgeId e : pruned.child_edges(node.host.vertex)) {
            const TreeEdge& te = pruned.edge(e);
            if (te.synthetic && te.weight == 0.0 && pruned.is_site(te.child))
                return site_node(record.pruned_info[te.child].ref);
        }
        int gp = build.spanner.node_for(NodeKind::Steiner, node.tree, node.host);
        auto& sn = const_cast<SpannerNode&>(build.spanner.nodes()[gp]);
        sn.position = info.position;
        return gp;
    };
    for (const auto& link : build.forest_graph.links()) {
        int na = lift_node(link.a);
        int nb = lift_node(link.b);
        const Point2& pa = build.spanner.nodes()[na].position;
        const Point2& pb = build.spanner.nodes()[nb].position;
        GeodesicPath geo = engine.shortest_path(pa, pb);
        check(geo.length <= link.length * (1.0 + kRelTol) + 1e-12,
              "lifted link is no longer than its tree path");
        LinkPath path;
        path.polyline = geo.points;
        int record_idx = build.record_of_tree[build.forest_graph.nodes()[link.a].tree];
        build.spanner.add_link(na, nb, geo.length, geo.complexity, std::move(path), record_idx,
                               link.prov_sub);
    }
    return build;
}

// ── Containment check for lifted links ──────────────────────────────

struct ContainmentReport {
    int links_checked = 0;
    int violations = 0;
    std::vector<std::string> details;
};

namespace detail {

struct ExtendedCarve {
    std::vector<std::vector<VertexId>> member_vertices;  // per color, sorted
};

/// Carves the unpruned SPT with the same partition the pipeline used on
/// the pruned tree; pruned-out vertices join the subtree that owns the
/// surrounding walk region.
inline ExtendedCarve extend_carve(const SptRecord& record, int budget) {
    ExtendedCarve out;
    const EdgeWeightedTree& tree = record.unpruned.tree;
    SitePartition part = partition_sites(tree, budget);
    Coloring col = color_tree(tree, part);
    auto steiner = place_steiner_points(tree, col);
    CarvedSubtrees carved = carve_subtrees(tree, col, steiner);
    for (auto& sub : carved.subtrees) {
        std::sort(sub.vertices.begin(), sub.vertices.end());
        out.member_vertices.push_back(sub.vertices);
    }
    return out;
}

}  // namespace detail

/// Verifies that every lifted link built inside a carved subtree only
/// turns at polygon vertices assigned to that subtree (with pruned-out
/// vertices re-assigned by the extended carve).
inline ContainmentReport check_containment(const PolygonBuild& build,
                                           const SimplePolygon& polygon) {
    ContainmentReport report;
    std::map<Point2, int> vertex_index;
    for (int i = 0; i < polygon.size(); ++i) vertex_index[polygon.pts[i]] = i;

    std::map<std::pair<int, int>, detail::ExtendedCarve> carves;
    for (const auto& link : build.spanner.links()) {
        if (link.prov_sub < 0 || link.prov_tree < 0) continue;
        ++report.links_checked;
        const SptRecord& record = build.forest.trees[link.prov_tree];
        int budget = build.budget_of_record[link.prov_tree];
        if (budget <= 0) continue;
        auto key = std::make_pair(link.prov_tree, budget);
        auto it = carves.find(key);
        if (it == carves.end()) it = carves.emplace(key, detail::extend_carve(record, budget)).first;
        const auto& members = it->second.member_vertices;
        if (link.prov_sub >= static_cast<int>(members.size())) continue;
        const auto& allowed = members[link.prov_sub];

        const auto& poly_pts = link.path.polyline;
        for (size_t pi = 1; pi + 1 < poly_pts.size(); ++pi) {
            auto vit = vertex_index.find(poly_pts[pi]);
            if (vit == vertex_index.end()) continue;  // turn at a non-vertex point cannot happen
            VertexId node = record.unpruned.node_of_origin(vit->second);
            bool ok = node >= 0 && std::binary_search(allowed.begin(), allowed.end(), node);
            if (!ok) {
                ++report.violations;
                report.details.push_back(
                    "link turns at vertex (" + std::to_string(poly_pts[pi].x) + ", " +
                    std::to_string(poly_pts[pi].y) + ") outside its carved subtree");
            }
        }
    }
    return report;
}

}  // namespace geospan
