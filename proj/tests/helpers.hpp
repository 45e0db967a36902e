// Shared test utilities: tree-metric ratio meters and the interior
// Steiner injection used by the normalization tests.
#pragma once

#include <random>

#include "geospan/core.hpp"
#include "geospan/steiner_tree.hpp"
#include "geospan/verify.hpp"

namespace geospan::testing {

inline double tree_spanner_max_ratio(const SpannerGraph& g, const EdgeWeightedTree& t) {
    auto sites = g.site_nodes();
    auto report = check_ratio(
        g,
        [&](int i, int j) {
            return t.tree_distance(g.nodes()[sites[i]].host.vertex, g.nodes()[sites[j]].host.vertex);
        },
        1e18);
    return report.max_ratio;
}

/// Rewrites up to `pairs` links of a tree spanner so that each passes
/// through two fresh Steiner points placed on the interior of one edge
/// of its realized path. Distances between sites are unchanged; the
/// complexity grows by two per injection.
inline SpannerGraph inject_interior_steiner_pairs(const SpannerGraph& g, const EdgeWeightedTree& tree,
                                                  int pairs, uint64_t seed) {
    SpannerGraph out(MetricTag::Tree);
    for (const auto& node : g.nodes()) out.node_for(node.kind, node.tree, node.host);
    TreeLinkRealizer realizer{&tree, 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> low(0.15, 0.45), high(0.55, 0.85);

    int injected = 0;
    for (const auto& l : g.links()) {
        const auto& path = l.path.tree_points;
        bool eligible = injected < pairs && path.size() >= 2;
        EdgeId target = -1;
        if (eligible) {
            size_t mid = path.size() / 2;
            size_t lo = mid == 0 ? 0 : mid - 1;
            if (lo + 1 < path.size() && path[lo].on_vertex() && path[lo + 1].on_vertex()) {
                VertexId a = path[lo].vertex, b = path[lo + 1].vertex;
                VertexId lower = tree.depth(a) > tree.depth(b) ? a : b;
                EdgeId pe = tree.parent_edge(lower);
                if (pe >= 0 && !tree.edge(pe).synthetic) target = pe;
            }
        }
        if (target < 0) {
            out.add_link(l.a, l.b, l.length, l.complexity, l.path, l.prov_tree, l.prov_sub);
            continue;
        }
        ++injected;
        double f1 = low(rng), f2 = high(rng);
        TreePoint s1 = TreePoint::on_edge(target, f1);
        TreePoint s2 = TreePoint::on_edge(target, f2);
        int n1 = out.node_for(NodeKind::Steiner, 0, s1);
        int n2 = out.node_for(NodeKind::Steiner, 0, s2);
        const TreePoint& ha = g.nodes()[l.a].host;
        const TreePoint& hb = g.nodes()[l.b].host;
        // Orient the split along the path: a-side reaches the parent end.
        bool a_below = below_edge(tree, target, ha.vertex);
        int first = a_below ? n2 : n1;
        int second = a_below ? n1 : n2;
        auto r1 = realizer.realize(ha, out.nodes()[first].host);
        auto r2 = realizer.realize(out.nodes()[first].host, out.nodes()[second].host);
        auto r3 = realizer.realize(out.nodes()[second].host, hb);
        out.add_link(l.a, first, r1.length, r1.complexity, std::move(r1.path));
        out.add_link(first, second, r2.length, r2.complexity, std::move(r2.path));
        out.add_link(second, l.b, r3.length, r3.complexity, std::move(r3.path));
    }
    return out;
}

}  // namespace geospan::testing
