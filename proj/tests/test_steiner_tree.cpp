#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "geospan/generators.hpp"
#include "geospan/steiner_tree.hpp"
#include "geospan/verify.hpp"
#include "helpers.hpp"

using namespace geospan;
using geospan::testing::inject_interior_steiner_pairs;
using geospan::testing::tree_spanner_max_ratio;

namespace {

/// Root with two child subtrees: A holds the first half of the sites,
/// B the second half.
EdgeWeightedTree two_branch_tree(int sites_per_branch) {
    EdgeWeightedTree t;
    VertexId r = t.add_vertex();
    t.set_root(r);
    for (int branch = 0; branch < 2; ++branch) {
        VertexId head = t.add_vertex();
        t.add_edge(r, head, 1.0);
        for (int i = 0; i < sites_per_branch; ++i) {
            VertexId leaf = t.add_vertex();
            t.add_edge(head, leaf, 1.0 + i * 0.125);
            t.set_site(leaf, true);
        }
    }
    return t;
}

struct CarveChecks {
    bool cover = true;
    bool disjoint = true;
    bool anchors_ok = true;
    bool sizes_ok = true;
};

CarveChecks run_structural_checks(const EdgeWeightedTree& tree, int k) {
    CarveChecks out;
    SitePartition part = partition_sites(tree, k);
    Coloring col = color_tree(tree, part);
    auto steiner = place_steiner_points(tree, col);
    CarvedSubtrees carved = carve_subtrees(tree, col, steiner);

    std::vector<int> edge_cover(tree.edge_count(), 0);
    std::vector<int> vertex_cover(tree.vertex_count(), 0);
    std::vector<char> is_anchor(tree.vertex_count(), 0);
    for (const auto& s : steiner) is_anchor[s.host.vertex] = 1;
    for (const auto& sub : carved.subtrees) {
        for (EdgeId e : sub.edges) ++edge_cover[e];
        for (VertexId v : sub.vertices) ++vertex_cover[v];
        if (sub.anchor_vertices_inside.size() > 5) out.anchors_ok = false;
        int site_count = 0;
        for (VertexId v : sub.vertices) site_count += tree.is_site(v) ? 1 : 0;
        if (site_count > 4 * part.range_size) out.sizes_ok = false;
    }
    for (EdgeId e = 0; e < tree.edge_count(); ++e) {
        if (edge_cover[e] == 0) out.cover = false;
        if (edge_cover[e] > 1) out.disjoint = false;
    }
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
        if (vertex_cover[v] == 0) out.cover = false;
        if (vertex_cover[v] > 1 && !is_anchor[v]) out.disjoint = false;
    }
    return out;
}

}  // namespace

TEST_CASE("partition sizes follow the ceiling formula") {
    auto t = gen_random_tree(7, 20, 3);
    auto part = partition_sites(t, 3);
    REQUIRE(part.effective_k() == 3);
    CHECK(part.ranges[0].second - part.ranges[0].first == 3);
    CHECK(part.ranges[1].second - part.ranges[1].first == 3);
    CHECK(part.ranges[2].second - part.ranges[2].first == 1);

    auto whole = partition_sites(t, 1);
    CHECK(whole.effective_k() == 1);
    CHECK(whole.ranges[0].second == 7);

    auto singletons = partition_sites(t, 7);
    CHECK(singletons.effective_k() == 7);
    for (auto [lo, hi] : singletons.ranges) CHECK(hi - lo == 1);

    CHECK_THROWS_AS(partition_sites(t, 0), input_error);
    CHECK_THROWS_AS(partition_sites(t, 8), input_error);
}

TEST_CASE("k=1 colors everything with the single color") {
    auto t = gen_random_tree(10, 30, 5);
    auto part = partition_sites(t, 1);
    auto col = color_tree(t, part);
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        REQUIRE(col.edge_colors[e].size() == 1);
        CHECK(col.edge_colors[e][0].color == 0);
    }
    for (VertexId v = 0; v < t.vertex_count(); ++v) CHECK(col.vertex_has(v, 0));
}

TEST_CASE("two-branch tree colors the branch edges with their own colors") {
    auto t = two_branch_tree(3);
    auto part = partition_sites(t, 2);
    auto col = color_tree(t, part);
    EdgeId ra = 0;  // first added edge goes to branch A's head
    EdgeId rb = t.parent_edge(t.edge(0).parent == t.root() ? t.child_edges(t.root())[1] : 0);
    rb = t.child_edges(t.root())[1];
    CHECK(col.edge_has(ra, 0));
    CHECK_FALSE(col.edge_has(ra, 1));
    CHECK(col.edge_has(rb, 1));
    CHECK_FALSE(col.edge_has(rb, 0));
    CHECK(col.vertex_has(t.root(), 0));
    CHECK(col.vertex_has(t.root(), 1));
}

TEST_CASE("every edge carries at most two colors on random instances") {
    for (uint64_t seed = 1; seed <= 15; ++seed) {
        int n = 8 + static_cast<int>((seed * 11) % 56);
        int k = 1 + static_cast<int>(seed % 8);
        auto t = gen_random_tree(n, 2 * n + 12, seed * 7);
        auto col = color_tree(t, partition_sites(t, std::min(k, n)));
        for (EdgeId e = 0; e < t.edge_count(); ++e) CHECK(col.edge_colors[e].size() <= 2);
    }
}

TEST_CASE("k=1 places the Steiner point at the root") {
    auto t = gen_random_tree(9, 25, 17);
    auto col = color_tree(t, partition_sites(t, 1));
    auto steiner = place_steiner_points(t, col);
    REQUIRE(steiner.size() == 1);
    CHECK(steiner[0].host.vertex == t.root());
}

TEST_CASE("two-branch tree anchors both Steiner points at the root") {
    auto t = two_branch_tree(3);
    auto col = color_tree(t, partition_sites(t, 2));
    auto steiner = place_steiner_points(t, col);
    REQUIRE(steiner.size() == 2);
    CHECK(steiner[0].host.vertex == t.root());
    CHECK(steiner[1].host.vertex == t.root());
}

TEST_CASE("each anchor is an ancestor of every vertex of its color") {
    for (uint64_t seed = 2; seed <= 10; ++seed) {
        int n = 10 + static_cast<int>((seed * 9) % 40);
        int k = 1 + static_cast<int>(seed % 6);
        auto t = gen_random_tree(n, 2 * n + 8, seed * 13);
        auto col = color_tree(t, partition_sites(t, std::min(k, n)));
        auto steiner = place_steiner_points(t, col);
        for (const auto& s : steiner) {
            for (VertexId v = 0; v < t.vertex_count(); ++v) {
                if (!col.vertex_has(v, s.id)) continue;
                VertexId u = v;
                while (u >= 0 && u != s.host.vertex) u = t.parent(u);
                CHECK(u == s.host.vertex);
            }
        }
    }
}

TEST_CASE("k=1 carve assigns the whole tree to one subtree with its zero leaf") {
    auto t = gen_random_tree(8, 20, 19);
    auto col = color_tree(t, partition_sites(t, 1));
    auto steiner = place_steiner_points(t, col);
    auto carved = carve_subtrees(t, col, steiner);
    REQUIRE(carved.subtrees.size() == 1);
    CHECK(static_cast<int>(carved.subtrees[0].vertices.size()) == t.vertex_count());
    CHECK(static_cast<int>(carved.subtrees[0].edges.size()) == t.edge_count());
    const auto& ext = carved.subtrees[0].extract;
    CHECK(ext.tree.vertex_count() == t.vertex_count() + 1);  // the zero-weight leaf
    CHECK(ext.tree.is_site(carved.subtrees[0].anchor_leaf));
    CHECK(ext.tree.edge(ext.tree.parent_edge(carved.subtrees[0].anchor_leaf)).synthetic);
}

TEST_CASE("two-branch carve overlaps exactly at the shared root anchor") {
    auto t = two_branch_tree(3);
    auto col = color_tree(t, partition_sites(t, 2));
    auto steiner = place_steiner_points(t, col);
    auto carved = carve_subtrees(t, col, steiner);
    REQUIRE(carved.subtrees.size() == 2);
    std::set<VertexId> a(carved.subtrees[0].vertices.begin(), carved.subtrees[0].vertices.end());
    std::set<VertexId> b(carved.subtrees[1].vertices.begin(), carved.subtrees[1].vertices.end());
    std::vector<VertexId> overlap;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(overlap));
    REQUIRE(overlap.size() == 1);
    CHECK(overlap[0] == t.root());
}

TEST_CASE("carve invariants hold on randomized instances") {
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        int n = 8 + static_cast<int>((seed * 17) % 120);
        int k = 1 + static_cast<int>(seed % 16);
        auto t = gen_random_tree(n, 2 * n + static_cast<int>(seed % 40), seed * 31);
        auto checks = run_structural_checks(t, std::min(k, n));
        CHECK(checks.cover);
        CHECK(checks.disjoint);
        CHECK(checks.anchors_ok);
        CHECK(checks.sizes_ok);
    }
}

TEST_CASE("steiner spanner on two sites is one direct link") {
    auto t = two_branch_tree(1);
    for (int k : {0, 1, 2}) {
        auto g = build_steiner_tree_spanner(t, 1, k);
        REQUIRE(g.links().size() == 1);
        CHECK(tree_spanner_max_ratio(g, t) == doctest::Approx(1.0));
    }
}

TEST_CASE("steiner spanner meets the 2t bound on the pitchfork gadget") {
    auto t = gen_pitchfork_star(2, 12, 40);
    auto g = build_steiner_tree_spanner(t, 1, 2);
    CHECK(tree_spanner_max_ratio(g, t) <= 2.0 * (1 + 1e-9));
    validate_tree_spanner_links(g, [&](int) -> const EdgeWeightedTree& { return t; });
}

TEST_CASE("steiner spanner meets 2t and the budget on random trees") {
    for (int t_param : {1, 2, 3}) {
        for (uint64_t seed = 3; seed <= 8; ++seed) {
            int n = 12 + static_cast<int>((seed * 19) % 52);
            auto tree = gen_random_tree(n, 2 * n + 16, seed * 41);
            for (int k : {1, static_cast<int>(std::ceil(std::sqrt(n))), n / 4}) {
                if (k < 0 || k > n) continue;
                auto g = build_steiner_tree_spanner(tree, t_param, k);
                CHECK(tree_spanner_max_ratio(g, tree) <= 2.0 * t_param * (1 + 1e-9));
                CHECK(g.steiner_count() <= k);
                validate_tree_spanner_links(g, [&](int) -> const EdgeWeightedTree& { return tree; });
            }
        }
    }
}

TEST_CASE("normalization leaves clean spanners unchanged") {
    auto t = gen_random_tree(20, 60, 53);
    auto g = build_steiner_tree_spanner(t, 2, 4);
    auto norm = normalize_spanner(g, t);
    CHECK(norm.links().size() == g.links().size());
    CHECK(norm.steiner_count() == g.steiner_count());
    CHECK(measure(norm).complexity == measure(g).complexity);
}

TEST_CASE("normalization rewrites the two-interior-point example") {
    // Edge (u,v) of weight 10 hosts s1 and s2; p hangs below u, q below v.
    EdgeWeightedTree t;
    VertexId u = t.add_vertex();
    t.set_root(u);
    VertexId p = t.add_vertex();
    t.add_edge(u, p, 1.0);
    t.set_site(p, true);
    VertexId v = t.add_vertex();
    EdgeId uv = t.add_edge(u, v, 10.0);
    VertexId q = t.add_vertex();
    t.add_edge(v, q, 1.0);
    t.set_site(q, true);

    SpannerGraph g(MetricTag::Tree);
    int np = g.node_for(NodeKind::Site, 0, TreePoint::at_vertex(p));
    int nq = g.node_for(NodeKind::Site, 0, TreePoint::at_vertex(q));
    int ns1 = g.node_for(NodeKind::Steiner, 0, TreePoint::on_edge(uv, 0.3));
    int ns2 = g.node_for(NodeKind::Steiner, 0, TreePoint::on_edge(uv, 0.7));
    TreeLinkRealizer realizer{&t, 0};
    auto r1 = realizer.realize(g.nodes()[np].host, g.nodes()[ns1].host);
    g.add_link(np, ns1, r1.length, r1.complexity, std::move(r1.path));
    auto r2 = realizer.realize(g.nodes()[nq].host, g.nodes()[ns2].host);
    g.add_link(nq, ns2, r2.length, r2.complexity, std::move(r2.path));

    auto norm = normalize_spanner(g, t);
    REQUIRE(norm.links().size() == 3);
    int steiner_u = norm.find_node(NodeKind::Steiner, 0, TreePoint::at_vertex(u));
    int steiner_v = norm.find_node(NodeKind::Steiner, 0, TreePoint::at_vertex(v));
    REQUIRE(steiner_u >= 0);
    REQUIRE(steiner_v >= 0);
    std::set<std::pair<int, int>> expect{{std::min(np, steiner_u), std::max(np, steiner_u)},
                                         {std::min(steiner_u, steiner_v), std::max(steiner_u, steiner_v)},
                                         {std::min(nq, steiner_v), std::max(nq, steiner_v)}};
    std::set<std::pair<int, int>> got;
    for (const auto& l : norm.links()) got.insert({l.a, l.b});
    CHECK(got == expect);
}

TEST_CASE("normalization is monotone on spanners with injected interior pairs") {
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        int n = 10 + static_cast<int>((seed * 23) % 50);
        auto tree = gen_random_tree(n, 2 * n + 30, seed * 61);
        auto g = build_plain_tree_spanner(tree, 2);
        auto injected = inject_interior_steiner_pairs(g, tree, 3, seed);
        double ratio_before = tree_spanner_max_ratio(injected, tree);
        auto before = measure(injected);
        auto norm = normalize_spanner(injected, tree);  // internal monotonicity checks run here
        auto after = measure(norm);
        CHECK(after.complexity <= before.complexity);
        CHECK(after.steiner_count <= before.steiner_count);
        CHECK(tree_spanner_max_ratio(norm, tree) <= ratio_before * (1 + 1e-9));
        std::map<EdgeId, int> interior;
        for (const auto& node : norm.nodes())
            if (node.kind == NodeKind::Steiner && !node.host.on_vertex()) ++interior[node.host.edge];
        for (auto [e, cnt] : interior) CHECK(cnt <= 1);
    }
}

TEST_CASE("normalization refuses non-tree metrics") {
    SpannerGraph g(MetricTag::Polygon);
    EdgeWeightedTree t;
    t.add_vertex();
    CHECK_THROWS_AS(normalize_spanner(g, t), unsupported_error);
}
