#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "geospan/generators.hpp"
#include "geospan/io.hpp"
#include "geospan/verify.hpp"

using namespace geospan;

TEST_CASE("pitchfork star with k=1 is two pitchforks of two sites each") {
    auto t = gen_pitchfork_star(1, 4, 16);
    CHECK(t.site_count() == 4);
    CHECK(t.vertex_count() == 16);
    int handles = 0, teeth = 0;
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        if (t.edge(e).weight == 2.0) ++handles;
        if (t.edge(e).weight == 1.0) ++teeth;
    }
    CHECK(handles == 2);
    CHECK(teeth == 4);
    CHECK(t.child_edges(t.root()).size() == 2);
}

TEST_CASE("pitchfork star keeps intra-pitchfork distances near two") {
    int n = 24, m = 120, k = 3;
    auto t = gen_pitchfork_star(k, n, m);
    CHECK(t.site_count() == n);
    auto sites = t.in_order_sites();
    auto table = tree_site_distance_table(t, sites);
    // Sites within a pitchfork share their handle-side subtree: identify a
    // pitchfork by the child of the root on the site's root path.
    auto fork_of = [&](VertexId v) {
        VertexId u = v;
        while (t.parent(u) != t.root()) u = t.parent(u);
        return u;
    };
    double eps_bound = 2.0 + 4.0 * (1.0 / (4.0 * m)) * m;
    for (size_t i = 0; i < sites.size(); ++i)
        for (size_t j = i + 1; j < sites.size(); ++j) {
            if (fork_of(sites[i]) != fork_of(sites[j])) continue;
            CHECK(table[i][j] > 2.0);
            CHECK(table[i][j] < eps_bound);
        }
}

TEST_CASE("pitchfork star validates its preconditions") {
    CHECK_THROWS_AS(gen_pitchfork_star(2, 6, 64), input_error);   // n < 4k
    CHECK_THROWS_AS(gen_pitchfork_star(1, 4, 8), input_error);    // m too small
}

TEST_CASE("comb chain with k=1 has three combs and near-2h distances") {
    int k = 1, n = 9, m = 60;
    auto t = gen_comb_chain(k, n, m);
    CHECK(t.site_count() == n);
    auto sites = t.in_order_sites();
    auto table = tree_site_distance_table(t, sites);
    double w = 1.0 / (8.0 * m);
    for (size_t i = 0; i < sites.size(); ++i)
        for (size_t j = i + 1; j < sites.size(); ++j) {
            CHECK(table[i][j] > 2.0);
            CHECK(table[i][j] < 2.0 + 2.0 * w);
        }
}

TEST_CASE("comb chain corridors have balanced complexity") {
    int k = 2, n = 15, m = 120;
    auto t = gen_comb_chain(k, n, m);
    // Corridor edges carry the distinctive corridor weight; maximal runs
    // of them between teeth differ in length by at most one.
    std::map<double, int> weight_hist;
    for (EdgeId e = 0; e < t.edge_count(); ++e) ++weight_hist[t.edge(e).weight];
    // teeth weight 1.0, spine tiny, corridor weight in between
    double corridor_w = 0.0;
    for (auto [w, cnt] : weight_hist) {
        if (w < 1.0 && w > 1.0 / (16.0 * double(m) * m) * 2) corridor_w = w;
    }
    REQUIRE(corridor_w > 0.0);
    std::vector<int> runs;
    int run = 0;
    for (VertexId v : t.in_order_vertices()) {
        EdgeId pe = t.parent_edge(v);
        if (pe < 0) continue;
        if (t.edge(pe).weight == corridor_w) {
            ++run;
        } else if (run > 0) {
            runs.push_back(run);
            run = 0;
        }
    }
    if (run > 0) runs.push_back(run);
    REQUIRE(runs.size() == 2 * size_t(k));
    int lo = *std::min_element(runs.begin(), runs.end());
    int hi = *std::max_element(runs.begin(), runs.end());
    CHECK(hi - lo <= 1);
}

TEST_CASE("comb with two teeth and eight vertices") {
    auto t = gen_comb(2, 8);
    CHECK(t.site_count() == 2);
    CHECK(t.vertex_count() >= 8);
    CHECK(t.vertex_count() <= 8 + 3 * 2);
    auto sites = t.in_order_sites();
    // Corridor complexity floor(m/n) = 4 between the two attachments.
    CHECK(t.path_complexity(sites[0], sites[1]) == 4 + 2);
    double d = t.tree_distance(sites[0], sites[1]);
    CHECK(d > 2.0);
    CHECK(d < 2.0 + 0.25);
}

TEST_CASE("comb vertex count stays in the stated window across sizes") {
    for (int n : {4, 16, 64}) {
        for (int mult : {2, 8, 16}) {
            auto t = gen_comb(n, mult * n);
            CHECK(t.vertex_count() >= mult * n);
            CHECK(t.vertex_count() <= mult * n + 3 * n);
            CHECK(t.site_count() == n);
        }
    }
}

TEST_CASE("random trees are deterministic with sites at leaves") {
    auto a = gen_random_tree(20, 55, 42);
    auto b = gen_random_tree(20, 55, 42);
    std::ostringstream sa, sb;
    write_tree(sa, a);
    write_tree(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(a.site_count() == 20);
    CHECK(a.vertex_count() == 55);
    a.validate(true);
    for (EdgeId e = 0; e < a.edge_count(); ++e) CHECK(a.edge(e).weight > 0.0);

    auto c = gen_random_tree(20, 55, 43);
    std::ostringstream sc;
    write_tree(sc, c);
    CHECK(sa.str() != sc.str());
}

TEST_CASE("polygon families validate and keep sites strictly interior") {
    for (auto family : {PolygonFamily::Convex, PolygonFamily::Spiral, PolygonFamily::Staircase}) {
        auto inst = gen_random_polygon_instance(family, 10, 64, 7);
        CHECK_NOTHROW(inst.polygon.validate());
        CHECK(inst.sites.size() == 10);
        for (const auto& s : inst.sites)
            CHECK(locate_point(inst.polygon, s) == PointLocation::Inside);
        // General position: site x-coordinates distinct from each other and
        // from every vertex.
        for (size_t i = 0; i < inst.sites.size(); ++i) {
            for (size_t j = i + 1; j < inst.sites.size(); ++j)
                CHECK(inst.sites[i].x != inst.sites[j].x);
            for (const auto& v : inst.polygon.pts) CHECK(inst.sites[i].x != v.x);
        }
    }
}

TEST_CASE("polygon instances are deterministic per seed") {
    auto a = gen_random_polygon_instance(PolygonFamily::Spiral, 8, 72, 99);
    auto b = gen_random_polygon_instance(PolygonFamily::Spiral, 8, 72, 99);
    std::ostringstream sa, sb;
    write_polygon_instance(sa, a);
    write_polygon_instance(sb, b);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("generator parameter validation") {
    CHECK_THROWS_AS(gen_comb(1, 8), input_error);
    CHECK_THROWS_AS(gen_comb(4, 6), input_error);
    CHECK_THROWS_AS(gen_comb_chain(0, 9, 60), input_error);
    CHECK_THROWS_AS(gen_random_tree(5, 8, 1), input_error);
    CHECK_THROWS_AS(gen_random_polygon_instance(PolygonFamily::Convex, 0, 16, 1), input_error);
}
