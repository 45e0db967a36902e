#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "geospan/generators.hpp"
#include "geospan/geometry.hpp"
#include "geospan/verify.hpp"

using namespace geospan;

namespace {

SimplePolygon make_polygon(std::vector<Point2> pts) {
    SimplePolygon p;
    p.pts = std::move(pts);
    p.validate();
    return p;
}

SimplePolygon l_shape() {
    return make_polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
}

SimplePolygon unit_square() { return make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

SimplePolygon hourglass() {
    SimplePolygon p;
    p.pts = {{0, 0}, {2, 0.9}, {4, 0}, {4, 3}, {2, 2.1}, {0, 3}};
    if (p.signed_area() < 0) std::reverse(p.pts.begin(), p.pts.end());
    p.validate();
    return p;
}

}  // namespace

TEST_CASE("polygon validation catches defects") {
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 0}}), input_error);
    CHECK_THROWS_AS(make_polygon({{0, 0}, {0, 1}, {1, 1}}), input_error);  // clockwise
    CHECK_THROWS_AS(make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), input_error);  // bowtie
    CHECK_NOTHROW(l_shape());
}

TEST_CASE("geodesic in a convex polygon is the straight segment") {
    auto poly = make_polygon({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    auto path = geodesic_path(poly, {0.5, 0.5}, {3.5, 3.2});
    CHECK(path.complexity == 1);
    CHECK(path.length == doctest::Approx(dist({0.5, 0.5}, {3.5, 3.2})));
}

TEST_CASE("geodesic between identical points is degenerate") {
    auto poly = unit_square();
    auto path = geodesic_path(poly, {0.5, 0.5}, {0.5, 0.5});
    CHECK(path.length == 0.0);
    CHECK(path.complexity == 0);
}

TEST_CASE("geodesic around the reflex corner of an L-shape") {
    auto poly = l_shape();
    Point2 p{1.9, 0.4}, q{0.8, 1.9};
    auto path = geodesic_path(poly, p, q);
    REQUIRE(path.points.size() == 3);
    CHECK(path.points[1] == Point2{1, 1});
    CHECK(path.complexity == 2);
    double expect = dist(p, {1, 1}) + dist({1, 1}, q);
    CHECK(path.length == doctest::Approx(expect));

    VisibilityOracle oracle(poly, {});
    CHECK(path.length == doctest::Approx(oracle.distance(p, q)).epsilon(1e-9));
}

TEST_CASE("geodesic rejects points outside the polygon") {
    auto poly = unit_square();
    CHECK_THROWS_AS(geodesic_path(poly, {2, 2}, {0.5, 0.5}), input_error);
}

TEST_CASE("funnel and visibility oracle agree on random polygon instances") {
    for (auto family : {PolygonFamily::Convex, PolygonFamily::Spiral, PolygonFamily::Staircase}) {
        auto inst = gen_random_polygon_instance(family, 8, 48, 5);
        PolygonGeometry engine(inst.polygon);
        VisibilityOracle oracle(inst.polygon, inst.sites);
        auto table = oracle.extra_table();
        for (size_t i = 0; i < inst.sites.size(); ++i)
            for (size_t j = i + 1; j < inst.sites.size(); ++j) {
                auto path = engine.shortest_path(inst.sites[i], inst.sites[j]);
                CHECK(approx_eq(path.length, table[i][j], 1e-9));
            }
    }
}

TEST_CASE("geodesic triangle inequality on random triples") {
    auto inst = gen_random_polygon_instance(PolygonFamily::Spiral, 12, 64, 9);
    PolygonGeometry engine(inst.polygon);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<size_t> pick(0, inst.sites.size() - 1);
    for (int it = 0; it < 60; ++it) {
        Point2 a = inst.sites[pick(rng)], b = inst.sites[pick(rng)], c = inst.sites[pick(rng)];
        double ab = engine.shortest_path(a, b).length;
        double bc = engine.shortest_path(b, c).length;
        double ac = engine.shortest_path(a, c).length;
        CHECK(ac <= ab + bc + 1e-9 * std::max(1.0, ac));
    }
}

TEST_CASE("projection of a point that sees the chord is the clamped foot") {
    auto poly = make_polygon({{0, 0}, {4, 0}, {4, 2}, {0, 2}});
    auto chords = vertical_chords_at(poly, 2.0);
    REQUIRE(chords.size() == 1);
    auto proj = project_to_chord(poly, {0.7, 1.3}, chords[0]);
    CHECK(proj.point.x == doctest::Approx(2.0));
    CHECK(proj.point.y == doctest::Approx(1.3));
    CHECK(proj.distance == doctest::Approx(1.3));
    CHECK(proj.param == doctest::Approx(1.3));
}

TEST_CASE("projection of a point on the chord is the point itself") {
    auto poly = make_polygon({{0, 0}, {4, 0}, {4, 2}, {0, 2}});
    auto chords = vertical_chords_at(poly, 2.0);
    auto proj = project_to_chord(poly, {2.0, 0.77}, chords[0]);
    CHECK(proj.distance == 0.0);
    CHECK(proj.point == Point2{2.0, 0.77});
}

TEST_CASE("occluded projection matches dense sampling in an hourglass") {
    auto poly = hourglass();
    auto chords = vertical_chords_at(poly, 3.5);
    REQUIRE(chords.size() == 1);
    const Chord& chord = chords[0];
    Point2 p{0.5, 2.4};  // left chamber; the neck occludes most of the chord
    auto proj = project_to_chord(poly, p, chord);

    PolygonGeometry engine(poly);
    double best = std::numeric_limits<double>::infinity();
    double best_param = 0;
    for (double s = 0.0; s <= chord.span() + 1e-12; s += 1e-4) {
        Point2 target{chord.x(), chord.lower.y + std::min(s, chord.span())};
        double d = engine.shortest_path(p, target).length;
        if (d < best) {
            best = d;
            best_param = std::min(s, chord.span());
        }
    }
    CHECK(std::abs(proj.distance - best) <= 1e-6);
    CHECK(std::abs(proj.param - best_param) <= 2e-4);
}

TEST_CASE("rectangle separator balances the sites") {
    auto poly = make_polygon({{0, 0}, {10, 0}, {10, 2}, {0, 2}});
    std::vector<Point2> sites;
    for (int i = 0; i < 8; ++i) sites.push_back({0.5 + i * 1.2, 1.0});
    Chord chord = vertical_separator(poly, sites);
    int left_cnt = 0;
    for (const auto& s : sites) left_cnt += (s.x <= chord.x()) ? 1 : 0;
    CHECK(left_cnt <= (2 * 8 + 2) / 3);
    CHECK(8 - left_cnt <= (2 * 8 + 2) / 3);
}

TEST_CASE("two sites always separate") {
    auto poly = make_polygon({{0, 0}, {10, 0}, {10, 2}, {0, 2}});
    std::vector<Point2> sites{{2.5, 1.0}, {7.5, 0.5}};
    Chord chord = vertical_separator(poly, sites);
    auto [left, right] = split_polygon(poly, chord);
    int cl = 0;
    for (const auto& s : sites) cl += (chord.on_chord(s) || contains(left, s)) ? 1 : 0;
    CHECK(cl == 1);
}

TEST_CASE("random instances satisfy the separator balance bound") {
    for (auto family : {PolygonFamily::Convex, PolygonFamily::Spiral, PolygonFamily::Staircase}) {
        for (uint64_t seed = 1; seed <= 4; ++seed) {
            int n = 6 + static_cast<int>((seed * 11) % 28);
            auto inst = gen_random_polygon_instance(family, n, 64, seed * 7);
            Chord chord = vertical_separator(inst.polygon, inst.sites);
            auto [left, right] = split_polygon(inst.polygon, chord);
            int cl = 0;
            for (const auto& s : inst.sites)
                cl += (chord.on_chord(s) || contains(left, s)) ? 1 : 0;
            int bound = std::min((2 * n + 2) / 3, n - 1);
            CHECK(cl <= bound);
            CHECK(n - cl <= bound);
        }
    }
}

TEST_CASE("splitting the unit square at x=0.5 yields two half rectangles") {
    auto poly = unit_square();
    auto chords = vertical_chords_at(poly, 0.5);
    REQUIRE(chords.size() == 1);
    auto [left, right] = split_polygon(poly, chords[0]);
    CHECK(left.area() == doctest::Approx(0.5));
    CHECK(right.area() == doctest::Approx(0.5));
    CHECK(contains(left, {0.25, 0.5}));
    CHECK(contains(right, {0.75, 0.5}));
    CHECK(left.size() + right.size() <= poly.size() + 4);
}

TEST_CASE("splitting conserves area on random instances") {
    for (auto family : {PolygonFamily::Convex, PolygonFamily::Spiral, PolygonFamily::Staircase}) {
        auto inst = gen_random_polygon_instance(family, 6, 56, 17);
        Chord chord = vertical_separator(inst.polygon, inst.sites);
        auto [left, right] = split_polygon(inst.polygon, chord);
        left.validate();
        right.validate();
        CHECK(approx_eq(left.area() + right.area(), inst.polygon.area(), 1e-9));
        CHECK(left.size() + right.size() <= inst.polygon.size() + 4);
    }
}

TEST_CASE("rectangle SPT hangs every visible site off the chord by one edge") {
    auto poly = make_polygon({{0, 0}, {4, 0}, {4, 2}, {0, 2}});
    auto chords = vertical_chords_at(poly, 2.0);
    std::vector<Point2> sites{{0.5, 0.5}, {1.1, 1.5}, {3.3, 0.9}};
    auto spt = build_spt(poly, chords[0], sites);
    spt.tree.validate();
    for (size_t i = 0; i < sites.size(); ++i) {
        VertexId v = spt.site_node[i];
        REQUIRE(v >= 0);
        VertexId parent = spt.tree.parent(v);
        CHECK(spt.info[parent].kind == ChordSPT::Kind::ChordPoint);
        CHECK(spt.tree.edge(spt.tree.parent_edge(v)).weight ==
              doctest::Approx(std::abs(sites[i].x - 2.0)));
    }
}

TEST_CASE("SPT reproduces the weighted 1-d distances between sites") {
    for (auto family : {PolygonFamily::Convex, PolygonFamily::Spiral, PolygonFamily::Staircase}) {
        auto inst = gen_random_polygon_instance(family, 7, 72, 29);
        Chord chord = vertical_separator(inst.polygon, inst.sites);
        auto spt = build_spt(inst.polygon, chord, inst.sites);
        spt.tree.validate();
        PolygonGeometry engine(inst.polygon);
        for (size_t i = 0; i < inst.sites.size(); ++i) {
            // Tree distance site -> projection equals the geodesic distance.
            double via_tree = 0.0;
            VertexId v = spt.site_node[i];
            while (spt.info[v].kind != ChordSPT::Kind::ChordPoint) {
                via_tree += spt.tree.edge(spt.tree.parent_edge(v)).weight;
                v = spt.tree.parent(v);
            }
            double geo = engine.shortest_path(inst.sites[i], spt.site_projection[i]).length;
            CHECK(approx_eq(via_tree, geo, 1e-9));
        }
        for (size_t i = 0; i < inst.sites.size(); ++i) {
            for (size_t j = i + 1; j < inst.sites.size(); ++j) {
                double d_w = engine.shortest_path(inst.sites[i], spt.site_projection[i]).length +
                             std::abs(spt.site_param[i] - spt.site_param[j]) +
                             engine.shortest_path(inst.sites[j], spt.site_projection[j]).length;
                double via_tree = spt.tree.tree_distance(spt.site_node[i], spt.site_node[j]);
                CHECK(via_tree <= d_w * (1 + 1e-9) + 1e-12);
                double geo = engine.shortest_path(inst.sites[i], inst.sites[j]).length;
                CHECK(geo <= via_tree * (1 + 1e-9) + 1e-12);
            }
        }
    }
}

TEST_CASE("SPT edges do not cross each other") {
    auto inst = gen_random_polygon_instance(PolygonFamily::Staircase, 8, 60, 31);
    Chord chord = vertical_separator(inst.polygon, inst.sites);
    auto spt = build_spt(inst.polygon, chord, inst.sites);
    std::vector<std::pair<Point2, Point2>> segments;
    for (VertexId v = 0; v < spt.tree.vertex_count(); ++v) {
        if (spt.tree.parent(v) < 0) continue;
        segments.emplace_back(spt.info[v].position, spt.info[spt.tree.parent(v)].position);
    }
    for (size_t i = 0; i < segments.size(); ++i)
        for (size_t j = i + 1; j < segments.size(); ++j)
            CHECK_FALSE(segments_properly_intersect(segments[i].first, segments[i].second,
                                                    segments[j].first, segments[j].second));
}

TEST_CASE("SPT vertex count stays within the structural budget") {
    auto inst = gen_random_polygon_instance(PolygonFamily::Convex, 10, 40, 41);
    Chord chord = vertical_separator(inst.polygon, inst.sites);
    auto spt = build_spt(inst.polygon, chord, inst.sites);
    int m = inst.polygon.size();
    int n = static_cast<int>(inst.sites.size());
    // Before pruning: vertices, sites, their chord feet, and the endpoints.
    CHECK(spt.tree.vertex_count() <= 2 * (m + n) + 2);
}
