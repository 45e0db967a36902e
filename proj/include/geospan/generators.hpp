// Deterministic instance generators: the lower-bound gadget trees
// (pitchfork star, comb chain, comb), seeded random trees and forests,
// and random polygon instances in three families.
#pragma once

#include <numbers>
#include <random>
#include <vector>

#include "geospan/core.hpp"
#include "geospan/geometry.hpp"

namespace geospan {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ── Gadget trees ────────────────────────────────────────────────────

/// Star of 2k pitchforks: handles of weight 2, teeth of weight 1, all
/// corridor edges of weight 1/(4m). Exactly n sites; vertex count m.
inline EdgeWeightedTree gen_pitchfork_star(int k, int n, int m) {
    if (k < 1) throw input_error("pitchfork star needs k >= 1");
    int forks = 2 * k;
    if (n < 4 * k) throw input_error("pitchfork star needs n >= 4k");
    if (m < 2 * n + 1) throw input_error("pitchfork star needs m >= 2n + 1");
    double eps = 1.0 / (4.0 * m);

    EdgeWeightedTree t;
    VertexId center = t.add_vertex();
    t.set_root(center);

    std::vector<int> sites_per(forks, n / forks);
    for (int i = 0; i < n % forks; ++i) ++sites_per[i];
    int extra = m - (1 + 2 * n);  // corridor interior vertices
    std::vector<int> extra_per(forks, extra / forks);
    for (int i = 0; i < extra % forks; ++i) ++extra_per[i];

    for (int f = 0; f < forks; ++f) {
        int teeth = sites_per[f];
        int corridors = teeth - 1;  // teeth >= 2 because n >= 4k
        std::vector<int> corridor_len(std::max(corridors, 1), 0);
        for (int j = 0; j < extra_per[f]; ++j) ++corridor_len[j % std::max(corridors, 1)];

        VertexId attach = t.add_vertex();
        t.add_edge(center, attach, 2.0);  // the handle
        for (int tooth = 0; tooth < teeth; ++tooth) {
            VertexId site = t.add_vertex();
            t.add_edge(attach, site, 1.0);
            t.set_site(site, true);
            if (tooth + 1 < teeth) {
                VertexId cur = attach;
                for (int j = 0; j < corridor_len[tooth]; ++j) {
                    VertexId nxt = t.add_vertex();
                    t.add_edge(cur, nxt, eps);
                    cur = nxt;
                }
                VertexId next_attach = t.add_vertex();
                t.add_edge(cur, next_attach, eps);
                attach = next_attach;
            }
        }
    }
    check(t.vertex_count() == m, "pitchfork star vertex bookkeeping");
    check(t.site_count() == n, "pitchfork star site bookkeeping");
    t.validate(true);
    return t;
}

/// Chain of 2k+1 combs joined by corridors of complexity ~m/(2k); teeth
/// of weight 1, total corridor weight 1/(8m), spine weights 1/(16m^2).
inline EdgeWeightedTree gen_comb_chain(int k, int n, int m) {
    if (k < 1) throw input_error("comb chain needs k >= 1");
    int combs = 2 * k + 1;
    if (n < combs) throw input_error("comb chain needs n >= 2k+1");
    if (m < combs * 4 || m < 2 * n + 2 * k + 1) throw input_error("comb chain needs more vertices");
    double w_total = 1.0 / (8.0 * m);
    double spine_w = 1.0 / (16.0 * double(m) * m);

    std::vector<int> sites_per(combs, n / combs);
    for (int i = 0; i < n % combs; ++i) ++sites_per[i];
    int corridors = combs - 1;
    int fixed = 1 + (2 * n - combs);  // root attachment + sites + spine attachments
    int corridor_budget = m - fixed;
    std::vector<int> corridor_edges(corridors, corridor_budget / corridors);
    for (int i = 0; i < corridor_budget % corridors; ++i) ++corridor_edges[i];
    int total_corridor_edges = 0;
    for (int c : corridor_edges) total_corridor_edges += c;
    double corridor_w = w_total / total_corridor_edges;

    EdgeWeightedTree t;
    VertexId attach = t.add_vertex();
    t.set_root(attach);
    for (int c = 0; c < combs; ++c) {
        for (int tooth = 0; tooth < sites_per[c]; ++tooth) {
            VertexId site = t.add_vertex();
            t.add_edge(attach, site, 1.0);
            t.set_site(site, true);
            if (tooth + 1 < sites_per[c]) {
                VertexId nxt = t.add_vertex();
                t.add_edge(attach, nxt, spine_w);
                attach = nxt;
            }
        }
        if (c + 1 < combs) {
            VertexId cur = attach;
            for (int j = 0; j < corridor_edges[c]; ++j) {
                VertexId nxt = t.add_vertex();
                t.add_edge(cur, nxt, corridor_w, false);
                cur = nxt;
            }
            attach = cur;
        }
    }
    check(t.site_count() == n, "comb chain site bookkeeping");
    t.validate(true);
    return t;
}

/// Single comb: n teeth of weight 1 separated by corridors of
/// complexity floor(m/n), plus a handle that pads the vertex count up
/// to m when the natural count falls short.
inline EdgeWeightedTree gen_comb(int n, int m) {
    if (n < 2) throw input_error("comb needs n >= 2");
    if (m < 2 * n) throw input_error("comb needs m >= 2n");
    int corridor = m / n;  // complexity M per corridor
    double w_total = 1.0 / (8.0 * m);
    double corridor_w = w_total / (double(corridor) * n);
    double pad_w = 1.0 / (16.0 * double(m) * m);

    int natural = 1 + 2 * n + (corridor - 1) * (n - 1);
    int pad = std::max(0, m - natural);

    EdgeWeightedTree t;
    VertexId cur = t.add_vertex();
    t.set_root(cur);
    for (int j = 0; j < pad; ++j) {
        VertexId nxt = t.add_vertex();
        t.add_edge(cur, nxt, pad_w);
        cur = nxt;
    }
    VertexId attach = t.add_vertex();
    t.add_edge(cur, attach, pad_w);
    for (int tooth = 0; tooth < n; ++tooth) {
        VertexId site = t.add_vertex();
        t.add_edge(attach, site, 1.0);
        t.set_site(site, true);
        if (tooth + 1 < n) {
            cur = attach;
            for (int j = 0; j + 1 < corridor; ++j) {
                VertexId nxt = t.add_vertex();
                t.add_edge(cur, nxt, corridor_w);
                cur = nxt;
            }
            VertexId nxt = t.add_vertex();
            t.add_edge(cur, nxt, corridor_w);
            attach = nxt;
        }
    }
    check(t.site_count() == n, "comb site bookkeeping");
    check(t.vertex_count() >= m && t.vertex_count() <= m + 3 * n, "comb vertex bookkeeping");
    t.validate(true);
    return t;
}

// ── Random trees and forests ────────────────────────────────────────

/// Random rooted tree with n site leaves, m vertices, weights uniform
/// in (0.1, 10); deterministic per seed.
inline EdgeWeightedTree gen_random_tree(int n, int m, uint64_t seed) {
    if (n < 1) throw input_error("random tree needs n >= 1");
    if (m < 2 * n - 1) throw input_error("random tree needs m >= 2n-1");
    std::mt19937_64 rng(seed);
    if (n == 1) {
        // A chain ending at the single site.
        EdgeWeightedTree t;
        std::uniform_real_distribution<double> weight(0.1, 10.0);
        VertexId cur = t.add_vertex();
        t.set_root(cur);
        for (int i = 1; i < m; ++i) {
            VertexId nxt = t.add_vertex();
            t.add_edge(cur, nxt, weight(rng));
            cur = nxt;
        }
        t.set_site(cur, true);
        t.validate(true);
        return t;
    }

    // Random binary hierarchy over the sites, then edge subdivisions up
    // to the vertex budget.
    struct Node {
        std::vector<int> children;
        bool site = false;
    };
    std::vector<Node> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i].site = true;
    std::vector<int> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = i;
    while (roots.size() > 1) {
        std::uniform_int_distribution<size_t> pick(0, roots.size() - 1);
        size_t a = pick(rng);
        size_t b = pick(rng);
        while (b == a) b = pick(rng);
        if (a > b) std::swap(a, b);
        Node parent;
        parent.children = {roots[a], roots[b]};
        if (rng() & 1) std::swap(parent.children[0], parent.children[1]);
        nodes.push_back(parent);
        roots[a] = static_cast<int>(nodes.size() - 1);
        roots.erase(roots.begin() + b);
    }
    int root = n == 1 ? 0 : roots[0];

    // Subdivide random edges until the vertex count reaches m.
    std::vector<std::pair<int, int>> edges;  // (parent, child-slot resolved later)
    auto collect_edges = [&]() {
        edges.clear();
        for (int v = 0; v < static_cast<int>(nodes.size()); ++v)
            for (size_t c = 0; c < nodes[v].children.size(); ++c)
                edges.emplace_back(v, static_cast<int>(c));
    };
    while (static_cast<int>(nodes.size()) < m) {
        collect_edges();
        std::uniform_int_distribution<size_t> pick(0, edges.size() - 1);
        auto [p, slot] = edges[pick(rng)];
        int child = nodes[p].children[slot];
        Node mid;
        mid.children = {child};
        nodes.push_back(mid);
        nodes[p].children[slot] = static_cast<int>(nodes.size() - 1);
    }

    EdgeWeightedTree t;
    std::uniform_real_distribution<double> weight(0.1, 10.0);
    std::vector<std::pair<int, VertexId>> stack;
    std::vector<VertexId> emitted(nodes.size(), -1);
    VertexId r = t.add_vertex();
    t.set_root(r);
    t.set_site(r, nodes[root].site);
    emitted[root] = r;
    stack.emplace_back(root, r);
    while (!stack.empty()) {
        auto [v, ev] = stack.back();
        stack.pop_back();
        for (int c : nodes[v].children) {
            VertexId ec = t.add_vertex();
            t.add_edge(ev, ec, weight(rng));
            t.set_site(ec, nodes[c].site);
            stack.emplace_back(c, ec);
        }
    }
    t.validate(true);
    return t;
}

/// Random forest of up to max_trees trees with n total sites.
inline Forest gen_random_forest(int n, int m, int max_trees, uint64_t seed) {
    if (max_trees < 1) throw input_error("forest needs at least one tree");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<int> tree_count(1, max_trees);
    int trees = std::min(tree_count(rng), n);
    std::vector<int> sites_per(trees, n / trees);
    for (int i = 0; i < n % trees; ++i) ++sites_per[i];
    Forest f;
    for (int i = 0; i < trees; ++i) {
        int ni = sites_per[i];
        int mi = std::max(2 * ni - 1, (m / trees));
        f.trees.push_back(gen_random_tree(ni, mi, seed * 1000003ull + i));
    }
    return f;
}

// ── Random polygon instances ────────────────────────────────────────

enum class PolygonFamily { Convex, Spiral, Staircase };

struct PolygonInstance {
    SimplePolygon polygon;
    std::vector<Point2> sites;
};

/// Deterministic nudges that put the instance in general position:
/// pairwise distinct site x-coordinates, distinct from every vertex
/// x-coordinate, all sites strictly interior.
inline void normalize_instance(PolygonInstance& inst) {
    const double delta = 1e-6 * std::max(1.0, inst.polygon.scale());
    auto collides = [&](double x, int self) {
        for (const auto& v : inst.polygon.pts)
            if (v.x == x) return true;
        for (size_t j = 0; j < inst.sites.size(); ++j)
            if (static_cast<int>(j) != self && inst.sites[j].x == x) return true;
        return false;
    };
    for (size_t i = 0; i < inst.sites.size(); ++i) {
        int guard = 0;
        while (collides(inst.sites[i].x, static_cast<int>(i)) && guard < 1000) {
            inst.sites[i].x += delta * (1 + static_cast<int>(i % 7));
            ++guard;
        }
        if (locate_point(inst.polygon, inst.sites[i]) != PointLocation::Inside)
            throw input_error("site not strictly interior after normalization");
    }
}

inline PolygonInstance gen_random_polygon_instance(PolygonFamily family, int n, int m,
                                                   uint64_t seed) {
    if (m < 4) throw input_error("polygon generator needs m >= 4");
    if (n < 1) throw input_error("polygon generator needs n >= 1");
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PolygonInstance inst;

    if (family == PolygonFamily::Convex) {
        double radius = 10.0;
        for (int i = 0; i < m; ++i) {
            double theta = kTwoPi * (i + 0.8 * (unit(rng) - 0.5)) / m;
            inst.polygon.pts.push_back({radius * std::cos(theta), radius * std::sin(theta)});
        }
        double safe = m >= 8 ? 0.7 * radius : 0.45 * radius;
        for (int i = 0; i < n; ++i) {
            double a = kTwoPi * unit(rng);
            double r = safe * std::sqrt(unit(rng));
            inst.sites.push_back({r * std::cos(a), r * std::sin(a)});
        }
    } else if (family == PolygonFamily::Spiral) {
        int half = m / 2;
        double turns = std::max(1.0, std::min(2.25, m / 28.0));
        double theta_max = kTwoPi * turns;
        double r0 = 3.0, growth = 1.0;
        double gap = 0.45 * kTwoPi * growth;
        auto r_out = [&](double th) { return r0 + growth * th; };
        for (int i = 0; i < half; ++i) {
            double th = theta_max * i / (half - 1);
            inst.polygon.pts.push_back({r_out(th) * std::cos(th), r_out(th) * std::sin(th)});
        }
        int inner = m - half;
        for (int i = inner - 1; i >= 0; --i) {
            double th = theta_max * i / (inner - 1);
            double r = r_out(th) - gap;
            inst.polygon.pts.push_back({r * std::cos(th), r * std::sin(th)});
        }
        if (inst.polygon.signed_area() < 0)
            std::reverse(inst.polygon.pts.begin(), inst.polygon.pts.end());
        for (int i = 0; i < n; ++i) {
            double th = theta_max * (0.04 + 0.92 * unit(rng));
            double r = r_out(th) - gap * (0.35 + 0.3 * unit(rng));
            inst.sites.push_back({r * std::cos(th), r * std::sin(th)});
        }
    } else {
        int steps = std::max(1, (m - 2) / 4);
        double lift = 1.6;
        std::vector<Point2> lower;
        lower.push_back({0.0, 0.0});
        for (int i = 0; i < steps; ++i) {
            lower.push_back({double(i + 1), double(i)});
            lower.push_back({double(i + 1), double(i + 1)});
        }
        inst.polygon.pts = lower;
        for (auto it = lower.rbegin(); it != lower.rend(); ++it)
            inst.polygon.pts.push_back({it->x, it->y + lift});
        if (inst.polygon.signed_area() < 0)
            std::reverse(inst.polygon.pts.begin(), inst.polygon.pts.end());
        auto sample_site = [&]() -> Point2 {
            double x = 0.05 + (steps - 0.1) * unit(rng);
            double stair = std::floor(x);
            return {x, stair + lift * (0.25 + 0.5 * unit(rng))};
        };
        for (int i = 0; i < n; ++i) {
            Point2 s = sample_site();
            int guard = 0;
            while (locate_point(inst.polygon, s) != PointLocation::Inside && guard++ < 200)
                s = sample_site();
            inst.sites.push_back(s);
        }
    }

    inst.polygon.validate();
    for (const auto& s : inst.sites) {
        if (locate_point(inst.polygon, s) != PointLocation::Inside)
            throw input_error("generated site not strictly interior");
    }
    normalize_instance(inst);
    return inst;
}

}  // namespace geospan
