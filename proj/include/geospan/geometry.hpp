// Simple-polygon substrate: exact geodesic shortest paths through a
// triangulated sleeve, vertical chord separators, chord projections,
// polygon splitting, and the shortest path tree of a chord.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "geospan/core.hpp"

namespace geospan {

// ── Planar primitives ───────────────────────────────────────────────

inline Point2 operator-(const Point2& a, const Point2& b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(const Point2& a, const Point2& b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator*(double s, const Point2& a) { return {s * a.x, s * a.y}; }

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double orient(const Point2& a, const Point2& b, const Point2& c) {
    return cross(b - a, c - a);
}
inline double norm(const Point2& a) { return std::hypot(a.x, a.y); }
inline double dist(const Point2& a, const Point2& b) { return norm(a - b); }

inline double polyline_length(const std::vector<Point2>& pts) {
    double len = 0.0;
    for (size_t i = 1; i < pts.size(); ++i) len += dist(pts[i - 1], pts[i]);
    return len;
}

// ── Simple polygon ──────────────────────────────────────────────────

/// Counterclockwise simple ring. `origin` carries provenance through
/// splits: index into the root polygon, or -1 for chord-created points.
struct SimplePolygon {
    std::vector<Point2> pts;
    std::vector<int> origin;

    int size() const { return static_cast<int>(pts.size()); }
    const Point2& at(int i) const { return pts[((i % size()) + size()) % size()]; }

    double signed_area() const {
        double a = 0.0;
        for (int i = 0; i < size(); ++i) {
            const Point2& p = pts[i];
            const Point2& q = pts[(i + 1) % size()];
            a += cross(p, q);
        }
        return 0.5 * a;
    }
    double area() const { return std::abs(signed_area()); }

    double scale() const {
        double lo_x = pts[0].x, hi_x = pts[0].x, lo_y = pts[0].y, hi_y = pts[0].y;
        for (const auto& p : pts) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
        return std::max(hi_x - lo_x, hi_y - lo_y);
    }

    int origin_of(int i) const {
        if (origin.empty()) return i;
        return origin[i];
    }

    void validate() const;
};

inline bool on_segment(const Point2& a, const Point2& b, const Point2& p, double eps) {
    if (std::abs(orient(a, b, p)) > eps * std::max(1.0, dist(a, b))) return false;
    return dot(p - a, b - a) >= -eps && dot(p - b, a - b) >= -eps;
}

/// Strictly-interior / boundary / outside classification by crossing
/// number; boundary points are detected explicitly.
enum class PointLocation { Inside, Boundary, Outside };

inline PointLocation locate_point(const SimplePolygon& poly, const Point2& p) {
    const double eps = 1e-12 * std::max(1.0, poly.scale());
    int m = poly.size();
    for (int i = 0; i < m; ++i) {
        if (on_segment(poly.pts[i], poly.pts[(i + 1) % m], p, eps)) return PointLocation::Boundary;
    }
    // Ray to +x with the half-open rule on y.
    bool inside = false;
    for (int i = 0; i < m; ++i) {
        const Point2& a = poly.pts[i];
        const Point2& b = poly.pts[(i + 1) % m];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_at = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (x_at > p.x) inside = !inside;
        }
    }
    return inside ? PointLocation::Inside : PointLocation::Outside;
}

inline bool contains(const SimplePolygon& poly, const Point2& p, bool include_boundary = true) {
    auto loc = locate_point(poly, p);
    return loc == PointLocation::Inside || (include_boundary && loc == PointLocation::Boundary);
}

inline bool segments_properly_intersect(const Point2& a, const Point2& b, const Point2& c,
                                        const Point2& d) {
    double o1 = orient(a, b, c), o2 = orient(a, b, d);
    double o3 = orient(c, d, a), o4 = orient(c, d, b);
    return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
}

inline void SimplePolygon::validate() const {
    if (size() < 3) throw input_error("polygon needs at least 3 vertices");
    const double eps = 1e-12 * std::max(1.0, scale());
    for (int i = 0; i < size(); ++i) {
        if (dist(pts[i], pts[(i + 1) % size()]) <= eps)
            throw input_error("repeated consecutive polygon vertices");
    }
    if (signed_area() <= 0.0) throw input_error("polygon must be counterclockwise");
    int m = size();
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
            if (segments_properly_intersect(pts[i], pts[(i + 1) % m], pts[j], pts[(j + 1) % m]))
                throw input_error("polygon is self-intersecting");
        }
    }
}

/// True when the open segment a-b stays inside the closed polygon.
/// Splits the segment at every boundary contact and checks each piece.
inline bool segment_inside(const SimplePolygon& poly, const Point2& a, const Point2& b) {
    const double eps = 1e-12 * std::max(1.0, poly.scale());
    if (!contains(poly, a) || !contains(poly, b)) return false;
    int m = poly.size();
    std::vector<double> params{0.0, 1.0};
    Point2 d = b - a;
    double len2 = dot(d, d);
    if (len2 == 0.0) return true;
    for (int i = 0; i < m; ++i) {
        const Point2& c = poly.pts[i];
        const Point2& e = poly.pts[(i + 1) % m];
        if (segments_properly_intersect(a, b, c, e)) {
            double t = cross(c - a, e - c) / cross(d, e - c);
            params.push_back(std::clamp(t, 0.0, 1.0));
        }
        // Touches: polygon vertex on the segment.
        if (on_segment(a, b, c, eps)) params.push_back(std::clamp(dot(c - a, d) / len2, 0.0, 1.0));
    }
    std::sort(params.begin(), params.end());
    for (size_t i = 1; i < params.size(); ++i) {
        if (params[i] - params[i - 1] < 1e-12) continue;
        double t = 0.5 * (params[i] + params[i - 1]);
        if (locate_point(poly, a + t * d) == PointLocation::Outside) return false;
    }
    return true;
}

// ── Triangulation and geodesic paths ────────────────────────────────

struct GeodesicPath {
    std::vector<Point2> points;
    double length = 0.0;
    int complexity = 0;  // segment count, collinear runs merged
};

inline GeodesicPath make_geodesic_path(std::vector<Point2> raw, double scale) {
    GeodesicPath out;
    const double eps = 1e-12 * std::max(1.0, scale);
    std::vector<Point2> pts;
    for (const auto& p : raw) {
        if (!pts.empty() && dist(pts.back(), p) <= eps) continue;
        pts.push_back(p);
    }
    out.length = polyline_length(pts);
    out.points = pts;
    if (pts.size() < 2) {
        out.complexity = 0;
        return out;
    }
    int segments = 1;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        Point2 u = pts[i] - pts[i - 1];
        Point2 v = pts[i + 1] - pts[i];
        bool collinear = std::abs(cross(u, v)) <= eps * std::max(1.0, norm(u) * norm(v)) && dot(u, v) > 0.0;
        if (!collinear) ++segments;
    }
    out.complexity = segments;
    return out;
}

/// Triangulated polygon with sleeve/funnel shortest-path queries.
class PolygonGeometry {
public:
    explicit PolygonGeometry(const SimplePolygon& poly) : poly_(&poly), scale_(poly.scale()) {
        triangulate();
    }

    const SimplePolygon& polygon() const { return *poly_; }

    /// Exact geodesic between two points of the closed polygon.
    GeodesicPath shortest_path(const Point2& p, const Point2& q) const {
        if (p == q) return make_geodesic_path({p}, scale_);
        auto raw = shortest_path_points(p, q);
        return make_geodesic_path(std::move(raw), scale_);
    }

    std::vector<Point2> shortest_path_points(const Point2& p, const Point2& q) const {
        int tp = locate_triangle(p);
        int tq = locate_triangle(q);
        if (tp < 0 || tq < 0) throw input_error("point outside polygon");
        if (tp == tq) return {p, q};
        auto sleeve = dual_path(tp, tq);
        auto portals = portals_for(sleeve);
        portals.emplace_back(q, q);
        return string_pull(p, q, portals);
    }

    /// Funnel of p onto a boundary edge (a,b): shared prefix from p to
    /// the funnel apex, then the two convex chains to a and b.
    struct Funnel {
        std::vector<Point2> prefix;   // p ... apex (apex included)
        std::vector<Point2> chain_a;  // apex ... a
        std::vector<Point2> chain_b;  // apex ... b
    };

    Funnel funnel_to_edge(const Point2& p, const Point2& a, const Point2& b) const {
        auto path_a = shortest_path_points(p, a);
        auto path_b = shortest_path_points(p, b);
        dedupe(path_a);
        dedupe(path_b);
        size_t common = 0;
        while (common < path_a.size() && common < path_b.size() && path_a[common] == path_b[common])
            ++common;
        if (common == 0) common = 1;  // both start at p
        Funnel f;
        f.prefix.assign(path_a.begin(), path_a.begin() + common);
        f.chain_a.assign(path_a.begin() + (common - 1), path_a.end());
        f.chain_b.assign(path_b.begin() + (common - 1), path_b.end());
        return f;
    }

    int triangle_count() const { return static_cast<int>(tris_.size()); }

private:
    void dedupe(std::vector<Point2>& pts) const {
        const double eps = 1e-12 * std::max(1.0, scale_);
        std::vector<Point2> out;
        for (const auto& p : pts)
            if (out.empty() || dist(out.back(), p) > eps) out.push_back(p);
        pts = std::move(out);
    }

    void triangulate() {
        int m = poly_->size();
        std::vector<int> ring(m);
        for (int i = 0; i < m; ++i) ring[i] = i;
        const double eps = 1e-12 * std::max(1.0, scale_);
        auto pt = [&](int idx) { return poly_->pts[idx]; };
        while (ring.size() > 3) {
            bool clipped = false;
            int r = static_cast<int>(ring.size());
            for (int i = 0; i < r; ++i) {
                int ia = ring[(i + r - 1) % r], ib = ring[i], ic = ring[(i + 1) % r];
                if (orient(pt(ia), pt(ib), pt(ic)) <= eps) continue;  // reflex or flat corner
                bool ear = true;
                for (int j = 0; j < r && ear; ++j) {
                    int iv = ring[j];
                    if (iv == ia || iv == ib || iv == ic) continue;
                    if (orient(pt(ia), pt(ib), pt(iv)) >= -eps &&
                        orient(pt(ib), pt(ic), pt(iv)) >= -eps &&
                        orient(pt(ic), pt(ia), pt(iv)) >= -eps)
                        ear = false;
                }
                if (!ear) continue;
                tris_.push_back({ia, ib, ic});
                ring.erase(ring.begin() + i);
                clipped = true;
                break;
            }
            if (!clipped) throw input_error("ear clipping failed; polygon may be degenerate");
        }
        tris_.push_back({ring[0], ring[1], ring[2]});

        adj_.assign(tris_.size(), {-1, -1, -1});
        std::map<std::pair<int, int>, std::pair<int, int>> edge_to_tri;
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            for (int s = 0; s < 3; ++s) {
                int u = tris_[ti][s], v = tris_[ti][(s + 1) % 3];
                auto key = std::minmax(u, v);
                auto it = edge_to_tri.find(key);
                if (it == edge_to_tri.end()) {
                    edge_to_tri[key] = {ti, s};
                } else {
                    adj_[ti][s] = it->second.first;
                    adj_[it->second.first][it->second.second] = ti;
                }
            }
        }
    }

    int locate_triangle(const Point2& p) const {
        const double eps = 1e-9 * std::max(1.0, scale_) * std::max(1.0, scale_);
        int best = -1;
        double best_min = -std::numeric_limits<double>::infinity();
        for (int ti = 0; ti < static_cast<int>(tris_.size()); ++ti) {
            const auto& t = tris_[ti];
            double m1 = orient(poly_->pts[t[0]], poly_->pts[t[1]], p);
            double m2 = orient(poly_->pts[t[1]], poly_->pts[t[2]], p);
            double m3 = orient(poly_->pts[t[2]], poly_->pts[t[0]], p);
            double mn = std::min({m1, m2, m3});
            if (mn > best_min) {
                best_min = mn;
                best = ti;
            }
        }
        return best_min >= -eps ? best : -1;
    }

    std::vector<int> dual_path(int from, int to) const {
        std::vector<int> prev(tris_.size(), -2);
        std::vector<int> queue{from};
        prev[from] = -1;
        for (size_t qi = 0; qi < queue.size(); ++qi) {
            int t = queue[qi];
            if (t == to) break;
            for (int s = 0; s < 3; ++s) {
                int nb = adj_[t][s];
                if (nb >= 0 && prev[nb] == -2) {
                    prev[nb] = t;
                    queue.push_back(nb);
                }
            }
        }
        std::vector<int> path;
        for (int t = to; t != -1; t = prev[t]) path.push_back(t);
        std::reverse(path.begin(), path.end());
        return path;
    }

    std::vector<std::pair<Point2, Point2>> portals_for(const std::vector<int>& sleeve) const {
        std::vector<std::pair<Point2, Point2>> portals;
        for (size_t i = 0; i + 1 < sleeve.size(); ++i) {
            int t = sleeve[i], nb = sleeve[i + 1];
            int side = -1;
            for (int s = 0; s < 3; ++s)
                if (adj_[t][s] == nb) side = s;
            check(side >= 0, "sleeve triangles are adjacent");
            int u = tris_[t][side], v = tris_[t][(side + 1) % 3];
            int c = tris_[t][(side + 2) % 3];
            // Looking from the interior vertex c through edge (u,v): with
            // (c,u,v) counterclockwise, v lies to the left of travel.
            if (orient(poly_->pts[c], poly_->pts[u], poly_->pts[v]) > 0)
                portals.emplace_back(poly_->pts[v], poly_->pts[u]);
            else
                portals.emplace_back(poly_->pts[u], poly_->pts[v]);
        }
        return portals;
    }

    static std::vector<Point2> string_pull(const Point2& start, const Point2& end,
                                           const std::vector<std::pair<Point2, Point2>>& portals) {
        std::vector<Point2> pts{start};
        Point2 apex = start, left = portals[0].first, right = portals[0].second;
        size_t apex_i = 0, left_i = 0, right_i = 0;
        for (size_t i = 1; i < portals.size(); ++i) {
            const Point2& l = portals[i].first;
            const Point2& r = portals[i].second;
            // The right boundary tightens by rotating leftward.
            if (orient(apex, right, r) >= 0.0) {
                if (apex == right || orient(apex, left, r) < 0.0) {
                    right = r;
                    right_i = i;
                } else {
                    // Right swept over left: the left point joins the path.
                    pts.push_back(left);
                    apex = left;
                    apex_i = left_i;
                    left = apex;
                    right = apex;
                    left_i = apex_i;
                    right_i = apex_i;
                    i = apex_i;
                    continue;
                }
            }
            if (orient(apex, left, l) <= 0.0) {
                if (apex == left || orient(apex, right, l) > 0.0) {
                    left = l;
                    left_i = i;
                } else {
                    pts.push_back(right);
                    apex = right;
                    apex_i = right_i;
                    left = apex;
                    right = apex;
                    left_i = apex_i;
                    right_i = apex_i;
                    i = apex_i;
                    continue;
                }
            }
        }
        pts.push_back(end);
        return pts;
    }

    const SimplePolygon* poly_;
    double scale_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<std::array<int, 3>> adj_;
};

/// One-shot geodesic query; callers with many queries should keep a
/// PolygonGeometry around instead.
inline GeodesicPath geodesic_path(const SimplePolygon& poly, const Point2& p, const Point2& q) {
    if (!contains(poly, p) || !contains(poly, q)) throw input_error("point outside polygon");
    PolygonGeometry engine(poly);
    return engine.shortest_path(p, q);
}

// ── Chords and splitting ────────────────────────────────────────────

/// Vertical chord: endpoints on the boundary, open interior inside P.
struct Chord {
    Point2 lower, upper;
    int lower_edge = -1;  // boundary edge indices carrying the endpoints
    int upper_edge = -1;

    double x() const { return lower.x; }
    double span() const { return upper.y - lower.y; }
    bool on_chord(const Point2& p) const {
        return p.x == lower.x && p.y >= lower.y && p.y <= upper.y;
    }
};

/// Maximal vertical segments of the line x = c inside the polygon,
/// bottom-up. Requires no vertex exactly at x = c.
inline std::vector<Chord> vertical_chords_at(const SimplePolygon& poly, double c) {
    struct Hit {
        double y;
        int edge;
    };
    std::vector<Hit> hits;
    int m = poly.size();
    for (int i = 0; i < m; ++i) {
        const Point2& a = poly.pts[i];
        const Point2& b = poly.pts[(i + 1) % m];
        if ((a.x < c && b.x > c) || (a.x > c && b.x < c)) {
            double t = (c - a.x) / (b.x - a.x);
            hits.push_back({a.y + t * (b.y - a.y), i});
        } else if (a.x == c || b.x == c) {
            return {};  // degenerate line through a vertex; caller skips
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.y < b.y; });
    std::vector<Chord> chords;
    for (size_t i = 0; i + 1 < hits.size(); i += 2) {
        Chord ch;
        ch.lower = {c, hits[i].y};
        ch.upper = {c, hits[i + 1].y};
        ch.lower_edge = hits[i].edge;
        ch.upper_edge = hits[i + 1].edge;
        chords.push_back(ch);
    }
    return chords;
}

/// Splits the polygon along a vertical chord into the left and right
/// subpolygons; both carry the chord as a boundary edge and inherit
/// vertex provenance.
inline std::pair<SimplePolygon, SimplePolygon> split_polygon(const SimplePolygon& poly,
                                                             const Chord& chord) {
    int m = poly.size();
    const double eps = 1e-12 * std::max(1.0, poly.scale());
    int le = chord.lower_edge, ue = chord.upper_edge;
    if (le < 0 || ue < 0) {
        for (int i = 0; i < m; ++i) {
            if (on_segment(poly.pts[i], poly.pts[(i + 1) % m], chord.lower, eps)) le = i;
            if (on_segment(poly.pts[i], poly.pts[(i + 1) % m], chord.upper, eps)) ue = i;
        }
    }
    if (le < 0 || ue < 0 || le == ue) throw input_error("chord endpoints must lie on distinct boundary edges");

    auto walk = [&](int from_edge, const Point2& from_pt, int to_edge, const Point2& to_pt) {
        SimplePolygon piece;
        piece.pts.push_back(from_pt);
        piece.origin.push_back(-1);
        for (int i = (from_edge + 1) % m;; i = (i + 1) % m) {
            piece.pts.push_back(poly.pts[i]);
            piece.origin.push_back(poly.origin_of(i));
            if (i == to_edge) break;
        }
        piece.pts.push_back(to_pt);
        piece.origin.push_back(-1);
        // Drop duplicates when an endpoint coincides with a ring vertex,
        // keeping the real provenance over the chord marker.
        SimplePolygon clean;
        for (int i = 0; i < piece.size(); ++i) {
            if (!clean.pts.empty() && dist(clean.pts.back(), piece.pts[i]) <= eps) {
                if (clean.origin.back() < 0) clean.origin.back() = piece.origin[i];
                continue;
            }
            clean.pts.push_back(piece.pts[i]);
            clean.origin.push_back(piece.origin[i]);
        }
        while (clean.size() >= 2 && dist(clean.pts.front(), clean.pts.back()) <= eps) {
            if (clean.origin.front() < 0) clean.origin.front() = clean.origin.back();
            clean.pts.pop_back();
            clean.origin.pop_back();
        }
        return clean;
    };

    // Boundary from the lower endpoint counterclockwise to the upper one,
    // closed by the chord traversed downward: interior right of the chord.
    SimplePolygon right = walk(le, chord.lower, ue, chord.upper);
    SimplePolygon left = walk(ue, chord.upper, le, chord.lower);
    return {left, right};
}

// ── Chord projections ───────────────────────────────────────────────

struct ChordProjection {
    Point2 point{};               // the closest point on the chord
    double param = 0.0;           // arc length from the lower endpoint
    double distance = 0.0;
    std::vector<Point2> path;     // from the query point to the chord
};


/// Geodesically closest point on the chord, computed from the funnel of
/// p onto the chord within the side polygon that contains p. The side
/// engine must be built on a polygon that has the chord as a boundary
/// edge.
inline ChordProjection project_via_funnel(const PolygonGeometry& side, const Point2& p,
                                          const Chord& chord) {
    ChordProjection best;
    const Point2 a = chord.lower, b = chord.upper;
    if (p.x == chord.x() && p.y >= a.y && p.y <= b.y) {
        best.point = p;
        best.param = p.y - a.y;
        best.distance = 0.0;
        best.path = {p};
        return best;
    }
    auto funnel = side.funnel_to_edge(p, a, b);
    double prefix_len = polyline_length(funnel.prefix);

    auto consider = [&](double value, const Point2& foot, std::vector<Point2> path) {
        double param = foot.y - a.y;
        if (best.path.empty() || value < best.distance - 1e-15 ||
            (std::abs(value - best.distance) <= 1e-15 && param < best.param)) {
            best.distance = value;
            best.point = foot;
            best.param = param;
            best.path = std::move(path);
        }
    };

    // Apex candidate: the straight segment must leave inside the wedge
    // between the first edges of the two chains.
    const Point2& apex = funnel.prefix.back();
    {
        Point2 foot{chord.x(), std::clamp(apex.y, a.y, b.y)};
        bool ok = true;
        if (funnel.chain_a.size() > 1 && funnel.chain_b.size() > 1) {
            Point2 da = funnel.chain_a[1] - apex;
            Point2 db = funnel.chain_b[1] - apex;
            Point2 d = foot - apex;
            double s = cross(da, db);
            if (s != 0.0) ok = cross(da, d) * s >= 0 && cross(d, db) * s >= 0;
            else ok = false;  // flat funnel: endpoints cover it
        }
        if (ok) {
            std::vector<Point2> path(funnel.prefix);
            path.push_back(foot);
            consider(prefix_len + dist(apex, foot), foot, std::move(path));
        }
    }

    // Interior chain vertices: a foot F is served by w_j when the turn
    // toward F at w_j matches the chain's own turn and has not swept
    // past the next chain edge.
    auto scan_chain = [&](const std::vector<Point2>& chain) {
        double cum = prefix_len;
        for (size_t j = 1; j + 1 < chain.size(); ++j) {
            cum += dist(chain[j - 1], chain[j]);
            const Point2& w = chain[j];
            double turn = orient(chain[j - 1], w, chain[j + 1]);
            if (turn == 0.0) continue;  // pass-through vertex, neighbors cover it
            Point2 foot{chord.x(), std::clamp(w.y, a.y, b.y)};
            bool matches_turn = orient(chain[j - 1], w, foot) * turn >= 0;
            bool not_past = orient(w, chain[j + 1], foot) * turn <= 0;
            if (!(matches_turn && not_past)) continue;
            std::vector<Point2> path(funnel.prefix);
            path.insert(path.end(), chain.begin() + 1, chain.begin() + j + 1);
            path.push_back(foot);
            consider(cum + dist(w, foot), foot, std::move(path));
        }
        // Chord endpoint reached along the whole chain.
        double total = prefix_len;
        for (size_t j = 0; j + 1 < chain.size(); ++j) total += dist(chain[j], chain[j + 1]);
        std::vector<Point2> path(funnel.prefix);
        path.insert(path.end(), chain.begin() + 1, chain.end());
        consider(total, chain.back(), std::move(path));
    };

    scan_chain(funnel.chain_a);
    scan_chain(funnel.chain_b);
    check(!best.path.empty(), "chord projection found a candidate");
    return best;
}

/// Projects a point of the polygon onto a chord.
inline ChordProjection project_to_chord(const SimplePolygon& poly, const Point2& p,
                                        const Chord& chord) {
    if (!contains(poly, p)) throw input_error("point outside polygon");
    if (p.x == chord.x() && p.y >= chord.lower.y && p.y <= chord.upper.y) {
        ChordProjection out;
        out.point = p;
        out.param = p.y - chord.lower.y;
        out.distance = 0.0;
        out.path = {p};
        return out;
    }
    auto [left, right] = split_polygon(poly, chord);
    const SimplePolygon& side = contains(left, p) ? left : right;
    if (!contains(side, p) && !contains(right, p)) throw input_error("point outside both chord sides");
    PolygonGeometry engine(side);
    return project_via_funnel(engine, p, chord);
}

// ── Vertical separator ──────────────────────────────────────────────

/// Vertical chord leaving at most ceil(2n/3) sites strictly on each
/// side; sites on the chord count as left. Candidates sweep the site
/// x-coordinates and the midpoints between consecutive breakpoints,
/// smallest x first.
inline Chord vertical_separator(const SimplePolygon& poly, const std::vector<Point2>& sites) {
    int n = static_cast<int>(sites.size());
    if (n < 2) throw degenerate_input_error("separator needs at least 2 sites");
    // ceil(2n/3), tightened so both sides always shrink.
    int bound = std::min((2 * n + 2) / 3, n - 1);

    std::vector<double> breakpoints;
    for (const auto& s : sites) breakpoints.push_back(s.x);
    for (const auto& v : poly.pts) breakpoints.push_back(v.x);
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    std::set<double> candidate_set;
    for (const auto& s : sites) candidate_set.insert(s.x);
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
        candidate_set.insert(0.5 * (breakpoints[i] + breakpoints[i + 1]));

    auto counts_for = [&](const Chord& ch) {
        auto [left, right] = split_polygon(poly, ch);
        int cl = 0, cr = 0;
        for (const auto& s : sites) {
            if (ch.on_chord(s)) {
                ++cl;  // on the chord: assigned left
            } else if (contains(left, s)) {
                ++cl;
            } else {
                ++cr;
            }
        }
        return std::make_pair(cl, cr);
    };

    Chord fallback;
    int fallback_worst = n + 1;
    for (double c : candidate_set) {
        auto chords = vertical_chords_at(poly, c);  // empty when c hits a vertex
        for (const auto& ch : chords) {
            if (!(ch.span() > 0.0)) continue;
            std::pair<int, int> cnt;
            try {
                cnt = counts_for(ch);
            } catch (const input_error&) {
                continue;
            }
            int worst = std::max(cnt.first, cnt.second);
            if (worst <= bound) return ch;
            if (worst < fallback_worst) {
                fallback_worst = worst;
                fallback = ch;
            }
        }
    }
    if (fallback_worst < n && fallback.span() > 0.0) return fallback;
    throw input_error("no separating vertical chord found");
}

// ── Shortest path tree of a chord ───────────────────────────────────

/// SPT of a chord: an edge-weighted tree rooted at the chord's lower
/// endpoint holding the shortest paths from every polygon vertex and
/// every site to the chord, with the chord subdivided at the
/// attachment points.
struct ChordSPT {
    enum class Kind { ChordPoint, PolyVertex, Site };
    struct NodeInfo {
        Kind kind = Kind::ChordPoint;
        Point2 position{};
        int ref = -1;      // root-polygon vertex index, site index, or -1
        double param = 0;  // arc length along the chord (chord points)
    };

    EdgeWeightedTree tree;
    std::vector<NodeInfo> info;
    std::vector<char> edge_on_chord;
    std::vector<VertexId> site_node;        // per input site in this cell
    std::vector<Point2> site_projection;    // per input site: closest point on the chord
    std::vector<double> site_param;         // arc length of that projection
    Chord chord;

    VertexId node_of_origin(int orig) const {
        for (VertexId v = 0; v < tree.vertex_count(); ++v)
            if (info[v].kind == Kind::PolyVertex && info[v].ref == orig) return v;
        return -1;
    }
};

/// Builds the chord SPT for a cell polygon: funnels every vertex and
/// site of both sides onto the chord and merges the attachment points
/// into a subdivided chord spine.
inline ChordSPT build_spt(const SimplePolygon& poly, const Chord& chord,
                          const std::vector<Point2>& sites,
                          const std::vector<int>* site_refs = nullptr) {
    auto [left, right] = split_polygon(poly, chord);
    PolygonGeometry left_engine(left);
    PolygonGeometry right_engine(right);
    const double eps = 1e-12 * std::max(1.0, poly.scale());

    struct Pending {
        ChordSPT::Kind kind;
        Point2 position;
        int ref;
        int side;  // 0 left, 1 right, -1 on chord
        std::vector<Point2> path;  // to the chord (empty for on-chord points)
        double foot_param = 0.0;
        int site_index = -1;       // position in the input site list
    };
    std::vector<Pending> pending;

    auto add_point = [&](ChordSPT::Kind kind, const Point2& pt, int ref, int site_index) {
        Pending item;
        item.kind = kind;
        item.position = pt;
        item.ref = ref;
        item.site_index = site_index;
        if (pt.x == chord.x() && std::abs(pt.y - chord.lower.y) <= eps) return;  // the root itself
        if (pt.x == chord.x() && pt.y >= chord.lower.y && pt.y <= chord.upper.y) {
            item.side = -1;
            item.foot_param = pt.y - chord.lower.y;
            pending.push_back(std::move(item));
            return;
        }
        bool in_left = contains(left, pt);
        item.side = in_left ? 0 : 1;
        const PolygonGeometry& engine = in_left ? left_engine : right_engine;
        auto proj = project_via_funnel(engine, pt, chord);
        item.path = std::move(proj.path);
        item.foot_param = proj.param;
        pending.push_back(std::move(item));
    };

    // Side polygon vertices (chord endpoints handled as chord nodes).
    auto add_side_vertices = [&](const SimplePolygon& side) {
        for (int i = 0; i < side.size(); ++i) {
            const Point2& pt = side.pts[i];
            if (pt == chord.lower || pt == chord.upper) continue;
            add_point(ChordSPT::Kind::PolyVertex, pt, side.origin_of(i), -1);
        }
    };
    add_side_vertices(left);
    add_side_vertices(right);
    for (size_t i = 0; i < sites.size(); ++i)
        add_point(ChordSPT::Kind::Site, sites[i], site_refs ? (*site_refs)[i] : static_cast<int>(i),
                  static_cast<int>(i));

    // Chord spine parameters: the root, the top, and every attachment.
    std::vector<double> params{0.0, chord.span()};
    for (const auto& item : pending) {
        double p = item.side == -1 ? item.foot_param : item.foot_param;
        params.push_back(std::clamp(p, 0.0, chord.span()));
    }
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end(),
                             [&](double a, double b) { return std::abs(a - b) <= eps; }),
                 params.end());
    auto param_index = [&](double p) {
        auto it = std::lower_bound(params.begin(), params.end(), p - eps);
        check(it != params.end(), "chord parameter within range");
        return static_cast<int>(it - params.begin());
    };

    // Staging adjacency, then a deterministic emit into the tree.
    struct StagedNode {
        ChordSPT::NodeInfo info;
        int parent = -1;
        double weight = 0.0;
        bool chord_edge = false;
        bool synthetic = false;
        int side = -1;
        int seq = 0;
    };
    std::vector<StagedNode> staged;
    std::vector<int> chord_node(params.size(), -1);
    for (size_t i = 0; i < params.size(); ++i) {
        StagedNode sn;
        sn.info.kind = ChordSPT::Kind::ChordPoint;
        sn.info.position = {chord.x(), chord.lower.y + params[i]};
        sn.info.param = params[i];
        sn.parent = i == 0 ? -1 : chord_node[i - 1];
        sn.weight = i == 0 ? 0.0 : params[i] - params[i - 1];
        sn.chord_edge = true;
        sn.seq = static_cast<int>(staged.size());
        chord_node[i] = static_cast<int>(staged.size());
        staged.push_back(sn);
    }
    // Points with interior paths ending on the chord or at other points.
    // Each pending point may introduce its whole path; intermediate path
    // vertices are polygon vertices that also appear as pending items, so
    // nodes are keyed by exact position to merge them.
    std::map<Point2, int> by_position;
    for (size_t i = 0; i < params.size(); ++i)
        by_position[staged[chord_node[i]].info.position] = chord_node[i];

    auto node_for_position = [&](ChordSPT::Kind kind, const Point2& pt, int ref, int side) {
        auto it = by_position.find(pt);
        if (it != by_position.end()) {
            // Keep the most specific kind (sites over vertices).
            return it->second;
        }
        StagedNode sn;
        sn.info.kind = kind;
        sn.info.position = pt;
        sn.info.ref = ref;
        sn.side = side;
        sn.seq = static_cast<int>(staged.size());
        staged.push_back(sn);
        by_position[pt] = sn.seq;
        return sn.seq;
    };

    for (const auto& item : pending) {
        if (item.side == -1) {
            // A site lying on the chord hangs as a leaf off its chord node
            // by a synthetic zero edge, so it stays a leaf of the tree.
            int at = chord_node[param_index(item.foot_param)];
            StagedNode sn;
            sn.info.kind = ChordSPT::Kind::Site;
            sn.info.position = item.position;
            sn.info.ref = item.ref;
            sn.info.param = item.foot_param;
            sn.parent = at;
            sn.weight = 0.0;
            sn.chord_edge = false;
            sn.synthetic = true;
            sn.side = -1;
            sn.seq = static_cast<int>(staged.size());
            staged.push_back(sn);
            continue;
        }
        int node = node_for_position(item.kind, item.position, item.ref, item.side);
        if (item.kind == ChordSPT::Kind::Site) {
            staged[node].info.kind = ChordSPT::Kind::Site;
            staged[node].info.ref = item.ref;
        } else if (staged[node].info.kind == ChordSPT::Kind::PolyVertex && staged[node].info.ref < 0) {
            staged[node].info.ref = item.ref;
        }
        // Attach along the path: parent is the next path point.
        check(item.path.size() >= 2, "projection path reaches the chord");
        const Point2& next = item.path[1];
        int parent_node;
        if (next.x == chord.x() && std::abs(next.y - (chord.lower.y + item.foot_param)) <= eps) {
            parent_node = chord_node[param_index(item.foot_param)];
        } else {
            parent_node = node_for_position(ChordSPT::Kind::PolyVertex, next, -1, item.side);
        }
        if (staged[node].parent < 0 && parent_node != node) {
            staged[node].parent = parent_node;
            staged[node].weight = dist(item.position, next);
        }
    }

    // Interior path vertices created as parents receive their own parent
    // when their own pending entry runs; anything left unattached is a
    // logic error.
    for (size_t i = 1; i < staged.size(); ++i)
        check(staged[i].parent >= 0, "every SPT node attaches");

    // Children ordered deterministically: interior branches by side then
    // position, the chord spine continuation last.
    std::vector<std::vector<int>> children(staged.size());
    for (size_t i = 1; i < staged.size(); ++i) children[staged[i].parent].push_back(static_cast<int>(i));
    for (auto& ch : children) {
        std::sort(ch.begin(), ch.end(), [&](int a, int b) {
            bool ca = staged[a].chord_edge, cb = staged[b].chord_edge;
            if (ca != cb) return !ca;  // spine continuation last
            if (staged[a].side != staged[b].side) return staged[a].side < staged[b].side;
            if (!(staged[a].info.position == staged[b].info.position))
                return staged[a].info.position < staged[b].info.position;
            return a < b;
        });
    }

    ChordSPT out;
    out.chord = chord;
    std::vector<int> emit_of(staged.size(), -1);
    std::vector<int> stack{0};
    VertexId root = out.tree.add_vertex();
    out.tree.set_root(root);
    out.info.push_back(staged[0].info);
    emit_of[0] = root;
    std::vector<std::pair<int, size_t>> walk{{0, 0}};
    while (!walk.empty()) {
        auto& [sn, ci] = walk.back();
        if (ci >= children[sn].size()) {
            walk.pop_back();
            continue;
        }
        int child = children[sn][ci++];
        VertexId v = out.tree.add_vertex();
        out.tree.add_edge(emit_of[sn], v, staged[child].weight, staged[child].synthetic);
        out.info.push_back(staged[child].info);
        out.edge_on_chord.push_back(staged[child].chord_edge ? 1 : 0);
        emit_of[child] = v;
        walk.emplace_back(child, 0);
    }
    // edge ids are assigned in add_edge order; edge_on_chord tracked above
    // aligns because edges are added exactly once per emitted child.

    out.site_node.assign(sites.size(), -1);
    out.site_projection.assign(sites.size(), Point2{});
    out.site_param.assign(sites.size(), 0.0);
    for (const auto& item : pending) {
        if (item.site_index < 0) continue;
        out.site_param[item.site_index] = item.foot_param;
        out.site_projection[item.site_index] = {chord.x(), chord.lower.y + item.foot_param};
    }
    for (VertexId v = 0; v < out.tree.vertex_count(); ++v) {
        if (out.info[v].kind == ChordSPT::Kind::Site) {
            out.tree.set_site(v, true);
            int local = -1;
            for (size_t i = 0; i < sites.size(); ++i) {
                int ref = site_refs ? (*site_refs)[i] : static_cast<int>(i);
                if (ref == out.info[v].ref) local = static_cast<int>(i);
            }
            if (local >= 0) out.site_node[local] = v;
        }
    }
    return out;
}

}  // namespace geospan
