// Text formats: tree/forest instances, polygon instances, spanner
// graphs, and the experiment CSV.
#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "geospan/core.hpp"
#include "geospan/generators.hpp"
#include "geospan/geometry.hpp"
#include "geospan/verify.hpp"

namespace geospan {

inline std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ── Tree / forest format ────────────────────────────────────────────

inline void write_tree(std::ostream& os, const EdgeWeightedTree& t) {
    os << "tree n=" << t.site_count() << " m=" << t.vertex_count() << " root=" << t.root() << "\n";
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
        const TreeEdge& te = t.edge(e);
        os << "edge " << te.parent << " " << te.child << " " << fmt_real(te.weight);
        if (te.synthetic) os << " synthetic";
        os << "\n";
    }
    for (VertexId v = 0; v < t.vertex_count(); ++v)
        if (t.is_site(v)) os << "site " << v << "\n";
}

inline void write_forest(std::ostream& os, const Forest& f) {
    for (size_t i = 0; i < f.trees.size(); ++i) {
        if (i > 0) os << "---\n";
        write_tree(os, f.trees[i]);
    }
}

inline Forest read_forest(std::istream& is) {
    Forest forest;
    std::string line;
    EdgeWeightedTree current;
    bool have_tree = false;
    int declared_root = -1;
    auto flush = [&]() {
        if (!have_tree) return;
        if (declared_root >= 0) current.set_root(declared_root);
        current.validate();
        forest.trees.push_back(std::move(current));
        current = EdgeWeightedTree{};
        have_tree = false;
        declared_root = -1;
    };
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "---") {
            flush();
        } else if (tag == "tree") {
            flush();
            have_tree = true;
            std::string field;
            int n = -1, m = -1;
            while (ls >> field) {
                if (field.rfind("n=", 0) == 0) n = std::stoi(field.substr(2));
                else if (field.rfind("m=", 0) == 0) m = std::stoi(field.substr(2));
                else if (field.rfind("root=", 0) == 0) declared_root = std::stoi(field.substr(5));
            }
            if (m < 0) throw input_error("tree header missing m=");
            for (int i = 0; i < m; ++i) current.add_vertex();
            (void)n;
        } else if (tag == "edge") {
            int p, c;
            double w;
            std::string extra;
            if (!(ls >> p >> c >> w)) throw input_error("malformed edge line: " + line);
            bool synthetic = (ls >> extra) && extra == "synthetic";
            current.add_edge(p, c, w, synthetic);
        } else if (tag == "site") {
            int v;
            if (!(ls >> v)) throw input_error("malformed site line: " + line);
            current.set_site(v, true);
        } else {
            throw input_error("unknown line in tree file: " + line);
        }
    }
    flush();
    if (forest.trees.empty()) throw input_error("empty tree file");
    return forest;
}

inline EdgeWeightedTree read_tree(std::istream& is) {
    Forest f = read_forest(is);
    if (f.trees.size() != 1) throw input_error("expected a single tree, found a forest");
    return std::move(f.trees[0]);
}

// ── Polygon format ──────────────────────────────────────────────────

inline void write_polygon_instance(std::ostream& os, const PolygonInstance& inst) {
    os << "polygon m=" << inst.polygon.size() << "\n";
    for (const auto& p : inst.polygon.pts)
        os << "v " << fmt_real(p.x) << " " << fmt_real(p.y) << "\n";
    for (const auto& s : inst.sites)
        os << "site " << fmt_real(s.x) << " " << fmt_real(s.y) << "\n";
}

inline PolygonInstance read_polygon_instance(std::istream& is) {
    PolygonInstance inst;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "polygon") continue;
        double x, y;
        if (!(ls >> x >> y)) throw input_error("malformed polygon line: " + line);
        if (tag == "v") inst.polygon.pts.push_back({x, y});
        else if (tag == "site") inst.sites.push_back({x, y});
        else throw input_error("unknown line in polygon file: " + line);
    }
    inst.polygon.validate();
    return inst;
}

// ── Spanner format ──────────────────────────────────────────────────

inline std::string host_string(const SpannerNode& node, MetricTag metric) {
    std::string out;
    if (metric == MetricTag::Forest) out += std::to_string(node.tree) + ":";
    if (metric == MetricTag::Polygon) {
        if (node.kind == NodeKind::Site) return "s" + std::to_string(node.site);
        return std::to_string(node.tree) + ":v" + std::to_string(node.host.vertex);
    }
    if (node.host.on_vertex()) return out + "v" + std::to_string(node.host.vertex);
    return out + "e" + std::to_string(node.host.edge) + "@" + fmt_real(node.host.frac);
}

inline void write_spanner(std::ostream& os, const SpannerGraph& g) {
    const char* tag = g.metric() == MetricTag::Tree ? "tree"
                      : g.metric() == MetricTag::Forest ? "forest"
                                                        : "polygon";
    os << "spanner metric=" << tag << " nodes=" << g.nodes().size() << " links="
       << g.links().size() << "\n";
    for (size_t i = 0; i < g.nodes().size(); ++i) {
        const auto& node = g.nodes()[i];
        os << "node " << i << " kind=" << (node.kind == NodeKind::Site ? "site" : "steiner")
           << " host=" << host_string(node, g.metric());
        if (g.metric() == MetricTag::Polygon)
            os << " pos=" << fmt_real(node.position.x) << "," << fmt_real(node.position.y);
        os << "\n";
    }
    for (const auto& l : g.links()) {
        os << "link " << l.a << " " << l.b << " len=" << fmt_real(l.length) << " cx=" << l.complexity
           << " path=";
        if (g.metric() == MetricTag::Polygon) {
            for (size_t i = 0; i < l.path.polyline.size(); ++i) {
                if (i) os << ";";
                os << fmt_real(l.path.polyline[i].x) << "," << fmt_real(l.path.polyline[i].y);
            }
        } else {
            for (size_t i = 0; i < l.path.tree_points.size(); ++i) {
                if (i) os << ",";
                const TreePoint& p = l.path.tree_points[i];
                if (p.on_vertex()) os << "v" << p.vertex;
                else os << "e" << p.edge << "@" << fmt_real(p.frac);
            }
        }
        os << "\n";
    }
}

inline SpannerGraph read_spanner(std::istream& is) {
    std::string line;
    SpannerGraph g(MetricTag::Tree);
    bool header_seen = false;
    auto parse_tree_point = [](const std::string& tok) {
        if (tok.empty()) throw input_error("empty path token");
        if (tok[0] == 'v') return TreePoint::at_vertex(std::stoi(tok.substr(1)));
        if (tok[0] == 'e') {
            auto at = tok.find('@');
            if (at == std::string::npos) throw input_error("malformed edge point: " + tok);
            return TreePoint::on_edge(std::stoi(tok.substr(1, at - 1)), std::stod(tok.substr(at + 1)));
        }
        throw input_error("malformed path token: " + tok);
    };
    std::vector<SpannerNode> nodes;
    std::vector<SpannerLink> links;
    MetricTag metric = MetricTag::Tree;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "spanner") {
            header_seen = true;
            std::string field;
            while (ls >> field) {
                if (field == "metric=tree") metric = MetricTag::Tree;
                else if (field == "metric=forest") metric = MetricTag::Forest;
                else if (field == "metric=polygon") metric = MetricTag::Polygon;
            }
        } else if (tag == "node") {
            int id;
            std::string kind_f, host_f, pos_f;
            if (!(ls >> id >> kind_f >> host_f)) throw input_error("malformed node line: " + line);
            SpannerNode node;
            node.kind = kind_f == "kind=site" ? NodeKind::Site : NodeKind::Steiner;
            std::string host = host_f.substr(host_f.find('=') + 1);
            if (metric == MetricTag::Polygon) {
                if (host[0] == 's') node.site = std::stoi(host.substr(1));
                else {
                    auto colon = host.find(':');
                    node.tree = std::stoi(host.substr(0, colon));
                    node.host = TreePoint::at_vertex(std::stoi(host.substr(colon + 2)));
                }
                if (ls >> pos_f) {
                    auto eq = pos_f.find('=');
                    auto comma = pos_f.find(',', eq);
                    node.position = {std::stod(pos_f.substr(eq + 1, comma - eq - 1)),
                                     std::stod(pos_f.substr(comma + 1))};
                }
            } else {
                auto colon = host.find(':');
                if (colon != std::string::npos) {
                    node.tree = std::stoi(host.substr(0, colon));
                    host = host.substr(colon + 1);
                }
                node.host = parse_tree_point(host);
                if (node.kind == NodeKind::Site) node.site = node.host.vertex;
            }
            nodes.push_back(node);
        } else if (tag == "link") {
            int a, b;
            std::string len_f, cx_f, path_f;
            if (!(ls >> a >> b >> len_f >> cx_f >> path_f)) throw input_error("malformed link line: " + line);
            SpannerLink l;
            l.a = a;
            l.b = b;
            l.length = std::stod(len_f.substr(len_f.find('=') + 1));
            l.complexity = std::stoi(cx_f.substr(cx_f.find('=') + 1));
            std::string path = path_f.substr(path_f.find('=') + 1);
            if (metric == MetricTag::Polygon) {
                std::istringstream ps(path);
                std::string part;
                while (std::getline(ps, part, ';')) {
                    auto comma = part.find(',');
                    l.path.polyline.push_back(
                        {std::stod(part.substr(0, comma)), std::stod(part.substr(comma + 1))});
                }
            } else {
                std::istringstream ps(path);
                std::string part;
                while (std::getline(ps, part, ',')) l.path.tree_points.push_back(parse_tree_point(part));
            }
            links.push_back(std::move(l));
        }
    }
    if (!header_seen) throw input_error("missing spanner header");
    SpannerGraph out(metric);
    for (const auto& n : nodes) out.add_node(n);
    for (auto& l : links)
        out.add_link(l.a, l.b, l.length, l.complexity, std::move(l.path));
    out.rebuild_index();
    return out;
}

// ── Experiment CSV ──────────────────────────────────────────────────

inline void write_csv_header(std::ostream& os) {
    os << "family,n,m,k,t,size,complexity,steiner,max_ratio,ms\n";
}

inline void write_csv_row(std::ostream& os, const ExperimentRecord& r) {
    os << r.family << "," << r.n << "," << r.m << "," << r.k << "," << r.t << "," << r.measure.size
       << "," << r.measure.complexity << "," << r.measure.steiner_count << ","
       << fmt_real(r.max_ratio) << "," << fmt_real(r.measure.runtime_ms) << "\n";
}

}  // namespace geospan
