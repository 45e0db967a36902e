// geospan: generate instances, build Steiner spanners on trees,
// forests, and simple polygons, verify bounds, and run benchmark
// sweeps. Exit codes: 0 success, 1 bound violation, 2 input error.
#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geospan/forest_spanner.hpp"
#include "geospan/generators.hpp"
#include "geospan/io.hpp"
#include "geospan/polygon_spanner.hpp"
#include "geospan/steiner_tree.hpp"
#include "geospan/verify.hpp"

namespace {

using namespace geospan;

struct BoundViolation {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw input_error("cannot open " + path + " for writing");
    out << content;
}

bool is_polygon_file(const std::string& content) {
    return content.rfind("polygon", 0) == 0;
}

struct GenOptions {
    std::string family;
    int n = 16;
    int m = 0;
    int k = 1;
    uint64_t seed = 1;
    std::string out;
};

void run_gen(const GenOptions& opt) {
    std::ostringstream os;
    int m = opt.m;
    if (opt.family == "pitchforkStar") {
        if (m == 0) m = 2 * opt.n + 8 * opt.k + 1;
        write_tree(os, gen_pitchfork_star(opt.k, opt.n, m));
    } else if (opt.family == "combChain") {
        if (m == 0) m = 4 * opt.n + 8 * opt.k;
        write_tree(os, gen_comb_chain(opt.k, opt.n, m));
    } else if (opt.family == "comb") {
        if (m == 0) m = 8 * opt.n;
        write_tree(os, gen_comb(opt.n, m));
    } else if (opt.family == "randomTree") {
        if (m == 0) m = 3 * opt.n;
        write_tree(os, gen_random_tree(opt.n, m, opt.seed));
    } else if (opt.family == "randomForest") {
        if (m == 0) m = 3 * opt.n;
        write_forest(os, gen_random_forest(opt.n, m, 8, opt.seed));
    } else if (opt.family == "convex" || opt.family == "spiral" || opt.family == "staircase") {
        PolygonFamily fam = opt.family == "convex"    ? PolygonFamily::Convex
                            : opt.family == "spiral" ? PolygonFamily::Spiral
                                                      : PolygonFamily::Staircase;
        if (m == 0) m = 8 * opt.n;
        write_polygon_instance(os, gen_random_polygon_instance(fam, opt.n, m, opt.seed));
    } else {
        throw input_error("unknown family: " + opt.family);
    }
    write_file(opt.out, os.str());
}

SpannerGraph strip_paths(const SpannerGraph& g) {
    SpannerGraph out(g.metric());
    for (const auto& n : g.nodes()) out.add_node(n);
    for (const auto& l : g.links()) {
        LinkPath short_path;
        if (!l.path.polyline.empty())
            short_path.polyline = {l.path.polyline.front(), l.path.polyline.back()};
        out.add_link(l.a, l.b, l.length, l.complexity, std::move(short_path), l.prov_tree, l.prov_sub);
    }
    out.rebuild_index();
    return out;
}

int run_verify(const std::string& instance_path, const std::string& spanner_path, double bound) {
    std::string instance = read_file(instance_path);
    std::istringstream spanner_in(read_file(spanner_path));
    SpannerGraph g = read_spanner(spanner_in);
    RatioReport report;
    Measure m;
    if (is_polygon_file(instance)) {
        std::istringstream is(instance);
        PolygonInstance inst = read_polygon_instance(is);
        VisibilityOracle oracle(inst.polygon, inst.sites);
        auto table = oracle.extra_table();
        auto sites = g.site_nodes();
        report = check_ratio(
            g,
            [&](int i, int j) {
                return table[g.nodes()[sites[i]].site][g.nodes()[sites[j]].site];
            },
            bound);
        m = measure(g);
    } else {
        std::istringstream is(instance);
        Forest forest = read_forest(is);
        if (g.metric() == MetricTag::Tree && forest.trees.size() == 1) {
            report = check_tree_ratio(g, forest.trees[0], bound);
            validate_tree_spanner_links(
                g, [&](int) -> const EdgeWeightedTree& { return forest.trees[0]; });
        } else {
            report = check_forest_ratio(g, forest, bound);
            validate_tree_spanner_links(
                g, [&](int idx) -> const EdgeWeightedTree& { return forest.trees[idx]; });
        }
        m = measure(g);
    }
    std::cout << "max_ratio=" << fmt_real(report.max_ratio) << " bound=" << fmt_real(report.bound)
              << " size=" << m.size << " complexity=" << m.complexity
              << " steiner=" << m.steiner_count << " pass=" << (report.pass ? "yes" : "no")
              << "\n";
    return report.pass ? 0 : 1;
}

struct BenchOptions {
    std::string family = "comb";
    std::vector<int> ns{64, 128, 256};
    std::vector<int> ts{2};
    std::vector<int> ks{1};
    int m_mult = 16;
    uint64_t seed = 1;
    std::string out;
};

void run_bench(const BenchOptions& opt) {
    std::ostringstream csv;
    write_csv_header(csv);
    for (int n : opt.ns) {
        for (int t : opt.ts) {
            for (int k : opt.ks) {
                ExperimentRecord rec;
                rec.family = opt.family;
                rec.n = n;
                rec.t = t;
                rec.k = std::min(k, n);
                auto t0 = std::chrono::steady_clock::now();
                if (opt.family == "convex" || opt.family == "spiral" ||
                    opt.family == "staircase") {
                    PolygonFamily fam = opt.family == "convex"    ? PolygonFamily::Convex
                                        : opt.family == "spiral" ? PolygonFamily::Spiral
                                                                  : PolygonFamily::Staircase;
                    int m = opt.m_mult * n;
                    rec.m = m;
                    auto inst = gen_random_polygon_instance(fam, n, m, opt.seed);
                    auto build = build_polygon_spanner(inst.polygon, inst.sites, t, rec.k);
                    rec.measure = measure(build.spanner);
                    VisibilityOracle oracle(inst.polygon, inst.sites);
                    auto table = oracle.extra_table();
                    auto sites = build.spanner.site_nodes();
                    auto report = check_ratio(
                        build.spanner,
                        [&](int i, int j) {
                            return table[build.spanner.nodes()[sites[i]].site]
                                        [build.spanner.nodes()[sites[j]].site];
                        },
                        2.0 * std::sqrt(2.0) * t);
                    rec.max_ratio = report.max_ratio;
                    if (!report.pass) throw BoundViolation{"polygon ratio bound violated"};
                } else {
                    EdgeWeightedTree tree;
                    int m = opt.m_mult * n;
                    if (opt.family == "comb") tree = gen_comb(n, m);
                    else if (opt.family == "combChain")
                        tree = gen_comb_chain(std::max(1, rec.k), n, m);
                    else if (opt.family == "pitchforkStar")
                        tree = gen_pitchfork_star(std::max(1, std::min(rec.k, n / 4)), n, m);
                    else if (opt.family == "randomTree") tree = gen_random_tree(n, m, opt.seed);
                    else throw input_error("unknown bench family: " + opt.family);
                    rec.m = tree.vertex_count();
                    auto g = build_steiner_tree_spanner(tree, t, rec.k);
                    rec.measure = measure(g);
                    auto report = check_tree_ratio(g, tree, 2.0 * t);
                    rec.max_ratio = report.max_ratio;
                    if (!report.pass) throw BoundViolation{"tree ratio bound violated"};
                }
                auto t1 = std::chrono::steady_clock::now();
                rec.measure.runtime_ms =
                    std::chrono::duration<double, std::milli>(t1 - t0).count();
                write_csv_row(csv, rec);
            }
        }
    }
    if (opt.out.empty()) std::cout << csv.str();
    else write_file(opt.out, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-complexity Steiner spanners on trees, forests, and simple polygons"};
    app.require_subcommand(1);

    GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("--family", gen_opt.family,
                    "pitchforkStar | combChain | comb | randomTree | randomForest | convex | "
                    "spiral | staircase")
        ->required();
    gen->add_option("--n", gen_opt.n, "number of sites")->required();
    gen->add_option("--m", gen_opt.m, "vertex budget (0 = family default)");
    gen->add_option("--k", gen_opt.k, "gadget parameter k");
    gen->add_option("--seed", gen_opt.seed, "random seed");
    gen->add_option("--out", gen_opt.out, "output path")->required();

    std::string in_path, out_path, spanner_path;
    int t_param = 1, k_param = 0;
    bool emit_paths = false;
    double bound = 0.0;

    auto* build_tree = app.add_subcommand("build-tree", "build a tree spanner");
    build_tree->add_option("--in", in_path)->required();
    build_tree->add_option("--out", out_path)->required();
    build_tree->add_option("--t", t_param)->required();
    build_tree->add_option("--k", k_param);

    auto* build_forest = app.add_subcommand("build-forest", "build a forest spanner");
    build_forest->add_option("--in", in_path)->required();
    build_forest->add_option("--out", out_path)->required();
    build_forest->add_option("--t", t_param)->required();
    build_forest->add_option("--k", k_param);

    auto* build_polygon = app.add_subcommand("build-polygon", "build a polygon spanner");
    build_polygon->add_option("--in", in_path)->required();
    build_polygon->add_option("--out", out_path)->required();
    build_polygon->add_option("--t", t_param)->required();
    build_polygon->add_option("--k", k_param);
    build_polygon->add_flag("--emit-paths", emit_paths, "write full link polylines");

    auto* verify = app.add_subcommand("verify", "re-check a spanner against its instance");
    verify->add_option("--in", in_path)->required();
    verify->add_option("--spanner", spanner_path)->required();
    verify->add_option("--bound", bound)->required();

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "sweep a parameter grid and emit CSV");
    bench->add_option("--family", bench_opt.family);
    bench->add_option("--n", bench_opt.ns)->delimiter(',');
    bench->add_option("--t", bench_opt.ts)->delimiter(',');
    bench->add_option("--k", bench_opt.ks)->delimiter(',');
    bench->add_option("--m-mult", bench_opt.m_mult);
    bench->add_option("--seed", bench_opt.seed);
    bench->add_option("--out", bench_opt.out);

    try {
        app.parse(argc, argv);
        if (gen->parsed()) {
            run_gen(gen_opt);
        } else if (build_tree->parsed()) {
            std::istringstream is(read_file(in_path));
            EdgeWeightedTree tree = read_tree(is);
            if (t_param < 1) throw input_error("t must be a positive integer");
            auto g = build_steiner_tree_spanner(tree, t_param, std::min(k_param, tree.site_count()));
            std::ostringstream os;
            write_spanner(os, g);
            write_file(out_path, os.str());
        } else if (build_forest->parsed()) {
            std::istringstream is(read_file(in_path));
            Forest forest = read_forest(is);
            if (t_param < 1) throw input_error("t must be a positive integer");
            auto g = build_forest_spanner(forest, t_param, k_param);
            std::ostringstream os;
            write_spanner(os, g);
            write_file(out_path, os.str());
        } else if (build_polygon->parsed()) {
            std::istringstream is(read_file(in_path));
            PolygonInstance inst = read_polygon_instance(is);
            normalize_instance(inst);
            if (t_param < 1) throw input_error("t must be a positive integer");
            int k = std::max(1, std::min(k_param, static_cast<int>(inst.sites.size())));
            auto build = build_polygon_spanner(inst.polygon, inst.sites, t_param, k);
            std::ostringstream os;
            write_spanner(os, emit_paths ? build.spanner : strip_paths(build.spanner));
            write_file(out_path, os.str());
        } else if (verify->parsed()) {
            return run_verify(in_path, spanner_path, bound);
        } else if (bench->parsed()) {
            run_bench(bench_opt);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const BoundViolation& e) {
        std::cerr << "bound violation: " << e.message << "\n";
        return 1;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
