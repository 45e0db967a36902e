#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geospan/forest_spanner.hpp"
#include "geospan/generators.hpp"
#include "geospan/io.hpp"
#include "geospan/polygon_spanner.hpp"
#include "geospan/steiner_tree.hpp"

using namespace geospan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() / ("geospan_io_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
    std::string cmd = std::string(GEOSPAN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("tree files round-trip byte for byte") {
    auto t = gen_random_tree(12, 30, 5);
    std::ostringstream first;
    write_tree(first, t);
    std::istringstream in(first.str());
    auto back = read_tree(in);
    std::ostringstream second;
    write_tree(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("forest files round-trip") {
    auto f = gen_random_forest(18, 60, 4, 7);
    std::ostringstream first;
    write_forest(first, f);
    std::istringstream in(first.str());
    auto back = read_forest(in);
    CHECK(back.trees.size() == f.trees.size());
    std::ostringstream second;
    write_forest(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("polygon instances round-trip") {
    auto inst = gen_random_polygon_instance(PolygonFamily::Staircase, 6, 40, 9);
    std::ostringstream first;
    write_polygon_instance(first, inst);
    std::istringstream in(first.str());
    auto back = read_polygon_instance(in);
    std::ostringstream second;
    write_polygon_instance(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("tree spanner files round-trip") {
    auto t = gen_random_tree(14, 40, 11);
    auto g = build_steiner_tree_spanner(t, 2, 3);
    std::ostringstream first;
    write_spanner(first, g);
    std::istringstream in(first.str());
    auto back = read_spanner(in);
    std::ostringstream second;
    write_spanner(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("polygon spanner files round-trip") {
    auto inst = gen_random_polygon_instance(PolygonFamily::Convex, 8, 32, 13);
    auto build = build_polygon_spanner(inst.polygon, inst.sites, 1, 2);
    std::ostringstream first;
    write_spanner(first, build.spanner);
    std::istringstream in(first.str());
    auto back = read_spanner(in);
    std::ostringstream second;
    write_spanner(second, back);
    CHECK(first.str() == second.str());
}

TEST_CASE("cli pipeline: gen, build, verify") {
    TempDir tmp;
    REQUIRE(run_cli("gen --family comb --n 32 --m 256 --seed 7 --out " + tmp.path("a.tree")) == 0);
    REQUIRE(run_cli("build-tree --t 2 --k 4 --in " + tmp.path("a.tree") + " --out " +
                    tmp.path("a.spanner")) == 0);
    CHECK(run_cli("verify --in " + tmp.path("a.tree") + " --spanner " + tmp.path("a.spanner") +
                  " --bound 4") == 0);
}

TEST_CASE("cli verify fails on a damaged spanner") {
    TempDir tmp;
    REQUIRE(run_cli("gen --family randomTree --n 12 --m 36 --seed 3 --out " + tmp.path("b.tree")) ==
            0);
    REQUIRE(run_cli("build-tree --t 1 --k 2 --in " + tmp.path("b.tree") + " --out " +
                    tmp.path("b.spanner")) == 0);
    // Remove the last link line: some pair loses its shortcut or connection.
    std::string content = slurp(tmp.path("b.spanner"));
    auto pos = content.rfind("link ");
    REQUIRE(pos != std::string::npos);
    std::ofstream(tmp.path("b.spanner")) << content.substr(0, pos);
    CHECK(run_cli("verify --in " + tmp.path("b.tree") + " --spanner " + tmp.path("b.spanner") +
                  " --bound 2") == 1);
}

TEST_CASE("cli rejects invalid parameters with exit code 2") {
    TempDir tmp;
    REQUIRE(run_cli("gen --family comb --n 8 --m 64 --out " + tmp.path("c.tree")) == 0);
    CHECK(run_cli("build-tree --t 0 --k 1 --in " + tmp.path("c.tree") + " --out " +
                  tmp.path("c.spanner")) == 2);
    CHECK(run_cli("build-tree --bogus-flag 1") == 2);
    CHECK(run_cli("gen --family doesNotExist --n 4 --out " + tmp.path("d.tree")) == 2);
    CHECK(run_cli("build-tree --t 1 --k 0 --in " + tmp.path("missing.tree") + " --out " +
                  tmp.path("d.spanner")) == 2);
}

TEST_CASE("cli outputs are byte-identical across repeated runs") {
    TempDir tmp;
    for (std::string family : {"comb", "randomTree"}) {
        REQUIRE(run_cli("gen --family " + family + " --n 16 --m 128 --seed 5 --out " +
                        tmp.path("x1.tree")) == 0);
        REQUIRE(run_cli("gen --family " + family + " --n 16 --m 128 --seed 5 --out " +
                        tmp.path("x2.tree")) == 0);
        CHECK(slurp(tmp.path("x1.tree")) == slurp(tmp.path("x2.tree")));
        REQUIRE(run_cli("build-tree --t 2 --k 3 --in " + tmp.path("x1.tree") + " --out " +
                        tmp.path("x1.spanner")) == 0);
        REQUIRE(run_cli("build-tree --t 2 --k 3 --in " + tmp.path("x2.tree") + " --out " +
                        tmp.path("x2.spanner")) == 0);
        CHECK(slurp(tmp.path("x1.spanner")) == slurp(tmp.path("x2.spanner")));
    }
}

TEST_CASE("cli polygon pipeline verifies against the geodesic bound") {
    TempDir tmp;
    REQUIRE(run_cli("gen --family staircase --n 8 --m 48 --seed 11 --out " + tmp.path("p.poly")) ==
            0);
    REQUIRE(run_cli("build-polygon --t 1 --k 2 --emit-paths --in " + tmp.path("p.poly") +
                    " --out " + tmp.path("p.spanner")) == 0);
    CHECK(run_cli("verify --in " + tmp.path("p.poly") + " --spanner " + tmp.path("p.spanner") +
                  " --bound 2.8284271247461903") == 0);
}

TEST_CASE("cli polygon build without --emit-paths still verifies") {
    TempDir tmp;
    REQUIRE(run_cli("gen --family convex --n 6 --m 24 --seed 17 --out " + tmp.path("q.poly")) == 0);
    REQUIRE(run_cli("build-polygon --t 1 --k 1 --in " + tmp.path("q.poly") + " --out " +
                    tmp.path("q.spanner")) == 0);
    CHECK(run_cli("verify --in " + tmp.path("q.poly") + " --spanner " + tmp.path("q.spanner") +
                  " --bound 2.8284271247461903") == 0);
}

TEST_CASE("cli forest pipeline") {
    TempDir tmp;
    REQUIRE(run_cli("gen --family randomForest --n 24 --m 72 --seed 13 --out " +
                    tmp.path("f.forest")) == 0);
    REQUIRE(run_cli("build-forest --t 2 --k 6 --in " + tmp.path("f.forest") + " --out " +
                    tmp.path("f.spanner")) == 0);
    CHECK(run_cli("verify --in " + tmp.path("f.forest") + " --spanner " + tmp.path("f.spanner") +
                  " --bound 4") == 0);
}

TEST_CASE("cli bench writes the experiment csv") {
    TempDir tmp;
    REQUIRE(run_cli("bench --family comb --n 16,32 --t 2 --k 1 --m-mult 8 --out " +
                    tmp.path("bench.csv")) == 0);
    std::string csv = slurp(tmp.path("bench.csv"));
    CHECK(csv.rfind("family,n,m,k,t,size,complexity,steiner,max_ratio,ms", 0) == 0);
    CHECK(csv.find("comb,16,") != std::string::npos);
    CHECK(csv.find("comb,32,") != std::string::npos);
}
