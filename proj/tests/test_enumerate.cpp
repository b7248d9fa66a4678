#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "slitkit/enumerate.hpp"

using namespace slitkit;

namespace {

Cell cell_1_1(const std::string& top, const std::string& mid) {
    Tableau tab = Tableau::single(3);
    return Cell::from_top_down(
        {parse_cycles(tab, top), parse_cycles(tab, mid), parse_cycles(tab, "(0,1,2,3)")});
}

struct CacheDirGuard {
    std::string dir;
    explicit CacheDirGuard(const std::string& d) : dir(d) {
        std::filesystem::remove_all(dir);
        setenv("SLITKIT_CACHE", dir.c_str(), 1);
    }
    ~CacheDirGuard() {
        unsetenv("SLITKIT_CACHE");
        std::filesystem::remove_all(dir);
    }
};

} // namespace

TEST_CASE("the eight cells of P_{1,1}") {
    CellSet cells = enumerate_nondegenerate(ModuliIndex(1, 1, 0));
    CHECK(cells.total_count() == 8);

    auto census = cells.bidegree_census();
    CHECK(census[{2, {4}}] == 2);
    CHECK(census[{2, {3}}] == 3);
    CHECK(census[{1, {4}}] == 1);
    CHECK(census[{2, {2}}] == 1);
    CHECK(census[{1, {3}}] == 1);

    // the explicit cells of the incidence figure
    Tableau t4 = Tableau::single(4);
    Tableau t2 = Tableau::single(2);
    std::vector<Cell> expected = {
        Cell::from_top_down({parse_cycles(t4, "(0,3,2,1,4)"), parse_cycles(t4, "(0,1,4)(2,3)"),
                             parse_cycles(t4, "(0,1,2,3,4)")}),
        Cell::from_top_down({parse_cycles(t4, "(0,3,2,1,4)"), parse_cycles(t4, "(0,3,4)(1,2)"),
                             parse_cycles(t4, "(0,1,2,3,4)")}),
        cell_1_1("(0,2,1,3)", "(0,1,3)(2)"),
        cell_1_1("(0,2,1,3)", "(0,3)(1,2)"),
        cell_1_1("(0,2,1,3)", "(0,2,3)(1)"),
        Cell::from_top_down({parse_cycles(t4, "(0,3,2,1,4)"), parse_cycles(t4, "(0,1,2,3,4)")}),
        Cell::from_top_down({parse_cycles(t2, "(0,1,2)"), parse_cycles(t2, "(0,2)(1)"),
                             parse_cycles(t2, "(0,1,2)")}),
        Cell::from_top_down(
            {parse_cycles(Tableau::single(3), "(0,2,1,3)"), parse_cycles(Tableau::single(3), "(0,1,2,3)")}),
    };
    for (const Cell& c : expected) {
        INFO("expected cell " << c.str());
        CHECK(cells.find(c) >= 0);
    }

    CHECK(cells.max_degree() == 6);  // dimension 3h
    CHECK(cells.degree_size(4) == 2);
    CHECK(cells.degree_size(5) == 4);
    CHECK(cells.degree_size(6) == 2);
}

TEST_CASE("exceptional point and tiny complexes") {
    CellSet pt = enumerate_nondegenerate(ModuliIndex(0, 1, 0));
    CHECK(pt.total_count() == 1);
    CHECK(pt.degree_size(0) == 1);
    CHECK(pt.cell_at(0, 0).q() == 0);

    CellSet disc = enumerate_nondegenerate(ModuliIndex(0, 1, 1));
    CHECK(disc.total_count() == 1);
    CHECK(disc.max_degree() == 3);
    Cell only = disc.cell_at(3, 0);
    CHECK(only.q() == 1);
    CHECK(only.tableau().widths == std::vector<int>{2});
}

TEST_CASE("sigma_0 is reconstructed, never stored") {
    CellSet cells = enumerate_nondegenerate(ModuliIndex(1, 1, 0));
    for (int d = 0; d <= 6; ++d)
        for (int i = 0; i < cells.degree_size(d); ++i) {
            Cell c = cells.cell_at(d, i);
            CHECK(c.sigma(0) == TableauPermutation::layer_cycles(c.tableau()));
        }
}

TEST_CASE("direct DFS agrees with face closure from the top cells (n = 1)") {
    for (ModuliIndex idx : {ModuliIndex(1, 1, 0), ModuliIndex(0, 1, 1), ModuliIndex(0, 1, 2),
                            ModuliIndex(1, 1, 1), ModuliIndex(0, 1, 3)}) {
        INFO("index " << idx.str());
        CellSet direct = enumerate_nondegenerate(idx);
        CellSet closed = enumerate_by_face_closure(idx);
        CHECK(direct == closed);
    }
}

TEST_CASE("for n = 2 a cell can evade face closure entirely") {
    // (1,[2,2]) in P_{0,2}: passes S1-S7 but is the face of no non-degenerate cell,
    // so the closure oracle under-counts; the direct DFS is authoritative
    ModuliIndex idx(0, 2, 0);
    Cell stray = Cell::parse("1;2,2;(1.0,2.1,1.2)(1.1,2.2,2.0)|(1.0,1.1,1.2)(2.0,2.1,2.2)");
    REQUIRE(is_nondegenerate(stray, idx));
    CellSet direct = enumerate_nondegenerate(idx);
    CellSet closed = enumerate_by_face_closure(idx);
    CHECK(direct.find(stray) >= 0);
    CHECK(closed.find(stray) < 0);
    CHECK(direct.total_count() == closed.total_count() + 1);
    for (int d = 0; d <= idx.top_degree(); ++d)
        for (int i = 0; i < direct.degree_size(d); ++i)
            for (const auto& f : all_faces(direct.cell_at(d, i)))
                CHECK(!(f.cell == stray));
}

TEST_CASE("degenerate cells absorb faces") {
    // every face of a cell failing S1-S7 fails them as well
    for (ModuliIndex idx : {ModuliIndex(1, 1, 0), ModuliIndex(0, 1, 2)}) {
        CellSet cells = enumerate_nondegenerate(idx);
        int checked = 0;
        for (int d = 0; d <= idx.top_degree(); ++d)
            for (int i = 0; i < cells.degree_size(d); ++i)
                for (const auto& f : all_faces(cells.cell_at(d, i))) {
                    if (is_nondegenerate(f.cell, idx)) continue;
                    for (const auto& g : all_faces(f.cell)) {
                        INFO("face of degenerate " << f.cell.str() << " -> " << g.cell.str());
                        CHECK(!is_nondegenerate(g.cell, idx));
                        ++checked;
                    }
                }
        CHECK(checked > 0);
    }
}

TEST_CASE("enumeration is worker-count independent") {
    EnumerateOptions serial{5, 1};
    EnumerateOptions parallel{5, 3};
    CHECK(enumerate_nondegenerate(ModuliIndex(1, 1, 1), serial) ==
          enumerate_nondegenerate(ModuliIndex(1, 1, 1), parallel));
}

TEST_CASE("budget exceeded raises a resource error") {
    EnumerateOptions opts{4, 1};
    try {
        enumerate_nondegenerate(ModuliIndex(2, 1, 1), opts);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.h == 5);
    }
}

TEST_CASE("cell cache round trip, byte identical") {
    CacheDirGuard guard("/tmp/slitkit-test-cache");
    ModuliIndex idx(1, 1, 0);
    CellSet computed = cells_for(idx, {}, CacheMode::read_write);
    REQUIRE(std::filesystem::exists(cache_path(idx)));

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };
    std::string first = slurp(cache_path(idx));
    CHECK(first.rfind("slitkit-cells v1 g=1 n=1 m=0 h=2", 0) == 0);

    CellSet loaded = cells_for(idx, {}, CacheMode::read_only);
    CHECK(loaded == computed);

    store_cells_cache(loaded);
    CHECK(slurp(cache_path(idx)) == first);
}

TEST_CASE("read-only cache mode does not write") {
    CacheDirGuard guard("/tmp/slitkit-test-cache-ro");
    cells_for(ModuliIndex(0, 1, 1), {}, CacheMode::read_only);
    CHECK(!std::filesystem::exists(cache_path(ModuliIndex(0, 1, 1))));
}
