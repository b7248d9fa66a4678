#include <map>
#include <random>

#include "doctest.h"
#include "slitkit/cell.hpp"

using namespace slitkit;

namespace {

Cell cell_1_1(const std::string& top, const std::string& mid) {
    Tableau tab = Tableau::single(3);
    return Cell::from_top_down(
        {parse_cycles(tab, top), parse_cycles(tab, mid), parse_cycles(tab, "(0,1,2,3)")});
}

} // namespace

TEST_CASE("moduli index derived quantities") {
    ModuliIndex m110(1, 1, 0);
    CHECK(m110.h() == 2);
    CHECK(m110.top_degree() == 6);
    CHECK(ModuliIndex(2, 1, 0).h() == 4);
    CHECK(ModuliIndex(0, 1, 0).exceptional_point());
    CHECK(ModuliIndex(0, 2, 1).h() == 3);
    CHECK_THROWS_AS(ModuliIndex(0, 0, 1), StructuralError);
}

TEST_CASE("bar cell conditions") {
    Cell c = cell_1_1("(0,2,1,3)", "(0,1,3)(2)");
    CHECK(c.total_norm() == 2);
    CHECK(c.top_cycle_count() == 1);
    CHECK(is_bar_cell(c, ModuliIndex(1, 1, 0)));   // h = 2
    CHECK(!is_bar_cell(c, ModuliIndex(0, 1, 1)));  // h = 1: norm budget exceeded
}

TEST_CASE("the degenerate conditions S1-S7") {
    ModuliIndex idx(1, 1, 0);
    CHECK(is_nondegenerate(cell_1_1("(0,2,1,3)", "(0,2,3)(1)"), idx));
    CHECK(is_nondegenerate(cell_1_1("(0,2,1,3)", "(0,1,3)(2)"), idx));
    CHECK(is_nondegenerate(cell_1_1("(0,2,1,3)", "(0,3)(1,2)"), idx));

    // S6 first clause: adjacent equal permutations
    Tableau tab = Tableau::single(3);
    Cell equal_adjacent = Cell::from_top_down({parse_cycles(tab, "(0,1,2,3)"),
                                               parse_cycles(tab, "(0,1,2,3)")});
    CHECK(!is_nondegenerate(equal_adjacent, idx));

    // the blue (1,[4]) cell
    Tableau t4 = Tableau::single(4);
    Cell blue = Cell::from_top_down(
        {parse_cycles(t4, "(0,3,2,1,4)"), parse_cycles(t4, "(0,1,2,3,4)")});
    CHECK(is_nondegenerate(blue, idx));

    // S1 violated: sigma_0 not the full layer cycle
    Cell bad_bottom = Cell::from_top_down(
        {parse_cycles(tab, "(0,2,1,3)"), parse_cycles(tab, "(0,3)(1,2)")});
    CHECK(!is_nondegenerate(bad_bottom, idx));

    // S4 violated: C(sigma_q) too small for m = 1
    CHECK(!is_nondegenerate(cell_1_1("(0,2,1,3)", "(0,2,3)(1)"), ModuliIndex(1, 1, 1)));
}

TEST_CASE("face count and alternating signs on a (1,[1]) tuple") {
    Tableau tab = Tableau::single(1);
    Cell c = Cell::from_top_down(
        {TableauPermutation::identity(tab), TableauPermutation::layer_cycles(tab)});
    auto faces = all_faces(c);
    REQUIRE(faces.size() == 4);  // (q+1) + (p+1)
    CHECK(faces[0].vertical);
    CHECK(faces[0].sign == 1);
    CHECK(faces[1].vertical);
    CHECK(faces[1].sign == -1);
    CHECK(!faces[2].vertical);
    CHECK(faces[2].sign == 1);   // (-1)^{(q+1)+j} with q = 1, j = 0
    CHECK(faces[3].sign == -1);  // j = 1
}

TEST_CASE("the bar face of the first red cell is the yellow cell") {
    Cell red = cell_1_1("(0,2,1,3)", "(0,1,3)(2)");
    Tableau tab = Tableau::single(3);
    Cell yellow = Cell::from_top_down(
        {parse_cycles(tab, "(0,2,1,3)"), parse_cycles(tab, "(0,1,2,3)")});
    bool found = false;
    for (const auto& f : all_faces(red))
        if (f.vertical && f.position == 1) {
            CHECK(f.sign == -1);
            CHECK(f.cell == yellow);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("boundary_faces filters tuples that leave the complex") {
    ModuliIndex idx(1, 1, 0);
    Cell red2 = cell_1_1("(0,2,1,3)", "(0,3)(1,2)");
    // the d'_2 face has top cycle count 2 > m + n and is not a bar cell
    bool saw_bad = false;
    for (const auto& f : all_faces(red2))
        if (f.vertical && f.position == 2) {
            CHECK(!is_bar_cell(f.cell, idx));
            saw_bad = true;
        }
    CHECK(saw_bad);
    for (const auto& [sign, cell] : boundary_faces(red2, idx)) CHECK(is_bar_cell(cell, idx));
}

TEST_CASE("iterated faces cancel: dd = 0 with the Koszul signs") {
    std::mt19937 rng(17);
    std::vector<Tableau> tableaux = {Tableau::single(3), Tableau::single(4), Tableau({2, 2}),
                                     Tableau({3, 1})};
    for (int trial = 0; trial < 60; ++trial) {
        const Tableau& tab = tableaux[static_cast<std::size_t>(trial) % tableaux.size()];
        int q = 1 + static_cast<int>(rng() % 3);
        std::vector<TableauPermutation> perms;
        perms.push_back(TableauPermutation::layer_cycles(tab));
        for (int k = 0; k < q; ++k) {
            std::vector<std::uint8_t> img(static_cast<std::size_t>(tab.symbol_count));
            for (std::size_t s = 0; s < img.size(); ++s) img[s] = static_cast<std::uint8_t>(s);
            std::shuffle(img.begin(), img.end(), rng);
            perms.push_back(TableauPermutation(tab, std::move(img)));
        }
        Cell c = Cell::from_bottom_up(std::move(perms));
        std::map<std::string, long long> acc;
        for (const auto& f1 : all_faces(c))
            for (const auto& f2 : all_faces(f1.cell))
                acc[f2.cell.str()] += static_cast<long long>(f1.sign) * f2.sign;
        for (const auto& [key, total] : acc) {
            INFO("face-of-face " << key);
            CHECK(total == 0);
        }
    }
}

TEST_CASE("cell serialization round trip") {
    Cell red = cell_1_1("(0,2,1,3)", "(0,3)(1,2)");
    CHECK(red.str() == "2;3;(0,2,1,3)|(0,3)(1,2)|(0,1,2,3)");
    CHECK(Cell::parse(red.str()) == red);

    Tableau t21({2, 1});
    Cell multi = Cell::from_top_down({TableauPermutation::layer_cycles(t21),
                                      TableauPermutation::layer_cycles(t21)});
    CHECK(Cell::parse(multi.str()) == multi);
    CHECK_THROWS_AS(Cell::parse("bogus"), StructuralError);
}
