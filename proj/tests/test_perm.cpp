#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "slitkit/perm.hpp"

using namespace slitkit;

namespace {

TableauPermutation random_perm(const Tableau& tab, std::mt19937& rng) {
    std::vector<std::uint8_t> img(static_cast<std::size_t>(tab.symbol_count));
    std::iota(img.begin(), img.end(), std::uint8_t{0});
    std::shuffle(img.begin(), img.end(), rng);
    return TableauPermutation(tab, std::move(img));
}

std::vector<TableauPermutation> all_perms(const Tableau& tab) {
    std::vector<std::uint8_t> img(static_cast<std::size_t>(tab.symbol_count));
    std::iota(img.begin(), img.end(), std::uint8_t{0});
    std::vector<TableauPermutation> out;
    do {
        out.push_back(TableauPermutation(tab, img));
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

} // namespace

TEST_CASE("tableau symbol layout is layer-major") {
    Tableau tab({2, 1});
    CHECK(tab.symbol_count == 5);
    CHECK(tab.flat(1, 0) == 0);
    CHECK(tab.flat(1, 2) == 2);
    CHECK(tab.flat(2, 0) == 3);
    CHECK(tab.flat(2, 1) == 4);
    CHECK(tab.unflat(4) == std::pair<int, int>{2, 1});
    CHECK(tab.successor(0) == 1);
    CHECK(tab.successor(2) == -1);  // (1,2) has no successor
    CHECK_THROWS_AS(tab.flat(1, 3), StructuralError);
}

TEST_CASE("compose applies the right factor first") {
    Tableau tab = Tableau::single(2);
    auto id = TableauPermutation::identity(tab);
    auto s = parse_cycles(tab, "(0,1)(2)");
    auto t = parse_cycles(tab, "(1,2)(0)");
    CHECK(compose(id, s) == s);
    CHECK(compose(s, id) == s);
    CHECK(compose(s, t) == parse_cycles(tab, "(0,1,2)"));
    CHECK(compose(s, s.inverse()) == id);
    CHECK(compose(s.inverse(), s) == id);
}

TEST_CASE("compose rejects mismatched tableaux") {
    auto s = TableauPermutation::identity(Tableau::single(2));
    auto t = TableauPermutation::identity(Tableau::single(3));
    CHECK_THROWS_AS(compose(s, t), StructuralError);
}

TEST_CASE("norm and cycle count") {
    Tableau t4 = Tableau::single(4);
    Tableau t3 = Tableau::single(3);
    CHECK(norm(TableauPermutation::identity(t4)) == 0);
    CHECK(norm(parse_cycles(t3, "(0,1,2,3)")) == 3);  // an r-cycle has norm r-1
    CHECK(norm(parse_cycles(t3, "(0,2)(1,3)")) == 2);
    CHECK(cycle_count(TableauPermutation::identity(t4)) == 5);
    CHECK(cycle_count(parse_cycles(t3, "(0,2,3)(1)")) == 2);
    CHECK(cycle_count(parse_cycles(t3, "(0,2,1,3)")) == 1);
}

TEST_CASE("group laws, exhaustive on S[3]") {
    Tableau tab = Tableau::single(3);
    auto perms = all_perms(tab);
    REQUIRE(perms.size() == 24);
    auto id = TableauPermutation::identity(tab);
    for (const auto& a : perms) {
        CHECK(compose(a, a.inverse()) == id);
        CHECK(compose(a.inverse(), a) == id);
        CHECK(compose(a, id) == a);
        for (const auto& b : perms)
            for (const auto& c : perms)
                CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    }
}

TEST_CASE("norm equals symbol count minus cycle count, exhaustive on S[4]") {
    Tableau tab = Tableau::single(4);
    for (const auto& p : all_perms(tab))
        CHECK(p.norm() == tab.symbol_count - p.cycle_count());
}

TEST_CASE("norm is subadditive") {
    std::mt19937 rng(7);
    Tableau tab({3, 2});
    for (int trial = 0; trial < 500; ++trial) {
        auto a = random_perm(tab, rng);
        auto b = random_perm(tab, rng);
        CHECK(compose(a, b).norm() <= a.norm() + b.norm());
    }
}

TEST_CASE("deletion maps") {
    Tableau t3 = Tableau::single(3);
    Tableau t2 = Tableau::single(2);
    CHECK(delete_symbol(TableauPermutation::identity(t3), 1, 1) ==
          TableauPermutation::identity(t2));
    // skip symbol 1 from (0,2,1,3), then shift 2->1, 3->2
    CHECK(delete_symbol(parse_cycles(t3, "(0,2,1,3)"), 1, 1) == parse_cycles(t2, "(0,1,2)"));
    CHECK_THROWS_AS(delete_symbol(TableauPermutation::identity(t3), 1, 7), StructuralError);
    CHECK_THROWS_AS(delete_symbol(TableauPermutation::identity(t3), 2, 0), StructuralError);
}

TEST_CASE("deletion satisfies the n-semisimplicial identities") {
    std::mt19937 rng(11);
    std::vector<Tableau> tableaux = {Tableau::single(4), Tableau({3, 2}), Tableau({2, 2, 1})};
    for (int trial = 0; trial < 1000; ++trial) {
        const Tableau& tab = tableaux[static_cast<std::size_t>(trial) % tableaux.size()];
        auto sigma = random_perm(tab, rng);
        for (int i = 1; i <= tab.layers(); ++i) {
            int p = tab.widths[static_cast<std::size_t>(i - 1)];
            if (p < 2) continue;  // the double deletion needs two removable symbols
            for (int j = 0; j < p; ++j)
                for (int k = j; k < p; ++k)
                    CHECK(delete_symbol(delete_symbol(sigma, i, j), i, k) ==
                          delete_symbol(delete_symbol(sigma, i, k + 1), i, j));
            // deletions in different layers commute
            for (int i2 = i + 1; i2 <= tab.layers(); ++i2) {
                if (tab.widths[static_cast<std::size_t>(i2 - 1)] < 1) continue;
                CHECK(delete_symbol(delete_symbol(sigma, i, 0), i2, 0) ==
                      delete_symbol(delete_symbol(sigma, i2, 0), i, 0));
            }
        }
    }
}

TEST_CASE("cycle notation round trip and canonical form") {
    Tableau t3 = Tableau::single(3);
    auto p = parse_cycles(t3, "(0,2,1,3)");
    CHECK(format_cycles(p) == "(0,2,1,3)");
    CHECK(format_cycles(parse_cycles(t3, "(0,2,3)(1)")) == "(0,2,3)(1)");
    // fixed points are printed, cycles sorted by minimal symbol, rotation canonical
    CHECK(format_cycles(TableauPermutation::identity(t3)) == "(0)(1)(2)(3)");

    Tableau t21({2, 1});
    auto q = parse_cycles(t21, "(1.0,2.1)(1.1)(1.2,2.0)");
    CHECK(format_cycles(q) == "(1.0,2.1)(1.1)(1.2,2.0)");

    std::mt19937 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        auto r = random_perm(trial % 2 ? t3 : t21, rng);
        CHECK(parse_cycles(r.tableau(), format_cycles(r)) == r);
    }
    CHECK_THROWS_AS(parse_cycles(t3, "(0,1,2)"), StructuralError);  // missing fixed point
    CHECK_THROWS_AS(parse_cycles(t3, "(0,1)(1,2,3)"), StructuralError);
}
