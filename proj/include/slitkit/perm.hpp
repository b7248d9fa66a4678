#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slitkit/errors.hpp"

namespace slitkit {

// Flat symbol index into a tableau, layer-major: (1,0),(1,1),...,(1,p_1),(2,0),...
using Symbol = int;

// The index set [p_1,...,p_n] of symbols (i,j), 1 <= i <= n, 0 <= j <= p_i.
struct Tableau {
    std::vector<int> widths;   // p_i, one per layer
    std::vector<int> offsets;  // offsets[i] = flat index of (i+1, 0)
    int symbol_count = 0;

    Tableau() = default;
    explicit Tableau(std::vector<int> p);
    static Tableau single(int p) { return Tableau({p}); }

    int layers() const { return static_cast<int>(widths.size()); }
    // layer is 1-based per the (i,j) convention
    Symbol flat(int layer, int j) const;
    std::pair<int, int> unflat(Symbol s) const;
    // successor (i,j) -> (i,j+1), or -1 if j = p_i
    Symbol successor(Symbol s) const;

    bool operator==(const Tableau& o) const { return widths == o.widths; }
    bool operator!=(const Tableau& o) const { return !(*this == o); }
    std::string str() const;  // "[p1,p2,...]"
};

// A bijection of a tableau's symbols, stored as the image array in flat order.
class TableauPermutation {
public:
    TableauPermutation() = default;
    TableauPermutation(Tableau tab, std::vector<std::uint8_t> images);

    static TableauPermutation identity(const Tableau& tab);
    // The permutation forced by condition S1: the product of the full layer cycles
    // <(i,0),...,(i,p_i)>.
    static TableauPermutation layer_cycles(const Tableau& tab);

    const Tableau& tableau() const { return tab_; }
    int size() const { return static_cast<int>(img_.size()); }
    Symbol operator()(Symbol s) const { return img_[static_cast<std::size_t>(s)]; }
    const std::vector<std::uint8_t>& images() const { return img_; }

    TableauPermutation inverse() const;
    bool is_identity() const;

    // C(sigma): number of cycles including fixed points.
    int cycle_count() const;
    // N(sigma) = #X - C(sigma): word length in transpositions.
    int norm() const;
    // Cycles sorted by minimal symbol, each rotated to start at its minimal symbol.
    std::vector<std::vector<Symbol>> cycles() const;

    bool operator==(const TableauPermutation& o) const {
        return tab_ == o.tab_ && img_ == o.img_;
    }
    bool operator!=(const TableauPermutation& o) const { return !(*this == o); }
    bool operator<(const TableauPermutation& o) const { return img_ < o.img_; }

private:
    Tableau tab_;
    std::vector<std::uint8_t> img_;
};

// sigma after tau: compose(sigma, tau)(x) = sigma(tau(x)).
TableauPermutation compose(const TableauPermutation& sigma, const TableauPermutation& tau);

int norm(const TableauPermutation& sigma);
int cycle_count(const TableauPermutation& sigma);

// Deletion map D_j^i: skip the symbol (i,j) from the cycle representation and shift
// the remaining (i,j') with j' > j down by one. Lands on [p_1,...,p_i - 1,...,p_n].
TableauPermutation delete_symbol(const TableauPermutation& sigma, int layer, int j);

// Canonical whitespace-free cycle notation. Fixed points are printed. For a single
// layer, symbols print as "j"; otherwise as "i.j".
std::string format_cycles(const TableauPermutation& sigma);
TableauPermutation parse_cycles(const Tableau& tab, std::string_view text);

} // namespace slitkit
