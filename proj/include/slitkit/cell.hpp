#pragma once

#include <string>
#include <vector>

#include "slitkit/perm.hpp"

namespace slitkit {

// (g, n, m) with the derived bound h = 2g - 2 + 2n + m.
struct ModuliIndex {
    int g = 0;
    int n = 1;
    int m = 0;

    ModuliIndex() = default;
    ModuliIndex(int g_, int n_, int m_);

    int h() const { return 2 * g - 2 + 2 * n + m; }
    int top_degree() const { return 3 * h(); }
    // M_{0,1} is a single point; the complex degenerates to one 0-cell.
    bool exceptional_point() const { return g == 0 && n == 1 && m == 0; }

    bool operator==(const ModuliIndex& o) const { return g == o.g && n == o.n && m == o.m; }
    std::string str() const;
};

// A bar tuple (sigma_q : ... : sigma_0) on a common tableau.
class Cell {
public:
    Cell() = default;
    // perms listed top-down, sigma_q first, matching the customary notation.
    static Cell from_top_down(std::vector<TableauPermutation> perms);
    // perms listed bottom-up, sigma_0 first.
    static Cell from_bottom_up(std::vector<TableauPermutation> perms);

    const Tableau& tableau() const { return sigma_.front().tableau(); }
    int q() const { return static_cast<int>(sigma_.size()) - 1; }
    const TableauPermutation& sigma(int k) const { return sigma_[static_cast<std::size_t>(k)]; }
    const TableauPermutation& top() const { return sigma_.back(); }

    // q + p_1 + ... + p_n
    int degree() const;
    // sum over k of N(sigma_k sigma_{k-1}^{-1})
    int total_norm() const { return total_norm_; }
    int top_cycle_count() const { return top_cycles_; }

    bool operator==(const Cell& o) const;
    bool operator!=(const Cell& o) const { return !(*this == o); }
    // canonical order: bidegree first, then image arrays from sigma_q downwards
    bool operator<(const Cell& o) const;

    // "q;p1[,p2...];sigma_q|...|sigma_0" with canonical cycle notation
    std::string str() const;
    static Cell parse(const std::string& line);

private:
    std::vector<TableauPermutation> sigma_;  // sigma_[k] = sigma_k
    int total_norm_ = 0;
    int top_cycles_ = 0;

    void finish();
};

// Conditions of the cell definition: total norm <= h and C(sigma_q) <= m + n.
bool is_bar_cell(const Cell& cell, const ModuliIndex& index);

// Conditions S1-S7.
bool is_nondegenerate(const Cell& cell, const ModuliIndex& index);

// One face of a cell, tagged with its Koszul sign in the total complex.
struct SignedFace {
    int sign;        // +1 or -1
    Cell cell;
    bool vertical;   // true for a bar face, false for a deletion face
    int layer;       // deletion faces only (1-based)
    int position;    // k for bar faces, j for deletion faces
};

// All faces d'_k (0 <= k <= q) and d^i_j (0 <= j <= p_i, layers with p_i >= 1),
// regardless of whether the face tuple is a bar cell for any index.
std::vector<SignedFace> all_faces(const Cell& cell);

// The faces that are bar cells for the given index; faces that leave the complex
// (e.g. d'_q increasing the top cycle count past m + n) are filtered out.
std::vector<std::pair<int, Cell>> boundary_faces(const Cell& cell, const ModuliIndex& index);

} // namespace slitkit
