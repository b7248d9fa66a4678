#pragma once

#include <map>
#include <optional>
#include <string>

#include "slitkit/homology.hpp"

namespace slitkit {

// A finitely supported integer function on the non-degenerate cells of one total
// degree. Mod-p readings reduce the integer coefficients.
struct Cochain {
    ModuliIndex index;
    int degree = 0;
    std::map<Cell, long long> support;

    Cochain() = default;
    Cochain(ModuliIndex idx, int deg) : index(idx), degree(deg) {}

    void add(const Cell& cell, long long coeff);
    long long coeff(const Cell& cell) const;
    bool zero() const { return support.empty(); }

    std::string json() const;
    static Cochain parse_json(const std::string& text);
};

// delta(x) = 0 in the relative complex.
bool is_cocycle(const GradedMatrixComplex& complex, const Cochain& x);
bool is_cocycle_mod2(const GradedMatrixComplex& complex, const Cochain& x);

// Coordinates of [x] against the computed cohomology basis of its degree:
// H^d = sum of Z_{order} summands plus a free part.
struct ClassCoordinates {
    std::vector<std::pair<long long, long long>> torsion;  // (order, residue mod order)
    std::vector<Int> free_part;

    bool zero() const;
    std::string str() const;
};
ClassCoordinates class_coordinates(const GradedMatrixComplex& complex, const Cochain& x);

// Smallest t >= 1 with t*x a coboundary; nullopt encodes infinite order.
std::optional<Int> class_order(const GradedMatrixComplex& complex, const Cochain& x);

// Is x a coboundary (integrally / mod 2)?
bool is_coboundary(const GradedMatrixComplex& complex, const Cochain& x);
bool is_coboundary_mod2(const GradedMatrixComplex& complex, const Cochain& x);

// The combinatorial Pontrjagin product: the left factor occupies the lower band of
// the single layer, the right factor the upper band, the boundary strip is shared.
// Coefficients sum sign(time shuffle) * x(lower part) * y(upper part) over all
// admissible decompositions of each target cell. Degrees add.
Cochain stack_product(const Cochain& x, const Cochain& y, const CellSet& target_cells);
// Convenience overload enumerating (or loading) the target complex itself.
Cochain stack_product(const Cochain& x, const Cochain& y,
                      const EnumerateOptions& opts = {}, CacheMode cache = CacheMode::read_write);

// --- shipped representatives ----------------------------------------------

// Dual of the single 0-cell of P_{0,1}: the unit for the stacking product.
Cochain unit_rep();
// Ground class of M_{0,1}^1: dual of the unique top cell of P_{0,1}^1.
Cochain a_rep();
// The explicit 5-cell dual generating H^5(P_{1,1}, P'): the class d.
Cochain d_rep();
// A computed generator of the top cohomology H^{3h}(P, P'); certified by
// class_coordinates. For (1,1,0) this is the class c.
Cochain ground_rep(const GradedMatrixComplex& complex);
// A mod-2 generator of H^degree(P, P'; F2), as an integer cochain with 0/1 coefficients.
Cochain mod2_generator(const GradedMatrixComplex& complex, int degree);

// Resolve "builtin:<name>" fixture representatives (unit, a, b, c, d).
std::optional<Cochain> builtin_rep(const std::string& name, const EnumerateOptions& opts = {},
                                   CacheMode cache = CacheMode::read_write);

} // namespace slitkit
