#pragma once

#include <memory>
#include <string>
#include <vector>

#include "slitkit/enumerate.hpp"
#include "slitkit/snf.hpp"

namespace slitkit {

struct Coefficients {
    bool integral = true;
    long p = 0;  // prime, when not integral

    static Coefficients Z() { return {true, 0}; }
    static Coefficients F(long p);
    static Coefficients parse(const std::string& text);  // "z", "f2", "f<p>"
    std::string tag() const;                             // "Z", "F2", "F<p>"
    bool operator==(const Coefficients& o) const { return integral == o.integral && p == o.p; }
};

// The relative total cochain complex: a basis of non-degenerate cells per degree and
// the coboundary delta_d : C^d -> C^{d+1}.
struct GradedMatrixComplex {
    ModuliIndex index;
    std::shared_ptr<const CellSet> cells;
    std::vector<SparseIntMatrix> delta;  // delta[d] has degree_size(d+1) rows, degree_size(d) cols

    int top_degree() const { return index.top_degree(); }
    const SparseIntMatrix& delta_from(int d) const { return delta.at(static_cast<std::size_t>(d)); }
};

// Builds every coboundary matrix and verifies delta o delta = 0 exactly.
GradedMatrixComplex assemble_cochain_complex(CellSet cells);
GradedMatrixComplex assemble_cochain_complex(std::shared_ptr<const CellSet> cells);

struct HomologyGroup {
    int betti = 0;
    std::vector<long long> torsion;  // ascending

    bool trivial() const { return betti == 0 && torsion.empty(); }
    bool operator==(const HomologyGroup& o) const { return betti == o.betti && torsion == o.torsion; }
    std::string str() const;  // "Z^2 + Z_2" style, "0" when trivial
};

struct HomologyTable {
    ModuliIndex index;
    Coefficients coeff;
    std::vector<HomologyGroup> groups;          // H_k(M), k ascending, trailing zeros trimmed
    std::vector<long long> cells_per_degree;    // cochain degrees 0..3h

    const HomologyGroup& at(int k) const;
    int two_torsion_rank(int k) const;  // summands of even order in H_k
};

struct HomologyOptions {
    int threads = 1;
};

// H_*(M_{g,n}^m) read off as relative cohomology in degree 3h - k. Integral and
// odd-prime coefficients require m <= 1; F2 is available for every m.
HomologyTable homology_groups(const GradedMatrixComplex& complex, Coefficients coeff,
                              const HomologyOptions& opts = {});

std::string homology_table_json(const HomologyTable& table);

// Euler characteristic from the cell census (alternating sum over cochain degrees).
long long euler_characteristic_cells(const CellSet& cells);
long long euler_characteristic(const HomologyTable& table);

// dim_F2 H_k = betti_k + #2-torsion(H_k) + #2-torsion(H_{k-1}); exact identity the
// computed Z and F2 tables must satisfy for m <= 1.
bool universal_coefficient_consistent(const HomologyTable& integral, const HomologyTable& mod2);

// One fixed-p column of the double complex (n = 1): only the bar faces survive.
struct ColumnReport {
    std::vector<int> widths;
    int top_q = -1;                       // highest q carrying cells
    std::vector<HomologyGroup> homology;  // integral, indexed by q = 0..top_q
    bool concentrated = false;            // homology vanishes below top_q
};

ColumnReport column_concentration(const CellSet& cells, const std::vector<int>& widths);
std::vector<ColumnReport> all_column_reports(const CellSet& cells);

} // namespace slitkit
