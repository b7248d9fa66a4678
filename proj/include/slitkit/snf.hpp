#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "slitkit/errors.hpp"

namespace slitkit {

using Int = mpz_class;
using DenseMat = std::vector<std::vector<Int>>;

struct SparseIntMatrix {
    int rows = 0;
    int cols = 0;
    std::map<std::pair<int, int>, Int> entries;  // zero entries absent

    SparseIntMatrix() = default;
    SparseIntMatrix(int r, int c) : rows(r), cols(c) {}
    static SparseIntMatrix from_dense(const std::vector<std::vector<long>>& d);

    void set(int r, int c, Int v);
    Int get(int r, int c) const;
    long long nnz() const { return static_cast<long long>(entries.size()); }
};

struct SmithForm {
    std::vector<Int> factors;  // invariant factors d_1 | d_2 | ... (all positive)
    std::optional<DenseMat> U;  // row transform, unimodular
    std::optional<DenseMat> V;  // column transform, unimodular

    int rank() const { return static_cast<int>(factors.size()); }
    std::vector<Int> torsion() const;  // factors > 1
};

// Invariant factors of M. With transforms, U*M*V equals the diagonal embedding of
// the factors (and the computation runs dense, so keep those inputs small).
SmithForm smith_normal_form(const SparseIntMatrix& M, bool with_transforms = false);

// Rank of M over F_p, computed by Gaussian elimination mod p (independent of the
// integral route). Throws ArgumentError unless p is prime.
int rank_mod_p(const SparseIntMatrix& M, long p);

// Smallest t >= 1 with t*v inside the column lattice of M; nullopt if no multiple
// of v lies in the image.
std::optional<Int> preimage_order(const SparseIntMatrix& M, const std::vector<Int>& v);

// Does M*y = v have an integer solution?
bool integrally_solvable(const SparseIntMatrix& M, const std::vector<Int>& v);

// Saturated basis of the integer kernel of M, one column vector per basis element.
std::vector<std::vector<Int>> kernel_basis(const SparseIntMatrix& M);

// Exact integer solution of K*w = x if one exists (K arbitrary).
std::optional<std::vector<Int>> solve_exact(const SparseIntMatrix& K, const std::vector<Int>& x);

// Matrix Market coordinate format, 1-based indices, integer field.
void write_matrix_market(const SparseIntMatrix& M, std::ostream& out);
SparseIntMatrix read_matrix_market(std::istream& in);

} // namespace slitkit
