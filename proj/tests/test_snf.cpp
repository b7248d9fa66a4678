#include <random>
#include <sstream>

#include "doctest.h"
#include "slitkit/snf.hpp"

using namespace slitkit;

namespace {

std::vector<Int> factors_of(const SparseIntMatrix& M) { return smith_normal_form(M).factors; }

DenseMat multiply(const DenseMat& A, const DenseMat& B) {
    std::size_t n = A.size(), k = B.size(), m = k ? B[0].size() : 0;
    DenseMat C(n, std::vector<Int>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (A[i][j] != 0)
                for (std::size_t c = 0; c < m; ++c) C[i][c] += A[i][j] * B[j][c];
    return C;
}

DenseMat dense_of(const SparseIntMatrix& M) {
    DenseMat d(static_cast<std::size_t>(M.rows), std::vector<Int>(static_cast<std::size_t>(M.cols), 0));
    for (const auto& [rc, v] : M.entries)
        d[static_cast<std::size_t>(rc.first)][static_cast<std::size_t>(rc.second)] = v;
    return d;
}

Int determinant(DenseMat a) {  // fraction-free Bareiss, for small test matrices
    std::size_t n = a.size();
    if (n == 0) return 1;
    Int sign = 1, denom = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && a[pivot][c] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != c) {
            std::swap(a[pivot], a[c]);
            sign = -sign;
        }
        for (std::size_t r = c + 1; r < n; ++r)
            for (std::size_t j = c + 1; j < n; ++j)
                a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) / denom;
        denom = a[c][c];
    }
    return sign * a[n - 1][n - 1];
}

SparseIntMatrix random_matrix(std::mt19937& rng, int rows, int cols, int spread) {
    SparseIntMatrix M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int v = static_cast<int>(rng() % static_cast<unsigned>(2 * spread + 1)) - spread;
            if (v != 0) M.entries[{r, c}] = v;
        }
    return M;
}

Int minor_gcd(const SparseIntMatrix& M, int k) {
    DenseMat d = dense_of(M);
    std::vector<int> rows(static_cast<std::size_t>(M.rows)), cols(static_cast<std::size_t>(M.cols));
    Int g = 0;
    // enumerate k-subsets of rows and columns
    std::vector<int> rsel, csel;
    auto det_sub = [&]() {
        DenseMat sub(static_cast<std::size_t>(k), std::vector<Int>(static_cast<std::size_t>(k)));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    d[static_cast<std::size_t>(rsel[static_cast<std::size_t>(i)])]
                     [static_cast<std::size_t>(csel[static_cast<std::size_t>(j)])];
        g = gcd(g, determinant(sub));
    };
    auto rec_cols = [&](auto&& self, int start) -> void {
        if (static_cast<int>(csel.size()) == k) {
            det_sub();
            return;
        }
        for (int c = start; c < M.cols; ++c) {
            csel.push_back(c);
            self(self, c + 1);
            csel.pop_back();
        }
    };
    auto rec_rows = [&](auto&& self, int start) -> void {
        if (static_cast<int>(rsel.size()) == k) {
            rec_cols(rec_cols, 0);
            return;
        }
        for (int r = start; r < M.rows; ++r) {
            rsel.push_back(r);
            self(self, r + 1);
            rsel.pop_back();
        }
    };
    rec_rows(rec_rows, 0);
    return g;
}

} // namespace

TEST_CASE("smith normal form of small fixtures") {
    CHECK(factors_of(SparseIntMatrix::from_dense({{2, 0}, {0, 3}})) == std::vector<Int>{1, 6});
    // the 4x2 coboundary of the worked example
    CHECK(factors_of(SparseIntMatrix::from_dense({{-1, 1}, {0, 1}, {1, 1}, {0, -1}})) ==
          std::vector<Int>{1, 1});
    CHECK(factors_of(SparseIntMatrix(3, 5)).empty());
    CHECK(factors_of(SparseIntMatrix(0, 0)).empty());
}

TEST_CASE("invariant factors ignore row and column shuffles") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        SparseIntMatrix M = random_matrix(rng, 4, 5, 4);
        auto base = factors_of(M);
        // random row/col permutation with random signs
        std::vector<int> rp(4), cp(5);
        for (int i = 0; i < 4; ++i) rp[static_cast<std::size_t>(i)] = i;
        for (int i = 0; i < 5; ++i) cp[static_cast<std::size_t>(i)] = i;
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        SparseIntMatrix S(4, 5);
        for (const auto& [rc, v] : M.entries) {
            int sign = ((rng() & 1) != 0u) ? 1 : -1;
            S.entries[{rp[static_cast<std::size_t>(rc.first)], cp[static_cast<std::size_t>(rc.second)]}] =
                sign * v;
        }
        // per-entry sign flips do not preserve SNF; flip whole rows instead
        S.entries.clear();
        std::vector<int> rsign(4), csign(5);
        for (auto& s : rsign) s = ((rng() & 1) != 0u) ? 1 : -1;
        for (auto& s : csign) s = ((rng() & 1) != 0u) ? 1 : -1;
        for (const auto& [rc, v] : M.entries)
            S.entries[{rp[static_cast<std::size_t>(rc.first)], cp[static_cast<std::size_t>(rc.second)]}] =
                rsign[static_cast<std::size_t>(rc.first)] * csign[static_cast<std::size_t>(rc.second)] * v;
        CHECK(factors_of(S) == base);
    }
}

TEST_CASE("products of invariant factors equal minor gcds") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 15; ++trial) {
        SparseIntMatrix M = random_matrix(rng, 3, 4, 3);
        auto factors = factors_of(M);
        Int product = 1;
        for (std::size_t k = 1; k <= factors.size(); ++k) {
            product *= factors[k - 1];
            CHECK(product == minor_gcd(M, static_cast<int>(k)));
        }
    }
}

TEST_CASE("transforms reproduce the diagonal and are unimodular") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        int rows = 2 + static_cast<int>(rng() % 4);
        int cols = 2 + static_cast<int>(rng() % 4);
        SparseIntMatrix M = random_matrix(rng, rows, cols, 5);
        SmithForm snf = smith_normal_form(M, true);
        DenseMat product = multiply(multiply(*snf.U, dense_of(M)), *snf.V);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                Int expect = (r == c && r < snf.rank()) ? snf.factors[static_cast<std::size_t>(r)] : 0;
                CHECK(product[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] == expect);
            }
        CHECK(abs(determinant(*snf.U)) == 1);
        CHECK(abs(determinant(*snf.V)) == 1);
        // divisibility chain
        for (std::size_t i = 1; i < snf.factors.size(); ++i)
            CHECK(snf.factors[i] % snf.factors[i - 1] == 0);
    }
}

TEST_CASE("rank over F_p") {
    CHECK(rank_mod_p(SparseIntMatrix::from_dense({{2}}), 2) == 0);
    CHECK(rank_mod_p(SparseIntMatrix::from_dense({{1, 1}, {1, 1}}), 2) == 1);
    CHECK(rank_mod_p(SparseIntMatrix::from_dense({{0, -1, 0, -1}, {0, -1, 0, -1}}), 2) == 1);
    CHECK(rank_mod_p(SparseIntMatrix::from_dense({{2, 0}, {0, 3}}), 3) == 1);
    CHECK_THROWS_AS(rank_mod_p(SparseIntMatrix(1, 1), 6), ArgumentError);

    // cross-route: rank mod p = number of invariant factors not divisible by p
    std::mt19937 rng(37);
    for (int trial = 0; trial < 30; ++trial) {
        SparseIntMatrix M = random_matrix(rng, 4, 4, 6);
        auto factors = factors_of(M);
        for (long p : {2L, 3L, 5L}) {
            int expected = 0;
            for (const Int& f : factors)
                if (f % p != 0) ++expected;
            CHECK(rank_mod_p(M, p) == expected);
        }
    }
}

TEST_CASE("preimage orders in the cokernel") {
    CHECK(preimage_order(SparseIntMatrix::from_dense({{2}}), {Int(0)}) == Int(1));
    CHECK(preimage_order(SparseIntMatrix::from_dense({{2}}), {Int(1)}) == Int(2));
    auto padded = SparseIntMatrix::from_dense({{1, 0}, {0, 10}, {0, 0}});
    CHECK(preimage_order(padded, {Int(0), Int(1), Int(0)}) == Int(10));
    CHECK(!preimage_order(padded, {Int(0), Int(0), Int(1)}).has_value());
    CHECK(preimage_order(SparseIntMatrix::from_dense({{1, 0}, {0, 10}, {0, 0}}),
                         {Int(3), Int(10), Int(0)}) == Int(1));
    CHECK(integrally_solvable(SparseIntMatrix::from_dense({{2, 1}}), {Int(7)}));
}

TEST_CASE("kernel bases are saturated and solve_exact round trips") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        SparseIntMatrix M = random_matrix(rng, 3, 5, 4);
        auto kernel = kernel_basis(M);
        SparseIntMatrix K(M.cols, static_cast<int>(kernel.size()));
        for (int c = 0; c < static_cast<int>(kernel.size()); ++c)
            for (int r = 0; r < M.cols; ++r)
                if (kernel[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)] != 0)
                    K.entries[{r, c}] = kernel[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
        // M * k = 0 for every basis vector
        for (const auto& vec : kernel)
            for (int r = 0; r < M.rows; ++r) {
                Int acc = 0;
                for (const auto& [rc, v] : M.entries)
                    if (rc.first == r) acc += v * vec[static_cast<std::size_t>(rc.second)];
                CHECK(acc == 0);
            }
        // saturation: all invariant factors of the kernel matrix are 1
        for (const Int& f : factors_of(K)) CHECK(f == 1);
        // solve_exact recovers a random combination
        if (!kernel.empty()) {
            std::vector<Int> target(static_cast<std::size_t>(M.cols), 0);
            std::vector<Int> coeffs;
            for (const auto& vec : kernel) {
                Int c = static_cast<long>(rng() % 7) - 3;
                coeffs.push_back(c);
                for (int r = 0; r < M.cols; ++r) target[static_cast<std::size_t>(r)] += c * vec[static_cast<std::size_t>(r)];
            }
            auto sol = solve_exact(K, target);
            REQUIRE(sol.has_value());
            // K has full column rank, so the solution is unique
            CHECK(*sol == coeffs);
        }
    }
}

TEST_CASE("matrix market round trip") {
    SparseIntMatrix M = SparseIntMatrix::from_dense({{0, -1, 0, -1}, {0, -1, 0, -1}});
    std::stringstream buffer;
    write_matrix_market(M, buffer);
    CHECK(buffer.str().rfind("%%MatrixMarket matrix coordinate integer general\n", 0) == 0);
    SparseIntMatrix back = read_matrix_market(buffer);
    CHECK(back.rows == M.rows);
    CHECK(back.cols == M.cols);
    CHECK(back.entries == M.entries);
}
