#include "slitkit/snf.hpp"

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>

namespace slitkit {

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<long>>& d) {
    SparseIntMatrix M(static_cast<int>(d.size()), d.empty() ? 0 : static_cast<int>(d[0].size()));
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c)
            if (d[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0)
                M.entries[{r, c}] = d[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    return M;
}

void SparseIntMatrix::set(int r, int c, Int v) {
    if (r < 0 || r >= rows || c < 0 || c >= cols)
        throw ArgumentError("matrix index out of range");
    if (v == 0)
        entries.erase({r, c});
    else
        entries[{r, c}] = std::move(v);
}

Int SparseIntMatrix::get(int r, int c) const {
    auto it = entries.find({r, c});
    return it == entries.end() ? Int(0) : it->second;
}

std::vector<Int> SmithForm::torsion() const {
    std::vector<Int> t;
    for (const Int& d : factors)
        if (d > 1) t.push_back(d);
    return t;
}

namespace {

// ---------------------------------------------------------------------------
// Dense Smith normal form with optional transform tracking. Smallest-magnitude
// pivoting plus the usual divisibility fix-up, so factors come out chained.
// ---------------------------------------------------------------------------
struct DenseSnf {
    DenseMat A;
    int rows, cols;
    bool track;
    DenseMat U, V;

    DenseSnf(DenseMat a, int rows_, int cols_, bool with_transforms)
        : A(std::move(a)), rows(rows_), cols(cols_), track(with_transforms) {
        if (track) {
            U.assign(static_cast<std::size_t>(rows), std::vector<Int>(static_cast<std::size_t>(rows), 0));
            V.assign(static_cast<std::size_t>(cols), std::vector<Int>(static_cast<std::size_t>(cols), 0));
            for (int i = 0; i < rows; ++i) U[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
            for (int i = 0; i < cols; ++i) V[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
        }
    }

    Int& at(int r, int c) { return A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }

    void swap_rows(int a, int b) {
        if (a == b) return;
        std::swap(A[static_cast<std::size_t>(a)], A[static_cast<std::size_t>(b)]);
        if (track) std::swap(U[static_cast<std::size_t>(a)], U[static_cast<std::size_t>(b)]);
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int r = 0; r < rows; ++r) std::swap(at(r, a), at(r, b));
        if (track)
            for (int r = 0; r < cols; ++r)
                std::swap(V[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)],
                          V[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)]);
    }
    // row[a] -= q * row[b]
    void row_op(int a, int b, const Int& q) {
        for (int c = 0; c < cols; ++c) at(a, c) -= q * at(b, c);
        if (track)
            for (int c = 0; c < rows; ++c)
                U[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] -=
                    q * U[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
    }
    // col[a] -= q * col[b]
    void col_op(int a, int b, const Int& q) {
        for (int r = 0; r < rows; ++r) at(r, a) -= q * at(r, b);
        if (track)
            for (int r = 0; r < cols; ++r)
                V[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)] -=
                    q * V[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)];
    }
    void negate_row(int a) {
        for (int c = 0; c < cols; ++c) at(a, c) = -at(a, c);
        if (track)
            for (int c = 0; c < rows; ++c)
                U[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)] =
                    -U[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)];
    }

    std::vector<Int> run() {
        int t = 0;
        const int bound = std::min(rows, cols);
        while (t < bound) {
            int pr = -1, pc = -1;
            Int best;
            for (int r = t; r < rows; ++r)
                for (int c = t; c < cols; ++c)
                    if (at(r, c) != 0) {
                        Int mag = abs(at(r, c));
                        if (pr < 0 || mag < best) {
                            best = mag;
                            pr = r;
                            pc = c;
                        }
                    }
            if (pr < 0) break;
            swap_rows(t, pr);
            swap_cols(t, pc);

            bool clean = false;
            while (!clean) {
                clean = true;
                for (int r = t + 1; r < rows; ++r) {
                    if (at(r, t) == 0) continue;
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), at(r, t).get_mpz_t(), at(t, t).get_mpz_t());
                    row_op(r, t, q);
                    if (at(r, t) != 0) {
                        swap_rows(t, r);  // strictly smaller remainder becomes the pivot
                        clean = false;
                    }
                }
                for (int c = t + 1; c < cols; ++c) {
                    if (at(t, c) == 0) continue;
                    Int q;
                    mpz_fdiv_q(q.get_mpz_t(), at(t, c).get_mpz_t(), at(t, t).get_mpz_t());
                    col_op(c, t, q);
                    if (at(t, c) != 0) {
                        swap_cols(t, c);
                        clean = false;
                    }
                }
                if (clean) {
                    // divisibility fix-up: drag in any entry the pivot misses
                    for (int r = t + 1; r < rows && clean; ++r)
                        for (int c = t + 1; c < cols && clean; ++c)
                            if (at(r, c) % at(t, t) != 0) {
                                row_op(t, r, Int(-1));  // adds row r to row t
                                clean = false;
                            }
                }
            }
            if (at(t, t) < 0) negate_row(t);
            ++t;
        }
        std::vector<Int> factors;
        for (int i = 0; i < t; ++i)
            if (at(i, i) != 0) factors.push_back(at(i, i));
        return factors;
    }
};

// ---------------------------------------------------------------------------
// Sparse unimodular reduction: eliminate unit pivots (Markowitz-style choice),
// leaving a small dense core. Row operations can be mirrored onto a tracked
// vector for lattice-membership queries.
// ---------------------------------------------------------------------------
struct SparseReduction {
    int rows, cols;
    std::vector<std::map<int, Int>> row_data;
    std::vector<std::set<int>> col_rows;
    std::vector<bool> row_active, col_active;
    int pivots = 0;
    std::vector<Int>* tracked = nullptr;

    struct Cand {
        long long score;
        int r, c;
        bool operator>(const Cand& o) const {
            if (score != o.score) return score > o.score;
            if (r != o.r) return r > o.r;
            return c > o.c;
        }
    };
    std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> queue;

    explicit SparseReduction(const SparseIntMatrix& M)
        : rows(M.rows),
          cols(M.cols),
          row_data(static_cast<std::size_t>(M.rows)),
          col_rows(static_cast<std::size_t>(M.cols)),
          row_active(static_cast<std::size_t>(M.rows), true),
          col_active(static_cast<std::size_t>(M.cols), true) {
        for (const auto& [rc, v] : M.entries) {
            row_data[static_cast<std::size_t>(rc.first)][rc.second] = v;
            col_rows[static_cast<std::size_t>(rc.second)].insert(rc.first);
        }
        for (int r = 0; r < rows; ++r)
            for (const auto& [c, v] : row_data[static_cast<std::size_t>(r)]) push_if_unit(r, c, v);
    }

    long long score_of(int r, int c) const {
        return static_cast<long long>(row_data[static_cast<std::size_t>(r)].size() - 1) *
               static_cast<long long>(col_rows[static_cast<std::size_t>(c)].size() - 1);
    }

    void push_if_unit(int r, int c, const Int& v) {
        if (v == 1 || v == -1) queue.push({score_of(r, c), r, c});
    }

    void run() {
        while (!queue.empty()) {
            Cand cand = queue.top();
            queue.pop();
            if (!row_active[static_cast<std::size_t>(cand.r)] || !col_active[static_cast<std::size_t>(cand.c)])
                continue;
            auto& row = row_data[static_cast<std::size_t>(cand.r)];
            auto it = row.find(cand.c);
            if (it == row.end() || (it->second != 1 && it->second != -1)) continue;
            long long now = score_of(cand.r, cand.c);
            if (now > cand.score) {
                queue.push({now, cand.r, cand.c});
                continue;
            }
            eliminate(cand.r, cand.c, it->second);
        }
    }

    void eliminate(int pr, int pc, const Int& pval) {
        // rows listed ascending keeps the reduction deterministic
        std::vector<int> targets(col_rows[static_cast<std::size_t>(pc)].begin(),
                                 col_rows[static_cast<std::size_t>(pc)].end());
        const auto& prow = row_data[static_cast<std::size_t>(pr)];
        for (int r : targets) {
            if (r == pr) continue;
            auto& row = row_data[static_cast<std::size_t>(r)];
            Int a = row.at(pc);
            if (pval == -1) a = -a;  // row_r -= a * row_pr with pval normalised to +1
            for (const auto& [c, v] : prow) {
                auto jt = row.find(c);
                if (jt == row.end()) {
                    Int nv = -a * v;
                    if (nv != 0) {
                        row.emplace(c, std::move(nv));
                        col_rows[static_cast<std::size_t>(c)].insert(r);
                        push_if_unit(r, c, row.at(c));
                    }
                } else {
                    jt->second -= a * v;
                    if (jt->second == 0) {
                        row.erase(jt);
                        col_rows[static_cast<std::size_t>(c)].erase(r);
                    } else {
                        push_if_unit(r, c, jt->second);
                    }
                }
            }
            if (tracked) {
                Int& vr = (*tracked)[static_cast<std::size_t>(r)];
                vr -= a * (*tracked)[static_cast<std::size_t>(pr)];
            }
        }
        // implicit column operations clear the pivot row; nothing else changes
        for (const auto& [c, v] : prow)
            col_rows[static_cast<std::size_t>(c)].erase(pr);
        row_data[static_cast<std::size_t>(pr)].clear();
        row_active[static_cast<std::size_t>(pr)] = false;
        col_active[static_cast<std::size_t>(pc)] = false;
        ++pivots;
    }

    // remaining active entries as a dense core plus the active row ids
    std::pair<DenseMat, std::vector<int>> core() const {
        std::vector<int> live_rows, live_cols;
        for (int r = 0; r < rows; ++r)
            if (row_active[static_cast<std::size_t>(r)] && !row_data[static_cast<std::size_t>(r)].empty())
                live_rows.push_back(r);
        std::set<int> used_cols;
        for (int r : live_rows)
            for (const auto& [c, v] : row_data[static_cast<std::size_t>(r)]) used_cols.insert(c);
        live_cols.assign(used_cols.begin(), used_cols.end());
        std::map<int, int> col_pos;
        for (std::size_t i = 0; i < live_cols.size(); ++i) col_pos[live_cols[i]] = static_cast<int>(i);
        DenseMat core(live_rows.size(), std::vector<Int>(live_cols.size(), 0));
        for (std::size_t i = 0; i < live_rows.size(); ++i)
            for (const auto& [c, v] : row_data[static_cast<std::size_t>(live_rows[i])])
                core[i][static_cast<std::size_t>(col_pos[c])] = v;
        return {std::move(core), std::move(live_rows)};
    }
};

DenseMat to_dense(const SparseIntMatrix& M) {
    DenseMat d(static_cast<std::size_t>(M.rows), std::vector<Int>(static_cast<std::size_t>(M.cols), 0));
    for (const auto& [rc, v] : M.entries)
        d[static_cast<std::size_t>(rc.first)][static_cast<std::size_t>(rc.second)] = v;
    return d;
}

bool is_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

} // namespace

SmithForm smith_normal_form(const SparseIntMatrix& M, bool with_transforms) {
    SmithForm out;
    if (with_transforms) {
        DenseSnf snf(to_dense(M), M.rows, M.cols, true);
        out.factors = snf.run();
        out.U = std::move(snf.U);
        out.V = std::move(snf.V);
        return out;
    }
    SparseReduction red(M);
    red.run();
    auto [core, live_rows] = red.core();
    int core_rows = static_cast<int>(core.size());
    int core_cols = core_rows ? static_cast<int>(core[0].size()) : 0;
    DenseSnf snf(std::move(core), core_rows, core_cols, false);
    std::vector<Int> core_factors = snf.run();
    out.factors.assign(static_cast<std::size_t>(red.pivots), Int(1));
    out.factors.insert(out.factors.end(), core_factors.begin(), core_factors.end());
    return out;
}

int rank_mod_p(const SparseIntMatrix& M, long p) {
    if (!is_prime(p))
        throw ArgumentError("rank_mod_p: modulus " + std::to_string(p) + " is not prime");
    if (p == 2) {
        const int words = (M.cols + 63) / 64;
        std::vector<std::vector<std::uint64_t>> pivot_of_col(static_cast<std::size_t>(M.cols));
        std::vector<bool> have_pivot(static_cast<std::size_t>(M.cols), false);
        std::vector<std::uint64_t> row(static_cast<std::size_t>(words));
        int rank = 0;
        auto it = M.entries.begin();
        for (int r = 0; r < M.rows; ++r) {
            std::fill(row.begin(), row.end(), 0);
            bool any = false;
            while (it != M.entries.end() && it->first.first == r) {
                if (mpz_odd_p(it->second.get_mpz_t())) {
                    int c = it->first.second;
                    row[static_cast<std::size_t>(c / 64)] ^= std::uint64_t{1} << (c % 64);
                    any = true;
                }
                ++it;
            }
            if (!any) continue;
            for (int c = 0; c < M.cols; ++c) {
                if (!(row[static_cast<std::size_t>(c / 64)] >> (c % 64) & 1u)) continue;
                if (have_pivot[static_cast<std::size_t>(c)]) {
                    const auto& pv = pivot_of_col[static_cast<std::size_t>(c)];
                    for (int w = c / 64; w < words; ++w) row[static_cast<std::size_t>(w)] ^= pv[static_cast<std::size_t>(w)];
                } else {
                    have_pivot[static_cast<std::size_t>(c)] = true;
                    pivot_of_col[static_cast<std::size_t>(c)] = row;
                    ++rank;
                    break;
                }
            }
        }
        return rank;
    }

    // odd p: dense rows of residues, pivot kept per leading column
    auto mod = [p](const Int& v) {
        long r = static_cast<long>(mpz_fdiv_ui(v.get_mpz_t(), static_cast<unsigned long>(p)));
        return static_cast<std::uint32_t>(r);
    };
    std::vector<std::vector<std::uint32_t>> pivot_rows(static_cast<std::size_t>(M.cols));
    std::vector<std::uint32_t> pivot_inv(static_cast<std::size_t>(M.cols), 0);
    auto inv_mod = [p](long a) {
        long t = 0, nt = 1, r = p, nr = a % p;
        while (nr != 0) {
            long q = r / nr;
            std::swap(t -= q * nt, nt);
            std::swap(r -= q * nr, nr);
        }
        return static_cast<std::uint32_t>(t < 0 ? t + p : t);
    };
    int rank = 0;
    std::vector<std::uint32_t> row(static_cast<std::size_t>(M.cols));
    auto it = M.entries.begin();
    for (int r = 0; r < M.rows; ++r) {
        std::fill(row.begin(), row.end(), 0);
        bool any = false;
        while (it != M.entries.end() && it->first.first == r) {
            std::uint32_t v = mod(it->second);
            if (v) {
                row[static_cast<std::size_t>(it->first.second)] = v;
                any = true;
            }
            ++it;
        }
        if (!any) continue;
        for (int c = 0; c < M.cols; ++c) {
            if (row[static_cast<std::size_t>(c)] == 0) continue;
            if (!pivot_rows[static_cast<std::size_t>(c)].empty()) {
                const auto& pv = pivot_rows[static_cast<std::size_t>(c)];
                std::uint64_t f = static_cast<std::uint64_t>(row[static_cast<std::size_t>(c)]) *
                                  pivot_inv[static_cast<std::size_t>(c)] % static_cast<std::uint64_t>(p);
                for (int j = c; j < M.cols; ++j) {
                    std::uint64_t x = (row[static_cast<std::size_t>(j)] +
                                       static_cast<std::uint64_t>(p) * static_cast<std::uint64_t>(p) -
                                       f * pv[static_cast<std::size_t>(j)]) %
                                      static_cast<std::uint64_t>(p);
                    row[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(x);
                }
            } else {
                pivot_rows[static_cast<std::size_t>(c)] = row;
                pivot_inv[static_cast<std::size_t>(c)] = inv_mod(static_cast<long>(row[static_cast<std::size_t>(c)]));
                ++rank;
                break;
            }
        }
    }
    return rank;
}

namespace {

// order of the tracked vector against the reduced lattice: unit-pivot rows are free,
// the rest is settled by a dense SNF with row transforms.
std::optional<Int> order_against(const SparseIntMatrix& M, const std::vector<Int>& v) {
    if (static_cast<int>(v.size()) != M.rows)
        throw ArgumentError("preimage_order: vector length does not match row count");
    std::vector<Int> w = v;
    SparseReduction red(M);
    red.tracked = &w;
    red.run();
    auto [core, live_rows] = red.core();

    const int core_rows = static_cast<int>(live_rows.size());
    const int core_cols = core_rows ? static_cast<int>(core[0].size()) : 0;
    DenseSnf snf(std::move(core), core_rows, core_cols, true);
    std::vector<Int> factors = snf.run();
    const DenseMat& U = snf.U;

    // z = U * (w restricted to core rows)
    std::vector<Int> z(static_cast<std::size_t>(core_rows), 0);
    for (int i = 0; i < core_rows; ++i)
        for (int j = 0; j < core_rows; ++j)
            z[static_cast<std::size_t>(i)] +=
                U[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                w[static_cast<std::size_t>(live_rows[static_cast<std::size_t>(j)])];

    Int order = 1;
    const int rank = static_cast<int>(factors.size());
    for (int i = 0; i < core_rows; ++i) {
        if (i < rank) {
            Int g = gcd(factors[static_cast<std::size_t>(i)], z[static_cast<std::size_t>(i)]);
            order = lcm(order, Int(factors[static_cast<std::size_t>(i)] / g));
        } else if (z[static_cast<std::size_t>(i)] != 0) {
            return std::nullopt;
        }
    }
    // inactive rows carry a unit pivot and are unconstrained; active rows outside
    // the core see only zero columns, so w must vanish there
    std::vector<bool> in_core(static_cast<std::size_t>(M.rows), false);
    for (int r : live_rows) in_core[static_cast<std::size_t>(r)] = true;
    for (int r = 0; r < M.rows; ++r)
        if (red.row_active[static_cast<std::size_t>(r)] && !in_core[static_cast<std::size_t>(r)] &&
            w[static_cast<std::size_t>(r)] != 0)
            return std::nullopt;
    return order;
}

} // namespace

std::optional<Int> preimage_order(const SparseIntMatrix& M, const std::vector<Int>& v) {
    return order_against(M, v);
}

bool integrally_solvable(const SparseIntMatrix& M, const std::vector<Int>& v) {
    auto t = preimage_order(M, v);
    return t.has_value() && *t == 1;
}

std::vector<std::vector<Int>> kernel_basis(const SparseIntMatrix& M) {
    SmithForm snf = smith_normal_form(M, true);
    const DenseMat& V = *snf.V;
    std::vector<std::vector<Int>> basis;
    for (int c = snf.rank(); c < M.cols; ++c) {
        std::vector<Int> vec(static_cast<std::size_t>(M.cols));
        for (int r = 0; r < M.cols; ++r)
            vec[static_cast<std::size_t>(r)] = V[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        basis.push_back(std::move(vec));
    }
    return basis;
}

std::optional<std::vector<Int>> solve_exact(const SparseIntMatrix& K, const std::vector<Int>& x) {
    if (static_cast<int>(x.size()) != K.rows)
        throw ArgumentError("solve_exact: vector length does not match row count");
    SmithForm snf = smith_normal_form(K, true);
    const DenseMat& U = *snf.U;
    const DenseMat& V = *snf.V;
    std::vector<Int> ux(static_cast<std::size_t>(K.rows), 0);
    for (int i = 0; i < K.rows; ++i)
        for (int j = 0; j < K.rows; ++j)
            ux[static_cast<std::size_t>(i)] +=
                U[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    std::vector<Int> y(static_cast<std::size_t>(K.cols), 0);
    for (int i = 0; i < K.rows; ++i) {
        if (i < snf.rank()) {
            if (ux[static_cast<std::size_t>(i)] % snf.factors[static_cast<std::size_t>(i)] != 0)
                return std::nullopt;
            y[static_cast<std::size_t>(i)] = ux[static_cast<std::size_t>(i)] / snf.factors[static_cast<std::size_t>(i)];
        } else if (ux[static_cast<std::size_t>(i)] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Int> w(static_cast<std::size_t>(K.cols), 0);
    for (int i = 0; i < K.cols; ++i)
        for (int j = 0; j < K.cols; ++j)
            w[static_cast<std::size_t>(i)] +=
                V[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(j)];
    return w;
}

void write_matrix_market(const SparseIntMatrix& M, std::ostream& out) {
    out << "%%MatrixMarket matrix coordinate integer general\n";
    out << M.rows << " " << M.cols << " " << M.nnz() << "\n";
    for (const auto& [rc, v] : M.entries)
        out << rc.first + 1 << " " << rc.second + 1 << " " << v << "\n";
}

SparseIntMatrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw StructuralError("matrix market: missing header");
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '%') break;
    std::istringstream sizes(line);
    int rows = 0, cols = 0;
    long long nnz = 0;
    sizes >> rows >> cols >> nnz;
    SparseIntMatrix M(rows, cols);
    for (long long i = 0; i < nnz; ++i) {
        if (!std::getline(in, line))
            throw StructuralError("matrix market: truncated file");
        std::istringstream entry(line);
        int r = 0, c = 0;
        std::string val;
        entry >> r >> c >> val;
        M.set(r - 1, c - 1, Int(val));
    }
    return M;
}

} // namespace slitkit
