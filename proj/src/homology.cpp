#include "slitkit/homology.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace slitkit {

namespace {

bool prime_long(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void parallel_degrees(int jobs, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, jobs));
    if (threads == 1) {
        for (int i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

Coefficients Coefficients::F(long p) {
    if (!prime_long(p)) throw ArgumentError("coefficient field needs a prime, got " + std::to_string(p));
    return {false, p};
}

Coefficients Coefficients::parse(const std::string& text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "z") return Z();
    if (!t.empty() && t[0] == 'f') {
        try {
            return F(std::stol(t.substr(1)));
        } catch (const std::invalid_argument&) {
        } catch (const std::out_of_range&) {
        }
    }
    throw ArgumentError("unknown coefficient ring '" + text + "' (use z, f2, f<p>)");
}

std::string Coefficients::tag() const { return integral ? "Z" : "F" + std::to_string(p); }

GradedMatrixComplex assemble_cochain_complex(CellSet cells) {
    return assemble_cochain_complex(std::make_shared<const CellSet>(std::move(cells)));
}

GradedMatrixComplex assemble_cochain_complex(std::shared_ptr<const CellSet> cells) {
    GradedMatrixComplex cx;
    cx.index = cells->index();
    cx.cells = std::move(cells);
    const CellSet& cs = *cx.cells;
    const int D = cx.index.top_degree();
    cx.delta.resize(static_cast<std::size_t>(D) + 1);
    for (int d = 0; d <= D; ++d) {
        cx.delta[static_cast<std::size_t>(d)] =
            SparseIntMatrix(d < D ? cs.degree_size(d + 1) : 0, cs.degree_size(d));
    }

    for (int d = 1; d <= D; ++d) {
        SparseIntMatrix& M = cx.delta[static_cast<std::size_t>(d - 1)];
        const int count = cs.degree_size(d);
        for (int row = 0; row < count; ++row) {
            Cell c = cs.cell_at(d, row);
            for (const auto& f : all_faces(c)) {
                if (!is_nondegenerate(f.cell, cx.index)) continue;
                int col = cs.find(f.cell);
                if (col < 0)
                    throw InternalConsistencyError(
                        "non-degenerate face missing from cell set: " + f.cell.str());
                auto it = M.entries.find({row, col});
                if (it == M.entries.end()) {
                    M.entries[{row, col}] = f.sign;
                } else {
                    it->second += f.sign;
                    if (it->second == 0) M.entries.erase(it);
                }
            }
        }
    }

    // delta o delta = 0, verified exactly
    for (int d = 0; d + 1 < D; ++d) {
        const SparseIntMatrix& A = cx.delta[static_cast<std::size_t>(d + 1)];
        const SparseIntMatrix& B = cx.delta[static_cast<std::size_t>(d)];
        std::vector<std::vector<std::pair<int, long long>>> b_rows(static_cast<std::size_t>(B.rows));
        for (const auto& [rc, v] : B.entries)
            b_rows[static_cast<std::size_t>(rc.first)].emplace_back(rc.second, v.get_si());
        std::map<std::pair<int, int>, long long> acc;
        for (const auto& [rc, v] : A.entries)
            for (const auto& [c, w] : b_rows[static_cast<std::size_t>(rc.second)])
                acc[{rc.first, c}] += v.get_si() * w;
        for (const auto& [rc, v] : acc)
            if (v != 0)
                throw InternalConsistencyError(
                    "delta o delta != 0 at degree " + std::to_string(d) + ", pair (" +
                    std::to_string(rc.first) + "," + std::to_string(rc.second) + ")");
    }
    return cx;
}

const HomologyGroup& HomologyTable::at(int k) const {
    static const HomologyGroup zero{};
    if (k < 0 || k >= static_cast<int>(groups.size())) return zero;
    return groups[static_cast<std::size_t>(k)];
}

int HomologyTable::two_torsion_rank(int k) const {
    int count = 0;
    for (long long t : at(k).torsion)
        if (t % 2 == 0) ++count;
    return count;
}

std::string HomologyGroup::str() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (betti > 0) {
        os << "Z";
        if (betti > 1) os << "^" << betti;
        first = false;
    }
    for (long long t : torsion) {
        if (!first) os << " + ";
        os << "Z_" << t;
        first = false;
    }
    return os.str();
}

HomologyTable homology_groups(const GradedMatrixComplex& complex, Coefficients coeff,
                              const HomologyOptions& opts) {
    const ModuliIndex& index = complex.index;
    if ((coeff.integral || coeff.p != 2) && index.m >= 2)
        throw UnsupportedOrientationError(
            "integral and odd-prime homology of " + index.str() +
            " needs the non-constant orientation system (m >= 2); use f2");

    const int D = index.top_degree();
    std::vector<int> ranks(static_cast<std::size_t>(D) + 1, 0);
    std::vector<std::vector<long long>> torsion(static_cast<std::size_t>(D) + 1);

    parallel_degrees(D + 1, opts.threads, [&](int d) {
        const SparseIntMatrix& M = complex.delta[static_cast<std::size_t>(d)];
        if (coeff.integral) {
            SmithForm snf = smith_normal_form(M);
            ranks[static_cast<std::size_t>(d)] = snf.rank();
            for (const Int& t : snf.torsion()) {
                if (!t.fits_slong_p())
                    throw InternalConsistencyError("torsion coefficient exceeds long long");
                // primary decomposition: report prime-power summands, as the tables do
                long long rest = t.get_si();
                for (long long p = 2; p * p <= rest; ++p) {
                    if (rest % p) continue;
                    long long power = 1;
                    while (rest % p == 0) {
                        power *= p;
                        rest /= p;
                    }
                    torsion[static_cast<std::size_t>(d)].push_back(power);
                }
                if (rest > 1) torsion[static_cast<std::size_t>(d)].push_back(rest);
            }
        } else {
            ranks[static_cast<std::size_t>(d)] = rank_mod_p(M, coeff.p);
        }
    });

    HomologyTable table;
    table.index = index;
    table.coeff = coeff;
    table.cells_per_degree = complex.cells->counts_per_degree();
    table.groups.assign(static_cast<std::size_t>(D) + 1, {});
    for (int k = 0; k <= D; ++k) {
        const int d = D - k;  // cochain degree dual to homological degree k
        HomologyGroup g;
        int n_d = complex.cells->degree_size(d);
        int r_d = ranks[static_cast<std::size_t>(d)];
        int r_prev = d > 0 ? ranks[static_cast<std::size_t>(d - 1)] : 0;
        g.betti = n_d - r_d - r_prev;
        if (coeff.integral && d > 0) {
            g.torsion = torsion[static_cast<std::size_t>(d - 1)];
            std::sort(g.torsion.begin(), g.torsion.end());
        }
        if (!coeff.integral) {
            // over a field the "betti" slot carries the dimension
            g.torsion.clear();
        }
        if (g.betti < 0)
            throw InternalConsistencyError("negative betti number computed");
        table.groups[static_cast<std::size_t>(k)] = std::move(g);
    }
    while (table.groups.size() > 1 && table.groups.back().trivial()) table.groups.pop_back();
    return table;
}

std::string homology_table_json(const HomologyTable& table) {
    nlohmann::ordered_json j;
    j["g"] = table.index.g;
    j["n"] = table.index.n;
    j["m"] = table.index.m;
    j["coefficients"] = table.coeff.tag();
    j["h"] = table.index.h();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < table.groups.size(); ++k) {
        nlohmann::ordered_json row;
        row["degree"] = k;
        row["betti"] = table.groups[k].betti;
        row["torsion"] = table.groups[k].torsion;
        rows.push_back(std::move(row));
    }
    j["homology"] = std::move(rows);
    j["cells_per_degree"] = table.cells_per_degree;
    return j.dump();
}

long long euler_characteristic_cells(const CellSet& cells) {
    long long chi = 0;
    const auto& counts = cells.counts_per_degree();
    for (std::size_t d = 0; d < counts.size(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * counts[d];
    return chi;
}

long long euler_characteristic(const HomologyTable& table) {
    // betti numbers of the cochain complex alternate with the same parity as the
    // cell counts; translate back from homological to cochain degrees
    long long chi = 0;
    const int D = table.index.top_degree();
    for (std::size_t k = 0; k < table.groups.size(); ++k) {
        int d = D - static_cast<int>(k);
        chi += (d % 2 == 0 ? 1 : -1) * table.groups[k].betti;
    }
    return chi;
}

bool universal_coefficient_consistent(const HomologyTable& integral, const HomologyTable& mod2) {
    if (!integral.coeff.integral || mod2.coeff.integral || mod2.coeff.p != 2) return false;
    const int K = std::max(integral.groups.size(), mod2.groups.size()) + 1;
    for (int k = 0; k < K; ++k) {
        int expected = integral.at(k).betti + integral.two_torsion_rank(k) +
                       integral.two_torsion_rank(k - 1);
        if (expected != mod2.at(k).betti) return false;
    }
    return true;
}

ColumnReport column_concentration(const CellSet& cells, const std::vector<int>& widths) {
    if (cells.index().n != static_cast<int>(widths.size()))
        throw ArgumentError("column widths must match the layer count");
    ColumnReport report;
    report.widths = widths;
    const int h = cells.index().h();

    // within-column bases: ordinals of the (q, widths) cells in block order
    std::vector<int> sizes(static_cast<std::size_t>(h) + 1, 0);
    auto census = cells.bidegree_census();
    for (int q = 0; q <= h; ++q) {
        auto it = census.find({q, widths});
        if (it != census.end()) {
            sizes[static_cast<std::size_t>(q)] = it->second;
            report.top_q = q;
        }
    }
    if (report.top_q < 0) return report;  // empty column: trivially concentrated
    int width_sum = 0;
    for (int w : widths) width_sum += w;

    // vertical coboundary per q with the bar signs only
    std::vector<SparseIntMatrix> vdelta(static_cast<std::size_t>(report.top_q) + 1);
    auto column_ordinal = [&](const Cell& c) {
        // position within the (q, widths) block = ordinal within its degree minus
        // the offset of earlier blocks of the same degree
        int d = c.degree();
        int global = cells.find(c);
        if (global < 0) return -1;
        for (const auto& blk : cells.blocks()) {
            if (blk.degree != d) continue;
            if (blk.q == c.q() && blk.tab.widths == widths) break;
            global -= blk.count();
        }
        return global;
    };
    for (int q = 0; q <= report.top_q; ++q) {
        int rows = q + 1 <= report.top_q ? sizes[static_cast<std::size_t>(q + 1)] : 0;
        vdelta[static_cast<std::size_t>(q)] = SparseIntMatrix(rows, sizes[static_cast<std::size_t>(q)]);
    }
    for (int q = 1; q <= report.top_q; ++q) {
        if (sizes[static_cast<std::size_t>(q)] == 0) continue;
        SparseIntMatrix& M = vdelta[static_cast<std::size_t>(q - 1)];
        for (int row = 0; row < sizes[static_cast<std::size_t>(q)]; ++row) {
            // materialize the row-th cell of the (q, widths) block
            Cell top = cells.cell_at(q + width_sum, row + [&]() {
                int offset = 0;
                for (const auto& blk : cells.blocks()) {
                    if (blk.degree != q + width_sum) continue;
                    if (blk.q == q && blk.tab.widths == widths) break;
                    offset += blk.count();
                }
                return offset;
            }());
            for (const auto& f : all_faces(top)) {
                if (!f.vertical) continue;
                if (!is_nondegenerate(f.cell, cells.index())) continue;
                int col = column_ordinal(f.cell);
                if (col < 0)
                    throw InternalConsistencyError("column face missing from cell set");
                auto it = M.entries.find({row, col});
                if (it == M.entries.end()) {
                    M.entries[{row, col}] = f.sign;
                } else {
                    it->second += f.sign;
                    if (it->second == 0) M.entries.erase(it);
                }
            }
        }
    }

    std::vector<int> ranks(static_cast<std::size_t>(report.top_q) + 1, 0);
    std::vector<std::vector<long long>> tors(static_cast<std::size_t>(report.top_q) + 1);
    for (int q = 0; q <= report.top_q; ++q) {
        SmithForm snf = smith_normal_form(vdelta[static_cast<std::size_t>(q)]);
        ranks[static_cast<std::size_t>(q)] = snf.rank();
        for (const Int& t : snf.torsion()) tors[static_cast<std::size_t>(q)].push_back(t.get_si());
    }
    report.homology.assign(static_cast<std::size_t>(report.top_q) + 1, {});
    report.concentrated = true;
    for (int q = 0; q <= report.top_q; ++q) {
        HomologyGroup g;
        g.betti = sizes[static_cast<std::size_t>(q)] - ranks[static_cast<std::size_t>(q)] -
                  (q > 0 ? ranks[static_cast<std::size_t>(q - 1)] : 0);
        if (q > 0) g.torsion = tors[static_cast<std::size_t>(q - 1)];
        report.homology[static_cast<std::size_t>(q)] = g;
        if (q < report.top_q && !report.homology[static_cast<std::size_t>(q)].trivial())
            report.concentrated = false;
    }
    return report;
}

std::vector<ColumnReport> all_column_reports(const CellSet& cells) {
    std::vector<std::vector<int>> seen;
    std::vector<ColumnReport> reports;
    for (const auto& blk : cells.blocks()) {
        if (blk.count() == 0) continue;
        if (std::find(seen.begin(), seen.end(), blk.tab.widths) != seen.end()) continue;
        seen.push_back(blk.tab.widths);
    }
    std::sort(seen.begin(), seen.end());
    for (const auto& widths : seen) reports.push_back(column_concentration(cells, widths));
    return reports;
}

} // namespace slitkit
