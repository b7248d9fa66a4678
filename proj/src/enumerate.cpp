#include "slitkit/enumerate.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace slitkit {

namespace {

constexpr int kMaxSymbols = 24;
using Img = std::array<std::uint8_t, kMaxSymbols>;

Img identity_img(int S) {
    Img img{};
    for (int s = 0; s < S; ++s) img[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(s);
    return img;
}

int count_cycles(const Img& img, int S) {
    int count = 0;
    std::uint32_t seen = 0;
    for (int s = 0; s < S; ++s) {
        if (seen >> s & 1u) continue;
        ++count;
        int x = s;
        do {
            seen |= 1u << x;
            x = img[static_cast<std::size_t>(x)];
        } while (x != s);
    }
    return count;
}

// Enumerates permutations tau with support inside `movable`, support containing all
// bits of `must`, and transposition norm within [lo, hi]. Cycles are constructed with
// their minimal element first, so every permutation is produced exactly once.
template <class Fn>
class JumpGenerator {
public:
    JumpGenerator(int S, const std::vector<int>& movable, std::uint32_t must, int lo, int hi, Fn& emit)
        : movable_(movable), must_(must), lo_(lo), hi_(hi), img_(identity_img(S)), emit_(emit) {}

    void run() { rec(0, 0); }

private:
    const std::vector<int>& movable_;
    std::uint32_t must_;
    int lo_, hi_;
    Img img_;
    std::uint32_t used_ = 0;
    Fn& emit_;

    void rec(std::size_t pos, int norm) {
        if (norm + (std::popcount(must_ & ~used_) + 1) / 2 > hi_) return;
        while (pos < movable_.size() && (used_ >> movable_[static_cast<std::size_t>(pos)] & 1u)) ++pos;
        if (pos == movable_.size()) {
            if (norm >= lo_) emit_(img_, norm);
            return;
        }
        int s = movable_[pos];
        if (!(must_ >> s & 1u)) rec(pos + 1, norm);  // s stays fixed
        extend(pos, s, s, norm);                     // s starts a new cycle
    }

    void extend(std::size_t pos, int start, int cur, int norm) {
        if (norm + 1 > hi_) return;
        std::uint8_t saved = img_[static_cast<std::size_t>(cur)];
        for (std::size_t t_idx = pos + 1; t_idx < movable_.size(); ++t_idx) {
            int t = movable_[t_idx];
            if (used_ >> t & 1u) continue;
            used_ |= 1u << t;
            used_ |= 1u << start;  // idempotent after the first extension
            img_[static_cast<std::size_t>(cur)] = static_cast<std::uint8_t>(t);
            // close the cycle here ...
            img_[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(start);
            rec(pos + 1, norm + 1);
            // ... or keep extending it
            extend(pos, start, t, norm + 1);
            img_[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>(t);
            used_ &= ~(1u << t);
        }
        img_[static_cast<std::size_t>(cur)] = saved;
        if (cur == start) used_ &= ~(1u << start);
    }
};

template <class Fn>
void generate_jumps(int S, const std::vector<int>& movable, std::uint32_t must, int lo, int hi,
                    Fn&& emit) {
    JumpGenerator<Fn> gen(S, movable, must, lo, hi, emit);
    gen.run();
}

struct BidegreeJob {
    ModuliIndex index;
    int q = 0;
    Tableau tab;
};

class BidegreeSearch {
public:
    BidegreeSearch(const BidegreeJob& job) : idx_(job.index), tab_(job.tab), q_(job.q) {
        S_ = tab_.symbol_count;
        n_ = tab_.layers();
        h_ = idx_.h();
        target_cycles_ = idx_.n + idx_.m;
        for (int s = 0; s < S_; ++s) {
            auto [i, j] = tab_.unflat(s);
            layer_of_[static_cast<std::size_t>(s)] = i - 1;
            if (j > 0) movable_.push_back(s);
            if (j < tab_.widths[static_cast<std::size_t>(i - 1)]) succ_mask_ |= 1u << s;
            if (j == 0) start_mask_ |= 1u << s;
        }
    }

    std::vector<std::uint8_t> run() {
        if (q_ == 0) {
            // only the exceptional point produces a 0-jump cell
            Cell c = Cell::from_bottom_up({TableauPermutation::layer_cycles(tab_)});
            if (is_nondegenerate(c, idx_)) out_.resize(1);  // marker; stride is 0
            return std::move(out_);
        }
        int pool_max = h_ - q_ + 1;
        pools_.assign(static_cast<std::size_t>(pool_max + 1), {});
        if (q_ > 1)
            generate_jumps(S_, movable_, 0u, 1, pool_max, [&](const Img& img, int norm) {
                pools_[static_cast<std::size_t>(norm)].push_back(img);
            });
        sigma_[0] = identity_img(S_);
        for (int s = 0; s < S_; ++s) {
            auto [i, j] = tab_.unflat(s);
            bool last = j == tab_.widths[static_cast<std::size_t>(i - 1)];
            sigma_[0][static_cast<std::size_t>(s)] =
                static_cast<std::uint8_t>(last ? tab_.flat(i, 0) : s + 1);
        }
        std::uint32_t pending = succ_mask_;  // sigma_0 maps every such s to s+1
        descend(1, 0, pending);
        return std::move(out_);
    }

private:
    ModuliIndex idx_;
    Tableau tab_;
    int q_, S_, n_, h_, target_cycles_;
    std::array<std::uint8_t, kMaxSymbols> layer_of_{};
    std::vector<int> movable_;
    std::uint32_t succ_mask_ = 0;
    std::uint32_t start_mask_ = 0;
    std::vector<std::vector<Img>> pools_;
    std::array<Img, 8> sigma_{};
    std::vector<std::uint8_t> out_;

    bool s3_ok(const Img& img) const {
        if (n_ == 1) return true;
        std::uint32_t seen = 0;
        for (int s = 0; s < S_; ++s) {
            if (seen >> s & 1u) continue;
            int starts = 0;
            int x = s;
            do {
                seen |= 1u << x;
                if (start_mask_ >> x & 1u) ++starts;
                x = img[static_cast<std::size_t>(x)];
            } while (x != s);
            if (starts > 1) return false;
        }
        return true;
    }

    int layer_classes(int upto) const {
        if (n_ == 1) return 1;
        std::array<int, 8> parent{};
        for (int i = 0; i < n_; ++i) parent[static_cast<std::size_t>(i)] = i;
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
            return x;
        };
        for (int k = 1; k <= upto; ++k)
            for (int s = 0; s < S_; ++s) {
                int a = find(layer_of_[static_cast<std::size_t>(s)]);
                int b = find(layer_of_[sigma_[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)]]);
                if (a != b) parent[static_cast<std::size_t>(a)] = b;
            }
        int classes = 0;
        for (int i = 0; i < n_; ++i)
            if (find(i) == i) ++classes;
        return classes;
    }

    void try_level(int k, int used, std::uint32_t pending, const Img& tau, int nu) {
        Img& prev = sigma_[static_cast<std::size_t>(k - 1)];
        Img& cur = sigma_[static_cast<std::size_t>(k)];
        for (int s = 0; s < S_; ++s)
            cur[static_cast<std::size_t>(s)] = tau[prev[static_cast<std::size_t>(s)]];
        if (!s3_ok(cur)) return;
        int rem = h_ - used - nu;
        int cycles = count_cycles(cur, S_);
        if (std::abs(cycles - target_cycles_) > rem) return;
        std::uint32_t new_pending = 0;
        for (std::uint32_t bits = pending; bits;) {
            int s = std::countr_zero(bits);
            bits &= bits - 1;
            if (cur[static_cast<std::size_t>(s)] == s + 1) new_pending |= 1u << s;
        }
        if (std::popcount(new_pending) > 2 * rem) return;
        if (n_ > 1 && layer_classes(k) - 1 > rem) return;
        if (k == q_) {
            if (cycles != target_cycles_ || new_pending != 0) return;
            if (n_ > 1 && layer_classes(k) != 1) return;
            std::size_t base = out_.size();
            out_.resize(base + static_cast<std::size_t>(q_) * static_cast<std::size_t>(S_));
            for (int t = q_; t >= 1; --t) {
                std::memcpy(out_.data() + base, sigma_[static_cast<std::size_t>(t)].data(),
                            static_cast<std::size_t>(S_));
                base += static_cast<std::size_t>(S_);
            }
            return;
        }
        descend(k + 1, used + nu, new_pending);
    }

    void descend(int k, int used, std::uint32_t pending) {
        if (k == q_) {
            // last jump: exact remaining norm, must resolve every pending strip line
            int nu = h_ - used;
            if (nu < 1) return;
            std::uint32_t must = 0;
            for (std::uint32_t bits = pending; bits;) {
                int s = std::countr_zero(bits);
                bits &= bits - 1;
                must |= 1u << (s + 1);  // pending means sigma_{k-1}(s) = s+1 still
            }
            if (std::popcount(must) > 2 * nu) return;
            generate_jumps(S_, movable_, must, nu, nu,
                           [&](const Img& img, int norm) { try_level(k, used, pending, img, norm); });
            return;
        }
        int max_nu = h_ - used - (q_ - k);
        for (int nu = 1; nu <= max_nu && nu < static_cast<int>(pools_.size()); ++nu)
            for (const Img& tau : pools_[static_cast<std::size_t>(nu)])
                try_level(k, used, pending, tau, nu);
    }
};

std::vector<BidegreeJob> bidegree_jobs(const ModuliIndex& index, bool top_only) {
    const int h = index.h();
    const int n = index.n;
    std::vector<BidegreeJob> jobs;
    std::vector<int> widths(static_cast<std::size_t>(n), 0);
    auto emit_for_widths = [&]() {
        int total = std::accumulate(widths.begin(), widths.end(), 0);
        if (top_only && total != 2 * h) return;
        if (h == 0) {
            jobs.push_back({index, 0, Tableau(widths)});
            return;
        }
        for (int q = top_only ? h : 1; q <= h; ++q)
            jobs.push_back({index, q, Tableau(widths)});
    };
    // lexicographically ascending width tuples with sum <= 2h
    auto rec = [&](auto&& self, int layer, int remaining) -> void {
        if (layer == n) {
            emit_for_widths();
            return;
        }
        for (int p = 0; p <= remaining; ++p) {
            widths[static_cast<std::size_t>(layer)] = p;
            self(self, layer + 1, remaining - p);
        }
    };
    rec(rec, 0, 2 * h);
    // order blocks canonically: (q, widths) ascending
    std::stable_sort(jobs.begin(), jobs.end(), [](const BidegreeJob& a, const BidegreeJob& b) {
        if (a.q != b.q) return a.q < b.q;
        return a.tab.widths < b.tab.widths;
    });
    return jobs;
}

void sort_block(CellSet::Block& b) {
    if (b.stride == 0 || b.packed.empty()) return;
    int count = static_cast<int>(b.packed.size()) / b.stride;
    std::vector<int> order(static_cast<std::size_t>(count));
    std::iota(order.begin(), order.end(), 0);
    const std::uint8_t* base = b.packed.data();
    const std::size_t stride = static_cast<std::size_t>(b.stride);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return std::memcmp(base + static_cast<std::size_t>(x) * stride,
                           base + static_cast<std::size_t>(y) * stride, stride) < 0;
    });
    std::vector<std::uint8_t> sorted(b.packed.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        std::memcpy(sorted.data() + i * stride,
                    base + static_cast<std::size_t>(order[i]) * stride, stride);
    b.packed = std::move(sorted);
}

void parallel_for(int jobs, int threads, const std::function<void(int)>& body) {
    threads = std::max(1, std::min(threads, jobs));
    if (threads == 1) {
        for (int i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) body(i);
        });
    for (auto& th : pool) th.join();
}

} // namespace

CellSet::CellSet(ModuliIndex index, std::vector<Block> blocks)
    : index_(index), blocks_(std::move(blocks)) {
    build_lookup();
}

void CellSet::build_lookup() {
    degree_counts_.assign(static_cast<std::size_t>(index_.top_degree() + 1), 0);
    degree_blocks_.assign(degree_counts_.size(), {});
    total_ = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        const Block& blk = blocks_[b];
        int c = blk.count();
        if (c == 0) continue;
        if (blk.degree > index_.top_degree())
            throw InternalConsistencyError("cell degree exceeds 3h");
        auto& per = degree_blocks_[static_cast<std::size_t>(blk.degree)];
        per.emplace_back(static_cast<int>(b),
                         static_cast<int>(degree_counts_[static_cast<std::size_t>(blk.degree)]));
        degree_counts_[static_cast<std::size_t>(blk.degree)] += c;
        total_ += c;
        block_lookup_[{blk.q, blk.tab.widths}] = static_cast<int>(b);
    }
}

int CellSet::degree_size(int d) const {
    if (d < 0 || d >= static_cast<int>(degree_counts_.size())) return 0;
    return static_cast<int>(degree_counts_[static_cast<std::size_t>(d)]);
}

int CellSet::max_degree() const {
    for (int d = static_cast<int>(degree_counts_.size()) - 1; d >= 0; --d)
        if (degree_counts_[static_cast<std::size_t>(d)] > 0) return d;
    return -1;
}

std::map<std::pair<int, std::vector<int>>, int> CellSet::bidegree_census() const {
    std::map<std::pair<int, std::vector<int>>, int> census;
    for (const auto& b : blocks_)
        if (b.count() > 0) census[{b.q, b.tab.widths}] = b.count();
    return census;
}

Cell CellSet::cell_at(int d, int ordinal) const {
    for (auto [bi, offset] : degree_blocks_.at(static_cast<std::size_t>(d))) {
        const Block& blk = blocks_[static_cast<std::size_t>(bi)];
        if (ordinal < offset || ordinal >= offset + blk.count()) continue;
        int local = ordinal - offset;
        std::vector<TableauPermutation> perms;
        perms.reserve(static_cast<std::size_t>(blk.q + 1));
        int S = blk.tab.symbol_count;
        const std::uint8_t* base = blk.packed.data() + static_cast<std::size_t>(local) * static_cast<std::size_t>(blk.stride);
        for (int k = 0; k < blk.q; ++k) {
            std::vector<std::uint8_t> img(base + static_cast<std::size_t>(k) * static_cast<std::size_t>(S),
                                          base + static_cast<std::size_t>(k + 1) * static_cast<std::size_t>(S));
            perms.push_back(TableauPermutation(blk.tab, std::move(img)));
        }
        perms.push_back(TableauPermutation::layer_cycles(blk.tab));
        return Cell::from_top_down(std::move(perms));
    }
    throw StructuralError("cell_at: ordinal out of range");
}

int CellSet::find(const Cell& cell) const {
    auto it = block_lookup_.find({cell.q(), cell.tableau().widths});
    if (it == block_lookup_.end()) return -1;
    const Block& blk = blocks_[static_cast<std::size_t>(it->second)];
    if (blk.stride == 0) return cell.q() == 0 ? 0 : -1;
    const int S = blk.tab.symbol_count;
    std::vector<std::uint8_t> key(static_cast<std::size_t>(blk.stride));
    for (int k = cell.q(), at = 0; k >= 1; --k, ++at)
        std::memcpy(key.data() + static_cast<std::size_t>(at) * static_cast<std::size_t>(S),
                    cell.sigma(k).images().data(), static_cast<std::size_t>(S));
    int lo = 0, hi = blk.count();
    const std::uint8_t* base = blk.packed.data();
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        int cmp = std::memcmp(base + static_cast<std::size_t>(mid) * static_cast<std::size_t>(blk.stride),
                              key.data(), static_cast<std::size_t>(blk.stride));
        if (cmp < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo >= blk.count() ||
        std::memcmp(base + static_cast<std::size_t>(lo) * static_cast<std::size_t>(blk.stride), key.data(),
                    static_cast<std::size_t>(blk.stride)) != 0)
        return -1;
    for (auto [bi, offset] : degree_blocks_.at(static_cast<std::size_t>(blk.degree)))
        if (bi == it->second) return offset + lo;
    return -1;
}

bool CellSet::operator==(const CellSet& o) const {
    if (!(index_ == o.index_) || blocks_.size() != o.blocks_.size()) return false;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Block& a = blocks_[i];
        const Block& b = o.blocks_[i];
        if (a.q != b.q || a.tab != b.tab || a.packed != b.packed) return false;
    }
    return true;
}

CellSet enumerate_nondegenerate(const ModuliIndex& index, const EnumerateOptions& opts) {
    if (index.h() > opts.budget)
        throw ResourceError("enumeration budget exceeded: h=" + std::to_string(index.h()) +
                                " > budget=" + std::to_string(opts.budget),
                            index.h());
    auto jobs = bidegree_jobs(index, false);
    std::vector<CellSet::Block> blocks(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), opts.threads, [&](int i) {
        const BidegreeJob& job = jobs[static_cast<std::size_t>(i)];
        BidegreeSearch search(job);
        CellSet::Block blk;
        blk.q = job.q;
        blk.tab = job.tab;
        blk.degree = job.q + std::accumulate(job.tab.widths.begin(), job.tab.widths.end(), 0);
        blk.stride = job.q * job.tab.symbol_count;
        blk.packed = search.run();
        sort_block(blk);
        blocks[static_cast<std::size_t>(i)] = std::move(blk);
    });
    std::vector<CellSet::Block> kept;
    for (auto& b : blocks)
        if (b.count() > 0) kept.push_back(std::move(b));
    return CellSet(index, std::move(kept));
}

CellSet cells_from_list(const ModuliIndex& index, const std::vector<Cell>& cells) {
    std::map<std::pair<int, std::vector<int>>, std::vector<const Cell*>> grouped;
    for (const Cell& c : cells) grouped[{c.q(), c.tableau().widths}].push_back(&c);
    std::vector<CellSet::Block> blocks;
    for (auto& [key, group] : grouped) {
        std::sort(group.begin(), group.end(), [](const Cell* a, const Cell* b) { return *a < *b; });
        CellSet::Block blk;
        blk.q = key.first;
        blk.tab = Tableau(key.second);
        blk.degree = blk.q + std::accumulate(key.second.begin(), key.second.end(), 0);
        blk.stride = blk.q * blk.tab.symbol_count;
        if (blk.stride == 0) {
            blk.packed.resize(group.size());  // marker bytes for q = 0 cells
        } else {
            const int S = blk.tab.symbol_count;
            blk.packed.reserve(group.size() * static_cast<std::size_t>(blk.stride));
            for (const Cell* c : group)
                for (int k = c->q(); k >= 1; --k)
                    blk.packed.insert(blk.packed.end(), c->sigma(k).images().begin(),
                                      c->sigma(k).images().end());
            (void)S;
        }
        blocks.push_back(std::move(blk));
    }
    return CellSet(index, std::move(blocks));
}

CellSet enumerate_by_face_closure(const ModuliIndex& index, const EnumerateOptions& opts) {
    if (index.h() > opts.budget)
        throw ResourceError("enumeration budget exceeded: h=" + std::to_string(index.h()) +
                                " > budget=" + std::to_string(opts.budget),
                            index.h());
    auto jobs = bidegree_jobs(index, true);
    std::set<Cell> found;
    std::vector<Cell> frontier;
    for (const auto& job : jobs) {
        BidegreeSearch search(job);
        CellSet::Block blk;
        blk.q = job.q;
        blk.tab = job.tab;
        blk.degree = job.q + std::accumulate(job.tab.widths.begin(), job.tab.widths.end(), 0);
        blk.stride = job.q * job.tab.symbol_count;
        blk.packed = search.run();
        CellSet tmp(index, {blk});
        for (int i = 0; i < blk.count(); ++i) {
            Cell c = tmp.cell_at(blk.degree, i);
            if (found.insert(c).second) frontier.push_back(std::move(c));
        }
    }
    while (!frontier.empty()) {
        Cell c = std::move(frontier.back());
        frontier.pop_back();
        for (auto& f : all_faces(c)) {
            if (!is_nondegenerate(f.cell, index)) continue;
            if (found.insert(f.cell).second) frontier.push_back(std::move(f.cell));
        }
    }
    return cells_from_list(index, std::vector<Cell>(found.begin(), found.end()));
}

// --- cache -----------------------------------------------------------------

std::string cache_directory() {
    if (const char* env = std::getenv("SLITKIT_CACHE"); env && *env) return env;
    return ".slitkit-cache";
}

std::string cache_path(const ModuliIndex& index) {
    std::ostringstream os;
    os << cache_directory() << "/g" << index.g << "-n" << index.n << "-m" << index.m << ".cells";
    return os.str();
}

std::optional<CellSet> load_cells_cache(const ModuliIndex& index) {
    std::ifstream in(cache_path(index));
    if (!in) return std::nullopt;
    std::string header;
    if (!std::getline(in, header)) return std::nullopt;
    std::ostringstream expect;
    expect << "slitkit-cells v1 g=" << index.g << " n=" << index.n << " m=" << index.m
           << " h=" << index.h();
    if (header != expect.str())
        throw StructuralError("cell cache header mismatch in " + cache_path(index));
    std::vector<Cell> cells;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Cell c = Cell::parse(line);
        if (!is_nondegenerate(c, index))
            throw StructuralError("cell cache contains a degenerate cell: " + line);
        cells.push_back(std::move(c));
    }
    return cells_from_list(index, cells);
}

void store_cells_cache(const CellSet& cells) {
    namespace fs = std::filesystem;
    fs::create_directories(cache_directory());
    const ModuliIndex& index = cells.index();
    std::ofstream out(cache_path(index), std::ios::trunc);
    if (!out)
        throw StructuralError("cannot write cell cache " + cache_path(index));
    out << "slitkit-cells v1 g=" << index.g << " n=" << index.n << " m=" << index.m
        << " h=" << index.h() << "\n";
    for (int d = 0; d <= index.top_degree(); ++d)
        for (int i = 0; i < cells.degree_size(d); ++i)
            out << cells.cell_at(d, i).str() << "\n";
}

CellSet cells_for(const ModuliIndex& index, const EnumerateOptions& opts, CacheMode mode) {
    if (mode != CacheMode::off)
        if (auto cached = load_cells_cache(index)) return std::move(*cached);
    CellSet cells = enumerate_nondegenerate(index, opts);
    if (mode == CacheMode::read_write) store_cells_cache(cells);
    return cells;
}

} // namespace slitkit
