#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slitkit/cell.hpp"

namespace slitkit {

struct EnumerateOptions {
    int budget = 5;   // maximal admissible h
    int threads = 1;  // worker cap for the per-bidegree fan-out
};

// The non-degenerate cells of P_{g,n}^m, packed per bidegree in canonical order.
class CellSet {
public:
    struct Block {
        int q = 0;
        Tableau tab;
        int degree = 0;       // q + p_1 + ... + p_n
        int stride = 0;       // q * symbol_count bytes per cell (sigma_q ... sigma_1)
        std::vector<std::uint8_t> packed;

        int count() const { return stride == 0 ? (packed.empty() ? 0 : 1) : static_cast<int>(packed.size()) / stride; }
    };

    CellSet() = default;
    CellSet(ModuliIndex index, std::vector<Block> blocks);

    const ModuliIndex& index() const { return index_; }
    const std::vector<Block>& blocks() const { return blocks_; }

    long long total_count() const { return total_; }
    // counts of non-degenerate cells per total degree, indices 0 .. 3h
    const std::vector<long long>& counts_per_degree() const { return degree_counts_; }
    int degree_size(int d) const;
    int max_degree() const;

    // census per bidegree: (q, widths) -> count
    std::map<std::pair<int, std::vector<int>>, int> bidegree_census() const;

    // materialize the ordinal-th cell of the degree-d basis
    Cell cell_at(int d, int ordinal) const;
    // ordinal of the cell within its degree basis, or -1 if absent
    int find(const Cell& cell) const;

    bool operator==(const CellSet& o) const;

private:
    ModuliIndex index_;
    std::vector<Block> blocks_;
    long long total_ = 0;
    std::vector<long long> degree_counts_;
    // per degree: block indices in canonical order plus ordinal offsets
    std::vector<std::vector<std::pair<int, int>>> degree_blocks_;
    std::map<std::pair<int, std::vector<int>>, int> block_lookup_;

    void build_lookup();
    friend CellSet cells_from_list(const ModuliIndex&, const std::vector<Cell>&);
};

// Direct per-bidegree DFS over jump sequences. Throws ResourceError if h exceeds
// the budget.
CellSet enumerate_nondegenerate(const ModuliIndex& index, const EnumerateOptions& opts = {});

// Cross-check oracle: enumerate only the top bidegrees (q = h, sum p = 2h) and close
// under non-degenerate faces.
CellSet enumerate_by_face_closure(const ModuliIndex& index, const EnumerateOptions& opts = {});

// Build a CellSet from explicitly listed cells (used by the oracle and the cache).
CellSet cells_from_list(const ModuliIndex& index, const std::vector<Cell>& cells);

// --- cache ---------------------------------------------------------------

enum class CacheMode { off, read_only, read_write };

std::string cache_directory();                     // SLITKIT_CACHE or ".slitkit-cache"
std::string cache_path(const ModuliIndex& index);  // file inside cache_directory()

std::optional<CellSet> load_cells_cache(const ModuliIndex& index);
void store_cells_cache(const CellSet& cells);

// Cached wrapper around enumerate_nondegenerate.
CellSet cells_for(const ModuliIndex& index, const EnumerateOptions& opts = {},
                  CacheMode mode = CacheMode::read_write);

} // namespace slitkit
