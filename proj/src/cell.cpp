#include "slitkit/cell.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace slitkit {

ModuliIndex::ModuliIndex(int g_, int n_, int m_) : g(g_), n(n_), m(m_) {
    if (g < 0 || n < 1 || m < 0)
        throw StructuralError("moduli index needs g >= 0, n >= 1, m >= 0");
    if (h() < 0)
        throw StructuralError("moduli index with negative h");
}

std::string ModuliIndex::str() const {
    std::ostringstream os;
    os << "(g=" << g << ",n=" << n << ",m=" << m << ")";
    return os.str();
}

Cell Cell::from_top_down(std::vector<TableauPermutation> perms) {
    std::reverse(perms.begin(), perms.end());
    return from_bottom_up(std::move(perms));
}

Cell Cell::from_bottom_up(std::vector<TableauPermutation> perms) {
    if (perms.empty())
        throw StructuralError("cell needs at least sigma_0");
    for (const auto& s : perms)
        if (s.tableau() != perms.front().tableau())
            throw StructuralError("cell: permutations live on different tableaux");
    Cell c;
    c.sigma_ = std::move(perms);
    c.finish();
    return c;
}

void Cell::finish() {
    total_norm_ = 0;
    for (std::size_t k = 1; k < sigma_.size(); ++k)
        total_norm_ += compose(sigma_[k], sigma_[k - 1].inverse()).norm();
    top_cycles_ = sigma_.back().cycle_count();
}

int Cell::degree() const {
    const Tableau& t = tableau();
    return q() + std::accumulate(t.widths.begin(), t.widths.end(), 0);
}

bool Cell::operator==(const Cell& o) const {
    return sigma_ == o.sigma_;
}

bool Cell::operator<(const Cell& o) const {
    if (q() != o.q()) return q() < o.q();
    if (tableau().widths != o.tableau().widths) return tableau().widths < o.tableau().widths;
    for (int k = q(); k >= 0; --k) {
        const auto& a = sigma_[static_cast<std::size_t>(k)].images();
        const auto& b = o.sigma_[static_cast<std::size_t>(k)].images();
        if (a != b) return a < b;
    }
    return false;
}

std::string Cell::str() const {
    std::ostringstream os;
    os << q() << ';';
    const auto& w = tableau().widths;
    for (std::size_t i = 0; i < w.size(); ++i)
        os << (i ? "," : "") << w[i];
    os << ';';
    for (int k = q(); k >= 0; --k) {
        if (k != q()) os << '|';
        os << format_cycles(sigma_[static_cast<std::size_t>(k)]);
    }
    return os.str();
}

Cell Cell::parse(const std::string& line) {
    auto semi1 = line.find(';');
    auto semi2 = line.find(';', semi1 == std::string::npos ? std::string::npos : semi1 + 1);
    if (semi1 == std::string::npos || semi2 == std::string::npos)
        throw StructuralError("cell line: expected 'q;p1[,p2...];perms'");
    int q = std::stoi(line.substr(0, semi1));
    std::vector<int> widths;
    {
        std::istringstream ws(line.substr(semi1 + 1, semi2 - semi1 - 1));
        std::string tok;
        while (std::getline(ws, tok, ','))
            widths.push_back(std::stoi(tok));
    }
    Tableau tab(widths);
    std::vector<TableauPermutation> perms;
    std::istringstream ps(line.substr(semi2 + 1));
    std::string tok;
    while (std::getline(ps, tok, '|'))
        perms.push_back(parse_cycles(tab, tok));
    if (static_cast<int>(perms.size()) != q + 1)
        throw StructuralError("cell line: wrong number of permutations for q=" + std::to_string(q));
    return Cell::from_top_down(std::move(perms));
}

bool is_bar_cell(const Cell& cell, const ModuliIndex& index) {
    return cell.total_norm() <= index.h() && cell.top_cycle_count() <= index.m + index.n;
}

bool is_nondegenerate(const Cell& cell, const ModuliIndex& index) {
    const Tableau& tab = cell.tableau();
    const int q = cell.q();
    const int n = tab.layers();
    if (n != index.n) return false;

    // S1
    if (cell.sigma(0) != TableauPermutation::layer_cycles(tab)) return false;
    // S2
    for (int k = 0; k <= q; ++k)
        for (int i = 1; i <= n; ++i)
            if (cell.sigma(k)(tab.flat(i, tab.widths[static_cast<std::size_t>(i - 1)])) != tab.flat(i, 0))
                return false;
    // S3: no cycle of any sigma_k contains two layer-start symbols (i,0)
    for (int k = 0; k <= q; ++k) {
        for (const auto& cyc : cell.sigma(k).cycles()) {
            int starts = 0;
            for (Symbol s : cyc)
                if (tab.unflat(s).second == 0) ++starts;
            if (starts > 1) return false;
        }
    }
    // S4
    if (cell.top_cycle_count() != index.n + index.m) return false;
    // S5
    if (cell.total_norm() != index.h()) return false;
    // S6
    for (int k = 1; k <= q; ++k)
        if (cell.sigma(k) == cell.sigma(k - 1)) return false;
    for (Symbol s = 0; s < tab.symbol_count; ++s) {
        Symbol succ = tab.successor(s);
        if (succ < 0) continue;
        bool always = true;
        for (int k = 0; k <= q && always; ++k)
            if (cell.sigma(k)(s) != succ) always = false;
        if (always) return false;
    }
    // S7: the sigma_k must tie all layers together
    if (n > 1) {
        std::vector<int> parent(static_cast<std::size_t>(n));
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) {
                parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
                x = parent[static_cast<std::size_t>(x)];
            }
            return x;
        };
        for (int k = 0; k <= q; ++k)
            for (Symbol s = 0; s < tab.symbol_count; ++s) {
                int a = tab.unflat(s).first - 1;
                int b = tab.unflat(cell.sigma(k)(s)).first - 1;
                parent[static_cast<std::size_t>(find(a))] = find(b);
            }
        for (int i = 1; i < n; ++i)
            if (find(i) != find(0)) return false;
    }
    return true;
}

std::vector<SignedFace> all_faces(const Cell& cell) {
    const Tableau& tab = cell.tableau();
    const int q = cell.q();
    std::vector<SignedFace> out;

    for (int k = 0; k <= q && q >= 1; ++k) {
        std::vector<TableauPermutation> perms;
        perms.reserve(static_cast<std::size_t>(q));
        for (int t = 0; t <= q; ++t)
            if (t != k) perms.push_back(cell.sigma(t));
        out.push_back({(k % 2 == 0) ? 1 : -1, Cell::from_bottom_up(std::move(perms)), true, 0, k});
    }

    int width_prefix = 0;
    for (int i = 1; i <= tab.layers(); ++i) {
        int p_i = tab.widths[static_cast<std::size_t>(i - 1)];
        if (p_i >= 1) {
            for (int j = 0; j <= p_i; ++j) {
                std::vector<TableauPermutation> perms;
                perms.reserve(static_cast<std::size_t>(q + 1));
                for (int t = 0; t <= q; ++t)
                    perms.push_back(delete_symbol(cell.sigma(t), i, j));
                int exp = (q + 1) + width_prefix + j;
                out.push_back({(exp % 2 == 0) ? 1 : -1, Cell::from_bottom_up(std::move(perms)),
                               false, i, j});
            }
        }
        width_prefix += p_i;
    }
    return out;
}

std::vector<std::pair<int, Cell>> boundary_faces(const Cell& cell, const ModuliIndex& index) {
    if (!is_bar_cell(cell, index))
        throw StructuralError("boundary_faces: input is not a bar cell for " + index.str());
    std::vector<std::pair<int, Cell>> out;
    for (auto& f : all_faces(cell))
        if (is_bar_cell(f.cell, index))
            out.emplace_back(f.sign, std::move(f.cell));
    return out;
}

} // namespace slitkit
