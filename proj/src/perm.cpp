#include "slitkit/perm.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace slitkit {

Tableau::Tableau(std::vector<int> p) : widths(std::move(p)) {
    if (widths.empty())
        throw StructuralError("tableau needs at least one layer");
    offsets.resize(widths.size());
    int acc = 0;
    for (std::size_t i = 0; i < widths.size(); ++i) {
        if (widths[i] < 0)
            throw StructuralError("tableau widths must be non-negative");
        offsets[i] = acc;
        acc += widths[i] + 1;
    }
    symbol_count = acc;
}

Symbol Tableau::flat(int layer, int j) const {
    if (layer < 1 || layer > layers() || j < 0 || j > widths[static_cast<std::size_t>(layer - 1)])
        throw StructuralError("symbol (" + std::to_string(layer) + "," + std::to_string(j) +
                              ") not in tableau " + str());
    return offsets[static_cast<std::size_t>(layer - 1)] + j;
}

std::pair<int, int> Tableau::unflat(Symbol s) const {
    if (s < 0 || s >= symbol_count)
        throw StructuralError("flat symbol out of range");
    int layer = static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), s) - offsets.begin());
    return {layer, s - offsets[static_cast<std::size_t>(layer - 1)]};
}

Symbol Tableau::successor(Symbol s) const {
    auto [i, j] = unflat(s);
    return j == widths[static_cast<std::size_t>(i - 1)] ? -1 : s + 1;
}

std::string Tableau::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < widths.size(); ++i)
        os << (i ? "," : "") << widths[i];
    os << ']';
    return os.str();
}

TableauPermutation::TableauPermutation(Tableau tab, std::vector<std::uint8_t> images)
    : tab_(std::move(tab)), img_(std::move(images)) {
    if (static_cast<int>(img_.size()) != tab_.symbol_count)
        throw StructuralError("image array size does not match tableau");
    if (img_.size() > 64)
        throw StructuralError("tableaux above 64 symbols are not supported");
    std::vector<bool> seen(img_.size(), false);
    for (auto v : img_) {
        if (v >= img_.size() || seen[v])
            throw StructuralError("image array is not a bijection");
        seen[v] = true;
    }
}

TableauPermutation TableauPermutation::identity(const Tableau& tab) {
    std::vector<std::uint8_t> img(static_cast<std::size_t>(tab.symbol_count));
    std::iota(img.begin(), img.end(), std::uint8_t{0});
    return TableauPermutation(tab, std::move(img));
}

TableauPermutation TableauPermutation::layer_cycles(const Tableau& tab) {
    std::vector<std::uint8_t> img(static_cast<std::size_t>(tab.symbol_count));
    for (int i = 1; i <= tab.layers(); ++i) {
        int off = tab.offsets[static_cast<std::size_t>(i - 1)];
        int p = tab.widths[static_cast<std::size_t>(i - 1)];
        for (int j = 0; j < p; ++j)
            img[static_cast<std::size_t>(off + j)] = static_cast<std::uint8_t>(off + j + 1);
        img[static_cast<std::size_t>(off + p)] = static_cast<std::uint8_t>(off);
    }
    return TableauPermutation(tab, std::move(img));
}

TableauPermutation TableauPermutation::inverse() const {
    std::vector<std::uint8_t> inv(img_.size());
    for (std::size_t s = 0; s < img_.size(); ++s)
        inv[img_[s]] = static_cast<std::uint8_t>(s);
    return TableauPermutation(tab_, std::move(inv));
}

bool TableauPermutation::is_identity() const {
    for (std::size_t s = 0; s < img_.size(); ++s)
        if (img_[s] != s) return false;
    return true;
}

int TableauPermutation::cycle_count() const {
    int count = 0;
    std::uint64_t seen = 0;  // image arrays are capped at 64 symbols well above any budget
    for (std::size_t s = 0; s < img_.size(); ++s) {
        if (seen & (std::uint64_t{1} << s)) continue;
        ++count;
        Symbol x = static_cast<Symbol>(s);
        do {
            seen |= std::uint64_t{1} << x;
            x = img_[static_cast<std::size_t>(x)];
        } while (x != static_cast<Symbol>(s));
    }
    return count;
}

int TableauPermutation::norm() const { return size() - cycle_count(); }

std::vector<std::vector<Symbol>> TableauPermutation::cycles() const {
    std::vector<std::vector<Symbol>> out;
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t s = 0; s < img_.size(); ++s) {
        if (seen[s]) continue;
        std::vector<Symbol> cyc;
        Symbol x = static_cast<Symbol>(s);
        do {
            seen[static_cast<std::size_t>(x)] = true;
            cyc.push_back(x);
            x = img_[static_cast<std::size_t>(x)];
        } while (x != static_cast<Symbol>(s));
        out.push_back(std::move(cyc));
    }
    // scanning from the smallest unseen symbol already yields min-first, min-sorted cycles
    return out;
}

TableauPermutation compose(const TableauPermutation& sigma, const TableauPermutation& tau) {
    if (sigma.tableau() != tau.tableau())
        throw StructuralError("compose: permutations live on different tableaux");
    std::vector<std::uint8_t> img(static_cast<std::size_t>(sigma.size()));
    for (int s = 0; s < sigma.size(); ++s)
        img[static_cast<std::size_t>(s)] = static_cast<std::uint8_t>(sigma(tau(s)));
    return TableauPermutation(sigma.tableau(), std::move(img));
}

int norm(const TableauPermutation& sigma) { return sigma.norm(); }
int cycle_count(const TableauPermutation& sigma) { return sigma.cycle_count(); }

TableauPermutation delete_symbol(const TableauPermutation& sigma, int layer, int j) {
    const Tableau& tab = sigma.tableau();
    if (layer < 1 || layer > tab.layers())
        throw StructuralError("delete_symbol: layer out of range");
    if (tab.widths[static_cast<std::size_t>(layer - 1)] < 1)
        throw StructuralError("delete_symbol: layer has width 0");
    Symbol victim = tab.flat(layer, j);

    std::vector<int> widths = tab.widths;
    --widths[static_cast<std::size_t>(layer - 1)];
    Tableau target(std::move(widths));

    auto renum = [victim](Symbol s) { return s > victim ? s - 1 : s; };
    std::vector<std::uint8_t> img(static_cast<std::size_t>(target.symbol_count));
    for (int s = 0; s < tab.symbol_count; ++s) {
        if (s == victim) continue;
        Symbol image = sigma(s);
        if (image == victim) image = sigma(image);  // skip the victim inside its cycle
        img[static_cast<std::size_t>(renum(s))] = static_cast<std::uint8_t>(renum(image));
    }
    return TableauPermutation(std::move(target), std::move(img));
}

std::string format_cycles(const TableauPermutation& sigma) {
    const Tableau& tab = sigma.tableau();
    std::ostringstream os;
    for (const auto& cyc : sigma.cycles()) {
        os << '(';
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            if (k) os << ',';
            if (tab.layers() == 1) {
                os << cyc[k];
            } else {
                auto [i, j] = tab.unflat(cyc[k]);
                os << i << '.' << j;
            }
        }
        os << ')';
    }
    return os.str();
}

namespace {

Symbol parse_symbol(const Tableau& tab, std::string_view tok) {
    auto to_int = [&](std::string_view s) {
        int value = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw StructuralError("cycle notation: bad symbol '" + std::string(tok) + "'");
        return value;
    };
    if (tab.layers() == 1) {
        int j = to_int(tok);
        return tab.flat(1, j);
    }
    auto dot = tok.find('.');
    if (dot == std::string_view::npos)
        throw StructuralError("cycle notation: expected i.j symbol, got '" + std::string(tok) + "'");
    return tab.flat(to_int(tok.substr(0, dot)), to_int(tok.substr(dot + 1)));
}

} // namespace

TableauPermutation parse_cycles(const Tableau& tab, std::string_view text) {
    std::vector<std::uint8_t> img(static_cast<std::size_t>(tab.symbol_count), 0xff);
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text[pos] != '(')
            throw StructuralError("cycle notation: expected '('");
        auto close = text.find(')', pos);
        if (close == std::string_view::npos)
            throw StructuralError("cycle notation: missing ')'");
        std::string_view body = text.substr(pos + 1, close - pos - 1);
        std::vector<Symbol> cyc;
        std::size_t at = 0;
        while (at <= body.size() && !body.empty()) {
            auto comma = body.find(',', at);
            std::string_view tok =
                comma == std::string_view::npos ? body.substr(at) : body.substr(at, comma - at);
            cyc.push_back(parse_symbol(tab, tok));
            if (comma == std::string_view::npos) break;
            at = comma + 1;
        }
        if (cyc.empty())
            throw StructuralError("cycle notation: empty cycle");
        for (std::size_t k = 0; k < cyc.size(); ++k) {
            Symbol from = cyc[k];
            Symbol to = cyc[(k + 1) % cyc.size()];
            if (img[static_cast<std::size_t>(from)] != 0xff)
                throw StructuralError("cycle notation: symbol repeated");
            img[static_cast<std::size_t>(from)] = static_cast<std::uint8_t>(to);
        }
        pos = close + 1;
    }
    for (auto v : img)
        if (v == 0xff)
            throw StructuralError("cycle notation: not all symbols covered (fixed points must be printed)");
    return TableauPermutation(tab, std::move(img));
}

} // namespace slitkit
