#include "slitkit/fixtures.hpp"

#include <ostream>
#include <sstream>

namespace slitkit {

namespace {

using G = HomologyGroup;

G free(int betti) { return {betti, {}}; }
G grp(int betti, std::vector<long long> torsion) { return {betti, std::move(torsion)}; }

std::vector<Fixture> build_fixtures() {
    std::vector<Fixture> fx;

    // integral tables, m <= 1 (constant orientation system)
    fx.push_back({"tab:g0", ModuliIndex(0, 1, 0), Coefficients::Z(), {free(1)}, ""});
    fx.push_back({"tab:g0", ModuliIndex(0, 1, 1), Coefficients::Z(), {free(1)}, ""});
    fx.push_back({"tab:g1", ModuliIndex(1, 1, 0), Coefficients::Z(), {free(1), free(1)}, ""});
    fx.push_back({"tab:g1", ModuliIndex(1, 1, 1), Coefficients::Z(),
                  {free(1), free(1), grp(0, {2})}, ""});
    fx.push_back({"tab:g2", ModuliIndex(2, 1, 0), Coefficients::Z(),
                  {free(1), grp(0, {2, 5}), grp(0, {2}), grp(1, {2}), grp(0, {2, 3})}, ""});
    fx.push_back({"tab:g2", ModuliIndex(2, 1, 1), Coefficients::Z(),
                  {free(1), grp(0, {2, 5}), grp(1, {2}), grp(2, {2, 2}), grp(0, {2, 2, 3, 3}),
                   free(1), free(1)},
                  ""});

    // mod-2 tables (all m)
    auto dims = [](std::initializer_list<int> ds) {
        std::vector<G> out;
        for (int d : ds) out.push_back(free(d));
        return out;
    };
    fx.push_back({"tab:m2g0", ModuliIndex(0, 1, 0), Coefficients::F(2), dims({1}), ""});
    fx.push_back({"tab:m2g0", ModuliIndex(0, 1, 1), Coefficients::F(2), dims({1}), ""});
    fx.push_back({"tab:m2g0", ModuliIndex(0, 1, 2), Coefficients::F(2), dims({1, 1}), ""});
    fx.push_back({"tab:m2g0", ModuliIndex(0, 1, 3), Coefficients::F(2), dims({1, 1}), ""});
    fx.push_back({"tab:m2g0", ModuliIndex(0, 1, 4), Coefficients::F(2), dims({1, 1, 1, 1}), ""});
    fx.push_back({"tab:m2g0", ModuliIndex(0, 1, 5), Coefficients::F(2), dims({1, 1, 1, 1}), ""});

    fx.push_back({"tab:m2g1", ModuliIndex(1, 1, 0), Coefficients::F(2), dims({1, 1}), ""});
    fx.push_back({"tab:m2g1", ModuliIndex(1, 1, 1), Coefficients::F(2), dims({1, 1, 1, 1}), ""});
    fx.push_back({"tab:m2g1", ModuliIndex(1, 1, 2), Coefficients::F(2), dims({1, 2, 3, 3, 1}), ""});
    fx.push_back({"tab:m2g1", ModuliIndex(1, 1, 3), Coefficients::F(2),
                  dims({1, 2, 3, 5, 4, 1}), ""});
    fx.push_back({"tab:m2g1", ModuliIndex(1, 1, 4), Coefficients::F(2),
                  dims({1, 2, 4, 8, 8, 5, 2}), ""});

    fx.push_back({"tab:m2g2", ModuliIndex(2, 1, 0), Coefficients::F(2),
                  dims({1, 1, 2, 3, 2, 1}), ""});
    fx.push_back({"tab:m2g2", ModuliIndex(2, 1, 1), Coefficients::F(2),
                  dims({1, 1, 2, 5, 4, 3, 1}),
                  "printed degree-2 entry is 2; the universal-coefficient identity applied to "
                  "the g=2 integral table forces 3 (known erratum)"});
    fx.push_back({"tab:m2g2", ModuliIndex(2, 1, 2), Coefficients::F(2),
                  dims({1, 2, 5, 9, 10, 11, 9, 4, 1}), ""});

    return fx;
}

std::string groups_str(const std::vector<HomologyGroup>& groups) {
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < groups.size(); ++k)
        os << (k ? "; " : "") << groups[k].str();
    os << ")";
    return os.str();
}

} // namespace

const std::vector<Fixture>& paper_fixtures() {
    static const std::vector<Fixture> fx = build_fixtures();
    return fx;
}

VerifyOutcome verify_paper_tables(const VerifyOptions& opts, std::ostream& out) {
    VerifyOutcome outcome;
    for (const Fixture& fx : paper_fixtures()) {
        std::ostringstream label;
        label << fx.tag << " " << fx.index.str() << " " << fx.coeff.tag();
        if (fx.index.h() > opts.max_h) {
            out << "SKIP " << label.str() << " (h=" << fx.index.h() << " > max-h=" << opts.max_h
                << ")\n";
            ++outcome.skipped;
            continue;
        }
        EnumerateOptions eopts;
        eopts.budget = opts.max_h;
        eopts.threads = opts.threads;
        CellSet cells = cells_for(fx.index, eopts, opts.cache);
        GradedMatrixComplex complex = assemble_cochain_complex(std::move(cells));
        HomologyOptions hopts;
        hopts.threads = opts.threads;
        HomologyTable table = homology_groups(complex, fx.coeff, hopts);
        if (table.groups == fx.expected) {
            out << "PASS " << label.str() << " " << groups_str(table.groups) << "\n";
            ++outcome.passed;
        } else {
            out << "FAIL " << label.str() << " expected " << groups_str(fx.expected) << ", got "
                << groups_str(table.groups);
            if (!fx.note.empty()) out << " [note: " << fx.note << "]";
            out << "\n";
            ++outcome.failed;
        }
    }
    return outcome;
}

} // namespace slitkit
