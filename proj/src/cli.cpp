#include "slitkit/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "slitkit/classes.hpp"
#include "slitkit/fixtures.hpp"

namespace slitkit {

namespace {

struct CommonArgs {
    int max_h = 4;
    int threads = 1;
    bool json = false;
    bool no_cache = false;

    EnumerateOptions enum_opts() const { return {max_h, threads}; }
    CacheMode cache_mode() const { return no_cache ? CacheMode::off : CacheMode::read_write; }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_json = true) {
    cmd->add_option("--max-h", args.max_h, "h budget (default 4; 5 is the opt-in long run)");
    cmd->add_option("--threads", args.threads, "worker cap");
    if (with_json) cmd->add_flag("--json", args.json, "machine-readable output");
    cmd->add_flag("--no-cache", args.no_cache, "bypass the cell cache");
}

int do_enumerate(const ModuliIndex& index, const CommonArgs& args, const std::string& out_file) {
    CellSet cells = cells_for(index, args.enum_opts(), args.cache_mode());
    if (!out_file.empty()) {
        std::ofstream out(out_file, std::ios::trunc);
        if (!out) throw ArgumentError("cannot write " + out_file);
        out << "slitkit-cells v1 g=" << index.g << " n=" << index.n << " m=" << index.m
            << " h=" << index.h() << "\n";
        for (int d = 0; d <= index.top_degree(); ++d)
            for (int i = 0; i < cells.degree_size(d); ++i)
                out << cells.cell_at(d, i).str() << "\n";
    }
    if (args.json) {
        nlohmann::ordered_json j;
        j["g"] = index.g;
        j["n"] = index.n;
        j["m"] = index.m;
        j["h"] = index.h();
        j["total_cells"] = cells.total_count();
        j["cells_per_degree"] = cells.counts_per_degree();
        nlohmann::ordered_json census = nlohmann::ordered_json::array();
        for (const auto& [key, count] : cells.bidegree_census()) {
            nlohmann::ordered_json entry;
            entry["q"] = key.first;
            entry["p"] = key.second;
            entry["cells"] = count;
            census.push_back(std::move(entry));
        }
        j["bidegrees"] = std::move(census);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "P" << index.str() << ": " << cells.total_count()
                  << " non-degenerate cells, dimension " << cells.max_degree() << "\n";
        std::cout << "cells per degree:";
        for (int d = 0; d <= index.top_degree(); ++d) std::cout << " " << cells.degree_size(d);
        std::cout << "\n";
        for (const auto& [key, count] : cells.bidegree_census()) {
            std::cout << "  (" << key.first << ",[";
            for (std::size_t i = 0; i < key.second.size(); ++i)
                std::cout << (i ? "," : "") << key.second[i];
            std::cout << "]): " << count << "\n";
        }
    }
    return 0;
}

int do_homology(const ModuliIndex& index, Coefficients coeff, const CommonArgs& args,
                const std::string& dump_dir) {
    CellSet cells = cells_for(index, args.enum_opts(), args.cache_mode());
    GradedMatrixComplex complex = assemble_cochain_complex(std::move(cells));
    if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (int d = 0; d < index.top_degree(); ++d) {
            std::ofstream out(dump_dir + "/delta-" + std::to_string(d) + ".mtx");
            write_matrix_market(complex.delta_from(d), out);
        }
    }
    HomologyTable table = homology_groups(complex, coeff, {args.threads});
    if (args.json) {
        std::cout << homology_table_json(table) << "\n";
    } else {
        std::cout << "H_*(M" << index.str() << "; " << coeff.tag() << "):\n";
        for (std::size_t k = 0; k < table.groups.size(); ++k)
            std::cout << "  H_" << k << " = " << table.groups[k].str() << "\n";
    }
    return 0;
}

int do_verify(const CommonArgs& args) {
    VerifyOptions opts;
    opts.max_h = args.max_h;
    opts.threads = args.threads;
    VerifyOutcome outcome = verify_paper_tables(opts, std::cout);
    std::cout << outcome.passed << " passed, " << outcome.failed << " failed, " << outcome.skipped
              << " skipped\n";
    return outcome.ok() ? 0 : 1;
}

Cochain load_cochain(const std::string& spec, const CommonArgs& args) {
    if (spec.rfind("builtin:", 0) == 0) {
        auto rep = builtin_rep(spec.substr(8), args.enum_opts(), args.cache_mode());
        if (!rep)
            throw ArgumentError("unknown builtin representative '" + spec +
                                "' (use builtin:unit, builtin:a, builtin:b, builtin:c, builtin:d)");
        return *rep;
    }
    std::ifstream in(spec);
    if (!in) throw ArgumentError("cannot read cochain file " + spec);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return Cochain::parse_json(buffer.str());
}

int do_product(const std::string& left, const std::string& right, Coefficients coeff,
               const CommonArgs& args, const std::string& out_file) {
    Cochain x = load_cochain(left, args);
    Cochain y = load_cochain(right, args);
    ModuliIndex target(x.index.g + y.index.g, 1, x.index.m + y.index.m);
    CellSet cells = cells_for(target, args.enum_opts(), args.cache_mode());
    GradedMatrixComplex complex = assemble_cochain_complex(std::move(cells));
    Cochain product = stack_product(x, y, *complex.cells);

    nlohmann::ordered_json j = nlohmann::ordered_json::parse(product.json());
    if (coeff.integral) {
        bool cocycle = is_cocycle(complex, product);
        j["is_cocycle"] = cocycle;
        if (cocycle) {
            auto order = class_order(complex, product);
            j["class_order"] = order ? nlohmann::ordered_json(order->get_str())
                                     : nlohmann::ordered_json("infinite");
        }
    } else {
        bool cocycle = is_cocycle_mod2(complex, product);
        j["is_cocycle"] = cocycle;
        if (cocycle) j["nonzero_class"] = !is_coboundary_mod2(complex, product);
    }
    std::string text = j.dump();
    if (!out_file.empty()) {
        std::ofstream out(out_file, std::ios::trunc);
        if (!out) throw ArgumentError("cannot write " + out_file);
        out << product.json() << "\n";
    }
    std::cout << text << "\n";
    return 0;
}

int do_columns(int g, int m, const CommonArgs& args) {
    ModuliIndex index(g, 1, m);
    CellSet cells = cells_for(index, args.enum_opts(), args.cache_mode());
    auto reports = all_column_reports(cells);
    bool all_ok = true;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& rep : reports) {
        all_ok = all_ok && rep.concentrated;
        if (args.json) {
            nlohmann::ordered_json row;
            row["p"] = rep.widths;
            row["top_q"] = rep.top_q;
            nlohmann::ordered_json homs = nlohmann::ordered_json::array();
            for (const auto& g2 : rep.homology) {
                nlohmann::ordered_json h;
                h["betti"] = g2.betti;
                h["torsion"] = g2.torsion;
                homs.push_back(std::move(h));
            }
            row["homology"] = std::move(homs);
            row["concentrated"] = rep.concentrated;
            rows.push_back(std::move(row));
        } else {
            std::cout << "column p=" << rep.widths[0] << ": top q=" << rep.top_q << ",";
            for (int q = 0; q <= rep.top_q; ++q)
                std::cout << " H^" << q << "=" << rep.homology[static_cast<std::size_t>(q)].str();
            std::cout << (rep.concentrated ? "  [concentrated]" : "  [NOT concentrated]") << "\n";
        }
    }
    if (args.json) {
        nlohmann::ordered_json j;
        j["g"] = g;
        j["n"] = 1;
        j["m"] = m;
        j["columns"] = std::move(rows);
        j["all_concentrated"] = all_ok;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << (all_ok ? "all columns concentrated in top degree\n"
                             : "concentration FAILS for some column\n");
    }
    return all_ok ? 0 : 1;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"slitkit: homology of moduli spaces via parallel slit domains"};
    app.require_subcommand(1);

    int g = 0, n = 1, m = 0;
    std::string out_file, dump_dir, coeff_text = "z", left, right, suite = "paper-tables";
    CommonArgs common;

    CLI::App* enumerate = app.add_subcommand("enumerate", "enumerate the non-degenerate cells");
    enumerate->add_option("--g", g, "genus")->required();
    enumerate->add_option("--n", n, "boundary curves");
    enumerate->add_option("--m", m, "punctures");
    enumerate->add_option("--out", out_file, "write the cell list to a file");
    add_common(enumerate, common);

    CLI::App* homology = app.add_subcommand("homology", "compute H_*(M_{g,n}^m)");
    homology->add_option("--g", g, "genus")->required();
    homology->add_option("--n", n, "boundary curves");
    homology->add_option("--m", m, "punctures");
    homology->add_option("--coeff", coeff_text, "coefficients: z, f2, f<p>");
    homology->add_option("--dump-matrices", dump_dir, "write coboundaries in Matrix Market format");
    add_common(homology, common);

    CLI::App* verify = app.add_subcommand("verify", "check the published tables");
    verify->add_option("--suite", suite, "fixture suite (paper-tables)");
    add_common(verify, common, false);

    CLI::App* product = app.add_subcommand("product", "stacking product of two cocycles");
    product->add_option("--left", left, "cochain JSON file or builtin:<name>")->required();
    product->add_option("--right", right, "cochain JSON file or builtin:<name>")->required();
    product->add_option("--coeff", coeff_text, "coefficients: z or f2");
    product->add_option("--out", out_file, "write the product cochain to a file");
    add_common(product, common);

    CLI::App* columns = app.add_subcommand("columns", "per-column homology of the double complex");
    columns->add_option("--g", g, "genus")->required();
    columns->add_option("--m", m, "punctures");
    add_common(columns, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (enumerate->parsed()) return do_enumerate(ModuliIndex(g, n, m), common, out_file);
        if (homology->parsed())
            return do_homology(ModuliIndex(g, n, m), Coefficients::parse(coeff_text), common,
                               dump_dir);
        if (verify->parsed()) {
            if (suite != "paper-tables") throw ArgumentError("unknown suite '" + suite + "'");
            return do_verify(common);
        }
        if (product->parsed())
            return do_product(left, right, Coefficients::parse(coeff_text), common, out_file);
        if (columns->parsed()) return do_columns(g, m, common);
    } catch (const ResourceError& e) {
        std::cerr << "resource budget: " << e.what() << "\n";
        return 3;
    } catch (const UnsupportedOrientationError& e) {
        std::cerr << "unsupported orientation: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace slitkit
