// zpa: automata as 1-Lipschitz maps on the p-adic integers.
// Evaluation, machine simulation and export, transitivity reports,
// unit-square plots and occupancy measurements.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zpa/automaton.hpp"
#include "zpa/config.hpp"
#include "zpa/errors.hpp"
#include "zpa/numutil.hpp"
#include "zpa/padic_int.hpp"
#include "zpa/parser.hpp"
#include "zpa/plot.hpp"
#include "zpa/reports.hpp"
#include "zpa/transitivity.hpp"

namespace {

using nlohmann::json;

using zpa::RunConfig;

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw zpa::input_error("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    cfg = RunConfig::from_text(buffer.str());
}

std::map<std::string, mpz_class> parse_consts(const std::vector<std::string>& defs) {
    std::map<std::string, mpz_class> table;
    for (const auto& def : defs) {
        std::size_t eq = def.find('=');
        if (eq == std::string::npos)
            throw zpa::input_error("--const expects name=value, got " + def);
        try {
            table[def.substr(0, eq)] = mpz_class(def.substr(eq + 1));
        } catch (const std::invalid_argument&) {
            throw zpa::input_error("--const value is not an integer in " + def);
        }
    }
    return table;
}

zpa::Expr expr_of(const RunConfig& cfg) {
    if (cfg.expr.empty()) throw zpa::input_error("an --expr is required here");
    return zpa::parse_expr(cfg.expr, cfg.p, parse_consts(cfg.consts));
}

std::shared_ptr<const zpa::FiniteAutomaton> finite_machine_of(const RunConfig& cfg) {
    std::ifstream in(cfg.machine_file);
    if (!in.good()) throw zpa::input_error("cannot open machine file " + cfg.machine_file);
    json j;
    try {
        in >> j;
    } catch (const json::exception& err) {
        throw zpa::input_error(std::string("malformed machine JSON: ") + err.what());
    }
    return std::make_shared<zpa::FiniteAutomaton>(zpa::FiniteAutomaton::from_json(j));
}

std::shared_ptr<const zpa::Automaton> machine_of(const RunConfig& cfg) {
    if (!cfg.machine_file.empty()) return finite_machine_of(cfg);
    return std::make_shared<zpa::FunctionAutomaton>(expr_of(cfg));
}

void write_text(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good()) throw zpa::input_error("cannot write " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void emit(const RunConfig& cfg, const json& report, const std::string& fallback) {
    std::string text = cfg.as_json ? report.dump(2) + "\n" : fallback;
    if (!cfg.out.empty()) write_text(cfg.out, text);
    else std::cout << text;
}

std::vector<unsigned> parse_k_list(const std::string& spec) {
    std::vector<unsigned> ks;
    std::istringstream in(spec);
    for (std::string item; std::getline(in, item, ',');) {
        if (item.empty()) continue;
        try {
            ks.push_back(static_cast<unsigned>(std::stoul(item)));
        } catch (const std::exception&) {
            throw zpa::input_error("--ks needs a comma-separated list of levels");
        }
    }
    if (ks.empty()) throw zpa::input_error("--ks needs a comma-separated list of levels");
    return ks;
}

mpz_class parse_residue(const RunConfig& cfg) {
    // decimal integer, or a p-adic literal "p:k:digits"
    if (cfg.x.find(':') != std::string::npos) {
        zpa::PadicInt z = zpa::PadicInt::parse(cfg.x);
        if (z.prime() != cfg.p) throw zpa::input_error("literal prime disagrees with --p");
        return z.reduce(std::min(z.precision(), cfg.k));
    }
    try {
        return zpa::mod_nonneg(mpz_class(cfg.x), zpa::pow_int(cfg.p, cfg.k));
    } catch (const std::invalid_argument&) {
        throw zpa::input_error("--x is neither a decimal integer nor a p:k:digits literal");
    }
}

int cmd_eval(const RunConfig& cfg) {
    mpz_class value = zpa::eval_mod(expr_of(cfg), parse_residue(cfg), cfg.k);
    json report{{"p", cfg.p}, {"k", cfg.k}, {"x", cfg.x}, {"value", value.get_str()}};
    emit(cfg, report, value.get_str() + "\n");
    return 0;
}

int cmd_automaton_run(const RunConfig& cfg) {
    auto machine = machine_of(cfg);
    zpa::Word input = zpa::Word::parse(cfg.word, machine->prime());
    zpa::Word output = machine->run(input);
    json report{{"word", input.to_string()}, {"output", output.to_string()}};
    emit(cfg, report, output.to_string() + "\n");
    return 0;
}

int cmd_automaton_dot(const RunConfig& cfg) {
    std::string dot;
    if (!cfg.machine_file.empty()) {
        dot = export_dot(*finite_machine_of(cfg));
    } else {
        zpa::FunctionAutomaton machine(expr_of(cfg));
        dot = export_dot(machine, cfg.depth);
    }
    if (!cfg.out.empty()) write_text(cfg.out, dot);
    else std::cout << dot;
    return 0;
}

int cmd_transit_levels(const RunConfig& cfg) {
    zpa::TransitivityReport report = zpa::word_transitive_up_to(expr_of(cfg), cfg.max_n);
    std::ostringstream lines;
    for (const auto& lv : report.levels) {
        lines << "n=" << lv.n << ": ";
        switch (lv.status) {
        case zpa::TransitivityReport::Status::Transitive: lines << "Transitive"; break;
        case zpa::TransitivityReport::Status::NotTransitive:
            lines << "NotTransitive (cycles " << lv.cycles << ")";
            break;
        case zpa::TransitivityReport::Status::Skipped: lines << "Skipped"; break;
        }
        lines << "\n";
    }
    emit(cfg, zpa::to_json(report), lines.str());
    return 0;
}

int cmd_transit_complete(const RunConfig& cfg) {
    zpa::CompleteCheck check;
    if (!cfg.machine_file.empty())
        check = zpa::check_complete_transitive(*finite_machine_of(cfg), cfg.n);
    else
        check = zpa::check_complete_transitive(expr_of(cfg), cfg.n, cfg.lmax, cfg.jobs);
    std::ostringstream lines;
    switch (check.verdict) {
    case zpa::CompleteCheck::Verdict::WitnessedAllPairs:
        lines << "WitnessedAllPairs (" << check.table.size() << " pairs)\n";
        break;
    case zpa::CompleteCheck::Verdict::Refuted:
        lines << "Refuted: pair " << check.missing[0].first.to_string() << " -> "
              << check.missing[0].second.to_string() << " is unreachable\n";
        break;
    case zpa::CompleteCheck::Verdict::Inconclusive:
        lines << "Inconclusive: " << check.missing.size()
              << " pair(s) unwitnessed up to prefix length " << cfg.lmax << "\n";
        break;
    }
    emit(cfg, zpa::to_json(check), lines.str());
    return 0;
}

int cmd_transit_absolute(const RunConfig& cfg) {
    zpa::AbsoluteCheck check =
        zpa::check_absolute_transitive(expr_of(cfg), cfg.n, cfg.xlen, cfg.lmax, cfg.jobs);
    std::ostringstream lines;
    if (check.verdict == zpa::AbsoluteCheck::Verdict::Witnessed)
        lines << "Witnessed (" << check.table.size() << " start/pair combinations)\n";
    else
        lines << "Inconclusive: " << check.missing.size() << " combination(s) unwitnessed\n";
    emit(cfg, zpa::to_json(check), lines.str());
    return 0;
}

int cmd_transit_certify(const RunConfig& cfg) {
    zpa::SufficiencyCertificate cert =
        zpa::sufficient_condition_certificate(expr_of(cfg), cfg.bound);
    std::ostringstream lines;
    switch (cert.cls) {
    case zpa::SufficiencyCertificate::Class::PolyDegreeGe2:
        lines << "Certified: polynomial of degree >= 2";
        break;
    case zpa::SufficiencyCertificate::Class::CxPlusCx:
        lines << "Certified: c*x + c^x";
        break;
    case zpa::SufficiencyCertificate::Class::PolyPlusOrC:
        lines << "Certified: a + b*x + (x^2 | c)";
        break;
    case zpa::SufficiencyCertificate::Class::Unsupported:
        lines << "No certificate";
        break;
    }
    lines << "\n";
    for (const auto& line : cert.checked) lines << "  - " << line << "\n";
    emit(cfg, zpa::to_json(cert), lines.str());
    return 0;
}

int cmd_plot(const RunConfig& cfg) {
    zpa::PlotGrid grid = zpa::occupancy(expr_of(cfg), cfg.k, cfg.m, cfg.jobs);
    if (!cfg.out.empty()) write_text(cfg.out, zpa::render_pgm(grid));
    if (!cfg.csv.empty()) write_text(cfg.csv, zpa::render_csv(grid));
    json stats = zpa::grid_stats(grid);
    if (cfg.as_json) {
        std::cout << stats.dump(2) << "\n";
    } else {
        std::cout << "k=" << grid.k << " m=" << grid.m << " occupied=" << grid.occupied
                  << "/" << grid.side * grid.side << " alpha_hat=" << grid.alpha_hat() << "\n";
    }
    return 0;
}

int cmd_measure(const RunConfig& cfg) {
    zpa::ClassifyPolicy policy;
    policy.ks = parse_k_list(cfg.ks);
    policy.m = cfg.m;
    zpa::Classification result = zpa::classify(expr_of(cfg), policy, cfg.jobs);
    std::ostringstream lines;
    for (const auto& entry : result.series.fixed_m)
        lines << "k=" << entry.k << " m=" << entry.m << " alpha_hat=" << entry.alpha_hat << "\n";
    for (const auto& entry : result.series.refinement)
        lines << "k=" << entry.k << " m(k)=" << entry.m << " alpha_hat=" << entry.alpha_hat << "\n";
    const char* verdict = result.verdict == zpa::Classification::Verdict::Measure1Candidate
                              ? "Measure1Candidate"
                          : result.verdict == zpa::Classification::Verdict::Measure0Candidate
                              ? "Measure0Candidate"
                              : "Undetermined";
    lines << "verdict=" << verdict << " (heuristic)\n";
    emit(cfg, zpa::to_json(result), lines.str());
    return 0;
}

int cmd_mirror(const RunConfig& cfg) {
    zpa::MirrorReport report = zpa::mirror_check(expr_of(cfg), cfg.k);
    std::ostringstream line;
    line << "mismatches=" << report.mismatches
         << " boundary_exceptions=" << report.boundary_exceptions << "\n";
    emit(cfg, zpa::to_json(report), line.str());
    return 0;
}

int cmd_repro_figures(const RunConfig& cfg) {
    if (cfg.out.empty()) throw zpa::input_error("repro figures needs --out DIR");
    std::filesystem::create_directories(cfg.out);

    struct Figure {
        const char* name;
        const char* expr;
        unsigned k;
    };
    const Figure figures[] = {
        {"fig1", "2*x^2+3*x+1", 16}, {"fig2", "2*x^2+3*x+1", 18},
        {"fig3", "2*x^2+3*x+1", 20}, {"fig4", "2*x^2+3*x+1", 23},
        {"fig5", "x+x^2|-131065", 16}, {"fig6", "x+x^2|-131065", 17},
        {"fig7", "x+x^2|-131065", 18}, {"fig8", "x+x^2|-131065", 22},
    };

    json manifest = json::array();
    for (const Figure& fig : figures) {
        unsigned m = std::min(fig.k, 10u); // caption fixes k; raster level is ours
        zpa::Expr e = zpa::parse_expr(fig.expr, 2);
        zpa::PlotGrid grid = zpa::occupancy(e, fig.k, m, cfg.jobs);
        write_text(cfg.out + "/" + fig.name + ".pgm", zpa::render_pgm(grid));
        json entry = zpa::grid_stats(grid);
        entry["file"] = std::string(fig.name) + ".pgm";
        entry["expr"] = fig.expr;
        manifest.push_back(std::move(entry));
        std::cout << fig.name << ".pgm: " << fig.expr << " k=" << fig.k << " m=" << m << "\n";
    }
    write_text(cfg.out + "/manifest.json", manifest.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    if (const char* env_jobs = std::getenv("ZPA_JOBS"))
        cfg.jobs = static_cast<unsigned>(std::strtoul(env_jobs, nullptr, 10));

    // a config file provides defaults, so scan for it before binding flags
    try {
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "--config") load_config_file(cfg, argv[i + 1]);
    } catch (const zpa::input_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }

    CLI::App app{"automata as 1-Lipschitz maps on the p-adic integers"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "config file (JSON or key=value lines)");
    app.add_option("--jobs", cfg.jobs, "worker threads for data-parallel commands");
    app.add_option("--seed", cfg.seed, "seed for sampled checks");

    auto add_expr_opts = [&](CLI::App* cmd) {
        cmd->add_option("--p", cfg.p, "alphabet prime");
        cmd->add_option("--expr", cfg.expr, "expression text");
        cmd->add_option("--const", cfg.consts, "named constant name=value (repeatable)");
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate f(x) mod p^k");
    add_expr_opts(eval);
    eval->add_option("--x", cfg.x, "argument (decimal or p:k:digits literal)");
    eval->add_option("--k", cfg.k, "level");
    eval->add_flag("--json", cfg.as_json, "JSON report");

    CLI::App* automaton = app.add_subcommand("automaton", "machine simulation and export");
    automaton->require_subcommand(1);
    CLI::App* arun = automaton->add_subcommand("run", "feed a word to a machine");
    add_expr_opts(arun);
    arun->add_option("--machine", cfg.machine_file, "machine JSON file");
    arun->add_option("--word", cfg.word, "input word, most significant letter first");
    arun->add_flag("--json", cfg.as_json, "JSON report");
    CLI::App* adot = automaton->add_subcommand("dot", "Moore diagram in DOT form");
    add_expr_opts(adot);
    adot->add_option("--machine", cfg.machine_file, "machine JSON file");
    adot->add_option("--depth", cfg.depth, "exploration depth for lazy machines");
    adot->add_option("--out", cfg.out, "output path (stdout when omitted)");

    CLI::App* transit = app.add_subcommand("transit", "transitivity hierarchy checks");
    transit->require_subcommand(1);
    CLI::App* levels = transit->add_subcommand("levels", "single-cycle check per level");
    add_expr_opts(levels);
    levels->add_option("--max-n", cfg.max_n, "largest level");
    levels->add_flag("--json", cfg.as_json, "JSON report");
    levels->add_option("--out", cfg.out, "write the report to a file");
    CLI::App* complete = transit->add_subcommand("complete", "pair witness search");
    add_expr_opts(complete);
    complete->add_option("--machine", cfg.machine_file, "finite machine for the exact family check");
    complete->add_option("--n", cfg.n, "word length");
    complete->add_option("--lmax", cfg.lmax, "largest prefix length");
    complete->add_flag("--json", cfg.as_json, "JSON report");
    complete->add_option("--out", cfg.out, "write the report to a file");
    CLI::App* absolute = transit->add_subcommand("absolute", "witness search from every start");
    add_expr_opts(absolute);
    absolute->add_option("--n", cfg.n, "word length");
    absolute->add_option("--xlen", cfg.xlen, "start suffix length");
    absolute->add_option("--lmax", cfg.lmax, "largest prefix length");
    absolute->add_flag("--json", cfg.as_json, "JSON report");
    absolute->add_option("--out", cfg.out, "write the report to a file");
    CLI::App* certify = transit->add_subcommand("certify", "sufficient-condition certificate");
    add_expr_opts(certify);
    certify->add_option("--bound", cfg.bound, "sample/search bound");
    certify->add_flag("--json", cfg.as_json, "JSON report");
    certify->add_option("--out", cfg.out, "write the report to a file");

    CLI::App* plot = app.add_subcommand("plot", "occupancy raster of the unit-square plot");
    add_expr_opts(plot);
    plot->add_option("--k", cfg.k, "point level");
    plot->add_option("--m", cfg.m, "grid level");
    plot->add_option("--out", cfg.out, "PGM output path");
    plot->add_option("--csv", cfg.csv, "CSV output path");
    plot->add_flag("--json", cfg.as_json, "print stats as JSON");

    CLI::App* measure = app.add_subcommand("measure", "occupancy trend and classification");
    add_expr_opts(measure);
    measure->add_option("--ks", cfg.ks, "comma-separated point levels");
    measure->add_option("--m", cfg.m, "fixed grid level");
    measure->add_flag("--json", cfg.as_json, "JSON report");
    measure->add_option("--out", cfg.out, "write the report to a file");

    CLI::App* mirror = app.add_subcommand("mirror", "reflection identity of the negated map");
    add_expr_opts(mirror);
    mirror->add_option("--k", cfg.k, "point level");
    mirror->add_flag("--json", cfg.as_json, "JSON report");
    mirror->add_option("--out", cfg.out, "write the report to a file");

    CLI::App* repro = app.add_subcommand("repro", "regenerate reference artifacts");
    CLI::App* repro_figs = repro->add_subcommand("figures", "the eight reference plots");
    repro_figs->add_option("--out", cfg.out, "output directory")->required();
    repro_figs->add_option("--jobs", cfg.jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (eval->parsed()) {
            if (cfg.x.empty()) throw zpa::input_error("eval needs --x");
            return cmd_eval(cfg);
        }
        if (automaton->parsed()) {
            if (arun->parsed()) {
                if (cfg.word.empty()) throw zpa::input_error("automaton run needs --word");
                return cmd_automaton_run(cfg);
            }
            if (adot->parsed()) return cmd_automaton_dot(cfg);
        }
        if (transit->parsed()) {
            if (levels->parsed()) return cmd_transit_levels(cfg);
            if (complete->parsed()) return cmd_transit_complete(cfg);
            if (absolute->parsed()) return cmd_transit_absolute(cfg);
            if (certify->parsed()) return cmd_transit_certify(cfg);
        }
        if (plot->parsed()) return cmd_plot(cfg);
        if (measure->parsed()) return cmd_measure(cfg);
        if (mirror->parsed()) return cmd_mirror(cfg);
        if (repro->parsed() && repro_figs->parsed()) return cmd_repro_figures(cfg);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const zpa::guard_error& err) {
        std::cerr << "guard: " << err.what() << "\n";
        return 2;
    } catch (const zpa::input_error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
}
