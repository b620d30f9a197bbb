// fblab: well-posedness analysis and residual-velocity solves for steady
// "2+2" elliptic free-boundary problems.
//
//   fblab analyze --config run.cfg        classification, w(s), lambda ranking
//   fblab solve   --config run.cfg        one residual-velocity run to steady state
//   fblab tables  --config run.cfg        the convergence and timestep-stability tables

#include <CLI11.hpp>

#include <iostream>

#include "fbl/frontend.hpp"

namespace {

using namespace fbl;

int cmd_analyze(const Config& cfg) {
    AnalysisOutcome out = run_analysis(cfg);
    std::string text = analysis_text(out, cfg);
    std::cout << text;
    std::filesystem::path dir(cfg.out_dir);
    if (cfg.text_output) write_file(dir / "analysis.txt", text);
    if (cfg.csv_output) write_file(dir / "velocities.csv", velocity_table(out.ranking).csv());
    return out.exit_code;
}

int cmd_solve(const Config& cfg) {
    RunReport rep = run_to_steady(cfg.run);
    TextTable table = run_table_row(cfg.run, rep);
    std::cout << table.render();
    std::cout << "errInf=" << format_number(rep.errors.err_inf)
              << " errT=" << format_number(rep.errors.err_t)
              << " errS=" << format_number(rep.errors.err_s)
              << (rep.diverged ? "  [diverged]" : "") << "\n";
    std::filesystem::path dir(cfg.out_dir);
    if (cfg.text_output) write_file(dir / "run_report.txt", table.render());
    if (cfg.csv_output) {
        write_file(dir / "run_report.csv", table.csv());
        write_file(dir / "trace.csv", trace_csv(rep));
    }
    return 0;
}

int cmd_tables(const Config& cfg, bool quick) {
    TablesResult r = run_tables(cfg, quick ? TableSpecs::quick() : TableSpecs{});
    TextTable t1 = convergence_table(r.table1);
    TextTable t2 = convergence_table(r.table2);
    TextTable t3 = stability_table(r.table3);
    std::ostringstream os;
    os << "Table 1: convergence of the Neumann residual velocity (dt = 0.02)\n"
       << t1.render() << "\n"
       << "Table 2: convergence of the Dirichlet residual velocity (dt = 0.2)\n"
       << t2.render() << "\n"
       << "Table 3: timestep stability of the two residual velocities\n"
       << t3.render();
    std::cout << os.str();
    std::filesystem::path dir(cfg.out_dir);
    if (cfg.text_output) write_file(dir / "tables.txt", os.str());
    if (cfg.csv_output) {
        write_file(dir / "table1.csv", t1.csv());
        write_file(dir / "table2.csv", t2.csv());
        write_file(dir / "table3.csv", t3.csv());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady 2+2 free-boundary laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    bool quick = false;
    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--out", out_dir, "output directory (overrides [output] directory)");

    CLI::App* analyze = app.add_subcommand("analyze", "well-posedness and velocity ranking");
    CLI::App* solve = app.add_subcommand("solve", "run the residual-velocity iteration");
    CLI::App* tables = app.add_subcommand("tables", "reproduce the convergence/stability tables");
    tables->add_flag("--quick", quick, "restrict to the 10x10 and 20x20 grids");

    CLI11_PARSE(app, argc, argv);

    try {
        fbl::Config cfg = config_path.empty() ? fbl::Config{} : fbl::parse_config_file(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (analyze->parsed()) return cmd_analyze(cfg);
        if (solve->parsed()) return cmd_solve(cfg);
        return cmd_tables(cfg, quick);
    } catch (const fbl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
