#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fbl/config.hpp"
#include "fbl/report.hpp"

namespace fbl {

// ---------------------------------------------------------------- analysis

struct AnalysisOutcome {
    ClassReport classes;
    RationalMatrix basis;
    std::array<Poly, 5> w;
    VelocityRanking ranking;
    std::array<Rational, 3> q;
    int exit_code = 0;  // 0 well-posed with a stable velocity, 2 ill-posed, 3 degenerate
};

inline InterfaceSystem system_from_config(const Config& cfg) {
    if (!cfg.matrix_file.empty()) return read_system_file(cfg.matrix_file);
    return build_porous_system(cfg.porous);
}

inline AnalysisOutcome run_analysis(const Config& cfg) {
    InterfaceSystem sys = system_from_config(cfg);
    AnalysisOutcome out;
    if (cfg.q_from_data) {
        if (!cfg.matrix_file.empty())
            throw ParseError("q = from-data requires the builtin porous system");
        out.q = flat_base_state(cfg.porous).base.q;
    } else {
        out.q = cfg.q;
    }
    out.classes = classify(sys);
    out.basis = nullspace_of_G(sys);
    try {
        out.w = left_null_w(sys, cfg.mode);
        out.ranking = rank_velocities(sys, out.q, cfg.velocities, cfg.mode);
    } catch (const DegenerateGMError&) {
        out.exit_code = 3;
        return out;
    } catch (const AllDegenerateError&) {
        out.exit_code = 3;
        return out;
    }
    bool any_stable = false;
    for (const auto& e : out.ranking.entries)
        any_stable |= e.category == VelocityCategory::StableBounded ||
                      e.category == VelocityCategory::StableStiff;
    if (!out.ranking.form.well_posed())
        out.exit_code = 2;
    else if (!any_stable)
        out.exit_code = 2;
    else
        out.exit_code = 0;
    return out;
}

inline TextTable velocity_table(const VelocityRanking& ranking) {
    TextTable t;
    t.header = {"velocity", "category", "growth_order", "sign", "lambda(1)", "lambda_num", "lambda_den"};
    for (const auto& e : ranking.entries) {
        std::vector<std::string> row;
        row.push_back(e.velocity.label);
        row.push_back(to_string(e.category));
        if (e.profile) {
            row.push_back(std::to_string(e.profile->growth_order));
            row.push_back(to_string(e.profile->sign));
            row.push_back(format_number(e.lambda_at_one));
            row.push_back(coeff_list(e.profile->numerator));
            row.push_back(coeff_list(e.profile->denominator));
        } else {
            row.insert(row.end(), {"-", "-", "-", "-", "-"});
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::string analysis_text(const AnalysisOutcome& out, const Config& cfg) {
    std::ostringstream os;
    os << "interface system classification\n";
    os << "  class:            " << out.classes.label << (out.classes.tilde ? "~" : "") << "\n";
    os << "  rank G_N / G_D:   " << out.classes.rank_gn << " / " << out.classes.rank_gd << "\n";
    os << "  pure Dirichlet:   " << out.classes.pure_dirichlet << "\n";
    os << "  pure Neumann:     " << out.classes.pure_neumann << "\n\n";

    os << "kernel basis of G (columns = global flux directions q1, q2, q3)\n";
    for (int i = 0; i < out.basis.rows(); ++i) {
        os << "  " << variable_labels()[static_cast<size_t>(i)] << ":";
        for (int k = 0; k < out.basis.cols(); ++k) os << "  " << to_string(out.basis.at(i, k));
        os << "\n";
    }
    os << "\nglobal fluxes q = (" << to_string(out.q[0]) << ", " << to_string(out.q[1]) << ", "
       << to_string(out.q[2]) << ")\n";
    if (out.exit_code == 3) {
        os << "\nDEGENERATE: GM lost rank or every velocity has w^T v = 0\n";
        return os.str();
    }

    os << "\nleft nullspace w(s) of GM, s = " << cfg.mode.symbol() << "\n";
    for (int i = 0; i < 5; ++i) os << "  w" << (i + 1) << " = " << out.w[static_cast<size_t>(i)].str() << "\n";
    os << "\nwell-posedness form  w^T G U0n = " << out.ranking.form.poly.str() << "\n";
    if (out.ranking.form.identically_zero())
        os << "  ILL-POSED: the form vanishes identically (base state on the critical manifold)\n";
    else if (out.ranking.form.has_positive_root())
        os << "  ILL-POSED: the form vanishes at a positive wavenumber\n";
    else
        os << "  well-posed: nonvanishing for all s > 0\n";

    os << "\nresidual velocity ranking (best first)\n";
    os << velocity_table(out.ranking).render();
    if (out.exit_code == 0) {
        const auto& best = out.ranking.entries.front();
        os << "\nbest velocity: " << best.velocity.label << "  (" << to_string(best.category)
           << ", lambda(1) = " << format_number(best.lambda_at_one) << ")\n";
    }
    return os.str();
}

// ---------------------------------------------------------------- solve

inline TextTable run_table_row(const RunConfig& cfg, const RunReport& rep) {
    TextTable t;
    t.header = {"N", "dt", "velocity", "steps", "converged", "diverged",
                "errInf", "errT", "errS", "final_maxR", "wall_s"};
    t.rows.push_back({std::to_string(cfg.n), format_number(cfg.dt), to_string(cfg.choice),
                      std::to_string(rep.steps_taken), rep.converged ? "yes" : "no",
                      rep.diverged ? "yes" : "no", format_number(rep.errors.err_inf),
                      format_number(rep.errors.err_t), format_number(rep.errors.err_s),
                      format_number(rep.final_residual), format_number(rep.wall_seconds)});
    return t;
}

inline std::string trace_csv(const RunReport& rep) {
    std::ostringstream os;
    os << "step,t,max_residual,err_inf\n";
    for (const TraceSample& s : rep.trace)
        os << s.step << ',' << format_number(s.t) << ',' << format_number(s.max_residual) << ','
           << format_number(s.err_inf) << '\n';
    return os.str();
}

// ---------------------------------------------------------------- tables

struct TableCell {
    int n;
    double dt;
    ResidualChoice choice;
    std::optional<RunReport> report;  // empty when the run failed outright
    std::string failure;
};

inline TableCell run_cell(const Config& cfg, int n, double dt, ResidualChoice choice) {
    TableCell cell{n, dt, choice, std::nullopt, ""};
    RunConfig rc = cfg.run;
    rc.n = n;
    rc.dt = dt;
    rc.choice = choice;
    rc.stop_tolerance = 0.0;  // reproduce the full-horizon protocol
    rc.record_fields = false;
    try {
        cell.report = run_to_steady(rc);
    } catch (const Error& e) {
        cell.failure = e.what();
    }
    return cell;
}

// Convergence table (one residual choice, fixed dt, N doubling) with ratio
// columns err(N)/err(2N).
inline TextTable convergence_table(const std::vector<TableCell>& cells) {
    TextTable t;
    t.header = {"grid", "errInf", "ratio", "errT", "ratio", "errS", "ratio"};
    for (size_t k = 0; k < cells.size(); ++k) {
        const TableCell& c = cells[k];
        std::vector<std::string> row;
        row.push_back(std::to_string(c.n) + "x" + std::to_string(c.n));
        if (!c.report || c.report->diverged) {
            row.insert(row.end(), {"diverged", "***", "diverged", "***", "diverged", "***"});
        } else {
            const ErrorMetrics& e = c.report->errors;
            auto ratio = [&](auto pick) -> std::string {
                if (k == 0 || !cells[k - 1].report || cells[k - 1].report->diverged) return "***";
                return format_number(pick(cells[k - 1].report->errors) / pick(e));
            };
            row.push_back(format_number(e.err_inf));
            row.push_back(ratio([](const ErrorMetrics& m) { return m.err_inf; }));
            row.push_back(format_number(e.err_t));
            row.push_back(ratio([](const ErrorMetrics& m) { return m.err_t; }));
            row.push_back(format_number(e.err_s));
            row.push_back(ratio([](const ErrorMetrics& m) { return m.err_s; }));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Timestep-stability table mixing both velocities.
inline TextTable stability_table(const std::vector<TableCell>& cells) {
    TextTable t;
    t.header = {"grid", "timestep", "RV", "errInf", "errT", "errS", "outcome"};
    for (const TableCell& c : cells) {
        std::vector<std::string> row;
        row.push_back(std::to_string(c.n) + "x" + std::to_string(c.n));
        row.push_back(format_number(c.dt));
        row.push_back(c.choice == ResidualChoice::Neumann ? "VN" : "VD");
        if (!c.report) {
            row.insert(row.end(), {"-", "-", "-", "diverged"});
        } else {
            row.push_back(format_number(c.report->errors.err_inf));
            row.push_back(format_number(c.report->errors.err_t));
            row.push_back(format_number(c.report->errors.err_s));
            row.push_back(c.report->diverged ? "diverged" : (c.report->converged ? "converged" : "no-steady"));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct TableSpecs {
    std::vector<int> grids{10, 20, 40};
    double neumann_dt = 0.02;
    double dirichlet_dt = 0.2;
    // (N, dt) rows of the timestep-stability study, Neumann velocity
    std::vector<std::pair<int, double>> neumann_sweep{
        {10, 0.20}, {10, 0.15}, {10, 0.12}, {20, 0.12}, {20, 0.08},
        {20, 0.06}, {40, 0.06}, {40, 0.04}, {40, 0.03}};

    static TableSpecs quick() {
        TableSpecs s;
        s.grids = {10, 20};
        s.neumann_sweep = {{10, 0.20}, {10, 0.15}, {10, 0.12}, {20, 0.12}, {20, 0.08}, {20, 0.06}};
        return s;
    }
};

struct TablesResult {
    std::vector<TableCell> table1, table2, table3;
};

inline TablesResult run_tables(const Config& cfg, const TableSpecs& specs) {
    TablesResult r;
    for (int n : specs.grids) r.table1.push_back(run_cell(cfg, n, specs.neumann_dt, ResidualChoice::Neumann));
    for (int n : specs.grids) r.table2.push_back(run_cell(cfg, n, specs.dirichlet_dt, ResidualChoice::Dirichlet));
    for (int n : specs.grids) {
        for (auto [sn, dt] : specs.neumann_sweep)
            if (sn == n) r.table3.push_back(run_cell(cfg, n, dt, ResidualChoice::Neumann));
        r.table3.push_back(run_cell(cfg, n, specs.dirichlet_dt, ResidualChoice::Dirichlet));
    }
    return r;
}

// ---------------------------------------------------------------- files

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
}

}  // namespace fbl
