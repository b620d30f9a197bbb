#pragma once

#include <Eigen/SparseLU>

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "fbl/solver/assemble.hpp"

namespace fbl {

// The four discrete fields on their mapped rectangles, (i, j) = (x, mapped y).
struct FieldState {
    GridLayout grid{0, 0.0};
    Eigen::MatrixXd t_plus, p, t_minus, s;

    static FieldState from_solution(const GridLayout& g, const Eigen::VectorXd& u) {
        FieldState st;
        st.grid = g;
        auto unpack = [&](Field f) {
            Eigen::MatrixXd m(g.n, g.n);
            for (int j = 0; j < g.n; ++j)
                for (int i = 0; i < g.n; ++i) m(i, j) = u[g.index(f, i, j)];
            return m;
        };
        st.t_plus = unpack(Field::TPlus);
        st.p = unpack(Field::P);
        st.t_minus = unpack(Field::TMinus);
        st.s = unpack(Field::S);
        return st;
    }
};

// Direct sparse solve with a residual contract: the relative (backward-error
// style) algebraic residual |Ax-b| / (|A||x| + |b|) must come out below tol,
// otherwise SolveFailure. The symbolic factorization is reusable across
// steps because the sparsity pattern depends only on N and the residual
// choice, not on the interface.
class FixedBoundarySolver {
  public:
    FieldState solve(const LinearSystem& sys, double tol = 1e-10) {
        if (!analyzed_) {
            lu_.analyzePattern(sys.A);
            analyzed_ = true;
        }
        lu_.factorize(sys.A);
        if (lu_.info() != Eigen::Success) throw SolveFailureError("sparse LU factorization failed");
        Eigen::VectorXd u = lu_.solve(sys.rhs);
        if (lu_.info() != Eigen::Success) throw SolveFailureError("sparse LU back-substitution failed");
        double anorm = 0.0;  // max row sum
        {
            Eigen::VectorXd rowsum = Eigen::VectorXd::Zero(sys.A.rows());
            for (int k = 0; k < sys.A.outerSize(); ++k)
                for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it)
                    rowsum[it.row()] += std::abs(it.value());
            anorm = rowsum.maxCoeff();
        }
        double rnorm = (sys.A * u - sys.rhs).cwiseAbs().maxCoeff();
        double scale = anorm * u.cwiseAbs().maxCoeff() + sys.rhs.cwiseAbs().maxCoeff();
        double rel = rnorm / (scale > 0 ? scale : 1.0);
        if (!std::isfinite(rel) || rel > tol) throw SolveFailureError(rel);
        return FieldState::from_solution(sys.grid, u);
    }

  private:
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool analyzed_ = false;
};

inline FieldState solve_fixed_boundary(const LinearSystem& sys, double tol = 1e-10) {
    FixedBoundarySolver solver;
    return solver.solve(sys, tol);
}

namespace detail {

// (-h', 1) . grad of a discrete field at interface node i, one-sided in the
// mapped normal coordinate.
inline double interface_normal_derivative(const Eigen::MatrixXd& u, const GridLayout& g, Side side,
                                          int i, double hp, double metric) {
    const int n = g.n;
    const double dx = g.dx(), dy = g.dy();
    int ip = g.wrap(i + 1), im = g.wrap(i - 1);
    if (side == Side::Lower) {
        double ux = (u(ip, n - 1) - u(im, n - 1)) / (2.0 * dx);
        double ueta = (3.0 * u(i, n - 1) - 4.0 * u(i, n - 2) + u(i, n - 3)) / (2.0 * dy);
        return -hp * ux + metric * ueta;
    }
    double ux = (u(ip, 0) - u(im, 0)) / (2.0 * dx);
    double ueta = (-3.0 * u(i, 0) + 4.0 * u(i, 1) - u(i, 2)) / (2.0 * dy);
    return -hp * ux + metric * ueta;
}

}  // namespace detail

// Residual of the single unenforced interface condition, sampled at the N
// interface nodes. This is the normal velocity of the evolution step.
inline Eigen::ArrayXd interface_residual(const FieldState& state, const InterfaceCurve& curve,
                                         ResidualChoice choice) {
    const GridLayout& g = state.grid;
    Eigen::ArrayXd r(g.n);
    if (choice == ResidualChoice::Dirichlet) {
        for (int i = 0; i < g.n; ++i) r[i] = state.s(i, g.n - 1);
        return r;
    }
    for (int i = 0; i < g.n; ++i) {
        double h = curve.h()[i], hp = curve.hp()[i];
        double metric_up = (1.0 + hp * hp) / (g.domain_height - h);
        double metric_lo = (1.0 + hp * hp) / h;
        r[i] = detail::interface_normal_derivative(state.p, g, Side::Upper, i, hp, metric_up) -
               detail::interface_normal_derivative(state.t_minus, g, Side::Lower, i, hp, metric_lo) -
               detail::interface_normal_derivative(state.s, g, Side::Lower, i, hp, metric_lo);
    }
    return r;
}

// Explicit interface update h' = h + dt * R.
inline InterfaceCurve evolve(const InterfaceCurve& curve, const Eigen::ArrayXd& r, double dt) {
    InterfaceCurve next = curve;
    next.advance(r, dt);
    return next;
}

// Which geometry maps grid nodes to physical points when comparing against
// the closed-form solution: the computed interface (the state's own grid) or
// the exact one.
enum class ErrorMapping { ComputedCurve, ExactCurve };

struct ErrorMetrics {
    double err_inf = 0.0;  // interface height, max norm over x nodes
    double err_t = 0.0;    // temperature over both rectangles
    double err_s = 0.0;    // saturation over the lower rectangle
};

inline ErrorMetrics error_metrics(const FieldState& state, const InterfaceCurve& curve,
                                  const PorousParams& params,
                                  ErrorMapping mapping = ErrorMapping::ComputedCurve) {
    const GridLayout& g = state.grid;
    ErrorMetrics m;
    for (int i = 0; i < g.n; ++i) {
        double x = g.x(i);
        double h_exact = exact_interface(x, params);
        m.err_inf = std::max(m.err_inf, std::abs(curve.h()[i] - h_exact));
        double h_map = mapping == ErrorMapping::ComputedCurve ? curve.h()[i] : h_exact;
        for (int j = 0; j < g.n; ++j) {
            double y_up = g.physical_y(Side::Upper, h_map, j);
            double y_lo = g.physical_y(Side::Lower, h_map, j);
            m.err_t = std::max(m.err_t, std::abs(state.t_plus(i, j) - exact_fields(x, y_up, params).t_plus));
            FieldValues lo = exact_fields(x, y_lo, params);
            m.err_t = std::max(m.err_t, std::abs(state.t_minus(i, j) - lo.t_minus));
            m.err_s = std::max(m.err_s, std::abs(state.s(i, j) - lo.s));
        }
    }
    return m;
}

struct RunConfig {
    int n = 10;
    double dt = 0.2;
    double t_end = 24.0;
    ResidualChoice choice = ResidualChoice::Dirichlet;
    double stop_tolerance = 0.0;  // 0 disables early exit; the run covers [0, t_end]
    double linear_tolerance = 1e-10;
    PorousParams params;
    ErrorMapping error_mapping = ErrorMapping::ExactCurve;
    bool record_fields = true;
};

inline void validate(const RunConfig& c) {
    if (c.n < 4) throw ParamMismatchError("grid resolution must be at least 4");
    if (c.dt <= 0) throw ParamMismatchError("time step must be positive");
    validate(c.params);
}

struct TraceSample {
    int step;
    double t;
    double max_residual;
    double err_inf;
};

struct RunReport {
    std::vector<TraceSample> trace;
    Eigen::ArrayXd h;
    FieldState state;
    ErrorMetrics errors;
    bool converged = false;
    bool diverged = false;
    int failure_step = -1;
    std::string failure_reason;
    double final_residual = 0.0;
    int steps_taken = 0;
    double wall_seconds = 0.0;
};

// Residuals above this abort the run as diverged rather than erroring, so
// unstable time steps become reportable data.
inline constexpr double kDivergenceGuard = 1e3;

// The residual-velocity iteration: solve the fixed-boundary problem with the
// enforced conditions, evaluate the leftover residual, move the interface by
// it, repeat until t_end (or until max|R| falls below stop_tolerance).
// Blow-ups (residual guard, subdomain collapse) end the run with the
// diverged flag and the offending step recorded.
inline RunReport run_to_steady(const RunConfig& config) {
    validate(config);
    auto t_start = std::chrono::steady_clock::now();

    FlatBaseState flat = flat_base_state(config.params);
    InterfaceCurve curve =
        InterfaceCurve::flat(config.n, to_double(flat.y0), to_double(config.params.L));

    GridLayout g{config.n, curve.domain_height()};
    Eigen::ArrayXd h_exact(config.n);
    for (int i = 0; i < config.n; ++i) h_exact[i] = exact_interface(g.x(i), config.params);

    FixedBoundarySolver solver;
    RunReport report;
    const int steps = static_cast<int>(std::llround(config.t_end / config.dt));

    int step = 0;
    while (true) {
        FieldState state;
        Eigen::ArrayXd r;
        try {
            state = solver.solve(assemble(config.params, curve, config.choice), config.linear_tolerance);
            r = interface_residual(state, curve, config.choice);
        } catch (const MappingSingularError& e) {
            report.diverged = true;
            report.failure_step = step;
            report.failure_reason = e.what();
            break;
        }
        double max_r = r.abs().maxCoeff();
        report.trace.push_back({step, step * config.dt, max_r, (curve.h() - h_exact).abs().maxCoeff()});
        report.final_residual = max_r;
        report.state = std::move(state);

        if (!std::isfinite(max_r) || max_r > kDivergenceGuard) {
            report.diverged = true;
            report.failure_step = step;
            report.failure_reason = "residual exceeded the divergence guard";
            break;
        }
        if (config.stop_tolerance > 0 && max_r <= config.stop_tolerance) break;
        if (step >= steps) break;
        try {
            curve.advance(r, config.dt);
        } catch (const MappingSingularError& e) {
            report.diverged = true;
            report.failure_step = step;
            report.failure_reason = e.what();
            break;
        }
        ++step;
    }

    report.steps_taken = step;
    report.h = curve.h();
    if (report.state.grid.n == config.n) {
        report.errors = error_metrics(report.state, curve, config.params, config.error_mapping);
    } else {
        // diverged before the first solve completed
        report.errors.err_inf = (curve.h() - h_exact).abs().maxCoeff();
    }
    report.converged = !report.diverged &&
                       report.final_residual <= std::max(config.stop_tolerance, 1e-6);
    if (!config.record_fields) report.state = FieldState{};
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return report;
}

}  // namespace fbl
