#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "fbl/solver/run.hpp"

using namespace fbl;
using std::numbers::pi;

namespace {

InterfaceCurve exact_curve(int n, const PorousParams& p) {
    GridLayout g{n, to_double(p.L)};
    Eigen::ArrayXd h(n);
    for (int i = 0; i < n; ++i) h[i] = exact_interface(g.x(i), p, 1e-13);
    return InterfaceCurve(h, to_double(p.L));
}

double field_value(const FieldValues& v, Field f) {
    switch (f) {
        case Field::TPlus: return v.t_plus;
        case Field::P: return v.p;
        case Field::TMinus: return v.t_minus;
        default: return v.s;
    }
}

// Apply the assembled operator to samples of the exact solution and return
// the worst interior equation residual plus the worst boundary/interface row
// residual.
std::pair<double, double> truncation_residuals(int n, const PorousParams& params,
                                               ResidualChoice choice) {
    InterfaceCurve curve = exact_curve(n, params);
    LinearSystem sys = assemble(params, curve, choice);
    const GridLayout& g = sys.grid;
    Eigen::VectorXd u(g.total());
    for (int f = 0; f < 4; ++f) {
        Field field = static_cast<Field>(f);
        Side side = (field == Field::TPlus || field == Field::P) ? Side::Upper : Side::Lower;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double y = g.physical_y(side, curve.h()[i], j);
                u[g.index(field, i, j)] = field_value(exact_fields(g.x(i), y, params), field);
            }
    }
    Eigen::VectorXd res = sys.A * u - sys.rhs;
    double interior = 0.0, enforced = 0.0;
    for (int f = 0; f < 4; ++f)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double r = std::abs(res[g.index(static_cast<Field>(f), i, j)]);
                bool interface_row = (f < 2 && j == 0) || (f >= 2 && j == n - 1);
                bool outer_row = (f < 2 && j == n - 1) || (f >= 2 && j == 0);
                if (interface_row || outer_row)
                    enforced = std::max(enforced, r);
                else
                    interior = std::max(interior, r);
            }
    return {interior, enforced};
}

}  // namespace

TEST_CASE("flat mapping reduces to the scaled Laplacian") {
    StencilCoeffs lo = mapped_operator_coeffs(Side::Lower, 1.0, 0.0, 0.0, 2.0, 0.5, 1e-3);
    CHECK(lo.cyy == 1.0);  // 1/h^2 with h = 1
    CHECK(lo.cxx == 1.0);
    CHECK(lo.cxy == 0.0);
    CHECK(lo.cy == 0.0);
    StencilCoeffs up = mapped_operator_coeffs(Side::Upper, 0.5, 0.0, 0.0, 2.0, 1.5, 1e-3);
    CHECK(up.cyy == Catch::Approx(1.0 / 2.25));  // 1/(L-h)^2
    CHECK(up.cxy == 0.0);
    CHECK(up.cy == 0.0);
}

TEST_CASE("mapped coefficients match the closed formulas on a sine bump") {
    int n = 16;
    Eigen::ArrayXd h(n);
    for (int i = 0; i < n; ++i) h[i] = 1.0 + 0.1 * std::sin(2 * pi * i / n);
    InterfaceCurve curve(h, 2.0);
    GridLayout g{n, 2.0};
    auto lower = build_mapped_operator(curve, g, Side::Lower);
    auto upper = build_mapped_operator(curve, g, Side::Upper);
    for (int i : {1, 5, 11}) {
        // the formulas take the curve's own (discrete) h' and h'' samples
        double hi = curve.h()[i], hp = curve.hp()[i], hpp = curve.hpp()[i];
        int j = 4;
        double y2 = g.y2(j);
        const StencilCoeffs& c = lower[static_cast<size_t>(j * n + i)];
        CHECK(c.cyy == Catch::Approx((1 + hp * hp * y2 * y2) / (hi * hi)).epsilon(1e-14));
        CHECK(c.cxy == Catch::Approx(-2 * y2 * hp / hi).epsilon(1e-14));
        CHECK(c.cy == Catch::Approx((2 * hp * hp - hpp * hi) / (hi * hi) * y2).epsilon(1e-14));
        double y1 = g.y1(j);
        const StencilCoeffs& cu = upper[static_cast<size_t>(j * n + i)];
        double lmh = 2.0 - hi, w = 2.0 - y1;
        CHECK(cu.cyy == Catch::Approx((1 + hp * hp * w * w) / (lmh * lmh)).epsilon(1e-14));
        CHECK(cu.cxy == Catch::Approx(-2 * w * hp / lmh).epsilon(1e-14));
        CHECK(cu.cy == Catch::Approx(-(2 * hp * hp + hpp * lmh) / (lmh * lmh) * w).epsilon(1e-14));
    }
}

TEST_CASE("mapping collapse raises MappingSingular") {
    CHECK_THROWS_AS(InterfaceCurve::flat(8, 1e-5, 2.0), MappingSingularError);
    CHECK_THROWS_AS(InterfaceCurve::flat(8, 2.0 - 1e-5, 2.0), MappingSingularError);
    CHECK_THROWS_AS(mapped_operator_coeffs(Side::Lower, 1e-4, 0, 0, 2.0, 0.5, 2e-3),
                    MappingSingularError);
}

TEST_CASE("assembled system size at N = 4") {
    PorousParams p;
    InterfaceCurve curve = InterfaceCurve::flat(4, 1.0, 2.0);
    LinearSystem sys = assemble(p, curve, ResidualChoice::Neumann);
    CHECK(sys.A.rows() == 64);
    CHECK(sys.A.cols() == 64);
    CHECK(sys.rhs.size() == 64);
}

TEST_CASE("dirichlet assembly carries no s = 0 row") {
    PorousParams p;
    int n = 8;
    InterfaceCurve curve = InterfaceCurve::flat(n, 1.0, 2.0);
    GridLayout g{n, 2.0};
    auto row_nnz = [&](const LinearSystem& sys, int row) {
        int nnz = 0;
        for (int k = 0; k < sys.A.outerSize(); ++k)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it)
                if (it.row() == row) ++nnz;
        return nnz;
    };
    LinearSystem vd = assemble(p, curve, ResidualChoice::Dirichlet);
    LinearSystem vn = assemble(p, curve, ResidualChoice::Neumann);
    for (int i = 0; i < n; ++i) {
        int row = g.index(Field::S, i, n - 1);
        CHECK(row_nnz(vn, row) == 1);  // the enforced s = 0 row
        CHECK(row_nnz(vd, row) > 5);   // mass conservation couples P, T-, s
    }
}

TEST_CASE("solver meets the algebraic residual contract") {
    PorousParams p;
    InterfaceCurve curve = InterfaceCurve::flat(10, 1.0, 2.0);
    LinearSystem sys = assemble(p, curve, ResidualChoice::Dirichlet);
    CHECK_NOTHROW(solve_fixed_boundary(sys, 1e-12));
}

TEST_CASE("singular system raises SolveFailure") {
    PorousParams p;
    int n = 6;
    InterfaceCurve curve = InterfaceCurve::flat(n, 1.0, 2.0);
    LinearSystem sys = assemble(p, curve, ResidualChoice::Neumann);
    GridLayout g{n, 2.0};
    // duplicate an enforced row: overwrite the s bottom row with a copy of the
    // s interface row, so two rows pin the same unknown
    int a = g.index(Field::S, 0, 0), b = g.index(Field::S, 0, n - 1);
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it)
            if (it.row() == a) it.valueRef() = 0.0;
    sys.A.coeffRef(a, b) = 1.0;
    sys.rhs[a] = 0.0;
    CHECK_THROWS_AS(solve_fixed_boundary(sys, 1e-10), SolveFailureError);
}

TEST_CASE("truncation of interior and enforced rows is second order on the exact solution") {
    PorousParams p;
    for (auto choice : {ResidualChoice::Neumann, ResidualChoice::Dirichlet}) {
        auto [i16, e16] = truncation_residuals(16, p, choice);
        auto [i32, e32] = truncation_residuals(32, p, choice);
        auto [i64, e64] = truncation_residuals(64, p, choice);
        double oi1 = std::log2(i16 / i32), oi2 = std::log2(i32 / i64);
        double oe1 = std::log2(e16 / e32), oe2 = std::log2(e32 / e64);
        INFO("choice=" << to_string(choice) << " interior orders " << oi1 << "," << oi2
                       << " enforced orders " << oe1 << "," << oe2);
        CHECK(oi1 > 1.6);
        CHECK(oi2 > 1.7);
        CHECK(oe1 > 1.6);
        CHECK(oe2 > 1.7);
        CHECK(oi1 < 2.6);
        CHECK(oe2 < 2.6);
    }
}

TEST_CASE("interface residual of the exact solution is second order") {
    PorousParams p;
    double prev = 0.0;
    for (int n : {16, 32, 64}) {
        InterfaceCurve curve = exact_curve(n, p);
        FieldState st = solve_fixed_boundary(assemble(p, curve, ResidualChoice::Neumann), 1e-11);
        double max_r = interface_residual(st, curve, ResidualChoice::Neumann).abs().maxCoeff();
        if (prev > 0) {
            double order = std::log2(prev / max_r);
            CHECK(order > 1.6);
            CHECK(order < 2.6);
        }
        prev = max_r;
    }
}

TEST_CASE("dirichlet residual equals the interface saturation row") {
    PorousParams p;
    InterfaceCurve curve = exact_curve(12, p);
    FieldState st = solve_fixed_boundary(assemble(p, curve, ResidualChoice::Dirichlet), 1e-11);
    Eigen::ArrayXd r = interface_residual(st, curve, ResidualChoice::Dirichlet);
    for (int i = 0; i < 12; ++i) CHECK(r[i] == st.s(i, 11));
}

TEST_CASE("flat interface with the reference data balances the mean flux") {
    PorousParams p;
    int n = 20;
    InterfaceCurve curve = InterfaceCurve::flat(n, 1.0, 2.0);
    FieldState st = solve_fixed_boundary(assemble(p, curve, ResidualChoice::Neumann), 1e-11);
    Eigen::ArrayXd r = interface_residual(st, curve, ResidualChoice::Neumann);
    CHECK(std::abs(r.mean()) < 1e-8);  // zero mean at the flat balanced height
}

TEST_CASE("evolve: zero residual leaves the curve, constant residual shifts it") {
    InterfaceCurve curve = InterfaceCurve::flat(8, 1.0, 2.0);
    InterfaceCurve same = evolve(curve, Eigen::ArrayXd::Zero(8), 0.2);
    CHECK((same.h() == curve.h()).all());
    InterfaceCurve shifted = evolve(curve, Eigen::ArrayXd::Constant(8, 0.5), 0.2);
    for (int i = 0; i < 8; ++i) CHECK(shifted.h()[i] == Catch::Approx(1.1).epsilon(1e-15));
    CHECK_THROWS_AS(evolve(curve, Eigen::ArrayXd::Constant(8, 10.0), 0.2), MappingSingularError);
}

TEST_CASE("one dirichlet step from flat contracts the residual") {
    PorousParams p;
    int n = 20;
    InterfaceCurve curve = InterfaceCurve::flat(n, 1.0, 2.0);
    FixedBoundarySolver solver;
    FieldState st = solver.solve(assemble(p, curve, ResidualChoice::Dirichlet));
    Eigen::ArrayXd r0 = interface_residual(st, curve, ResidualChoice::Dirichlet);
    InterfaceCurve next = evolve(curve, r0, 0.2);
    FieldState st1 = solver.solve(assemble(p, next, ResidualChoice::Dirichlet));
    Eigen::ArrayXd r1 = interface_residual(st1, next, ResidualChoice::Dirichlet);
    CHECK(r1.abs().maxCoeff() < 0.8 * r0.abs().maxCoeff());
}

TEST_CASE("error metrics vanish on injected exact data") {
    PorousParams p;
    int n = 12;
    InterfaceCurve curve = exact_curve(n, p);
    GridLayout g{n, 2.0};
    FieldState st;
    st.grid = g;
    st.t_plus.resize(n, n);
    st.p.resize(n, n);
    st.t_minus.resize(n, n);
    st.s.resize(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            FieldValues up = exact_fields(g.x(i), g.physical_y(Side::Upper, curve.h()[i], j), p);
            FieldValues lo = exact_fields(g.x(i), g.physical_y(Side::Lower, curve.h()[i], j), p);
            st.t_plus(i, j) = up.t_plus;
            st.p(i, j) = up.p;
            st.t_minus(i, j) = lo.t_minus;
            st.s(i, j) = lo.s;
        }
    ErrorMetrics m = error_metrics(st, curve, p, ErrorMapping::ComputedCurve);
    CHECK(m.err_inf < 1e-12);
    CHECK(m.err_t < 1e-12);
    CHECK(m.err_s < 1e-12);
}

TEST_CASE("error metrics require equal conductivities") {
    PorousParams p;
    p.K_minus = Rational(2);
    int n = 8;
    InterfaceCurve curve = InterfaceCurve::flat(n, 1.0, 2.0);
    FieldState st = solve_fixed_boundary(assemble(p, curve, ResidualChoice::Neumann));
    CHECK_THROWS_AS(error_metrics(st, curve, p), ParamMismatchError);
}

TEST_CASE("steady solve on the exact interface reproduces the reference accuracy") {
    PorousParams p;
    InterfaceCurve curve = exact_curve(40, p);
    FieldState st = solve_fixed_boundary(assemble(p, curve, ResidualChoice::Dirichlet), 1e-11);
    ErrorMetrics m = error_metrics(st, curve, p, ErrorMapping::ComputedCurve);
    CHECK(m.err_t == Catch::Approx(4.85e-4).epsilon(0.25));
}

TEST_CASE("flat data: the steady interface stays flat to solver tolerance") {
    PorousParams p;
    p.flux_sin = Rational(0);
    RunConfig cfg;
    cfg.n = 8;
    cfg.dt = 0.2;
    cfg.t_end = 4.0;
    cfg.choice = ResidualChoice::Dirichlet;
    cfg.params = p;
    RunReport rep = run_to_steady(cfg);
    CHECK_FALSE(rep.diverged);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(rep.h[i] - 1.0) < 1e-9);
}

TEST_CASE("run report on a small dirichlet run") {
    RunConfig cfg;
    cfg.n = 10;
    cfg.dt = 0.2;
    cfg.t_end = 24.0;
    cfg.choice = ResidualChoice::Dirichlet;
    RunReport rep = run_to_steady(cfg);
    CHECK(rep.converged);
    CHECK_FALSE(rep.diverged);
    CHECK(rep.steps_taken == 120);
    CHECK(rep.trace.size() == 121);
    CHECK(rep.errors.err_inf == Catch::Approx(3.9191e-3).epsilon(0.01));
    CHECK(rep.errors.err_s < 1e-4);
    // residual decays monotonically after the first few steps, down to the
    // linear-solver noise floor
    for (size_t k = 5; k < rep.trace.size(); ++k) {
        if (rep.trace[k].max_residual < 1e-11) break;
        CHECK(rep.trace[k].max_residual <= rep.trace[k - 1].max_residual * (1.0 + 1e-9));
    }
}

TEST_CASE("early stop on the residual tolerance") {
    RunConfig cfg;
    cfg.n = 8;
    cfg.dt = 0.2;
    cfg.t_end = 24.0;
    cfg.stop_tolerance = 1e-6;
    RunReport rep = run_to_steady(cfg);
    CHECK(rep.converged);
    CHECK(rep.final_residual <= 1e-6);
    CHECK(rep.steps_taken < 120);
}

TEST_CASE("unstable time step reports divergence instead of crashing") {
    RunConfig cfg;
    cfg.n = 20;
    cfg.dt = 0.12;
    cfg.t_end = 24.0;
    cfg.choice = ResidualChoice::Neumann;
    RunReport rep = run_to_steady(cfg);
    CHECK(rep.diverged);
    CHECK_FALSE(rep.converged);
    CHECK(rep.failure_step >= 0);
}
