#pragma once

#include <cmath>

#include "fbl/interface_system.hpp"

namespace fbl {

// Simplified two-phase porous-media model: vapour pressure P and temperature
// T+ above the interface, temperature T- and liquid saturation s below, all
// harmonic, coupled by five interface conditions. The top heat flux datum is
// f1(x) = flux_mean + flux_sin * sin(x).
struct PorousParams {
    Rational K_plus = Rational(1);
    Rational K_minus = Rational(1);
    Rational L = Rational(2);        // domain height; x runs over [0, 2*pi)
    Rational T0 = Rational(10);      // bottom temperature
    Rational flux_mean = Rational(2);
    Rational flux_sin = make_rational(1, 2);

    double flux_at(double x) const { return to_double(flux_mean) + to_double(flux_sin) * std::sin(x); }
};

inline void validate(const PorousParams& p) {
    if (p.K_plus <= 0 || p.K_minus <= 0) throw ParamMismatchError("conductivities must be positive");
    if (p.L <= 0) throw ParamMismatchError("domain height must be positive");
}

// Interface conditions in matrix form, U~ = (T+_n, T-_n, P_n, s_n, T+, T-, P, s):
//   s = 0, [T] = 0, T- = P, K+ T+_n - K- T-_n + s_n = 0, -T-_n + P_n - s_n = 0.
// The data vector b is zero.
inline InterfaceSystem build_porous_system(const PorousParams& p) {
    validate(p);
    const Rational z(0), one(1);
    return make_system({
        {z, z, z, z, z, z, z, one},
        {z, z, z, z, one, -one, z, z},
        {z, z, z, z, z, one, -one, z},
        {p.K_plus, -p.K_minus, z, one, z, z, z, z},
        {z, -one, one, -one, z, z, z, z},
    });
}

struct FlatBaseState {
    Rational y0;  // flat interface height
    BaseState base;
};

// One-dimensional flat steady state: s falls linearly from 1 at the bottom to
// 0 at y0, P is constant, the temperature slopes balance the interface flux
// conditions against the mean top flux. The global fluxes q are recovered by
// expanding the resulting U0 in the kernel basis of G, never hard-coded.
inline FlatBaseState flat_base_state(const PorousParams& p) {
    validate(p);
    if (p.flux_mean <= 0) throw NoFlatStateError("mean top flux must be positive for a flat steady interface");
    Rational y0 = (Rational(1) + p.K_minus) / p.flux_mean;
    if (y0 >= p.L) throw NoFlatStateError("implied flat interface height " + to_string(y0) + " is not inside (0, L)");

    Rational t_interface = p.T0 + 1;
    Rational slope_minus = Rational(1) / y0;            // T-_y
    std::vector<Rational> u0 = {
        p.flux_mean / p.K_plus,  // T+_n
        slope_minus,             // T-_n
        Rational(0),             // P_n
        -slope_minus,            // s_n
        t_interface, t_interface, t_interface, Rational(0)};

    InterfaceSystem sys = build_porous_system(p);
    RationalMatrix basis = nullspace_of_G(sys);
    auto coords = solve_particular(basis, u0);
    if (!coords) throw NoFlatStateError("flat profile does not lie in the kernel of G");

    FlatBaseState flat;
    flat.y0 = y0;
    flat.base = base_solution(sys, {(*coords)[0], (*coords)[1], (*coords)[2]});
    if (flat.base.U0 != u0) throw NoFlatStateError("flat profile expansion is inconsistent");
    return flat;
}

struct FieldValues {
    double t_plus;
    double p;
    double t_minus;
    double s;
};

namespace detail {
inline void require_equal_conductivities(const PorousParams& p) {
    if (p.K_plus != p.K_minus)
        throw ParamMismatchError("closed-form solution exists only for K+ = K-");
}
// Piecewise harmonic pair: U = {K T+ above; K T- - s below},
// V = {P above; T- + s below}. With the sinusoidal top flux,
//   U = K T0 - 1 + fm*y + fs*sin(x)*sinh(y)/cosh(L),  V = T0 + 1.
inline double harmonic_u(double x, double y, const PorousParams& p) {
    return to_double(p.K_plus * p.T0 - 1) + to_double(p.flux_mean) * y +
           to_double(p.flux_sin) * std::sin(x) * std::sinh(y) / std::cosh(to_double(p.L));
}
inline double harmonic_u_y(double x, double y, const PorousParams& p) {
    return to_double(p.flux_mean) +
           to_double(p.flux_sin) * std::sin(x) * std::cosh(y) / std::cosh(to_double(p.L));
}
inline double harmonic_u_x(double x, double y, const PorousParams& p) {
    return to_double(p.flux_sin) * std::cos(x) * std::sinh(y) / std::cosh(to_double(p.L));
}
}  // namespace detail

// Closed-form steady solution (requires K+ = K-). The upper expressions are
// meaningful above the interface, the lower ones below, but each extends
// harmonically to the whole strip.
inline FieldValues exact_fields(double x, double y, const PorousParams& p) {
    detail::require_equal_conductivities(p);
    double K = to_double(p.K_plus);
    double U = detail::harmonic_u(x, y, p);
    double V = to_double(p.T0 + 1);
    FieldValues f{};
    f.t_plus = U / K;
    f.p = V;
    f.t_minus = (U + V) / (K + 1.0);
    f.s = (K * V - U) / (K + 1.0);
    return f;
}

// Gradients of the four closed-form fields (for residual checks).
struct FieldGradients {
    double t_plus_x, t_plus_y;
    double p_x, p_y;
    double t_minus_x, t_minus_y;
    double s_x, s_y;
};

inline FieldGradients exact_field_gradients(double x, double y, const PorousParams& p) {
    detail::require_equal_conductivities(p);
    double K = to_double(p.K_plus);
    double Ux = detail::harmonic_u_x(x, y, p), Uy = detail::harmonic_u_y(x, y, p);
    FieldGradients g{};
    g.t_plus_x = Ux / K;
    g.t_plus_y = Uy / K;
    g.p_x = 0.0;
    g.p_y = 0.0;
    g.t_minus_x = Ux / (K + 1.0);
    g.t_minus_y = Uy / (K + 1.0);
    g.s_x = -Ux / (K + 1.0);
    g.s_y = -Uy / (K + 1.0);
    return g;
}

// Residual of the s = 0 relation in the paper-normalized form
// (K+1 - fm*y) * 2 cosh(L) - 2 fs sin(x) sinh(y); for the reference data this
// is 4(1-y)cosh(L) - sin(x)sinh(y).
inline double interface_relation(double x, double y, const PorousParams& p) {
    double K = to_double(p.K_plus);
    return (K + 1.0 - to_double(p.flux_mean) * y) * 2.0 * std::cosh(to_double(p.L)) -
           2.0 * to_double(p.flux_sin) * std::sin(x) * std::sinh(y);
}

// Height of the exact interface at abscissa x, by safeguarded bisection of
// the transcendental relation on (0, L). tol bounds the relation residual.
inline double exact_interface(double x, const PorousParams& p, double tol = 1e-12) {
    detail::require_equal_conductivities(p);
    if (tol <= 0) throw ParamMismatchError("tolerance must be positive");
    double lo = 0.0, hi = to_double(p.L);
    double flo = interface_relation(x, lo, p), fhi = interface_relation(x, hi, p);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw BracketFailureError("no sign change of the interface relation on (0, L)");
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        double fm = interface_relation(x, mid, p);
        if (std::abs(fm) <= tol) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-17 * (1.0 + mid)) break;
    }
    double fm = interface_relation(x, mid, p);
    if (std::abs(fm) <= tol) return mid;
    throw BracketFailureError("bisection stalled above tolerance");
}

// dy/dx of the exact interface by implicit differentiation of the relation.
inline double exact_interface_slope(double x, const PorousParams& p) {
    double y = exact_interface(x, p);
    double L = to_double(p.L);
    double fs = to_double(p.flux_sin);
    double fx = -2.0 * fs * std::cos(x) * std::sinh(y);
    double fy = -to_double(p.flux_mean) * 2.0 * std::cosh(L) - 2.0 * fs * std::sin(x) * std::cosh(y);
    return -fx / fy;
}

}  // namespace fbl
