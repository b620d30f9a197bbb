#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fbl/interface_system.hpp"

namespace fbl {

// Perturbation ansatz metadata. The spectral variable s means |alpha| in 2-D
// and sqrt(alpha^2 + beta^2) in 3-D; all polynomials below are identical in
// the two modes, only the reading of s changes.
struct SpectralMode {
    int dimension = 2;
    static SpectralMode d2() { return {2}; }
    static SpectralMode d3() { return {3}; }
    const char* symbol() const { return dimension == 2 ? "|alpha|" : "sqrt(alpha^2+beta^2)"; }
};

// The 8x4 mode matrix: decaying separable solutions have normal derivative
// -s (upper domain) or +s (lower domain); values are the identity block.
inline PolyMatrix build_M(const SpectralMode& mode) {
    (void)mode;  // same structure in 2-D and 3-D
    PolyMatrix m(8, 4);
    const Rational kSigns[4] = {Rational(-1), Rational(1), Rational(-1), Rational(1)};
    for (int j = 0; j < 4; ++j) {
        m.at(j, j) = Poly::monomial(kSigns[j], 1);
        m.at(4 + j, j) = Poly::one();
    }
    return m;
}

// Left nullspace vector w of GM, normalized: common polynomial content
// divided out, then scaled so the last nonzero entry is 1 when that entry is
// a constant (it is, for systems with a pure Neumann row last).
inline std::array<Poly, 5> left_null_w(const InterfaceSystem& sys, const SpectralMode& mode) {
    validate(sys);
    PolyMatrix gm = to_poly(sys.G) * build_M(mode);
    auto rows = left_nullspace_basis(gm);
    if (rows.empty()) throw DegenerateGMError();
    std::vector<Poly>& w = rows[0];

    Poly content;
    for (const Poly& p : w)
        if (!p.is_zero()) content = content.is_zero() ? p : Poly::gcd(content, p);
    if (content.degree() > 0)
        for (Poly& p : w) p = p.is_zero() ? Poly() : Poly::divide_exact(p, content);

    int last = 4;
    while (last >= 0 && w[static_cast<size_t>(last)].is_zero()) --last;
    if (last >= 0) {
        const Poly& anchor = w[static_cast<size_t>(last)];
        Rational scale = anchor.degree() == 0 ? Rational(1) / anchor.coeff(0)
                                              : Rational(1) / anchor.leading();
        for (Poly& p : w) p = scale * p;
    }
    return {w[0], w[1], w[2], w[3], w[4]};
}

// The scalar well-posedness form w^T G U0n as an exact polynomial in s.
// Nonvanishing for s > 0 means the linearized problem is solvable for every
// forcing; a positive root is an ill-posed wavenumber.
struct WellPosednessForm {
    Poly poly;
    BaseState base;
    bool identically_zero() const { return poly.is_zero(); }
    bool has_positive_root() const { return count_positive_roots(poly) > 0; }
    bool well_posed() const { return !identically_zero() && !has_positive_root(); }
};

inline Poly form_polynomial(const InterfaceSystem& sys, const std::array<Poly, 5>& w,
                            const BaseState& base) {
    Poly acc;
    for (int i = 0; i < 5; ++i) {
        Rational gi(0);
        for (int j = 0; j < 8; ++j) gi += sys.G.at(i, j) * base.U0n[static_cast<size_t>(j)];
        acc += gi * w[static_cast<size_t>(i)];
    }
    return acc;
}

inline WellPosednessForm wellposedness_form(const InterfaceSystem& sys, const std::array<Rational, 3>& q,
                                            const SpectralMode& mode) {
    WellPosednessForm out;
    out.base = base_solution(sys, q);
    out.poly = form_polynomial(sys, left_null_w(sys, mode), out.base);
    return out;
}

// A linear combination of interface-condition residuals used as the normal
// velocity of the interface.
struct VelocityChoice {
    std::array<Rational, 5> v{};
    std::string label;
    static VelocityChoice unit(int k) {
        VelocityChoice c;
        c.v[static_cast<size_t>(k)] = 1;
        c.label = "e" + std::to_string(k + 1);
        return c;
    }
    bool is_zero() const {
        return std::all_of(v.begin(), v.end(), [](const Rational& r) { return r == 0; });
    }
};

inline std::vector<VelocityChoice> unit_velocities() {
    std::vector<VelocityChoice> all;
    for (int k = 0; k < 5; ++k) all.push_back(VelocityChoice::unit(k));
    return all;
}

enum class SignClass { Negative, Positive, SignChanging, Zero };

inline const char* to_string(SignClass s) {
    switch (s) {
        case SignClass::Negative: return "negative";
        case SignClass::Positive: return "positive";
        case SignClass::SignChanging: return "sign-changing";
        case SignClass::Zero: return "zero";
    }
    return "?";
}

// lambda(s) = (w^T G U0n) / (w^T v) as an exact rational function, reduced
// and normalized so the denominator is monic. growth_order > 0 means the
// iteration stiffens as the wavenumber grows; growth_order <= 0 with a
// negative sign is the mesh-independent regime.
struct StiffnessProfile {
    Poly numerator;
    Poly denominator = Poly::one();
    int growth_order = 0;
    SignClass sign = SignClass::Zero;

    std::optional<Rational> value_at(const Rational& s) const {
        Rational den = denominator.eval(s);
        if (den == 0) return std::nullopt;
        return numerator.eval(s) / den;
    }
};

inline StiffnessProfile stiffness(const InterfaceSystem& sys, const std::array<Rational, 3>& q,
                                  const VelocityChoice& v, const SpectralMode& mode) {
    if (v.is_zero()) throw InvalidVelocityError();
    auto w = left_null_w(sys, mode);
    Poly den;
    for (int i = 0; i < 5; ++i) den += v.v[static_cast<size_t>(i)] * w[static_cast<size_t>(i)];
    if (den.is_zero()) throw InvalidVelocityError();
    Poly num = form_polynomial(sys, w, base_solution(sys, q));

    if (!num.is_zero()) {
        Poly g = Poly::gcd(num, den);
        if (g.degree() > 0) {
            num = Poly::divide_exact(num, g);
            den = Poly::divide_exact(den, g);
        }
    }
    Rational lead = den.leading();
    StiffnessProfile prof;
    prof.numerator = (Rational(1) / lead) * num;
    prof.denominator = (Rational(1) / lead) * den;
    if (num.is_zero()) {
        prof.growth_order = 0;
        prof.sign = SignClass::Zero;
        return prof;
    }
    prof.growth_order = prof.numerator.degree() - prof.denominator.degree();
    int sgn = constant_sign_on_positive_axis(prof.numerator * prof.denominator);
    prof.sign = sgn > 0 ? SignClass::Positive : sgn < 0 ? SignClass::Negative : SignClass::SignChanging;
    return prof;
}

enum class VelocityCategory { StableBounded, StableStiff, Unstable, Degenerate };

inline const char* to_string(VelocityCategory c) {
    switch (c) {
        case VelocityCategory::StableBounded: return "stable-bounded";
        case VelocityCategory::StableStiff: return "stable-stiff";
        case VelocityCategory::Unstable: return "unstable";
        case VelocityCategory::Degenerate: return "degenerate";
    }
    return "?";
}

struct VelocityReportEntry {
    VelocityChoice velocity;
    VelocityCategory category = VelocityCategory::Degenerate;
    std::optional<StiffnessProfile> profile;  // absent for degenerate candidates
    double lambda_at_one = std::numeric_limits<double>::quiet_NaN();
};

struct VelocityRanking {
    std::vector<VelocityReportEntry> entries;  // best first
    bool ill_posed_base = false;               // the well-posedness form vanished identically
    WellPosednessForm form;
};

// Partition candidates into stable-bounded / stable-stiff / unstable and
// order each group by growth order, then |lambda(1)|.
inline VelocityRanking rank_velocities(const InterfaceSystem& sys, const std::array<Rational, 3>& q,
                                       const std::vector<VelocityChoice>& candidates,
                                       const SpectralMode& mode) {
    VelocityRanking ranking;
    ranking.form = wellposedness_form(sys, q, mode);
    ranking.ill_posed_base = ranking.form.identically_zero();

    int degenerate = 0;
    for (const VelocityChoice& v : candidates) {
        VelocityReportEntry entry;
        entry.velocity = v;
        try {
            StiffnessProfile prof = stiffness(sys, q, v, mode);
            entry.profile = prof;
            if (prof.sign == SignClass::Negative)
                entry.category = prof.growth_order >= 1 ? VelocityCategory::StableStiff
                                                        : VelocityCategory::StableBounded;
            else
                entry.category = VelocityCategory::Unstable;
            auto val = prof.value_at(Rational(1));
            entry.lambda_at_one = val ? to_double(*val) : std::numeric_limits<double>::infinity();
        } catch (const InvalidVelocityError&) {
            entry.category = VelocityCategory::Degenerate;
            ++degenerate;
        }
        ranking.entries.push_back(std::move(entry));
    }
    if (degenerate == static_cast<int>(candidates.size())) throw AllDegenerateError();

    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const VelocityReportEntry& a, const VelocityReportEntry& b) {
                         if (a.category != b.category) return a.category < b.category;
                         int ga = a.profile ? a.profile->growth_order : std::numeric_limits<int>::max();
                         int gb = b.profile ? b.profile->growth_order : std::numeric_limits<int>::max();
                         if (ga != gb) return ga < gb;
                         double la = std::abs(a.lambda_at_one), lb = std::abs(b.lambda_at_one);
                         if (la != lb) return la < lb;
                         return a.velocity.label < b.velocity.label;
                     });
    return ranking;
}

}  // namespace fbl
