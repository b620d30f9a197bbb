#pragma once

#include <Eigen/Sparse>

#include <vector>

#include "fbl/porous.hpp"
#include "fbl/solver/curve.hpp"

namespace fbl {

// Which interface condition is left unenforced and used as the velocity:
// Neumann leaves the mass-conservation residual P_n - T-_n - s_n (the
// physical velocity), Dirichlet leaves the saturation value s.
enum class ResidualChoice { Neumann, Dirichlet };

inline const char* to_string(ResidualChoice c) {
    return c == ResidualChoice::Neumann ? "neumann" : "dirichlet";
}

enum class Field { TPlus = 0, P = 1, TMinus = 2, S = 3 };
enum class Side { Upper, Lower };

// Both mapped rectangles are discretized with N x N nodes: x_i = i*dx
// (periodic, dx = 2*pi/N) and N rows including the interface row. Upper
// rows run y1 in [1,2] with j = 0 on the interface; lower rows run
// y2 in [0,1] with j = N-1 on the interface.
struct GridLayout {
    int n;
    double domain_height;

    double dx() const { return 2.0 * std::numbers::pi / n; }
    double dy() const { return 1.0 / (n - 1); }
    double x(int i) const { return i * dx(); }
    double y1(int j) const { return 1.0 + j * dy(); }
    double y2(int j) const { return j * dy(); }
    int wrap(int i) const { return (i % n + n) % n; }
    int index(Field f, int i, int j) const { return (static_cast<int>(f) * n + j) * n + wrap(i); }
    int total() const { return 4 * n * n; }

    // physical y of a node, given the interface curve
    double physical_y(Side side, double h, int j) const {
        if (side == Side::Lower) return y2(j) * h;
        return h + (y1(j) - 1.0) * (domain_height - h);
    }
};

// Coefficients of the mapped Laplacian
//   cyy u_yy + cxx u_xx + cxy u_xy + cy u_y = 0
// in mapped coordinates, at mapped ordinate y1 or y2. These are the
// curvilinear forms of the Laplace operator under
//   upper: y1 = 1 + (y - h)/(L - h),   lower: y2 = y/h.
struct StencilCoeffs {
    double cyy, cxx, cxy, cy;
};

inline StencilCoeffs mapped_operator_coeffs(Side side, double h, double hp, double hpp, double L,
                                            double y_mapped, double eps) {
    StencilCoeffs c{};
    c.cxx = 1.0;
    if (side == Side::Lower) {
        if (h <= eps) throw MappingSingularError("lower subdomain collapsed");
        double y2 = y_mapped;
        c.cyy = (1.0 + hp * hp * y2 * y2) / (h * h);
        c.cxy = -2.0 * y2 * hp / h;
        c.cy = (2.0 * hp * hp - hpp * h) / (h * h) * y2;
    } else {
        double lmh = L - h;
        if (lmh <= eps) throw MappingSingularError("upper subdomain collapsed");
        double w = 2.0 - y_mapped;
        c.cyy = (1.0 + hp * hp * w * w) / (lmh * lmh);
        c.cxy = -2.0 * w * hp / lmh;
        c.cy = -(2.0 * hp * hp + hpp * lmh) / (lmh * lmh) * w;
    }
    return c;
}

// Stencil coefficients for every node of one side, evaluated from the curve
// samples. Row-major over (j, i), matching the assembly loops.
inline std::vector<StencilCoeffs> build_mapped_operator(const InterfaceCurve& curve,
                                                        const GridLayout& grid, Side side) {
    std::vector<StencilCoeffs> coeffs;
    coeffs.reserve(static_cast<size_t>(grid.n) * grid.n);
    for (int j = 0; j < grid.n; ++j)
        for (int i = 0; i < grid.n; ++i) {
            double y = side == Side::Lower ? grid.y2(j) : grid.y1(j);
            coeffs.push_back(mapped_operator_coeffs(side, curve.h()[i], curve.hp()[i], curve.hpp()[i],
                                                    grid.domain_height, y, curve.collapse_margin()));
        }
    return coeffs;
}

struct LinearSystem {
    Eigen::SparseMatrix<double> A;
    Eigen::VectorXd rhs;
    GridLayout grid;
};

namespace detail {

using Triplet = Eigen::Triplet<double>;

// Normal-direction derivative (-h', 1) . grad at the interface row, written
// in mapped coordinates: a central tangential part and a three-point
// one-sided part in the mapped normal coordinate, scaled by the metric.
inline void add_interface_normal_derivative(std::vector<Triplet>& trip, int row, const GridLayout& g,
                                            Field f, int i, double hp, double metric, double weight) {
    const double dx = g.dx(), dy = g.dy();
    const bool lower = (f == Field::TMinus || f == Field::S);
    const int jif = lower ? g.n - 1 : 0;
    // -h' * u_x (central along the interface row)
    trip.emplace_back(row, g.index(f, i + 1, jif), weight * (-hp) / (2.0 * dx));
    trip.emplace_back(row, g.index(f, i - 1, jif), weight * hp / (2.0 * dx));
    // (1 + h'^2) / (h or L-h) * u_eta, one-sided into the domain
    double c = weight * metric / (2.0 * dy);
    if (lower) {
        trip.emplace_back(row, g.index(f, i, g.n - 1), 3.0 * c);
        trip.emplace_back(row, g.index(f, i, g.n - 2), -4.0 * c);
        trip.emplace_back(row, g.index(f, i, g.n - 3), c);
    } else {
        trip.emplace_back(row, g.index(f, i, 0), -3.0 * c);
        trip.emplace_back(row, g.index(f, i, 1), 4.0 * c);
        trip.emplace_back(row, g.index(f, i, 2), -c);
    }
}

inline void add_interior_stencil(std::vector<Triplet>& trip, const GridLayout& g, Field f, int i,
                                 int j, const StencilCoeffs& c) {
    const double dx = g.dx(), dy = g.dy();
    const int row = g.index(f, i, j);
    const double ayy = c.cyy / (dy * dy);
    const double axx = c.cxx / (dx * dx);
    const double axy = c.cxy / (4.0 * dx * dy);
    const double ay = c.cy / (2.0 * dy);
    trip.emplace_back(row, g.index(f, i, j), -2.0 * ayy - 2.0 * axx);
    trip.emplace_back(row, g.index(f, i, j + 1), ayy + ay);
    trip.emplace_back(row, g.index(f, i, j - 1), ayy - ay);
    trip.emplace_back(row, g.index(f, i + 1, j), axx);
    trip.emplace_back(row, g.index(f, i - 1, j), axx);
    if (axy != 0.0) {
        trip.emplace_back(row, g.index(f, i + 1, j + 1), axy);
        trip.emplace_back(row, g.index(f, i - 1, j + 1), -axy);
        trip.emplace_back(row, g.index(f, i + 1, j - 1), -axy);
        trip.emplace_back(row, g.index(f, i - 1, j - 1), axy);
    }
}

}  // namespace detail

// Assemble the 4N^2 x 4N^2 fixed-boundary system for the current interface:
// mapped Laplacians in both rectangles, periodic in x, outer data rows
// (s = 1 and T- = T0 at the bottom, P_n = 0 and K+ T+_n = f1 at the top),
// and the four enforced interface conditions per x node. The unenforced
// condition (per the residual choice) never appears as a row.
inline LinearSystem assemble(const PorousParams& params, const InterfaceCurve& curve,
                             ResidualChoice choice) {
    const GridLayout g{curve.size(), curve.domain_height()};
    const int n = g.n;
    const double dy = g.dy();
    const double Kp = to_double(params.K_plus), Km = to_double(params.K_minus);
    const double L = g.domain_height;

    auto upper = build_mapped_operator(curve, g, Side::Upper);
    auto lower = build_mapped_operator(curve, g, Side::Lower);

    std::vector<detail::Triplet> trip;
    trip.reserve(static_cast<size_t>(g.total()) * 9);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.total());

    for (int i = 0; i < n; ++i) {
        const double h = curve.h()[i], hp = curve.hp()[i];
        const double lmh = L - h;
        const double metric_up = (1.0 + hp * hp) / lmh;
        const double metric_lo = (1.0 + hp * hp) / h;

        // interior rows
        for (int j = 1; j < n - 1; ++j) {
            detail::add_interior_stencil(trip, g, Field::TPlus, i, j, upper[static_cast<size_t>(j * n + i)]);
            detail::add_interior_stencil(trip, g, Field::P, i, j, upper[static_cast<size_t>(j * n + i)]);
            detail::add_interior_stencil(trip, g, Field::TMinus, i, j, lower[static_cast<size_t>(j * n + i)]);
            detail::add_interior_stencil(trip, g, Field::S, i, j, lower[static_cast<size_t>(j * n + i)]);
        }

        // bottom of the lower rectangle: saturated, reference temperature
        int row = g.index(Field::TMinus, i, 0);
        trip.emplace_back(row, row, 1.0);
        rhs[row] = to_double(params.T0);
        row = g.index(Field::S, i, 0);
        trip.emplace_back(row, row, 1.0);
        rhs[row] = 1.0;

        // top of the upper rectangle: given heat flux, impenetrable to vapour
        {
            const double c = 1.0 / (lmh * 2.0 * dy);
            row = g.index(Field::TPlus, i, n - 1);
            trip.emplace_back(row, g.index(Field::TPlus, i, n - 1), Kp * 3.0 * c);
            trip.emplace_back(row, g.index(Field::TPlus, i, n - 2), -Kp * 4.0 * c);
            trip.emplace_back(row, g.index(Field::TPlus, i, n - 3), Kp * c);
            rhs[row] = params.flux_at(g.x(i));
            row = g.index(Field::P, i, n - 1);
            trip.emplace_back(row, g.index(Field::P, i, n - 1), 3.0 * c);
            trip.emplace_back(row, g.index(Field::P, i, n - 2), -4.0 * c);
            trip.emplace_back(row, g.index(Field::P, i, n - 3), c);
        }

        // interface rows: [T] = 0 on the T+ slot, T- = P on the P slot,
        // the heat-flux jump on the T- slot; the s slot carries s = 0
        // (Neumann velocity) or the mass-conservation condition (Dirichlet
        // velocity).
        row = g.index(Field::TPlus, i, 0);
        trip.emplace_back(row, g.index(Field::TPlus, i, 0), 1.0);
        trip.emplace_back(row, g.index(Field::TMinus, i, n - 1), -1.0);

        row = g.index(Field::P, i, 0);
        trip.emplace_back(row, g.index(Field::P, i, 0), 1.0);
        trip.emplace_back(row, g.index(Field::TMinus, i, n - 1), -1.0);

        row = g.index(Field::TMinus, i, n - 1);
        detail::add_interface_normal_derivative(trip, row, g, Field::TPlus, i, hp, metric_up, Kp);
        detail::add_interface_normal_derivative(trip, row, g, Field::TMinus, i, hp, metric_lo, -Km);
        detail::add_interface_normal_derivative(trip, row, g, Field::S, i, hp, metric_lo, 1.0);

        row = g.index(Field::S, i, n - 1);
        if (choice == ResidualChoice::Neumann) {
            trip.emplace_back(row, row, 1.0);  // s = 0
        } else {
            detail::add_interface_normal_derivative(trip, row, g, Field::P, i, hp, metric_up, 1.0);
            detail::add_interface_normal_derivative(trip, row, g, Field::TMinus, i, hp, metric_lo, -1.0);
            detail::add_interface_normal_derivative(trip, row, g, Field::S, i, hp, metric_lo, -1.0);
        }
    }

    LinearSystem sys{Eigen::SparseMatrix<double>(g.total(), g.total()), std::move(rhs), g};
    sys.A.setFromTriplets(trip.begin(), trip.end());
    sys.A.makeCompressed();
    return sys;
}

}  // namespace fbl
