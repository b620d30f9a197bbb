#pragma once

#include <array>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "fbl/exact_matrix.hpp"

namespace fbl {

// Variable ordering of the interface vector U~: normal derivatives of the two
// fields on each side, then their values. Columns 0-3 form the Neumann block,
// columns 4-7 the Dirichlet block.
inline const std::array<const char*, 8>& variable_labels() {
    static const std::array<const char*, 8> kLabels = {"u+_n", "u-_n", "p+_n", "p-_n",
                                                       "u+",   "u-",   "p+",   "p-"};
    return kLabels;
}

// Column priority used for kernel bases and particular solutions: solve for
// the upper-domain variables first, so the free parameters (the global
// fluxes q) are the lower-domain quantities.
inline const std::vector<int>& upper_first_column_order() {
    static const std::vector<int> kOrder = {0, 2, 4, 6, 1, 3, 5, 7};
    return kOrder;
}

// A "2+2" interface-condition system G U~ = b with G 5x8.
struct InterfaceSystem {
    RationalMatrix G{5, 8};
    std::vector<Rational> b = std::vector<Rational>(5, Rational(0));

    RationalMatrix neumann_block() const { return block(0); }
    RationalMatrix dirichlet_block() const { return block(4); }

  private:
    RationalMatrix block(int col0) const {
        RationalMatrix m(5, 4);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 4; ++j) m.at(i, j) = G.at(i, col0 + j);
        return m;
    }
};

inline InterfaceSystem make_system(const std::vector<std::vector<Rational>>& rows,
                                   const std::vector<Rational>& b = std::vector<Rational>(5, Rational(0))) {
    if (rows.size() != 5 || b.size() != 5) throw DimensionMismatchError("interface system must be 5x8 with a 5-vector b");
    InterfaceSystem sys;
    for (int i = 0; i < 5; ++i) {
        if (rows[static_cast<size_t>(i)].size() != 8)
            throw DimensionMismatchError("interface system must be 5x8 with a 5-vector b");
        for (int j = 0; j < 8; ++j) sys.G.at(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    sys.b = b;
    return sys;
}

// Plain-text format: five rows of eight rationals, then one row of five
// rationals for b. '#' starts a comment.
inline InterfaceSystem read_system(std::istream& in) {
    std::vector<Rational> values;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) values.push_back(parse_rational(tok));
    }
    if (values.size() != 45)
        throw ParseError("expected 45 rationals (5x8 matrix then 5-vector b), got " +
                         std::to_string(values.size()));
    InterfaceSystem sys;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 8; ++j) sys.G.at(i, j) = values[static_cast<size_t>(i * 8 + j)];
    for (int i = 0; i < 5; ++i) sys.b[static_cast<size_t>(i)] = values[static_cast<size_t>(40 + i)];
    return sys;
}

inline InterfaceSystem read_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open interface system file: " + path);
    return read_system(in);
}

inline void validate(const InterfaceSystem& sys) {
    int r = rank(sys.G);
    if (r != 5) throw RankDeficientError(r);
}

// Classification by the rank r of the Neumann block: r = 4,3,2,1 gives
// classes A,B,C,D. The pure-condition counts follow from the ranks, never
// from the normal-form procedure, so the two can cross-check each other.
struct ClassReport {
    char label = '?';
    int rank_gn = 0;
    int rank_gd = 0;
    int pure_dirichlet = 0;  // 5 - rank_gn
    int pure_neumann = 0;    // 5 - rank_gd
    bool tilde = false;
};

inline ClassReport classify(const InterfaceSystem& sys) {
    validate(sys);
    ClassReport rep;
    rep.rank_gn = rank(sys.neumann_block());
    rep.rank_gd = rank(sys.dirichlet_block());
    rep.pure_dirichlet = 5 - rep.rank_gn;
    rep.pure_neumann = 5 - rep.rank_gd;
    switch (rep.rank_gn) {
        case 4: rep.label = 'A'; break;
        case 3: rep.label = 'B'; break;
        case 2: rep.label = 'C'; break;
        case 1: rep.label = 'D'; break;
        default:
            throw DimensionMismatchError("rank of Neumann block outside 1..4 for a valid system");
    }
    rep.tilde = (rep.label == 'A' && rep.pure_neumann == 4) ||
                (rep.label == 'B' && rep.pure_neumann == 3) ||
                (rep.label == 'C' && rep.pure_neumann == 2);
    return rep;
}

struct NormalForm {
    InterfaceSystem canonical;
    std::vector<RowOp> op_log;
};

// Canonical representative under row operations: the reduced row-echelon form
// of G (same ops applied to b). Rows whose pivot lies in the Neumann block
// come first; the pure Dirichlet rows sink to the bottom with leading ones in
// the Dirichlet block. Column operations are available separately (below) but
// are not applied here; the fixed pass order keeps the result reproducible.
inline NormalForm normal_form(const InterfaceSystem& sys) {
    validate(sys);
    NormalForm nf;
    nf.canonical.b = sys.b;
    std::vector<RowOp> log;
    RrefResult r = rref(sys.G, &log);
    nf.canonical.G = std::move(r.reduced);
    for (const RowOp& op : log) {
        // replay on b
        switch (op.kind) {
            case RowOp::Kind::Swap:
                std::swap(nf.canonical.b[static_cast<size_t>(op.i)], nf.canonical.b[static_cast<size_t>(op.j)]);
                break;
            case RowOp::Kind::Scale:
                nf.canonical.b[static_cast<size_t>(op.i)] *= op.factor;
                break;
            case RowOp::Kind::Axpy:
                nf.canonical.b[static_cast<size_t>(op.i)] += op.factor * nf.canonical.b[static_cast<size_t>(op.j)];
                break;
        }
    }
    nf.op_log = std::move(log);
    return nf;
}

// The four allowed interface-system transformations (tests replay these to
// check that classification is invariant).

// Relabel the two subdomains: swap columns (0,1), (2,3), (4,5), (6,7) and
// flip the sign of the Neumann block.
inline InterfaceSystem relabel_domains(const InterfaceSystem& sys) {
    InterfaceSystem out = sys;
    for (int i = 0; i < 5; ++i) {
        for (int p = 0; p < 8; p += 2) std::swap(out.G.at(i, p), out.G.at(i, p + 1));
        for (int j = 0; j < 4; ++j) out.G.at(i, j) = -out.G.at(i, j);
    }
    return out;
}

namespace detail {
inline void paired_axpy(InterfaceSystem& sys, int dst, int src, const Rational& t) {
    for (int i = 0; i < 5; ++i) {
        sys.G.at(i, dst) += t * sys.G.at(i, src);
        sys.G.at(i, dst + 4) += t * sys.G.at(i, src + 4);
    }
}
inline void paired_scale(InterfaceSystem& sys, int col, const Rational& r) {
    for (int i = 0; i < 5; ++i) {
        sys.G.at(i, col) *= r;
        sys.G.at(i, col + 4) *= r;
    }
}
inline void paired_swap(InterfaceSystem& sys, int a, int b) {
    for (int i = 0; i < 5; ++i) {
        std::swap(sys.G.at(i, a), sys.G.at(i, b));
        std::swap(sys.G.at(i, a + 4), sys.G.at(i, b + 4));
    }
}
}  // namespace detail

// Linear recombination of the unknowns in D+ (columns 0,2 with the identical
// operation on 4,6) or in D- (columns 1,3 and 5,7).
inline InterfaceSystem mix_upper_unknowns(const InterfaceSystem& sys, const Rational& t, bool swap_pair,
                                          const Rational& scale = Rational(1)) {
    InterfaceSystem out = sys;
    if (swap_pair) detail::paired_swap(out, 0, 2);
    if (t != 0) detail::paired_axpy(out, 0, 2, t);
    if (scale != 1) detail::paired_scale(out, 0, scale);
    return out;
}
inline InterfaceSystem mix_lower_unknowns(const InterfaceSystem& sys, const Rational& t, bool swap_pair,
                                          const Rational& scale = Rational(1)) {
    InterfaceSystem out = sys;
    if (swap_pair) detail::paired_swap(out, 1, 3);
    if (t != 0) detail::paired_axpy(out, 1, 3, t);
    if (scale != 1) detail::paired_scale(out, 1, scale);
    return out;
}

// Left-multiply by an invertible row mix, acting on b as well.
inline InterfaceSystem mix_rows(const InterfaceSystem& sys, const RationalMatrix& e) {
    InterfaceSystem out;
    out.G = e * sys.G;
    RationalMatrix bcol(5, 1);
    for (int i = 0; i < 5; ++i) bcol.at(i, 0) = sys.b[static_cast<size_t>(i)];
    RationalMatrix eb = e * bcol;
    for (int i = 0; i < 5; ++i) out.b[static_cast<size_t>(i)] = eb.at(i, 0);
    return out;
}

// Kernel of G as an 8x3 matrix. Uses the upper-first column priority, which
// makes the basis columns the unit directions of the lower-domain free
// variables; for the porous system this is exactly the basis whose
// coordinates are the global fluxes (q1, q2, q3).
inline RationalMatrix nullspace_of_G(const InterfaceSystem& sys) {
    validate(sys);
    RationalMatrix basis = nullspace_basis_ordered(sys.G, upper_first_column_order());
    if (basis.cols() != 3)
        throw DimensionMismatchError("nullspace of G must have 3 columns for a rank-5 system");
    return basis;
}

// Flat-interface base state: U0 solves G U0 = b with homogeneous part
// N(G) q; U0n is the row shift that replaces values by normal derivatives
// (top half zero, bottom half equal to the old top half).
struct BaseState {
    std::array<Rational, 3> q{Rational(0), Rational(0), Rational(0)};
    std::vector<Rational> U0 = std::vector<Rational>(8, Rational(0));
    std::vector<Rational> U0n = std::vector<Rational>(8, Rational(0));
};

inline std::vector<Rational> shift_to_normal(const std::vector<Rational>& u) {
    std::vector<Rational> out(8, Rational(0));
    for (int i = 0; i < 4; ++i) out[static_cast<size_t>(4 + i)] = u[static_cast<size_t>(i)];
    return out;
}

inline BaseState base_solution(const InterfaceSystem& sys, const std::array<Rational, 3>& q) {
    RationalMatrix basis = nullspace_of_G(sys);
    auto particular = solve_particular_ordered(sys.G, sys.b, upper_first_column_order());
    if (!particular) throw DimensionMismatchError("G x = b inconsistent for a rank-5 system");
    BaseState state;
    state.q = q;
    state.U0 = *particular;
    for (int i = 0; i < 8; ++i)
        for (int k = 0; k < 3; ++k) state.U0[static_cast<size_t>(i)] += basis.at(i, k) * q[static_cast<size_t>(k)];
    state.U0n = shift_to_normal(state.U0);
    return state;
}

}  // namespace fbl
