#pragma once

#include <random>

#include "fbl/interface_system.hpp"

namespace fbl::testing {

// Small random rationals p/q with q in 1..4, biased toward simple values.
inline Rational random_rational(std::mt19937& rng, int span = 5) {
    std::uniform_int_distribution<int> num(-span, span);
    std::uniform_int_distribution<int> den(1, 4);
    return make_rational(num(rng), den(rng));
}

inline Rational random_positive_rational(std::mt19937& rng, int span = 6) {
    std::uniform_int_distribution<int> num(1, span);
    std::uniform_int_distribution<int> den(1, 4);
    return make_rational(num(rng), den(rng));
}

inline RationalMatrix random_matrix(std::mt19937& rng, int rows, int cols, int span = 5) {
    RationalMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = random_rational(rng, span);
    return m;
}

inline InterfaceSystem random_rank5_system(std::mt19937& rng) {
    for (;;) {
        InterfaceSystem sys;
        sys.G = random_matrix(rng, 5, 8);
        for (auto& bi : sys.b) bi = random_rational(rng);
        if (rank(sys.G) == 5) return sys;
    }
}

// Random invertible 5x5 row mix.
inline RationalMatrix random_invertible5(std::mt19937& rng) {
    for (;;) {
        RationalMatrix e = random_matrix(rng, 5, 5, 3);
        if (rank(e) == 5) return e;
    }
}

inline std::vector<Rational> matvec(const RationalMatrix& m, const std::vector<Rational>& x) {
    return m.apply(x);
}

// span(A) == span(B) for column spans, checked by rank equality of stacked blocks.
inline bool same_column_span(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows() != b.rows()) return false;
    RationalMatrix ab(a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) ab.at(i, j) = a.at(i, j);
        for (int j = 0; j < b.cols(); ++j) ab.at(i, a.cols() + j) = b.at(i, j);
    }
    int ra = rank(a), rb = rank(b), rab = rank(ab);
    return ra == rb && ra == rab;
}

}  // namespace fbl::testing
