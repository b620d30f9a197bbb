#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "fbl/poly.hpp"

namespace fbl {

// Fixed numeric formatting for reports and CSV: six significant digits,
// scientific notation below 1e-3 in magnitude, so identical runs produce
// byte-identical files.
inline std::string format_number(double v) {
    if (v == 0.0) return "0";
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[48];
    if (std::abs(v) < 1e-3)
        std::snprintf(buf, sizeof(buf), "%.5e", v);
    else
        std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Ascending coefficients separated by ';' (machine-readable polynomial).
inline std::string coeff_list(const Poly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    for (int k = 0; k <= p.degree(); ++k) {
        if (k) out << ';';
        out << to_string(p.coeff(k));
    }
    return out.str();
}

struct TextTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string render() const {
        std::vector<size_t> width(header.size(), 0);
        auto widen = [&](const std::vector<std::string>& row) {
            for (size_t c = 0; c < row.size() && c < width.size(); ++c)
                width[c] = std::max(width[c], row[c].size());
        };
        widen(header);
        for (const auto& r : rows) widen(r);
        std::ostringstream out;
        auto emit = [&](const std::vector<std::string>& row) {
            for (size_t c = 0; c < row.size(); ++c) {
                out << (c ? "  " : "");
                out << row[c] << std::string(width[c] - row[c].size(), ' ');
            }
            out << '\n';
        };
        emit(header);
        std::vector<std::string> rule;
        for (size_t c = 0; c < header.size(); ++c) rule.push_back(std::string(width[c], '-'));
        emit(rule);
        for (const auto& r : rows) emit(r);
        return out.str();
    }

    std::string csv() const {
        std::ostringstream out;
        auto emit = [&](const std::vector<std::string>& row) {
            for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
            out << '\n';
        };
        emit(header);
        for (const auto& r : rows) emit(r);
        return out.str();
    }
};

}  // namespace fbl
