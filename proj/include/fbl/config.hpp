#pragma once

#include <array>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fbl/porous.hpp"
#include "fbl/solver/run.hpp"
#include "fbl/stability.hpp"

namespace fbl {

// Sectioned key = value run configuration. Values that feed the exact
// analysis (matrix entries, K, q, porous data) are rationals written as
// "p/q" or integers; step sizes and tolerances are decimals. Unknown keys
// are rejected.
struct Config {
    // [system]
    std::string builtin = "porous";       // or empty when matrix_file is set
    std::string matrix_file;
    PorousParams porous;

    // [analysis]
    SpectralMode mode = SpectralMode::d2();
    bool q_from_data = true;
    std::array<Rational, 3> q{Rational(0), Rational(0), Rational(0)};
    std::vector<VelocityChoice> velocities = unit_velocities();

    // [solver]
    RunConfig run;

    // [output]
    std::string out_dir = "out";
    bool text_output = true;
    bool csv_output = true;
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, sep)) out.push_back(trim(tok));
    return out;
}

inline double parse_decimal(const std::string& v, const std::string& key) {
    try {
        size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw ParseError("");
        return d;
    } catch (...) {
        throw ParseError("key '" + key + "': malformed decimal '" + v + "'");
    }
}

inline VelocityChoice parse_velocity(const std::string& tok) {
    if (tok.size() == 2 && tok[0] == 'e' && tok[1] >= '1' && tok[1] <= '5')
        return VelocityChoice::unit(tok[1] - '1');
    // general combination: five rationals separated by ':'
    auto parts = split(tok, ':');
    if (parts.size() != 5)
        throw ParseError("velocity '" + tok + "' must be e1..e5 or five ':'-separated rationals");
    VelocityChoice v;
    v.label = tok;
    for (int k = 0; k < 5; ++k) v.v[static_cast<size_t>(k)] = parse_rational(parts[static_cast<size_t>(k)]);
    if (v.is_zero()) throw ParseError("velocity '" + tok + "' is the zero combination");
    return v;
}

}  // namespace detail

inline Config parse_config(std::istream& in) {
    Config cfg;
    bool builtin_seen = false, matrix_seen = false;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError("line " + std::to_string(line_no) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "analysis" && section != "solver" && section != "output")
                throw ParseError("unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) throw ParseError("key '" + key + "' outside any section");

        if (section == "system") {
            if (key == "builtin") {
                if (value != "porous") throw ParseError("unknown builtin system '" + value + "'");
                cfg.builtin = value;
                builtin_seen = true;
            } else if (key == "matrix_file") {
                cfg.matrix_file = value;
                cfg.builtin.clear();
                matrix_seen = true;
            } else if (key == "K_plus") {
                cfg.porous.K_plus = parse_rational(value);
            } else if (key == "K_minus") {
                cfg.porous.K_minus = parse_rational(value);
            } else if (key == "T0") {
                cfg.porous.T0 = parse_rational(value);
            } else if (key == "L") {
                cfg.porous.L = parse_rational(value);
            } else if (key == "flux_mean") {
                cfg.porous.flux_mean = parse_rational(value);
            } else if (key == "flux_sin") {
                cfg.porous.flux_sin = parse_rational(value);
            } else {
                throw ParseError("unknown key '" + key + "' in [system]");
            }
        } else if (section == "analysis") {
            if (key == "mode") {
                if (value == "2d")
                    cfg.mode = SpectralMode::d2();
                else if (value == "3d")
                    cfg.mode = SpectralMode::d3();
                else
                    throw ParseError("mode must be 2d or 3d");
            } else if (key == "q") {
                if (value == "from-data") {
                    cfg.q_from_data = true;
                } else {
                    auto parts = detail::split(value, ',');
                    if (parts.size() != 3) throw ParseError("q must be 'from-data' or three rationals");
                    cfg.q_from_data = false;
                    for (int k = 0; k < 3; ++k) cfg.q[static_cast<size_t>(k)] = parse_rational(parts[static_cast<size_t>(k)]);
                }
            } else if (key == "velocities") {
                cfg.velocities.clear();
                for (const auto& tok : detail::split(value, ','))
                    cfg.velocities.push_back(detail::parse_velocity(tok));
                if (cfg.velocities.empty()) throw ParseError("velocity list is empty");
            } else {
                throw ParseError("unknown key '" + key + "' in [analysis]");
            }
        } else if (section == "solver") {
            if (key == "N") {
                cfg.run.n = static_cast<int>(detail::parse_decimal(value, key));
                if (cfg.run.n < 4) throw ParseError("N must be at least 4");
            } else if (key == "dt") {
                cfg.run.dt = detail::parse_decimal(value, key);
            } else if (key == "t_end") {
                cfg.run.t_end = detail::parse_decimal(value, key);
            } else if (key == "residual_choice") {
                if (value == "neumann")
                    cfg.run.choice = ResidualChoice::Neumann;
                else if (value == "dirichlet")
                    cfg.run.choice = ResidualChoice::Dirichlet;
                else
                    throw ParseError("residual_choice must be neumann or dirichlet");
            } else if (key == "stop_tolerance") {
                cfg.run.stop_tolerance = detail::parse_decimal(value, key);
            } else if (key == "linear_tolerance") {
                cfg.run.linear_tolerance = detail::parse_decimal(value, key);
            } else {
                throw ParseError("unknown key '" + key + "' in [solver]");
            }
        } else {  // output
            if (key == "directory") {
                cfg.out_dir = value;
            } else if (key == "formats") {
                cfg.text_output = cfg.csv_output = false;
                for (const auto& tok : detail::split(value, ',')) {
                    if (tok == "text")
                        cfg.text_output = true;
                    else if (tok == "csv")
                        cfg.csv_output = true;
                    else
                        throw ParseError("unknown output format '" + tok + "'");
                }
            } else {
                throw ParseError("unknown key '" + key + "' in [output]");
            }
        }
    }
    if (builtin_seen && matrix_seen) throw ParseError("[system] cannot set both builtin and matrix_file");
    cfg.run.params = cfg.porous;
    return cfg;
}

inline Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    return parse_config(in);
}

}  // namespace fbl
