#pragma once

#include <fstream>
#include <sstream>

#include "tcft/identities.hpp"

namespace tcft {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Run configuration: plain-text `key = value` lines, '#' comments. Spectators
// are given as repeated lines `spectator <field> <re> <im>` where <field> is
// one of psi-plus, psi-minus, beta, gamma, J, b, N, L; a `-bar` suffix places
// the state in the antichiral sector only, `-pair` in both (default: chiral).
struct RunConfig {
    int truncation_weight = 6;
    int zero_mode_cap = 2;
    double kappa = 10.0;
    std::uint64_t seed = 1;
    long long mc_samples = 20000;
    long long mc_samples_heavy = 60000;
    double rel_tol = 1e-6;
    double identity_rel_floor = 1e-6;
    int circlep_sign = -1;
    DTwist twist = DTwist::Twisted;
    double eps = 0.25;
    std::string suites = "all";
    std::string out_dir = ".";
    std::vector<CorrInsertion> spectators; // empty: per-suite defaults
    bool flip_orientation = false;         // negative-control knob
    int verbosity = 1;

    V3Params v3_params(Complex center = {0, 0}) const {
        V3Params p;
        p.center = center;
        p.rho1 = 1.0;
        p.rho2 = 0.6;
        p.eps = p.xi = 0.6 / kappa;
        p.kappa = kappa;
        return p;
    }
    V4Params v4_params(Complex center = {0, 0}) const {
        V4Params p;
        p.center = center;
        p.rho1 = 1.0;
        p.rho2 = 0.62;
        p.rho3 = 0.35;
        p.eps2 = p.xi2 = 0.35 / kappa;
        p.eps1 = p.xi1 = p.alpha = 0.35 / (kappa * kappa);
        p.kappa = kappa;
        return p;
    }
    BracketConfig bracket_config() const {
        BracketConfig c;
        c.eps = eps;
        c.v3 = v3_params();
        c.v4 = v4_params();
        c.circlep_sign = circlep_sign;
        c.twist = twist;
        c.rel_floor = identity_rel_floor;
        return c;
    }
};

namespace detail {

inline FockState named_state(const std::string& name) {
    auto f = structure_fields();
    if (name == "psi-plus") return mode_action(Field::PsiPlus, 0, vacuum_state());
    if (name == "psi-minus") return mode_action(Field::PsiMinus, -1, vacuum_state());
    if (name == "beta") return mode_action(Field::Beta, -1, vacuum_state());
    if (name == "gamma") return mode_action(Field::Gamma, 0, vacuum_state());
    if (name == "J") return f.J;
    if (name == "b") return f.b;
    if (name == "N") return f.N;
    if (name == "L") return f.L;
    throw ConfigError("unknown spectator field '" + name + "'");
}

} // namespace detail

inline CorrInsertion make_spectator(std::string token, Complex pos) {
    bool bar = false, pair = false;
    auto strip = [&](const char* suf) {
        std::string s(suf);
        if (token.size() > s.size() && token.compare(token.size() - s.size(), s.size(), s) == 0) {
            token.resize(token.size() - s.size());
            return true;
        }
        return false;
    };
    if (strip("-bar")) bar = true;
    else if (strip("-pair")) pair = true;
    FockState st = detail::named_state(token);
    if (bar) return {vacuum_state(), st, pos};
    if (pair) return {st, st, pos};
    return {st, vacuum_state(), pos};
}

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;
        try {
            if (key == "spectator") {
                std::string field;
                double re, im;
                if (!(ss >> field >> re >> im)) throw ConfigError("spectator needs <field> <re> <im>");
                cfg.spectators.push_back(make_spectator(field, {re, im}));
                continue;
            }
            std::string eq, value;
            ss >> eq >> value;
            if (eq != "=") throw ConfigError("expected 'key = value'");
            if (key == "truncation_weight") cfg.truncation_weight = std::stoi(value);
            else if (key == "zero_mode_cap") cfg.zero_mode_cap = std::stoi(value);
            else if (key == "kappa") cfg.kappa = std::stod(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "mc_samples") cfg.mc_samples = std::stoll(value);
            else if (key == "mc_samples_heavy") cfg.mc_samples_heavy = std::stoll(value);
            else if (key == "rel_tol") cfg.rel_tol = std::stod(value);
            else if (key == "identity_rel_floor") cfg.identity_rel_floor = std::stod(value);
            else if (key == "circlep_sign") cfg.circlep_sign = std::stoi(value);
            else if (key == "eps") cfg.eps = std::stod(value);
            else if (key == "suite") cfg.suites = value;
            else if (key == "out_dir") cfg.out_dir = value;
            else if (key == "verbosity") cfg.verbosity = std::stoi(value);
            else if (key == "flip_orientation") cfg.flip_orientation = value == "1" || value == "true";
            else if (key == "d_convention") {
                if (value == "derivative") cfg.twist = DTwist::Twisted;
                else if (value == "plain") cfg.twist = DTwist::Plain;
                else throw ConfigError("d_convention must be derivative|plain");
            } else throw ConfigError("unknown key '" + key + "'");
        } catch (const std::exception& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (cfg.circlep_sign != 1 && cfg.circlep_sign != -1)
        throw ConfigError("circlep_sign must be +1 or -1");
    if (cfg.mc_samples < 16) throw ConfigError("mc_samples too small");
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    return parse_config(f);
}

} // namespace tcft
