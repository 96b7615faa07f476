#pragma once

#include <array>
#include <map>

#include "tcft/integrate.hpp"
#include "tcft/residue.hpp"

namespace tcft {

// Evaluation of nonlocal elements under the correlator: every term is
// compiled to its Wick closed form once, terms sharing a region geometry are
// integrated on shared sample streams, and single-contour terms take the
// exact residue route when allowed.

struct EvalOptions {
    std::vector<CorrInsertion> spectators;
    Complex base{0.0, 0.0};
    double rel_tol = 1e-10;
    long long mc_samples = 40000;
    std::uint64_t seed = 1;
    bool prefer_residues = true;
    bool prefer_quadrature = false; // identities default to shared-sample MC
    int max_contour_points = 512;
};

struct ComponentValue {
    Complex value{0.0, 0.0};
    double sigma = 0.0;
    std::string method;
};

inline FormComponent component_of(int idx) {
    return {bool(idx & 1), bool(idx & 2)};
}

namespace detail {

inline std::uint64_t hash_mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

inline std::uint64_t region_signature(const WTerm& t, std::uint64_t seed) {
    std::uint64_t h = seed;
    for (const auto& v : t.vars) {
        h = hash_mix(h, std::uint64_t(int(v.kind)));
        h = hash_mix(h, std::uint64_t(v.center + 7));
        h = hash_mix(h, std::uint64_t(v.radius * 1e9));
        for (auto& [c, r] : v.holes) {
            h = hash_mix(h, std::uint64_t(c + 7));
            h = hash_mix(h, std::uint64_t(r * 1e9));
        }
    }
    return h;
}

struct TermGroup {
    std::vector<VarDomain> vars;
    std::vector<CompiledTerm> compiled;
};

} // namespace detail

// Evaluate one component of an element. Terms are grouped by identical var
// geometry; each group is integrated once with the summed integrand.
inline ComponentValue evaluate_component(const WbarElement& e, FormComponent comp,
                                         const EvalOptions& o) {
    ComponentValue out;
    // group terms by var geometry
    std::vector<detail::TermGroup> groups;
    for (const auto& t : e.terms) {
        CompiledTerm ct = compile_term(t, o.spectators, comp);
        if (ct.corr.empty()) continue;
        detail::TermGroup* g = nullptr;
        for (auto& gg : groups) {
            if (gg.vars.size() != t.vars.size()) continue;
            bool same = true;
            for (std::size_t i = 0; i < t.vars.size() && same; ++i)
                same = detail::cmp_var(gg.vars[i], t.vars[i]) == 0;
            if (same) {
                g = &gg;
                break;
            }
        }
        if (!g) {
            groups.push_back({t.vars, {}});
            g = &groups.back();
        }
        g->compiled.push_back(std::move(ct));
    }

    std::vector<Complex> fixed;
    for (const auto& s : o.spectators) fixed.push_back(s.pos);

    for (auto& g : groups) {
        const int nv = int(g.vars.size());
        Region r;
        r.base = o.base;
        r.vars = g.vars;

        IntegrateOptions io;
        io.rel_tol = o.rel_tol;
        io.mc_samples = o.mc_samples;
        io.fixed = fixed;
        io.max_contour_points = o.max_contour_points;
        WTerm sig_term;
        sig_term.vars = g.vars;
        io.seed = detail::region_signature(sig_term, o.seed);

        // normalization 1/(2 pi i) per integration variable
        Complex norm{1.0, 0.0};
        for (int q = 0; q < nv; ++q) norm /= Complex(0.0, 2.0 * M_PI);

        if (nv == 0) {
            std::vector<Complex> pos{o.base};
            pos.insert(pos.end(), fixed.begin(), fixed.end());
            for (auto& ct : g.compiled) out.value += ct.corr.eval(pos);
            if (out.method.empty()) out.method = "closed-form";
            continue;
        }

        // single-contour exact residues
        bool single_contour = nv == 1 && g.vars[0].kind == VarDomain::Kind::Contour;
        if (single_contour && o.prefer_residues) {
            std::vector<Complex> pos(nv + 1 + fixed.size());
            pos[nv] = o.base;
            for (std::size_t k = 0; k < fixed.size(); ++k) pos[nv + 1 + k] = fixed[k];
            Complex c = resolve_pos(g.vars[0].center, pos, nv);
            try {
                Complex v{0, 0};
                for (auto& ct : g.compiled)
                    v += contour_residue_integral(ct.corr, pos, c, g.vars[0].radius,
                                                  ct.contour_marker[0]);
                out.value += v * norm;
                out.method = out.method.empty() ? "residue-exact" : out.method + "+residue";
                continue;
            } catch (const ResidueUnreliable&) {
                // fall through to quadrature
            }
        }

        Integrand f = [&](const SamplePoint& s) {
            Complex total{0, 0};
            for (const auto& ct : g.compiled) {
                Complex v = ct.corr.eval(s.positions);
                for (int q = 0; q < nv; ++q) {
                    const VarDomain& vd = g.vars[q];
                    if (vd.kind == VarDomain::Kind::Contour) {
                        Complex dv = Complex(0, 1) * vd.radius * s.phase[q];
                        v *= ct.contour_marker[q] == 1 ? std::conj(dv) : dv;
                    } else {
                        v *= Complex(0.0, -2.0);
                    }
                }
                total += v;
            }
            return total;
        };

        int areas = 0;
        for (auto& v : r.vars) areas += v.kind == VarDomain::Kind::Area ? 1 : 0;
        IntegrationResult res;
        if (areas == 0 || (o.prefer_quadrature && areas <= 1 && r.dim() <= 3))
            res = integrate_quadrature(r, f, io);
        else
            res = integrate_mc(r, f, io);
        out.value += res.value * norm;
        out.sigma += res.error * std::abs(norm);
        if (out.method.empty()) out.method = res.method;
        else if (out.method != res.method) out.method += "+" + res.method;
    }
    return out;
}

inline std::array<ComponentValue, 4> evaluate_element(const WbarElement& e, const EvalOptions& o) {
    std::array<ComponentValue, 4> out;
    for (int c = 0; c < 4; ++c) out[c] = evaluate_component(e, component_of(c), o);
    return out;
}

// largest component magnitude, with combined sigma
inline std::pair<double, double> element_norm(const std::array<ComponentValue, 4>& vals) {
    double m = 0.0, s = 0.0;
    for (const auto& v : vals) {
        m = std::max(m, std::abs(v.value));
        s = std::max(s, v.sigma);
    }
    return {m, s};
}

} // namespace tcft
