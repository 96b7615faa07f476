#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "tcft/forms.hpp"

namespace tcft {

using Complex = std::complex<double>;

// Fixed insertion for plain correlator evaluation (spectators and tests).
struct CorrInsertion {
    FockState chi;
    FockState bar;
    Complex pos{0.0, 0.0};
};

// One multiplicative factor (z_a - z_b)^{-expo}; antichiral factors evaluate
// on conjugated coordinates.
struct PFactor {
    int a = 0, b = 0;
    int expo = 1;
    bool anti = false;

    friend bool operator==(const PFactor& x, const PFactor& y) {
        return x.a == y.a && x.b == y.b && x.expo == y.expo && x.anti == y.anti;
    }
    friend bool operator<(const PFactor& x, const PFactor& y) {
        return std::tie(x.anti, x.a, x.b, x.expo) < std::tie(y.anti, y.a, y.b, y.expo);
    }
};

struct CompiledPairing {
    Complex coeff{0.0, 0.0};
    std::vector<PFactor> factors;
};

struct CompiledCorrelator {
    std::vector<CompiledPairing> pairings;

    bool empty() const { return pairings.empty(); }

    Complex eval(const std::vector<Complex>& pos) const {
        Complex total{0.0, 0.0};
        for (const auto& p : pairings) {
            Complex v = p.coeff;
            for (const auto& f : p.factors) {
                Complex d = f.anti ? std::conj(pos[f.a]) - std::conj(pos[f.b])
                                   : pos[f.a] - pos[f.b];
                switch (f.expo) {
                    case 1: v /= d; break;
                    case 2: v /= d * d; break;
                    default: {
                        Complex dp = d;
                        for (int k = 1; k < f.expo; ++k) dp *= d;
                        v /= dp;
                    }
                }
            }
            total += v;
        }
        return total;
    }
};

namespace wick {

struct Elementary {
    Field field;
    int deriv;
    int posidx;
    int unit; // originating insertion; no contractions within a unit
};

// kernel data of contracting `first` against `second` in word order
inline bool kernel(const Elementary& x, const Elementary& y, double& coeff) {
    int c = 0;
    if (x.field == Field::PsiPlus && y.field == Field::PsiMinus) c = 1;
    else if (x.field == Field::PsiMinus && y.field == Field::PsiPlus) c = 1;
    else if (x.field == Field::Gamma && y.field == Field::Beta) c = 1;
    else if (x.field == Field::Beta && y.field == Field::Gamma) c = -1;
    else return false;
    double v = c * double(binomial(x.deriv + y.deriv, x.deriv));
    if (x.deriv & 1) v = -v;
    coeff = v;
    return true;
}

inline bool is_psi(Field f) { return field_is_odd(f); }

// All complete pairings of one chirality sector. Returns false when the
// charge balance cannot be met (value identically zero).
inline bool sector_pairings(const std::vector<Elementary>& els, bool anti,
                            std::vector<std::pair<double, std::vector<PFactor>>>& out) {
    std::vector<int> plus, minus, gam, bet;
    for (int i = 0; i < int(els.size()); ++i) {
        switch (els[i].field) {
            case Field::PsiPlus: plus.push_back(i); break;
            case Field::PsiMinus: minus.push_back(i); break;
            case Field::Gamma: gam.push_back(i); break;
            case Field::Beta: bet.push_back(i); break;
        }
    }
    if (plus.size() != minus.size() || gam.size() != bet.size()) return false;

    // fermion pairing sign: parity of the permutation listing the fermionic
    // subword as (i1 j1 i2 j2 ...) with i1 < i2 < ...
    std::vector<int> ferm_order;
    for (int i = 0; i < int(els.size()); ++i)
        if (is_psi(els[i].field)) ferm_order.push_back(i);
    auto ferm_rank = [&](int idx) {
        return int(std::lower_bound(ferm_order.begin(), ferm_order.end(), idx) - ferm_order.begin());
    };

    std::vector<std::pair<double, std::vector<PFactor>>> fermionic;
    {
        std::vector<int> perm(minus.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool ok = true;
            double c = 1.0;
            std::vector<PFactor> fs;
            std::vector<int> seq;
            for (std::size_t k = 0; k < plus.size() && ok; ++k) {
                int i = plus[k], j = minus[perm[k]];
                if (els[i].unit == els[j].unit) { ok = false; break; }
                int first = std::min(i, j), second = std::max(i, j);
                double kc;
                if (!kernel(els[first], els[second], kc)) { ok = false; break; }
                c *= kc;
                fs.push_back({els[first].posidx, els[second].posidx,
                              1 + els[first].deriv + els[second].deriv, anti});
                seq.push_back(ferm_rank(first));
                seq.push_back(ferm_rank(second));
            }
            if (!ok) continue;
            int inv = 0;
            for (std::size_t a = 0; a < seq.size(); ++a)
                for (std::size_t b = a + 1; b < seq.size(); ++b)
                    if (seq[a] > seq[b]) ++inv;
            if (inv & 1) c = -c;
            fermionic.push_back({c, std::move(fs)});
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::vector<std::pair<double, std::vector<PFactor>>> bosonic;
    {
        std::vector<int> perm(bet.size());
        std::iota(perm.begin(), perm.end(), 0);
        do {
            bool ok = true;
            double c = 1.0;
            std::vector<PFactor> fs;
            for (std::size_t k = 0; k < gam.size() && ok; ++k) {
                int i = gam[k], j = bet[perm[k]];
                if (els[i].unit == els[j].unit) { ok = false; break; }
                int first = std::min(i, j), second = std::max(i, j);
                double kc;
                if (!kernel(els[first], els[second], kc)) { ok = false; break; }
                c *= kc;
                fs.push_back({els[first].posidx, els[second].posidx,
                              1 + els[first].deriv + els[second].deriv, anti});
            }
            if (!ok) continue;
            bosonic.push_back({c, std::move(fs)});
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    if (fermionic.empty() || bosonic.empty()) return false;
    for (auto& [cf, ff] : fermionic)
        for (auto& [cb, fb] : bosonic) {
            std::vector<PFactor> all = ff;
            all.insert(all.end(), fb.begin(), fb.end());
            out.push_back({cf * cb, std::move(all)});
        }
    return !out.empty();
}

struct Unit {
    const FockState* chi;
    const FockState* bar;
    int posidx;
};

// Expand units into elementary factor words (all monomial combinations with
// the tensor-split Koszul sign), then Wick-sum both sectors.
inline void compile_units(const std::vector<Unit>& units, double prefactor,
                          CompiledCorrelator& out) {
    std::vector<std::pair<double, std::pair<std::vector<Elementary>, std::vector<Elementary>>>>
        expansions{{prefactor, {{}, {}}}};
    int unit_id = 0;
    for (const auto& u : units) {
        decltype(expansions) next;
        for (const auto& [c0, words] : expansions) {
            for (const auto& [mc, cc] : u.chi->terms())
                for (const auto& [mb, cb] : u.bar->terms()) {
                    auto w = words;
                    double c = c0 * cc.to_double() * cb.to_double();
                    // tensor split: the antichiral part of this unit крosses
                    // every later chiral part; handled incrementally by
                    // crossing all antichiral factors accumulated so far with
                    // this unit's chiral parity
                    int fchi = monomial_grading(mc).fermion & 1;
                    if (fchi) {
                        int fbar_before = 0;
                        for (const auto& e : w.second)
                            if (is_psi(e.field)) fbar_before ^= 1;
                        if (fbar_before) c = -c;
                    }
                    for (ModeLabel m : mc)
                        w.first.push_back(
                            {m.field, -m.n - field_weight(m.field), u.posidx, unit_id});
                    for (ModeLabel m : mb)
                        w.second.push_back(
                            {m.field, -m.n - field_weight(m.field), u.posidx, unit_id});
                    next.push_back({c, std::move(w)});
                }
        }
        expansions = std::move(next);
        ++unit_id;
    }

    for (auto& [c, words] : expansions) {
        std::vector<std::pair<double, std::vector<PFactor>>> chiral_pairs, anti_pairs;
        if (!sector_pairings(words.first, false, chiral_pairs)) continue;
        if (!sector_pairings(words.second, true, anti_pairs)) continue;
        for (auto& [cc, fc] : chiral_pairs)
            for (auto& [ca, fa] : anti_pairs) {
                CompiledPairing p;
                p.coeff = Complex(c * cc * ca, 0.0);
                p.factors = fc;
                p.factors.insert(p.factors.end(), fa.begin(), fa.end());
                std::sort(p.factors.begin(), p.factors.end());
                out.pairings.push_back(std::move(p));
            }
    }
}

inline void merge_pairings(CompiledCorrelator& c) {
    std::sort(c.pairings.begin(), c.pairings.end(),
              [](const CompiledPairing& x, const CompiledPairing& y) { return x.factors < y.factors; });
    std::vector<CompiledPairing> merged;
    for (auto& p : c.pairings) {
        if (!merged.empty() && merged.back().factors == p.factors) merged.back().coeff += p.coeff;
        else merged.push_back(std::move(p));
    }
    std::erase_if(merged, [](const CompiledPairing& p) { return std::abs(p.coeff) == 0.0; });
    c.pairings = std::move(merged);
}

} // namespace wick

// Exact closed-form Wick evaluation of a product of insertions at fixed
// points. Charge imbalance gives exact zero; coincident points are the
// caller's responsibility (the kernels blow up).
inline Complex evaluate_correlator(const std::vector<CorrInsertion>& ins) {
    std::vector<wick::Unit> units;
    std::vector<Complex> pos;
    for (const auto& i : ins) {
        units.push_back({&i.chi, &i.bar, int(pos.size())});
        pos.push_back(i.pos);
    }
    CompiledCorrelator c;
    wick::compile_units(units, 1.0, c);
    wick::merge_pairings(c);
    return c.eval(pos);
}

// <Q(everything)>: distributes Q + Qbar over the insertion list with Koszul
// signs. Must vanish identically for the pairing convention to be admissible.
inline Complex ward_residual(const std::vector<CorrInsertion>& ins) {
    Complex total{0.0, 0.0};
    for (std::size_t i = 0; i < ins.size(); ++i) {
        int prefix = 0;
        for (std::size_t k = 0; k < i; ++k) {
            auto pc = state_parity(ins[k].chi);
            auto pb = state_parity(ins[k].bar);
            prefix ^= (*pc + *pb) & 1;
        }
        double sgn = prefix ? -1.0 : 1.0;
        {
            auto mod = ins;
            mod[i].chi = Q_action(mod[i].chi);
            if (!mod[i].chi.is_zero()) total += sgn * evaluate_correlator(mod);
        }
        {
            auto mod = ins;
            auto pc = state_parity(mod[i].chi);
            double ts = ((*pc) & 1) ? -1.0 : 1.0;
            mod[i].bar = Q_action(mod[i].bar);
            if (!mod[i].bar.is_zero()) total += sgn * ts * evaluate_correlator(mod);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Term compilation for nonlocal elements: position index space is
// [0..nvars-1] integration variables, nvars = base point, nvars+1+k = k-th
// spectator.
// ---------------------------------------------------------------------------

struct CompiledTerm {
    CompiledCorrelator corr;
    std::vector<int> contour_marker; // per var: 0 = theta (dv), 1 = thetabar, -1 = area/none
    int nvars = 0;
};

// Form component at the base point (theta, thetabar) flags.
struct FormComponent {
    bool theta = false, thetabar = false;
    friend bool operator==(FormComponent a, FormComponent b) {
        return a.theta == b.theta && a.thetabar == b.thetabar;
    }
};

inline CompiledTerm compile_term(const WTerm& t, const std::vector<CorrInsertion>& spectators,
                                 FormComponent comp) {
    CompiledTerm out;
    out.nvars = int(t.vars.size());
    out.contour_marker.assign(t.vars.size(), -1);

    int bs = t.base_slot();
    if (bs < 0) return out;
    if (t.slots[bs].theta != comp.theta || t.slots[bs].thetabar != comp.thetabar) return out;

    for (std::size_t v = 0; v < t.vars.size(); ++v)
        if (t.vars[v].kind == VarDomain::Kind::Contour) {
            for (const auto& s : t.slots)
                if (s.pos == int(v)) out.contour_marker[v] = s.thetabar ? 1 : 0;
        }

    std::vector<wick::Unit> units;
    for (const auto& s : t.slots) {
        int pidx = s.pos == POS_BASE ? out.nvars : s.pos;
        units.push_back({&s.chi, &s.bar, pidx});
    }
    for (std::size_t k = 0; k < spectators.size(); ++k)
        units.push_back({&spectators[k].chi, &spectators[k].bar, out.nvars + 1 + int(k)});

    double pref = t.coeff.re.to_double(); // imaginary exact parts never arise here
    if (!t.coeff.im.is_zero()) throw std::logic_error("compile_term: unexpected imaginary coefficient");
    wick::compile_units(units, pref, out.corr);
    wick::merge_pairings(out.corr);
    return out;
}

} // namespace tcft
