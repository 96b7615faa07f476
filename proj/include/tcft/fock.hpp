#pragma once

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tcft/graded_vector.hpp"
#include "tcft/grading.hpp"
#include "tcft/modes.hpp"

namespace tcft {

// A basis monomial is a canonically ordered word of creation modes applied to
// the vacuum. Canonical order is ascending ModeLabel order; reordering signs
// are applied eagerly so equality of states is literal map equality.
using FockMonomial = std::vector<ModeLabel>;

using FockState = SparseVector<FockMonomial, Rational>;

inline Grading monomial_grading(const FockMonomial& m) {
    Grading g{0, 0};
    for (ModeLabel mode : m) {
        g.weight += mode.weight();
        g.fermion += mode.fermion();
    }
    return g;
}

inline FockState vacuum_state() { return FockState::monomial(FockMonomial{}); }

// Insert a creation mode into a canonical monomial, accumulating the Koszul
// sign of moving it into place. Returns false (annihilation to zero) when a
// fermionic mode repeats.
inline bool insert_creation(FockMonomial& mono, ModeLabel m, int& sign) {
    std::size_t pos = 0;
    while (pos < mono.size() && mono[pos] < m) {
        if (m.odd() && mono[pos].odd()) sign = -sign;
        ++pos;
    }
    if (m.odd() && pos < mono.size() && mono[pos] == m) return false;
    mono.insert(mono.begin() + pos, m);
    return true;
}

// Exact application of a single mode, normal-ordering the result.
inline FockState mode_action(ModeLabel m, const FockState& s) {
    FockState out;
    for (const auto& [mono, coeff] : s.terms()) {
        if (m.creation()) {
            FockMonomial t = mono;
            int sign = 1;
            if (insert_creation(t, m, sign)) out.add(t, sign > 0 ? coeff : -coeff);
        } else {
            // move the annihilator rightward; contractions pick up terms
            int sign = 1;
            for (std::size_t i = 0; i < mono.size(); ++i) {
                int c = mode_contraction(m, mono[i]);
                if (c != 0) {
                    FockMonomial t;
                    t.reserve(mono.size() - 1);
                    t.insert(t.end(), mono.begin(), mono.begin() + i);
                    t.insert(t.end(), mono.begin() + i + 1, mono.end());
                    Rational v = coeff * Rational(c * sign);
                    out.add(t, v);
                }
                if (m.odd() && mono[i].odd()) sign = -sign;
            }
            // the fully commuted annihilator hits the vacuum: no term
        }
    }
    return out;
}

inline FockState mode_action(Field f, int n, const FockState& s) {
    return mode_action(ModeLabel{f, n}, s);
}

// Normal-ordered application of a quadratic :AB:, annihilators to the right.
inline FockState normal_pair_action(ModeLabel a, ModeLabel b, const FockState& s) {
    if (!a.creation() && b.creation()) {
        FockState r = mode_action(b, mode_action(a, s));
        return (a.odd() && b.odd()) ? -r : r;
    }
    return mode_action(a, mode_action(b, s));
}

inline std::optional<Grading> state_grading(const FockState& s) {
    return s.homogeneous_grading([](const FockMonomial& m) { return monomial_grading(m); });
}

inline int max_mode_index(const FockState& s) {
    int m = 0;
    for (const auto& [mono, c] : s.terms())
        for (ModeLabel mode : mono) m = std::max(m, std::abs(mode.n));
    return m;
}

// Basis of all monomials with weight <= max_weight. The two weight-0 modes
// make fixed-weight spaces infinite-dimensional, so enumeration caps the
// bosonic zero-mode multiplicity (gamma_0^k with k <= zero_mode_cap).
inline std::vector<FockMonomial> enumerate_basis(int max_weight, int zero_mode_cap = 2) {
    // candidate creation modes grouped by weight
    std::vector<std::pair<ModeLabel, int>> gens; // (mode, max multiplicity)
    gens.push_back({{Field::PsiPlus, 0}, 1});
    gens.push_back({{Field::Gamma, 0}, zero_mode_cap});
    for (int w = 1; w <= max_weight; ++w) {
        int rep = std::max(1, max_weight / w);
        gens.push_back({{Field::PsiPlus, -w}, 1});
        gens.push_back({{Field::PsiMinus, -w}, 1});
        gens.push_back({{Field::Beta, -w}, rep});
        gens.push_back({{Field::Gamma, -w}, rep});
    }
    std::vector<FockMonomial> out;
    FockMonomial cur;
    std::function<void(std::size_t, int)> rec = [&](std::size_t gi, int wleft) {
        if (gi == gens.size()) {
            FockMonomial sorted = cur;
            std::sort(sorted.begin(), sorted.end());
            out.push_back(std::move(sorted));
            return;
        }
        auto [mode, maxrep] = gens[gi];
        for (int r = 0; r <= maxrep && r * mode.weight() <= wleft; ++r) {
            for (int t = 0; t < r; ++t) cur.push_back(mode);
            rec(gi + 1, wleft - r * mode.weight());
            for (int t = 0; t < r; ++t) cur.pop_back();
        }
    };
    rec(0, max_weight);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace tcft
