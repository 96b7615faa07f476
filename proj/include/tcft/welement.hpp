#pragma once

#include "tcft/oper.hpp"

namespace tcft {

// W = V + sV: a 0-form part and a 1-form part (the odd marker contributes +1
// to total degree). The contour operations below are the exact state-level
// form of the integral definitions: a closed contour around z extracts the
// zeroth product of the integrand's 1-form component.
//
// Marker convention: a term's markers sit immediately after the insertion at
// their point, and contour extraction consumes the marker in place. All signs
// below are derived once in that convention; the full-plane engine uses the
// same one, so the 0-form restriction of its bracket must reproduce
// lz_bracket exactly.
struct WElement {
    FockState v;  // 0-form part
    FockState sv; // 1-form part

    bool is_zero() const { return v.is_zero() && sv.is_zero(); }

    friend WElement operator+(const WElement& a, const WElement& b) {
        return {a.v + b.v, a.sv + b.sv};
    }
    friend WElement operator-(const WElement& a, const WElement& b) {
        return {a.v - b.v, a.sv - b.sv};
    }
    WElement operator*(const Rational& c) const { return {v * c, sv * c}; }
    friend bool operator==(const WElement& a, const WElement& b) {
        return a.v == b.v && a.sv == b.sv;
    }
};

inline WElement w_zero_form(FockState s) { return {std::move(s), {}}; }
inline WElement w_one_form(FockState s) { return {{}, std::move(s)}; }

// Total W-degree of a homogeneous element (fermion number, +1 on the 1-form
// part). Returns nullopt when mixed.
inline std::optional<int> w_degree(const WElement& a) {
    std::optional<int> d;
    for (auto& [m, c] : a.v.terms()) {
        int f = monomial_grading(m).fermion;
        if (!d) d = f;
        else if (*d != f) return std::nullopt;
    }
    for (auto& [m, c] : a.sv.terms()) {
        int f = monomial_grading(m).fermion + 1;
        if (!d) d = f;
        else if (*d != f) return std::nullopt;
    }
    return d;
}

namespace detail {

// sum over monomials of sgn(fermion) * op(monomial)
template <class Op>
FockState signed_monomial_map(const FockState& s, Op&& op, bool twist) {
    FockState out;
    for (const auto& [mono, c] : s.terms()) {
        FockState t = op(FockState::monomial(mono, c));
        if (twist && (monomial_grading(mono).fermion & 1)) out -= t;
        else out += t;
    }
    return out;
}

} // namespace detail

// Image of alpha under the commutator with b(theta): kills 1-forms, sends a
// 0-form x to the 1-form -(-1)^{|x|} b_{-1} x.
inline WElement w_b_map(const WElement& a) {
    FockState m = detail::signed_monomial_map(a.v, [](const FockState& x) { return -b_minus1_action(x); }, true);
    return {{}, std::move(m)};
}

// The de Rham piece. Twisted is the convention consistent with [Q, b] = d in
// the marker calculus used here: x -> -(-1)^{|x|} L_{-1} x theta. Plain is
// the untwisted L_{-1} theta.
enum class DTwist { Twisted, Plain };

inline WElement w_d_map(const WElement& a, DTwist tw = DTwist::Twisted) {
    FockState m = tw == DTwist::Twisted
                      ? detail::signed_monomial_map(a.v, [](const FockState& x) { return -Lminus1_action(x); }, true)
                      : detail::signed_monomial_map(a.v, [](const FockState& x) { return Lminus1_action(x); }, false);
    return {{}, std::move(m)};
}

inline WElement w_q_map(const WElement& a) { return {Q_action(a.v), Q_action(a.sv)}; }

// dbar = Q - d
inline WElement w_dbar(const WElement& a, DTwist tw = DTwist::Twisted) {
    return w_q_map(a) - w_d_map(a, tw);
}

namespace detail {
// S = A1 - (-1)^{|A0|} b_{-1} A0: the effective 1-form integrand of alpha.
inline FockState circle_integrand(const WElement& a) {
    FockState s = a.sv;
    s += signed_monomial_map(a.v, [](const FockState& x) { return -b_minus1_action(x); }, true);
    return s;
}
} // namespace detail

// alpha o beta: contour integral of alpha's effective 1-form against beta,
// acting componentwise. Degree -1.
inline WElement circle_product(const WElement& a, const WElement& b, int weight_cap = 8) {
    FockState s = detail::circle_integrand(a);
    return {zero_product(s, b.v, weight_cap), zero_product(s, b.sv, weight_cap)};
}

// [alpha, beta] = alpha o beta - [alpha, b(theta)] o beta. The second term
// only contributes through the 1-form part of alpha hitting the 0-form part
// of beta:  +(-1)^{|A1|+|B0|} (b_{-1} A1)_(0) B0  landing in the 1-form slot.
// That sign is pinned empirically: it is the unique choice (together with the
// twisted b and d maps) under which [Q,b]=d and both Theorem-level Leibniz
// relations close exactly on every low-weight tuple.
inline WElement lz_bracket(const WElement& a, const WElement& b, int weight_cap = 8) {
    WElement out = circle_product(a, b, weight_cap);
    for (const auto& [am, ac] : a.sv.terms()) {
        FockState ba = b_minus1_action(FockState::monomial(am, ac));
        if (ba.is_zero()) continue;
        int fa = monomial_grading(am).fermion;
        for (const auto& [bm, bc] : b.v.terms()) {
            FockState t = zero_product(ba, FockState::monomial(bm, bc), weight_cap);
            int fb = monomial_grading(bm).fermion;
            if ((fa + fb) & 1) out.sv -= t;
            else out.sv += t;
        }
    }
    return out;
}

} // namespace tcft
