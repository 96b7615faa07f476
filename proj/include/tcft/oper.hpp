#pragma once

#include <stdexcept>

#include "tcft/fock.hpp"
#include "tcft/koszul.hpp"

namespace tcft {

// Distinguished fields of the topological algebra, realized on the free
// system of modes.hpp:
//
//   J = -:psi+ beta:          weight 1, fermion +1
//   b =  :psi- dgamma:        weight 2, fermion -1
//   N =  :psi+ psi-:          weight 1, fermion  0
//   L = -:beta dgamma: - :psi- dpsi+:   (Virasoro, central charge 0)
//
// With these signs Q = J_0 satisfies Q^2 = 0 and [Q, b(z)] = L(z) holds
// mode by mode; L_0 and N_0 eigenvalues realize the bigrading.
//
// Mode index convention is the physics one: X_n multiplies z^{-n-h(X)}.

struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline int mode_range(const FockState& s, int n) { return max_mode_index(s) + std::abs(n) + 2; }
}

// J_n = -sum_k :psi+_k beta_{n-k}:
inline FockState J_mode(int n, const FockState& s) {
    FockState out;
    if (s.is_zero()) return out;
    int R = detail::mode_range(s, n);
    for (int k = -R; k <= R; ++k)
        out -= normal_pair_action({Field::PsiPlus, k}, {Field::Beta, n - k}, s);
    return out;
}

// b_n = sum_k (k-n) :psi-_k gamma_{n-k}:
inline FockState b_mode(int n, const FockState& s) {
    FockState out;
    if (s.is_zero()) return out;
    int R = detail::mode_range(s, n);
    for (int k = -R; k <= R; ++k) {
        if (k == n) continue;
        FockState t = normal_pair_action({Field::PsiMinus, k}, {Field::Gamma, n - k}, s);
        out += t * Rational(k - n);
    }
    return out;
}

// N_n = sum_k :psi+_k psi-_{n-k}:
inline FockState N_mode(int n, const FockState& s) {
    FockState out;
    if (s.is_zero()) return out;
    int R = detail::mode_range(s, n);
    for (int k = -R; k <= R; ++k)
        out += normal_pair_action({Field::PsiPlus, k}, {Field::PsiMinus, n - k}, s);
    return out;
}

// L_n = sum_k (n-k) [ :beta_k gamma_{n-k}: + :psi-_k psi+_{n-k}: ]
inline FockState L_mode(int n, const FockState& s) {
    FockState out;
    if (s.is_zero()) return out;
    int R = detail::mode_range(s, n);
    for (int k = -R; k <= R; ++k) {
        if (k == n) continue;
        FockState t = normal_pair_action({Field::Beta, k}, {Field::Gamma, n - k}, s);
        t += normal_pair_action({Field::PsiMinus, k}, {Field::PsiPlus, n - k}, s);
        out += t * Rational(n - k);
    }
    return out;
}

inline FockState Q_action(const FockState& s) { return J_mode(0, s); }
inline FockState b0_action(const FockState& s) { return b_mode(0, s); }
// b_{-1} is the mode entering the contour operations ("b_(0)" in VOA indexing)
inline FockState b_minus1_action(const FockState& s) { return b_mode(-1, s); }
inline FockState Lminus1_action(const FockState& s) { return L_mode(-1, s); }
inline FockState N0_action(const FockState& s) { return N_mode(0, s); }

// The four distinguished states, gradings verified on construction.
struct StructureFields {
    FockState J, b, N, L;
};

inline StructureFields structure_fields() {
    StructureFields f;
    f.J = J_mode(-1, vacuum_state());
    f.b = b_mode(-2, vacuum_state());
    f.N = N_mode(-1, vacuum_state());
    f.L = L_mode(-2, vacuum_state());
    auto expect = [](const FockState& s, Grading g, const char* name) {
        auto got = state_grading(s);
        if (!got || *got != g)
            throw std::logic_error(std::string("structure field grading broken: ") + name);
    };
    expect(f.J, {1, 1}, "J");
    expect(f.b, {2, -1}, "b");
    expect(f.N, {1, 0}, "N");
    expect(f.L, {2, 0}, "L");
    return f;
}

// ---------------------------------------------------------------------------
// Generic vertex operator modes, reconstructed from the free-field dictionary
// a_{-h-k}|0> <-> (d^k a)/k!. A monomial maps to the normal-ordered product
// of its derivative fields; modes are computed by the recursive splitting
//   (:F R:)_n = sum_{k cre} F_k (R)_{n-k} + (-1)^{|F||R|} sum_{k ann} (R)_{n-k} F_k.
// ---------------------------------------------------------------------------

struct FieldFactor {
    Field field;
    int deriv; // k in (d^k a)/k!
    int weight() const { return field_weight(field) + deriv; }
    bool odd() const { return field_is_odd(field); }
};

inline std::vector<FieldFactor> monomial_factors(const FockMonomial& m) {
    std::vector<FieldFactor> fs;
    fs.reserve(m.size());
    for (ModeLabel mode : m) {
        int k = -mode.n - field_weight(mode.field);
        if (k < 0) throw std::logic_error("monomial_factors: annihilation mode in monomial");
        fs.push_back({mode.field, k});
    }
    return fs;
}

// Mode s of the normalized derivative field (d^k a)/k! acting on v:
// coefficient binom(-s-h, k) times the underlying mode a_s.
inline FockState factor_mode(const FieldFactor& f, int s, const FockState& v) {
    std::int64_t c = binomial_signed(-s - field_weight(f.field), f.deriv);
    if (c == 0) return {};
    FockState r = mode_action(f.field, s, v);
    return c == 1 ? r : r * Rational(c);
}

namespace detail {

inline int max_weight_of(const FockState& s) {
    int w = 0;
    for (const auto& [mono, c] : s.terms()) w = std::max(w, monomial_grading(mono).weight);
    return w;
}

// (:F_i ... F_r:)_n v. All states have weight >= 0, which bounds both mode
// sums: creation k >= n - wt(v), annihilation k <= wt(v).
inline FockState composite_mode(const std::vector<FieldFactor>& fs, std::size_t i, int n,
                                const FockState& v) {
    if (v.is_zero()) return {};
    if (i == fs.size()) return n == 0 ? v : FockState{};
    const FieldFactor& head = fs[i];
    int rest_parity = 0;
    for (std::size_t j = i + 1; j < fs.size(); ++j) rest_parity ^= fs[j].odd() ? 1 : 0;

    const int wv = max_weight_of(v);
    FockState out;
    for (int k = n - wv; k <= wv; ++k) {
        ModeLabel m{head.field, k};
        if (m.creation()) {
            FockState inner = composite_mode(fs, i + 1, n - k, v);
            if (inner.is_zero()) continue;
            out += factor_mode(head, k, inner);
        } else {
            FockState lead = factor_mode(head, k, v);
            if (lead.is_zero()) continue;
            FockState t = composite_mode(fs, i + 1, n - k, lead);
            if (t.is_zero()) continue;
            if (head.odd() && rest_parity) out -= t;
            else out += t;
        }
    }
    return out;
}

} // namespace detail

// n-th mode (physics indexing on the composite weight) of the vertex operator
// of state a applied to s. For the vacuum this is delta_{n,0} id; for the
// Virasoro state, n=0 gives the weight.
inline FockState vertex_mode(const FockState& a, int n, const FockState& s, int weight_cap = 8) {
    if (detail::max_weight_of(s) - n > weight_cap)
        throw TruncationError("vertex_mode: output weight above configured bound");
    FockState out;
    for (const auto& [mono, coeff] : a.terms()) {
        auto fs = monomial_factors(mono);
        FockState t = detail::composite_mode(fs, 0, n, s);
        out += t * coeff;
    }
    return out;
}

// VOA-style a_(n): a_(n) = a_{phys, n+1-wt(a)} on homogeneous a.
inline FockState borcherds_mode(const FockState& a, int n, const FockState& s, int weight_cap = 8) {
    auto ag = state_grading(a);
    if (!ag) throw std::invalid_argument("borcherds_mode: inhomogeneous state");
    return vertex_mode(a, n + 1 - ag->weight, s, weight_cap);
}

// Residue product X_(0) Y, the contour-extraction entering every bracket.
inline FockState zero_product(const FockState& x, const FockState& y, int weight_cap = 8) {
    FockState out;
    for (const auto& [mono, coeff] : x.terms()) {
        FockState xm = FockState::monomial(mono, coeff);
        int w = monomial_grading(mono).weight;
        out += vertex_mode(xm, 1 - w, y, weight_cap);
    }
    return out;
}

} // namespace tcft
