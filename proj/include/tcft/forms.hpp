#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcft/oper.hpp"
#include "tcft/welement.hpp"

namespace tcft {

// ---------------------------------------------------------------------------
// Nonlocal operator-valued forms on the full plane (two chiral sectors).
//
// An element is a sum of terms. A term is an ordered word of insertions, each
// at a position: the implicit base point ("z") or an integration variable of
// the term. Odd markers theta_p / thetabar_p (dz / dzbar at p) are stored on
// the slot of their position, immediately after the insertion; all reordering
// Koszul signs are applied eagerly when an operation creates or moves a
// marker. Contour extraction consumes a slot-local marker in place, which is
// the convention under which the chiral restriction reproduces welement.hpp
// exactly.
//
// Sign conventions (pinned by the exhaustive Theorem-level checks):
//   [x(p), b_{-1} theta] = -(-1)^{|x|} (b_{-1}x)(p) theta
//   d(x(p)) = -(-1)^{|x|} [ (L_{-1}x)(p) theta + (Lbar_{-1}x)(p) thetabar ]
// with d == [Q, b(theta)] as operators (DTwist::Twisted); DTwist::Plain keeps
// the untwisted variant for the record.
// ---------------------------------------------------------------------------

constexpr int POS_BASE = -1;

inline std::optional<int> state_parity(const FockState& s) {
    std::optional<int> p;
    for (auto& [m, c] : s.terms()) {
        int f = monomial_grading(m).fermion & 1;
        if (!p) p = f;
        else if (*p != f) return std::nullopt;
    }
    return p ? p : std::optional<int>(0);
}

struct TInsertion {
    FockState chi; // chiral state
    FockState bar; // antichiral state
    int pos = POS_BASE;
    bool theta = false;
    bool thetabar = false;

    bool is_zero() const { return chi.is_zero() || bar.is_zero(); }
    int parity() const {
        auto pc = state_parity(chi), pb = state_parity(bar);
        if (!pc || !pb) throw std::logic_error("TInsertion: parity-inhomogeneous state");
        return (*pc + *pb) & 1;
    }
    int parity_with_markers() const {
        return (parity() + (theta ? 1 : 0) + (thetabar ? 1 : 0)) & 1;
    }
    int marker_count() const { return (theta ? 1 : 0) + (thetabar ? 1 : 0); }
};

struct VarDomain {
    enum class Kind { Contour, Area } kind = Kind::Contour;
    int center = POS_BASE;
    double radius = 0.0;                        // contour radius or area outer radius
    std::vector<std::pair<int, double>> holes;  // area: excluded disks (center pos, radius)
};

struct WTerm {
    GaussianRational coeff;
    std::vector<VarDomain> vars;
    std::vector<TInsertion> slots;

    bool is_zero() const {
        if (coeff.is_zero()) return true;
        for (auto& s : slots)
            if (s.is_zero()) return true;
        return false;
    }

    int slot_at(int pos) const {
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (slots[i].pos == pos) return int(i);
        return -1;
    }
    int base_slot() const { return slot_at(POS_BASE); }
};

struct WbarElement {
    std::vector<WTerm> terms;

    bool is_zero() const { return terms.empty(); }

    // sums normalize eagerly so equal shapes merge and cancellations are literal
    WbarElement& operator+=(const WbarElement& o);
    friend WbarElement operator+(WbarElement a, const WbarElement& b) { return a += b; }
    friend WbarElement operator-(WbarElement a, WbarElement b) {
        for (auto& t : b.terms) t.coeff = -t.coeff;
        return a += b;
    }
    WbarElement operator*(const GaussianRational& c) const {
        WbarElement out = *this;
        for (auto& t : out.terms) t.coeff = t.coeff * c;
        return out;
    }
};

// --- canonical comparison for term merging ---------------------------------

namespace detail {

inline int cmp_int(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

inline int cmp_state(const FockState& a, const FockState& b) {
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
    }
    if (ia != a.terms().end()) return 1;
    if (ib != b.terms().end()) return -1;
    return 0;
}

inline int cmp_insertion(const TInsertion& a, const TInsertion& b) {
    if (int c = cmp_int(a.pos, b.pos)) return c;
    if (int c = cmp_int(a.theta, b.theta)) return c;
    if (int c = cmp_int(a.thetabar, b.thetabar)) return c;
    if (int c = cmp_state(a.chi, b.chi)) return c;
    return cmp_state(a.bar, b.bar);
}

inline int cmp_var(const VarDomain& a, const VarDomain& b) {
    if (int c = cmp_int(int(a.kind), int(b.kind))) return c;
    if (int c = cmp_int(a.center, b.center)) return c;
    if (int c = cmp_int(a.holes.size(), b.holes.size())) return c;
    if (a.radius != b.radius) return a.radius < b.radius ? -1 : 1;
    for (std::size_t i = 0; i < a.holes.size(); ++i) {
        if (int c = cmp_int(a.holes[i].first, b.holes[i].first)) return c;
        if (a.holes[i].second != b.holes[i].second) return a.holes[i].second < b.holes[i].second ? -1 : 1;
    }
    return 0;
}

inline int cmp_term_shape(const WTerm& a, const WTerm& b) {
    if (int c = cmp_int(a.vars.size(), b.vars.size())) return c;
    if (int c = cmp_int(a.slots.size(), b.slots.size())) return c;
    for (std::size_t i = 0; i < a.vars.size(); ++i)
        if (int c = cmp_var(a.vars[i], b.vars[i])) return c;
    for (std::size_t i = 0; i < a.slots.size(); ++i)
        if (int c = cmp_insertion(a.slots[i], b.slots[i])) return c;
    return 0;
}

} // namespace detail

inline void normalize(WbarElement& e);

inline WbarElement& WbarElement::operator+=(const WbarElement& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    normalize(*this);
    return *this;
}

inline void normalize(WbarElement& e) {
    std::vector<WTerm> kept;
    for (auto& t : e.terms)
        if (!t.is_zero()) kept.push_back(std::move(t));
    std::sort(kept.begin(), kept.end(),
              [](const WTerm& a, const WTerm& b) { return detail::cmp_term_shape(a, b) < 0; });
    std::vector<WTerm> merged;
    for (auto& t : kept) {
        if (!merged.empty() && detail::cmp_term_shape(merged.back(), t) == 0)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const WTerm& t) { return t.coeff.is_zero(); });
    e.terms = std::move(merged);
}

// --- constructors -----------------------------------------------------------

// local element at the base point with the given form component
inline WbarElement local_form(FockState chi, FockState bar, bool theta = false, bool thetabar = false) {
    WTerm t;
    t.coeff = GaussianRational(Rational(1));
    TInsertion ins;
    ins.chi = std::move(chi);
    ins.bar = std::move(bar);
    ins.pos = POS_BASE;
    ins.theta = theta;
    ins.thetabar = thetabar;
    t.slots.push_back(std::move(ins));
    WbarElement e;
    if (!t.is_zero()) e.terms.push_back(std::move(t));
    return e;
}

// --- position remapping ------------------------------------------------------

inline WTerm remap_base(WTerm t, int new_pos) {
    for (auto& s : t.slots)
        if (s.pos == POS_BASE) s.pos = new_pos;
    for (auto& v : t.vars) {
        if (v.center == POS_BASE) v.center = new_pos;
        for (auto& h : v.holes)
            if (h.first == POS_BASE) h.first = new_pos;
    }
    return t;
}

inline WTerm offset_vars(WTerm t, int k) {
    for (auto& s : t.slots)
        if (s.pos >= 0) s.pos += k;
    for (auto& v : t.vars) {
        if (v.center >= 0) v.center += k;
        for (auto& h : v.holes)
            if (h.first >= 0) h.first += k;
    }
    return t;
}

// --- graded operations -------------------------------------------------------

namespace detail {

inline int word_parity_before(const WTerm& t, std::size_t i) {
    int p = 0;
    for (std::size_t k = 0; k < i; ++k) p ^= t.slots[k].parity_with_markers() & 1;
    return p;
}

// insertion parities only: what a deformed current contour crosses
inline int insertion_parity_before(const WTerm& t, std::size_t i) {
    int p = 0;
    for (std::size_t k = 0; k < i; ++k) p ^= t.slots[k].parity() & 1;
    return p;
}

// markers only: what the de Rham differential's new marker crosses
inline int marker_count_before(const WTerm& t, std::size_t i) {
    int p = 0;
    for (std::size_t k = 0; k < i; ++k) p ^= t.slots[k].marker_count() & 1;
    return p;
}

} // namespace detail

namespace convention {
// Sign conventions of the marker calculus, pinned jointly by: the exact
// chiral engine (Theorem-level identities), the finite-difference derivative
// oracle for d, commutation of evaluation with the Q action, and the
// numerical closure of the parameter-dependent Leibniz relation across
// chirality sectors. The paper's notation leaves each of these orientations
// free; tests record the pinned values.
inline int remote_theta = -1;
inline int remote_thetabar = -1;
inline bool b_pc_cross = true;
inline bool q_form_cross = true; // Q picks (-1)^(base form degree) acting on forms
inline bool b_form_cross = false;
} // namespace convention

namespace detail {

// A marker created by a commutator sits right after the insertion it was made
// at; move it to its canonical place on the slot at target_pos, tracking the
// odd crossings. Returns false when the marker squares to zero.
inline bool plant_marker(WTerm& t, std::size_t i, int target_pos, bool barred, int& sign) {
    int j = t.slot_at(target_pos);
    if (j < 0) throw std::logic_error("plant_marker: no slot at target position");
    if (j < int(i)) throw std::logic_error("plant_marker: leftward migration unsupported");
    if (j > int(i)) {
        if (t.slots[i].marker_count() & 1) sign = -sign;
        for (std::size_t k = i + 1; k < std::size_t(j); ++k)
            if (t.slots[k].parity_with_markers() & 1) sign = -sign;
        if (t.slots[j].parity() & 1) sign = -sign;
        sign *= barred ? convention::remote_thetabar : convention::remote_theta;
    }
    TInsertion& tgt = t.slots[j];
    if (!barred) {
        if (tgt.theta) return false;
        tgt.theta = true;
    } else {
        if (tgt.thetabar) return false;
        if (tgt.theta) sign = -sign; // thetabar lands after theta
        tgt.thetabar = true;
    }
    return true;
}

} // namespace detail

// Q + Qbar distributed over the word. The deformed current contour crosses
// the insertions, not the measure markers, so the prefix counts insertion
// parities only; this is what makes evaluation commute with the Q action.
inline WbarElement apply_Q(const WbarElement& e) {
    WbarElement out;
    for (const auto& t : e.terms) {
        int form_flip = 0;
        if (convention::q_form_cross) {
            int bs = t.base_slot();
            if (bs >= 0) form_flip = t.slots[bs].marker_count() & 1;
        }
        for (std::size_t i = 0; i < t.slots.size(); ++i) {
            int prefix = detail::insertion_parity_before(t, i) ^ form_flip;
            Rational sgn(prefix ? -1 : 1);
            {
                WTerm nt = t;
                nt.slots[i].chi = Q_action(nt.slots[i].chi);
                nt.coeff = nt.coeff * GaussianRational(sgn);
                if (!nt.is_zero()) out.terms.push_back(std::move(nt));
            }
            {
                WTerm nt = t;
                auto pc = state_parity(nt.slots[i].chi);
                Rational ts(((*pc) & 1) ? -1 : 1);
                nt.slots[i].bar = Q_action(nt.slots[i].bar);
                nt.coeff = nt.coeff * GaussianRational(sgn * ts);
                if (!nt.is_zero()) out.terms.push_back(std::move(nt));
            }
        }
    }
    normalize(out);
    return out;
}

namespace detail {

enum class PrefixMode { None, Insertions, Markers, Total };

// Shared engine for [phi, b(theta_target)] and the d-action: hits every slot
// in [lo, hi) with a mode map and plants a marker at target_pos.
//   prefix:   Koszul crossings charged when distributing over the word
//   twist:    local sign -(-1)^{|x_i|}; plain = +1
//   pc_cross: charge (-1)^{|chi_i|} when the antichiral mode enters the factor
template <class ChiralOp, class AntiOp>
WbarElement marker_mode_action(const WbarElement& e, int target_pos, ChiralOp&& cop, AntiOp&& aop,
                               PrefixMode prefix, bool twist, bool pc_cross, std::size_t lo = 0,
                               std::size_t hi = SIZE_MAX, bool form_cross = false) {
    WbarElement out;
    for (const auto& t : e.terms) {
        int form_flip = 0;
        if (form_cross) {
            int bs = t.base_slot();
            if (bs >= 0) form_flip = t.slots[bs].marker_count() & 1;
        }
        for (std::size_t i = lo; i < std::min(hi, t.slots.size()); ++i) {
            int base_sign = form_flip ? -1 : 1;
            switch (prefix) {
                case PrefixMode::None: break;
                case PrefixMode::Insertions:
                    if (detail::insertion_parity_before(t, i)) base_sign = -base_sign;
                    break;
                case PrefixMode::Markers:
                    if (detail::marker_count_before(t, i)) base_sign = -base_sign;
                    break;
                case PrefixMode::Total:
                    if (detail::word_parity_before(t, i)) base_sign = -base_sign;
                    break;
            }
            if (twist) {
                base_sign = -base_sign; // the -(-1)^{|x|} rule
                if (t.slots[i].parity() & 1) base_sign = -base_sign;
            }
            // chiral hit, marker theta_target
            {
                WTerm nt = t;
                nt.slots[i].chi = cop(nt.slots[i].chi);
                int sgn = base_sign;
                if (!nt.is_zero() && detail::plant_marker(nt, i, target_pos, false, sgn)) {
                    nt.coeff = nt.coeff * GaussianRational(Rational(sgn));
                    if (!nt.is_zero()) out.terms.push_back(std::move(nt));
                }
            }
            // antichiral hit, marker thetabar_target
            {
                WTerm nt = t;
                auto pc = state_parity(nt.slots[i].chi);
                int sgn = base_sign;
                if (pc_cross && ((*pc) & 1)) sgn = -sgn;
                nt.slots[i].bar = aop(nt.slots[i].bar);
                if (!nt.is_zero() && detail::plant_marker(nt, i, target_pos, true, sgn)) {
                    nt.coeff = nt.coeff * GaussianRational(Rational(sgn));
                    if (!nt.is_zero()) out.terms.push_back(std::move(nt));
                }
            }
        }
    }
    normalize(out);
    return out;
}

} // namespace detail

// [phi, b(theta at target_pos)], optionally restricted to a slot range.
inline WbarElement b_theta_action(const WbarElement& e, int target_pos = POS_BASE,
                                  std::size_t lo = 0, std::size_t hi = SIZE_MAX) {
    return detail::marker_mode_action(
        e, target_pos, [](const FockState& s) { return b_minus1_action(s); },
        [](const FockState& s) { return b_minus1_action(s); }, detail::PrefixMode::None,
        /*twist=*/true, convention::b_pc_cross, lo, hi, convention::b_form_cross);
}

// The de Rham differential at the base point, defined at the level of the
// component functions: translating all insertions rigidly with z. For
// w = F + B theta + B' thetabar + C theta thetabar this produces
//   dw = (dF/dz) theta + (dF/dzbar) thetabar + (dB'/dz - dB/dzbar) theta thetabar,
// with the derivatives realized exactly by L_{-1}/Lbar_{-1} descendants. No
// operator Koszul signs enter: this is what makes evaluation commute with d
// (checked against finite differences) and what the Stokes mechanism needs.
// DTwist::Plain keeps the string-convention variant, the operator commutator
// [Q, b(theta)], for the record.
inline WbarElement apply_d(const WbarElement& e, DTwist tw = DTwist::Twisted) {
    if (tw == DTwist::Plain)
        return detail::marker_mode_action(
            e, POS_BASE, [](const FockState& s) { return Lminus1_action(s); },
            [](const FockState& s) { return Lminus1_action(s); }, detail::PrefixMode::Total,
            /*twist=*/true, /*pc_cross=*/false, 0, SIZE_MAX);
    WbarElement out;
    for (const auto& t : e.terms) {
        int bs = t.base_slot();
        if (bs < 0) throw std::logic_error("apply_d: term without a base slot");
        bool th = t.slots[bs].theta, thb = t.slots[bs].thetabar;
        if (th && thb) continue; // d kills top forms
        for (std::size_t i = 0; i < t.slots.size(); ++i) {
            if (!th) { // d/dz lands in the theta slot (from F) or the top (from B')
                WTerm nt = t;
                nt.slots[i].chi = Lminus1_action(nt.slots[i].chi);
                nt.slots[bs].theta = true;
                if (!nt.is_zero()) out.terms.push_back(std::move(nt));
            }
            if (!thb) { // d/dzbar; from the theta component with the minus of theta^dzbar
                WTerm nt = t;
                nt.slots[i].bar = Lminus1_action(nt.slots[i].bar);
                nt.slots[bs].thetabar = true;
                if (th) nt.coeff = -nt.coeff;
                if (!nt.is_zero()) out.terms.push_back(std::move(nt));
            }
        }
    }
    normalize(out);
    return out;
}

inline WbarElement apply_D(const WbarElement& e, DTwist tw = DTwist::Twisted) {
    return apply_Q(e) + apply_d(e, tw);
}

// hat completion: phi + [phi,b] + 1/2 [[phi,b],b]
inline WbarElement hat(const WbarElement& e) {
    WbarElement b1 = b_theta_action(e);
    WbarElement b2 = b_theta_action(b1) * GaussianRational(Rational(1, 2));
    WbarElement out = e + b1 + b2;
    normalize(out);
    return out;
}

// total degree (fermion numbers + form degree) of a homogeneous element
inline std::optional<int> total_degree(const WbarElement& e) {
    std::optional<int> d;
    for (const auto& t : e.terms) {
        int td = 0;
        for (const auto& s : t.slots) {
            auto pc = state_parity(s.chi), pb = state_parity(s.bar);
            auto gc = state_grading(s.chi), gb = state_grading(s.bar);
            if (!gc || !gb) return std::nullopt;
            td += gc->fermion + gb->fermion + s.marker_count();
            (void)pc;
            (void)pb;
        }
        if (!d) d = td;
        else if (*d != td) return std::nullopt;
    }
    return d;
}

// Keep only terms whose markers saturate every integration variable's
// dimension: one marker on a contour variable, both on an area variable.
inline void prune_saturation(WbarElement& e) {
    std::erase_if(e.terms, [](const WTerm& t) {
        for (std::size_t v = 0; v < t.vars.size(); ++v) {
            int th = 0, thb = 0;
            for (const auto& s : t.slots)
                if (s.pos == int(v)) {
                    th += s.theta ? 1 : 0;
                    thb += s.thetabar ? 1 : 0;
                }
            if (t.vars[v].kind == VarDomain::Kind::Contour) {
                if (th + thb != 1) return true;
            } else {
                if (th != 1 || thb != 1) return true;
            }
        }
        return false;
    });
}

// maximal distance of any content of the term from the base point
inline double term_extent(const WTerm& t) {
    auto pos_extent = [&](int pos, auto&& self) -> double {
        if (pos == POS_BASE) return 0.0;
        const VarDomain& v = t.vars.at(pos);
        return self(v.center, self) + v.radius;
    };
    double m = 0.0;
    for (const auto& s : t.slots) m = std::max(m, pos_extent(s.pos, pos_extent));
    for (std::size_t v = 0; v < t.vars.size(); ++v)
        m = std::max(m, pos_extent(int(v), pos_extent));
    return m;
}

inline double element_size(const WbarElement& e) {
    double m = 0.0;
    for (const auto& t : e.terms) m = std::max(m, term_extent(t));
    return m;
}

// Degree of the element as a nonlocal form: marker content minus the form
// degree consumed by each integration variable.
inline std::optional<int> nonlocal_degree(const WbarElement& e) {
    auto d = total_degree(e);
    if (!d || e.terms.empty()) return d;
    int dims = 0;
    for (const auto& v : e.terms.front().vars)
        dims += v.kind == VarDomain::Kind::Contour ? 1 : 2;
    for (const auto& t : e.terms) {
        int td = 0;
        for (const auto& v : t.vars) td += v.kind == VarDomain::Kind::Contour ? 1 : 2;
        if (td != dims) return std::nullopt; // mixed shapes: no single degree
    }
    return *d - dims;
}

// Separation rule for multi-insertion correlators of nonlocal operators.
// The default declares supports-disjoint configurations well defined; the
// paper's verbatim inequality reads in the opposite direction and is kept
// selectable for the record.
enum class SeparationRule { SupportsDisjoint, PaperVerbatim };

inline bool compose_sizes(const std::vector<std::pair<std::complex<double>, double>>& ops,
                          SeparationRule rule = SeparationRule::SupportsDisjoint) {
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j) {
            double dist = std::abs(ops[i].first - ops[j].first);
            double rsum = ops[i].second + ops[j].second;
            bool ok = rule == SeparationRule::SupportsDisjoint ? dist > rsum : dist < rsum;
            if (!ok) return false;
        }
    return true;
}

} // namespace tcft
