#pragma once

#include <map>
#include <optional>

#include "tcft/grading.hpp"
#include "tcft/rational.hpp"

namespace tcft {

// Exact linear combination of basis monomials. Zero coefficients are never
// stored. Key must be strictly ordered; Coeff must be an exact scalar.
template <class Key, class Coeff = Rational>
class SparseVector {
public:
    using map_type = std::map<Key, Coeff>;

    SparseVector() = default;

    static SparseVector monomial(Key k, Coeff c = Coeff(1)) {
        SparseVector v;
        if (!c.is_zero()) v.terms_[std::move(k)] = std::move(c);
        return v;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const map_type& terms() const { return terms_; }

    Coeff coeff(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    void add(const Key& k, const Coeff& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.try_emplace(k, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    SparseVector& operator+=(const SparseVector& o) {
        for (auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    SparseVector& operator-=(const SparseVector& o) {
        for (auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend SparseVector operator+(SparseVector a, const SparseVector& b) { return a += b; }
    friend SparseVector operator-(SparseVector a, const SparseVector& b) { return a -= b; }

    SparseVector operator*(const Coeff& s) const {
        SparseVector v;
        if (s.is_zero()) return v;
        for (auto& [k, c] : terms_) v.terms_[k] = c * s;
        return v;
    }
    SparseVector operator-() const { return *this * Coeff(-1); }

    friend bool operator==(const SparseVector& a, const SparseVector& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const SparseVector& a, const SparseVector& b) { return !(a == b); }

    // Grading of a homogeneous vector, if every monomial agrees under `grade`.
    template <class GradeFn>
    std::optional<Grading> homogeneous_grading(GradeFn&& grade) const {
        std::optional<Grading> g;
        for (auto& [k, c] : terms_) {
            Grading gk = grade(k);
            if (!g) g = gk;
            else if (*g != gk) return std::nullopt;
        }
        return g;
    }

private:
    map_type terms_;
};

} // namespace tcft
