#pragma once

#include <cstdint>
#include <ostream>
#include <string>

namespace tcft {

// Free-field content of the chiral algebra: a fermionic first-order system
// psi+/psi- of weights (0,1) and a bosonic first-order system gamma/beta of
// weights (0,1). Conventions used throughout:
//
//   a(z) = sum_n a_n z^{-n-h},   h(psi+)=h(gamma)=0,  h(psi-)=h(beta)=1
//   psi+(z) psi-(w) ~ 1/(z-w),   gamma(z) beta(w) ~ 1/(z-w)
//   {psi+_m, psi-_n} = delta_{m+n,0},   [gamma_m, beta_n] = delta_{m+n,0}
//
// a_n adds weight -n. Fermion number: psi+ carries +1, psi- carries -1.
// Creation modes on the vacuum: psi+_n, gamma_n for n <= 0 (the two zero
// modes are declared creation operators) and psi-_n, beta_n for n <= -1.
enum class Field : std::uint8_t { PsiPlus = 0, PsiMinus = 1, Beta = 2, Gamma = 3 };

inline int field_weight(Field f) {
    return (f == Field::PsiMinus || f == Field::Beta) ? 1 : 0;
}
inline int field_fermion(Field f) {
    if (f == Field::PsiPlus) return 1;
    if (f == Field::PsiMinus) return -1;
    return 0;
}
inline bool field_is_odd(Field f) {
    return f == Field::PsiPlus || f == Field::PsiMinus;
}
inline const char* field_name(Field f) {
    switch (f) {
        case Field::PsiPlus: return "psi+";
        case Field::PsiMinus: return "psi-";
        case Field::Beta: return "beta";
        case Field::Gamma: return "gamma";
    }
    return "?";
}

struct ModeLabel {
    Field field;
    int n;

    int weight() const { return -n; }
    int fermion() const { return field_fermion(field); }
    bool odd() const { return field_is_odd(field); }
    bool creation() const {
        int h = field_weight(field);
        return h == 0 ? n <= 0 : n <= -1;
    }

    friend bool operator==(ModeLabel a, ModeLabel b) { return a.field == b.field && a.n == b.n; }
    friend bool operator!=(ModeLabel a, ModeLabel b) { return !(a == b); }
    friend bool operator<(ModeLabel a, ModeLabel b) {
        if (a.field != b.field) return a.field < b.field;
        return a.n < b.n;
    }
    friend std::ostream& operator<<(std::ostream& os, ModeLabel m) {
        return os << field_name(m.field) << "[" << m.n << "]";
    }
};

// delta-contraction of the graded commutator [m, f] between an annihilator m
// and another mode f. Returns 0 when the pair does not contract.
//   {psi+_m, psi-_n} = delta      [gamma_m, beta_n] = delta
//   {psi-_m, psi+_n} = delta      [beta_m, gamma_n] = -delta
inline int mode_contraction(ModeLabel m, ModeLabel f) {
    if (m.n + f.n != 0) return 0;
    switch (m.field) {
        case Field::PsiPlus: return f.field == Field::PsiMinus ? 1 : 0;
        case Field::PsiMinus: return f.field == Field::PsiPlus ? 1 : 0;
        case Field::Gamma: return f.field == Field::Beta ? 1 : 0;
        case Field::Beta: return f.field == Field::Gamma ? -1 : 0;
    }
    return 0;
}

} // namespace tcft
