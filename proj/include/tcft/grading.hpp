#pragma once

#include <ostream>

namespace tcft {

// Bigrading by conformal weight (L0 eigenvalue) and fermion number
// (N0 eigenvalue). Addition is componentwise.
struct Grading {
    int weight = 0;
    int fermion = 0;

    friend Grading operator+(Grading a, Grading b) {
        return {a.weight + b.weight, a.fermion + b.fermion};
    }
    friend Grading operator-(Grading a, Grading b) {
        return {a.weight - b.weight, a.fermion - b.fermion};
    }
    friend bool operator==(Grading a, Grading b) {
        return a.weight == b.weight && a.fermion == b.fermion;
    }
    friend bool operator!=(Grading a, Grading b) { return !(a == b); }
    friend std::ostream& operator<<(std::ostream& os, Grading g) {
        return os << "(" << g.weight << "," << g.fermion << ")";
    }
};

} // namespace tcft
