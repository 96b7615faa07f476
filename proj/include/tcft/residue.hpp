#pragma once

#include "tcft/wick.hpp"

namespace tcft {

struct ResidueUnreliable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace residue {

// product of linear factors (v + b)^e (monic after normalization)
struct LinFactor {
    Complex b;
    int e;
};

// Residue sum of prefac * prod (v + b_k)^{e_k} over poles strictly inside the
// circle |v - c| = r, times 2 pi i (counterclockwise contour integral).
inline Complex contour_by_residues(std::vector<LinFactor> fs, Complex prefac, Complex c, double r) {
    // merge coincident roots
    std::sort(fs.begin(), fs.end(), [](const LinFactor& x, const LinFactor& y) {
        if (x.b.real() != y.b.real()) return x.b.real() < y.b.real();
        return x.b.imag() < y.b.imag();
    });
    std::vector<LinFactor> merged;
    for (auto& f : fs) {
        if (!merged.empty() && std::abs(merged.back().b - f.b) < 1e-13 * (1.0 + std::abs(f.b)))
            merged.back().e += f.e;
        else
            merged.push_back(f);
    }
    std::erase_if(merged, [](const LinFactor& f) { return f.e == 0; });

    Complex total{0, 0};
    for (std::size_t j = 0; j < merged.size(); ++j) {
        if (merged[j].e >= 0) continue;
        Complex pole = -merged[j].b;
        double d = std::abs(pole - c);
        if (d > r * (1.0 + 1e-8)) continue;
        if (d > r * (1.0 - 1e-8))
            throw ResidueUnreliable("pole within guard band of the contour");
        int m = -merged[j].e;
        // G = prod_{k != j} (v + b_k)^{e_k}; residue = G^{(m-1)}(pole)/(m-1)!
        struct DTerm {
            Complex coeff;
            std::vector<int> extra;
        };
        std::vector<DTerm> terms{{Complex(1, 0), std::vector<int>(merged.size(), 0)}};
        for (int d1 = 1; d1 < m; ++d1) {
            std::vector<DTerm> next;
            for (auto& t : terms)
                for (std::size_t k = 0; k < merged.size(); ++k) {
                    if (k == j) continue;
                    int ek = merged[k].e - t.extra[k];
                    if (ek == 0) continue;
                    auto ex = t.extra;
                    ex[k] += 1;
                    next.push_back({t.coeff * Complex(double(ek), 0), std::move(ex)});
                }
            terms = std::move(next);
        }
        double fact = 1.0;
        for (int q = 2; q < m; ++q) fact *= q;
        Complex res{0, 0};
        for (auto& t : terms) {
            Complex val = t.coeff;
            for (std::size_t k = 0; k < merged.size(); ++k) {
                if (k == j) continue;
                int ek = merged[k].e - t.extra[k];
                Complex base = pole + merged[k].b;
                if (ek == 0) continue;
                Complex p{1, 0};
                int a = std::abs(ek);
                for (int q = 0; q < a; ++q) p *= base;
                val = ek > 0 ? val * p : val / p;
            }
            res += val;
        }
        total += res / fact;
    }
    return total * prefac * Complex(0, 2.0 * M_PI);
}

} // namespace residue

// Exact contour integral of one compiled correlator over the single
// integration variable (index 0), all other positions fixed. marker = 0
// integrates against dv, marker = 1 against dvbar (the circle substitution
// vbar = cbar + r^2/(v - c) turns antichiral factors into rational ones).
inline Complex contour_residue_integral(const CompiledCorrelator& corr,
                                        const std::vector<Complex>& positions, Complex c, double r,
                                        int marker) {
    Complex total{0, 0};
    for (const auto& p : corr.pairings) {
        std::vector<residue::LinFactor> fs;
        Complex pref = p.coeff;
        int var_cbar_pow = 0; // powers of (v - c) from the inversion substitution
        for (const auto& f : p.factors) {
            bool va = f.a == 0, vb = f.b == 0;
            if (!va && !vb) {
                Complex d = f.anti ? std::conj(positions[f.a]) - std::conj(positions[f.b])
                                   : positions[f.a] - positions[f.b];
                for (int q = 0; q < f.expo; ++q) pref /= d;
                continue;
            }
            if (va && vb) throw std::logic_error("contour_residue_integral: self factor");
            Complex other = positions[va ? f.b : f.a];
            if (!f.anti) {
                // (v - q)^{-e} or (q - v)^{-e} = (-1)^e (v - q)^{-e}
                if (!va && (f.expo & 1)) pref = -pref;
                fs.push_back({-other, -f.expo});
            } else {
                // vbar - qbar = ((cbar - qbar)(v - c) + r^2)/(v - c)
                Complex A = std::conj(c) - std::conj(other);
                if (!va && (f.expo & 1)) pref = -pref;
                var_cbar_pow += f.expo; // (v-c)^{+e}
                if (std::abs(A) < 1e-14) {
                    // pure inversion: vbar - cbar = r^2/(v-c)
                    for (int q = 0; q < f.expo; ++q) pref /= (r * r);
                    // (v-c)^{+e} stays (accounted below)
                } else {
                    // (A(v-c) + r^2)^{-e} = A^{-e} (v + (r^2/A - c))^{-e}
                    for (int q = 0; q < f.expo; ++q) pref /= A;
                    fs.push_back({r * r / A - c, -f.expo});
                }
            }
        }
        if (marker == 1) {
            // dvbar = -r^2/(v-c)^2 dv on the circle
            pref *= -(r * r);
            var_cbar_pow -= 2;
        }
        if (var_cbar_pow != 0) fs.push_back({-c, var_cbar_pow});
        total += residue::contour_by_residues(std::move(fs), pref, c, r);
    }
    return total;
}

} // namespace tcft
