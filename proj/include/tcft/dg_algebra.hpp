#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcft/graded_vector.hpp"
#include "tcft/leibniz_rel.hpp"
#include "tcft/rational.hpp"

namespace tcft {

// Finite-dimensional differential graded Leibniz algebra given by explicit
// structure constants. Used as the independent oracle for the relation
// generator: everything here is checkable by brute force over the basis.
//
// Text format (one directive per line, '#' comments):
//   dim N
//   degree i <int>
//   d i -> <coeff> j
//   bracket i j -> <coeff> k
// <coeff> is an integer or "p/q".
class DGLeibnizAlgebra {
public:
    using Vec = SparseVector<int, Rational>;

    int dim = 0;
    std::vector<int> degrees;
    std::map<int, std::vector<std::pair<Rational, int>>> diff;
    std::map<std::pair<int, int>, std::vector<std::pair<Rational, int>>> brk;

    static Rational parse_coeff(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }

    static DGLeibnizAlgebra load(std::istream& in) {
        DGLeibnizAlgebra a;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            std::string tok;
            if (!(ss >> tok)) continue;
            try {
                if (tok == "dim") {
                    ss >> a.dim;
                    a.degrees.assign(a.dim, 0);
                } else if (tok == "degree") {
                    int i, d;
                    ss >> i >> d;
                    a.degrees.at(i) = d;
                } else if (tok == "d") {
                    int i, j;
                    std::string c, arrow;
                    ss >> i >> arrow >> c >> j;
                    if (arrow != "->") throw std::runtime_error("expected '->'");
                    a.diff[i].emplace_back(parse_coeff(c), j);
                } else if (tok == "bracket") {
                    int i, j, k;
                    std::string c, arrow;
                    ss >> i >> j >> arrow >> c >> k;
                    if (arrow != "->") throw std::runtime_error("expected '->'");
                    a.brk[{i, j}].emplace_back(parse_coeff(c), k);
                } else {
                    throw std::runtime_error("unknown directive '" + tok + "'");
                }
            } catch (const std::exception& e) {
                throw std::runtime_error("structure table line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (a.dim <= 0) throw std::runtime_error("structure table: missing 'dim'");
        return a;
    }

    static DGLeibnizAlgebra load_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw std::runtime_error("cannot open structure table: " + path);
        return load(f);
    }

    Vec basis(int i) const { return Vec::monomial(i); }

    Vec apply_d(const Vec& v) const {
        Vec out;
        for (auto& [i, c] : v.terms()) {
            auto it = diff.find(i);
            if (it == diff.end()) continue;
            for (auto& [s, j] : it->second) out.add(j, c * s);
        }
        return out;
    }

    Vec bracket(const Vec& x, const Vec& y) const {
        Vec out;
        for (auto& [i, ci] : x.terms())
            for (auto& [j, cj] : y.terms()) {
                auto it = brk.find({i, j});
                if (it == brk.end()) continue;
                for (auto& [s, k] : it->second) out.add(k, ci * cj * s);
            }
        return out;
    }

    int degree(int i) const { return degrees.at(i); }

    // Brute-force verification that the table really is a DG Leibniz algebra:
    // d^2 = 0, d a derivation of the bracket, and the graded Leibniz identity
    //   [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
    // on every basis triple. Returns a description of the first failure.
    std::string check() const {
        for (int i = 0; i < dim; ++i)
            if (!apply_d(apply_d(basis(i))).is_zero())
                return "d^2 != 0 on basis " + std::to_string(i);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                Vec lhs = apply_d(bracket(basis(i), basis(j)));
                Vec rhs = bracket(apply_d(basis(i)), basis(j));
                Rational sgn((degrees[i] & 1) ? -1 : 1);
                rhs += bracket(basis(i), apply_d(basis(j))) * sgn;
                if (lhs != rhs)
                    return "d not a derivation on (" + std::to_string(i) + "," + std::to_string(j) + ")";
            }
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                for (int k = 0; k < dim; ++k) {
                    Vec lhs = bracket(basis(i), bracket(basis(j), basis(k)));
                    Vec rhs = bracket(bracket(basis(i), basis(j)), basis(k));
                    Rational sgn(((degrees[i] * degrees[j]) & 1) ? -1 : 1);
                    rhs += bracket(basis(j), bracket(basis(i), basis(k))) * sgn;
                    if (lhs != rhs)
                        return "Leibniz identity fails on (" + std::to_string(i) + "," +
                               std::to_string(j) + "," + std::to_string(k) + ")";
                }
        return {};
    }
};

// Maps feeding the homotopy Leibniz relation generator, in the shifted
// grading (lod-degree = algebra degree - 1, every map of degree 1):
//   mu_1 = d,   mu_2(x,y) = (-1)^{|x|} [x,y]   (|x| the algebra degree).
// The sign is the decalage twist; with it the generator's n=1,2,3 residuals
// vanish identically on any DG Leibniz algebra.
inline std::vector<MultilinearMap<DGLeibnizAlgebra::Vec>> lod_maps(const DGLeibnizAlgebra& alg,
                                                                   int up_to_arity = 3) {
    using Vec = DGLeibnizAlgebra::Vec;
    std::vector<MultilinearMap<Vec>> maps;
    maps.push_back({1, 1, [&alg](const std::vector<Vec>& a) { return alg.apply_d(a[0]); }});
    if (up_to_arity >= 2)
        maps.push_back({2, 1, [&alg](const std::vector<Vec>& a) {
                            Vec out;
                            for (auto& [i, ci] : a[0].terms()) {
                                Rational s = (alg.degree(i) & 1) ? Rational(-1) : Rational(1);
                                out += alg.bracket(Vec::monomial(i, ci * s), a[1]);
                            }
                            return out;
                        }});
    for (int k = 3; k <= up_to_arity; ++k) maps.push_back({k, 1, nullptr});
    return maps;
}

inline std::vector<int> lod_degrees(const DGLeibnizAlgebra& alg, const std::vector<int>& basis_ids) {
    std::vector<int> d;
    for (int i : basis_ids) d.push_back(alg.degree(i) - 1);
    return d;
}

} // namespace tcft
