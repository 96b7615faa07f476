#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "tcft/koszul.hpp"

namespace tcft {

// Multilinear map of fixed arity acting on vectors of type V. Degree is the
// shift the map applies to homogeneous inputs; all maps entering the homotopy
// Leibniz relations have degree 1 in the shifted grading.
template <class V>
struct MultilinearMap {
    int arity = 0;
    int degree = 1;
    std::function<V(const std::vector<V>&)> eval; // null means the zero map
};

// Left-hand side of the homotopy Leibniz relation of arity n:
//
//   sum_{j<=k<=n} sum_{sigma in Sh(k-j, j-1)} eps(sigma; phi_1..phi_{k-1})
//     (-1)^{|phi_sigma(1)|+...+|phi_sigma(k-j)|}
//     mu_{n-j+1}(phi_sigma(1),..,phi_sigma(k-j),
//                mu_j(phi_sigma(k-j+1),..,phi_sigma(k-1), phi_k),
//                phi_{k+1},..,phi_n)
//
// The shuffle redistributes phi_1..phi_{k-1} between the outer prefix and the
// inner map; phi_k stays the last inner argument. Degrees are the shifted
// ones (every mu_k of degree 1); zero vector iff the relation holds on these
// arguments.
template <class V>
V leibniz_infty_residual(const std::vector<MultilinearMap<V>>& maps,
                         const std::vector<V>& args,
                         const std::vector<int>& degrees) {
    const int n = int(args.size());
    if (degrees.size() != args.size())
        throw std::invalid_argument("leibniz_infty_residual: degree list mismatch");
    if (int(maps.size()) < n)
        throw std::invalid_argument("leibniz_infty_residual: need maps up to arity n");
    for (int a = 0; a < n; ++a)
        if (maps[a].eval && maps[a].arity != a + 1)
            throw std::invalid_argument("leibniz_infty_residual: maps[k] must have arity k+1");

    V total{};
    for (int j = 1; j <= n; ++j) {
        const auto& inner = maps[j - 1];
        const auto& outer = maps[n - j];
        if (!inner.eval || !outer.eval) continue;
        for (int k = j; k <= n; ++k) {
            std::vector<int> head_deg(degrees.begin(), degrees.begin() + (k - 1));
            for (const Permutation& sigma : shuffles(k - j, j - 1)) {
                int sign = koszul_sign(sigma, head_deg);
                int prefix_parity = 0;
                for (int t = 1; t <= k - j; ++t) prefix_parity += degrees[sigma(t) - 1];
                if (prefix_parity & 1) sign = -sign;

                std::vector<V> inner_args;
                inner_args.reserve(j);
                for (int t = k - j + 1; t <= k - 1; ++t) inner_args.push_back(args[sigma(t) - 1]);
                inner_args.push_back(args[k - 1]);
                V inner_val = inner.eval(inner_args);

                std::vector<V> outer_args;
                outer_args.reserve(n - j + 1);
                for (int t = 1; t <= k - j; ++t) outer_args.push_back(args[sigma(t) - 1]);
                outer_args.push_back(std::move(inner_val));
                for (int t = k + 1; t <= n; ++t) outer_args.push_back(args[t - 1]);

                V term = outer.eval(outer_args);
                if (sign > 0) total += term;
                else total -= term;
            }
        }
    }
    return total;
}

} // namespace tcft
