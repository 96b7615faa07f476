#pragma once

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace tcft {

// Permutation of {1..k}, stored as the image list: maps i -> images[i-1].
struct Permutation {
    std::vector<int> images;

    explicit Permutation(std::vector<int> im = {}) : images(std::move(im)) {
#ifndef NDEBUG
        std::vector<int> s = images;
        std::sort(s.begin(), s.end());
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] != int(i) + 1) throw std::invalid_argument("Permutation: not a bijection");
#endif
    }

    static Permutation identity(int k) {
        std::vector<int> im(k);
        std::iota(im.begin(), im.end(), 1);
        return Permutation(std::move(im));
    }

    int size() const { return int(images.size()); }
    int operator()(int i) const {
        if (i < 1 || i > size()) throw std::out_of_range("Permutation: index");
        return images[i - 1];
    }

    // (a.compose(b))(i) = a(b(i))
    Permutation compose(const Permutation& b) const {
        std::vector<int> im(b.size());
        for (int i = 1; i <= b.size(); ++i) im[i - 1] = (*this)(b(i));
        return Permutation(std::move(im));
    }

    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.images == b.images;
    }
};

// Sign accumulated by reordering homogeneous elements of the given degrees
// from (x_1,...,x_k) into (x_{sigma(1)},...,x_{sigma(k)}): each transposition
// of an odd pair contributes -1.
inline int koszul_sign(const Permutation& sigma, const std::vector<int>& degrees) {
    const int k = sigma.size();
    for (int i = 1; i <= k; ++i)
        if (sigma(i) > int(degrees.size())) throw std::out_of_range("koszul_sign: degree list too short");
    std::vector<int> remaining(k);
    std::iota(remaining.begin(), remaining.end(), 1);
    int sign = 1;
    for (int i = 1; i <= k; ++i) {
        int target = sigma(i);
        auto it = std::find(remaining.begin(), remaining.end(), target);
        int odd_before = 0;
        for (auto jt = remaining.begin(); jt != it; ++jt)
            odd_before += degrees[*jt - 1] & 1;
        if ((degrees[target - 1] & 1) && (odd_before & 1)) sign = -sign;
        remaining.erase(it);
    }
    return sign;
}

// Degrees of the permuted tuple: (sigma . d)_i = d_{sigma(i)}.
inline std::vector<int> permute_degrees(const Permutation& sigma, const std::vector<int>& degrees) {
    std::vector<int> out(sigma.size());
    for (int i = 1; i <= sigma.size(); ++i) out[i - 1] = degrees[sigma(i) - 1];
    return out;
}

// All (p,q)-shuffles of {1..p+q}: sigma(1)<...<sigma(p), sigma(p+1)<...<sigma(p+q).
inline std::vector<Permutation> shuffles(int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("shuffles: negative block size");
    const int n = p + q;
    std::vector<Permutation> out;
    std::vector<int> pick(p);
    // iterate p-subsets of {1..n} in lexicographic order
    std::iota(pick.begin(), pick.end(), 1);
    while (true) {
        std::vector<int> im(n);
        std::vector<bool> used(n + 1, false);
        for (int i = 0; i < p; ++i) { im[i] = pick[i]; used[pick[i]] = true; }
        int j = p;
        for (int v = 1; v <= n; ++v)
            if (!used[v]) im[j++] = v;
        out.emplace_back(std::move(im));
        if (p == 0) break;
        int i = p - 1;
        while (i >= 0 && pick[i] == n - (p - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int t = i + 1; t < p; ++t) pick[t] = pick[t - 1] + 1;
    }
    return out;
}

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// binom(m, j) for arbitrary integer m, j >= 0: m(m-1)...(m-j+1)/j!
inline std::int64_t binomial_signed(int m, int j) {
    if (j < 0) return 0;
    if (m >= 0) return binomial(m, j);
    // binom(m,j) = (-1)^j binom(j-m-1, j)
    std::int64_t b = binomial(j - m - 1, j);
    return (j & 1) ? -b : b;
}

} // namespace tcft
