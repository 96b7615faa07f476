#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tcft/oper.hpp"

using namespace tcft;

namespace {

std::vector<FockState> low_weight_states(int max_weight) {
    std::vector<FockState> v;
    for (const auto& m : enumerate_basis(max_weight, 1)) v.push_back(FockState::monomial(m));
    return v;
}

FockState lminus1_pow(int j, FockState s) {
    for (int t = 0; t < j; ++t) s = Lminus1_action(s);
    return s;
}

} // namespace

TEST_CASE("vacuum vertex operator is the identity at its single mode") {
    FockState s = mode_action(Field::Beta, -1, mode_action(Field::PsiPlus, 0, vacuum_state()));
    for (int n = -2; n <= 2; ++n) {
        FockState r = vertex_mode(vacuum_state(), n, s);
        if (n == 0) CHECK(r == s);
        else CHECK(r.is_zero());
    }
}

TEST_CASE("vertex modes of the structure states reproduce the hand-coded bilinears") {
    auto f = structure_fields();
    for (const auto& s : low_weight_states(2)) {
        CHECK(zero_product(f.J, s) == Q_action(s));        // J_(0) = Q
        CHECK(zero_product(f.b, s) == b_minus1_action(s)); // b_(0) = b_{-1}
        CHECK(zero_product(f.L, s) == Lminus1_action(s));  // L_(0) = L_{-1}
        for (int n = -1; n <= 2; ++n) {
            CHECK(vertex_mode(f.L, n, s) == L_mode(n, s));
            CHECK(vertex_mode(f.N, n, s) == N_mode(n, s));
            CHECK(vertex_mode(f.b, n, s) == b_mode(n, s));
            CHECK(vertex_mode(f.J, n, s) == J_mode(n, s));
        }
    }
}

TEST_CASE("vertex_mode(L,0,s) acts as the weight") {
    auto f = structure_fields();
    for (const auto& m : enumerate_basis(3, 1)) {
        FockState s = FockState::monomial(m);
        CHECK(vertex_mode(f.L, 0, s) == s * Rational(monomial_grading(m).weight));
    }
}

TEST_CASE("vertex_mode(J,0,b) gives the Virasoro state") {
    auto f = structure_fields();
    CHECK(vertex_mode(f.J, 0, f.b) == f.L);
}

TEST_CASE("truncation guard fires") {
    FockState heavy = FockState::monomial({{Field::Beta, -4}, {Field::Beta, -4}});
    CHECK_THROWS_AS(vertex_mode(heavy, -8, heavy, 8), TruncationError);
}

TEST_CASE("skew-symmetry of the state products") {
    // a_(n) b = (-1)^{|a||b|} sum_j (-1)^{j+n+1} L_{-1}^j/j! ( b_(n+j) a )
    auto states = low_weight_states(2);
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
    for (int trial = 0; trial < 50; ++trial) {
        FockState a = states[pick(rng)], b = states[pick(rng)];
        auto ga = state_grading(a), gb = state_grading(b);
        int par = (ga->fermion * gb->fermion) & 1;
        for (int n = -1; n <= 1; ++n) {
            FockState lhs = borcherds_mode(a, n, b);
            FockState rhs;
            Rational jfac(1);
            for (int j = 0; j <= 6; ++j) {
                if (j > 0) jfac *= Rational(1, j);
                FockState t = borcherds_mode(b, n + j, a);
                if (t.is_zero()) continue;
                t = lminus1_pow(j, t) * jfac;
                if ((j + n + 1) & 1) rhs -= t;
                else rhs += t;
            }
            if (par) rhs = -rhs;
            INFO("n=" << n << " trial=" << trial);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("Borcherds identity on sampled low-weight triples vs mode-sum oracle") {
    // sum_j C(m,j) (a_(n+j) b)_(m+k-j) c
    //   = sum_j (-1)^j C(n,j) [ a_(m+n-j) (b_(k+j) c)
    //                           - (-1)^{n+|a||b|} b_(n+k-j) (a_(m+j) c) ]
    auto states = low_weight_states(1);
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::size_t> pick(0, states.size() - 1);
    std::uniform_int_distribution<int> idx(-1, 1);
    for (int trial = 0; trial < 40; ++trial) {
        FockState a = states[pick(rng)], b = states[pick(rng)], c = states[pick(rng)];
        auto ga = state_grading(a), gb = state_grading(b);
        int m = idx(rng), n = idx(rng), k = idx(rng);
        int par = (ga->fermion * gb->fermion) & 1;

        FockState lhs;
        for (int j = 0; j <= 8; ++j) {
            std::int64_t cmj = binomial_signed(m, j);
            if (cmj == 0) continue;
            FockState ab = borcherds_mode(a, n + j, b);
            if (ab.is_zero()) continue;
            lhs += borcherds_mode(ab, m + k - j, c) * Rational(cmj);
        }
        FockState rhs;
        for (int j = 0; j <= 8; ++j) {
            std::int64_t cnj = binomial_signed(n, j);
            if (cnj == 0) continue;
            Rational w(((j & 1) ? -1 : 1) * cnj);
            FockState t1 = borcherds_mode(b, k + j, c);
            if (!t1.is_zero()) rhs += borcherds_mode(a, m + n - j, t1) * w;
            FockState t2 = borcherds_mode(a, m + j, c);
            if (!t2.is_zero()) {
                FockState u = borcherds_mode(b, n + k - j, t2) * w;
                if ((n + par) & 1) rhs += u;
                else rhs -= u;
            }
        }
        INFO("m,n,k=" << m << "," << n << "," << k << " trial=" << trial);
        CHECK(lhs == rhs);
    }
}
