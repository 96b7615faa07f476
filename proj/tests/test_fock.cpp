#include <catch2/catch_amalgamated.hpp>

#include "tcft/oper.hpp"

using namespace tcft;

namespace {
FockState single(Field f, int n, Rational c = Rational(1)) {
    return mode_action(f, n, vacuum_state()) * c;
}
} // namespace

TEST_CASE("annihilators kill the vacuum, creation conventions") {
    CHECK(mode_action(Field::PsiMinus, 0, vacuum_state()).is_zero());
    CHECK(mode_action(Field::Beta, 0, vacuum_state()).is_zero());
    CHECK(mode_action(Field::PsiPlus, 1, vacuum_state()).is_zero());
    CHECK(mode_action(Field::Gamma, 1, vacuum_state()).is_zero());
    // declared zero modes create
    CHECK_FALSE(mode_action(Field::PsiPlus, 0, vacuum_state()).is_zero());
    CHECK_FALSE(mode_action(Field::Gamma, 0, vacuum_state()).is_zero());
}

TEST_CASE("odd modes square to zero") {
    FockState s = single(Field::PsiPlus, 0);
    CHECK(mode_action(Field::PsiPlus, 0, s).is_zero());
    FockState t = mode_action(Field::PsiMinus, -1, single(Field::Gamma, -2));
    CHECK(mode_action(Field::PsiMinus, -1, t).is_zero());
}

TEST_CASE("gamma_{-1} beta_1 on gamma_{-1}|0> is a single commutator") {
    FockState g = single(Field::Gamma, -1);
    FockState r = mode_action(Field::Gamma, -1, mode_action(Field::Beta, 1, g));
    // [beta_1, gamma_{-1}] = -1
    CHECK(r == -g);
    // brute-force normal ordering route: beta_1 gamma_{-1} gamma_{-1}|0> has
    // two contractions
    FockState gg = mode_action(Field::Gamma, -1, g);
    CHECK(mode_action(Field::Beta, 1, gg) == g * Rational(-2));
}

TEST_CASE("mode (anti)commutators match the declared conventions") {
    auto comm_on = [](ModeLabel a, ModeLabel b, const FockState& s, int sign_b_a) {
        // a b s - (sign) b a s
        FockState lhs = mode_action(a, mode_action(b, s));
        FockState rhs = mode_action(b, mode_action(a, s)) * Rational(sign_b_a);
        return lhs - rhs;
    };
    std::vector<FockState> probes = {vacuum_state(), single(Field::Gamma, 0),
                                     single(Field::PsiPlus, -1),
                                     mode_action(Field::Beta, -1, single(Field::PsiMinus, -2))};
    for (const auto& s : probes) {
        // {psi+_1, psi-_{-1}} = 1
        CHECK(comm_on({Field::PsiPlus, 1}, {Field::PsiMinus, -1}, s, -1) == s);
        // [gamma_2, beta_{-2}] = 1
        CHECK(comm_on({Field::Gamma, 2}, {Field::Beta, -2}, s, 1) == s);
        // [beta_2, gamma_{-2}] = -1
        CHECK(comm_on({Field::Beta, 2}, {Field::Gamma, -2}, s, 1) == -s);
        // {psi+_0, psi-_0} = 1
        CHECK(comm_on({Field::PsiPlus, 0}, {Field::PsiMinus, 0}, s, -1) == s);
    }
}

TEST_CASE("structure fields have the defining gradings") {
    auto f = structure_fields(); // throws if a grading is off
    CHECK(state_grading(f.J).value() == Grading{1, 1});
    CHECK(state_grading(f.b).value() == Grading{2, -1});
    CHECK(state_grading(f.N).value() == Grading{1, 0});
    CHECK(state_grading(f.L).value() == Grading{2, 0});
}

TEST_CASE("L0 and N0 eigenvalues realize the bigrading on every basis state") {
    for (const auto& mono : enumerate_basis(3, 2)) {
        FockState s = FockState::monomial(mono);
        Grading g = monomial_grading(mono);
        CHECK(L_mode(0, s) == s * Rational(g.weight));
        CHECK(N_mode(0, s) == s * Rational(g.fermion));
    }
}

TEST_CASE("Q^2 = 0 and b0^2 = 0 on all basis states of weight <= 3 (exact)") {
    for (const auto& mono : enumerate_basis(3, 2)) {
        FockState s = FockState::monomial(mono);
        INFO("monomial size " << mono.size());
        CHECK(Q_action(Q_action(s)).is_zero());
        CHECK(b0_action(b0_action(s)).is_zero());
    }
}

TEST_CASE("[Q, b_n] = L_n mode by mode for |n| <= 3 (exact)") {
    auto basis = enumerate_basis(2, 2);
    for (int n = -3; n <= 3; ++n)
        for (const auto& mono : basis) {
            FockState s = FockState::monomial(mono);
            // both odd: the graded commutator is the anticommutator
            FockState lhs = Q_action(b_mode(n, s)) + b_mode(n, Q_action(s));
            CHECK(lhs == L_mode(n, s));
        }
}

TEST_CASE("Q is the zero mode of J and lowers nothing") {
    auto f = structure_fields();
    CHECK(Q_action(f.J).is_zero());      // J is Q-closed
    CHECK(Q_action(f.b) == f.L);         // [Q, b] = L at the state level
    CHECK(Q_action(vacuum_state()).is_zero());
}

TEST_CASE("basis enumeration matches the zero-mode cap") {
    auto b0 = enumerate_basis(0, 2);
    // gamma_0^{0,1,2} x psi+_0^{0,1}
    CHECK(b0.size() == 6);
    for (const auto& m : b0) CHECK(monomial_grading(m).weight == 0);
}
