#include <catch2/catch_amalgamated.hpp>

#include "tcft/welement.hpp"

using namespace tcft;

namespace {

// all homogeneous W basis elements with underlying weight <= max_weight
std::vector<WElement> w_basis(int max_weight, int cap = 1) {
    std::vector<WElement> out;
    for (const auto& m : enumerate_basis(max_weight, cap)) {
        out.push_back(w_zero_form(FockState::monomial(m)));
        out.push_back(w_one_form(FockState::monomial(m)));
    }
    return out;
}

int deg(const WElement& a) { return w_degree(a).value(); }

} // namespace

TEST_CASE("bracket with the vacuum 0-form vanishes") {
    WElement vac = w_zero_form(vacuum_state());
    for (const auto& b : w_basis(2)) {
        CHECK(circle_product(vac, b).is_zero());
        CHECK(lz_bracket(vac, b).is_zero());
    }
}

TEST_CASE("circle product degree bookkeeping: |a o b| = |a| + |b| - 1") {
    for (const auto& a : w_basis(2))
        for (const auto& b : w_basis(1)) {
            WElement c = circle_product(a, b);
            if (c.is_zero()) continue;
            auto dc = w_degree(c);
            REQUIRE(dc.has_value());
            CHECK(*dc == deg(a) + deg(b) - 1);
            WElement br = lz_bracket(a, b);
            if (!br.is_zero()) CHECK(w_degree(br).value() == deg(a) + deg(b) - 1);
        }
}

TEST_CASE("1-form first argument acts by residue extraction") {
    auto f = structure_fields();
    WElement sJ = w_one_form(f.J);
    for (const auto& b : w_basis(2)) {
        WElement c = circle_product(sJ, b);
        CHECK(c.v == Q_action(b.v));
        CHECK(c.sv == Q_action(b.sv));
    }
}

TEST_CASE("d squares to zero and [Q,b]=d fixes the twist convention") {
    for (const auto& a : w_basis(3)) {
        CHECK(w_d_map(w_d_map(a)).is_zero());
        WElement qb = w_q_map(w_b_map(a)) - w_b_map(w_q_map(a));
        CHECK(qb == w_d_map(a, DTwist::Twisted));
    }
}

TEST_CASE("dbar squares to zero on weight <= 3") {
    for (const auto& a : w_basis(3)) {
        CHECK(w_dbar(w_dbar(a)).is_zero());
    }
}

TEST_CASE("dbar on the vacuum vanishes") {
    CHECK(w_dbar(w_zero_form(vacuum_state())).is_zero());
    CHECK(w_q_map(w_zero_form(vacuum_state())).is_zero());
}

namespace {

bool check_relation1(const WElement& a, const WElement& b, DTwist tw) {
    WElement lhs = w_dbar(lz_bracket(a, b), tw);
    WElement rhs = lz_bracket(w_dbar(a, tw), b);
    WElement t = lz_bracket(a, w_dbar(b, tw));
    if ((deg(a) + 1) & 1) rhs = rhs - t;
    else rhs = rhs + t;
    return lhs == rhs;
}

bool check_relation2(const WElement& a, const WElement& b, const WElement& c) {
    WElement lhs = lz_bracket(a, lz_bracket(b, c));
    WElement rhs = lz_bracket(lz_bracket(a, b), c);
    WElement t = lz_bracket(b, lz_bracket(a, c));
    if (((deg(a) + 1) * (deg(b) + 1)) & 1) rhs = rhs - t;
    else rhs = rhs + t;
    return lhs == rhs;
}

} // namespace

TEST_CASE("differential Leibniz rule holds exactly on pairs of total weight <= 2") {
    auto basis1 = w_basis(1);
    for (const auto& a : w_basis(2))
        for (const auto& b : basis1) {
            auto ga = state_grading(a.v.is_zero() ? a.sv : a.v);
            auto gb = state_grading(b.v.is_zero() ? b.sv : b.v);
            if (ga->weight + gb->weight > 2) continue;
            INFO("deg a=" << deg(a) << " deg b=" << deg(b));
            CHECK(check_relation1(a, b, DTwist::Twisted));
        }
}

TEST_CASE("Leibniz identity holds exactly on triples of total weight <= 2") {
    auto basis = w_basis(1);
    int checked = 0;
    for (const auto& a : basis)
        for (const auto& b : basis)
            for (const auto& c : basis) {
                auto wa = state_grading(a.v.is_zero() ? a.sv : a.v)->weight;
                auto wb = state_grading(b.v.is_zero() ? b.sv : b.v)->weight;
                auto wc = state_grading(c.v.is_zero() ? c.sv : c.v)->weight;
                if (wa + wb + wc > 2) continue;
                ++checked;
                CHECK(check_relation2(a, b, c));
            }
    CHECK(checked > 100);
}

TEST_CASE("brackets are not trivially zero (nondegenerate test data)") {
    auto f = structure_fields();
    WElement J0 = w_zero_form(f.J);
    WElement b0f = w_zero_form(f.b);
    CHECK_FALSE(lz_bracket(J0, b0f).is_zero());
}
