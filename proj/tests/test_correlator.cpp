#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tcft/wick.hpp"

using namespace tcft;

namespace {

FockState st(Field f, int n) { return mode_action(f, n, vacuum_state()); }
FockState vac() { return vacuum_state(); }

CorrInsertion ins(FockState chi, Complex p) { return {std::move(chi), vac(), p}; }
CorrInsertion ins2(FockState chi, FockState bar, Complex p) {
    return {std::move(chi), std::move(bar), p};
}

bool close(Complex a, Complex b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

std::mt19937_64 g_rng(20250810);

Complex rand_point(double lo = 0.5, double hi = 3.0) {
    std::uniform_real_distribution<double> R(lo, hi), T(0.0, 2 * M_PI);
    return std::polar(R(g_rng), T(g_rng));
}

} // namespace

TEST_CASE("two-point functions reproduce the propagator kernels") {
    Complex z = {1.3, 0.4}, w = {-0.2, 0.9};
    CHECK(close(evaluate_correlator({ins(st(Field::PsiPlus, 0), z), ins(st(Field::PsiMinus, -1), w)}),
                1.0 / (z - w)));
    CHECK(close(evaluate_correlator({ins(st(Field::PsiMinus, -1), w), ins(st(Field::PsiPlus, 0), z)}),
                1.0 / (w - z)));
    CHECK(close(evaluate_correlator({ins(st(Field::Gamma, 0), z), ins(st(Field::Beta, -1), w)}),
                1.0 / (z - w)));
    CHECK(close(evaluate_correlator({ins(st(Field::Beta, -1), w), ins(st(Field::Gamma, 0), z)}),
                -1.0 / (w - z)));
    // derivative insertion differentiates the kernel: <dgamma(z) beta(w)>
    CHECK(close(evaluate_correlator({ins(st(Field::Gamma, -1), z), ins(st(Field::Beta, -1), w)}),
                -1.0 / ((z - w) * (z - w))));
}

TEST_CASE("charge imbalance gives exact zero") {
    Complex z = {1.0, 0.0}, w = {0.0, 1.0};
    CHECK(evaluate_correlator({ins(st(Field::PsiPlus, 0), z)}) == Complex{0, 0});
    CHECK(evaluate_correlator({ins(st(Field::PsiPlus, 0), z), ins(st(Field::PsiPlus, 0), w)}) ==
          Complex{0, 0});
    CHECK(evaluate_correlator({ins(st(Field::Gamma, 0), z), ins(st(Field::Gamma, 0), w)}) ==
          Complex{0, 0});
    CHECK(evaluate_correlator({}) == Complex{1, 0}); // empty product is <0|0>
}

TEST_CASE("four-point fermion correlator: two pairings with opposite signs") {
    Complex z1 = {2.0, 0.1}, z2 = {-1.0, 0.3}, w1 = {0.2, -1.1}, w2 = {0.8, 1.4};
    Complex val = evaluate_correlator({ins(st(Field::PsiPlus, 0), z1), ins(st(Field::PsiPlus, 0), z2),
                                       ins(st(Field::PsiMinus, -1), w1),
                                       ins(st(Field::PsiMinus, -1), w2)});
    Complex expect = -1.0 / ((z1 - w1) * (z2 - w2)) + 1.0 / ((z1 - w2) * (z2 - w1));
    CHECK(close(val, expect));
    // antisymmetric under exchanging the two psi+ positions (the insertions
    // anticommute, so the value is an odd function of (z1, z2))
    Complex swapped = evaluate_correlator({ins(st(Field::PsiPlus, 0), z2), ins(st(Field::PsiPlus, 0), z1),
                                           ins(st(Field::PsiMinus, -1), w1),
                                           ins(st(Field::PsiMinus, -1), w2)});
    CHECK(close(swapped, -val));
    Complex exchanged = evaluate_correlator({ins(st(Field::PsiPlus, 0), z1), ins(st(Field::PsiPlus, 0), z2),
                                             ins(st(Field::PsiMinus, -1), w2),
                                             ins(st(Field::PsiMinus, -1), w1)});
    CHECK(close(exchanged, -val));
}

TEST_CASE("multilinearity in insertion states is exact") {
    Complex z = {1.1, 0.2}, w = {-0.4, -0.8}, u = {0.3, 1.9};
    FockState a = st(Field::PsiPlus, 0), b = st(Field::PsiPlus, -1);
    FockState lin = a * Rational(2, 3) + b * Rational(-5, 7);
    Complex v1 = evaluate_correlator({ins(lin, z), ins(st(Field::PsiMinus, -1), w),
                                      ins(st(Field::Gamma, 0), u), ins(st(Field::Beta, -1), w + 2.0)});
    Complex v2 = (2.0 / 3.0) * evaluate_correlator({ins(a, z), ins(st(Field::PsiMinus, -1), w),
                                                    ins(st(Field::Gamma, 0), u),
                                                    ins(st(Field::Beta, -1), w + 2.0)}) -
                 (5.0 / 7.0) * evaluate_correlator({ins(b, z), ins(st(Field::PsiMinus, -1), w),
                                                    ins(st(Field::Gamma, 0), u),
                                                    ins(st(Field::Beta, -1), w + 2.0)});
    CHECK(close(v1, v2));
}

TEST_CASE("chiral/antichiral factorization") {
    Complex z = {1.0, 0.5}, w = {-0.7, 0.1};
    Complex chiral = evaluate_correlator({ins(st(Field::PsiPlus, 0), z), ins(st(Field::PsiMinus, -1), w)});
    Complex anti = evaluate_correlator(
        {ins2(vac(), st(Field::Gamma, 0), z), ins2(vac(), st(Field::Beta, -1), w)});
    Complex mixed = evaluate_correlator({ins2(st(Field::PsiPlus, 0), st(Field::Gamma, 0), z),
                                         ins2(st(Field::PsiMinus, -1), st(Field::Beta, -1), w)});
    CHECK(close(mixed, chiral * anti));
    CHECK(close(anti, std::conj(1.0 / (z - w))));
}

TEST_CASE("exchange of two insertions multiplies by the Koszul sign") {
    Complex z = {1.5, 0.0}, w = {0.0, 1.5}, u = {-1.2, 0.4}, x = {0.6, -1.0};
    std::vector<CorrInsertion> base = {ins(st(Field::PsiPlus, 0), z), ins(st(Field::PsiMinus, -1), w),
                                       ins(st(Field::PsiPlus, -1), u), ins(st(Field::PsiMinus, -2), x)};
    Complex v = evaluate_correlator(base);
    REQUIRE(std::abs(v) > 1e-12);
    auto swapped = base;
    std::swap(swapped[0], swapped[1]); // two odd insertions: sign -1
    CHECK(close(evaluate_correlator(swapped), -v));
    auto swapped2 = base;
    std::swap(swapped2[1], swapped2[2]);
    CHECK(close(evaluate_correlator(swapped2), -v));
}

TEST_CASE("Q-Ward residual vanishes at random position sets") {
    auto f = structure_fields();
    for (int trial = 0; trial < 10; ++trial) {
        Complex z = rand_point(), w = rand_point(1.0, 2.0), u = rand_point(2.2, 4.0);
        if (std::abs(z - w) < 0.3 || std::abs(z - u) < 0.3 || std::abs(w - u) < 0.3) continue;
        // Q-exact content with balanced spectators
        std::vector<CorrInsertion> ins_list = {ins(f.b, z), ins(st(Field::PsiPlus, 0), w),
                                               ins2(st(Field::Gamma, 0), st(Field::PsiPlus, 0), u),
                                               ins2(st(Field::Beta, -1), st(Field::PsiMinus, -1), 1.7 * u)};
        Complex base = evaluate_correlator(ins_list);
        Complex r = ward_residual(ins_list);
        INFO("trial " << trial << " baseline " << std::abs(base));
        CHECK(std::abs(r) <= 1e-10 * (1.0 + std::abs(base)));
    }
}

TEST_CASE("translation Ward: d/dz of the correlator equals the L_{-1} insertion") {
    auto f = structure_fields();
    for (int trial = 0; trial < 10; ++trial) {
        Complex z = rand_point(0.8, 1.6), w = rand_point(2.0, 3.0), u = rand_point(3.4, 4.5);
        auto corr_at = [&](Complex zz) {
            return evaluate_correlator({ins(f.J, zz), ins(f.b, w),
                                        ins(st(Field::PsiPlus, 0), u),
                                        ins(st(Field::PsiMinus, -1), 1.3 * u)});
        };
        Complex exact = evaluate_correlator({ins(Lminus1_action(f.J), z), ins(f.b, w),
                                             ins(st(Field::PsiPlus, 0), u),
                                             ins(st(Field::PsiMinus, -1), 1.3 * u)});
        double h = 1e-4;
        Complex d1 = (corr_at(z + h) - corr_at(z - h)) / (2.0 * h);
        Complex d2 = (corr_at(z + h / 2.0) - corr_at(z - h / 2.0)) / h;
        Complex richardson = (4.0 * d2 - d1) / 3.0;
        INFO("trial " << trial);
        CHECK(std::abs(richardson - exact) <= 1e-10 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("meromorphy: small-circle samples reproduce the symbolic residue") {
    // <J(v) b(z) spectators>: residue at v = z of the Wick sum matches the
    // mode-level product J_(0) b = L
    auto f = structure_fields();
    Complex z = {0.3, -0.2}, u = {2.4, 1.0}, x = {-2.0, 1.5};
    std::vector<CorrInsertion> spect = {ins(st(Field::PsiPlus, 0), u), ins(st(Field::PsiMinus, -1), x)};
    double r = 0.25;
    int N = 256;
    Complex acc{0, 0};
    for (int k = 0; k < N; ++k) {
        double t = 2 * M_PI * k / N;
        Complex v = z + std::polar(r, t);
        auto list = spect;
        list.insert(list.begin(), {ins(f.b, z)});
        list.insert(list.begin(), {ins(f.J, v)});
        acc += evaluate_correlator(list) * Complex(0, 1) * std::polar(r, t);
    }
    acc *= 1.0 / (2.0 * M_PI * Complex(0, 1)) * (2.0 * M_PI / N);
    auto list0 = spect;
    list0.insert(list0.begin(), {ins(f.L, z)}); // J_(0) b = Q b = L
    Complex expect = evaluate_correlator(list0);
    CHECK(std::abs(acc - expect) <= 1e-10 * (1.0 + std::abs(expect)));
}
