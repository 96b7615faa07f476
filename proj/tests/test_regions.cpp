#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tcft/integrate.hpp"
#include "tcft/residue.hpp"

using namespace tcft;

namespace {

V3Params v3_at(double kappa) {
    V3Params p;
    p.rho1 = 1.0;
    p.rho2 = 0.6;
    p.eps = p.xi = 0.6 / kappa;
    p.kappa = kappa;
    return p;
}

V4Params v4_at(double kappa) {
    V4Params p;
    p.rho1 = 1.0;
    p.rho2 = 0.62;
    p.rho3 = 0.35;
    p.eps2 = p.xi2 = 0.35 / kappa;
    p.eps1 = p.xi1 = p.alpha = 0.35 / (kappa * kappa);
    p.kappa = kappa;
    return p;
}

// exact moment of v^a vbar^b over a disk of radius R at center c
Complex disk_moment(Complex c, double R, int a, int b) {
    Complex total{0, 0};
    for (int i = 0; i <= std::min(a, b); ++i) {
        double binp = double(binomial(a, i)) * double(binomial(b, i));
        Complex t = binp * std::pow(c, a - i) * std::pow(std::conj(c), b - i);
        t *= M_PI * std::pow(R, 2 * i + 2) / double(i + 1);
        total += t;
    }
    return total;
}

} // namespace

TEST_CASE("parameter validation names each violated constraint") {
    V3Params p = v3_at(10);
    p.rho2 = 1.2;
    CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("rho1 > rho2"));
    p = v3_at(10);
    p.eps = 0.2;
    CHECK_THROWS_WITH(p.validate(), Catch::Matchers::ContainsSubstring("eps << rho"));
    V4Params q = v4_at(10);
    q.eps2 = q.eps1;
    CHECK_THROWS_WITH(q.validate(), Catch::Matchers::ContainsSubstring("eps2 >> eps1"));
    q = v4_at(10);
    q.lambda1 = q.rho2 + q.alpha + 0.01;
    CHECK_THROWS_WITH(q.validate(), Catch::Matchers::ContainsSubstring("lambda1 window"));
    q = v4_at(10);
    q.lambda3 = q.rho3;
    CHECK_THROWS_WITH(q.validate(), Catch::Matchers::ContainsSubstring("lambda3 window"));
}

TEST_CASE("circle region: Cauchy integral and analytic integrand") {
    CircleParams cp;
    cp.center = {0.3, -0.1};
    cp.eps = 1.0;
    Region r = make_region(cp);
    IntegrateOptions o;
    // counterclockwise line integral of 1/(w - z): attach dv/dt by hand
    Integrand f = [&](const SamplePoint& s) {
        Complex dv = Complex(0, 1) * cp.eps * s.phase[0];
        return dv / (s.positions[0] - cp.center);
    };
    auto res = integrate(r, f, o);
    CHECK(std::abs(res.value - Complex(0, 2 * M_PI)) < 1e-12);
    // analytic integrand: zero
    Integrand g = [&](const SamplePoint& s) {
        Complex dv = Complex(0, 1) * cp.eps * s.phase[0];
        return dv * (s.positions[0] * s.positions[0] + 3.0);
    };
    CHECK(std::abs(integrate(r, g, o).value) < 1e-12);
}

TEST_CASE("MC volume matches the analytic measure within 3 sigma at three kappas") {
    for (double kappa : {5.0, 10.0, 20.0}) {
        {
            Region r = make_region(v3_at(kappa));
            double exact = region_measure(r);
            auto mc = mc_volume(r, 200000, 17 + int(kappa));
            INFO("V3 kappa=" << kappa << " exact=" << exact << " mc=" << mc.value.real());
            CHECK(std::abs(mc.value.real() - exact) <= 3.0 * mc.error);
        }
        {
            Region r = make_region(v4_at(kappa));
            double exact = region_measure(r);
            auto mc = mc_volume(r, 200000, 31 + int(kappa));
            INFO("V4 kappa=" << kappa);
            CHECK(std::abs(mc.value.real() - exact) <= 3.0 * mc.error);
        }
    }
}

TEST_CASE("V3 boundary has three components, V4 has ten") {
    V3Params p3 = v3_at(10);
    Region r3 = make_region(p3);
    auto b3 = boundary(r3, p3);
    REQUIRE(b3.size() == 3);
    CHECK(b3[0].orientation == 1);
    CHECK(b3[1].orientation == -1);
    CHECK(b3[2].orientation == -1);

    V4Params p4 = v4_at(10);
    Region r4 = make_region(p4);
    auto b4 = boundary(r4, p4);
    CHECK(b4.size() == 10);
    int plus = 0;
    for (auto& b : b4) plus += b.orientation > 0 ? 1 : 0;
    CHECK(plus == 3); // rho1-outer and the two rho2-outer pieces
}

TEST_CASE("area quadrature reproduces exact disk moments on the punctured disk") {
    V3Params p = v3_at(10);
    Complex z{0.2, -0.4};
    Complex w = z + std::polar(p.rho2, 0.77);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}}) {
        Complex exact = disk_moment(z, p.rho1, a, b) - disk_moment(z, p.eps, a, b) -
                        disk_moment(w, p.xi, a, b);
        double err = 0;
        Complex got = area_quadrature(
            z, p.rho1, {{z, p.eps}, {w, p.xi}},
            [&](Complex v) { return std::pow(v, a) * std::pow(std::conj(v), b); }, 1e-10, err);
        INFO("moment " << a << "," << b);
        CHECK(std::abs(got - exact) <= 1e-8 * (1.0 + std::abs(exact)));
    }
}

TEST_CASE("polynomial Stokes on V3 pins the boundary orientations") {
    V3Params p = v3_at(10);
    p.center = {0.1, 0.3};
    Region r = make_region(p);
    auto strata = boundary(r, p);
    IntegrateOptions o;
    o.rel_tol = 1e-10;
    // five independent polynomial forms B dv + B' dvbar in the v variable
    struct Form {
        std::function<Complex(Complex, Complex)> B, Bp, dB; // dB = dB'/dv - dB/dvbar
    };
    std::vector<Form> forms = {
        {[](Complex v, Complex w) { return v * std::conj(v); }, [](Complex, Complex) { return Complex{0, 0}; },
         [](Complex v, Complex w) { return -v; }},
        {[](Complex, Complex) { return Complex{0, 0}; }, [](Complex v, Complex) { return v * v * std::conj(v); },
         [](Complex v, Complex) { return 2.0 * v * std::conj(v); }},
        {[](Complex v, Complex w) { return std::conj(v) * w; }, [](Complex v, Complex w) { return v * std::conj(w); },
         [](Complex v, Complex w) { return std::conj(w) - w; }},
        {[](Complex v, Complex) { return std::conj(v) * std::conj(v); }, [](Complex v, Complex) { return v; },
         [](Complex v, Complex) { return 1.0 - 2.0 * std::conj(v); }},
        {[](Complex v, Complex w) { return std::conj(w) * std::conj(v) * std::conj(v); },
         [](Complex v, Complex w) { return w * v * v; },
         [](Complex v, Complex w) { return 2.0 * w * v - 2.0 * std::conj(w) * std::conj(v); }}};

    for (std::size_t i = 0; i < forms.size(); ++i) {
        auto& F = forms[i];
        Integrand B = [&](const SamplePoint& s) { return F.B(s.positions[1], s.positions[0]); };
        Integrand Bp = [&](const SamplePoint& s) { return F.Bp(s.positions[1], s.positions[0]); };
        Integrand dW = [&](const SamplePoint& s) { return F.dB(s.positions[1], s.positions[0]); };
        auto rep = stokes_check(r, strata, 1, B, Bp, dW, o);
        INFO("form " << i << " vol=" << std::abs(rep.volume_side)
                     << " bnd=" << std::abs(rep.boundary_side));
        CHECK(rep.residual() <= 1e-6 * rep.scale());
    }
}

TEST_CASE("residue path agrees with quadrature on random rational contour integrands") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Complex c{0.15, -0.2};
    double r = 1.0;
    int agreements = 0;
    for (int trial = 0; trial < 20; ++trial) {
        // random rational integrand: factors (v - p)^{-e} with poles inside
        // and outside, a conjugate factor, and a constant
        CompiledCorrelator corr;
        CompiledPairing p;
        p.coeff = Complex(U(rng) + 1.5, U(rng));
        std::vector<Complex> pos(6);
        pos[1] = c + std::polar(0.4 + 0.2 * std::abs(U(rng)), U(rng) * M_PI); // inside
        pos[2] = c + std::polar(1.6 + std::abs(U(rng)), U(rng) * M_PI);      // outside
        pos[3] = c + std::polar(0.55, 2.1 * U(rng));                          // inside
        pos[4] = c + std::polar(2.4, 1.3 * U(rng));                           // outside
        pos[5] = c;                                                           // center
        p.factors.push_back({0, 1, 1 + (trial % 2), false});
        p.factors.push_back({0, 2, 1, false});
        if (trial % 3 == 0) p.factors.push_back({0, 3, 1, false});
        if (trial % 4 == 0) p.factors.push_back({0, 4, 2, true}); // antichiral factor
        corr.pairings.push_back(p);

        int marker = trial % 5 == 0 ? 1 : 0;
        Complex exact = contour_residue_integral(corr, pos, c, r, marker);

        // quadrature oracle
        int N = 4096;
        Complex acc{0, 0};
        for (int k = 0; k < N; ++k) {
            double t = 2 * M_PI * k / N;
            Complex ph = std::polar(1.0, t);
            std::vector<Complex> pp = pos;
            pp[0] = c + r * ph;
            Complex dv = Complex(0, 1) * r * ph;
            acc += corr.eval(pp) * (marker == 1 ? std::conj(dv) : dv);
        }
        acc *= 2.0 * M_PI / N;
        INFO("trial " << trial << " exact=" << exact << " quad=" << acc);
        CHECK(std::abs(exact - acc) <= 1e-10 * (1.0 + std::abs(exact)));
        if (std::abs(exact) > 1e-9) ++agreements;
    }
    CHECK(agreements >= 12); // most integrands are nontrivial
}
