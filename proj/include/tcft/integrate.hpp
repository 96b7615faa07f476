#pragma once

#include <functional>
#include <random>

#include "tcft/region.hpp"

namespace tcft {

struct IntegrationResult {
    Complex value{0.0, 0.0};
    double error = 0.0;
    long long samples = 0;
    std::string method;
};

// Integrand over resolved positions. positions[v] are the region variables,
// positions[nvars] is the base point, fixed points follow. For each contour
// variable the current unit phase e^{it} is supplied so the caller can attach
// dv/dt or dvbar/dt; area variables integrate against the plain Lebesgue
// measure (the caller supplies any dv^dvbar jacobian itself).
struct SamplePoint {
    std::vector<Complex> positions;
    std::vector<Complex> phase; // per var: contour e^{it}; area: unused
};

using Integrand = std::function<Complex(const SamplePoint&)>;

struct IntegrateOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-13;
    long long mc_samples = 50000;
    double hole_power = 6.0; // importance exponent for near-hole bands
    std::uint64_t seed = 1;
    int max_contour_points = 1024;
    int fixed_positions = 0; // how many fixed points follow the base
    std::vector<Complex> fixed;
};

namespace detail {

struct SampleFrame {
    SamplePoint pt;
    int nvars = 0;
};

inline void init_frame(SampleFrame& f, const Region& r, const IntegrateOptions& o) {
    f.nvars = r.nvars();
    f.pt.positions.assign(f.nvars + 1 + o.fixed.size(), Complex{0, 0});
    f.pt.positions[f.nvars] = r.base;
    for (std::size_t k = 0; k < o.fixed.size(); ++k) f.pt.positions[f.nvars + 1 + k] = o.fixed[k];
    f.pt.phase.assign(f.nvars, Complex{0, 0});
}

// --- Monte Carlo with a per-hole importance mixture -------------------------

struct AreaSamplerState {
    Complex center;
    double R;
    std::vector<Complex> hole_c;
    std::vector<double> hole_r;
    std::vector<double> hole_C; // importance-annulus outer factor per hole
    double free_area = 0.0;
    double p_bulk = 0.5;
    double power = 6.0; // hole-band importance density ~ d^{-power}

    void prepare(double bulk_fraction) {
        free_area = M_PI * R * R;
        for (double r : hole_r) free_area -= M_PI * r * r;
        hole_C.assign(hole_r.size(), 0.0);
        for (std::size_t h = 0; h < hole_r.size(); ++h) {
            double clear = R - std::abs(hole_c[h] - center);
            for (std::size_t g = 0; g < hole_r.size(); ++g)
                if (g != h) clear = std::min(clear, std::abs(hole_c[h] - hole_c[g]) - hole_r[g]);
            hole_C[h] = std::max(1.5, std::min(16.0, 0.9 * clear / hole_r[h]));
        }
        p_bulk = hole_r.empty() ? 1.0 : bulk_fraction;
    }

    bool inside(Complex x) const {
        if (std::abs(x - center) > R) return false;
        for (std::size_t h = 0; h < hole_r.size(); ++h)
            if (std::abs(x - hole_c[h]) < hole_r[h]) return false;
        return true;
    }

    // radial band density ~ d^{-power} on (r, C r): the per-hole 2d pdf
    double band_pdf(std::size_t h, double d) const {
        double r = hole_r[h], C = hole_C[h];
        if (d <= r || d >= C * r) return 0.0;
        double a = 2.0 - power;
        double Z = 2.0 * M_PI * (std::pow(C, a) - 1.0) * std::pow(r, a) / a;
        return std::pow(d, -power) / Z;
    }

    double pdf(Complex x) const {
        double p = p_bulk / free_area;
        double pr = hole_r.empty() ? 0.0 : (1.0 - p_bulk) / double(hole_r.size());
        for (std::size_t h = 0; h < hole_r.size(); ++h)
            p += pr * band_pdf(h, std::abs(x - hole_c[h]));
        return p;
    }

    // returns the sampled point; weight = 1/pdf
    Complex sample(std::mt19937_64& rng, double& weight) const {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        Complex x;
        for (;;) {
            double u = U(rng);
            if (u < p_bulk || hole_r.empty()) {
                // uniform on the free area by rejection from the disk
                for (;;) {
                    double rr = R * std::sqrt(U(rng));
                    double th = 2.0 * M_PI * U(rng);
                    x = center + std::polar(rr, th);
                    if (inside(x)) break;
                }
            } else {
                int h = std::min<int>(int(hole_r.size()) - 1,
                                      int((u - p_bulk) / (1.0 - p_bulk) * hole_r.size()));
                double a = 2.0 - power;
                double r = hole_r[h], C = hole_C[h];
                double d = r * std::pow(1.0 + U(rng) * (std::pow(C, a) - 1.0), 1.0 / a);
                double th = 2.0 * M_PI * U(rng);
                x = hole_c[h] + std::polar(d, th);
                if (!inside(x)) continue; // band may poke into another exclusion; resample
            }
            weight = 1.0 / pdf(x);
            return x;
        }
    }
};

} // namespace detail

// Stratified-mixture Monte Carlo over the full region. The same seed gives
// the same sample stream, so sums of integrands over one region share
// samples exactly.
inline IntegrationResult integrate_mc(const Region& r, const Integrand& f,
                                      const IntegrateOptions& o) {
    detail::SampleFrame fr;
    detail::init_frame(fr, r, o);
    auto order = detail::topo_order(r.vars);
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    Complex sum{0, 0};
    double sq = 0.0;
    long long n = std::max<long long>(16, o.mc_samples);
    for (long long it = 0; it < n; ++it) {
        double w = 1.0;
        for (int v : order) {
            const VarDomain& vd = r.vars[v];
            Complex c = resolve_pos(vd.center, fr.pt.positions, fr.nvars);
            if (vd.kind == VarDomain::Kind::Contour) {
                double t = 2.0 * M_PI * U(rng);
                fr.pt.phase[v] = std::polar(1.0, t);
                fr.pt.positions[v] = c + vd.radius * fr.pt.phase[v];
                w *= 2.0 * M_PI;
            } else {
                detail::AreaSamplerState st;
                st.center = c;
                st.R = vd.radius;
                st.power = o.hole_power;
                for (auto& h : vd.holes) {
                    st.hole_c.push_back(resolve_pos(h.first, fr.pt.positions, fr.nvars));
                    st.hole_r.push_back(h.second);
                }
                st.prepare(0.5);
                double aw;
                fr.pt.positions[v] = st.sample(rng, aw);
                w *= aw;
            }
        }
        Complex val = f(fr.pt) * w;
        sum += val;
        sq += std::norm(val);
    }
    IntegrationResult res;
    res.value = sum / double(n);
    double var = std::max(0.0, sq / double(n) - std::norm(res.value));
    res.error = std::sqrt(var / double(n));
    res.samples = n;
    res.method = "monte-carlo";
    return res;
}

// ---------------------------------------------------------------------------
// Deterministic quadrature, for regions with at most one area variable.
// Contours use the periodic trapezoid rule with doubling (spectrally accurate
// for our analytic integrands); the area variable is done in polar
// coordinates about its outer center with hole-aware radial panels and
// arc-excluded angular integration.
// ---------------------------------------------------------------------------

namespace detail {

inline Complex trapezoid_circle(const std::function<Complex(double)>& g, double tol, int maxpts,
                                double& err) {
    int n = 16;
    Complex prev{0, 0};
    bool have_prev = false;
    Complex cur{0, 0};
    for (;;) {
        cur = {0, 0};
        for (int k = 0; k < n; ++k) cur += g(2.0 * M_PI * k / n);
        cur *= 2.0 * M_PI / n;
        if (have_prev) {
            err = std::abs(cur - prev);
            if (err < tol * (1.0 + std::abs(cur)) || n >= maxpts) return cur;
        }
        prev = cur;
        have_prev = true;
        n *= 2;
    }
}

// adaptive Gauss-Legendre (15 pt) with bisection on [a,b]
inline Complex gl15(const std::function<Complex(double)>& g, double a, double b) {
    static const double x[8] = {0.0,
                                0.2011940939974345,
                                0.3941513470775634,
                                0.5709721726085388,
                                0.7244177313601701,
                                0.8482065834104272,
                                0.9372733924007060,
                                0.9879925180204854};
    static const double w[8] = {0.2025782419255613, 0.1984314853271116, 0.1861610000155622,
                                0.1662692058169939, 0.1395706779261543, 0.1071592204671719,
                                0.0703660474881081, 0.0307532419961173};
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex s = w[0] * g(c);
    for (int i = 1; i < 8; ++i) s += w[i] * (g(c + h * x[i]) + g(c - h * x[i]));
    return s * h;
}

inline Complex adaptive_line(const std::function<Complex(double)>& g, double a, double b,
                             double tol, int depth, double& err) {
    Complex whole = gl15(g, a, b);
    Complex left = gl15(g, a, 0.5 * (a + b));
    Complex right = gl15(g, 0.5 * (a + b), b);
    double delta = std::abs(left + right - whole);
    if (depth <= 0 || delta < tol) {
        err += delta;
        return left + right;
    }
    double e1 = 0, e2 = 0;
    Complex r1 = adaptive_line(g, a, 0.5 * (a + b), tol * 0.6, depth - 1, e1);
    Complex r2 = adaptive_line(g, 0.5 * (a + b), b, tol * 0.6, depth - 1, e2);
    err += e1 + e2;
    return r1 + r2;
}

// angular integral at fixed radius: full circle minus excluded arcs around
// offset holes
struct ArcExclusion {
    double center_angle;
    double half_width;
};

inline Complex angular_integral(const std::function<Complex(double)>& g,
                                const std::vector<ArcExclusion>& ex, double tol, double& err) {
    if (ex.empty()) {
        double e = 0;
        Complex v = trapezoid_circle(g, tol, 512, e);
        err += e;
        return v;
    }
    // collect allowed intervals on [0, 2pi)
    std::vector<std::pair<double, double>> cut;
    for (auto& e : ex) {
        double a = e.center_angle - e.half_width, b = e.center_angle + e.half_width;
        a = std::fmod(a + 4.0 * M_PI, 2.0 * M_PI);
        b = a + 2.0 * e.half_width;
        cut.push_back({a, b});
    }
    std::sort(cut.begin(), cut.end());
    Complex total{0, 0};
    double start = 0.0;
    double wrap_end = 2.0 * M_PI;
    // handle a cut wrapping past 2pi by splitting it
    std::vector<std::pair<double, double>> cuts;
    for (auto& [a, b] : cut) {
        if (b <= 2.0 * M_PI) cuts.push_back({a, b});
        else {
            cuts.push_back({a, 2.0 * M_PI});
            cuts.push_back({0.0, b - 2.0 * M_PI});
        }
    }
    std::sort(cuts.begin(), cuts.end());
    for (auto& [a, b] : cuts) {
        if (a > start) total += adaptive_line(g, start, a, tol, 12, err);
        start = std::max(start, b);
    }
    if (start < wrap_end) total += adaptive_line(g, start, wrap_end, tol, 12, err);
    return total;
}

} // namespace detail

// Quadrature over one area variable in polar coordinates about its outer
// center. Concentric holes clip the radial range; offset holes exclude arcs.
inline Complex area_quadrature(Complex center, double R,
                               const std::vector<std::pair<Complex, double>>& holes,
                               const std::function<Complex(Complex)>& f, double tol, double& err) {
    double r_lo = 0.0;
    std::vector<std::pair<Complex, double>> offset;
    for (auto& [c, rr] : holes) {
        if (std::abs(c - center) < 1e-14) r_lo = std::max(r_lo, rr);
        else offset.push_back({c, rr});
    }
    std::vector<double> breaks{r_lo, R};
    for (auto& [c, rr] : offset) {
        double d = std::abs(c - center);
        for (double b : {d - rr, d + rr, d})
            if (b > r_lo && b < R) breaks.push_back(b);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                 breaks.end());

    auto radial = [&](double r) -> Complex {
        std::vector<detail::ArcExclusion> ex;
        for (auto& [c, rr] : offset) {
            double d = std::abs(c - center);
            if (r > d - rr && r < d + rr) {
                double cosd = (r * r + d * d - rr * rr) / (2.0 * r * d);
                cosd = std::clamp(cosd, -1.0, 1.0);
                ex.push_back({std::arg(c - center), std::acos(cosd)});
            }
        }
        double aerr = 0;
        Complex v = detail::angular_integral(
            [&](double th) { return f(center + std::polar(r, th)); }, ex, tol, aerr);
        return v * r;
    };

    Complex total{0, 0};
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        double e = 0;
        total += detail::adaptive_line(radial, breaks[i], breaks[i + 1], tol, 10, e);
        err += e;
    }
    return total;
}

// Deterministic nested quadrature for regions of dimension <= 3 with at most
// one area variable (the V3 family). Integrates in dependency order.
inline IntegrationResult integrate_quadrature(const Region& r, const Integrand& f,
                                              const IntegrateOptions& o) {
    int areas = 0;
    for (auto& v : r.vars) areas += v.kind == VarDomain::Kind::Area ? 1 : 0;
    if (areas > 1) throw std::invalid_argument("integrate_quadrature: more than one area variable");

    detail::SampleFrame fr;
    detail::init_frame(fr, r, o);
    auto order = detail::topo_order(r.vars);

    double err_total = 0.0;
    long long evals = 0;

    std::function<Complex(std::size_t)> level = [&](std::size_t li) -> Complex {
        if (li == order.size()) {
            ++evals;
            return f(fr.pt);
        }
        int v = order[li];
        const VarDomain& vd = r.vars[v];
        Complex c = resolve_pos(vd.center, fr.pt.positions, fr.nvars);
        if (vd.kind == VarDomain::Kind::Contour) {
            double e = 0;
            Complex val = detail::trapezoid_circle(
                [&](double t) {
                    fr.pt.phase[v] = std::polar(1.0, t);
                    fr.pt.positions[v] = c + vd.radius * fr.pt.phase[v];
                    return level(li + 1);
                },
                o.rel_tol, o.max_contour_points, e);
            err_total += e;
            return val;
        }
        std::vector<std::pair<Complex, double>> holes;
        for (auto& h : vd.holes)
            holes.push_back({resolve_pos(h.first, fr.pt.positions, fr.nvars), h.second});
        double e = 0;
        Complex val = area_quadrature(
            c, vd.radius, holes,
            [&](Complex x) {
                fr.pt.positions[v] = x;
                return level(li + 1);
            },
            o.rel_tol, e);
        err_total += e;
        return val;
    };

    IntegrationResult res;
    res.value = level(0);
    res.error = err_total;
    res.samples = evals;
    res.method = "adaptive";
    return res;
}

// Route by shape: deterministic quadrature up to dimension 3 with at most
// one area variable, Monte Carlo beyond.
inline IntegrationResult integrate(const Region& r, const Integrand& f,
                                   const IntegrateOptions& o) {
    int areas = 0;
    for (auto& v : r.vars) areas += v.kind == VarDomain::Kind::Area ? 1 : 0;
    if (areas <= 1 && r.dim() <= 3) return integrate_quadrature(r, f, o);
    return integrate_mc(r, f, o);
}

// Monte-Carlo estimate of the region's Lebesgue measure (for the geometry
// sanity criteria): samples the bounding product uniformly and counts hits.
inline IntegrationResult mc_volume(const Region& r, long long n, std::uint64_t seed) {
    detail::SampleFrame fr;
    IntegrateOptions o;
    detail::init_frame(fr, r, o);
    auto order = detail::topo_order(r.vars);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double sum = 0.0, sq = 0.0;
    for (long long it = 0; it < n; ++it) {
        double w = 1.0;
        for (int v : order) {
            const VarDomain& vd = r.vars[v];
            Complex c = resolve_pos(vd.center, fr.pt.positions, fr.nvars);
            if (vd.kind == VarDomain::Kind::Contour) {
                double t = 2.0 * M_PI * U(rng);
                fr.pt.positions[v] = c + vd.radius * std::polar(1.0, t);
                w *= 2.0 * M_PI * vd.radius;
            } else {
                double rr = vd.radius * std::sqrt(U(rng));
                double th = 2.0 * M_PI * U(rng);
                Complex x = c + std::polar(rr, th);
                fr.pt.positions[v] = x;
                w *= M_PI * vd.radius * vd.radius;
                for (auto& h : vd.holes)
                    if (std::abs(x - resolve_pos(h.first, fr.pt.positions, fr.nvars)) < h.second)
                        w = 0.0;
            }
            if (w == 0.0) break;
        }
        sum += w;
        sq += w * w;
    }
    IntegrationResult res;
    double mean = sum / double(n);
    res.value = mean;
    res.error = std::sqrt(std::max(0.0, sq / double(n) - mean * mean) / double(n));
    res.samples = n;
    res.method = "monte-carlo";
    return res;
}

// ---------------------------------------------------------------------------
// Stokes checker: integral of the exterior derivative over one area variable
// against the signed sum of boundary-component integrals of the 1-form.
// The caller supplies the 1-form components (B, B') and the dv^dvbar
// coefficient of d(omega) = (dB'/dv - dB/dvbar) dv^dvbar at resolved points.
// Both sides are reported so the residual can be normalized.
// ---------------------------------------------------------------------------

struct StokesReport {
    Complex volume_side{0, 0};
    Complex boundary_side{0, 0};
    double error = 0.0;
    double residual() const { return std::abs(volume_side - boundary_side); }
    double scale() const {
        return std::max({std::abs(volume_side), std::abs(boundary_side), 1e-30});
    }
};

// omega_B / omega_Bbar: 1-form components as functions of the sample point;
// domega: coefficient of dv^dvbar. stokes_var: the area variable tested.
inline StokesReport stokes_check(const Region& r, const std::vector<BoundaryComponent>& strata,
                                 int stokes_var, const Integrand& omega_B,
                                 const Integrand& omega_Bbar, const Integrand& domega,
                                 const IntegrateOptions& o) {
    StokesReport rep;
    // volume side: integrate domega * (-2i) dx dy over the full region
    Integrand vol = [&](const SamplePoint& s) { return domega(s) * Complex(0.0, -2.0); };
    IntegrationResult v = integrate(r, vol, o);
    rep.volume_side = v.value;
    rep.error += v.error;

    for (const auto& bc : strata) {
        if (bc.stokes_var != stokes_var) continue;
        const VarDomain& vd = bc.region.vars[stokes_var];
        Integrand line = [&](const SamplePoint& s) {
            Complex ph = s.phase[stokes_var];
            Complex dv = Complex(0, 1) * vd.radius * ph;
            Complex dvb = std::conj(dv);
            return omega_B(s) * dv + omega_Bbar(s) * dvb;
        };
        IntegrationResult b = integrate(bc.region, line, o);
        rep.boundary_side += double(bc.orientation) * b.value;
        rep.error += b.error;
    }
    return rep;
}

} // namespace tcft
