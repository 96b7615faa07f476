#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcft/forms.hpp"
#include "tcft/wick.hpp"

namespace tcft {

struct RegionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Parameter blocks for the named integration domains. kappa operationalizes
// every "<<" in the constraints: small parameters must be at most 1/kappa of
// the scales they are compared against.
// ---------------------------------------------------------------------------

struct CircleParams {
    Complex center{0.0, 0.0};
    double eps = 0.1;
};

struct V3Params {
    Complex center{0.0, 0.0};
    double rho1 = 1.0, rho2 = 0.6, eps = 0.06, xi = 0.06;
    double kappa = 10.0;

    void validate() const {
        if (eps <= 0 || xi <= 0 || rho1 <= 0 || rho2 <= 0)
            throw RegionError("V3: all radii must be positive");
        if (!(rho1 > rho2)) throw RegionError("V3: rho1 > rho2 violated");
        if (eps * kappa > std::min(rho1, rho2) + 1e-12)
            throw RegionError("V3: eps << rho_{1,2} violated (kappa)");
        if (xi * kappa > std::min(rho1, rho2) + 1e-12)
            throw RegionError("V3: xi << rho_{1,2} violated (kappa)");
        // excluded disks stay disjoint and inside the rho1 disk
        if (rho2 + xi >= rho1) throw RegionError("V3: xi disk leaves the rho1 disk");
        if (eps + xi >= rho2) throw RegionError("V3: eps and xi disks collide");
    }
};

struct V4Params {
    Complex center{0.0, 0.0};
    double rho1 = 1.0, rho2 = 0.62, rho3 = 0.35;
    double eps1 = 0.0035, eps2 = 0.035, xi1 = 0.0035, xi2 = 0.035, alpha = 0.0035;
    double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0; // 0 = midpoint default
    double kappa = 10.0;

    double lam1() const { return lambda1 > 0 ? lambda1 : 0.5 * ((rho3 + eps1) + (rho2 - alpha)); }
    double lam2() const { return lambda2 > 0 ? lambda2 : 0.5 * ((eps2 + alpha) + (rho3 - eps1)); }
    double lam3() const { return lambda3 > 0 ? lambda3 : 0.5 * ((eps2 + alpha) + (rho3 - eps1)); }

    void validate() const {
        for (double r : {rho1, rho2, rho3, eps1, eps2, xi1, xi2, alpha})
            if (r <= 0) throw RegionError("V4: all radii must be positive");
        double small = std::max({alpha, xi1, xi2, eps1, eps2});
        if (small * kappa > std::min({rho1, rho2, rho3}) + 1e-12)
            throw RegionError("V4: rho_i >> alpha,xi,eps violated (kappa)");
        if (std::max(eps1, alpha) * kappa > eps2 + 1e-12)
            throw RegionError("V4: eps2 >> eps1, alpha violated (kappa)");
        if (std::max(xi1, alpha) * kappa > xi2 + 1e-12)
            throw RegionError("V4: xi2 >> xi1, alpha violated (kappa)");
        // constructive non-degeneracy of the excluded disks
        if (rho3 + xi2 >= rho2) throw RegionError("V4: xi2 disk leaves the rho2 disk");
        if (eps2 + xi2 >= rho3) throw RegionError("V4: eps2 and xi2 disks collide");
        if (rho2 + alpha >= rho1) throw RegionError("V4: alpha disk can leave the rho1 disk");
        if (rho3 + xi1 >= rho1) throw RegionError("V4: xi1 disk leaves the rho1 disk");
        if (eps1 + xi1 >= rho3) throw RegionError("V4: eps1 and xi1 disks collide");
        if (alpha + eps1 >= eps2) throw RegionError("V4: alpha disk can hit the eps1 disk");
        if (alpha + xi1 >= xi2) throw RegionError("V4: alpha disk can hit the xi1 disk");
        // lambda windows
        if (!(rho3 + eps1 < lam1() && lam1() < rho2 + alpha))
            throw RegionError("V4: lambda1 window (rho3+eps1, rho2+alpha) empty or violated");
        if (!(eps2 + alpha < lam2() && lam2() < rho3 + eps1))
            throw RegionError("V4: lambda2 window (eps2+alpha, rho3+eps1) empty or violated");
        if (!(eps2 + alpha < lam3() && lam3() < rho3 - eps1))
            throw RegionError("V4: lambda3 window (eps2+alpha, rho3-eps1) empty or violated");
    }
};

// ---------------------------------------------------------------------------
// Concrete evaluation geometry: the var graph of one term plus the base
// point. Positions are indexed [0..nvars) vars, nvars = base, then fixed
// points appended by the caller.
// ---------------------------------------------------------------------------

struct Region {
    Complex base{0.0, 0.0};
    std::vector<VarDomain> vars;
    std::string label;
    int orientation = 1; // sign for boundary strata

    int nvars() const { return int(vars.size()); }
    int dim() const {
        int d = 0;
        for (auto& v : vars) d += v.kind == VarDomain::Kind::Contour ? 1 : 2;
        return d;
    }
};

namespace detail {

inline std::vector<int> topo_order(const std::vector<VarDomain>& vars) {
    int n = int(vars.size());
    std::vector<int> state(n, 0), order;
    std::function<void(int)> visit = [&](int v) {
        if (state[v] == 1) throw std::logic_error("region: cyclic variable dependency");
        if (state[v] == 2) return;
        state[v] = 1;
        if (vars[v].center >= 0) visit(vars[v].center);
        for (auto& h : vars[v].holes)
            if (h.first >= 0) visit(h.first);
        state[v] = 2;
        order.push_back(v);
    };
    for (int v = 0; v < n; ++v) visit(v);
    return order;
}

} // namespace detail

inline Complex resolve_pos(int pos, const std::vector<Complex>& positions, int nvars) {
    return pos == POS_BASE ? positions[nvars] : positions[pos];
}

// analytic Lebesgue measure: product over vars of (circumference | free area)
inline double region_measure(const Region& r) {
    double m = 1.0;
    for (auto& v : r.vars) {
        if (v.kind == VarDomain::Kind::Contour) m *= 2.0 * M_PI * v.radius;
        else {
            double a = M_PI * v.radius * v.radius;
            for (auto& h : v.holes) a -= M_PI * h.second * h.second;
            m *= a;
        }
    }
    return m;
}

// V3(z) = {(v,w): v in D_{rho1,z} \ (D_{xi,w} u D_{eps,z}), |z-w| = rho2}
// Vars are listed so that markers are consumed in construction order; the
// sampler always walks the dependency order.
inline Region make_region(const V3Params& p) {
    p.validate();
    Region r;
    r.base = p.center;
    r.label = "V3";
    // var 0: w on the rho2 circle; var 1: v in the punctured disk
    r.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.rho2, {}});
    r.vars.push_back({VarDomain::Kind::Area, POS_BASE, p.rho1, {{POS_BASE, p.eps}, {0, p.xi}}});
    return r;
}

inline Region make_region(const V4Params& p) {
    p.validate();
    Region r;
    r.base = p.center;
    r.label = "V4";
    // var 0: w contour rho3; var 1: v area rho2 \ (eps2@z, xi2@w);
    // var 2: u area rho1 \ (eps1@z, xi1@w, alpha@v)
    r.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.rho3, {}});
    r.vars.push_back({VarDomain::Kind::Area, POS_BASE, p.rho2, {{POS_BASE, p.eps2}, {0, p.xi2}}});
    r.vars.push_back(
        {VarDomain::Kind::Area, POS_BASE, p.rho1, {{POS_BASE, p.eps1}, {0, p.xi1}, {1, p.alpha}}});
    return r;
}

// Exploratory n=5 ansatz: the natural product-of-punctured-disks extension
// with a circle factor. Three nested area variables around z, each excluding
// disks at z, at w, and around the later area variables, times the w circle.
struct V5Params {
    Complex center{0.0, 0.0};
    double rho1 = 1.0, rho2 = 0.7, rho3 = 0.45, rho4 = 0.25;
    double eps1 = 0.05, eps2 = 0.06, eps3 = 0.07;    // holes at z
    double xi1 = 0.05, xi2 = 0.06, xi3 = 0.07;       // holes at w
    double a12 = 0.05, a13 = 0.05, a23 = 0.06;       // holes around later area vars

    void validate() const {
        if (!(rho1 > rho2 && rho2 > rho3 && rho3 > rho4))
            throw RegionError("V5: need rho1 > rho2 > rho3 > rho4");
        if (rho4 + xi3 >= rho3 || eps3 + xi3 >= rho4)
            throw RegionError("V5: v3 excluded disks collide");
        if (rho3 + a23 >= rho2 || eps2 + xi2 >= rho4)
            throw RegionError("V5: v2 excluded disks collide");
        if (rho2 + a12 >= rho1 || eps1 + xi1 >= rho4)
            throw RegionError("V5: v1 excluded disks collide");
    }
};

inline Region make_region(const V5Params& p) {
    p.validate();
    Region r;
    r.base = p.center;
    r.label = "V5";
    // var 0: w contour rho4; var 1: v3; var 2: v2; var 3: v1
    r.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.rho4, {}});
    r.vars.push_back({VarDomain::Kind::Area, POS_BASE, p.rho3, {{POS_BASE, p.eps3}, {0, p.xi3}}});
    r.vars.push_back(
        {VarDomain::Kind::Area, POS_BASE, p.rho2, {{POS_BASE, p.eps2}, {0, p.xi2}, {1, p.a23}}});
    r.vars.push_back({VarDomain::Kind::Area,
                      POS_BASE,
                      p.rho1,
                      {{POS_BASE, p.eps1}, {0, p.xi1}, {1, p.a13}, {2, p.a12}}});
    return r;
}

inline Region make_region(const CircleParams& p) {
    Region r;
    r.base = p.center;
    r.label = "circle";
    if (p.eps <= 0) throw RegionError("circle: eps must be positive");
    r.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.eps, {}});
    return r;
}

// ---------------------------------------------------------------------------
// Boundary decomposition. Each stratum replaces one area variable by a
// contour (a boundary circle of that domain), keeping every other variable;
// orientation +1 on outer circles, -1 on hole circles (outward Stokes
// convention). For V4 the three v-strata are additionally split by the
// lambda_i spheres in the u variable, giving the printed ten components.
// ---------------------------------------------------------------------------

struct BoundaryComponent {
    Region region;
    std::string label;
    int orientation = 1;
    int stokes_var = -1; // which var index carries the boundary circle
};

inline std::vector<BoundaryComponent> boundary(const Region& r, const V3Params& p) {
    std::vector<BoundaryComponent> out;
    auto mk = [&](int center, double rad, const char* lbl, int orient) {
        BoundaryComponent b;
        b.region = r;
        b.region.vars[1] = {VarDomain::Kind::Contour, center, rad, {}};
        b.label = lbl;
        b.orientation = orient;
        b.stokes_var = 1;
        out.push_back(std::move(b));
    };
    mk(POS_BASE, p.rho1, "v:rho1-outer", +1);
    mk(POS_BASE, p.eps, "v:eps-hole", -1);
    mk(0, p.xi, "v:xi-hole", -1);
    return out;
}

inline std::vector<BoundaryComponent> boundary(const Region& r, const V4Params& p) {
    std::vector<BoundaryComponent> out;
    // u-boundaries: four circles of the outer punctured disk
    auto mk_u = [&](int center, double rad, const char* lbl, int orient) {
        BoundaryComponent b;
        b.region = r;
        b.region.vars[2] = {VarDomain::Kind::Contour, center, rad, {}};
        b.label = lbl;
        b.orientation = orient;
        b.stokes_var = 2;
        out.push_back(std::move(b));
    };
    mk_u(POS_BASE, p.rho1, "u:rho1-outer", +1);
    mk_u(POS_BASE, p.eps1, "u:eps1-hole", -1);
    mk_u(0, p.xi1, "u:xi1-hole", -1);
    mk_u(1, p.alpha, "u:alpha-hole", -1);
    // v-boundaries: three circles, each with the u-domain split by lambda_i
    auto mk_v = [&](int vcenter, double vrad, double lam, const char* lbl, int orient) {
        // inner piece: u in D_{lam,z} keeping the holes that fit inside
        BoundaryComponent inner;
        inner.region = r;
        inner.region.vars[1] = {VarDomain::Kind::Contour, vcenter, vrad, {}};
        inner.region.vars[2].radius = lam;
        inner.region.vars[2].holes.clear();
        BoundaryComponent outer = inner;
        // classify holes of the u-domain against the lambda circle
        // (validated geometry guarantees no straddling for default lambdas)
        std::vector<std::pair<int, double>> uholes = {{POS_BASE, p.eps1}, {0, p.xi1}, {1, p.alpha}};
        for (auto& h : uholes) {
            double dmin, dmax; // distance of the hole center from z over the stratum
            if (h.first == POS_BASE) dmin = dmax = 0.0;
            else if (h.first == 0) dmin = dmax = p.rho3;
            else if (vcenter == POS_BASE) dmin = dmax = vrad;
            else { dmin = p.rho3 - vrad; dmax = p.rho3 + vrad; }
            if (dmax + h.second < lam) inner.region.vars[2].holes.push_back(h);
            else if (dmin - h.second > lam) outer.region.vars[2].holes.push_back(h);
            else throw RegionError(std::string("V4 boundary: hole straddles the lambda circle at ") + lbl);
        }
        // outer piece: annulus lam..rho1 = disk rho1 minus disk lam minus its holes
        outer.region.vars[2].radius = p.rho1;
        outer.region.vars[2].holes.push_back({POS_BASE, lam});
        inner.label = std::string(lbl) + ":u<lam";
        outer.label = std::string(lbl) + ":u>lam";
        inner.orientation = outer.orientation = orient;
        inner.stokes_var = outer.stokes_var = 1;
        out.push_back(std::move(inner));
        out.push_back(std::move(outer));
    };
    mk_v(POS_BASE, p.rho2, p.lam1(), "v:rho2-outer", +1);
    mk_v(POS_BASE, p.eps2, p.lam2(), "v:eps2-hole", -1);
    mk_v(0, p.xi2, p.lam3(), "v:xi2-hole", -1);
    return out;
}

} // namespace tcft
