#pragma once

#include "tcft/evaluate.hpp"

namespace tcft {

// Parameter-dependent products on the space of nonlocal forms. Every binary
// product integrates the hat-completed first argument over a circle C_{eps,z};
// the higher products integrate hat completions over the punctured-disk
// regions, then the whole object gets the (1 - [.,b] + 1/2 [[.,b],b])
// completion over the non-final arguments.

struct BracketConfig {
    double eps = 0.25;    // radius of the binary product's contour
    V3Params v3{};
    V4Params v4{};
    int circlep_sign = -1; // sign of the commutator term in the eps-product
    DTwist twist = DTwist::Twisted;
    double rel_floor = 1e-6; // identity pass floor relative to the baseline
};

namespace detail {

inline GaussianRational grat(int v) { return GaussianRational(Rational(v)); }

inline void append_piece(WTerm& acc, const WTerm& piece) {
    acc.coeff = acc.coeff * piece.coeff;
    acc.vars.insert(acc.vars.end(), piece.vars.begin(), piece.vars.end());
    acc.slots.insert(acc.slots.end(), piece.slots.begin(), piece.slots.end());
}

// completion (1 - b_z + 1/2 b_z^2) over the first `nfirst` slots
inline WbarElement dagger_completion(const WbarElement& e, std::size_t nfirst) {
    WbarElement b1 = b_theta_action(e, POS_BASE, 0, nfirst);
    WbarElement b2 = b_theta_action(b1, POS_BASE, 0, nfirst) * grat(1) * GaussianRational(Rational(1, 2));
    WbarElement out = e - b1 + b2;
    normalize(out);
    return out;
}

} // namespace detail

// phi o_eps chi: contour integral of (phi + sign [phi, b(theta')]) at w over
// C_{eps,z} against chi at z. Zero on 2-form phi by saturation.
inline WbarElement circle_eps(const WbarElement& phi, const WbarElement& chi, double eps,
                              int circlep_sign = -1) {
    if (element_size(phi) + element_size(chi) >= eps)
        throw RegionError("circle_eps: size constraint rho_phi + rho_chi < eps violated");
    WbarElement out;
    for (const auto& tphi : phi.terms) {
        int k = int(tphi.vars.size());
        WTerm P = remap_base(tphi, k);
        P.vars.push_back({VarDomain::Kind::Contour, POS_BASE, eps, {}});
        WbarElement Pe;
        Pe.terms.push_back(P);
        WbarElement P2 = Pe + b_theta_action(Pe, k) * detail::grat(circlep_sign);
        for (const auto& u : P2.terms)
            for (const auto& tchi : chi.terms) {
                WTerm v = u;
                detail::append_piece(v, offset_vars(tchi, k + 1));
                if (!v.is_zero()) out.terms.push_back(std::move(v));
            }
    }
    prune_saturation(out);
    normalize(out);
    return out;
}

// [chi, psi]_eps: the three-term completion of the eps-product.
inline WbarElement bracket2(const WbarElement& chi, const WbarElement& psi, double eps,
                            int circlep_sign = -1) {
    if (element_size(chi) + element_size(psi) >= eps)
        throw RegionError("bracket2: size constraint rho_chi + rho_psi < eps violated");
    WbarElement out;
    for (const auto& tchi : chi.terms) {
        int k = int(tchi.vars.size());
        std::size_t nfirst = tchi.slots.size();
        WTerm P = remap_base(tchi, k);
        P.vars.push_back({VarDomain::Kind::Contour, POS_BASE, eps, {}});
        WbarElement Pe;
        Pe.terms.push_back(P);
        WbarElement P2 = Pe + b_theta_action(Pe, k) * detail::grat(circlep_sign);
        for (const auto& u : P2.terms)
            for (const auto& tpsi : psi.terms) {
                WTerm v = u;
                detail::append_piece(v, offset_vars(tpsi, k + 1));
                if (v.is_zero()) continue;
                WbarElement Ve;
                Ve.terms.push_back(std::move(v));
                out += detail::dagger_completion(Ve, nfirst);
            }
    }
    prune_saturation(out);
    normalize(out);
    return out;
}

// (phi, psi) <> chi over V3: 1/2 Int hat(phi)(v) hat(psi)(w) chi(z).
inline WbarElement diamond3(const WbarElement& phi, const WbarElement& psi, const WbarElement& chi,
                            const V3Params& p, bool completed = false) {
    p.validate();
    double sp = element_size(phi), ss = element_size(psi), sc = element_size(chi);
    if (sp + sc >= p.eps) throw RegionError("diamond3: eps hole too small for the arguments at v and z");
    if (sp + ss >= p.xi) throw RegionError("diamond3: xi hole too small for the arguments at v and w");
    if (ss + sc >= p.rho2) throw RegionError("diamond3: rho2 circle too small for the arguments at w and z");

    WbarElement hphi = hat(phi), hpsi = hat(psi);
    WbarElement out;
    for (const auto& tphi : hphi.terms)
        for (const auto& tpsi : hpsi.terms)
            for (const auto& tchi : chi.terms) {
                int kphi = int(tphi.vars.size());
                int kpsi = int(tpsi.vars.size());
                int vid = kphi;
                int wid = kphi + 1 + kpsi;
                WTerm acc = remap_base(tphi, vid);
                acc.vars.push_back({VarDomain::Kind::Area,
                                    POS_BASE,
                                    p.rho1,
                                    {{POS_BASE, p.eps}, {wid, p.xi}}});
                WTerm B = remap_base(offset_vars(tpsi, kphi + 1), wid);
                B.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.rho2, {}});
                detail::append_piece(acc, B);
                detail::append_piece(acc, offset_vars(tchi, wid + 1));
                acc.coeff = acc.coeff * GaussianRational(Rational(1, 2));
                if (acc.is_zero()) continue;
                if (!completed) {
                    out.terms.push_back(std::move(acc));
                } else {
                    WbarElement Ve;
                    std::size_t nfirst = tphi.slots.size() + tpsi.slots.size();
                    Ve.terms.push_back(std::move(acc));
                    out += detail::dagger_completion(Ve, nfirst);
                }
            }
    prune_saturation(out);
    normalize(out);
    return out;
}

// [alpha, beta, gamma] over V3: the completed trilinear bracket.
inline WbarElement bracket3(const WbarElement& a, const WbarElement& b, const WbarElement& c,
                            const V3Params& p) {
    return diamond3(a, b, c, p, /*completed=*/true);
}

// quadrilinear product over V4: 1/4 Int hat(phi)(u) hat(psi)(v) hat(chi)(w) sigma(z)
inline WbarElement diamond4(const WbarElement& phi, const WbarElement& psi, const WbarElement& chi,
                            const WbarElement& sig, const V4Params& p, bool completed = false) {
    p.validate();
    double s1 = element_size(phi), s2 = element_size(psi), s3 = element_size(chi),
           s4 = element_size(sig);
    if (s1 + s4 >= p.eps1) throw RegionError("diamond4: eps1 hole too small for the arguments at u and z");
    if (s1 + s3 >= p.xi1) throw RegionError("diamond4: xi1 hole too small for the arguments at u and w");
    if (s1 + s2 >= p.alpha) throw RegionError("diamond4: alpha hole too small for the arguments at u and v");
    if (s2 + s4 >= p.eps2) throw RegionError("diamond4: eps2 hole too small for the arguments at v and z");
    if (s2 + s3 >= p.xi2) throw RegionError("diamond4: xi2 hole too small for the arguments at v and w");
    if (s3 + s4 >= p.rho3) throw RegionError("diamond4: rho3 circle too small for the arguments at w and z");

    WbarElement h1 = hat(phi), h2 = hat(psi), h3 = hat(chi);
    WbarElement out;
    for (const auto& t1 : h1.terms)
        for (const auto& t2 : h2.terms)
            for (const auto& t3 : h3.terms)
                for (const auto& t4 : sig.terms) {
                    int k1 = int(t1.vars.size()), k2 = int(t2.vars.size()), k3 = int(t3.vars.size());
                    int uid = k1;
                    int vid = k1 + 1 + k2;
                    int wid = k1 + 1 + k2 + 1 + k3;
                    WTerm acc = remap_base(t1, uid);
                    acc.vars.push_back({VarDomain::Kind::Area,
                                        POS_BASE,
                                        p.rho1,
                                        {{POS_BASE, p.eps1}, {wid, p.xi1}, {vid, p.alpha}}});
                    WTerm B = remap_base(offset_vars(t2, k1 + 1), vid);
                    B.vars.push_back({VarDomain::Kind::Area,
                                      POS_BASE,
                                      p.rho2,
                                      {{POS_BASE, p.eps2}, {wid, p.xi2}}});
                    detail::append_piece(acc, B);
                    WTerm C = remap_base(offset_vars(t3, k1 + 1 + k2 + 1), wid);
                    C.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.rho3, {}});
                    detail::append_piece(acc, C);
                    detail::append_piece(acc, offset_vars(t4, wid + 1));
                    acc.coeff = acc.coeff * GaussianRational(Rational(1, 4));
                    if (acc.is_zero()) continue;
                    if (!completed) {
                        out.terms.push_back(std::move(acc));
                    } else {
                        WbarElement Ve;
                        std::size_t nfirst = t1.slots.size() + t2.slots.size() + t3.slots.size();
                        Ve.terms.push_back(std::move(acc));
                        out += detail::dagger_completion(Ve, nfirst);
                    }
                }
    prune_saturation(out);
    normalize(out);
    return out;
}

inline WbarElement bracket4(const WbarElement& a, const WbarElement& b, const WbarElement& c,
                            const WbarElement& d, const V4Params& p) {
    return diamond4(a, b, c, d, p, /*completed=*/true);
}

// Exploratory 5-linear product over the V5 ansatz, same pattern with a 1/8
// prefactor; never part of an acceptance gate.
inline WbarElement diamond5(const std::array<WbarElement, 5>& args, const V5Params& p,
                            bool completed) {
    p.validate();
    std::array<WbarElement, 4> h;
    for (int i = 0; i < 4; ++i) h[i] = hat(args[i]);
    WbarElement out;
    for (const auto& t1 : h[0].terms)
        for (const auto& t2 : h[1].terms)
            for (const auto& t3 : h[2].terms)
                for (const auto& t4 : h[3].terms)
                    for (const auto& t5 : args[4].terms) {
                        int k1 = int(t1.vars.size()), k2 = int(t2.vars.size()),
                            k3 = int(t3.vars.size()), k4 = int(t4.vars.size());
                        int v1 = k1;
                        int v2 = k1 + 1 + k2;
                        int v3 = k1 + 1 + k2 + 1 + k3;
                        int w = v3 + 1 + k4;
                        WTerm acc = remap_base(t1, v1);
                        acc.vars.push_back({VarDomain::Kind::Area,
                                            POS_BASE,
                                            p.rho1,
                                            {{POS_BASE, p.eps1}, {w, p.xi1}, {v3, p.a13}, {v2, p.a12}}});
                        WTerm B = remap_base(offset_vars(t2, k1 + 1), v2);
                        B.vars.push_back({VarDomain::Kind::Area,
                                          POS_BASE,
                                          p.rho2,
                                          {{POS_BASE, p.eps2}, {w, p.xi2}, {v3, p.a23}}});
                        detail::append_piece(acc, B);
                        WTerm C = remap_base(offset_vars(t3, k1 + 1 + k2 + 1), v3);
                        C.vars.push_back({VarDomain::Kind::Area,
                                          POS_BASE,
                                          p.rho3,
                                          {{POS_BASE, p.eps3}, {w, p.xi3}}});
                        detail::append_piece(acc, C);
                        WTerm D = remap_base(offset_vars(t4, v3 + 1), w);
                        D.vars.push_back({VarDomain::Kind::Contour, POS_BASE, p.rho4, {}});
                        detail::append_piece(acc, D);
                        detail::append_piece(acc, offset_vars(t5, w + 1));
                        acc.coeff = acc.coeff * GaussianRational(Rational(1, 8));
                        if (acc.is_zero()) continue;
                        if (!completed) {
                            out.terms.push_back(std::move(acc));
                        } else {
                            WbarElement Ve;
                            std::size_t nfirst =
                                t1.slots.size() + t2.slots.size() + t3.slots.size() + t4.slots.size();
                            Ve.terms.push_back(std::move(acc));
                            out += detail::dagger_completion(Ve, nfirst);
                        }
                    }
    prune_saturation(out);
    normalize(out);
    return out;
}

inline WbarElement bracket5(const std::array<WbarElement, 5>& args, const V5Params& p) {
    return diamond5(args, p, true);
}

} // namespace tcft
