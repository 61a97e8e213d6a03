#include "trimap/shield.hpp"

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "trimap/spec.hpp"

namespace trimap {

namespace {
bool shield_debug() {
    static bool on = std::getenv("TRIMAP_SHIELD_DEBUG") != nullptr;
    return on;
}
void dbg(const char* fmt, ...) {
    if (!shield_debug()) return;
    va_list ap;
    va_start(ap, fmt);
    vfprintf(stderr, fmt, ap);
    va_end(ap);
    fflush(stderr);
}
} // namespace

// ---------------- generic quadric shield ----------------

std::vector<MPoly> QuadricShield::l_forms() const {
    const TowerPtr& tw = b[0].tower();
    std::vector<MPoly> out;
    for (int i = 0; i <= n; ++i) {
        MPoly L(tw, n + 1);
        for (int j = 0; j <= n; ++j) {
            Expo e(n + 1, 0);
            e[j] = 1;
            L.add_term(e, mu_inv[i][j]);
        }
        out.push_back(std::move(L));
    }
    return out;
}

MPoly QuadricShield::quadric_relation() const {
    auto L = l_forms();
    const TowerPtr& tw = b[0].tower();
    MPoly r(tw, n + 1);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) r += (L[i] * L[j]).scaled(a[i][j]);
    MPoly lin(tw, n + 1);
    for (int i = 0; i < n; ++i) lin += L[i].scaled(b[i]);
    r += L[n] * lin;
    return r;
}

std::optional<std::vector<KElem>> QuadricShield::push(const std::vector<KElem>& x) const {
    const TowerPtr& tw = b[0].tower();
    KElem den = tw->zero();
    for (int i = 0; i < n; ++i) den += b[i] * x[i];
    if (den.is_zero()) return std::nullopt;
    KElem num = tw->zero();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) num += a[i][j] * x[i] * x[j];
    std::vector<KElem> lifted = x;
    lifted.push_back(-(num / den));
    return mat_vec(mu, lifted);
}

std::vector<KElem> QuadricShield::pull(const std::vector<KElem>& z) const {
    auto full = mat_vec(mu_inv, z);
    full.resize(n);
    return full;
}

MPoly QuadricShield::compose(const MPoly& f) const {
    auto L = l_forms();
    L.erase(L.begin() + n, L.end()); // only the first n forms substitute
    return MPoly::compose(f, L);
}

QuadricShield random_quadric_shield(const TowerPtr& tw, int n, Rng& rng) {
    QuadricShield s;
    s.n = n;
    s.a.assign(n, Vec<KElem>(n, tw->zero()));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s.a[i][j] = tw->random_nonzero(rng);
    s.b.clear();
    for (int i = 0; i < n; ++i) s.b.push_back(tw->random_nonzero(rng));
    for (;;) {
        Mat<KElem> m(n + 1, Vec<KElem>(n + 1, tw->zero()));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) m[i][j] = tw->random_elem(rng);
        auto inv = mat_inverse(m);
        if (!inv) continue;
        s.mu = std::move(m);
        s.mu_inv = std::move(*inv);
        return s;
    }
}

bool dense_in_degree(const MPoly& p, int block_first, int block_len, int deg) {
    // collect block-projections of the support
    std::set<Expo> seen;
    for (auto& [e, c] : p.terms()) {
        Expo sub(e.begin() + block_first, e.begin() + block_first + block_len);
        if (expo_total(sub) == deg) seen.insert(sub);
    }
    // enumerate all block monomials of the given degree
    std::vector<Expo> all;
    Expo cur(block_len, 0);
    std::function<void(int, int)> gen = [&](int pos, int left) {
        if (pos == block_len - 1) {
            cur[pos] = static_cast<uint16_t>(left);
            all.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[pos] = static_cast<uint16_t>(v);
            gen(pos + 1, left - v);
        }
    };
    gen(0, deg);
    for (auto& m : all)
        if (!seen.count(m)) return false;
    return true;
}

bool dense_somewhere(const MPoly& p, int block_first, int block_len) {
    int dmax = p.degree_in_block(block_first, block_len);
    for (int deg = 2; deg <= dmax; ++deg)
        if (dense_in_degree(p, block_first, block_len, deg)) return true;
    return false;
}

ShieldedSystem birational_shield(const std::vector<MPoly>& gens,
                                 const std::vector<std::pair<MPoly, MPoly>>& functions,
                                 uint64_t seed, int retry_budget) {
    const TowerPtr& tw = gens[0].tower();
    int n = gens[0].nvars();
    Rng rng(seed ^ 0x736869656cULL);
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        ShieldedSystem sys;
        sys.iota = random_quadric_shield(tw, n, rng);
        sys.vprime_gens.clear();
        bool ok = true;
        for (auto& g : gens) {
            MPoly img = sys.iota.compose(g);
            if (!dense_somewhere(img, 0, n + 1)) ok = false;
            sys.vprime_gens.push_back(std::move(img));
        }
        MPoly rprime = sys.iota.quadric_relation();
        if (!dense_in_degree(rprime, 0, n + 1, 2)) ok = false;
        sys.vprime_gens.push_back(std::move(rprime));
        sys.functions.clear();
        for (auto& [f, g] : functions) {
            MPoly fi = sys.iota.compose(f);
            MPoly gi = sys.iota.compose(g);
            if (!dense_somewhere(fi, 0, n + 1) || !dense_somewhere(gi, 0, n + 1)) ok = false;
            sys.functions.emplace_back(std::move(fi), std::move(gi));
        }
        if (ok) return sys;
    }
    throw std::runtime_error("birational_shield: density unreachable within retry budget");
}

// ---------------- elliptic E1/E2 system ----------------

namespace {

struct ShieldConsts {
    HyperCurve e;
    KElem alpha, beta, gamma;
    QuadricShield quad;
};

// coordinate functions of iota = iota2 o iota1^{-1} : E -> E2 as one-curve
// functions (x, w, t are the pre-mu coordinates)
std::vector<CurveFunc1> build_zetas(const ShieldConsts& sc, const FuncRing1& R) {
    auto x = R.coord_x();
    auto y = R.coord_y();
    // w = (alpha x^2 - beta x y)/(gamma y)
    auto w = R.div(R.sub(R.mul(R.konst(sc.alpha), R.mul(x, x)),
                         R.mul(R.konst(sc.beta), R.mul(x, y))),
                   R.mul(R.konst(sc.gamma), y));
    // t = -a01 x w / (b0 x + b1 w)
    auto t = R.neg(R.div(R.mul(R.konst(sc.quad.a[0][1]), R.mul(x, w)),
                         R.add(R.mul(R.konst(sc.quad.b[0]), x), R.mul(R.konst(sc.quad.b[1]), w))));
    std::vector<CurveFunc1> zetas;
    for (int c = 0; c < 3; ++c) {
        auto zc = R.add(R.add(R.mul(R.konst(sc.quad.mu[c][0]), x), R.mul(R.konst(sc.quad.mu[c][1]), w)),
                        R.mul(R.konst(sc.quad.mu[c][2]), t));
        zetas.push_back(R.reduce(zc));
    }
    return zetas;
}

// E-side targets (functions of one or two E points) for the seven tracked maps
struct Targets {
    std::vector<CurveFunc2> add_coords; // z_c o m2 as functions of (P, Q)
    std::vector<CurveFunc1> dbl_coords; // z_c o tau2 as functions of P
    std::vector<CurveFunc1> neg_coords;
    CurveFunc2 h_phi;                   // h_{D_z}(z') pulled back to (P, Q)
    explicit Targets(const FuncRing2& r2) : h_phi(r2.zero()) {}
};

// z-coordinates of iota(point described by one-curve functions (X, Y))
std::vector<CurveFunc1> zeta_of(const ShieldConsts& sc, const FuncRing1& R, const CurveFunc1& X,
                                const CurveFunc1& Y) {
    auto w = R.div(R.sub(R.mul(R.konst(sc.alpha), R.mul(X, X)),
                         R.mul(R.konst(sc.beta), R.mul(X, Y))),
                   R.mul(R.konst(sc.gamma), Y));
    auto t = R.neg(R.div(R.mul(R.konst(sc.quad.a[0][1]), R.mul(X, w)),
                         R.add(R.mul(R.konst(sc.quad.b[0]), X), R.mul(R.konst(sc.quad.b[1]), w))));
    std::vector<CurveFunc1> out;
    for (int c = 0; c < 3; ++c)
        out.push_back(R.reduce(
            R.add(R.add(R.mul(R.konst(sc.quad.mu[c][0]), X), R.mul(R.konst(sc.quad.mu[c][1]), w)),
                  R.mul(R.konst(sc.quad.mu[c][2]), t))));
    return out;
}

std::vector<CurveFunc2> zeta_of2(const ShieldConsts& sc, const FuncRing2& R, const CurveFunc2& X,
                                 const CurveFunc2& Y) {
    auto w = R.div(R.sub(R.mul(R.konst(sc.alpha), R.mul(X, X)),
                         R.mul(R.konst(sc.beta), R.mul(X, Y))),
                   R.mul(R.konst(sc.gamma), Y));
    auto t = R.neg(R.div(R.mul(R.konst(sc.quad.a[0][1]), R.mul(X, w)),
                         R.add(R.mul(R.konst(sc.quad.b[0]), X), R.mul(R.konst(sc.quad.b[1]), w))));
    std::vector<CurveFunc2> out;
    for (int c = 0; c < 3; ++c)
        out.push_back(R.reduce(
            R.add(R.add(R.mul(R.konst(sc.quad.mu[c][0]), X), R.mul(R.konst(sc.quad.mu[c][1]), w)),
                  R.mul(R.konst(sc.quad.mu[c][2]), t))));
    return out;
}

Targets build_targets(const ShieldConsts& sc) {
    FuncRing1 R1(sc.e);
    FuncRing2 R2(sc.e);
    const TowerPtr& tw = sc.e.tower;
    Targets t(R2);
    // addition on E: (X3, Y3) from the chord
    auto x1 = R2.coord(0, false), y1 = R2.coord(0, true);
    auto x2 = R2.coord(1, false), y2 = R2.coord(1, true);
    auto lam = R2.div(R2.sub(y2, y1), R2.sub(x2, x1));
    auto X3 = R2.sub(R2.sub(R2.mul(lam, lam), x1), x2);
    auto Y3 = R2.sub(R2.mul(lam, R2.sub(x1, X3)), y1);
    t.add_coords = zeta_of2(sc, R2, X3, Y3);
    // doubling on E: tangent
    auto x = R1.coord_x();
    auto y = R1.coord_y();
    auto lam1 = R1.div(R1.add(R1.mul(R1.konst(tw->from_base(3)), R1.mul(x, x)),
                              R1.konst(sc.e.a4())),
                       R1.add(y, y));
    auto X2 = R1.sub(R1.mul(lam1, lam1), R1.add(x, x));
    auto Y2 = R1.sub(R1.mul(lam1, R1.sub(x, X2)), y);
    t.dbl_coords = zeta_of(sc, R1, X2, Y2);
    // negation
    t.neg_coords = zeta_of(sc, R1, x, R1.neg(y));
    // h_{D_P}(Q) = (yQ - lamP xQ - nuP)/(xQ - x(2P))
    auto lamP = R2.div(R2.add(R2.mul(R2.konst(tw->from_base(3)), R2.mul(x1, x1)),
                              R2.konst(sc.e.a4())),
                       R2.add(y1, y1));
    auto nuP = R2.sub(y1, R2.mul(lamP, x1));
    auto x2P = R2.sub(R2.mul(lamP, lamP), R2.add(x1, x1));
    t.h_phi = R2.div(R2.sub(R2.sub(y2, R2.mul(lamP, x2)), nuP), R2.sub(x2, x2P));
    return t;
}

// ---- flat exact linear algebra over K for the big ansatz solves ----

struct FlatK {
    TowerPtr tw;
    int d;
    int64_t q;
    explicit FlatK(TowerPtr t) : tw(std::move(t)), d(tw->d()), q(tw->q()) {}

    void mul(const int64_t* a, const int64_t* b, int64_t* out) const {
        int64_t prod[15] = {0};
        for (int i = 0; i < d; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < d; ++j) prod[i + j] += a[i] * b[j] % q;
        }
        for (int k = 0; k < d; ++k) out[k] = prod[k] % q;
        for (int k = d; k <= 2 * d - 2; ++k) {
            int64_t v = prod[k] % q;
            if (!v) continue;
            const auto& tp = tw->theta_power(k);
            for (int j = 0; j < d; ++j) out[j] = (out[j] + v * tp[j].value()) % q;
        }
        for (int j = 0; j < d; ++j)
            if (out[j] < 0) out[j] += q;
    }
    bool is_zero(const int64_t* a) const {
        for (int i = 0; i < d; ++i)
            if (a[i]) return false;
        return true;
    }
    KElem to_elem(const int64_t* a) const {
        std::vector<int64_t> c(a, a + d);
        return tw->from_coords(c);
    }
    void from_elem(const KElem& x, int64_t* out) const {
        for (int i = 0; i < d; ++i) out[i] = x.coords()[i].value();
    }
};

// reduced row echelon form over K on flat storage; returns pivot columns
std::vector<int> flat_rref(const FlatK& F, std::vector<std::vector<int64_t>>& rows, int ncols) {
    int d = F.d;
    std::vector<int> pivots;
    size_t r = 0;
    std::vector<int64_t> tmp(d), inv(d);
    for (int c = 0; c < ncols && r < rows.size(); ++c) {
        size_t sel = r;
        while (sel < rows.size() && F.is_zero(&rows[sel][c * d])) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[r]);
        F.from_elem(F.to_elem(&rows[r][c * d]).inverse(), inv.data());
        for (int j = c; j < ncols; ++j) {
            F.mul(&rows[r][j * d], inv.data(), tmp.data());
            std::copy(tmp.begin(), tmp.end(), rows[r].begin() + j * d);
        }
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i == r || F.is_zero(&rows[i][c * d])) continue;
            std::vector<int64_t> f(rows[i].begin() + c * d, rows[i].begin() + (c + 1) * d);
            for (int j = c; j < ncols; ++j) {
                F.mul(f.data(), &rows[r][j * d], tmp.data());
                for (int t = 0; t < d; ++t) {
                    int64_t v = rows[i][j * d + t] - tmp[t];
                    if (v < 0) v += F.q;
                    rows[i][j * d + t] = v;
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// ---- pullback helpers for exact verification ----

// one-argument pullback data: zeta_c = (A_c + B_c y)/E with common E
struct ArgPullback {
    std::vector<UPoly> A, B;
    UPoly E;
};

ArgPullback common_denominator(const std::vector<CurveFunc1>& zetas) {
    const TowerPtr& tw = zetas[0].den.tower();
    UPoly E = UPoly::constant(tw->one());
    for (auto& z : zetas) E = divmod(E * z.den, gcd(E, z.den)).q;
    ArgPullback out{{}, {}, E};
    for (auto& z : zetas) {
        UPoly m = divmod(E, z.den).q;
        out.A.push_back(z.p0 * m);
        out.B.push_back(z.p1 * m);
    }
    return out;
}

// (p, q) meaning p + q*y, univariate in the argument's x
struct YPair {
    UPoly p, q;
};

YPair ypair_mul(const YPair& a, const YPair& b, const UPoly& f) {
    return YPair{a.p * b.p + a.q * b.q * f, a.p * b.q + a.q * b.p};
}

// pullback of a block monomial with exponent e over one argument, padded so
// every term carries E^{cap}: returns (A^e-ish) * E^{cap - |e|}
YPair block_pullback(const ArgPullback& ap, const Expo& e, int cap, const UPoly& f) {
    const TowerPtr& tw = ap.E.tower();
    YPair acc{UPoly::constant(tw->one()), UPoly(tw)};
    int used = 0;
    for (size_t c = 0; c < ap.A.size(); ++c) {
        for (int k = 0; k < e[c]; ++k) {
            acc = ypair_mul(acc, YPair{ap.A[c], ap.B[c]}, f);
            ++used;
        }
    }
    UPoly pad = UPoly::constant(tw->one());
    for (int k = used; k < cap; ++k) pad = pad * ap.E;
    return YPair{acc.p * pad, acc.q * pad};
}

// bivariate product of two univariate polynomials living on different arguments
MPoly outer(const UPoly& a, const UPoly& b) {
    const TowerPtr& tw = a.tower();
    MPoly out(tw, 2);
    for (int i = 0; i <= a.degree(); ++i) {
        if (a.coeff(i).is_zero()) continue;
        for (int j = 0; j <= b.degree(); ++j) {
            KElem v = a.coeff(i) * b.coeff(j);
            if (!v.is_zero()) out.add_term({static_cast<uint16_t>(i), static_cast<uint16_t>(j)}, v);
        }
    }
    return out;
}

struct YQuad {
    MPoly c00, c10, c01, c11;
};

YQuad yquad_zero(const TowerPtr& tw) {
    MPoly z(tw, 2);
    return YQuad{z, z, z, z};
}

YQuad yquad_mul(const YQuad& a, const YQuad& b, const MPoly& f1, const MPoly& f2) {
    MPoly c00 = a.c00 * b.c00 + (a.c10 * b.c10) * f1 + (a.c01 * b.c01) * f2 +
                (a.c11 * b.c11) * f1 * f2;
    MPoly c10 = a.c00 * b.c10 + a.c10 * b.c00 + (a.c01 * b.c11 + a.c11 * b.c01) * f2;
    MPoly c01 = a.c00 * b.c01 + a.c01 * b.c00 + (a.c10 * b.c11 + a.c11 * b.c10) * f1;
    MPoly c11 = a.c00 * b.c11 + a.c11 * b.c00 + a.c10 * b.c01 + a.c01 * b.c10;
    return YQuad{c00, c10, c01, c11};
}

bool yquad_equal(const YQuad& a, const YQuad& b) {
    return a.c00 == b.c00 && a.c10 == b.c10 && a.c01 == b.c01 && a.c11 == b.c11;
}

// pullback of a 6-variable polynomial through (zeta(P), zeta(Q)), padded with
// E1^{cap}E2^{cap}
YQuad pullback2(const MPoly& poly, const ArgPullback& ap, int cap, const UPoly& f) {
    const TowerPtr& tw = poly.tower();
    YQuad acc = yquad_zero(tw);
    for (auto& [e, coeff] : poly.terms()) {
        Expo e1(e.begin(), e.begin() + 3), e2(e.begin() + 3, e.end());
        YPair p1 = block_pullback(ap, e1, cap, f);
        YPair p2 = block_pullback(ap, e2, cap, f);
        acc.c00 += outer(p1.p, p2.p).scaled(coeff);
        acc.c10 += outer(p1.q, p2.p).scaled(coeff);
        acc.c01 += outer(p1.p, p2.q).scaled(coeff);
        acc.c11 += outer(p1.q, p2.q).scaled(coeff);
    }
    return acc;
}

YPair pullback1(const MPoly& poly, const ArgPullback& ap, int cap, const UPoly& f) {
    const TowerPtr& tw = poly.tower();
    YPair acc{UPoly(tw), UPoly(tw)};
    for (auto& [e, coeff] : poly.terms()) {
        YPair p = block_pullback(ap, e, cap, f);
        acc.p = acc.p + p.p.scaled(coeff);
        acc.q = acc.q + p.q.scaled(coeff);
    }
    return acc;
}

// lift of scalars/polys into the sampling extension
struct Lift {
    TowerPtr big;
    KElem root;
    KElem operator()(const KElem& x) const { return embed(x, big, root); }
    UPoly lift(const UPoly& p) const {
        std::vector<KElem> c;
        for (auto& co : p.coeffs()) c.push_back((*this)(co));
        return UPoly(big, c);
    }
};

struct SampleCtx {
    Lift lift;
    HyperCurve curve_big;
    ShieldConsts consts_big;
    // K-basis split of K': c = a + b*s with a, b in embedded K
    Mat<Fp> split_inv; // 2d x 2d over F_q
    int dsmall;

    std::pair<KElem, KElem> split(const KElem& c, const TowerPtr& small) const {
        auto coords = mat_vec(split_inv, c.coords());
        std::vector<int64_t> a(dsmall), b(dsmall);
        for (int i = 0; i < dsmall; ++i) {
            a[i] = coords[i].value();
            b[i] = coords[dsmall + i].value();
        }
        return {small->from_coords(a), small->from_coords(b)};
    }
};

SampleCtx make_sample_ctx(const ShieldConsts& sc, uint64_t seed) {
    const TowerPtr& tw = sc.e.tower;
    auto big = FieldTower::make(tw->q(), 2 * tw->d(), seed ^ 0x626967ULL);
    std::vector<KElem> mod_in_big;
    for (auto& c : tw->modulus()) mod_in_big.push_back(big->from_base(c.value()));
    auto root = find_root_by_scan(big, mod_in_big);
    if (!root) throw std::logic_error("shield: K does not embed in K'");
    Lift lift{big, *root};
    UPoly fbig = lift.lift(sc.e.f);
    HyperCurve cbig = HyperCurve::make(big, fbig);
    ShieldConsts scb{cbig, lift(sc.alpha), lift(sc.beta), lift(sc.gamma), sc.quad};
    // lift the quadric shield constants
    scb.quad.a.assign(2, Vec<KElem>(2, big->zero()));
    scb.quad.a[0][1] = lift(sc.quad.a[0][1]);
    scb.quad.b = {lift(sc.quad.b[0]), lift(sc.quad.b[1])};
    scb.quad.mu.assign(3, Vec<KElem>(3, big->zero()));
    scb.quad.mu_inv.assign(3, Vec<KElem>(3, big->zero()));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            scb.quad.mu[i][j] = lift(sc.quad.mu[i][j]);
            scb.quad.mu_inv[i][j] = lift(sc.quad.mu_inv[i][j]);
        }
    // split matrix: columns are F_q-coords of eps(theta_i) and eps(theta_i)*s
    int dsm = tw->d();
    KElem s = big->gen();
    Mat<Fp> m(2 * dsm, Vec<Fp>(2 * dsm, big->fp(0)));
    for (int j = 0; j < dsm; ++j) {
        std::vector<int64_t> unit(dsm, 0);
        unit[j] = 1;
        KElem ej = lift(tw->from_coords(unit));
        KElem ejs = ej * s;
        for (int i = 0; i < 2 * dsm; ++i) {
            m[i][j] = ej.coords()[i];
            m[i][dsm + j] = ejs.coords()[i];
        }
    }
    auto inv = mat_inverse(m);
    if (!inv) throw std::logic_error("shield: split basis degenerate");
    return SampleCtx{lift, cbig, scb, std::move(*inv), dsm};
}

std::vector<Expo> support_upto(int nblocks, int block_len, const std::vector<int>& caps) {
    // all exponent vectors with per-block total degree <= caps[b]
    std::vector<Expo> out;
    Expo cur(nblocks * block_len, 0);
    std::function<void(int)> rec = [&](int b) {
        if (b == nblocks) {
            out.push_back(cur);
            return;
        }
        std::function<void(int, int)> inner = [&](int pos, int left) {
            if (pos == block_len) {
                rec(b + 1);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                cur[b * block_len + pos] = static_cast<uint16_t>(v);
                inner(pos + 1, left - v);
            }
            cur[b * block_len + pos] = 0;
        };
        inner(0, caps[b]);
    };
    rec(0);
    return out;
}

struct SolveResult {
    MPoly num, den;
    bool ok = false;
    SolveResult(const TowerPtr& tw, int nv) : num(tw, nv), den(tw, nv) {}
};

// sample-based solve for N/D with N o zeta = T * (D o zeta); nargs in {1, 2}
SolveResult solve_representative(const ShieldConsts& sc, const SampleCtx& sx, int nargs,
                                 const CurveFunc2* target2, const CurveFunc1* target1,
                                 const std::vector<Expo>& num_sup, const std::vector<Expo>& den_sup,
                                 Rng& rng, const MPoly* fixed_den) {
    const TowerPtr& tw = sc.e.tower;
    const TowerPtr& big = sx.lift.big;
    int nv = 3 * nargs;
    SolveResult res(tw, nv);

    FuncRing1 R1b(sx.curve_big);
    FuncRing2 R2b(sx.curve_big);
    auto zetas_b = build_zetas(sx.consts_big, R1b);
    CurveFunc2 t2b = R2b.zero();
    CurveFunc1 t1b = R1b.zero();
    if (nargs == 2) {
        // lift target components
        auto lm = [&](const MPoly& p) {
            MPoly out(big, 2);
            for (auto& [e, c] : p.terms()) out.add_term(e, sx.lift(c));
            return out;
        };
        t2b = CurveFunc2{lm(target2->c00), lm(target2->c10), lm(target2->c01), lm(target2->c11),
                         lm(target2->den)};
    } else {
        t1b = CurveFunc1{sx.lift.lift(target1->p0), sx.lift.lift(target1->p1),
                         sx.lift.lift(target1->den)};
    }

    size_t ncols = num_sup.size() + (fixed_den ? 0 : den_sup.size());
    size_t want_rows = ncols + 40;
    FlatK F(tw);
    int dsm = F.d;
    std::vector<std::vector<int64_t>> rows;
    rows.reserve(2 * want_rows);
    MPoly fixed_den_big(big, nv);
    if (fixed_den) {
        for (auto& [e, c] : fixed_den->terms()) fixed_den_big.add_term(e, sx.lift(c));
    }
    std::vector<KElem> rhs_for_fixed; // K-split rows appended separately below
    std::vector<std::pair<KElem, KElem>> rhs_rows;

    size_t made = 0;
    int guard = 0;
    while (made < want_rows && guard++ < 40000) {
        ECPoint p = ec_random(sx.curve_big, rng);
        ECPoint q = nargs == 2 ? ec_random(sx.curve_big, rng) : ECPoint::at_infinity();
        // evaluate zetas
        std::vector<KElem> zp, zq;
        bool ok = true;
        for (auto& z : zetas_b) {
            auto v = R1b.eval(z, p);
            if (!v) ok = false;
            else zp.push_back(*v);
        }
        if (nargs == 2) {
            for (auto& z : zetas_b) {
                auto v = R1b.eval(z, q);
                if (!v) ok = false;
                else zq.push_back(*v);
            }
        }
        if (!ok) continue;
        std::optional<KElem> tval = nargs == 2 ? R2b.eval(t2b, p, q) : R1b.eval(t1b, p);
        if (!tval) continue;
        std::vector<KElem> at = zp;
        if (nargs == 2) at.insert(at.end(), zq.begin(), zq.end());
        // row over K': [mono(num)..., -T * mono(den)...] = 0
        std::vector<KElem> row_big;
        row_big.reserve(ncols);
        auto mono_val = [&](const Expo& e) {
            KElem v = big->one();
            for (int i = 0; i < nv; ++i)
                for (int k = 0; k < e[i]; ++k) v = v * at[i];
            return v;
        };
        for (auto& e : num_sup) row_big.push_back(mono_val(e));
        KElem rhs = big->zero();
        if (fixed_den) {
            rhs = *tval * fixed_den_big.eval(at);
        } else {
            for (auto& e : den_sup) row_big.push_back(-(*tval * mono_val(e)));
        }
        // split into two K-rows
        std::vector<int64_t> r0(ncols * dsm + dsm), r1(ncols * dsm + dsm);
        for (size_t j = 0; j < ncols; ++j) {
            auto [a, b] = sx.split(row_big[j], tw);
            F.from_elem(a, &r0[j * dsm]);
            F.from_elem(b, &r1[j * dsm]);
        }
        auto [ra, rb] = sx.split(rhs, tw);
        F.from_elem(ra, &r0[ncols * dsm]);
        F.from_elem(rb, &r1[ncols * dsm]);
        rows.push_back(std::move(r0));
        rows.push_back(std::move(r1));
        ++made;
    }
    if (made < want_rows) return res;

    int total_cols = static_cast<int>(ncols) + 1; // last column is the rhs
    auto pivots = flat_rref(F, rows, total_cols);

    auto build_polys = [&](const std::vector<KElem>& sol) {
        MPoly num(tw, nv), den(tw, nv);
        for (size_t j = 0; j < num_sup.size(); ++j) num.add_term(num_sup[j], sol[j]);
        if (fixed_den) {
            den = *fixed_den;
        } else {
            for (size_t j = 0; j < den_sup.size(); ++j)
                den.add_term(den_sup[j], sol[num_sup.size() + j]);
        }
        return std::make_pair(num, den);
    };

    if (fixed_den) {
        // inhomogeneous solve: consistent iff no pivot in the rhs column
        if (!pivots.empty() && pivots.back() == static_cast<int>(ncols)) return res;
        std::vector<KElem> sol(ncols, tw->zero());
        for (size_t i = 0; i < pivots.size(); ++i)
            sol[pivots[i]] = F.to_elem(&rows[i][ncols * dsm]);
        auto [num, den] = build_polys(sol);
        if (num.is_zero()) return res;
        res.num = num;
        res.den = den;
        res.ok = true;
        return res;
    }

    // homogeneous kernel: rhs column should be all zero (it is: rhs = 0 rows)
    std::vector<bool> is_piv(ncols, false);
    std::vector<int> piv_row(ncols, -1);
    for (size_t i = 0; i < pivots.size(); ++i) {
        if (pivots[i] < static_cast<int>(ncols)) {
            is_piv[pivots[i]] = true;
            piv_row[pivots[i]] = static_cast<int>(i);
        }
    }
    for (size_t free = 0; free < ncols; ++free) {
        if (is_piv[free]) continue;
        std::vector<KElem> v(ncols, tw->zero());
        v[free] = tw->one();
        for (size_t c = 0; c < ncols; ++c)
            if (is_piv[c]) v[c] = -F.to_elem(&rows[piv_row[c]][free * dsm]);
        auto [num, den] = build_polys(v);
        if (num.is_zero() || den.is_zero()) continue;
        res.num = num;
        res.den = den;
        res.ok = true;
        return res;
    }
    return res;
}

// exact symbolic verification: num o zeta == T * (den o zeta)
bool verify_representative(const ShieldConsts& sc, const CurveFunc2* t2, const CurveFunc1* t1,
                           const MPoly& num, const MPoly& den, int nargs) {
    FuncRing1 R1(sc.e);
    auto zetas = build_zetas(sc, R1);
    auto ap = common_denominator(zetas);
    const UPoly& f = sc.e.f;
    const TowerPtr& tw = sc.e.tower;
    int cap = 0;
    if (nargs == 2) {
        cap = std::max(std::max(num.degree_in_block(0, 3), num.degree_in_block(3, 3)),
                       std::max(den.degree_in_block(0, 3), den.degree_in_block(3, 3)));
        FuncRing2 R2(sc.e);
        MPoly f1(tw, 2), f2(tw, 2);
        for (int i = 0; i <= f.degree(); ++i) {
            f1.add_term({static_cast<uint16_t>(i), 0}, f.coeff(i));
            f2.add_term({0, static_cast<uint16_t>(i)}, f.coeff(i));
        }
        YQuad pn = pullback2(num, ap, cap, f);
        YQuad pd = pullback2(den, ap, cap, f);
        // pn * t.den == (t-numerator) * pd
        YQuad tden = yquad_zero(tw);
        tden.c00 = t2->den;
        YQuad tnum{t2->c00, t2->c10, t2->c01, t2->c11};
        return yquad_equal(yquad_mul(pn, tden, f1, f2), yquad_mul(tnum, pd, f1, f2));
    }
    cap = std::max(num.degree_in_block(0, 3), den.degree_in_block(0, 3));
    YPair pn = pullback1(num, ap, cap, f);
    YPair pd = pullback1(den, ap, cap, f);
    // (pn.p + pn.q y) * t.den == (t.p0 + t.p1 y)(pd.p + pd.q y)
    YPair lhs{pn.p * t1->den, pn.q * t1->den};
    YPair rhs = ypair_mul(YPair{t1->p0, t1->p1}, pd, f);
    return lhs.p == rhs.p && lhs.q == rhs.q;
}

struct DegreePlan {
    int nd1, nd2, dd1, dd2;
};

RationalRep solve_tracked_function(const ShieldConsts& sc, const SampleCtx& sx, int nargs,
                                   const CurveFunc2* t2, const CurveFunc1* t1, Rng& rng,
                                   const MPoly* fixed_den, const char* what) {
    std::vector<DegreePlan> plans;
    if (nargs == 1)
        plans = {{2, 0, 2, 0}, {3, 0, 2, 0}, {3, 0, 3, 0}, {4, 0, 3, 0}, {4, 0, 4, 0},
                 {5, 0, 4, 0}, {5, 0, 5, 0}, {6, 0, 5, 0}, {6, 0, 6, 0}, {7, 0, 6, 0},
                 {7, 0, 7, 0}, {8, 0, 8, 0}};
    else
        plans = {{2, 2, 2, 2}, {3, 2, 2, 2}, {2, 3, 2, 2}, {3, 2, 3, 2}, {2, 3, 2, 3},
                 {3, 3, 2, 2}, {3, 3, 3, 3}, {4, 2, 3, 2}, {4, 3, 3, 3}, {3, 4, 3, 3},
                 {4, 3, 4, 3}, {4, 4, 3, 3}, {4, 4, 4, 4}, {5, 3, 4, 3}, {5, 4, 4, 4},
                 {6, 2, 5, 2}, {6, 3, 6, 3}, {5, 5, 4, 4}};
    for (auto& plan : plans) {
        dbg("[shield] %s plan (%d,%d)/(%d,%d)\n", what, plan.nd1, plan.nd2, plan.dd1, plan.dd2);
        std::vector<int> ncaps{plan.nd1}, dcaps{plan.dd1};
        if (nargs == 2) {
            ncaps.push_back(plan.nd2);
            dcaps.push_back(plan.dd2);
        }
        auto nsup = support_upto(nargs, 3, ncaps);
        auto dsup = support_upto(nargs, 3, dcaps);
        if (fixed_den && nsup.size() > 1400) continue;
        if (!fixed_den && nsup.size() + dsup.size() > 1900) continue;
        Rng sub = rng.fork();
        dbg("[shield]   solving %zu+%zu cols\n", nsup.size(), fixed_den ? size_t(0) : dsup.size());
        auto sol = solve_representative(sc, sx, nargs, t2, t1, nsup, dsup, sub, fixed_den);
        dbg("[shield]   solve ok=%d\n", (int)sol.ok);
        if (!sol.ok) continue;
        bool v = verify_representative(sc, t2, t1, sol.num, sol.den, nargs);
        dbg("[shield]   verify=%d (num %zu den %zu)\n", (int)v, sol.num.term_count(), sol.den.term_count());
        if (v)
            return RationalRep{sol.num, sol.den};
    }
    throw std::runtime_error(std::string("shield: no representative found for ") + what);
}

// pad supports with multiples of the quadric relation so every block is dense
// in degree 2 (the added terms vanish on E2, values unchanged)
MPoly density_pad(const MPoly& p, const MPoly& rprime, int nargs, Rng& rng) {
    MPoly out = p;
    const TowerPtr& tw = p.tower();
    for (int b = 0; b < nargs; ++b) {
        if (dense_in_degree(out, 3 * b, 3, 2)) continue;
        std::vector<int> map(3);
        for (int i = 0; i < 3; ++i) map[i] = 3 * b + i;
        MPoly rp = rprime.relabel(3 * nargs, map);
        out += rp.scaled(tw->random_nonzero(rng));
        if (!dense_in_degree(out, 3 * b, 3, 2))
            out += rp.scaled(tw->random_nonzero(rng)); // coefficient collisions: redraw once
    }
    return out;
}

} // namespace

std::optional<std::vector<KElem>> EllipticShield::to_e2(const ECPoint& p) const {
    if (p.infinity || p.y.is_zero()) return std::nullopt;
    const TowerPtr& tw = e.tower;
    KElem w = (alpha * p.x * p.x - beta * p.x * p.y) / (gamma * p.y);
    return quad.push({p.x, w});
}

std::optional<ECPoint> EllipticShield::from_e2(const std::vector<KElem>& z) const {
    auto xw = quad.pull(z);
    // iota1: (x1, x2) -> (x1, alpha x1^2/(beta x1 + gamma x2))
    KElem den = beta * xw[0] + gamma * xw[1];
    if (den.is_zero()) return std::nullopt;
    KElem y = alpha * xw[0] * xw[0] / den;
    ECPoint p = ECPoint::affine(xw[0], y);
    if (!on_curve(e, p)) return std::nullopt;
    return p;
}

std::optional<KElem> rep_eval(const RationalRep& r, const std::vector<KElem>& at) {
    KElem den = r.den.eval(at);
    if (den.is_zero()) return std::nullopt;
    return r.num.eval(at) / den;
}

EllipticShield build_elliptic_shield(const HyperCurve& e, uint64_t seed) {
    const TowerPtr& tw = e.tower;
    if (tw->q() == 3) throw std::invalid_argument("elliptic shield: characteristic 3 unsupported");
    Rng rng(seed ^ 0x653274ULL);
    for (int attempt = 0; attempt < 24; ++attempt) {
        ShieldConsts sc{e, tw->random_nonzero(rng), tw->random_nonzero(rng),
                        tw->random_nonzero(rng), QuadricShield{}};
        sc.quad = random_quadric_shield(tw, 2, rng);
        MPoly rprime = sc.quad.quadric_relation();
        if (!dense_in_degree(rprime, 0, 3, 2)) continue;
        // E1 defining polynomial: alpha^2 x1^4 - f(x1)(beta x1 + gamma x2)^2
        MPoly c1(tw, 2);
        {
            MPoly x1 = MPoly::variable(tw, 2, 0), x2 = MPoly::variable(tw, 2, 1);
            MPoly lin = x1.scaled(sc.beta) + x2.scaled(sc.gamma);
            MPoly fx(tw, 2);
            for (int i = 0; i <= e.f.degree(); ++i)
                fx.add_term({static_cast<uint16_t>(i), 0}, e.f.coeff(i));
            c1 = (x1 * x1 * x1 * x1).scaled(sc.alpha * sc.alpha) - fx * lin * lin;
        }
        MPoly c1_shield = sc.quad.compose(c1);
        if (!dense_somewhere(c1_shield, 0, 3)) continue;

        EllipticShield out{e,
                           sc.alpha,
                           sc.beta,
                           sc.gamma,
                           sc.quad,
                           {c1_shield, rprime},
                           {RationalRep{MPoly(tw, 6), MPoly(tw, 6)}, RationalRep{MPoly(tw, 6), MPoly(tw, 6)},
                            RationalRep{MPoly(tw, 6), MPoly(tw, 6)}},
                           {RationalRep{MPoly(tw, 3), MPoly(tw, 3)}, RationalRep{MPoly(tw, 3), MPoly(tw, 3)},
                            RationalRep{MPoly(tw, 3), MPoly(tw, 3)}},
                           {RationalRep{MPoly(tw, 3), MPoly(tw, 3)}, RationalRep{MPoly(tw, 3), MPoly(tw, 3)},
                            RationalRep{MPoly(tw, 3), MPoly(tw, 3)}},
                           RationalRep{MPoly(tw, 6), MPoly(tw, 6)}};

        try {
            auto sx = make_sample_ctx(sc, seed + attempt);
            dbg("[shield] sample ctx built\n");
            auto targets = build_targets(sc);
            dbg("[shield] targets built: add0 den %zu terms, h den %zu terms\n",
                targets.add_coords[0].den.term_count(), targets.h_phi.den.term_count());
            // addition coordinates; coordinate 0 solves fully, 1-2 reuse its
            // denominator when possible
            out.add_maps[0] = solve_tracked_function(sc, sx, 2, &targets.add_coords[0], nullptr,
                                                     rng, nullptr, "m2 coordinate 0");
            for (int cidx = 1; cidx < 3; ++cidx) {
                try {
                    out.add_maps[cidx] =
                        solve_tracked_function(sc, sx, 2, &targets.add_coords[cidx], nullptr, rng,
                                               &out.add_maps[0].den, "m2 coordinate (shared den)");
                } catch (const std::runtime_error&) {
                    out.add_maps[cidx] = solve_tracked_function(
                        sc, sx, 2, &targets.add_coords[cidx], nullptr, rng, nullptr, "m2 coordinate");
                }
            }
            for (int cidx = 0; cidx < 3; ++cidx) {
                out.dbl_maps[cidx] = solve_tracked_function(sc, sx, 1, nullptr,
                                                            &targets.dbl_coords[cidx], rng, nullptr,
                                                            "tau2 coordinate");
                out.neg_maps[cidx] = solve_tracked_function(sc, sx, 1, nullptr,
                                                            &targets.neg_coords[cidx], rng, nullptr,
                                                            "negation coordinate");
            }
            out.h_func = solve_tracked_function(sc, sx, 2, &targets.h_phi, nullptr, rng, nullptr,
                                                "h function");
        } catch (const std::runtime_error&) {
            continue;
        }

        // density padding (values on E2 unchanged) and safety certification
        auto pad_all = [&](RationalRep& r, int nargs) {
            r.num = density_pad(r.num, rprime, nargs, rng);
            r.den = density_pad(r.den, rprime, nargs, rng);
        };
        for (auto& r : out.add_maps) pad_all(r, 2);
        for (auto& r : out.dbl_maps) pad_all(r, 1);
        for (auto& r : out.neg_maps) pad_all(r, 1);
        pad_all(out.h_func, 2);

        bool safe = true;
        auto check = [&](const MPoly& p, int nargs) {
            for (int b = 0; b < nargs && safe; ++b) {
                auto sup = block_support(p, 3 * b, 3);
                if (!safety_check(out.e2_gens, sup).safe) safe = false;
            }
        };
        for (auto& r : out.add_maps) {
            check(r.num, 2);
            check(r.den, 2);
        }
        for (auto& r : out.dbl_maps) {
            check(r.num, 1);
            check(r.den, 1);
        }
        check(out.h_func.num, 2);
        check(out.h_func.den, 2);
        if (!safe) continue;
        return out;
    }
    throw std::runtime_error("build_elliptic_shield: retry budget exhausted");
}

} // namespace trimap
