#include "trimap/funcring.hpp"

namespace trimap {

namespace {

// recursive view: bivariate as polynomial in x2 with UPoly-in-x1 coefficients
std::vector<UPoly> to_rec(const MPoly& p) {
    const TowerPtr& tw = p.tower();
    int d2 = p.degree_in(1);
    std::vector<std::vector<KElem>> coef(d2 + 1);
    int d1 = p.degree_in(0);
    for (auto& c : coef) c.assign(d1 + 1, tw->zero());
    for (auto& [e, v] : p.terms()) coef[e[1]][e[0]] = v;
    std::vector<UPoly> out;
    out.reserve(d2 + 1);
    for (auto& c : coef) out.emplace_back(tw, c);
    return out;
}

MPoly from_rec(const TowerPtr& tw, const std::vector<UPoly>& rec) {
    MPoly p(tw, 2);
    for (size_t j = 0; j < rec.size(); ++j)
        for (int i = 0; i <= rec[j].degree(); ++i)
            p.add_term({static_cast<uint16_t>(i), static_cast<uint16_t>(j)}, rec[j].coeff(i));
    return p;
}

void rec_trim(std::vector<UPoly>& r) {
    while (!r.empty() && r.back().is_zero()) r.pop_back();
}

UPoly rec_content(const std::vector<UPoly>& r) {
    if (r.empty()) return UPoly(TowerPtr{});
    UPoly g = r[0];
    for (size_t i = 1; i < r.size(); ++i) g = gcd(g, r[i]);
    return g;
}

std::vector<UPoly> rec_div_content(const std::vector<UPoly>& r, const UPoly& c) {
    std::vector<UPoly> out;
    out.reserve(r.size());
    for (auto& p : r) {
        auto dm = divmod(p, c);
        if (!dm.r.is_zero()) throw std::logic_error("gcd2: content division not exact");
        out.push_back(dm.q);
    }
    return out;
}

// pseudo-remainder of a by b in (K[x1])[x2]
std::vector<UPoly> rec_prem(std::vector<UPoly> a, const std::vector<UPoly>& b) {
    rec_trim(a);
    if (b.empty()) throw std::domain_error("gcd2: division by zero");
    int db = static_cast<int>(b.size()) - 1;
    const UPoly& lb = b.back();
    while (static_cast<int>(a.size()) - 1 >= db && !a.empty()) {
        int da = static_cast<int>(a.size()) - 1;
        UPoly la = a.back();
        // a = a*lb - la * x2^{da-db} * b
        for (auto& c : a) c = c * lb;
        for (int j = 0; j <= db; ++j) a[da - db + j] = a[da - db + j] - la * b[j];
        rec_trim(a);
    }
    return a;
}

} // namespace

MPoly gcd2(const MPoly& a, const MPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const TowerPtr& tw = a.tower();
    auto ra = to_rec(a), rb = to_rec(b);
    UPoly ca = rec_content(ra), cb = rec_content(rb);
    UPoly cg = gcd(ca, cb);
    auto pa = rec_div_content(ra, ca);
    auto pb = rec_div_content(rb, cb);
    // primitive PRS
    while (!pb.empty()) {
        auto r = rec_prem(pa, pb);
        pa = std::move(pb);
        pb = std::move(r);
        if (!pb.empty()) {
            UPoly c = rec_content(pb);
            pb = rec_div_content(pb, c);
        }
    }
    // pa is the primitive gcd; normalize leading coefficient monic
    UPoly lc = pa.back();
    if (!lc.is_zero() && !lc.lc().is_one()) {
        KElem inv = lc.lc().inverse();
        for (auto& p : pa) p = p.scaled(inv);
    }
    MPoly g = from_rec(tw, pa);
    MPoly cgm(tw, 2);
    for (int i = 0; i <= cg.degree(); ++i)
        cgm.add_term({static_cast<uint16_t>(i), 0}, cg.coeff(i));
    return g * cgm;
}

MPoly exact_div2(const MPoly& a, const MPoly& b) {
    const TowerPtr& tw = a.tower();
    if (a.is_zero()) return MPoly(tw, 2);
    auto ra = to_rec(a), rb = to_rec(b);
    if (rb.empty()) throw std::domain_error("exact_div2: division by zero");
    std::vector<UPoly> q(std::max<size_t>(1, ra.size() - rb.size() + 1), UPoly(tw));
    int db = static_cast<int>(rb.size()) - 1;
    while (true) {
        rec_trim(ra);
        if (ra.empty()) break;
        int da = static_cast<int>(ra.size()) - 1;
        if (da < db) throw std::logic_error("exact_div2: not divisible (degree)");
        auto dm = divmod(ra.back(), rb.back());
        if (!dm.r.is_zero()) throw std::logic_error("exact_div2: not divisible (leading)");
        q[da - db] = dm.q;
        for (int j = 0; j <= db; ++j) ra[da - db + j] = ra[da - db + j] - dm.q * rb[j];
        if (!ra.empty() && static_cast<int>(ra.size()) - 1 == da && !ra.back().is_zero())
            throw std::logic_error("exact_div2: cancellation failed");
    }
    return from_rec(tw, q);
}

// ---------- FuncRing1 ----------

CurveFunc1 FuncRing1::zero() const {
    return CurveFunc1{UPoly(tower()), UPoly(tower()), UPoly::constant(tower()->one())};
}

CurveFunc1 FuncRing1::konst(const KElem& v) const {
    return CurveFunc1{UPoly::constant(v), UPoly(tower()), UPoly::constant(tower()->one())};
}

CurveFunc1 FuncRing1::coord_x() const {
    return CurveFunc1{UPoly::x(tower()), UPoly(tower()), UPoly::constant(tower()->one())};
}

CurveFunc1 FuncRing1::coord_y() const {
    return CurveFunc1{UPoly(tower()), UPoly::constant(tower()->one()),
                      UPoly::constant(tower()->one())};
}

CurveFunc1 FuncRing1::from_poly(const UPoly& p) const {
    return CurveFunc1{p, UPoly(tower()), UPoly::constant(tower()->one())};
}

CurveFunc1 FuncRing1::add(const CurveFunc1& a, const CurveFunc1& b) const {
    return reduce(CurveFunc1{a.p0 * b.den + b.p0 * a.den, a.p1 * b.den + b.p1 * a.den,
                             a.den * b.den});
}

CurveFunc1 FuncRing1::sub(const CurveFunc1& a, const CurveFunc1& b) const { return add(a, neg(b)); }

CurveFunc1 FuncRing1::neg(const CurveFunc1& a) const { return CurveFunc1{-a.p0, -a.p1, a.den}; }

CurveFunc1 FuncRing1::mul(const CurveFunc1& a, const CurveFunc1& b) const {
    // (p0 + p1 y)(q0 + q1 y) = p0 q0 + p1 q1 f + (p0 q1 + p1 q0) y
    return reduce(CurveFunc1{a.p0 * b.p0 + a.p1 * b.p1 * c_.f, a.p0 * b.p1 + a.p1 * b.p0,
                             a.den * b.den});
}

CurveFunc1 FuncRing1::inv(const CurveFunc1& a) const {
    if (a.is_zero()) throw std::domain_error("FuncRing1: inverse of zero");
    // 1/(p0 + p1 y) = (p0 - p1 y)/(p0^2 - p1^2 f)
    UPoly norm = a.p0 * a.p0 - a.p1 * a.p1 * c_.f;
    if (norm.is_zero()) throw std::logic_error("FuncRing1: zero norm (f square?)");
    return reduce(CurveFunc1{a.den * a.p0, -(a.den * a.p1), norm});
}

CurveFunc1 FuncRing1::reduce(const CurveFunc1& a) const {
    if (a.is_zero()) return zero();
    UPoly g = gcd(gcd(a.p0, a.p1), a.den);
    CurveFunc1 out{divmod(a.p0, g).q, divmod(a.p1, g).q, divmod(a.den, g).q};
    KElem lead = out.den.lc();
    if (!lead.is_one()) {
        KElem inv = lead.inverse();
        out.p0 = out.p0.scaled(inv);
        out.p1 = out.p1.scaled(inv);
        out.den = out.den.scaled(inv);
    }
    return out;
}

bool FuncRing1::equal(const CurveFunc1& a, const CurveFunc1& b) const {
    // cross multiply; y-parts must match componentwise
    return (a.p0 * b.den == b.p0 * a.den) && (a.p1 * b.den == b.p1 * a.den);
}

std::optional<KElem> FuncRing1::eval(const CurveFunc1& a, const ECPoint& p) const {
    KElem den = a.den.eval(p.x);
    if (den.is_zero()) return std::nullopt;
    return (a.p0.eval(p.x) + a.p1.eval(p.x) * p.y) / den;
}

// ---------- FuncRing2 ----------

MPoly FuncRing2::f_of(int arg) const {
    MPoly out(tower(), 2);
    for (int i = 0; i <= c_.f.degree(); ++i) {
        Expo e(2, 0);
        e[arg] = static_cast<uint16_t>(i);
        out.add_term(e, c_.f.coeff(i));
    }
    return out;
}

CurveFunc2 FuncRing2::zero() const {
    MPoly z(tower(), 2);
    return CurveFunc2{z, z, z, z, MPoly::constant(tower(), 2, tower()->one())};
}

CurveFunc2 FuncRing2::konst(const KElem& v) const {
    CurveFunc2 out = zero();
    out.c00 = MPoly::constant(tower(), 2, v);
    return out;
}

CurveFunc2 FuncRing2::coord(int arg, bool want_y) const {
    CurveFunc2 out = zero();
    if (!want_y) {
        out.c00 = MPoly::variable(tower(), 2, arg);
    } else {
        MPoly one = MPoly::constant(tower(), 2, tower()->one());
        if (arg == 0)
            out.c10 = one;
        else
            out.c01 = one;
    }
    return out;
}

CurveFunc2 FuncRing2::from1(const CurveFunc1& f, int arg) const {
    auto lift = [&](const UPoly& p) {
        MPoly out(tower(), 2);
        for (int i = 0; i <= p.degree(); ++i) {
            Expo e(2, 0);
            e[arg] = static_cast<uint16_t>(i);
            out.add_term(e, p.coeff(i));
        }
        return out;
    };
    CurveFunc2 out = zero();
    out.c00 = lift(f.p0);
    if (arg == 0)
        out.c10 = lift(f.p1);
    else
        out.c01 = lift(f.p1);
    out.den = lift(f.den);
    return out;
}

CurveFunc2 FuncRing2::add(const CurveFunc2& a, const CurveFunc2& b) const {
    CurveFunc2 out{a.c00 * b.den + b.c00 * a.den, a.c10 * b.den + b.c10 * a.den,
                   a.c01 * b.den + b.c01 * a.den, a.c11 * b.den + b.c11 * a.den, a.den * b.den};
    return reduce(out);
}

CurveFunc2 FuncRing2::sub(const CurveFunc2& a, const CurveFunc2& b) const { return add(a, neg(b)); }

CurveFunc2 FuncRing2::neg(const CurveFunc2& a) const {
    return CurveFunc2{-a.c00, -a.c10, -a.c01, -a.c11, a.den};
}

CurveFunc2 FuncRing2::scale(const CurveFunc2& a, const KElem& v) const {
    return CurveFunc2{a.c00.scaled(v), a.c10.scaled(v), a.c01.scaled(v), a.c11.scaled(v), a.den};
}

CurveFunc2 FuncRing2::mul(const CurveFunc2& a, const CurveFunc2& b) const {
    MPoly f1 = f_of(0), f2 = f_of(1);
    // multiply component forms, reducing y1^2 -> f(x1), y2^2 -> f(x2)
    MPoly c00 = a.c00 * b.c00 + (a.c10 * b.c10) * f1 + (a.c01 * b.c01) * f2 +
                (a.c11 * b.c11) * f1 * f2;
    MPoly c10 = a.c00 * b.c10 + a.c10 * b.c00 + (a.c01 * b.c11 + a.c11 * b.c01) * f2;
    MPoly c01 = a.c00 * b.c01 + a.c01 * b.c00 + (a.c10 * b.c11 + a.c11 * b.c10) * f1;
    MPoly c11 = a.c00 * b.c11 + a.c11 * b.c00 + a.c10 * b.c01 + a.c01 * b.c10;
    return reduce(CurveFunc2{c00, c10, c01, c11, a.den * b.den});
}

CurveFunc2 FuncRing2::inv(const CurveFunc2& a) const {
    if (a.is_zero()) throw std::domain_error("FuncRing2: inverse of zero");
    MPoly f1 = f_of(0), f2 = f_of(1);
    // N = c00 + c10 y1 + c01 y2 + c11 y1y2; conjugate in y2:
    // N * N2 = (c00 + c10 y1)^2 - (c01 + c11 y1)^2 f2 =: E + F y1
    MPoly A = a.c00, B = a.c10, C = a.c01, D = a.c11;
    MPoly E = A * A + B * B * f1 - (C * C + D * D * f1) * f2;
    MPoly F = A * B + A * B - (C * D + C * D) * f2;
    // (E + F y1)(E - F y1) = E^2 - F^2 f1 =: G in K[x1,x2]
    MPoly G = E * E - F * F * f1;
    if (G.is_zero()) throw std::logic_error("FuncRing2: zero norm");
    // 1/N = N2 (E - F y1) / G with N2 = (c00 + c10 y1) - (c01 + c11 y1) y2
    // components of N2 (E - F y1):
    MPoly n00 = A * E - B * F * f1;
    MPoly n10 = B * E - A * F;
    MPoly n01 = -(C * E) + D * F * f1;
    MPoly n11 = -(D * E) + C * F;
    CurveFunc2 out{a.den * n00, a.den * n10, a.den * n01, a.den * n11, G};
    return reduce(out);
}

CurveFunc2 FuncRing2::reduce(const CurveFunc2& a) const {
    if (a.is_zero()) return zero();
    MPoly g = gcd2(gcd2(gcd2(a.c00, a.c10), gcd2(a.c01, a.c11)), a.den);
    CurveFunc2 out{exact_div2(a.c00, g), exact_div2(a.c10, g), exact_div2(a.c01, g),
                   exact_div2(a.c11, g), exact_div2(a.den, g)};
    // canonical scalar: lex-largest denominator term gets coefficient 1
    const auto& terms = out.den.terms();
    if (!terms.empty()) {
        KElem lead = terms.rbegin()->second;
        if (!lead.is_one()) {
            KElem inv = lead.inverse();
            out.c00 = out.c00.scaled(inv);
            out.c10 = out.c10.scaled(inv);
            out.c01 = out.c01.scaled(inv);
            out.c11 = out.c11.scaled(inv);
            out.den = out.den.scaled(inv);
        }
    }
    return out;
}

bool FuncRing2::equal(const CurveFunc2& a, const CurveFunc2& b) const {
    return (a.c00 * b.den == b.c00 * a.den) && (a.c10 * b.den == b.c10 * a.den) &&
           (a.c01 * b.den == b.c01 * a.den) && (a.c11 * b.den == b.c11 * a.den);
}

std::optional<KElem> FuncRing2::eval(const CurveFunc2& a, const ECPoint& p, const ECPoint& q) const {
    std::vector<KElem> at{p.x, q.x};
    KElem den = a.den.eval(at);
    if (den.is_zero()) return std::nullopt;
    KElem num = a.c00.eval(at) + a.c10.eval(at) * p.y + a.c01.eval(at) * q.y +
                a.c11.eval(at) * p.y * q.y;
    return num / den;
}

} // namespace trimap
