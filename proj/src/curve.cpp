#include "trimap/curve.hpp"

#include <algorithm>

namespace trimap {

HyperCurve HyperCurve::make(const TowerPtr& tw, UPoly f) {
    if (f.degree() < 3 || f.degree() % 2 == 0 || !f.is_monic())
        throw std::invalid_argument("HyperCurve: f must be monic of odd degree >= 3");
    if (tw->q() == 2) throw std::invalid_argument("HyperCurve: characteristic 2 unsupported");
    // squarefree: gcd(f, f') = 1
    std::vector<KElem> dc;
    for (int i = 1; i <= f.degree(); ++i) dc.push_back(f.coeff(i).scaled(tw->fp(i % tw->q())));
    UPoly fprime(tw, dc);
    if (gcd(f, fprime).degree() != 0) throw std::invalid_argument("HyperCurve: f not squarefree");
    int g = (f.degree() - 1) / 2;
    return HyperCurve{tw, std::move(f), g};
}

HyperCurve HyperCurve::elliptic(const TowerPtr& tw, const KElem& a, const KElem& b) {
    UPoly f(tw, {b, a, tw->zero(), tw->one()});
    return make(tw, std::move(f));
}

bool on_curve(const HyperCurve& c, const ECPoint& p) {
    if (p.infinity) return true;
    return p.y * p.y == c.f.eval(p.x);
}

ECPoint ec_neg(const HyperCurve& c, const ECPoint& p) {
    (void)c;
    if (p.infinity) return p;
    return ECPoint::affine(p.x, -p.y);
}

std::optional<ECLine> ec_tangent(const HyperCurve& c, const ECPoint& p) {
    if (p.infinity || p.y.is_zero()) return std::nullopt;
    const TowerPtr& tw = c.tower;
    KElem lambda = ((p.x * p.x).scaled(tw->fp(3)) + c.a4()) / (p.y + p.y);
    return ECLine{lambda, p.y - lambda * p.x};
}

std::optional<ECLine> ec_chord(const HyperCurve& c, const ECPoint& p, const ECPoint& q) {
    (void)c;
    if (p.infinity || q.infinity || p.x == q.x) return std::nullopt;
    KElem lambda = (q.y - p.y) / (q.x - p.x);
    return ECLine{lambda, p.y - lambda * p.x};
}

ECPoint ec_add(const HyperCurve& c, const ECPoint& p, const ECPoint& q) {
    if (p.infinity) return q;
    if (q.infinity) return p;
    if (p.x == q.x && p.y == -q.y) return ECPoint::at_infinity();
    auto line = (p == q) ? ec_tangent(c, p) : ec_chord(c, p, q);
    KElem x3 = line->lambda * line->lambda - p.x - q.x;
    KElem y3 = -(line->lambda * x3 + line->nu);
    return ECPoint::affine(x3, y3);
}

ECPoint ec_scalar(const HyperCurve& c, int64_t n, const ECPoint& p) {
    ECPoint acc = ECPoint::at_infinity();
    ECPoint base = p;
    bool negate = n < 0;
    uint64_t e = negate ? static_cast<uint64_t>(-n) : static_cast<uint64_t>(n);
    while (e) {
        if (e & 1) acc = ec_add(c, acc, base);
        base = ec_add(c, base, base);
        e >>= 1;
    }
    return negate ? ec_neg(c, acc) : acc;
}

ECPoint ec_random(const HyperCurve& c, Rng& rng) {
    const TowerPtr& tw = c.tower;
    for (;;) {
        KElem x = tw->random_elem(rng);
        auto y = sqrt_in_field(c.f.eval(x));
        if (!y) continue;
        if (!y->is_zero() && rng.coin()) return ECPoint::affine(x, -*y);
        return ECPoint::affine(x, *y);
    }
}

int64_t ec_count(const HyperCurve& c) {
    const TowerPtr& tw = c.tower;
    int64_t count = 1; // infinity
    for (int64_t i = 0; i < tw->order(); ++i) {
        KElem x = tw->elem_by_index(i);
        KElem v = c.f.eval(x);
        if (v.is_zero())
            count += 1;
        else if (is_square(v))
            count += 2;
    }
    return count;
}

ReducedDivisor ReducedDivisor::zero(const TowerPtr& tw) {
    return ReducedDivisor{UPoly::constant(tw->one()), UPoly(tw)};
}

ReducedDivisor ReducedDivisor::from_point(const KElem& x, const KElem& y) {
    const TowerPtr& tw = x.tower();
    return ReducedDivisor{UPoly(tw, {-x, tw->one()}), UPoly::constant(y)};
}

bool operator<(const ReducedDivisor& d, const ReducedDivisor& e) {
    auto key = [](const UPoly& p) {
        std::vector<int64_t> k;
        k.push_back(p.degree());
        for (auto& c : p.coeffs())
            for (auto& v : c.coords()) k.push_back(v.value());
        return k;
    };
    auto ka = key(d.a), kb = key(e.a);
    if (ka != kb) return ka < kb;
    return key(d.b) < key(e.b);
}

bool on_jacobian(const HyperCurve& c, const ReducedDivisor& d) {
    if (d.a.is_zero() || !d.a.is_monic()) return false;
    if (d.a.degree() > c.genus) return false;
    if (!d.b.is_zero() && d.b.degree() >= d.a.degree()) return false;
    return ((d.b * d.b - c.f) % d.a).is_zero();
}

ReducedDivisor divisor_neg(const ReducedDivisor& d) { return ReducedDivisor{d.a, (-d.b) % d.a}; }

ReducedDivisor divisor_frobenius(const ReducedDivisor& d, int64_t i) {
    return ReducedDivisor{d.a.frobenius(i), d.b.frobenius(i)};
}

ECPoint divisor_to_point(const ReducedDivisor& d) {
    if (d.is_zero()) return ECPoint::at_infinity();
    if (d.a.degree() != 1) throw std::invalid_argument("divisor_to_point: weight > 1");
    return ECPoint::affine(-d.a.coeff(0), d.b.coeff(0));
}

ReducedDivisor point_to_divisor(const TowerPtr& tw, const ECPoint& p) {
    if (p.infinity) return ReducedDivisor::zero(tw);
    return ReducedDivisor::from_point(p.x, p.y);
}

FunctionRecord FunctionRecord::one(const TowerPtr& tw) {
    return FunctionRecord{UPoly::constant(tw->one()), {}, {}};
}

FunctionRecord FunctionRecord::frobenius(int64_t i) const {
    FunctionRecord out{h1.frobenius(i), {}, {}};
    for (auto& b : betas) out.betas.push_back(b.frobenius(i));
    for (auto& a : aprimes) out.aprimes.push_back(a.frobenius(i));
    return out;
}

ComposeResult cantor_compose(const HyperCurve& c, const ReducedDivisor& d1,
                             const ReducedDivisor& d2) {
    auto g3 = xgcd3(d1.a, d2.a, d1.b + d2.b);
    const UPoly& h = g3.g;
    UPoly a = divmod(d1.a * d2.a, h * h).q;
    UPoly num = g3.h1 * d1.a * d2.b + g3.h2 * d2.a * d1.b + g3.h3 * (d1.b * d2.b + c.f);
    UPoly b = divmod(num, h).q % a;
    return ComposeResult{std::move(a), std::move(b), h};
}

ReduceStep cantor_reduce(const HyperCurve& c, const UPoly& a, const UPoly& b) {
    if (a.degree() <= c.genus) return ReduceStep{a, b, UPoly(c.tower), UPoly(c.tower), false};
    UPoly aprime = divmod(c.f - b * b, a).q;
    UPoly amonic = aprime.monic();
    UPoly bnext = (-b) % amonic;
    return ReduceStep{amonic, bnext, b, aprime, true};
}

AddResult jacobian_add(const HyperCurve& c, const ReducedDivisor& d1, const ReducedDivisor& d2) {
    auto comp = cantor_compose(c, d1, d2);
    FunctionRecord rec{comp.h_gcd, {}, {}};
    UPoly a = comp.a.monic();
    UPoly b = comp.b;
    while (a.degree() > c.genus) {
        auto step = cantor_reduce(c, a, b);
        rec.betas.push_back(step.beta);
        rec.aprimes.push_back(step.aprime);
        a = step.a;
        b = step.b;
    }
    return AddResult{ReducedDivisor{std::move(a), std::move(b)}, std::move(rec)};
}

ReducedDivisor divisor_scalar(const HyperCurve& c, int64_t n, const ReducedDivisor& d) {
    ReducedDivisor acc = ReducedDivisor::zero(c.tower);
    ReducedDivisor base = d;
    bool negate = n < 0;
    uint64_t e = negate ? static_cast<uint64_t>(-n) : static_cast<uint64_t>(n);
    while (e) {
        if (e & 1) acc = jacobian_add(c, acc, base).sum;
        base = jacobian_add(c, base, base).sum;
        e >>= 1;
    }
    return negate ? divisor_neg(acc) : acc;
}

ReducedDivisor random_divisor(const HyperCurve& c, Rng& rng) {
    return point_to_divisor(c.tower, ec_random(c, rng));
}

KElem evaluate_at_positive(const HyperCurve& c, const FunctionRecord& h, const ReducedDivisor& d) {
    const TowerPtr& tw = c.tower;
    if (d.is_zero()) return tw->one(); // empty positive part
    KElem num = sym_eval(h.h1, d.a);
    if (num.is_zero()) throw SupportCollision();
    KElem den = tw->one();
    for (auto& ap : h.aprimes) {
        KElem v = sym_eval(ap, d.a);
        if (v.is_zero()) throw SupportCollision();
        den *= v;
    }
    for (auto& beta : h.betas) {
        // (y - beta)(D+) = S(c(b - beta), s(a))
        KElem v = sym_eval(d.b - beta, d.a);
        if (v.is_zero()) throw SupportCollision();
        num *= v;
    }
    return num / den;
}

InfinityForm infinity_form(const HyperCurve& c, const FunctionRecord& h) {
    InfinityForm out{h.h1.lc(), h.h1.degree(), 0};
    for (auto& ap : h.aprimes) {
        out.lead = out.lead / ap.lc();
        out.a -= ap.degree();
    }
    for (auto& beta : h.betas) {
        if (beta.degree() > c.genus) {
            out.lead = out.lead * (-beta.lc());
            out.a += beta.degree();
        } else {
            out.b += 1;
        }
    }
    return out;
}

std::vector<ReducedDivisor> enumerate_jacobian(const HyperCurve& c) {
    const TowerPtr& tw = c.tower;
    std::vector<ReducedDivisor> out;
    out.push_back(ReducedDivisor::zero(tw));
    int64_t n = tw->order();
    for (int w = 1; w <= c.genus; ++w) {
        int64_t acount = 1;
        for (int i = 0; i < w; ++i) acount *= n;
        for (int64_t ai = 0; ai < acount; ++ai) {
            std::vector<KElem> ac;
            int64_t t = ai;
            for (int i = 0; i < w; ++i) {
                ac.push_back(tw->elem_by_index(t % n));
                t /= n;
            }
            ac.push_back(tw->one());
            UPoly a(tw, ac);
            for (int64_t bi = 0; bi < acount; ++bi) {
                std::vector<KElem> bc;
                t = bi;
                for (int i = 0; i < w; ++i) {
                    bc.push_back(tw->elem_by_index(t % n));
                    t /= n;
                }
                UPoly b(tw, bc);
                ReducedDivisor d{a, b};
                if (on_jacobian(c, d)) out.push_back(std::move(d));
            }
        }
    }
    return out;
}

} // namespace trimap
