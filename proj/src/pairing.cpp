#include "trimap/pairing.hpp"

namespace trimap {

MillerFunction miller_function(const HyperCurve& c, const ReducedDivisor& d, int64_t ell) {
    if (!divisor_scalar(c, ell, d).is_zero())
        throw std::invalid_argument("miller_function: divisor is not ell-torsion");
    MillerFunction f{{}, ell, d};
    if (d.is_zero() || ell == 1) return f;
    // bits of ell, most significant first; maintain 2^i D = (H_i) + D_i
    int top = 63;
    while (!((ell >> top) & 1)) --top;
    ReducedDivisor cur = d;
    for (int i = top - 1; i >= 0; --i) {
        for (auto& p : f.parts) p.second *= 2;
        auto dbl = jacobian_add(c, cur, cur);
        f.parts.emplace_back(dbl.h, 1);
        cur = dbl.sum;
        if ((ell >> i) & 1) {
            auto add = jacobian_add(c, cur, d);
            f.parts.emplace_back(add.h, 1);
            cur = add.sum;
        }
    }
    if (!cur.is_zero()) throw std::logic_error("miller_function: chain did not close");
    return f;
}

MillerEvalParts miller_eval_parts(const HyperCurve& c, const MillerFunction& f,
                                  const Presentation& pres) {
    const TowerPtr& tw = c.tower;
    MillerEvalParts out{tw->one(), tw->one(), 0, 0};
    int64_t inf_weight = 0; // sum sign * r_i
    for (auto& [e, sign] : pres) inf_weight += sign * e.weight();
    for (auto& [rec, exp] : f.parts) {
        for (auto& [e, sign] : pres) {
            if (e.is_zero()) continue;
            KElem v = evaluate_at_positive(c, rec, e);
            out.affine = out.affine * v.pow(exp * sign);
        }
        if (inf_weight != 0) {
            auto inf = infinity_form(c, rec);
            out.lead = out.lead * inf.lead.pow(-exp * inf_weight);
            out.xa += -exp * inf_weight * inf.a;
            out.yb += -exp * inf_weight * inf.b;
        }
    }
    return out;
}

namespace {

// pairing core on presentations: value of fA(presB)/fB(presA), with extra
// record factors folded into each side (for re-randomized representatives)
KElem pairing_quotient(const HyperCurve& c, const MillerFunction& fa, const Presentation& pb,
                       const MillerFunction& fb, const Presentation& pa) {
    auto e1 = miller_eval_parts(c, fa, pb);
    auto e2 = miller_eval_parts(c, fb, pa);
    int64_t xa = e1.xa - e2.xa, yb = e1.yb - e2.yb;
    // the residual monomial x^a y^b must have valuation 0 at infinity, where
    // it evaluates to 1 (monic model)
    if (-2 * xa - (2 * c.genus + 1) * yb != 0)
        throw std::logic_error("weil_pairing: unbalanced infinity parts");
    KElem v = e1.affine * e1.lead / (e2.affine * e2.lead);
    // tame-symbol sign at the shared place infinity:
    // (-1)^{v_inf(fa) v_inf(fb)} with v_inf = -ell * (infinity weight)
    int64_t ra = 0, rb = 0;
    for (auto& [e, s] : pa) ra += s * e.weight();
    for (auto& [e, s] : pb) rb += s * e.weight();
    if (((fa.ell * ra) % 2 != 0) && ((fb.ell * rb) % 2 != 0)) v = -v;
    return v;
}

} // namespace

KElem weil_pairing(const HyperCurve& c, const ReducedDivisor& d1, const ReducedDivisor& d2,
                   int64_t ell, uint64_t retry_seed) {
    const TowerPtr& tw = c.tower;
    if (d1.is_zero() || d2.is_zero()) return tw->one();
    MillerFunction f1 = miller_function(c, d1, ell);
    MillerFunction f2 = miller_function(c, d2, ell);
    try {
        return pairing_quotient(c, f1, {{d2, 1}}, f2, {{d1, 1}});
    } catch (const SupportCollision&) {
    }
    Rng rng(retry_seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
        // replace representatives: D2 + R = E2 + (h) so the class of D2 is
        // presented as E2 - R with f_B = f2 * h^{-ell}; same on the D1 side
        ReducedDivisor r2 = random_divisor(c, rng);
        ReducedDivisor r1 = random_divisor(c, rng);
        auto a2 = jacobian_add(c, d2, r2);
        auto a1 = jacobian_add(c, d1, r1);
        if (a2.sum.is_zero() || a1.sum.is_zero()) continue;
        MillerFunction fb = f2;
        fb.parts.emplace_back(a2.h, -ell);
        MillerFunction fa = f1;
        fa.parts.emplace_back(a1.h, -ell);
        Presentation pb{{a2.sum, 1}, {r2, -1}};
        Presentation pa{{a1.sum, 1}, {r1, -1}};
        try {
            return pairing_quotient(c, fa, pb, fb, pa);
        } catch (const SupportCollision&) {
        }
    }
    throw std::runtime_error("weil_pairing: retry budget exhausted");
}

Parameters find_parameters(const std::vector<int64_t>& qs, const std::vector<int>& ds, int genus,
                           uint64_t seed) {
    for (int64_t q : qs) {
        if (!is_prime_i64(q) || q <= 3) continue;
        for (int d : ds) {
            int64_t order = 1;
            bool too_big = false;
            for (int i = 0; i < d; ++i) {
                order *= q;
                if (order > 1000000) too_big = true;
            }
            if (too_big) continue;
            auto tw = FieldTower::make(q, d, seed);
            int64_t curve_count = genus == 1 ? tw->order() * tw->order() : tw->order();
            for (int64_t ci = 0; ci < curve_count; ++ci) {
                HyperCurve c{tw, UPoly(tw), 0};
                try {
                    if (genus == 1) {
                        KElem a = tw->elem_by_index(ci / tw->order());
                        KElem b = tw->elem_by_index(ci % tw->order());
                        c = HyperCurve::elliptic(tw, a, b);
                    } else {
                        // y^2 = x^{2g+1} + b
                        std::vector<KElem> fc(2 * genus + 2, tw->zero());
                        fc[0] = tw->elem_by_index(ci);
                        fc[2 * genus + 1] = tw->one();
                        c = HyperCurve::make(tw, UPoly(tw, fc));
                    }
                } catch (const std::invalid_argument&) {
                    continue;
                }
                int64_t n;
                if (genus == 1)
                    n = ec_count(c);
                else {
                    if (tw->order() > 31) continue; // enumeration budget
                    n = static_cast<int64_t>(enumerate_jacobian(c).size());
                }
                // odd ell only: doubling 2-torsion points sits off the
                // principal site, so ell = 2 has no usable Miller chain
                for (int64_t ell = 3; ell * ell <= n; ++ell) {
                    if (!is_prime_i64(ell) || ell == q) continue;
                    if ((tw->order() - 1) % ell != 0) continue;
                    if (n % (ell * ell) != 0) continue;
                    int v = 0;
                    int64_t m = n;
                    while (m % ell == 0) {
                        m /= ell;
                        ++v;
                    }
                    Parameters p{tw, c, ell, n, m, v};
                    // constructive full-torsion check
                    try {
                        torsion_basis(p, seed ^ 0x746f72ULL);
                        return p;
                    } catch (const std::runtime_error&) {
                        continue;
                    }
                }
            }
        }
    }
    throw std::runtime_error("find_parameters: nothing admissible in range");
}

TorsionBasis torsion_basis(const Parameters& params, uint64_t seed) {
    const HyperCurve& c = params.curve;
    Rng rng(seed);
    auto random_ell_torsion = [&]() -> ReducedDivisor {
        for (int tries = 0; tries < 200; ++tries) {
            ReducedDivisor d = random_divisor(c, rng);
            ReducedDivisor x = divisor_scalar(c, params.cofactor, d);
            // push into exact ell-torsion inside the Sylow subgroup
            for (int i = 0; i < params.ell_valuation - 1; ++i) {
                ReducedDivisor next = divisor_scalar(c, params.ell, x);
                if (next.is_zero()) break;
                x = next;
            }
            if (!x.is_zero() && divisor_scalar(c, params.ell, x).is_zero()) return x;
        }
        throw std::runtime_error("torsion_basis: no ell-torsion found (bad params?)");
    };
    ReducedDivisor alpha = random_ell_torsion();
    for (int tries = 0; tries < 200; ++tries) {
        ReducedDivisor beta = random_ell_torsion();
        KElem z = weil_pairing(c, alpha, beta, params.ell, rng.next());
        if (!z.is_one()) return TorsionBasis{alpha, beta, z};
    }
    throw std::runtime_error("torsion_basis: retry budget exhausted (bad params?)");
}

int64_t unity_order(const KElem& zeta) {
    KElem x = zeta;
    for (int64_t n = 1; n < 100000; ++n) {
        if (x.is_one()) return n;
        x = x * zeta;
    }
    throw std::runtime_error("unity_order: not a small root of unity");
}

} // namespace trimap
