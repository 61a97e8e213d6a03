#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trimap/pairing.hpp"

using namespace trimap;

// ---- definitional Weil pairing oracle: random divisor-class representatives,
// explicit line functions, direct Weil-reciprocity quotient; fully independent
// of FunctionRecord/sym_eval machinery ----

namespace oracle {

using trimap::ECPoint;

struct AffDiv {
    std::vector<std::pair<ECPoint, int>> pts; // affine, with signs
};

// value of the line through A,B (chord/tangent/vertical) at point X
static KElem line_value(const HyperCurve& c, const ECPoint& A, const ECPoint& B, const ECPoint& X) {
    auto tw = c.tower;
    if (A.infinity || B.infinity) {
        const ECPoint& P = A.infinity ? B : A;
        if (P.infinity) return tw->one(); // line at infinity: constant
        return X.x - P.x;                 // vertical through P
    }
    if (A.x == B.x && !(A.y == B.y)) return X.x - A.x; // vertical chord
    std::optional<ECLine> l = (A == B) ? ec_tangent(c, A) : ec_chord(c, A, B);
    if (!l) return X.x - A.x; // tangent at 2-torsion is vertical
    return X.y - l->lambda * X.x - l->nu;
}

// g_{Z,P} = line_{Z,P} / vertical_{Z+P}; divisor (Z)+(P)-(Z+P)-(O)
static KElem step_value(const HyperCurve& c, const ECPoint& Z, const ECPoint& P, const AffDiv& at) {
    auto tw = c.tower;
    ECPoint S = ec_add(c, Z, P);
    KElem v = tw->one();
    for (auto& [X, sign] : at.pts) {
        KElem num = line_value(c, Z, P, X);
        KElem den = S.infinity ? tw->one() : line_value(c, S, ec_neg(c, S), X);
        if (num.is_zero() || den.is_zero()) throw SupportCollision();
        v = v * (num / den).pow(sign);
    }
    return v;
}

// f_P(at) with div(f_P) = ell(P) - ell(O), textbook Miller with explicit lines
static KElem miller(const HyperCurve& c, const ECPoint& P, int64_t ell, const AffDiv& at) {
    auto tw = c.tower;
    KElem f = tw->one();
    ECPoint Z = P;
    int top = 63;
    while (!((ell >> top) & 1)) --top;
    for (int i = top - 1; i >= 0; --i) {
        f = f * f * step_value(c, Z, Z, at);
        Z = ec_add(c, Z, Z);
        if ((ell >> i) & 1) {
            f = f * step_value(c, Z, P, at);
            Z = ec_add(c, Z, P);
        }
    }
    if (!Z.infinity) throw std::logic_error("oracle miller: not ell-torsion");
    return f;
}

// e(P,Q) via disjoint representatives A = (P+S)-(S), B = (Q+T)-(T)
static KElem weil(const HyperCurve& c, const ECPoint& P, const ECPoint& Q, int64_t ell, Rng& rng) {
    auto tw = c.tower;
    if (P.infinity || Q.infinity) return tw->one();
    for (int attempt = 0; attempt < 100; ++attempt) {
        ECPoint S = ec_random(c, rng), T = ec_random(c, rng);
        ECPoint PS = ec_add(c, P, S), QT = ec_add(c, Q, T);
        if (S.infinity || T.infinity || PS.infinity || QT.infinity) continue;
        AffDiv A{{{PS, 1}, {S, -1}}};
        AffDiv B{{{QT, 1}, {T, -1}}};
        try {
            // f_A = f_P * g_A^{-ell}, g_A = line_{P,S}/vert_{P+S}
            KElem fP_B = miller(c, P, ell, B);
            KElem gA_B = step_value(c, P, S, B);
            KElem fQ_A = miller(c, Q, ell, A);
            KElem gB_A = step_value(c, Q, T, A);
            KElem num = fP_B * gA_B.pow(-ell);
            KElem den = fQ_A * gB_A.pow(-ell);
            return num / den;
        } catch (const SupportCollision&) {
            continue;
        }
    }
    throw std::runtime_error("oracle weil: retries exhausted");
}

} // namespace oracle

static Parameters reference_params() {
    return find_parameters({5}, {2}, 1, 42);
}

TEST_CASE("find_parameters lands on the reference curve") {
    auto p = reference_params();
    CHECK(p.tower->q() == 5);
    CHECK(p.tower->d() == 2);
    CHECK(p.ell == 3);
    CHECK(p.group_order == 36);
    CHECK(p.cofactor == 4);
    CHECK(p.curve.a4().is_zero());
    CHECK(p.curve.a6().is_one()); // y^2 = x^3 + 1
    CHECK(p.group_order % (p.ell * p.ell) == 0);
    CHECK((p.tower->order() - 1) % p.ell == 0);
    CHECK_THROWS(find_parameters({5}, {1}, 1, 1)); // mu_3 not in F_5... 3 | 4 fails
}

TEST_CASE("miller function structure") {
    auto p = reference_params();
    Rng rng(7);
    auto tb = torsion_basis(p, 3);
    auto f = miller_function(p.curve, tb.alpha, p.ell);
    // nu_inf(f) = -ell * r
    int64_t val = 0;
    for (auto& [rec, e] : f.parts) val += e * infinity_form(p.curve, rec).valuation(p.curve.genus);
    CHECK(val == -p.ell * tb.alpha.weight());
    (void)rng;
    CHECK_THROWS(miller_function(p.curve, tb.alpha, 2)); // 2*alpha != 0 for 3-torsion alpha
}

TEST_CASE("weil_pairing matches the definitional oracle") {
    auto p = reference_params();
    auto c = p.curve;
    Rng rng(11);
    auto tb = torsion_basis(p, 5);
    // full torsion basis pair plus 50 random pairs
    int done = 0;
    for (int trial = 0; trial < 200 && done < 50; ++trial) {
        int64_t m = static_cast<int64_t>(rng.below(p.ell));
        int64_t n = static_cast<int64_t>(rng.below(p.ell));
        int64_t mm = static_cast<int64_t>(rng.below(p.ell));
        int64_t nn = static_cast<int64_t>(rng.below(p.ell));
        auto d1 = jacobian_add(c, divisor_scalar(c, m, tb.alpha), divisor_scalar(c, n, tb.beta)).sum;
        auto d2 = jacobian_add(c, divisor_scalar(c, mm, tb.alpha), divisor_scalar(c, nn, tb.beta)).sum;
        KElem lib = weil_pairing(c, d1, d2, p.ell, rng.next());
        KElem orc = oracle::weil(c, divisor_to_point(d1), divisor_to_point(d2), p.ell, rng);
        CHECK(lib == orc);
        ++done;
    }
    CHECK(done == 50);
    // basis pair
    KElem lib = weil_pairing(c, tb.alpha, tb.beta, p.ell, 1);
    KElem orc = oracle::weil(c, divisor_to_point(tb.alpha), divisor_to_point(tb.beta), p.ell, rng);
    CHECK(lib == orc);
}

TEST_CASE("pairing bilinearity, alternation, mu_ell values") {
    auto p = reference_params();
    auto c = p.curve;
    Rng rng(13);
    auto tb = torsion_basis(p, 9);
    CHECK(unity_order(tb.zeta) == p.ell);          // non-degeneracy: exact order ell
    CHECK(weil_pairing(c, tb.alpha, tb.alpha, p.ell, 2).is_one()); // alternating
    CHECK(weil_pairing(c, tb.beta, tb.beta, p.ell, 3).is_one());
    for (int trial = 0; trial < 20; ++trial) {
        int64_t m = static_cast<int64_t>(rng.below(p.ell));
        int64_t n = static_cast<int64_t>(rng.below(p.ell));
        auto md = divisor_scalar(c, m, tb.alpha);
        auto nd = divisor_scalar(c, n, tb.beta);
        KElem lhs = weil_pairing(c, md, nd, p.ell, rng.next());
        CHECK(lhs == tb.zeta.pow(m * n));
        CHECK(lhs.pow(p.ell).is_one());
    }
    // e(2D1, D2) = e(D1,D2)^2
    auto d1 = tb.alpha;
    auto d2 = tb.beta;
    CHECK(weil_pairing(c, divisor_scalar(c, 2, d1), d2, p.ell, 4) ==
          weil_pairing(c, d1, d2, p.ell, 5).pow(2));
}

TEST_CASE("galois equivariance") {
    auto p = reference_params();
    auto c = p.curve; // coefficients fixed by sigma
    Rng rng(17);
    auto tb = torsion_basis(p, 21);
    for (int trial = 0; trial < 10; ++trial) {
        int64_t m = 1 + static_cast<int64_t>(rng.below(p.ell - 1));
        auto d1 = divisor_scalar(c, m, tb.alpha);
        auto d2 = tb.beta;
        KElem e = weil_pairing(c, d1, d2, p.ell, rng.next());
        KElem econj = weil_pairing(c, divisor_frobenius(d1, 1), divisor_frobenius(d2, 1), p.ell,
                                   rng.next());
        CHECK(econj == e.frobenius(1));
    }
}

TEST_CASE("torsion basis contract") {
    auto p = reference_params();
    auto c = p.curve;
    for (uint64_t seed = 0; seed < 3; ++seed) {
        auto tb = torsion_basis(p, seed);
        CHECK(divisor_scalar(c, p.ell, tb.alpha).is_zero());
        CHECK(divisor_scalar(c, p.ell, tb.beta).is_zero());
        CHECK(!tb.alpha.is_zero());
        CHECK(!tb.beta.is_zero());
        CHECK(!tb.zeta.is_one());
        CHECK(tb.zeta.pow(p.ell).is_one());
    }
}

TEST_CASE("support collision rerandomization: e(D,D) and overlapping supports") {
    auto p = reference_params();
    auto c = p.curve;
    Rng rng(23);
    auto tb = torsion_basis(p, 33);
    // direct path always collides here; the rerandomized path must return 1
    CHECK(weil_pairing(c, tb.alpha, tb.alpha, p.ell, 6).is_one());
    // pairs sharing points
    auto two = divisor_scalar(c, 2, tb.alpha);
    KElem v = weil_pairing(c, tb.alpha, two, p.ell, 7);
    CHECK(v.is_one()); // e(D,2D) = e(D,D)^2 = 1
}
