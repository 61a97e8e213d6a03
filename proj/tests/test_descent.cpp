#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trimap/descent.hpp"

using namespace trimap;

static TowerPtr f9() { return FieldTower::make_with_modulus(3, {1, 0, 1}); }

static DescentContext f9_ctx() {
    auto tw = f9();
    KElem t = tw->gen(), one = tw->one();
    // the hand example basis u = (1+t, 1+2t)
    return DescentContext{tw, DescentBasis::from_elements({one + t, one + t.scaled(tw->fp(2))}), "u"};
}

static std::vector<KElem> random_hat(const TowerPtr& tw, int n, Rng& rng) {
    std::vector<KElem> v;
    for (int i = 0; i < n; ++i) v.push_back(tw->random_elem(rng));
    return v;
}

TEST_CASE("delta basics") {
    auto ctx = f9_ctx();
    auto tw = ctx.tower;
    for (int j = 0; j < 2; ++j) {
        std::vector<KElem> e{tw->zero(), tw->zero()};
        e[j] = tw->one();
        CHECK(delta(ctx, e) == ctx.basis.u[j]);
    }
    CHECK(delta(ctx, {tw->zero(), tw->zero()}).is_zero());
    // (1,1) -> (1+t)+(1+2t) = 2
    CHECK(delta(ctx, {tw->one(), tw->one()}) == tw->from_base(2));
}

TEST_CASE("rho and rho_inv") {
    auto ctx = f9_ctx();
    auto tw = ctx.tower;
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_hat(tw, 2, rng);
        CHECK(rho_inv(ctx, rho(ctx, x)) == x);
    }
    // k-rational vectors are descent points: rho = (y^{sigma_i})
    auto r = rho(ctx, {tw->from_base(2), tw->from_base(1)});
    CHECK(r[1] == r[0].frobenius(1));
    // d = 1: rho = multiplication by u_0
    auto t1 = FieldTower::make(5, 1, 3);
    auto ctx1 = make_context(t1, 7, "w");
    KElem x1 = t1->from_base(3);
    CHECK(rho(ctx1, {x1})[0] == x1 * ctx1.basis.u[0]);
}

TEST_CASE("descend constant and x^2 hand example") {
    auto ctx = f9_ctx();
    auto tw = ctx.tower;
    MPoly c(tw, 1);
    c.add_term({0}, tw->gen());
    auto tup = descend_polynomial(ctx, c);
    auto coords = ctx.basis.coords_of(tw->gen());
    for (int i = 0; i < 2; ++i) {
        CHECK(tup.polys[i].term_count() <= 1);
        CHECK(tup.polys[i].coeff({0, 0}) == tw->from_base(coords[i].value()));
    }
    // F = x^2 at (1,0): F(delta(1,0)) = (1+t)^2 = 2t = 1*(1+t) + 2*(1+2t)
    MPoly F(tw, 1);
    F.add_term({2}, tw->one());
    auto fhat = descend_polynomial(ctx, F);
    auto vals = eval_tuple(fhat.polys, {tw->one(), tw->zero()});
    CHECK(vals[0] == tw->one());
    CHECK(vals[1] == tw->from_base(2));
    // defining identity on random points
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = random_hat(tw, 2, rng);
        KElem lhs = F.eval({delta(ctx, x)});
        auto v = eval_tuple(fhat.polys, x);
        KElem rhs = tw->zero();
        for (int i = 0; i < 2; ++i) rhs += v[i] * ctx.basis.u[i];
        CHECK(lhs == rhs);
    }
}

TEST_CASE("descent diagram and conjugate identity") {
    auto tw = FieldTower::make(5, 2, 11);
    auto ctx = make_context(tw, 3, "u");
    Rng rng(5);
    int d = 2, n = 2;
    for (int trial = 0; trial < 20; ++trial) {
        MPoly F(tw, n);
        for (int terms = 0; terms < 6; ++terms) {
            Expo e(n, 0);
            e[0] = static_cast<uint16_t>(rng.below(3));
            e[1] = static_cast<uint16_t>(rng.below(2));
            F.add_term(e, tw->random_elem(rng));
        }
        if (F.is_zero()) continue;
        auto fhat = descend_polynomial(ctx, F);
        auto X = random_hat(tw, n * d, rng);
        // Fhat = rho^{-1} o prod F^{sigma_i} o rho
        std::vector<KElem> rhoF;
        for (int i = 0; i < d; ++i) rhoF.push_back(F.frobenius(i).eval(delta_point(ctx, X, i)));
        auto lhs = rho_inv(ctx, rhoF);
        auto rhs = eval_tuple(fhat.polys, X);
        CHECK(lhs == rhs);
        // F^{sigma_i}(delta^{sigma_i} X) = <Fhat(X), u^{sigma_i}>
        for (int i = 0; i < d; ++i) {
            KElem lhs2 = F.frobenius(i).eval(delta_point(ctx, X, i));
            KElem rhs2 = tw->zero();
            for (int j = 0; j < d; ++j) rhs2 += rhs[j] * ctx.basis.u[j].frobenius(i);
            CHECK(lhs2 == rhs2);
            CHECK(k_global_descent(ctx, F, i).eval(X) == lhs2);
        }
    }
}

TEST_CASE("descent linearity") {
    auto tw = FieldTower::make(5, 2, 11);
    auto ctx = make_context(tw, 4, "u");
    Rng rng(8);
    MPoly F(tw, 2), G(tw, 2);
    F.add_term({2, 1}, tw->gen());
    F.add_term({0, 1}, tw->one());
    G.add_term({1, 1}, tw->from_base(3));
    G.add_term({3, 0}, tw->gen() + tw->one());
    KElem a = tw->random_elem(rng), b = tw->random_elem(rng);
    auto sum = descend_polynomial(ctx, F.scaled(a) + G.scaled(b));
    for (int trial = 0; trial < 20; ++trial) {
        auto X = random_hat(tw, 4, rng);
        KElem direct =
            (F.scaled(a) + G.scaled(b)).eval({delta(ctx, {X[0], X[1]}), delta(ctx, {X[2], X[3]})});
        auto v = eval_tuple(sum.polys, X);
        KElem recomb = tw->zero();
        for (int i = 0; i < 2; ++i) recomb += v[i] * ctx.basis.u[i];
        CHECK(direct == recomb);
    }
}

TEST_CASE("descend_variety membership and stacks") {
    auto tw = FieldTower::make(5, 2, 1);
    auto ctx = make_context(tw, 9, "u");
    // y^2 = x^3 + 1 over F_25, vars (x, y)
    MPoly F(tw, 2);
    F.add_term({0, 2}, tw->one());
    F.add_term({3, 0}, -tw->one());
    F.add_term({0, 0}, -tw->one());
    auto vhat = descend_variety(ctx, {F});
    CHECK(vhat.size() == 2);
    Rng rng(3);
    auto sample_curve_point = [&]() {
        for (;;) {
            KElem x = tw->random_elem(rng);
            auto y = sqrt_in_field(x * x * x + tw->one());
            if (y) return std::vector<KElem>{x, *y};
        }
    };
    for (int trial = 0; trial < 20; ++trial) {
        auto P0 = sample_curve_point();
        auto P1 = sample_curve_point();
        auto hat = hat_from_stack(ctx, {P0, P1});
        for (auto& g : vhat) CHECK(g.eval(hat).is_zero());
        for (int i = 0; i < 2; ++i) CHECK(F.frobenius(i).eval(delta_point(ctx, hat, i)).is_zero());
        auto st = stack_from_hat(ctx, hat, 2);
        CHECK(st[0] == P0);
        CHECK(st[1] == P1);
        auto bad = hat;
        bad[0] += tw->one();
        bool off = false;
        for (auto& g : vhat)
            if (!g.eval(bad).is_zero()) off = true;
        CHECK(off);
    }
}

TEST_CASE("is_descent_point") {
    auto tw = FieldTower::make(5, 2, 2);
    auto ctx = make_context(tw, 21, "u");
    Rng rng(9);
    auto rep = is_descent_point(ctx, {tw->from_base(2), tw->from_base(4)});
    CHECK(rep.is_descent);
    CHECK(rep.leaked.empty());
    // descent points over K-coordinates with y in K are exactly the k-rational ones
    for (int trial = 0; trial < 10; ++trial) {
        KElem y = tw->random_elem(rng);
        auto hat = rho_inv(ctx, {y, y.frobenius(1)});
        auto rep1 = is_descent_point(ctx, hat);
        CHECK(rep1.is_descent);
        CHECK(rep1.leaked.empty()); // forced k-rational: orbit is Galois-stable
        for (auto& c : hat) CHECK(c.in_base());
    }
    // Lemma 1 leakage needs y outside K: embed u into the degree-2d extension
    auto big = FieldTower::make(5, 4, 2);
    std::vector<KElem> modK;
    for (auto& c : tw->modulus()) modK.push_back(big->from_base(c.value()));
    auto root = find_root_by_scan(big, modK);
    REQUIRE(root.has_value());
    std::vector<KElem> u_big;
    for (auto& uu : ctx.basis.u) u_big.push_back(embed(uu, big, *root));
    DescentContext ctx_big{big, DescentBasis::from_elements(u_big), "u-embedded"};
    for (int trial = 0; trial < 10; ++trial) {
        KElem y = big->random_elem(rng);
        if (y.frobenius(2) == y) continue; // want y outside the K-subfield
        auto hat = rho_inv(ctx_big, {y, y.frobenius(1)});
        auto rep2 = is_descent_point(ctx_big, hat);
        CHECK(rep2.is_descent);
        CHECK(!rep2.leaked.empty());
        for (auto& r : rep2.leaked) {
            KElem ip = big->zero();
            for (int j = 0; j < 2; ++j) ip += r[j] * ctx_big.basis.u[j];
            CHECK(ip.is_zero());
        }
    }
    int hits = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<KElem> x{tw->random_elem(rng), tw->random_elem(rng)};
        if (is_descent_point(ctx, x).is_descent) ++hits;
    }
    CHECK(hits <= 2);
}

TEST_CASE("frobenius equivariance of delta") {
    auto tw = FieldTower::make(3, 3, 5);
    auto ctx = make_context(tw, 13, "u");
    Rng rng(14);
    for (int trial = 0; trial < 10; ++trial) {
        auto x = random_hat(tw, 3, rng);
        std::vector<KElem> xq;
        for (auto& c : x) xq.push_back(c.frobenius(1));
        for (int i = 0; i < 3; ++i) CHECK(delta(ctx, x, i).frobenius(1) == delta(ctx, xq, i + 1));
    }
}
