#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "trimap/field.hpp"
#include "trimap/upoly.hpp"

using namespace trimap;

// F_9 = F_3[t]/(t^2+1): the worked example threaded through the module specs.
static TowerPtr f9() { return FieldTower::make_with_modulus(3, {1, 0, 1}); }

TEST_CASE("tower construction") {
    auto tw = FieldTower::make(3, 2, 7);
    CHECK(tw->q() == 3);
    CHECK(tw->d() == 2);
    CHECK(tw->order() == 9);
    CHECK(tw->modulus().back().value() == 1);

    // degree-1 extension: modulus t - c
    auto t1 = FieldTower::make(3, 1, 5);
    CHECK(t1->order() == 3);

    CHECK_THROWS(FieldTower::make(4, 2, 1)); // 4 not prime

    // determinism
    auto a = FieldTower::make(5, 2, 42);
    auto b = FieldTower::make(5, 2, 42);
    for (size_t i = 0; i < a->modulus().size(); ++i)
        CHECK(a->modulus()[i].value() == b->modulus()[i].value());
}

TEST_CASE("x^{q^d} = x for all elements") {
    auto tw = f9();
    for (int64_t i = 0; i < tw->order(); ++i) {
        KElem x = tw->elem_by_index(i);
        CHECK(x.pow(9) == x);
        CHECK(x.frobenius(tw->d()) == x);
    }
}

TEST_CASE("frobenius") {
    auto tw = f9();
    KElem t = tw->gen();
    // t^3 = t * t^2 = -t in F_3[t]/(t^2+1)
    CHECK(t.frobenius(1) == -t);
    CHECK(t.frobenius(1) == t.pow(3));
    // base field fixed
    for (int64_t v = 0; v < 3; ++v) CHECK(tw->from_base(v).frobenius(1) == tw->from_base(v));
    // homomorphism on random pairs
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        KElem x = tw->random_elem(rng), y = tw->random_elem(rng);
        CHECK((x * y).frobenius(1) == x.frobenius(1) * y.frobenius(1));
        CHECK((x + y).frobenius(1) == x.frobenius(1) + y.frobenius(1));
    }
}

TEST_CASE("field inverse and pow") {
    auto tw = FieldTower::make(5, 2, 3);
    Rng rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        KElem x = tw->random_nonzero(rng);
        CHECK((x * x.inverse()).is_one());
        CHECK(x.pow(tw->order() - 1).is_one());
    }
}

TEST_CASE("descent basis gamma/w and the F9 hand example") {
    auto tw = f9();
    KElem t = tw->gen(), one = tw->one();
    // u = (1+t, 1+2t): Gamma = [[1+t,1+2t],[1+2t,1+t]], det = t != 0
    DescentBasis b = DescentBasis::from_elements({one + t, one + t.scaled(tw->fp(2))});
    CHECK(b.gamma[0][0] == one + t);
    CHECK(b.gamma[1][0] == one + t.scaled(tw->fp(2))); // (1+t)^3 = 1+2t
    CHECK(b.gamma[1][1] == one + t);
    CHECK(mat_det(b.gamma) == t - (-t) - t); // det = (1+t)^2-(1+2t)^2 = t... just check nonzero
    CHECK(!mat_det(b.gamma).is_zero());
    auto prod = mat_mul(b.gamma, b.w);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(prod[i][j] == (i == j ? tw->one() : tw->zero()));
}

TEST_CASE("random descent basis properties") {
    auto tw = FieldTower::make(5, 3, 9);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        DescentBasis b = random_descent_basis(tw, seed);
        // row i of gamma is entrywise Frobenius^i of u
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(b.gamma[i][j] == b.u[j].frobenius(i));
        auto prod = mat_mul(b.gamma, b.w);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(prod[i][j] == (i == j ? tw->one() : tw->zero()));
    }
    // d = 1 degenerate: u = (c), w = (1/c)
    auto t1 = FieldTower::make(7, 1, 4);
    DescentBasis b1 = random_descent_basis(t1, 0);
    CHECK((b1.gamma[0][0] * b1.w[0][0]).is_one());
}

TEST_CASE("basis_convert") {
    auto tw = f9();
    KElem t = tw->gen(), one = tw->one();
    DescentBasis u = DescentBasis::from_elements({one + t, one + t.scaled(tw->fp(2))});
    DescentBasis th = theta_basis(tw);
    // (1,0) in u -> (1,1) in theta: 1+t = 1*1 + 1*t
    auto out = basis_convert({tw->fp(1), tw->fp(0)}, u, th);
    CHECK(out[0].value() == 1);
    CHECK(out[1].value() == 1);
    // identity and round trip
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Fp> v{tw->fp(rng.below_i(3)), tw->fp(rng.below_i(3))};
        auto same = basis_convert(v, u, u);
        CHECK(same == v);
        auto back = basis_convert(basis_convert(v, u, th), th, u);
        CHECK(back == v);
    }
    // composition convert(convert(x,A,B),B,C) = convert(x,A,C)
    DescentBasis w = random_descent_basis(tw, 77);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Fp> v{tw->fp(rng.below_i(3)), tw->fp(rng.below_i(3))};
        CHECK(basis_convert(basis_convert(v, u, th), th, w) == basis_convert(v, u, w));
    }
}

TEST_CASE("scalar structure matrix") {
    auto tw = f9();
    DescentBasis th = theta_basis(tw);
    KElem t = tw->gen();
    // a = 1 -> identity, a = 0 -> zero
    auto g1 = scalar_structure_matrix(tw->one(), th);
    auto g0 = scalar_structure_matrix(tw->zero(), th);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            CHECK(g1[i][j].value() == (i == j ? 1 : 0));
            CHECK(g0[i][j].value() == 0);
        }
    // a = t with u = theta: t*1 = t, t*t = -1 -> [[0,1],[2,0]]
    auto gt = scalar_structure_matrix(t, th);
    CHECK(gt[0][0].value() == 0);
    CHECK(gt[0][1].value() == 1);
    CHECK(gt[1][0].value() == 2);
    CHECK(gt[1][1].value() == 0);
    // ring map on random pairs: Gamma_{a+b} = Gamma_a + Gamma_b, Gamma_{ab} = Gamma_b Gamma_a
    Rng rng(3);
    DescentBasis u = random_descent_basis(tw, 13);
    for (int trial = 0; trial < 20; ++trial) {
        KElem a = tw->random_elem(rng), b = tw->random_elem(rng);
        auto ga = scalar_structure_matrix(a, u), gb = scalar_structure_matrix(b, u);
        auto gsum = scalar_structure_matrix(a + b, u);
        auto gprod = scalar_structure_matrix(a * b, u);
        auto comp = mat_mul(gb, ga);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                CHECK(gsum[i][j] == ga[i][j] + gb[i][j]);
                CHECK(gprod[i][j] == comp[i][j]);
            }
        if (!(a == b)) CHECK(ga != gb);
    }
}

TEST_CASE("min poly degree and vitality") {
    auto tw = f9();
    CHECK(tw->from_base(2).min_poly_degree() == 1);
    CHECK(tw->gen().min_poly_degree() == 2);
}

TEST_CASE("sqrt in K") {
    for (auto params : {std::pair<int64_t, int>{5, 2}, {7, 2}, {3, 2}, {13, 1}}) {
        auto tw = FieldTower::make(params.first, params.second, 1);
        Rng rng(9);
        int squares = 0;
        for (int trial = 0; trial < 40; ++trial) {
            KElem x = tw->random_elem(rng);
            auto r = sqrt_in_field(x);
            if (r) {
                ++squares;
                CHECK(*r * *r == x);
            }
        }
        CHECK(squares > 5);
    }
}

TEST_CASE("embedding into extension") {
    auto k = FieldTower::make(5, 2, 1);
    auto big = FieldTower::make(5, 4, 1);
    std::vector<KElem> mod_in_big;
    for (auto& c : k->modulus()) mod_in_big.push_back(big->from_base(c.value()));
    auto root = find_root_by_scan(big, mod_in_big);
    REQUIRE(root.has_value());
    Rng rng(4);
    for (int trial = 0; trial < 15; ++trial) {
        KElem a = k->random_elem(rng), b = k->random_elem(rng);
        CHECK(embed(a * b, big, *root) == embed(a, big, *root) * embed(b, big, *root));
        CHECK(embed(a + b, big, *root) == embed(a, big, *root) + embed(b, big, *root));
    }
}

TEST_CASE("sym_eval basics") {
    auto tw = FieldTower::make(5, 2, 2);
    Rng rng(6);
    KElem g = tw->random_elem(rng);
    UPoly f(tw, {tw->from_base(2), tw->one(), tw->from_base(3)}); // 2 + x + 3x^2
    // single root
    UPoly a = UPoly(tw, {-g, tw->one()});
    CHECK(sym_eval(f, a) == f.eval(g));
    // constant f, deg a = r -> c^r
    UPoly c3 = UPoly::constant(tw->from_base(3));
    UPoly a2(tw, {tw->from_base(1), tw->from_base(2), tw->one()});
    CHECK(sym_eval(c3, a2) == tw->from_base(9));
    // split quadratic: product over roots
    KElem r1 = tw->random_elem(rng), r2 = tw->random_elem(rng);
    UPoly split = UPoly(tw, {r1 * r2, -(r1 + r2), tw->one()});
    CHECK(sym_eval(f, split) == f.eval(r1) * f.eval(r2));
}

TEST_CASE("upoly divmod gcd") {
    auto tw = FieldTower::make(7, 2, 8);
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<KElem> ac, bc;
        for (int i = 0; i < 6; ++i) ac.push_back(tw->random_elem(rng));
        for (int i = 0; i < 4; ++i) bc.push_back(tw->random_elem(rng));
        UPoly a(tw, ac), b(tw, bc);
        if (b.is_zero()) continue;
        auto qr = divmod(a, b);
        CHECK(qr.q * b + qr.r == a);
        CHECK(qr.r.degree() < b.degree());
        auto xg = xgcd(a, b);
        CHECK(xg.s * a + xg.t * b == xg.g);
        UPoly c = a * b;
        auto x3 = xgcd3(a, b, c);
        CHECK(x3.h1 * a + x3.h2 * b + x3.h3 * c == x3.g);
    }
}
