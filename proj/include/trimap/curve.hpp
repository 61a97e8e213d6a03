#pragma once

#include <optional>
#include <vector>

#include "trimap/rng.hpp"
#include "trimap/upoly.hpp"

namespace trimap {

// Nonsingular affine model y^2 = f(x), f monic of odd degree 2g+1.
struct HyperCurve {
    TowerPtr tower;
    UPoly f;
    int genus;

    static HyperCurve make(const TowerPtr& tw, UPoly f);
    static HyperCurve elliptic(const TowerPtr& tw, const KElem& a, const KElem& b);
    KElem a4() const { return f.coeff(1); } // elliptic a
    KElem a6() const { return f.coeff(0); } // elliptic b
};

// Affine point or the point at infinity (genus-1 convenience layer).
struct ECPoint {
    bool infinity = true;
    KElem x, y;
    static ECPoint at_infinity() { return ECPoint{}; }
    static ECPoint affine(KElem px, KElem py) { return ECPoint{false, std::move(px), std::move(py)}; }
    friend bool operator==(const ECPoint& p, const ECPoint& q) {
        if (p.infinity || q.infinity) return p.infinity == q.infinity;
        return p.x == q.x && p.y == q.y;
    }
};

bool on_curve(const HyperCurve& c, const ECPoint& p);
ECPoint ec_neg(const HyperCurve& c, const ECPoint& p);
ECPoint ec_add(const HyperCurve& c, const ECPoint& p, const ECPoint& q);
ECPoint ec_scalar(const HyperCurve& c, int64_t n, const ECPoint& p);
ECPoint ec_random(const HyperCurve& c, Rng& rng);
int64_t ec_count(const HyperCurve& c); // naive point count including infinity

// chord/tangent line data for the elliptic doubling function h_D
struct ECLine {
    KElem lambda, nu;
};
std::optional<ECLine> ec_tangent(const HyperCurve& c, const ECPoint& p); // nullopt at 2-torsion
std::optional<ECLine> ec_chord(const HyperCurve& c, const ECPoint& p, const ECPoint& q);

// Mumford pair (a, b): a monic, deg b < deg a <= g, b^2 = f mod a.
struct ReducedDivisor {
    UPoly a, b;
    static ReducedDivisor zero(const TowerPtr& tw);
    static ReducedDivisor from_point(const KElem& x, const KElem& y);
    bool is_zero() const { return a.degree() == 0; }
    int weight() const { return a.degree(); } // r in D = D+ - r*infinity
    friend bool operator==(const ReducedDivisor& d, const ReducedDivisor& e) {
        return d.a == e.a && d.b == e.b;
    }
    friend bool operator!=(const ReducedDivisor& d, const ReducedDivisor& e) { return !(d == e); }
    friend bool operator<(const ReducedDivisor& d, const ReducedDivisor& e);
};

bool on_jacobian(const HyperCurve& c, const ReducedDivisor& d);
ReducedDivisor divisor_neg(const ReducedDivisor& d);
ReducedDivisor divisor_frobenius(const ReducedDivisor& d, int64_t i);
ECPoint divisor_to_point(const ReducedDivisor& d);       // genus 1
ReducedDivisor point_to_divisor(const TowerPtr& tw, const ECPoint& p);

// h = (h1(x)/h3(x)) * prod_i (y - beta_i(x)) with h3 = prod aprime_i.
// Composition contributes the monic gcd to h1; each reduction step appends
// (beta, aprime) with h-factor (y - beta)/aprime.
struct FunctionRecord {
    UPoly h1;
    std::vector<UPoly> betas;
    std::vector<UPoly> aprimes;

    static FunctionRecord one(const TowerPtr& tw);
    FunctionRecord frobenius(int64_t i) const;
};

struct ComposeResult {
    UPoly a, b;   // semireduced output (a not normalized to monic here)
    UPoly h_gcd;  // monic; D1 + D2 = div(a,b) + (h_gcd)
};
ComposeResult cantor_compose(const HyperCurve& c, const ReducedDivisor& d1,
                             const ReducedDivisor& d2);

struct ReduceStep {
    UPoly a, b;          // next semireduced divisor, a monic
    UPoly beta, aprime;  // step function (y - beta)/aprime, aprime unnormalized
    bool reduced = false;
};
ReduceStep cantor_reduce(const HyperCurve& c, const UPoly& a, const UPoly& b);

struct AddResult {
    ReducedDivisor sum;
    FunctionRecord h; // D1 + D2 = sum + (h)
};
AddResult jacobian_add(const HyperCurve& c, const ReducedDivisor& d1, const ReducedDivisor& d2);

ReducedDivisor divisor_scalar(const HyperCurve& c, int64_t n, const ReducedDivisor& d);
ReducedDivisor random_divisor(const HyperCurve& c, Rng& rng); // weight-1, from a random point

// thrown when an evaluation hits a zero or pole on the divisor support
struct SupportCollision : std::runtime_error {
    SupportCollision() : std::runtime_error("divisor support collision") {}
};

// h(D+) via Lemma 10 (no root finding); throws SupportCollision on zero/pole
KElem evaluate_at_positive(const HyperCurve& c, const FunctionRecord& h, const ReducedDivisor& d);

// Lemma 9 data: h ~ lead * x^a * y^b at infinity
struct InfinityForm {
    KElem lead;
    int64_t a = 0, b = 0;
    int64_t valuation(int genus) const { return -2 * a - (2 * genus + 1) * b; }
};
InfinityForm infinity_form(const HyperCurve& c, const FunctionRecord& h);

// exhaustive enumeration of the Jacobian over small fields (test oracle support)
std::vector<ReducedDivisor> enumerate_jacobian(const HyperCurve& c);

} // namespace trimap
