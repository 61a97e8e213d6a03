#pragma once

#include <string>
#include <vector>

#include "trimap/field.hpp"

namespace trimap {

// Dense univariate polynomial over K, little-endian coefficients, normalized
// (no trailing zeros; zero polynomial has empty coefficient list but still
// carries a tower).
class UPoly {
public:
    explicit UPoly(TowerPtr tw) : tw_(std::move(tw)) {}
    UPoly(TowerPtr tw, std::vector<KElem> coeffs);
    static UPoly constant(const KElem& c);
    static UPoly x(const TowerPtr& tw); // the monomial t
    static UPoly monomial(const TowerPtr& tw, int deg, const KElem& c);

    const TowerPtr& tower() const { return tw_; }
    const std::vector<KElem>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }
    KElem lc() const; // leading coefficient; throws on zero
    KElem coeff(int i) const;
    bool is_monic() const { return !is_zero() && lc().is_one(); }

    UPoly monic() const;
    KElem eval(const KElem& x) const;
    UPoly frobenius(int64_t i) const; // coefficient-wise sigma^i
    UPoly shift(int k) const;         // multiply by t^k
    UPoly scaled(const KElem& c) const;

    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    UPoly operator-() const;

    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    std::string str() const;

private:
    TowerPtr tw_;
    std::vector<KElem> c_;
    void trim();
};

struct UPolyDivMod {
    UPoly q, r;
};
UPolyDivMod divmod(const UPoly& a, const UPoly& b);
UPoly operator%(const UPoly& a, const UPoly& b);
UPoly gcd(const UPoly& a, const UPoly& b); // monic gcd

struct XGcd {
    UPoly g, s, t; // g = s*a + t*b, g monic (or zero)
};
XGcd xgcd(const UPoly& a, const UPoly& b);

// h = gcd(a1, a2, a3) = h1 a1 + h2 a2 + h3 a3, h monic
struct XGcd3 {
    UPoly g, h1, h2, h3;
};
XGcd3 xgcd3(const UPoly& a1, const UPoly& a2, const UPoly& a3);

// prod over roots gamma_i of monic a of f(gamma_i), computed exactly in K as
// det f(C_a) with C_a the companion matrix; no root finding
KElem sym_eval(const UPoly& f, const UPoly& a);

} // namespace trimap
