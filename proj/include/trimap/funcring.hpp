#pragma once

#include "trimap/curve.hpp"
#include "trimap/mpoly.hpp"

namespace trimap {

// gcd in K[x1][x2] by primitive PRS (finite-field coefficients, no growth)
MPoly gcd2(const MPoly& a, const MPoly& b);
// exact division (throws if not divisible)
MPoly exact_div2(const MPoly& a, const MPoly& b);

// Function on y^2 = f(x): (p0 + p1*y)/den, y-degree reduced via f.
struct CurveFunc1 {
    UPoly p0, p1, den;
    bool is_zero() const { return p0.is_zero() && p1.is_zero(); }
};

class FuncRing1 {
public:
    explicit FuncRing1(HyperCurve curve) : c_(std::move(curve)) {}
    const HyperCurve& curve() const { return c_; }
    const TowerPtr& tower() const { return c_.tower; }

    CurveFunc1 zero() const;
    CurveFunc1 konst(const KElem& v) const;
    CurveFunc1 coord_x() const;
    CurveFunc1 coord_y() const;
    CurveFunc1 from_poly(const UPoly& p) const; // polynomial in x

    CurveFunc1 add(const CurveFunc1& a, const CurveFunc1& b) const;
    CurveFunc1 sub(const CurveFunc1& a, const CurveFunc1& b) const;
    CurveFunc1 mul(const CurveFunc1& a, const CurveFunc1& b) const;
    CurveFunc1 neg(const CurveFunc1& a) const;
    CurveFunc1 inv(const CurveFunc1& a) const;
    CurveFunc1 div(const CurveFunc1& a, const CurveFunc1& b) const { return mul(a, inv(b)); }
    CurveFunc1 reduce(const CurveFunc1& a) const;

    bool equal(const CurveFunc1& a, const CurveFunc1& b) const;
    // evaluate at an affine point; nullopt if the denominator vanishes
    std::optional<KElem> eval(const CurveFunc1& a, const ECPoint& p) const;

private:
    HyperCurve c_;
};

// Function on (y1^2 = f(x1)) x (y2^2 = f(x2)): components over K[x1,x2]
// for 1, y1, y2, y1*y2, over a common bivariate denominator.
struct CurveFunc2 {
    MPoly c00, c10, c01, c11;
    MPoly den;
    bool is_zero() const { return c00.is_zero() && c10.is_zero() && c01.is_zero() && c11.is_zero(); }
};

class FuncRing2 {
public:
    explicit FuncRing2(HyperCurve curve) : c_(std::move(curve)) {}
    const HyperCurve& curve() const { return c_; }
    const TowerPtr& tower() const { return c_.tower; }

    CurveFunc2 zero() const;
    CurveFunc2 konst(const KElem& v) const;
    CurveFunc2 coord(int arg, bool want_y) const; // arg 0 -> (x1,y1); arg 1 -> (x2,y2)
    // inject a one-curve function in the chosen argument
    CurveFunc2 from1(const CurveFunc1& f, int arg) const;

    CurveFunc2 add(const CurveFunc2& a, const CurveFunc2& b) const;
    CurveFunc2 sub(const CurveFunc2& a, const CurveFunc2& b) const;
    CurveFunc2 mul(const CurveFunc2& a, const CurveFunc2& b) const;
    CurveFunc2 neg(const CurveFunc2& a) const;
    CurveFunc2 inv(const CurveFunc2& a) const;
    CurveFunc2 div(const CurveFunc2& a, const CurveFunc2& b) const { return mul(a, inv(b)); }
    CurveFunc2 scale(const CurveFunc2& a, const KElem& v) const;
    CurveFunc2 reduce(const CurveFunc2& a) const;

    bool equal(const CurveFunc2& a, const CurveFunc2& b) const;
    std::optional<KElem> eval(const CurveFunc2& a, const ECPoint& p, const ECPoint& q) const;

private:
    HyperCurve c_;
    MPoly f_of(int arg) const; // f(x_arg) as a bivariate polynomial
};

} // namespace trimap
