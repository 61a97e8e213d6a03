#include "trimap/upoly.hpp"

#include <sstream>

namespace trimap {

UPoly::UPoly(TowerPtr tw, std::vector<KElem> coeffs) : tw_(std::move(tw)), c_(std::move(coeffs)) {
    trim();
}

void UPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

UPoly UPoly::constant(const KElem& c) { return UPoly(c.tower(), {c}); }

UPoly UPoly::x(const TowerPtr& tw) { return UPoly(tw, {tw->zero(), tw->one()}); }

UPoly UPoly::monomial(const TowerPtr& tw, int deg, const KElem& c) {
    std::vector<KElem> v(deg + 1, tw->zero());
    v[deg] = c;
    return UPoly(tw, std::move(v));
}

KElem UPoly::lc() const {
    if (is_zero()) throw std::domain_error("UPoly: lc of zero");
    return c_.back();
}

KElem UPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return tw_->zero();
    return c_[i];
}

UPoly UPoly::monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inverse());
}

KElem UPoly::eval(const KElem& x) const {
    KElem acc = tw_->zero();
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

UPoly UPoly::frobenius(int64_t i) const {
    std::vector<KElem> c = c_;
    for (auto& a : c) a = a.frobenius(i);
    return UPoly(tw_, std::move(c));
}

UPoly UPoly::shift(int k) const {
    if (is_zero()) return *this;
    std::vector<KElem> c(k, tw_->zero());
    c.insert(c.end(), c_.begin(), c_.end());
    return UPoly(tw_, std::move(c));
}

UPoly UPoly::scaled(const KElem& s) const {
    std::vector<KElem> c = c_;
    for (auto& a : c) a = a * s;
    return UPoly(tw_, std::move(c));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<KElem> c(std::max(a.c_.size(), b.c_.size()), a.tw_->zero());
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return UPoly(a.tw_, std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
    std::vector<KElem> c(std::max(a.c_.size(), b.c_.size()), a.tw_->zero());
    for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
    return UPoly(a.tw_, std::move(c));
}

UPoly UPoly::operator-() const {
    std::vector<KElem> c = c_;
    for (auto& x : c) x = -x;
    return UPoly(tw_, std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return UPoly(a.tw_);
    std::vector<KElem> c(a.c_.size() + b.c_.size() - 1, a.tw_->zero());
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(a.tw_, std::move(c));
}

UPolyDivMod divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("UPoly: division by zero");
    const TowerPtr& tw = a.tower();
    std::vector<KElem> r = a.coeffs();
    int db = b.degree();
    KElem lcinv = b.lc().inverse();
    std::vector<KElem> q(std::max<int>(0, static_cast<int>(r.size()) - db), tw->zero());
    for (int i = static_cast<int>(r.size()) - 1; i >= db; --i) {
        if (r[i].is_zero()) continue;
        KElem f = r[i] * lcinv;
        q[i - db] = f;
        for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.coeffs()[j];
    }
    return {UPoly(tw, std::move(q)), UPoly(tw, std::move(r))};
}

UPoly operator%(const UPoly& a, const UPoly& b) { return divmod(a, b).r; }

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = x % y;
        x = y;
        y = r;
    }
    return x.is_zero() ? x : x.monic();
}

XGcd xgcd(const UPoly& a, const UPoly& b) {
    const TowerPtr& tw = a.tower();
    UPoly r0 = a, r1 = b;
    UPoly s0 = UPoly::constant(tw->one()), s1 = UPoly(tw);
    UPoly t0 = UPoly(tw), t1 = UPoly::constant(tw->one());
    while (!r1.is_zero()) {
        auto qr = divmod(r0, r1);
        UPoly r2 = qr.r;
        UPoly s2 = s0 - qr.q * s1;
        UPoly t2 = t0 - qr.q * t1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if (!r0.is_zero()) {
        KElem inv = r0.lc().inverse();
        r0 = r0.scaled(inv);
        s0 = s0.scaled(inv);
        t0 = t0.scaled(inv);
    }
    return {r0, s0, t0};
}

XGcd3 xgcd3(const UPoly& a1, const UPoly& a2, const UPoly& a3) {
    XGcd g12 = xgcd(a1, a2);
    XGcd g = xgcd(g12.g, a3);
    return {g.g, g.s * g12.s, g.s * g12.t, g.t};
}

KElem sym_eval(const UPoly& f, const UPoly& a) {
    const TowerPtr& tw = f.tower();
    if (!a.is_monic()) throw std::invalid_argument("sym_eval: a must be monic");
    int r = a.degree();
    if (r == 0) return tw->one(); // empty product
    if (f.is_zero()) return tw->zero();
    if (r == 1) return f.eval(-a.coeff(0));
    // companion matrix of a
    Mat<KElem> comp(r, Vec<KElem>(r, tw->zero()));
    for (int i = 1; i < r; ++i) comp[i][i - 1] = tw->one();
    for (int i = 0; i < r; ++i) comp[i][r - 1] = -a.coeff(i);
    // f(C) by Horner
    Mat<KElem> acc(r, Vec<KElem>(r, tw->zero()));
    for (int i = f.degree(); i >= 0; --i) {
        if (i != f.degree()) acc = mat_mul(acc, comp);
        for (int j = 0; j < r; ++j) acc[j][j] += f.coeff(i);
    }
    return mat_det(acc);
}

std::string UPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (os.tellp() > 0) os << " + ";
        os << c_[i].str() << "*x^" << i;
    }
    return os.str();
}

} // namespace trimap
