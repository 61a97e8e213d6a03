#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trimap {

// Element of a prime field F_p. Carries its modulus so generic polynomial and
// matrix code can run over F_q, F_ell and (via KElem) extension fields with
// one implementation. Desk-scale moduli only: p < 2^31 so products fit int64.
class Fp {
public:
    Fp() : v_(0), p_(0) {}
    Fp(int64_t v, int64_t p) : p_(p) {
        if (p <= 1) throw std::invalid_argument("Fp: modulus must be > 1");
        v_ = v % p;
        if (v_ < 0) v_ += p;
    }

    int64_t value() const { return v_; }
    int64_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp zero_like() const { return Fp(0, p_); }
    Fp one_like() const { return Fp(1, p_); }

    friend Fp operator+(const Fp& a, const Fp& b) {
        a.check(b);
        int64_t s = a.v_ + b.v_;
        if (s >= a.p_) s -= a.p_;
        return Fp::raw(s, a.p_);
    }
    friend Fp operator-(const Fp& a, const Fp& b) {
        a.check(b);
        int64_t s = a.v_ - b.v_;
        if (s < 0) s += a.p_;
        return Fp::raw(s, a.p_);
    }
    friend Fp operator*(const Fp& a, const Fp& b) {
        a.check(b);
        return Fp::raw((a.v_ * b.v_) % a.p_, a.p_);
    }
    Fp operator-() const { return Fp::raw(v_ == 0 ? 0 : p_ - v_, p_); }

    Fp& operator+=(const Fp& b) { return *this = *this + b; }
    Fp& operator-=(const Fp& b) { return *this = *this - b; }
    Fp& operator*=(const Fp& b) { return *this = *this * b; }

    Fp inverse() const {
        if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
        // extended Euclid
        int64_t a = v_, m = p_, x0 = 0, x1 = 1;
        while (a > 1) {
            int64_t q = a / m;
            int64_t t = m;
            m = a % m;
            a = t;
            t = x0;
            x0 = x1 - q * x0;
            x1 = t;
        }
        if (x1 < 0) x1 += p_;
        return Fp::raw(x1 % p_ == x1 ? x1 : x1 % p_, p_);
    }
    friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inverse(); }

    Fp pow(int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        Fp r = one_like(), base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    friend bool operator==(const Fp& a, const Fp& b) { return a.p_ == b.p_ && a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }
    friend bool operator<(const Fp& a, const Fp& b) { return a.v_ < b.v_; }

    std::string str() const { return std::to_string(v_); }

private:
    static Fp raw(int64_t v, int64_t p) {
        Fp r;
        r.v_ = v;
        r.p_ = p;
        return r;
    }
    void check(const Fp& b) const {
        if (p_ != b.p_) throw std::invalid_argument("Fp: mixed moduli");
    }
    int64_t v_;
    int64_t p_;
};

inline bool is_prime_i64(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace trimap
