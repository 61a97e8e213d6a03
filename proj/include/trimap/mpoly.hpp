#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trimap/field.hpp"

namespace trimap {

using Expo = std::vector<uint16_t>;

inline int expo_total(const Expo& e) {
    int s = 0;
    for (auto v : e) s += v;
    return s;
}

// Sparse multivariate polynomial over K with a fixed number of variables.
// Terms are kept in an ordered map so iteration (and hence serialization and
// seeded constructions) is deterministic.
class MPoly {
public:
    MPoly(TowerPtr tw, int nvars) : tw_(std::move(tw)), nvars_(nvars) {}
    static MPoly constant(const TowerPtr& tw, int nvars, const KElem& c);
    static MPoly variable(const TowerPtr& tw, int nvars, int j);
    static MPoly monomial(const TowerPtr& tw, int nvars, const Expo& e, const KElem& c);

    const TowerPtr& tower() const { return tw_; }
    int nvars() const { return nvars_; }
    const std::map<Expo, KElem>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t term_count() const { return t_.size(); }
    int total_degree() const; // -1 for zero
    int degree_in(int var) const;
    // max total degree over a subset of variables
    int degree_in_block(int first, int count) const;
    KElem coeff(const Expo& e) const;
    bool coeffs_in_base() const;

    void add_term(const Expo& e, const KElem& c); // accumulate, drops zeros
    MPoly scaled(const KElem& c) const;
    MPoly frobenius(int64_t i) const; // coefficient-wise

    friend MPoly operator+(const MPoly& a, const MPoly& b);
    friend MPoly operator-(const MPoly& a, const MPoly& b);
    friend MPoly operator*(const MPoly& a, const MPoly& b);
    MPoly operator-() const;
    MPoly& operator+=(const MPoly& b) { return *this = *this + b; }
    MPoly& operator-=(const MPoly& b) { return *this = *this - b; }

    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    KElem eval(const std::vector<KElem>& point) const;

    // substitute variable j by images[j]; images live in a common target space
    static MPoly compose(const MPoly& f, const std::vector<MPoly>& images);

    // rename into a wider variable space: var j -> var map[j]
    MPoly relabel(int new_nvars, const std::vector<int>& map) const;

    std::string str() const;

private:
    TowerPtr tw_;
    int nvars_;
    std::map<Expo, KElem> t_;
};

// Flat representation for fast repeated evaluation of published objects.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const MPoly& p);
    KElem eval(const std::vector<KElem>& point) const;
    bool valid() const { return tw_ != nullptr; }
    size_t term_count() const { return coeffs_.size(); }

private:
    TowerPtr tw_;
    int nvars_ = 0;
    std::vector<int> max_deg_;                  // per variable
    std::vector<std::pair<int, int>> pairs_;    // (var, exp) runs
    std::vector<std::pair<size_t, size_t>> term_spans_; // into pairs_
    std::vector<KElem> coeffs_;
};

} // namespace trimap
