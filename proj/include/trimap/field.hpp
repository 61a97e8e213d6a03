#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "trimap/fp.hpp"
#include "trimap/linalg.hpp"
#include "trimap/rng.hpp"

namespace trimap {

class FieldTower;
using TowerPtr = std::shared_ptr<const FieldTower>;

// Element of K = F_{q^d}, stored as coordinates in the public power basis
// theta = 1, t, ..., t^{d-1}. Immutable value semantics.
class KElem {
public:
    KElem() = default;
    KElem(TowerPtr tw, std::vector<Fp> coords);

    const TowerPtr& tower() const { return tw_; }
    const std::vector<Fp>& coords() const { return c_; }
    bool is_zero() const;
    bool is_one() const;
    // true when the element lies in the base field k
    bool in_base() const;
    // base-field part; throws unless in_base()
    Fp base_value() const;

    KElem zero_like() const;
    KElem one_like() const;

    friend KElem operator+(const KElem& a, const KElem& b);
    friend KElem operator-(const KElem& a, const KElem& b);
    friend KElem operator*(const KElem& a, const KElem& b);
    friend KElem operator/(const KElem& a, const KElem& b);
    KElem operator-() const;
    KElem& operator+=(const KElem& b) { return *this = *this + b; }
    KElem& operator-=(const KElem& b) { return *this = *this - b; }
    KElem& operator*=(const KElem& b) { return *this = *this * b; }

    KElem inverse() const;
    KElem pow(int64_t e) const;
    // x^{q^{i mod d}}
    KElem frobenius(int64_t i) const;
    KElem scaled(const Fp& c) const;

    // degree of the minimal polynomial over k (smallest m>=1 with x^{q^m}=x)
    int min_poly_degree() const;

    friend bool operator==(const KElem& a, const KElem& b);
    friend bool operator!=(const KElem& a, const KElem& b) { return !(a == b); }
    friend bool operator<(const KElem& a, const KElem& b); // lex on coords, for ordered maps

    std::vector<int64_t> serialize() const;
    std::string str() const;

private:
    TowerPtr tw_;
    std::vector<Fp> c_;
};

// K/k with k = F_q, K = F_q[t]/(modulus), modulus monic irreducible of
// degree d found by seeded search. Frobenius matrices are cached.
class FieldTower : public std::enable_shared_from_this<FieldTower> {
public:
    static TowerPtr make(int64_t q, int d, uint64_t seed);
    // construct with an explicit modulus (little-endian, length d+1, monic)
    static TowerPtr make_with_modulus(int64_t q, std::vector<int64_t> modulus);

    int64_t q() const { return q_; }
    int d() const { return d_; }
    int64_t order() const { return order_; } // q^d
    const std::vector<Fp>& modulus() const { return mod_; }

    KElem zero() const;
    KElem one() const;
    KElem gen() const; // t (for d >= 2), else 1
    KElem from_base(int64_t v) const;
    KElem from_coords(const std::vector<int64_t>& coords) const;
    KElem elem(std::vector<Fp> coords) const;
    KElem random_elem(Rng& rng) const;
    KElem random_nonzero(Rng& rng) const;
    // element number i in [0, q^d), base-q digits as theta coords
    KElem elem_by_index(int64_t i) const;
    int64_t index_of(const KElem& x) const;

    Fp fp(int64_t v) const { return Fp(v, q_); }

    // multiplication-by-sigma^i matrix on theta coordinates
    const Mat<Fp>& frob_matrix(int i) const { return frob_[((i % d_) + d_) % d_]; }

    const std::vector<Fp>& theta_power(int k) const { return tpow_[k]; } // t^k mod f, k <= 2d-2

private:
    FieldTower() = default;
    void finish_init();

    int64_t q_ = 0;
    int d_ = 0;
    int64_t order_ = 0;
    std::vector<Fp> mod_;               // monic, length d+1
    std::vector<std::vector<Fp>> tpow_; // t^k mod f for k = 0..2d-2
    std::vector<Mat<Fp>> frob_;
};

// Secret descent basis u with Gamma = (u_j^{sigma_i}) and W = Gamma^{-1}.
struct DescentBasis {
    std::vector<KElem> u;
    Mat<KElem> gamma; // gamma[i][j] = u[j]^{q^i}
    Mat<KElem> w;     // gamma * w = I
    Mat<Fp> theta_from_u;   // column j = theta coords of u_j
    Mat<Fp> u_from_theta;   // inverse

    static DescentBasis from_elements(std::vector<KElem> u);
    // u-coordinates of x (exact, over k); requires u to span its tower
    std::vector<Fp> coords_of(const KElem& x) const;
    KElem combine(const std::vector<Fp>& coords) const; // <coords, u>
    int d() const { return static_cast<int>(u.size()); }
};

DescentBasis random_descent_basis(const TowerPtr& tower, uint64_t seed);
DescentBasis theta_basis(const TowerPtr& tower);

// <coords in `from`> -> coords in `to`, as elements of K
std::vector<Fp> basis_convert(const std::vector<Fp>& coords, const DescentBasis& from,
                              const DescentBasis& to);

// Gamma_a over k with a*u_i = sum_j gamma_ij u_j
Mat<Fp> scalar_structure_matrix(const KElem& a, const DescentBasis& basis);

// square roots in K (Tonelli-Shanks); nullopt for non-residues
std::optional<KElem> sqrt_in_field(const KElem& x);
bool is_square(const KElem& x);

// root of a polynomial (coefficients in K, little-endian) found by scanning K;
// used for embedding small fields into extensions
std::optional<KElem> find_root_by_scan(const TowerPtr& tw, const std::vector<KElem>& poly);

// embedding of K into a larger tower K2 with [K2:k] a multiple of [K:k]:
// sends the generator of K to `root` (a root of K's modulus in K2)
KElem embed(const KElem& x, const TowerPtr& big, const KElem& root);

} // namespace trimap
