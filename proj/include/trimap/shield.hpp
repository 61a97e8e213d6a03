#pragma once

#include <array>

#include "trimap/curve.hpp"
#include "trimap/funcring.hpp"
#include "trimap/mpoly.hpp"

namespace trimap {

// Random birational transform iota = mu o lambda of affine n-space into
// (n+1)-space: lambda adjoins x_{n+1} cut out by a random quadric
// sum a_ij x_i x_j + x_{n+1} sum b_i x_i = 0, mu is a random invertible
// linear map. L_i are the rows of mu^{-1}.
struct QuadricShield {
    int n = 0;
    Mat<KElem> a;          // a[i][j], i < j used
    std::vector<KElem> b;  // b[i]
    Mat<KElem> mu;         // (n+1) x (n+1), invertible
    Mat<KElem> mu_inv;     // rows are the linear forms L_1..L_{n+1}

    // L_i as polynomials in the n+1 target variables
    std::vector<MPoly> l_forms() const;
    // the quadric relation R' in target coordinates (vanishes on the image)
    MPoly quadric_relation() const;
    // forward point transport; nullopt on the exceptional locus sum b_i x_i = 0
    std::optional<std::vector<KElem>> push(const std::vector<KElem>& x) const;
    // inverse transport (L_1..L_n)
    std::vector<KElem> pull(const std::vector<KElem>& z) const;
    // compose a polynomial in the original n variables with the L's
    MPoly compose(const MPoly& f) const;
};

QuadricShield random_quadric_shield(const TowerPtr& tw, int n, Rng& rng);

// support contains every monomial of total degree `deg` within the block
bool dense_in_degree(const MPoly& p, int block_first, int block_len, int deg);
// some degree >= 2 is fully covered
bool dense_somewhere(const MPoly& p, int block_first, int block_len);

struct ShieldedSystem {
    QuadricShield iota;
    std::vector<MPoly> vprime_gens;                  // F_i o L plus R'
    std::vector<std::pair<MPoly, MPoly>> functions;  // transformed F/G pairs
};

// 2.5 for a general variety: retries seeded draws until every tracked output
// polynomial is dense in some degree >= 2
ShieldedSystem birational_shield(const std::vector<MPoly>& gens,
                                 const std::vector<std::pair<MPoly, MPoly>>& functions,
                                 uint64_t seed, int retry_budget = 64);

// numerator/denominator representative in the shielded coordinates
struct RationalRep {
    MPoly num, den;
};

// The twice-shielded elliptic system: E -> E1 ((alpha x^2/(beta x + gamma w))^2
// = f(x)) -> E2 (quadric shield), with the seven tracked rational functions.
struct EllipticShield {
    HyperCurve e;
    KElem alpha, beta, gamma;
    QuadricShield quad;             // n = 2
    std::vector<MPoly> e2_gens;     // defining polynomials of E2 (3 variables)
    std::array<RationalRep, 3> add_maps; // m2 coordinates, variables (z, z'), 6 vars
    std::array<RationalRep, 3> dbl_maps; // tau2 coordinates, 3 vars
    std::array<RationalRep, 3> neg_maps; // negation coordinates, 3 vars
    RationalRep h_func;                  // phi(z, z') = h_{D_z}(z'), 6 vars

    // point transports between E and E2 (trusted side only)
    std::optional<std::vector<KElem>> to_e2(const ECPoint& p) const;
    std::optional<ECPoint> from_e2(const std::vector<KElem>& z) const;
};

// builds the system; throws on retry exhaustion
EllipticShield build_elliptic_shield(const HyperCurve& e, uint64_t seed);

// evaluate a representative at a point tuple; nullopt when the denominator
// vanishes (site violation or exceptional locus)
std::optional<KElem> rep_eval(const RationalRep& r, const std::vector<KElem>& at);

} // namespace trimap
