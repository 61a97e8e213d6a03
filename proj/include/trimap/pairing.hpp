#pragma once

#include "trimap/curve.hpp"

namespace trimap {

// f with (f) = ell * D as a product of addition records with exponents,
// built by the squaring trick; base is the ell-torsion divisor.
struct MillerFunction {
    std::vector<std::pair<FunctionRecord, int64_t>> parts;
    int64_t ell = 0;
    ReducedDivisor base;
};

MillerFunction miller_function(const HyperCurve& c, const ReducedDivisor& d, int64_t ell);

// a degree-zero divisor presented as a signed sum of reduced divisors
using Presentation = std::vector<std::pair<ReducedDivisor, int>>;

struct MillerEvalParts {
    KElem affine;        // product of affine-part evaluations
    KElem lead;          // product of infinity leads raised to their exponents
    int64_t xa = 0, yb = 0; // residual x^a y^b exponents from the infinity parts
};

// evaluate f at the divisor presented by pres (affine parts exactly; infinity
// parts symbolically per Lemma 9); throws SupportCollision on zero/pole
MillerEvalParts miller_eval_parts(const HyperCurve& c, const MillerFunction& f,
                                  const Presentation& pres);

// e(D1, D2) = f1(D2)/f2(D1) with the leading-coefficient correction at
// infinity; support collisions are handled by replacing representatives with
// equivalent presentations (class unchanged)
KElem weil_pairing(const HyperCurve& c, const ReducedDivisor& d1, const ReducedDivisor& d2,
                   int64_t ell, uint64_t retry_seed = 0x7765696cULL);

struct Parameters {
    TowerPtr tower;
    HyperCurve curve;
    int64_t ell = 0;
    int64_t group_order = 0; // #J(K)
    int64_t cofactor = 0;    // group_order / ell^v
    int ell_valuation = 0;   // v
};

// exhaustive desk-scale search: smallest admissible (q, d, curve, ell) with
// mu_ell in K, ell^2 | #J and two independent ell-torsion points
Parameters find_parameters(const std::vector<int64_t>& qs, const std::vector<int>& ds, int genus,
                           uint64_t seed);

struct TorsionBasis {
    ReducedDivisor alpha, beta;
    KElem zeta; // e(alpha, beta) != 1
};
TorsionBasis torsion_basis(const Parameters& params, uint64_t seed);

// order of zeta as a root of unity (small exhaustive)
int64_t unity_order(const KElem& zeta);

} // namespace trimap
