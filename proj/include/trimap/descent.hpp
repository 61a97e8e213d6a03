#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trimap/mpoly.hpp"

namespace trimap {

// Hatted points and variables: original variable j expands to the block of d
// variables with flat indices j*d + r, r = 0..d-1. The block association is
// public; the basis u behind delta/rho is the secret.
struct DescentContext {
    TowerPtr tower;
    DescentBasis basis;
    std::string label;

    int d() const { return basis.d(); }
};

DescentContext make_context(const TowerPtr& tower, uint64_t seed, std::string label);

// d-tuple over k representing the descent of a polynomial over K
struct DescentTuple {
    std::vector<MPoly> polys; // d entries, coefficients in the base field
    std::string ctx_label;
    int orig_vars = 0;
};

// <xhat, u^{sigma_i}>
KElem delta(const DescentContext& ctx, const std::vector<KElem>& xhat, int i = 0);
// (delta^{sigma_i}(xhat))_i
std::vector<KElem> rho(const DescentContext& ctx, const std::vector<KElem>& xhat);
std::vector<KElem> rho_inv(const DescentContext& ctx, const std::vector<KElem>& y);

// linear forms delta^{sigma_i} applied blockwise to a full hatted point
std::vector<KElem> delta_point(const DescentContext& ctx, const std::vector<KElem>& hat, int i);

// hatted point whose rho-stack is (sigma_i(stack[i]))_i; stack entries are
// V(K)-points of n coordinates (conjugates are applied here)
std::vector<KElem> hat_from_stack(const DescentContext& ctx,
                                  const std::vector<std::vector<KElem>>& stack);
// lambda transport: entry i is sigma_{-i}(delta^{sigma_i}(hat)) in V(K)
std::vector<std::vector<KElem>> stack_from_hat(const DescentContext& ctx,
                                               const std::vector<KElem>& hat, int orig_vars);

// the full symbolic descent of F in K[x_1..x_n]
DescentTuple descend_polynomial(const DescentContext& ctx, const MPoly& F);

// the K-global descent F^{sigma_i} o delta^{sigma_i} as a polynomial over K
// in the hatted variables
MPoly k_global_descent(const DescentContext& ctx, const MPoly& F, int i);

// hatted images of the original variables under delta^{sigma_i}
std::vector<MPoly> delta_images(const DescentContext& ctx, int orig_vars, int i);

// concatenated components of the descents of all generators
std::vector<MPoly> descend_variety(const DescentContext& ctx, const std::vector<MPoly>& gens);

struct DescentPointReport {
    bool is_descent = false;
    std::vector<std::vector<KElem>> leaked; // nonzero xhat - xhat^{sigma_i} with <.,u> = 0
};
DescentPointReport is_descent_point(const DescentContext& ctx, const std::vector<KElem>& hat);

// original monomial of a hatted exponent vector: block sums
Expo block_sums(const Expo& hatted, int orig_vars, int d);

// hat of a single monomial a*m (m an exponent vector over the originals)
DescentTuple descend_monomial(const DescentContext& ctx, int orig_vars, const Expo& m,
                              const KElem& a);

// evaluate a d-tuple at a hatted point
std::vector<KElem> eval_tuple(const std::vector<MPoly>& tuple, const std::vector<KElem>& hat);

// apply a matrix over k to a tuple of polynomials (blockwise scramble)
std::vector<MPoly> apply_matrix_to_tuple(const Mat<Fp>& m, const std::vector<MPoly>& tuple);

} // namespace trimap
