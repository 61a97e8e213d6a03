#pragma once

#include <optional>
#include <set>

#include "trimap/descent.hpp"

namespace trimap {

// ---- monomial supports and linear analysis (2.4) ----

struct MonomialSet {
    int orig_vars = 0;
    std::set<Expo> monomials; // exponent vectors over the original variables
    // union of the combinatorial supports of the descended monomials (public:
    // depends only on the block structure, not on the secret basis)
    std::set<Expo> hatted(int d) const;
};

struct SampleSet {
    std::vector<std::vector<KElem>> points;   // points (hatted or plain)
    std::vector<KElem> values;                // optional paired function values
};

struct SupportRank {
    size_t ell_s = 0;   // dim of vanishing space
    size_t omega_s = 0; // rank of the evaluation matrix
};
// over the field of the samples; ell_S + omega_S = |S| by construction
SupportRank support_rank(const SampleSet& a, const std::vector<Expo>& support,
                         const TowerPtr& tw);

// ---- detectors (Props 3-4) ----

enum class DescentMode { Global, KGlobal };

struct DescentWitness {
    Expo monomial;   // over the original variables
    KElem coeff;     // the a with block = hat(a*m) / a*<m-hat, u^{sigma_j}>
    int conjugate = 0;
};

// Prop 3: does the tuple contain a global descent? trusted side (needs u).
std::optional<DescentWitness> contains_global_descent(const DescentContext& ctx,
                                                      const std::vector<MPoly>& tuple,
                                                      int orig_vars);
// Prop 4: does the K-polynomial contain a K-global descent for u^{sigma_i}?
std::optional<DescentWitness> contains_k_global_descent(const DescentContext& ctx, const MPoly& g,
                                                        int orig_vars, int conjugate);

// ---- basis recovery (Props 1-2) ----

struct RecoveredBasis {
    bool applicable = false;
    std::vector<KElem> u;          // Prop 1 path: full basis (up to stated ambiguity)
    std::vector<KElem> ratios;     // Prop 2 path: u_i / u_0
};

// Prop 1: from the public tuple of a polynomial with a vital term
RecoveredBasis uncover_basis_from_tuple(const std::vector<MPoly>& tuple, const MPoly& known_f,
                                        const TowerPtr& tw);
// Prop 2: from a K-global descent of a non-constant term
RecoveredBasis uncover_basis_from_k_global(const MPoly& g, int orig_vars, int d);

// ---- safe specification (Props 6-10) ----

// Prop 6: scrambled zero-set presentation of V-hat
std::vector<std::vector<MPoly>> specify_variety(const DescentContext& ctx,
                                                const std::vector<MPoly>& gens, uint64_t seed);

// 2.2 helper: a polynomial of I(V) containing the monomial m (b' * (m/m1) * G)
std::optional<MPoly> vanishing_with_monomial(const std::vector<MPoly>& gens, const Expo& m,
                                             Rng& rng);

// Prop 7: H' = H mod I(V-hat) with A^t H' detector-clean
std::vector<MPoly> sanitize_tuple(const DescentContext& ctx, const std::vector<MPoly>& tuple,
                                  int orig_vars, const std::vector<MPoly>& gens,
                                  const std::vector<Mat<Fp>>& twists, uint64_t seed);

// Prop 8 output: theta-expressed single-conjugate quotient specification
struct ProperSpecification {
    int site = 0;                 // conjugate index i
    int orig_vars = 0;
    std::vector<MPoly> num;       // d polys over k in the hatted variables
    std::vector<MPoly> den;
    bool blinded = false;         // the constant multiple is secret
    // evaluates <num(X),theta>/<den(X),theta>
    KElem eval(const std::vector<KElem>& hat) const; // throws SupportCollision on 0-den
    std::optional<KElem> try_eval(const std::vector<KElem>& hat) const;
};

// specify a * phi^{sigma_i} o delta^{sigma_i} for phi = F/G on V; a = 1 gives
// value-exact specifications (pairing program); random secret a blinds values
ProperSpecification specify_function(const DescentContext& ctx, const MPoly& F, const MPoly& G,
                                     const KElem& a, int conjugate,
                                     const std::vector<MPoly>& gens, uint64_t seed);

// Prop 10: mixed specification sum_i N_i(x-hat) N'_i(y-hat) for F(x, y) on
// V x V' with two descent bases; x block has nx original variables
struct MixedSpecification {
    int site = 0;
    int nx = 0, ny = 0;
    // factor pairs: theta-tuples w.r.t. the x-context and the y-context
    std::vector<std::pair<std::vector<MPoly>, std::vector<MPoly>>> factors;
    KElem eval(const std::vector<KElem>& xhat, const std::vector<KElem>& yhat) const;
};

MixedSpecification specify_mixed(const DescentContext& ctx_x, const DescentContext& ctx_y,
                                 const MPoly& F, int nx, int conjugate,
                                 const std::vector<MPoly>& gens_x,
                                 const std::vector<MPoly>& gens_y, uint64_t seed);

// ---- linear attacks (Lemmas 5 and 7) ----

struct LinearAttackResult {
    bool success = false;
    MPoly recovered_k_poly;            // lemma5: F o delta over the hatted support
    std::vector<MPoly> recovered_tuple; // lemma7: the recovered F-hat
    LinearAttackResult() : recovered_k_poly(TowerPtr{}, 0) {}
};

// lemma5 mode: needs paired values phi(A); recovers F o delta when ell_S = 0
LinearAttackResult linear_attack_lemma5(const SampleSet& a, const MonomialSet& s,
                                        const TowerPtr& tw, int d);
// lemma7 mode: needs the index of the linear variable; recovers the basis of
// the null space normalized per the unit-coefficient conditions when ell_S = d
LinearAttackResult linear_attack_lemma7(const SampleSet& a, const MonomialSet& s, int linear_var,
                                        const TowerPtr& tw, int d);

// ---- safety (2.6) ----

struct SafetyReport {
    bool safe = false;
    MPoly witness; // nonzero element of I(V) with support inside S
};
// searches multiples m' * G_j of the defining polynomials inside the span of S
SafetyReport safety_check(const std::vector<MPoly>& gens, const std::set<Expo>& support,
                          int degree_slack = 2);
SafetyReport safety_check_poly(const std::vector<MPoly>& gens, const MPoly& f,
                               int degree_slack = 2);

std::set<Expo> support_of(const MPoly& f);
// support of F viewed as polynomial in one block of variables
std::set<Expo> block_support(const MPoly& f, int block_first, int block_len);

} // namespace trimap
