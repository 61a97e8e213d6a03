#include "trimap/descent.hpp"

namespace trimap {

DescentContext make_context(const TowerPtr& tower, uint64_t seed, std::string label) {
    return DescentContext{tower, random_descent_basis(tower, seed), std::move(label)};
}

KElem delta(const DescentContext& ctx, const std::vector<KElem>& xhat, int i) {
    KElem acc = ctx.tower->zero();
    for (int j = 0; j < ctx.d(); ++j) acc += xhat[j] * ctx.basis.u[j].frobenius(i);
    return acc;
}

std::vector<KElem> rho(const DescentContext& ctx, const std::vector<KElem>& xhat) {
    std::vector<KElem> out;
    out.reserve(ctx.d());
    for (int i = 0; i < ctx.d(); ++i) out.push_back(delta(ctx, xhat, i));
    return out;
}

std::vector<KElem> rho_inv(const DescentContext& ctx, const std::vector<KElem>& y) {
    return mat_vec(ctx.basis.w, y);
}

std::vector<KElem> delta_point(const DescentContext& ctx, const std::vector<KElem>& hat, int i) {
    int d = ctx.d();
    int n = static_cast<int>(hat.size()) / d;
    std::vector<KElem> out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        KElem acc = ctx.tower->zero();
        for (int r = 0; r < d; ++r) acc += hat[j * d + r] * ctx.basis.u[r].frobenius(i);
        out.push_back(acc);
    }
    return out;
}

std::vector<KElem> hat_from_stack(const DescentContext& ctx,
                                  const std::vector<std::vector<KElem>>& stack) {
    int d = ctx.d();
    int n = static_cast<int>(stack[0].size());
    std::vector<KElem> hat(n * d, ctx.tower->zero());
    for (int j = 0; j < n; ++j) {
        std::vector<KElem> col;
        col.reserve(d);
        for (int i = 0; i < d; ++i) col.push_back(stack[i][j].frobenius(i));
        auto block = rho_inv(ctx, col);
        for (int r = 0; r < d; ++r) hat[j * d + r] = block[r];
    }
    return hat;
}

std::vector<std::vector<KElem>> stack_from_hat(const DescentContext& ctx,
                                               const std::vector<KElem>& hat, int orig_vars) {
    std::vector<std::vector<KElem>> stack;
    stack.reserve(ctx.d());
    for (int i = 0; i < ctx.d(); ++i) {
        auto pt = delta_point(ctx, hat, i);
        for (auto& c : pt) c = c.frobenius(-i);
        (void)orig_vars;
        stack.push_back(std::move(pt));
    }
    return stack;
}

std::vector<MPoly> delta_images(const DescentContext& ctx, int orig_vars, int i) {
    int d = ctx.d();
    std::vector<MPoly> images;
    images.reserve(orig_vars);
    for (int j = 0; j < orig_vars; ++j) {
        MPoly img(ctx.tower, orig_vars * d);
        for (int r = 0; r < d; ++r) {
            Expo e(orig_vars * d, 0);
            e[j * d + r] = 1;
            img.add_term(e, ctx.basis.u[r].frobenius(i));
        }
        images.push_back(std::move(img));
    }
    return images;
}

DescentTuple descend_polynomial(const DescentContext& ctx, const MPoly& F) {
    int n = F.nvars();
    int d = ctx.d();
    MPoly G = MPoly::compose(F, delta_images(ctx, n, 0));
    DescentTuple out;
    out.ctx_label = ctx.label;
    out.orig_vars = n;
    out.polys.assign(d, MPoly(ctx.tower, n * d));
    for (auto& [e, c] : G.terms()) {
        auto coords = ctx.basis.coords_of(c);
        for (int i = 0; i < d; ++i)
            out.polys[i].add_term(e, ctx.tower->from_base(coords[i].value()));
    }
    return out;
}

MPoly k_global_descent(const DescentContext& ctx, const MPoly& F, int i) {
    return MPoly::compose(F.frobenius(i), delta_images(ctx, F.nvars(), i));
}

std::vector<MPoly> descend_variety(const DescentContext& ctx, const std::vector<MPoly>& gens) {
    std::vector<MPoly> out;
    for (auto& g : gens) {
        auto t = descend_polynomial(ctx, g);
        for (auto& p : t.polys) out.push_back(std::move(p));
    }
    return out;
}

DescentPointReport is_descent_point(const DescentContext& ctx, const std::vector<KElem>& hat) {
    DescentPointReport rep;
    int d = ctx.d();
    int n = static_cast<int>(hat.size()) / d;
    // descent point iff rho-stack is a Frobenius orbit blockwise:
    // delta^{sigma_i}(block) = (delta(block))^{sigma_i} for all blocks, i
    rep.is_descent = true;
    for (int j = 0; j < n && rep.is_descent; ++j) {
        std::vector<KElem> block(hat.begin() + j * d, hat.begin() + (j + 1) * d);
        KElem y = delta(ctx, block, 0);
        for (int i = 1; i < d; ++i) {
            if (!(delta(ctx, block, i) == y.frobenius(i))) {
                rep.is_descent = false;
                break;
            }
        }
    }
    if (!rep.is_descent) return rep;
    // Lemma 1 leakage: conjugating <xhat, u^{sigma_i}> = <xhat^{sigma_i}, u^{sigma_i}>
    // back by sigma^{-i} gives <xhat^{sigma^{-i}} - xhat, u> = 0
    for (int j = 0; j < n; ++j) {
        for (int i = 1; i < d; ++i) {
            std::vector<KElem> diff;
            diff.reserve(d);
            bool nonzero = false;
            for (int r = 0; r < d; ++r) {
                KElem v = hat[j * d + r].frobenius(-i) - hat[j * d + r];
                if (!v.is_zero()) nonzero = true;
                diff.push_back(v);
            }
            if (nonzero) rep.leaked.push_back(std::move(diff));
        }
    }
    return rep;
}

Expo block_sums(const Expo& hatted, int orig_vars, int d) {
    Expo m(orig_vars, 0);
    for (int j = 0; j < orig_vars; ++j)
        for (int r = 0; r < d; ++r) m[j] = static_cast<uint16_t>(m[j] + hatted[j * d + r]);
    return m;
}

DescentTuple descend_monomial(const DescentContext& ctx, int orig_vars, const Expo& m,
                              const KElem& a) {
    MPoly F = MPoly::monomial(ctx.tower, orig_vars, m, a);
    return descend_polynomial(ctx, F);
}

std::vector<KElem> eval_tuple(const std::vector<MPoly>& tuple, const std::vector<KElem>& hat) {
    std::vector<KElem> out;
    out.reserve(tuple.size());
    for (auto& p : tuple) out.push_back(p.eval(hat));
    return out;
}

std::vector<MPoly> apply_matrix_to_tuple(const Mat<Fp>& m, const std::vector<MPoly>& tuple) {
    const TowerPtr& tw = tuple[0].tower();
    std::vector<MPoly> out(m.size(), MPoly(tw, tuple[0].nvars()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < tuple.size(); ++j) {
            if (m[i][j].is_zero()) continue;
            out[i] += tuple[j].scaled(tw->from_base(m[i][j].value()));
        }
    return out;
}

} // namespace trimap
