#include "trimap/spec.hpp"

#include "trimap/curve.hpp"

#include <algorithm>
#include <functional>

namespace trimap {

namespace {

Mat<Fp> random_gl(const TowerPtr& tw, int d, Rng& rng) {
    for (;;) {
        Mat<Fp> m(d, Vec<Fp>(d, tw->fp(0)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m[i][j] = tw->fp(rng.below_i(tw->q()));
        if (!mat_det(m).is_zero()) return m;
    }
}

// Gamma_{theta,i} over k with u^{sigma_i} = Gamma_{theta,i} theta (rows are
// theta-coordinates of the conjugated basis elements)
Mat<Fp> gamma_theta(const DescentContext& ctx, int i) {
    int d = ctx.d();
    const TowerPtr& tw = ctx.tower;
    Mat<Fp> g(d, Vec<Fp>(d, tw->fp(0)));
    for (int j = 0; j < d; ++j) {
        KElem cj = ctx.basis.u[j].frobenius(i);
        for (int k = 0; k < d; ++k) g[j][k] = cj.coords()[k];
    }
    return g;
}

// all compositions of e into d parts, appended into out at block j
void hat_expansions(const Expo& m, int d, std::set<Expo>& out) {
    int n = static_cast<int>(m.size());
    Expo cur(n * d, 0);
    std::function<void(int)> per_var = [&](int j) {
        if (j == n) {
            out.insert(cur);
            return;
        }
        std::function<void(int, int)> split = [&](int r, int left) {
            if (r == d - 1) {
                cur[j * d + r] = static_cast<uint16_t>(left);
                per_var(j + 1);
                cur[j * d + r] = 0;
                return;
            }
            for (int v = 0; v <= left; ++v) {
                cur[j * d + r] = static_cast<uint16_t>(v);
                split(r + 1, left - v);
            }
            cur[j * d + r] = 0;
        };
        split(0, m[j]);
    };
    per_var(0);
}

} // namespace

std::set<Expo> MonomialSet::hatted(int d) const {
    std::set<Expo> out;
    for (auto& m : monomials) hat_expansions(m, d, out);
    return out;
}

SupportRank support_rank(const SampleSet& a, const std::vector<Expo>& support,
                         const TowerPtr& tw) {
    SupportRank out;
    if (support.empty()) return out;
    Mat<KElem> rows;
    for (auto& pt : a.points) {
        Vec<KElem> row;
        row.reserve(support.size());
        for (auto& e : support) {
            KElem v = tw->one();
            for (size_t i = 0; i < e.size(); ++i)
                for (int k = 0; k < e[i]; ++k) v = v * pt[i];
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    out.omega_s = rows.empty() ? 0 : mat_rank(rows);
    out.ell_s = support.size() - out.omega_s;
    return out;
}

std::set<Expo> support_of(const MPoly& f) {
    std::set<Expo> s;
    for (auto& [e, c] : f.terms()) s.insert(e);
    return s;
}

std::set<Expo> block_support(const MPoly& f, int block_first, int block_len) {
    std::set<Expo> s;
    for (auto& [e, c] : f.terms())
        s.insert(Expo(e.begin() + block_first, e.begin() + block_first + block_len));
    return s;
}

// ---------------- detectors ----------------

std::optional<DescentWitness> contains_global_descent(const DescentContext& ctx,
                                                      const std::vector<MPoly>& tuple,
                                                      int orig_vars) {
    const TowerPtr& tw = ctx.tower;
    int d = ctx.d();
    // group hatted support by original monomial
    std::set<Expo> blocks;
    for (auto& p : tuple)
        for (auto& [e, c] : p.terms()) blocks.insert(block_sums(e, orig_vars, d));
    for (auto& m : blocks) {
        // basis images hat(theta_k * m); solve sum_k c_k * images == block
        std::vector<DescentTuple> images;
        for (int k = 0; k < d; ++k) {
            std::vector<Fp> coords(d, tw->fp(0));
            coords[k] = tw->fp(1);
            images.push_back(descend_monomial(ctx, orig_vars, m, tw->elem(coords)));
        }
        // collect equation rows over F_q
        std::set<Expo> sup;
        for (auto& img : images)
            for (auto& p : img.polys)
                for (auto& [e, c] : p.terms()) sup.insert(e);
        for (auto& p : tuple)
            for (auto& [e, c] : p.terms())
                if (block_sums(e, orig_vars, d) == m) sup.insert(e);
        Mat<Fp> rows;
        Vec<Fp> rhs;
        for (int comp = 0; comp < d; ++comp) {
            for (auto& e : sup) {
                Vec<Fp> row;
                for (int k = 0; k < d; ++k) {
                    KElem c = images[k].polys[comp].coeff(e);
                    row.push_back(c.is_zero() ? tw->fp(0) : c.base_value());
                }
                KElem t = tuple[comp].coeff(e);
                rows.push_back(std::move(row));
                rhs.push_back(t.is_zero() ? tw->fp(0) : t.base_value());
            }
        }
        auto sol = solve_linear(rows, rhs);
        if (!sol) continue;
        std::vector<Fp> coords = *sol;
        KElem a = tw->elem(coords);
        if (a.is_zero()) continue; // zero-block; not a witness
        return DescentWitness{m, a, 0};
    }
    return std::nullopt;
}

std::optional<DescentWitness> contains_k_global_descent(const DescentContext& ctx, const MPoly& g,
                                                        int orig_vars, int conjugate) {
    const TowerPtr& tw = ctx.tower;
    int d = ctx.d();
    std::set<Expo> blocks;
    for (auto& [e, c] : g.terms()) blocks.insert(block_sums(e, orig_vars, d));
    for (auto& m : blocks) {
        MPoly mono = MPoly::monomial(tw, orig_vars, m, tw->one());
        MPoly ref = k_global_descent(ctx, mono, conjugate);
        // want g-block == a * ref for some a in K
        MPoly block(tw, orig_vars * d);
        for (auto& [e, c] : g.terms())
            if (block_sums(e, orig_vars, d) == m) block.add_term(e, c);
        if (ref.is_zero()) continue;
        // pick a pivot
        auto it = ref.terms().begin();
        KElem a = block.coeff(it->first) / it->second;
        if (a.is_zero()) continue;
        if (block == ref.scaled(a)) return DescentWitness{m, a, conjugate};
    }
    return std::nullopt;
}

// ---------------- basis recovery ----------------

namespace {

// minimal polynomial of a matrix over F_q via iterated powers (desk scale)
std::vector<Fp> matrix_min_poly(const Mat<Fp>& c, const TowerPtr& tw) {
    int d = static_cast<int>(c.size());
    int dim = d * d;
    std::vector<Mat<Fp>> pows{mat_identity<Fp>(d, tw->fp(0))};
    for (int k = 1; k <= d; ++k) pows.push_back(mat_mul(pows.back(), c));
    for (int deg = 1; deg <= d; ++deg) {
        // solve x^deg = sum_{j<deg} c_j x^j
        Mat<Fp> rows(dim, Vec<Fp>(deg, tw->fp(0)));
        Vec<Fp> rhs(dim, tw->fp(0));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                for (int k = 0; k < deg; ++k) rows[i * d + j][k] = pows[k][i][j];
                rhs[i * d + j] = pows[deg][i][j];
            }
        auto sol = solve_linear(rows, rhs);
        if (sol) {
            std::vector<Fp> mp;
            for (auto& v : *sol) mp.push_back(-v);
            mp.push_back(tw->fp(1)); // monic
            return mp;
        }
    }
    throw std::logic_error("matrix_min_poly: no relation found");
}

std::vector<KElem> roots_in_k_field(const std::vector<Fp>& poly, const TowerPtr& tw) {
    std::vector<KElem> roots;
    for (int64_t i = 0; i < tw->order(); ++i) {
        KElem x = tw->elem_by_index(i);
        KElem acc = tw->zero();
        for (size_t j = poly.size(); j-- > 0;) acc = acc * x + tw->from_base(poly[j].value());
        if (acc.is_zero()) roots.push_back(x);
    }
    return roots;
}

// substitute: slot `free_var` keeps its hatted block variables, every other
// original variable j gets the unit vector e_{unit[j]} (hatted coords)
std::vector<MPoly> partial_unit_eval(const std::vector<MPoly>& tuple, int orig_vars, int d,
                                     int free_var, const std::vector<int>& unit) {
    const TowerPtr& tw = tuple[0].tower();
    std::vector<MPoly> images;
    for (int j = 0; j < orig_vars; ++j) {
        for (int r = 0; r < d; ++r) {
            MPoly img(tw, d);
            if (j == free_var) {
                Expo e(d, 0);
                e[r] = 1;
                img.add_term(e, tw->one());
            } else if (unit[j] == r) {
                img.add_term(Expo(d, 0), tw->one());
            }
            images.push_back(std::move(img));
        }
    }
    std::vector<MPoly> out;
    for (auto& p : tuple) out.push_back(MPoly::compose(p, images));
    return out;
}

} // namespace

RecoveredBasis uncover_basis_from_tuple(const std::vector<MPoly>& tuple, const MPoly& known_f,
                                        const TowerPtr& tw) {
    RecoveredBasis out;
    int d = static_cast<int>(tuple.size());
    int orig_vars = known_f.nvars();
    // find a vital term: degree > 1 with distinct variables, or a*x_i with
    // K = k(a)
    std::optional<Expo> vital;
    bool vital_deg1 = false;
    KElem vital_coeff = tw->zero();
    for (auto& [e, c] : known_f.terms()) {
        int deg = expo_total(e);
        bool multilinear = true;
        for (auto v : e)
            if (v > 1) multilinear = false;
        if (deg > 1 && multilinear) {
            vital = e;
            vital_coeff = c;
        } else if (deg == 1 && c.min_poly_degree() == d && !vital) {
            vital = e;
            vital_deg1 = true;
            vital_coeff = c;
        }
    }
    if (!vital) return out;
    // extract the vital block of the tuple
    std::vector<MPoly> block(d, MPoly(tw, orig_vars * d));
    for (int i = 0; i < d; ++i)
        for (auto& [e, c] : tuple[i].terms())
            if (block_sums(e, orig_vars, d) == *vital) block[i].add_term(e, c);
    // pick the free variable = first variable of the monomial, substitute the
    // first unit vector everywhere else
    int free_var = 0;
    while ((*vital)[free_var] == 0) ++free_var;
    std::vector<int> unit(orig_vars, 0);
    auto lin = partial_unit_eval(block, orig_vars, d, free_var, unit);
    // C[i][j]: component i of the linear form at x-hat = e_j; multiplication
    // matrix of b in the u-basis
    Mat<Fp> c(d, Vec<Fp>(d, tw->fp(0)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Expo e(d, 0);
            e[j] = 1;
            KElem v = lin[i].coeff(e);
            c[i][j] = v.is_zero() ? tw->fp(0) : v.base_value();
        }
    auto mp = matrix_min_poly(c, tw);
    if (static_cast<int>(mp.size()) - 1 != d) return out; // b does not generate K
    std::vector<KElem> b_candidates;
    if (vital_deg1) {
        b_candidates.push_back(vital_coeff); // b = a is known exactly
    } else {
        b_candidates = roots_in_k_field(mp, tw);
    }
    for (auto& b0 : b_candidates) {
        // intertwiner: v with sum_i C[i][j] v_i = b0 v_j
        Mat<KElem> sys(d, Vec<KElem>(d, tw->zero()));
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) {
                sys[j][i] = tw->from_base(c[i][j].value());
                if (i == j) sys[j][i] -= b0;
            }
        auto kern = null_space(sys);
        if (kern.empty()) continue;
        std::vector<KElem> v = kern[0];
        // resolve the scalar: try kappa with hat_{kappa v}(F) == tuple
        // from a degree-r block: tuple-block = kappa^{r-1} * hat_v(block)
        for (int64_t kidx = 1; kidx < tw->order(); ++kidx) {
            KElem kappa = tw->elem_by_index(kidx);
            if (kappa.is_zero()) continue;
            std::vector<KElem> cand;
            for (auto& vi : v) cand.push_back(vi * kappa);
            DescentBasis db{};
            try {
                db = DescentBasis::from_elements(cand);
            } catch (const std::invalid_argument&) {
                break; // v not a basis; next root
            }
            DescentContext cctx{tw, db, "recovered"};
            auto rehat = descend_polynomial(cctx, known_f);
            bool match = true;
            for (int i = 0; i < d && match; ++i)
                if (!(rehat.polys[i] == tuple[i])) match = false;
            if (match) {
                out.applicable = true;
                out.u = cand;
                return out;
            }
            if (vital_deg1 && kidx > 1) break; // scalar not recoverable from ax_i alone
        }
        if (vital_deg1 && !out.applicable) {
            // return the kappa = 1 representative: correct up to K* scaling
            std::vector<KElem> cand = v;
            try {
                DescentBasis db = DescentBasis::from_elements(cand);
                out.applicable = true;
                out.u = cand;
                return out;
            } catch (const std::invalid_argument&) {
            }
        }
    }
    return out;
}

RecoveredBasis uncover_basis_from_k_global(const MPoly& g, int orig_vars, int d) {
    RecoveredBasis out;
    const TowerPtr& tw = g.tower();
    // choose a block of a non-constant monomial
    std::map<Expo, MPoly> blocks;
    for (auto& [e, c] : g.terms()) {
        Expo m = block_sums(e, orig_vars, d);
        auto it = blocks.try_emplace(m, MPoly(tw, orig_vars * d)).first;
        it->second.add_term(e, c);
    }
    for (auto& [m, block] : blocks) {
        if (expo_total(m) < 1) continue;
        int free_var = 0;
        while (m[free_var] == 0) ++free_var;
        int k = m[free_var];
        std::vector<int> unit(orig_vars, 0);
        auto lin = partial_unit_eval({block}, orig_vars, d, free_var, unit);
        // h(x-hat) = c * delta(x-hat)^k; evaluate at e_j, e_0, e_j + e_0
        auto eval_at = [&](const std::vector<KElem>& x) { return lin[0].eval(x); };
        std::vector<KElem> e0(d, tw->zero());
        e0[0] = tw->one();
        KElem b = eval_at(e0); // c * u_0^k
        if (b.is_zero()) continue;
        out.ratios.assign(d, tw->zero());
        out.ratios[0] = tw->one();
        bool ok = true;
        for (int j = 1; j < d && ok; ++j) {
            std::vector<KElem> ej(d, tw->zero());
            ej[j] = tw->one();
            KElem aj = eval_at(ej); // c * u_j^k
            if (k == 1) {
                out.ratios[j] = aj / b;
                continue;
            }
            std::vector<KElem> both = ej;
            both[0] = tw->one();
            KElem cj = eval_at(both); // c (u_j + u_0)^k
            // find r with r^k = aj/b and (1+r)^k = cj/b
            KElem target1 = aj / b, target2 = cj / b;
            bool found = false;
            for (int64_t i = 1; i < tw->order() && !found; ++i) {
                KElem r = tw->elem_by_index(i);
                if (r.pow(k) == target1 && (tw->one() + r).pow(k) == target2) {
                    out.ratios[j] = r;
                    found = true;
                }
            }
            if (!found) ok = false;
        }
        if (ok) {
            out.applicable = true;
            return out;
        }
    }
    return out;
}

// ---------------- safe specification ----------------

std::vector<std::vector<MPoly>> specify_variety(const DescentContext& ctx,
                                                const std::vector<MPoly>& gens, uint64_t seed) {
    Rng rng(seed ^ 0x7370656351ULL);
    std::vector<std::vector<MPoly>> out;
    for (auto& g : gens) {
        auto tup = descend_polynomial(ctx, g);
        for (int attempt = 0;; ++attempt) {
            if (attempt > 200) throw std::runtime_error("specify_variety: retry budget exhausted");
            Mat<Fp> gamma = random_gl(ctx.tower, ctx.d(), rng);
            auto scrambled = apply_matrix_to_tuple(gamma, tup.polys);
            if (!contains_global_descent(ctx, scrambled, g.nvars())) {
                out.push_back(std::move(scrambled));
                break;
            }
        }
    }
    return out;
}

std::optional<MPoly> vanishing_with_monomial(const std::vector<MPoly>& gens, const Expo& m,
                                             Rng& rng) {
    const TowerPtr& tw = gens[0].tower();
    for (auto& g : gens) {
        for (auto& [m1, c1] : g.terms()) {
            bool divides = true;
            for (size_t i = 0; i < m.size(); ++i)
                if (m1[i] > m[i]) divides = false;
            if (!divides) continue;
            Expo quot(m.size());
            for (size_t i = 0; i < m.size(); ++i) quot[i] = static_cast<uint16_t>(m[i] - m1[i]);
            KElem b = tw->random_nonzero(rng);
            return MPoly::monomial(tw, static_cast<int>(m.size()), quot, b) * g;
        }
    }
    return std::nullopt;
}

std::vector<MPoly> sanitize_tuple(const DescentContext& ctx, const std::vector<MPoly>& tuple,
                                  int orig_vars, const std::vector<MPoly>& gens,
                                  const std::vector<Mat<Fp>>& twists, uint64_t seed) {
    Rng rng(seed ^ 0x73616e69ULL);
    int d = ctx.d();
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<MPoly> delta(d, MPoly(ctx.tower, orig_vars * d));
        // scramble every block of degree >= 2 with an ideal multiple
        std::set<Expo> blocks;
        for (auto& p : tuple)
            for (auto& [e, c] : p.terms()) blocks.insert(block_sums(e, orig_vars, d));
        bool constructible = true;
        for (auto& m : blocks) {
            if (expo_total(m) < 2) continue;
            auto f = vanishing_with_monomial(gens, m, rng);
            if (!f) {
                constructible = false;
                continue;
            }
            auto fhat = descend_polynomial(ctx, *f);
            auto scr = apply_matrix_to_tuple(random_gl(ctx.tower, d, rng), fhat.polys);
            for (int i = 0; i < d; ++i) delta[i] += scr[i];
        }
        std::vector<MPoly> result;
        for (int i = 0; i < d; ++i) result.push_back(tuple[i] + delta[i]);
        bool clean = !contains_global_descent(ctx, result, orig_vars).has_value();
        for (auto& a : twists) {
            if (!clean) break;
            if (contains_global_descent(ctx, apply_matrix_to_tuple(a, result), orig_vars))
                clean = false;
        }
        if (clean) return result;
        if (!constructible && attempt > 8)
            throw std::runtime_error(
                "sanitize_tuple: vanishing polynomial with required monomial unavailable");
    }
    throw std::runtime_error("sanitize_tuple: retry budget exhausted");
}

KElem ProperSpecification::eval(const std::vector<KElem>& hat) const {
    auto v = try_eval(hat);
    if (!v) throw SupportCollision();
    return *v;
}

std::optional<KElem> ProperSpecification::try_eval(const std::vector<KElem>& hat) const {
    const TowerPtr& tw = num[0].tower();
    KElem n = tw->zero(), dd = tw->zero();
    KElem theta = tw->one();
    for (size_t j = 0; j < num.size(); ++j) {
        n += num[j].eval(hat) * theta;
        dd += den[j].eval(hat) * theta;
        theta = theta * tw->gen();
    }
    if (dd.is_zero()) return std::nullopt;
    return n / dd;
}

namespace {

// theta powers as a vector (1, t, t^2, ...)
std::vector<KElem> theta_vec(const TowerPtr& tw) {
    std::vector<KElem> v;
    KElem cur = tw->one();
    for (int i = 0; i < tw->d(); ++i) {
        v.push_back(cur);
        cur = cur * tw->gen();
    }
    return v;
}

MPoly theta_sum(const std::vector<MPoly>& tuple, const TowerPtr& tw) {
    auto tv = theta_vec(tw);
    MPoly acc(tw, tuple[0].nvars());
    for (size_t j = 0; j < tuple.size(); ++j) acc += tuple[j].scaled(tv[j]);
    return acc;
}

} // namespace

ProperSpecification specify_function(const DescentContext& ctx, const MPoly& F, const MPoly& G,
                                     const KElem& a, int conjugate,
                                     const std::vector<MPoly>& gens, uint64_t seed) {
    const TowerPtr& tw = ctx.tower;
    int d = ctx.d();
    int n = F.nvars();
    Rng rng(seed ^ 0x7033384bULL);
    // twists from the Prop 8 proof: Gamma_{theta,i}^t and
    // (Gamma_{theta,i} Gamma_{theta,j}^{-1})^t
    Mat<Fp> gti = gamma_theta(ctx, conjugate);
    std::vector<Mat<Fp>> twists{mat_transpose(gti)};
    for (int j = 0; j < d; ++j) {
        auto inv = mat_inverse(gamma_theta(ctx, j));
        twists.push_back(mat_transpose(mat_mul(gti, *inv)));
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        KElem r = tw->random_nonzero(rng);
        KElem cf = (a * r).frobenius(-conjugate);
        KElem cg = r.frobenius(-conjugate);
        auto fhat = descend_polynomial(ctx, F.scaled(cf));
        auto ghat = descend_polynomial(ctx, G.scaled(cg));
        std::vector<MPoly> fs, gs;
        try {
            fs = sanitize_tuple(ctx, fhat.polys, n, gens, twists, rng.next());
            gs = sanitize_tuple(ctx, ghat.polys, n, gens, twists, rng.next());
        } catch (const std::runtime_error&) {
            continue;
        }
        ProperSpecification spec;
        spec.site = conjugate;
        spec.orig_vars = n;
        spec.num = apply_matrix_to_tuple(mat_transpose(gti), fs);
        spec.den = apply_matrix_to_tuple(mat_transpose(gti), gs);
        spec.blinded = !a.is_one();
        // final detectors: published tuples contain no global descent, the
        // theta sums no K-global descent for any conjugate
        bool clean = !contains_global_descent(ctx, spec.num, n) &&
                     !contains_global_descent(ctx, spec.den, n);
        MPoly ns = theta_sum(spec.num, tw), ds = theta_sum(spec.den, tw);
        for (int j = 0; j < d && clean; ++j) {
            if (contains_k_global_descent(ctx, ns, n, j)) clean = false;
            if (contains_k_global_descent(ctx, ds, n, j)) clean = false;
        }
        if (clean) return spec;
    }
    throw std::runtime_error("specify_function: retry budget exhausted");
}

KElem MixedSpecification::eval(const std::vector<KElem>& xhat,
                               const std::vector<KElem>& yhat) const {
    const TowerPtr& tw = factors[0].first[0].tower();
    auto tv = theta_vec(tw);
    KElem acc = tw->zero();
    for (auto& [nx_t, ny_t] : factors) {
        KElem vx = tw->zero(), vy = tw->zero();
        for (size_t j = 0; j < nx_t.size(); ++j) vx += nx_t[j].eval(xhat) * tv[j];
        for (size_t j = 0; j < ny_t.size(); ++j) vy += ny_t[j].eval(yhat) * tv[j];
        acc += vx * vy;
    }
    return acc;
}

MixedSpecification specify_mixed(const DescentContext& ctx_x, const DescentContext& ctx_y,
                                 const MPoly& F, int nx, int conjugate,
                                 const std::vector<MPoly>& gens_x,
                                 const std::vector<MPoly>& gens_y, uint64_t seed) {
    const TowerPtr& tw = ctx_x.tower;
    int d = ctx_x.d();
    int ny = F.nvars() - nx;
    Rng rng(seed ^ 0x6d697833ULL);
    MixedSpecification spec;
    spec.site = conjugate;
    spec.nx = nx;
    spec.ny = ny;
    Mat<Fp> gti_x = mat_transpose(gamma_theta(ctx_x, conjugate));
    Mat<Fp> gti_y = mat_transpose(gamma_theta(ctx_y, conjugate));

    // split terms into (x-monomial, y-monomial, coefficient)
    for (auto& [e, coeff] : F.terms()) {
        Expo mx(e.begin(), e.begin() + nx);
        Expo my(e.begin() + nx, e.end());
        for (int attempt = 0;; ++attempt) {
            if (attempt > 64) throw std::runtime_error("specify_mixed: retry budget exhausted");
            KElem r = tw->random_nonzero(rng);
            KElem cx = (coeff / r).frobenius(-conjugate);
            KElem cy = r.frobenius(-conjugate);
            auto xt = descend_monomial(ctx_x, nx, mx, cx);
            auto yt = descend_monomial(ctx_y, ny, my, cy);
            std::vector<MPoly> xs = xt.polys, ys = yt.polys;
            // Prop 7 style masking of each factor with ideal multiples
            if (expo_total(mx) >= 2) {
                auto f = vanishing_with_monomial(gens_x, mx, rng);
                if (f) {
                    auto fh = descend_polynomial(ctx_x, *f);
                    auto scr = apply_matrix_to_tuple(random_gl(tw, d, rng), fh.polys);
                    for (int i = 0; i < d; ++i) xs[i] += scr[i];
                }
            }
            if (expo_total(my) >= 2) {
                auto f = vanishing_with_monomial(gens_y, my, rng);
                if (f) {
                    auto fh = descend_polynomial(ctx_y, *f);
                    auto scr = apply_matrix_to_tuple(random_gl(tw, d, rng), fh.polys);
                    for (int i = 0; i < d; ++i) ys[i] += scr[i];
                }
            }
            auto pub_x = apply_matrix_to_tuple(gti_x, xs);
            auto pub_y = apply_matrix_to_tuple(gti_y, ys);
            // detector sweep: no K-global descent w.r.t. either basis, any
            // conjugate, for either factor's theta sum
            MPoly sx = theta_sum(pub_x, tw), sy = theta_sum(pub_y, tw);
            bool clean = true;
            for (int j = 0; j < d && clean; ++j) {
                if (contains_k_global_descent(ctx_x, sx, nx, j)) clean = false;
                if (contains_k_global_descent(ctx_y, sx, nx, j)) clean = false;
                if (contains_k_global_descent(ctx_x, sy, ny, j)) clean = false;
                if (contains_k_global_descent(ctx_y, sy, ny, j)) clean = false;
            }
            if (!clean) continue;
            spec.factors.emplace_back(std::move(pub_x), std::move(pub_y));
            break;
        }
    }
    return spec;
}

// ---------------- linear attacks ----------------

LinearAttackResult linear_attack_lemma5(const SampleSet& a, const MonomialSet& s,
                                        const TowerPtr& tw, int d) {
    LinearAttackResult out;
    auto hatted = s.hatted(d);
    std::vector<Expo> sup(hatted.begin(), hatted.end());
    auto rank = support_rank(a, sup, tw);
    if (rank.ell_s != 0) return out; // underdetermined: attack fails
    // solve for the coefficient vector of F o delta
    Mat<KElem> rows;
    Vec<KElem> rhs;
    for (size_t i = 0; i < a.points.size(); ++i) {
        Vec<KElem> row;
        for (auto& e : sup) {
            KElem v = tw->one();
            for (size_t j = 0; j < e.size(); ++j)
                for (int k = 0; k < e[j]; ++k) v = v * a.points[i][j];
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        rhs.push_back(a.values[i]);
    }
    auto sol = solve_linear(rows, rhs);
    if (!sol) return out;
    out.success = true;
    out.recovered_k_poly = MPoly(tw, static_cast<int>(sup[0].size()));
    for (size_t j = 0; j < sup.size(); ++j) out.recovered_k_poly.add_term(sup[j], (*sol)[j]);
    return out;
}

LinearAttackResult linear_attack_lemma7(const SampleSet& a, const MonomialSet& s, int linear_var,
                                        const TowerPtr& tw, int d) {
    LinearAttackResult out;
    auto hatted = s.hatted(d);
    std::vector<Expo> sup(hatted.begin(), hatted.end());
    // null space of the evaluation matrix = polynomials vanishing on A
    Mat<KElem> rows;
    for (auto& pt : a.points) {
        Vec<KElem> row;
        for (auto& e : sup) {
            KElem v = tw->one();
            for (size_t j = 0; j < e.size(); ++j)
                for (int k = 0; k < e[j]; ++k) v = v * pt[j];
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    auto kern = null_space(rows);
    if (static_cast<int>(kern.size()) != d) return out; // ell_S != d: attack fails
    // normalize: f_i has coefficient 1 at x_{linear_var, i} and 0 at the other
    // hatted coordinates of the linear variable
    int nvars = static_cast<int>(sup[0].size());
    std::vector<size_t> lin_cols;
    for (int r = 0; r < d; ++r) {
        Expo e(nvars, 0);
        e[linear_var * d / d * d + r] = 1; // hatted index of block linear_var, slot r
        Expo want(nvars, 0);
        want[static_cast<size_t>(linear_var) * static_cast<size_t>(d) + r] = 1;
        auto it = std::find(sup.begin(), sup.end(), want);
        if (it == sup.end()) return out;
        lin_cols.push_back(static_cast<size_t>(it - sup.begin()));
    }
    for (int i = 0; i < d; ++i) {
        // solve for combo with unit coefficient pattern
        Mat<KElem> sys(d, Vec<KElem>(kern.size(), tw->zero()));
        Vec<KElem> rhs(d, tw->zero());
        for (int r = 0; r < d; ++r) {
            for (size_t kv = 0; kv < kern.size(); ++kv) sys[r][kv] = kern[kv][lin_cols[r]];
            rhs[r] = (r == i) ? tw->one() : tw->zero();
        }
        auto sol = solve_linear(sys, rhs);
        if (!sol) return out;
        MPoly fi(tw, nvars);
        for (size_t j = 0; j < sup.size(); ++j) {
            KElem v = tw->zero();
            for (size_t kv = 0; kv < kern.size(); ++kv) v += (*sol)[kv] * kern[kv][j];
            fi.add_term(sup[j], v);
        }
        out.recovered_tuple.push_back(std::move(fi));
    }
    out.success = true;
    return out;
}

// ---------------- safety ----------------

SafetyReport safety_check(const std::vector<MPoly>& gens, const std::set<Expo>& support,
                          int degree_slack) {
    const TowerPtr& tw = gens[0].tower();
    int nv = gens[0].nvars();
    SafetyReport out{false, MPoly(tw, nv)};
    if (support.empty()) return out;
    int maxdeg = 0;
    for (auto& e : support) maxdeg = std::max(maxdeg, expo_total(e));
    // candidates: monomial multiples of the generators up to the degree cap
    std::vector<MPoly> cands;
    for (auto& g : gens) {
        int gd = g.total_degree();
        int room = maxdeg + degree_slack - gd;
        if (room < 0) continue;
        std::vector<Expo> ms;
        Expo cur(nv, 0);
        std::function<void(int, int)> gen_m = [&](int pos, int left) {
            if (pos == nv) {
                ms.push_back(cur);
                return;
            }
            for (int v = 0; v <= left; ++v) {
                cur[pos] = static_cast<uint16_t>(v);
                gen_m(pos + 1, left - v);
            }
            cur[pos] = 0;
        };
        gen_m(0, room);
        for (auto& m : ms) cands.push_back(MPoly::monomial(tw, nv, m, tw->one()) * g);
        if (cands.size() > 600) break;
    }
    if (cands.empty()) return out;
    // universe of monomials outside S must cancel
    std::set<Expo> universe;
    for (auto& c : cands)
        for (auto& [e, v] : c.terms()) universe.insert(e);
    std::vector<Expo> outside;
    for (auto& e : universe)
        if (!support.count(e)) outside.push_back(e);
    Mat<KElem> rows(outside.size(), Vec<KElem>(cands.size(), tw->zero()));
    for (size_t j = 0; j < cands.size(); ++j)
        for (size_t i = 0; i < outside.size(); ++i) rows[i][j] = cands[j].coeff(outside[i]);
    std::vector<Vec<KElem>> kern;
    if (outside.empty()) {
        Vec<KElem> v(cands.size(), tw->zero());
        v[0] = tw->one();
        kern.push_back(std::move(v));
    } else {
        kern = null_space(rows);
    }
    for (auto& v : kern) {
        MPoly w(tw, nv);
        for (size_t j = 0; j < cands.size(); ++j)
            if (!v[j].is_zero()) w += cands[j].scaled(v[j]);
        if (!w.is_zero()) {
            out.safe = true;
            out.witness = std::move(w);
            return out;
        }
    }
    return out;
}

SafetyReport safety_check_poly(const std::vector<MPoly>& gens, const MPoly& f, int degree_slack) {
    return safety_check(gens, support_of(f), degree_slack);
}

} // namespace trimap
