#include "trimap/field.hpp"

#include <algorithm>
#include <sstream>

namespace trimap {

namespace {

// dense little-endian polynomial helpers over F_q, used only for tower setup
using FpPoly = std::vector<Fp>;

void fp_trim(FpPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, int64_t q) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, Fp(0, q));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    fp_trim(c);
    return c;
}

FpPoly fp_mod(FpPoly a, const FpPoly& m, int64_t q) {
    fp_trim(a);
    while (a.size() >= m.size()) {
        Fp f = a.back() / m.back();
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i) a[shift + i] -= f * m[i];
        fp_trim(a);
    }
    (void)q;
    return a;
}

FpPoly fp_powmod(FpPoly base, int64_t e, const FpPoly& m, int64_t q) {
    FpPoly r{Fp(1, q)};
    base = fp_mod(std::move(base), m, q);
    while (e > 0) {
        if (e & 1) r = fp_mod(fp_mul(r, base, q), m, q);
        base = fp_mod(fp_mul(base, base, q), m, q);
        e >>= 1;
    }
    return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, int64_t q) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, q);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Fp inv = a.back().inverse();
        for (auto& c : a) c *= inv;
    }
    (void)q;
    return a;
}

// Rabin irreducibility: f monic degree d over F_q is irreducible iff
// x^{q^d} = x (mod f) and gcd(x^{q^{d/p}} - x, f) = 1 for prime p | d.
bool fp_irreducible(const FpPoly& f, int64_t q) {
    int d = static_cast<int>(f.size()) - 1;
    if (d < 1) return false;
    if (d == 1) return true;
    FpPoly x{Fp(0, q), Fp(1, q)};
    auto q_power_of_x = [&](int e) {
        FpPoly r = x;
        for (int i = 0; i < e; ++i) r = fp_powmod(r, q, f, q);
        return r;
    };
    FpPoly xqd = q_power_of_x(d);
    FpPoly diff = xqd;
    diff.resize(std::max<size_t>(diff.size(), 2), Fp(0, q));
    diff[1] -= Fp(1, q);
    fp_trim(diff);
    if (!diff.empty()) return false;
    for (int p = 2; p <= d; ++p) {
        if (d % p != 0) continue;
        bool prime = true;
        for (int t = 2; t * t <= p; ++t)
            if (p % t == 0) prime = false;
        if (!prime) continue;
        FpPoly g = q_power_of_x(d / p);
        g.resize(std::max<size_t>(g.size(), 2), Fp(0, q));
        g[1] -= Fp(1, q);
        FpPoly gc = fp_gcd(g, f, q);
        if (gc.size() != 1) return false;
    }
    return true;
}

} // namespace

KElem::KElem(TowerPtr tw, std::vector<Fp> coords) : tw_(std::move(tw)), c_(std::move(coords)) {
    if (static_cast<int>(c_.size()) != tw_->d()) throw std::invalid_argument("KElem: bad coord count");
}

bool KElem::is_zero() const {
    for (auto& c : c_)
        if (!c.is_zero()) return false;
    return true;
}

bool KElem::is_one() const {
    if (!c_[0].is_one()) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return false;
    return true;
}

bool KElem::in_base() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (!c_[i].is_zero()) return false;
    return true;
}

Fp KElem::base_value() const {
    if (!in_base()) throw std::domain_error("KElem: not in base field");
    return c_[0];
}

KElem KElem::zero_like() const { return tw_->zero(); }
KElem KElem::one_like() const { return tw_->one(); }

static void check_same(const KElem& a, const KElem& b) {
    if (a.tower().get() != b.tower().get()) throw std::invalid_argument("KElem: mixed towers");
}

KElem operator+(const KElem& a, const KElem& b) {
    check_same(a, b);
    std::vector<Fp> c = a.coords();
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords()[i];
    return KElem(a.tower(), std::move(c));
}

KElem operator-(const KElem& a, const KElem& b) {
    check_same(a, b);
    std::vector<Fp> c = a.coords();
    for (size_t i = 0; i < c.size(); ++i) c[i] -= b.coords()[i];
    return KElem(a.tower(), std::move(c));
}

KElem KElem::operator-() const {
    std::vector<Fp> c = c_;
    for (auto& x : c) x = -x;
    return KElem(tw_, std::move(c));
}

KElem operator*(const KElem& a, const KElem& b) {
    check_same(a, b);
    const auto& tw = *a.tower();
    int d = tw.d();
    if (d == 1) return KElem(a.tower(), {a.coords()[0] * b.coords()[0]});
    // schoolbook product, then reduce with cached t^k tables
    std::vector<Fp> prod(2 * d - 1, tw.fp(0));
    for (int i = 0; i < d; ++i) {
        if (a.coords()[i].is_zero()) continue;
        for (int j = 0; j < d; ++j) prod[i + j] += a.coords()[i] * b.coords()[j];
    }
    std::vector<Fp> out(prod.begin(), prod.begin() + d);
    for (int k = d; k <= 2 * d - 2; ++k) {
        if (prod[k].is_zero()) continue;
        const auto& tk = tw.theta_power(k);
        for (int j = 0; j < d; ++j) out[j] += prod[k] * tk[j];
    }
    return KElem(a.tower(), std::move(out));
}

KElem KElem::scaled(const Fp& c) const {
    std::vector<Fp> out = c_;
    for (auto& x : out) x *= c;
    return KElem(tw_, std::move(out));
}

KElem KElem::inverse() const {
    if (is_zero()) throw std::domain_error("KElem: inverse of zero");
    return pow(tw_->order() - 2);
}

KElem operator/(const KElem& a, const KElem& b) { return a * b.inverse(); }

KElem KElem::pow(int64_t e) const {
    int64_t m = tw_->order() - 1;
    if (is_zero()) {
        if (e <= 0) throw std::domain_error("KElem: 0^nonpositive");
        return *this;
    }
    e %= m;
    if (e < 0) e += m;
    KElem r = one_like(), base = *this;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

KElem KElem::frobenius(int64_t i) const {
    int d = tw_->d();
    int ii = static_cast<int>(((i % d) + d) % d);
    if (ii == 0) return *this;
    return KElem(tw_, mat_vec(tw_->frob_matrix(ii), c_));
}

int KElem::min_poly_degree() const {
    KElem x = frobenius(1);
    int m = 1;
    while (!(x == *this)) {
        x = x.frobenius(1);
        ++m;
    }
    return m;
}

bool operator==(const KElem& a, const KElem& b) {
    if (a.tower().get() != b.tower().get()) return false;
    return a.coords() == b.coords();
}

bool operator<(const KElem& a, const KElem& b) {
    for (size_t i = 0; i < a.coords().size(); ++i) {
        if (a.coords()[i].value() != b.coords()[i].value())
            return a.coords()[i].value() < b.coords()[i].value();
    }
    return false;
}

std::vector<int64_t> KElem::serialize() const {
    std::vector<int64_t> out;
    out.reserve(c_.size());
    for (auto& c : c_) out.push_back(c.value());
    return out;
}

std::string KElem::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i].value();
    os << "]";
    return os.str();
}

TowerPtr FieldTower::make(int64_t q, int d, uint64_t seed) {
    if (!is_prime_i64(q)) throw std::invalid_argument("FieldTower: q not prime");
    if (d < 1) throw std::invalid_argument("FieldTower: d must be positive");
    Rng rng(seed ^ 0x746f776572ULL);
    if (d == 1) {
        // modulus t - c for a seeded c
        int64_t c = rng.below_i(q);
        return make_with_modulus(q, {(q - c) % q, 1});
    }
    for (int attempt = 0; attempt < 4096; ++attempt) {
        FpPoly f(d + 1, Fp(0, q));
        f[d] = Fp(1, q);
        for (int i = 0; i < d; ++i) f[i] = Fp(rng.below_i(q), q);
        if (fp_irreducible(f, q)) {
            std::vector<int64_t> coeffs;
            for (auto& c : f) coeffs.push_back(c.value());
            return make_with_modulus(q, std::move(coeffs));
        }
    }
    throw std::runtime_error("FieldTower: no irreducible modulus found (RNG misuse?)");
}

TowerPtr FieldTower::make_with_modulus(int64_t q, std::vector<int64_t> modulus) {
    if (!is_prime_i64(q)) throw std::invalid_argument("FieldTower: q not prime");
    auto tw = std::shared_ptr<FieldTower>(new FieldTower());
    tw->q_ = q;
    tw->d_ = static_cast<int>(modulus.size()) - 1;
    tw->order_ = 1;
    for (int i = 0; i < tw->d_; ++i) tw->order_ *= q;
    tw->mod_.reserve(modulus.size());
    for (auto v : modulus) tw->mod_.emplace_back(v, q);
    if (tw->mod_.back().value() != 1) throw std::invalid_argument("FieldTower: modulus not monic");
    if (tw->d_ >= 2 && !fp_irreducible(tw->mod_, q))
        throw std::invalid_argument("FieldTower: modulus not irreducible");
    tw->finish_init();
    return tw;
}

void FieldTower::finish_init() {
    int d = d_;
    // t^k mod f for k = 0..2d-2
    tpow_.assign(std::max(2 * d - 1, 1), std::vector<Fp>(d, fp(0)));
    FpPoly cur{fp(1)};
    for (int k = 0; k <= 2 * d - 2; ++k) {
        for (size_t i = 0; i < cur.size(); ++i) tpow_[k][i] = cur[i];
        // multiply by t, reduce
        cur.insert(cur.begin(), fp(0));
        cur = fp_mod(std::move(cur), mod_, q_);
        cur.resize(d, fp(0));
    }
    // sigma matrix: column j = coords of (t^j)^q = (t^q)^j
    frob_.assign(d, Mat<Fp>());
    frob_[0] = mat_identity<Fp>(d, fp(0));
    if (d >= 2) {
        FpPoly tq = fp_powmod({fp(0), fp(1)}, q_, mod_, q_);
        tq.resize(d, fp(0));
        Mat<Fp> sigma(d, Vec<Fp>(d, fp(0)));
        FpPoly pw{fp(1)};
        pw.resize(d, fp(0));
        for (int j = 0; j < d; ++j) {
            for (int i = 0; i < d; ++i) sigma[i][j] = pw[i];
            if (j + 1 < d) {
                pw = fp_mod(fp_mul(pw, tq, q_), mod_, q_);
                pw.resize(d, fp(0));
            }
        }
        for (int i = 1; i < d; ++i) frob_[i] = mat_mul(sigma, frob_[i - 1]);
    }
}

KElem FieldTower::zero() const { return KElem(shared_from_this(), std::vector<Fp>(d_, fp(0))); }
KElem FieldTower::one() const { return from_base(1); }

KElem FieldTower::gen() const {
    std::vector<Fp> c(d_, fp(0));
    if (d_ == 1)
        c[0] = fp(1);
    else
        c[1] = fp(1);
    return KElem(shared_from_this(), std::move(c));
}

KElem FieldTower::from_base(int64_t v) const {
    std::vector<Fp> c(d_, fp(0));
    c[0] = fp(v);
    return KElem(shared_from_this(), std::move(c));
}

KElem FieldTower::from_coords(const std::vector<int64_t>& coords) const {
    if (static_cast<int>(coords.size()) != d_) throw std::invalid_argument("from_coords: size");
    std::vector<Fp> c;
    c.reserve(d_);
    for (auto v : coords) c.push_back(fp(v));
    return KElem(shared_from_this(), std::move(c));
}

KElem FieldTower::elem(std::vector<Fp> coords) const { return KElem(shared_from_this(), std::move(coords)); }

KElem FieldTower::random_elem(Rng& rng) const {
    std::vector<Fp> c;
    c.reserve(d_);
    for (int i = 0; i < d_; ++i) c.push_back(fp(rng.below_i(q_)));
    return KElem(shared_from_this(), std::move(c));
}

KElem FieldTower::random_nonzero(Rng& rng) const {
    for (;;) {
        KElem x = random_elem(rng);
        if (!x.is_zero()) return x;
    }
}

KElem FieldTower::elem_by_index(int64_t i) const {
    std::vector<Fp> c(d_, fp(0));
    for (int j = 0; j < d_; ++j) {
        c[j] = fp(i % q_);
        i /= q_;
    }
    return KElem(shared_from_this(), std::move(c));
}

int64_t FieldTower::index_of(const KElem& x) const {
    int64_t idx = 0;
    for (int j = d_ - 1; j >= 0; --j) idx = idx * q_ + x.coords()[j].value();
    return idx;
}

DescentBasis DescentBasis::from_elements(std::vector<KElem> uu) {
    DescentBasis b;
    b.u = std::move(uu);
    const TowerPtr& tw = b.u[0].tower();
    int d = static_cast<int>(b.u.size());
    b.gamma.assign(d, Vec<KElem>(d, tw->zero()));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b.gamma[i][j] = b.u[j].frobenius(i);
    auto winv = mat_inverse(b.gamma);
    if (!winv) throw std::invalid_argument("DescentBasis: u is not a basis");
    b.w = std::move(*winv);
    if (d == tw->d()) {
        // u spans K over k: cache the change-of-basis matrices
        b.theta_from_u.assign(d, Vec<Fp>(d, tw->fp(0)));
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) b.theta_from_u[i][j] = b.u[j].coords()[i];
        auto inv = mat_inverse(b.theta_from_u);
        if (!inv) throw std::invalid_argument("DescentBasis: singular theta matrix");
        b.u_from_theta = std::move(*inv);
    }
    return b;
}

std::vector<Fp> DescentBasis::coords_of(const KElem& x) const {
    if (u_from_theta.empty()) throw std::logic_error("DescentBasis: u does not span this tower");
    return mat_vec(u_from_theta, x.coords());
}

KElem DescentBasis::combine(const std::vector<Fp>& coords) const {
    KElem s = u[0].tower()->zero();
    for (size_t j = 0; j < u.size(); ++j) s += u[j].scaled(coords[j]);
    return s;
}

DescentBasis random_descent_basis(const TowerPtr& tower, uint64_t seed) {
    Rng rng(seed ^ 0x62617369ULL);
    int d = tower->d();
    for (;;) {
        Mat<Fp> m(d, Vec<Fp>(d, tower->fp(0)));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) m[i][j] = tower->fp(rng.below_i(tower->q()));
        if (mat_det(m).is_zero()) continue;
        std::vector<KElem> u;
        u.reserve(d);
        for (int j = 0; j < d; ++j) {
            std::vector<Fp> coords(d, tower->fp(0));
            for (int i = 0; i < d; ++i) coords[i] = m[j][i];
            u.push_back(tower->elem(std::move(coords)));
        }
        return DescentBasis::from_elements(std::move(u));
    }
}

DescentBasis theta_basis(const TowerPtr& tower) {
    int d = tower->d();
    std::vector<KElem> u;
    for (int j = 0; j < d; ++j) {
        std::vector<Fp> c(d, tower->fp(0));
        c[j] = tower->fp(1);
        u.push_back(tower->elem(std::move(c)));
    }
    return DescentBasis::from_elements(std::move(u));
}

std::vector<Fp> basis_convert(const std::vector<Fp>& coords, const DescentBasis& from,
                              const DescentBasis& to) {
    return to.coords_of(from.combine(coords));
}

Mat<Fp> scalar_structure_matrix(const KElem& a, const DescentBasis& basis) {
    int d = basis.d();
    Mat<Fp> g(d, Vec<Fp>(d, a.tower()->fp(0)));
    for (int i = 0; i < d; ++i) {
        auto row = basis.coords_of(a * basis.u[i]);
        for (int j = 0; j < d; ++j) g[i][j] = row[j];
    }
    return g;
}

bool is_square(const KElem& x) {
    if (x.is_zero()) return true;
    if (x.tower()->q() == 2) return true;
    return x.pow((x.tower()->order() - 1) / 2).is_one();
}

std::optional<KElem> sqrt_in_field(const KElem& x) {
    const auto& tw = x.tower();
    if (x.is_zero()) return x;
    if (!is_square(x)) return std::nullopt;
    int64_t m = tw->order() - 1;
    int64_t t = m;
    int s = 0;
    while (t % 2 == 0) {
        t /= 2;
        ++s;
    }
    if (s == 1) return x.pow((m + 2) / 4); // x^{(|K|+1)/4} when |K| = 3 mod 4
    // Tonelli-Shanks; deterministic non-residue scan
    KElem z = tw->zero();
    for (int64_t i = 1; i < tw->order(); ++i) {
        z = tw->elem_by_index(i);
        if (!z.is_zero() && !is_square(z)) break;
    }
    KElem c = z.pow(t);
    KElem r = x.pow((t + 1) / 2);
    KElem u = x.pow(t);
    int mexp = s;
    while (!u.is_one()) {
        KElem u2 = u;
        int i = 0;
        while (!u2.is_one()) {
            u2 = u2 * u2;
            ++i;
        }
        KElem b = c;
        for (int j = 0; j < mexp - i - 1; ++j) b = b * b;
        r = r * b;
        c = b * b;
        u = u * c;
        mexp = i;
    }
    return r;
}

std::optional<KElem> find_root_by_scan(const TowerPtr& tw, const std::vector<KElem>& poly) {
    for (int64_t i = 0; i < tw->order(); ++i) {
        KElem x = tw->elem_by_index(i);
        KElem acc = tw->zero();
        for (size_t j = poly.size(); j-- > 0;) acc = acc * x + poly[j];
        if (acc.is_zero()) return x;
    }
    return std::nullopt;
}

KElem embed(const KElem& x, const TowerPtr& big, const KElem& root) {
    KElem acc = big->zero();
    KElem pw = big->one();
    for (int i = 0; i < x.tower()->d(); ++i) {
        acc += pw.scaled(Fp(x.coords()[i].value(), big->q()));
        pw = pw * root;
    }
    return acc;
}

} // namespace trimap
