#include "trimap/mpoly.hpp"

#include <sstream>

namespace trimap {

MPoly MPoly::constant(const TowerPtr& tw, int nvars, const KElem& c) {
    MPoly p(tw, nvars);
    p.add_term(Expo(nvars, 0), c);
    return p;
}

MPoly MPoly::variable(const TowerPtr& tw, int nvars, int j) {
    MPoly p(tw, nvars);
    Expo e(nvars, 0);
    e[j] = 1;
    p.add_term(e, tw->one());
    return p;
}

MPoly MPoly::monomial(const TowerPtr& tw, int nvars, const Expo& e, const KElem& c) {
    MPoly p(tw, nvars);
    p.add_term(e, c);
    return p;
}

int MPoly::total_degree() const {
    int d = -1;
    for (auto& [e, c] : t_) d = std::max(d, expo_total(e));
    return d;
}

int MPoly::degree_in(int var) const {
    int d = 0;
    for (auto& [e, c] : t_) d = std::max<int>(d, e[var]);
    return d;
}

int MPoly::degree_in_block(int first, int count) const {
    int d = 0;
    for (auto& [e, c] : t_) {
        int s = 0;
        for (int j = 0; j < count; ++j) s += e[first + j];
        d = std::max(d, s);
    }
    return d;
}

KElem MPoly::coeff(const Expo& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? tw_->zero() : it->second;
}

bool MPoly::coeffs_in_base() const {
    for (auto& [e, c] : t_)
        if (!c.in_base()) return false;
    return true;
}

void MPoly::add_term(const Expo& e, const KElem& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

MPoly MPoly::scaled(const KElem& c) const {
    MPoly p(tw_, nvars_);
    if (c.is_zero()) return p;
    for (auto& [e, a] : t_) p.add_term(e, a * c);
    return p;
}

MPoly MPoly::frobenius(int64_t i) const {
    MPoly p(tw_, nvars_);
    for (auto& [e, a] : t_) p.t_.emplace(e, a.frobenius(i));
    return p;
}

MPoly operator+(const MPoly& a, const MPoly& b) {
    MPoly p = a;
    for (auto& [e, c] : b.t_) p.add_term(e, c);
    return p;
}

MPoly operator-(const MPoly& a, const MPoly& b) {
    MPoly p = a;
    for (auto& [e, c] : b.t_) p.add_term(e, -c);
    return p;
}

MPoly MPoly::operator-() const {
    MPoly p(tw_, nvars_);
    for (auto& [e, c] : t_) p.t_.emplace(e, -c);
    return p;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
    MPoly p(a.tw_, a.nvars_);
    if (a.is_zero() || b.is_zero()) return p;
    Expo e(a.nvars_, 0);
    for (auto& [ea, ca] : a.t_) {
        for (auto& [eb, cb] : b.t_) {
            for (int i = 0; i < a.nvars_; ++i) e[i] = static_cast<uint16_t>(ea[i] + eb[i]);
            p.add_term(e, ca * cb);
        }
    }
    return p;
}

KElem MPoly::eval(const std::vector<KElem>& point) const {
    std::vector<std::vector<KElem>> pw(nvars_);
    for (int v = 0; v < nvars_; ++v) pw[v].push_back(tw_->one());
    KElem acc = tw_->zero();
    for (auto& [e, c] : t_) {
        KElem term = c;
        for (int v = 0; v < nvars_; ++v) {
            if (e[v] == 0) continue;
            auto& p = pw[v];
            while (p.size() <= e[v]) p.push_back(p.back() * point[v]);
            term = term * p[e[v]];
        }
        acc += term;
    }
    return acc;
}

MPoly MPoly::compose(const MPoly& f, const std::vector<MPoly>& images) {
    const TowerPtr& tw = f.tower();
    int out_vars = images.empty() ? 0 : images[0].nvars();
    MPoly acc(tw, out_vars);
    std::vector<std::vector<MPoly>> pw(images.size());
    for (size_t v = 0; v < images.size(); ++v)
        pw[v].push_back(MPoly::constant(tw, out_vars, tw->one()));
    for (auto& [e, c] : f.terms()) {
        MPoly term = MPoly::constant(tw, out_vars, c);
        for (size_t v = 0; v < images.size(); ++v) {
            if (e[v] == 0) continue;
            auto& p = pw[v];
            while (p.size() <= e[v]) p.push_back(p.back() * images[v]);
            term = term * p[e[v]];
        }
        acc += term;
    }
    return acc;
}

MPoly MPoly::relabel(int new_nvars, const std::vector<int>& map) const {
    MPoly p(tw_, new_nvars);
    for (auto& [e, c] : t_) {
        Expo ne(new_nvars, 0);
        for (int v = 0; v < nvars_; ++v) {
            if (e[v] == 0) continue;
            ne[map[v]] = static_cast<uint16_t>(ne[map[v]] + e[v]);
        }
        p.add_term(ne, c);
    }
    return p;
}

std::string MPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : t_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int v = 0; v < nvars_; ++v)
            if (e[v]) os << "*x" << v << "^" << e[v];
    }
    return os.str();
}

CompiledPoly::CompiledPoly(const MPoly& p) : tw_(p.tower()), nvars_(p.nvars()) {
    max_deg_.assign(nvars_, 0);
    for (auto& [e, c] : p.terms())
        for (int v = 0; v < nvars_; ++v) max_deg_[v] = std::max<int>(max_deg_[v], e[v]);
    for (auto& [e, c] : p.terms()) {
        size_t start = pairs_.size();
        for (int v = 0; v < nvars_; ++v)
            if (e[v]) pairs_.emplace_back(v, e[v]);
        term_spans_.emplace_back(start, pairs_.size());
        coeffs_.push_back(c);
    }
}

KElem CompiledPoly::eval(const std::vector<KElem>& point) const {
    if (!tw_) throw std::logic_error("CompiledPoly: empty");
    std::vector<std::vector<KElem>> pw(nvars_);
    for (int v = 0; v < nvars_; ++v) {
        pw[v].reserve(max_deg_[v] + 1);
        pw[v].push_back(tw_->one());
        for (int e = 1; e <= max_deg_[v]; ++e) pw[v].push_back(pw[v].back() * point[v]);
    }
    KElem acc = tw_->zero();
    for (size_t t = 0; t < coeffs_.size(); ++t) {
        KElem term = coeffs_[t];
        for (size_t i = term_spans_[t].first; i < term_spans_[t].second; ++i)
            term = term * pw[pairs_[i].first][pairs_[i].second];
        acc += term;
    }
    return acc;
}

} // namespace trimap
