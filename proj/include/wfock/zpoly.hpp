#pragma once

#include "wfock/rational.hpp"

#include <json.hpp>

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace wfock {

/// Exponent pair: degree m in z, degree n in conj(z).
struct Mono {
    int m = 0;
    int n = 0;
    friend bool operator==(const Mono& a, const Mono& b) { return a.m == b.m && a.n == b.n; }
};

/// Graded lexicographic order on (m+n, m); fixes serialization and basis order.
struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const {
        if (a.m + a.n != b.m + b.n) return a.m + a.n < b.m + b.n;
        return a.m < b.m;
    }
};

/// Finite bivariate polynomial in (z, conj z) over exact complex rationals.
/// Canonical form: no stored zero coefficients.
class ZPoly {
public:
    using TermMap = std::map<Mono, GC, MonoLess>;

    ZPoly() = default;

    static ZPoly zero() { return ZPoly(); }
    static ZPoly constant(GC c) { ZPoly p; p.set({0, 0}, std::move(c)); return p; }
    static ZPoly one() { return constant(GC(1)); }
    static ZPoly monomial(int m, int n, GC c = GC(1)) {
        ZPoly p; p.set({m, n}, std::move(c)); return p;
    }
    static ZPoly z() { return monomial(1, 0); }
    static ZPoly zbar() { return monomial(0, 1); }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    GC coeff(int m, int n) const {
        auto it = terms_.find({m, n});
        return it == terms_.end() ? GC(0) : it->second;
    }

    void set(Mono e, GC c) {
        if (c.is_zero()) terms_.erase(e);
        else terms_[e] = std::move(c);
    }

    void add_term(Mono e, const GC& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) { terms_.emplace(e, c); return; }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    int max_m() const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max(d, e.m);
        return d;
    }
    int max_n() const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max(d, e.n);
        return d;
    }
    int total_degree() const {
        int d = 0;
        for (auto& [e, c] : terms_) d = std::max(d, e.m + e.n);
        return d;
    }

    friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const ZPoly& a, const ZPoly& b) { return !(a == b); }

    friend ZPoly operator+(const ZPoly& a, const ZPoly& b) {
        ZPoly r = a;
        for (auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend ZPoly operator-(const ZPoly& a, const ZPoly& b) {
        ZPoly r = a;
        for (auto& [e, c] : b.terms_) r.add_term(e, -c);
        return r;
    }
    friend ZPoly operator-(const ZPoly& a) { return ZPoly() - a; }
    friend ZPoly operator*(const GC& s, const ZPoly& p) {
        ZPoly r;
        if (s.is_zero()) return r;
        for (auto& [e, c] : p.terms_) r.terms_[e] = s * c;
        return r;
    }
    friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
        ZPoly r;
        for (auto& [ea, ca] : a.terms_)
            for (auto& [eb, cb] : b.terms_)
                r.add_term({ea.m + eb.m, ea.n + eb.n}, ca * cb);
        return r;
    }

    /// Coefficient-wise complex conjugation composed with z <-> conj z.
    /// Realizes p(z) -> conj(p(z)) on polynomial functions.
    ZPoly conj_flip() const {
        ZPoly r;
        for (auto& [e, c] : terms_) r.terms_[{e.n, e.m}] = c.conj();
        return r;
    }

    std::complex<double> eval(std::complex<double> zv) const {
        std::complex<double> acc = 0, zb = std::conj(zv);
        for (auto& [e, c] : terms_) {
            std::complex<double> t(to_double(c.re), to_double(c.im));
            for (int i = 0; i < e.m; ++i) t *= zv;
            for (int i = 0; i < e.n; ++i) t *= zb;
            acc += t;
        }
        return acc;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto& [e, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")";
            if (e.m) s += "*z^" + std::to_string(e.m);
            if (e.n) s += "*zb^" + std::to_string(e.n);
        }
        return s;
    }

private:
    TermMap terms_;
};

inline ZPoly linear_combine(const std::vector<std::pair<GC, ZPoly>>& pairs) {
    ZPoly r;
    for (auto& [s, p] : pairs)
        for (auto& [e, c] : p.terms()) r.add_term(e, s * c);
    return r;
}

/// Multiplication by z^a conj(z)^b: shifts every exponent pair by (a, b).
inline ZPoly mul_monomial(const ZPoly& p, int a, int b) {
    ZPoly r;
    for (auto& [e, c] : p.terms()) r.set({e.m + a, e.n + b}, c);
    return r;
}

/// i-th Wirtinger derivative in z:  z^m zb^n -> m!/(m-i)! z^{m-i} zb^n.
inline ZPoly d_z(const ZPoly& p, int i = 1) {
    if (i == 0) return p;
    ZPoly r;
    for (auto& [e, c] : p.terms()) {
        if (e.m < i) continue;
        r.set({e.m - i, e.n}, Rat(falling_big(e.m, i)) * c);
    }
    return r;
}

/// j-th Wirtinger derivative in conj(z).
inline ZPoly d_zbar(const ZPoly& p, int j = 1) {
    if (j == 0) return p;
    ZPoly r;
    for (auto& [e, c] : p.terms()) {
        if (e.n < j) continue;
        r.set({e.m, e.n - j}, Rat(falling_big(e.n, j)) * c);
    }
    return r;
}

/// P_{i,j} with  d^i dbar^j e^{-|z|^2} = P_{i,j} e^{-|z|^2}:
///   P_{i,j} = sum_{t=max(0,i-j)}^{i} (-1)^{t+j} C(i,t) j!/(j-i+t)! z^{j-i+t} zb^t.
inline ZPoly gauss_derivative(int i, int j) {
    ZPoly r;
    for (int t = std::max(0, i - j); t <= i; ++t) {
        Rat c = Rat(binomial_big(i, t)) * Rat(factorial_big(j), factorial_big(j - i + t));
        if ((t + j) % 2) c = -c;
        r.add_term({j - i + t, t}, GC(c));
    }
    return r;
}

/// Substitutes z -> z + t (and zb -> zb + conj t); exact binomial expansion.
inline ZPoly translate(const ZPoly& p, const GC& t) {
    ZPoly r;
    GC tc = t.conj();
    for (auto& [e, c] : p.terms()) {
        // (z+t)^m (zb+tc)^n
        std::vector<GC> tp(e.m + 1), tcp(e.n + 1);
        tp[0] = GC(1);
        for (int a = 1; a <= e.m; ++a) tp[a] = tp[a - 1] * t;
        tcp[0] = GC(1);
        for (int b = 1; b <= e.n; ++b) tcp[b] = tcp[b - 1] * tc;
        for (int a = 0; a <= e.m; ++a)
            for (int b = 0; b <= e.n; ++b) {
                GC coef = Rat(binomial_big(e.m, a) * binomial_big(e.n, b)) * (c * tp[e.m - a] * tcp[e.n - b]);
                r.add_term({a, b}, coef);
            }
    }
    return r;
}

// --- JSON form: {"terms":[{"m":int,"n":int,"re":"p/q","im":"p/q"}]} ---

inline nlohmann::ordered_json zpoly_to_json(const ZPoly& p) {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (auto& [e, c] : p.terms()) {
        terms.push_back({{"m", e.m}, {"n", e.n}, {"re", rat_to_string(c.re)}, {"im", rat_to_string(c.im)}});
    }
    return {{"terms", terms}};
}

inline ZPoly zpoly_from_json(const nlohmann::json& j) {
    ZPoly p;
    if (!j.contains("terms") || !j["terms"].is_array())
        throw std::invalid_argument("ZPoly JSON: missing \"terms\" array");
    for (auto& t : j["terms"]) {
        int m = t.at("m").get<int>();
        int n = t.at("n").get<int>();
        if (m < 0 || n < 0) throw std::invalid_argument("ZPoly JSON: negative exponent");
        GC c(rat_from_string(t.at("re").get<std::string>()),
             rat_from_string(t.at("im").get<std::string>()));
        p.add_term({m, n}, c);
    }
    return p;
}

}  // namespace wfock
