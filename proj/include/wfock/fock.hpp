#pragma once

#include "wfock/rational.hpp"
#include "wfock/zpoly.hpp"

#include <ostream>
#include <vector>

namespace wfock {

/// Exact multiple of pi. The measure unit: <1,1> = pi for the weight e^{-|z|^2}
/// with Lebesgue area measure, and every closed-form inner product carries the
/// same factor, so values are stored as (coefficient) x pi.
struct PiRational {
    GC coeff;

    PiRational() = default;
    explicit PiRational(GC c) : coeff(std::move(c)) {}

    bool is_zero() const { return coeff.is_zero(); }
    bool is_real() const { return coeff.is_real(); }

    double to_double() const {
        static const double pi = 3.14159265358979323846264338327950288;
        return wfock::to_double(coeff.re) * pi;
    }
    std::complex<double> to_complex() const {
        static const double pi = 3.14159265358979323846264338327950288;
        return {wfock::to_double(coeff.re) * pi, wfock::to_double(coeff.im) * pi};
    }

    friend PiRational operator+(const PiRational& a, const PiRational& b) { return PiRational(a.coeff + b.coeff); }
    friend PiRational operator-(const PiRational& a, const PiRational& b) { return PiRational(a.coeff - b.coeff); }
    friend PiRational operator*(const GC& s, const PiRational& v) { return PiRational(s * v.coeff); }
    friend bool operator==(const PiRational& a, const PiRational& b) { return a.coeff == b.coeff; }
    friend bool operator!=(const PiRational& a, const PiRational& b) { return !(a == b); }

    std::string str() const {
        std::string c = coeff.str();
        return (coeff.is_real() ? c : "(" + c + ")") + "*pi";
    }
};

/// <p, q> = integral of conj(p) q e^{-|z|^2} dA, conjugate-linear in p.
/// Monomial rule: <z^a zb^b, z^c zb^d> = pi (a+d)!  when b+c == a+d, else 0.
inline PiRational inner(const ZPoly& p, const ZPoly& q) {
    GC acc(0);
    for (auto& [ep, cp] : p.terms()) {
        for (auto& [eq, cq] : q.terms()) {
            if (ep.n + eq.m != ep.m + eq.n) continue;  // charge selection rule
            acc += Rat(factorial_big(ep.m + eq.n)) * (cp.conj() * cq);
        }
    }
    return PiRational(acc);
}

inline PiRational norm_sq(const ZPoly& p) { return inner(p, p); }

/// One charge sector q = m - n of the monomial Gram metric, degrees <= N per
/// variable. Within a block every entry is nonzero: pi (a+d)! for rows (a,b),
/// columns (c,d).
struct GramBlock {
    int charge = 0;
    std::vector<Mono> basis;            // graded-lex order
    std::vector<std::vector<Rat>> entries;  // real symmetric, in units of pi

    std::size_t size() const { return basis.size(); }
};

/// All monomials (m, n) with m, n <= N of the given charge, graded-lex.
inline std::vector<Mono> charge_basis(int N, int q) {
    std::vector<Mono> b;
    for (int n = 0; n <= N; ++n) {
        int m = n + q;
        if (m >= 0 && m <= N) b.push_back({m, n});
    }
    return b;
}

inline GramBlock gram_block(int N, int q) {
    GramBlock g;
    g.charge = q;
    g.basis = charge_basis(N, q);
    std::size_t s = g.basis.size();
    g.entries.assign(s, std::vector<Rat>(s));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
            g.entries[i][j] = Rat(factorial_big(g.basis[i].m + g.basis[j].n));
    return g;
}

/// Blocks for every charge in [-N, N]; their bases partition all (m,n), m,n <= N.
inline std::vector<GramBlock> gram(int N) {
    std::vector<GramBlock> out;
    for (int q = -N; q <= N; ++q) out.push_back(gram_block(N, q));
    return out;
}

inline void gram_to_csv(const std::vector<GramBlock>& blocks, std::ostream& os) {
    os << "q,row_m,row_n,col_m,col_n,re_over_pi,im_over_pi\n";
    for (auto& g : blocks)
        for (std::size_t i = 0; i < g.size(); ++i)
            for (std::size_t j = 0; j < g.size(); ++j)
                os << g.charge << ',' << g.basis[i].m << ',' << g.basis[i].n << ','
                   << g.basis[j].m << ',' << g.basis[j].n << ','
                   << rat_to_string(g.entries[i][j]) << ",0\n";
}

}  // namespace wfock
