#pragma once

#include "wfock/errors.hpp"
#include "wfock/fock.hpp"
#include "wfock/zpoly.hpp"

#include <map>
#include <ostream>
#include <vector>

namespace wfock {

enum class Letter { Dz, Dzbar };
using Word = std::vector<Letter>;

/// Parameters of H = alpha d^k dbar^k + beta dbar^k + gamma d^k + c.
/// alpha, beta, gamma real (rational), c complex; (alpha,beta,gamma) != 0.
struct OperatorParams {
    int k = 1;
    Rat alpha{0};
    Rat beta{0};
    Rat gamma{0};
    GC c{0};

    void validate() const {
        if (k < 1) throw ConfigError("operator order k must be >= 1");
        if (alpha == 0 && beta == 0 && gamma == 0)
            throw ConfigError("(alpha, beta, gamma) must not all vanish");
    }

    bool pure_alpha() const { return beta == 0 && gamma == 0 && alpha != 0; }
    bool pure_beta() const { return alpha == 0 && gamma == 0 && beta != 0; }
    bool pure_gamma() const { return alpha == 0 && beta == 0 && gamma != 0; }

    /// 1 / (alpha^2 (k!)^2 + beta^2 k! + gamma^2 k!), the theorem's norm factor.
    Rat norm_bound() const {
        Rat kf = factorial_rat(k);
        Rat den = alpha * alpha * kf * kf + beta * beta * kf + gamma * gamma * kf;
        return 1 / den;
    }
    /// The coercivity denominator alpha^2 (k!)^2 + beta^2 k! + gamma^2 k!.
    Rat coercivity_lower() const { return 1 / norm_bound(); }
};

/// e^{|z|^2} D(p e^{-|z|^2}) for the operator word D (leftmost letter outermost).
/// Single-letter ladder steps:
///   e^phi d    (p e^-phi) = (d_z - M_zbar) p
///   e^phi dbar (p e^-phi) = (d_zbar - M_z) p
inline ZPoly weighted_conjugate(const Word& word, ZPoly p) {
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        if (*it == Letter::Dz)
            p = d_z(p) - mul_monomial(p, 0, 1);
        else
            p = d_zbar(p) - mul_monomial(p, 1, 0);
    }
    return p;
}

inline Word word_pow(Letter l, int k) { return Word(static_cast<std::size_t>(k), l); }

inline Word word_R(int k) {
    Word w = word_pow(Letter::Dz, k);
    Word wb = word_pow(Letter::Dzbar, k);
    w.insert(w.end(), wb.begin(), wb.end());
    return w;
}

inline ZPoly apply_H(const OperatorParams& P, const ZPoly& p) {
    ZPoly r = GC(P.alpha) * d_z(d_zbar(p, P.k), P.k);
    r = r + GC(P.beta) * d_zbar(p, P.k);
    r = r + GC(P.gamma) * d_z(p, P.k);
    r = r + P.c * p;
    return r;
}

/// Formal adjoint in the weighted metric:
///   H* = alpha (M_zbar - d)^k (M_z - dbar)^k + beta (M_zbar - d)^k
///        + gamma (M_z - dbar)^k + conj(c).
/// The constant term is conjugated so that <H p, q> = <p, H* q> holds exactly
/// for complex c (the ladder terms have real coefficients).
inline ZPoly apply_H_star(const OperatorParams& P, const ZPoly& p) {
    GC sgn = (P.k % 2) ? GC(-1) : GC(1);
    ZPoly r = GC(P.alpha) * weighted_conjugate(word_R(P.k), p);
    r = r + (sgn * GC(P.beta)) * weighted_conjugate(word_pow(Letter::Dz, P.k), p);
    r = r + (sgn * GC(P.gamma)) * weighted_conjugate(word_pow(Letter::Dzbar, P.k), p);
    r = r + P.c.conj() * p;
    return r;
}

/// dbar*^k p = (M_zbar - d)^k p
inline ZPoly dbar_star(const ZPoly& p, int k) {
    GC sgn = (k % 2) ? GC(-1) : GC(1);
    return sgn * weighted_conjugate(word_pow(Letter::Dz, k), p);
}

/// d*^k p = (M_z - dbar)^k p
inline ZPoly d_star(const ZPoly& p, int k) {
    GC sgn = (k % 2) ? GC(-1) : GC(1);
    return sgn * weighted_conjugate(word_pow(Letter::Dzbar, k), p);
}

/// R* p = dbar*^k d*^k p
inline ZPoly R_star(const ZPoly& p, int k) { return weighted_conjugate(word_R(k), p); }

inline ZPoly apply_R(const ZPoly& p, int k) { return d_z(d_zbar(p, k), k); }

// ---------------------------------------------------------------------------
// Finite sections over the monomial basis.

struct SparseColumn {
    std::vector<std::pair<int, GC>> entries;  // (row index, coefficient)
};

struct SparseMatrix {
    int rows = 0;
    std::vector<SparseColumn> cols;

    void export_coordinate(std::ostream& os) const {
        os << "row,col,re,im\n";
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (auto& [r, v] : cols[c].entries)
                os << r << ',' << c << ',' << wfock::to_double(v.re) << ',' << wfock::to_double(v.im) << "\n";
    }
};

/// Index map for all monomials with m, n <= cap, graded-lex.
struct BasisIndex {
    int cap = 0;
    std::vector<Mono> monos;
    std::map<Mono, int, MonoLess> index;

    explicit BasisIndex(int cap_) : cap(cap_) {
        for (int d = 0; d <= 2 * cap; ++d)
            for (int m = std::max(0, d - cap); m <= std::min(d, cap); ++m)
                monos.push_back({m, d - m});
        for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = static_cast<int>(i);
    }
    int size() const { return static_cast<int>(monos.size()); }

    int find(const Mono& e) const {
        auto it = index.find(e);
        return it == index.end() ? -1 : it->second;
    }
};

/// H and H* on finite sections. Domain: degrees <= N + buffer; codomain:
/// degrees <= N + buffer + k so that H* images of domain monomials always fit.
struct WeightedOperatorMatrices {
    int N = 0;
    int buffer = 0;
    OperatorParams params;
    BasisIndex domain;
    BasisIndex codomain;
    SparseMatrix H;      // codomain x domain
    SparseMatrix Hstar;  // codomain x domain

    WeightedOperatorMatrices(const OperatorParams& P, int N_, int buffer_)
        : N(N_), buffer(buffer_), params(P), domain(N_ + buffer_), codomain(N_ + buffer_ + P.k) {}
};

inline SparseColumn expand_in(const ZPoly& p, const BasisIndex& basis, const char* what) {
    SparseColumn col;
    for (auto& [e, c] : p.terms()) {
        int r = basis.find(e);
        if (r < 0) throw BufferTooSmall(std::string(what) + " image exceeds codomain degree cap");
        col.entries.emplace_back(r, c);
    }
    return col;
}

inline WeightedOperatorMatrices assemble(const OperatorParams& P, int N, int buffer) {
    P.validate();
    if (N < 0) throw ConfigError("truncation degree N must be >= 0");
    if (buffer < P.k)
        throw BufferTooSmall("buffer must be >= k, else adjoint images leave the codomain");
    WeightedOperatorMatrices W(P, N, buffer);
    W.H.rows = W.codomain.size();
    W.Hstar.rows = W.codomain.size();
    for (const Mono& e : W.domain.monos) {
        ZPoly mono = ZPoly::monomial(e.m, e.n);
        W.H.cols.push_back(expand_in(apply_H(P, mono), W.codomain, "apply_H"));
        W.Hstar.cols.push_back(expand_in(apply_H_star(P, mono), W.codomain, "apply_H_star"));
    }
    return W;
}

}  // namespace wfock
