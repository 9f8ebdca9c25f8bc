#pragma once

#include "wfock/errors.hpp"
#include "wfock/fock.hpp"
#include "wfock/linalg.hpp"
#include "wfock/operators.hpp"
#include "wfock/zpoly.hpp"

#include <json.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace wfock {

struct TruncationSpec {
    int N = 6;
    int buffer = 0;                    // 0 means "use k"
    std::vector<int> growth_schedule;  // empty means {k, 2k, 3k}

    int effective_buffer(int k) const { return buffer > 0 ? buffer : k; }
    std::vector<int> effective_schedule(int k) const {
        if (!growth_schedule.empty()) return growth_schedule;
        return {k, 2 * k, 3 * k};
    }
};

enum class SolveMethod {
    MinNormExact,   // u in the buffered space, H u = f exactly, least weighted norm
    WeakGalerkin    // u = H* psi, <H* chi, H* psi> = <chi, f> on the buffered space
};

inline const char* to_string(SolveMethod m) {
    return m == SolveMethod::MinNormExact ? "min_norm_exact" : "weak_galerkin";
}

struct SolveReport {
    ZPoly u;
    SolveMethod method = SolveMethod::MinNormExact;
    PiRational norm_u_sq;
    PiRational norm_f_sq;
    Rat bound{0};              // 1/(alpha^2 (k!)^2 + beta^2 k! + gamma^2 k!)
    double ratio = 0.0;        // norm_u_sq / (bound * norm_f_sq); 0 for f = 0
    bool ratio_exact_le_bound = false;  // exact rational comparison, both methods
    double residual = 0.0;     // |H u - f|_phi, float (exactly 0 in primal mode)
    PiRational residual_sq_exact;
    std::vector<std::pair<int, double>> trace;  // (buffer, norm_u_sq float)

    double norm_u_sq_f() const { return norm_u_sq.to_double(); }
    double norm_f_sq_f() const { return norm_f_sq.to_double(); }
};

// ------------------------------------------------------------- charge chains
//
// H shifts the charge q = m - n by 0 (alpha and c terms), +k (beta term) and
// -k (gamma term). Solving decouples over the connected components of the
// coupling graph on domain charges; for a pure-parameter operator every charge
// is its own component.

inline std::vector<int> active_shifts(const OperatorParams& P) {
    std::vector<int> s;
    if (P.alpha != 0 || !P.c.is_zero()) s.push_back(0);
    if (P.beta != 0) s.push_back(P.k);
    if (P.gamma != 0) s.push_back(-P.k);
    return s;
}

/// Groups domain charges [-cap, cap] into coupled components.
inline std::vector<std::vector<int>> charge_components(const OperatorParams& P, int cap) {
    std::vector<int> shifts = active_shifts(P);
    std::set<int> diffs;
    for (int a : shifts)
        for (int b : shifts) diffs.insert(a - b);
    std::map<int, int> comp;  // charge -> component id
    int next_id = 0;
    for (int q = -cap; q <= cap; ++q) {
        if (comp.count(q)) continue;
        // breadth-first over difference edges
        std::vector<int> stack{q};
        comp[q] = next_id;
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            for (int d : diffs) {
                int nq = cur + d;
                if (d == 0 || nq < -cap || nq > cap || comp.count(nq)) continue;
                comp[nq] = next_id;
                stack.push_back(nq);
            }
        }
        ++next_id;
    }
    std::vector<std::vector<int>> out(next_id);
    for (auto& [q, id] : comp) out[id].push_back(q);
    return out;
}

namespace detail {

struct ComponentBasis {
    std::vector<Mono> cols;            // domain monomials of the component
    std::map<Mono, int, MonoLess> col_index;
    std::vector<Mono> rows;            // codomain monomials reachable from cols
    std::map<Mono, int, MonoLess> row_index;
};

inline ComponentBasis component_basis(const OperatorParams& P, const std::vector<int>& charges,
                                      int cap) {
    ComponentBasis cb;
    for (int q : charges)
        for (const Mono& e : charge_basis(cap, q)) cb.cols.push_back(e);
    std::sort(cb.cols.begin(), cb.cols.end(), [](const Mono& a, const Mono& b) {
        return MonoLess{}(a, b);
    });
    for (std::size_t i = 0; i < cb.cols.size(); ++i) cb.col_index[cb.cols[i]] = static_cast<int>(i);
    std::set<int> row_charges;
    for (int q : charges)
        for (int s : active_shifts(P)) row_charges.insert(q + s);
    for (int q : row_charges)
        for (const Mono& e : charge_basis(cap, q)) cb.rows.push_back(e);
    std::sort(cb.rows.begin(), cb.rows.end(), [](const Mono& a, const Mono& b) {
        return MonoLess{}(a, b);
    });
    for (std::size_t i = 0; i < cb.rows.size(); ++i) cb.row_index[cb.rows[i]] = static_cast<int>(i);
    return cb;
}

inline QMatrix gram_of(const std::vector<Mono>& basis) {
    int n = static_cast<int>(basis.size());
    QMatrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (basis[i].m - basis[i].n != basis[j].m - basis[j].n) continue;
            G.at(i, j) = GC(Rat(factorial_big(basis[i].m + basis[j].n)));
        }
    return G;
}

}  // namespace detail

// ----------------------------------------------------------------- primal solve

/// Minimum-weighted-norm u in the buffered space with H u = f exactly.
/// Throws NoSolutionInTruncation when f is outside the range of the
/// truncated operator.
inline ZPoly solve_primal_poly(const ZPoly& f, const OperatorParams& P, int N, int buffer) {
    P.validate();
    if (buffer < P.k) throw BufferTooSmall("solver buffer must be >= k");
    if (f.max_m() > N || f.max_n() > N)
        throw ConfigError("deg(f) exceeds the ambient truncation degree N");
    if (!P.c.is_zero()) {
        // The derivative part D = H - c strictly lowers the total degree, so H
        // is triangular with diagonal c on every truncation: the polynomial
        // solution u = sum_j (-1)^j D^j f / c^{j+1} is unique, buffer-free,
        // and already the minimizer over the singleton feasible set.
        ZPoly u;
        ZPoly term = f;
        GC cinv = GC(1) / P.c;
        GC coef = cinv;
        while (!term.is_zero()) {
            u = u + coef * term;
            OperatorParams D = P;
            D.c = GC(0);
            term = apply_H(D, term);
            coef = -(coef * cinv);
        }
        return u;
    }
    int cap = N + buffer;
    ZPoly u;
    std::set<std::pair<int, int>> covered;  // f terms picked up by some component
    for (const auto& charges : charge_components(P, cap)) {
        detail::ComponentBasis cb = detail::component_basis(P, charges, cap);
        int nr = static_cast<int>(cb.rows.size()), nc = static_cast<int>(cb.cols.size());
        if (nc == 0) continue;
        QMatrix A(nr, nc);
        for (int c = 0; c < nc; ++c) {
            ZPoly img = apply_H(P, ZPoly::monomial(cb.cols[c].m, cb.cols[c].n));
            for (auto& [e, v] : img.terms()) {
                auto it = cb.row_index.find(e);
                if (it == cb.row_index.end())
                    throw NoSolutionInTruncation("internal: H image left the component rows");
                A.at(it->second, c) += v;
            }
        }
        QVector b(nr, GC(0));
        bool any = false;
        for (auto& [e, v] : f.terms()) {
            auto it = cb.row_index.find(e);
            if (it == cb.row_index.end()) continue;
            b[it->second] = v;
            covered.insert({e.m, e.n});
            any = true;
        }
        if (!any) continue;  // this component contributes only kernel mass; skip = take 0
        auto aff = solve_affine(A, b);
        if (!aff)
            throw NoSolutionInTruncation(
                "f is outside the range of the truncated operator; enlarge the buffer");
        QVector x = aff->particular;
        if (!aff->nullspace.empty()) {
            QMatrix G = detail::gram_of(cb.cols);
            int nn = static_cast<int>(aff->nullspace.size());
            // normal equations K^H G K t = -K^H G u0
            std::vector<QVector> GK(nn);
            for (int j = 0; j < nn; ++j) GK[j] = mat_vec(G, aff->nullspace[j]);
            QVector Gu0 = mat_vec(G, x);
            QMatrix M(nn, nn);
            QVector rhs(nn, GC(0));
            for (int i = 0; i < nn; ++i) {
                for (int j = 0; j < nn; ++j) {
                    GC acc(0);
                    for (int r = 0; r < nc; ++r) acc += aff->nullspace[i][r].conj() * GK[j][r];
                    M.at(i, j) = acc;
                }
                GC acc(0);
                for (int r = 0; r < nc; ++r) acc += aff->nullspace[i][r].conj() * Gu0[r];
                rhs[i] = -acc;
            }
            auto t = solve_exact(M, rhs);
            if (!t) throw IllConditioned("degenerate Gram normal equations");
            for (int j = 0; j < nn; ++j)
                for (int r = 0; r < nc; ++r) x[r] += (*t)[j] * aff->nullspace[j][r];
        }
        for (int c = 0; c < nc; ++c)
            if (!x[c].is_zero()) u.add_term(cb.cols[c], x[c]);
    }
    for (auto& [e, v] : f.terms())
        if (!covered.count({e.m, e.n}))
            throw NoSolutionInTruncation("f has terms no truncated image can reach");
    return u;
}

// ------------------------------------------------------------------ dual solve

/// Hoermander-style construction: u = H* psi with the Galerkin normal
/// equations <H* chi, H* psi> = <chi, f> over the buffered test space. The
/// norm bound |u|^2 <= bound * |f|^2 is structural for this u whenever the
/// coercivity |H* chi|^2 >= C |chi|^2 holds, so it certifies the theorem's
/// estimate; H u = f holds tested against the truncated space, with the
/// strong residual reported.
inline ZPoly solve_dual_poly(const ZPoly& f, const OperatorParams& P, int N, int buffer) {
    P.validate();
    if (buffer < P.k) throw BufferTooSmall("solver buffer must be >= k");
    if (f.max_m() > N || f.max_n() > N)
        throw ConfigError("deg(f) exceeds the ambient truncation degree N");
    int cap = N + buffer;
    ZPoly u;
    for (const auto& charges : charge_components(P, cap)) {
        detail::ComponentBasis cb = detail::component_basis(P, charges, cap);
        int nc = static_cast<int>(cb.cols.size());
        if (nc == 0) continue;
        QVector rhs(nc, GC(0));
        bool any = false;
        for (int c = 0; c < nc; ++c) {
            PiRational v = inner(ZPoly::monomial(cb.cols[c].m, cb.cols[c].n), f);
            rhs[c] = v.coeff;
            if (!v.is_zero()) any = true;
        }
        if (!any) continue;
        std::vector<ZPoly> images(nc);
        for (int c = 0; c < nc; ++c)
            images[c] = apply_H_star(P, ZPoly::monomial(cb.cols[c].m, cb.cols[c].n));
        QMatrix M(nc, nc);
        for (int i = 0; i < nc; ++i)
            for (int j = 0; j < nc; ++j) M.at(i, j) = inner(images[i], images[j]).coeff;
        auto psi = solve_exact(M, rhs);
        if (!psi) throw IllConditioned("Galerkin matrix singular (coercivity violated?)");
        for (int c = 0; c < nc; ++c)
            if (!(*psi)[c].is_zero()) {
                for (auto& [e, v] : images[c].terms()) u.add_term(e, (*psi)[c] * v);
            }
    }
    return u;
}

inline SolveReport build_report(const ZPoly& u, const ZPoly& f, const OperatorParams& P,
                                SolveMethod method) {
    SolveReport r;
    r.u = u;
    r.method = method;
    r.norm_u_sq = norm_sq(u);
    r.norm_f_sq = norm_sq(f);
    r.bound = P.norm_bound();
    ZPoly res = apply_H(P, u) - f;
    r.residual_sq_exact = norm_sq(res);
    r.residual = std::sqrt(std::max(0.0, r.residual_sq_exact.to_double()));
    if (r.norm_f_sq.is_zero()) {
        r.ratio = 0.0;  // 0/0 reported as 0 by convention
        r.ratio_exact_le_bound = true;
    } else {
        Rat denom = r.bound * r.norm_f_sq.coeff.re;
        r.ratio = to_double(r.norm_u_sq.coeff.re / denom);
        r.ratio_exact_le_bound = (r.norm_u_sq.coeff.re <= denom);
    }
    return r;
}

inline SolveReport solve_min_norm(const ZPoly& f, const OperatorParams& P,
                                  const TruncationSpec& trunc) {
    int buffer = trunc.effective_buffer(P.k);
    SolveReport r = build_report(solve_primal_poly(f, P, trunc.N, buffer), f, P,
                                 SolveMethod::MinNormExact);
    r.trace.emplace_back(buffer, r.norm_u_sq.to_double());
    return r;
}

inline SolveReport solve_weak_galerkin(const ZPoly& f, const OperatorParams& P,
                                       const TruncationSpec& trunc) {
    int buffer = trunc.effective_buffer(P.k);
    SolveReport r = build_report(solve_dual_poly(f, P, trunc.N, buffer), f, P,
                                 SolveMethod::WeakGalerkin);
    r.trace.emplace_back(buffer, r.norm_u_sq.to_double());
    return r;
}

/// Runs the solve along the growth schedule, recording the norm trace.
inline SolveReport convergence_sweep(const ZPoly& f, const OperatorParams& P,
                                     const TruncationSpec& trunc,
                                     SolveMethod method = SolveMethod::MinNormExact) {
    std::vector<int> schedule = trunc.effective_schedule(P.k);
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1]) throw ConfigError("growth schedule must increase");
    SolveReport final;
    std::vector<std::pair<int, double>> trace;
    for (int buf : schedule) {
        ZPoly u = (method == SolveMethod::MinNormExact) ? solve_primal_poly(f, P, trunc.N, buf)
                                                        : solve_dual_poly(f, P, trunc.N, buf);
        final = build_report(u, f, P, method);
        trace.emplace_back(buf, final.norm_u_sq.to_double());
    }
    final.trace = std::move(trace);
    return final;
}

// ------------------------------------------------------------------ coercivity

namespace detail {

/// Monomials are rescaled by 1/sqrt((m+n)!) before the float eigensolve; the
/// raw Gram is conditioned like (2N)! and would eat the answer otherwise.
inline Eigen::MatrixXcd scaled_pair_matrix(const std::vector<Mono>& basis,
                                           const std::vector<ZPoly>& images) {
    int n = static_cast<int>(basis.size());
    std::vector<double> scale(n);
    for (int i = 0; i < n; ++i)
        scale[i] = 1.0 / std::sqrt(to_double(Rat(factorial_big(basis[i].m + basis[i].n))));
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            GC v = inner(images[i], images[j]).coeff;
            M(i, j) = std::complex<double>(to_double(v.re), to_double(v.im)) * scale[i] * scale[j];
        }
    return M;
}

}  // namespace detail

/// min over nonzero phi (deg <= N) of |H* phi|^2 / |phi|^2: the smallest
/// generalized eigenvalue of the exact pair (<H* e_i, H* e_j>, <e_i, e_j>).
inline double coercivity_constant(const OperatorParams& P, int N) {
    P.validate();
    if (N < P.k) throw ConfigError("coercivity_constant needs N >= k");
    BasisIndex basis(N);
    std::vector<ZPoly> images;
    images.reserve(basis.monos.size());
    std::vector<ZPoly> id_images;
    for (const Mono& e : basis.monos) images.push_back(apply_H_star(P, ZPoly::monomial(e.m, e.n)));
    for (const Mono& e : basis.monos) id_images.push_back(ZPoly::monomial(e.m, e.n));
    Eigen::MatrixXcd M = detail::scaled_pair_matrix(basis.monos, images);
    Eigen::MatrixXcd G = detail::scaled_pair_matrix(basis.monos, id_images);
    Eigen::LLT<Eigen::MatrixXcd> llt(G);
    if (llt.info() != Eigen::Success) throw IllConditioned("Gram factorization failed");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, G);
    if (es.info() != Eigen::Success) throw IllConditioned("generalized eigensolve failed");
    return es.eigenvalues().minCoeff();
}

// ---------------------------------------------------------------- right inverse

struct RightInverseReport {
    std::vector<Mono> f_basis;      // degrees <= N
    std::vector<ZPoly> columns;     // T applied to each f-basis monomial
    double norm_T_sq = 0.0;         // largest generalized singular value squared
    double HT_identity_error = 0.0; // max |(H T - I)| entry over the f-space
    Rat bound{0};
};

/// Materializes T: f |-> min-norm u column by column and measures its weighted
/// operator norm. H T = I holds exactly by construction of the primal solve.
inline RightInverseReport right_inverse(const OperatorParams& P, const TruncationSpec& trunc) {
    P.validate();
    RightInverseReport rep;
    rep.bound = P.norm_bound();
    BasisIndex fb(trunc.N);
    rep.f_basis = fb.monos;
    int buffer = trunc.effective_buffer(P.k);
    for (const Mono& e : fb.monos)
        rep.columns.push_back(solve_primal_poly(ZPoly::monomial(e.m, e.n), P, trunc.N, buffer));
    // exact residual H T - I on the f-space
    Rat max_err(0);
    for (std::size_t c = 0; c < rep.columns.size(); ++c) {
        ZPoly res = apply_H(P, rep.columns[c]) - ZPoly::monomial(fb.monos[c].m, fb.monos[c].n);
        for (auto& [e, v] : res.terms()) {
            Rat mag = v.norm_sq();
            if (mag > max_err) max_err = mag;
        }
    }
    rep.HT_identity_error = std::sqrt(to_double(max_err));
    // |T|^2 = max eigenvalue of (<T e_i, T e_j>) against (<e_i, e_j>)
    Eigen::MatrixXcd M = detail::scaled_pair_matrix(fb.monos, rep.columns);
    std::vector<ZPoly> id_images;
    for (const Mono& e : fb.monos) id_images.push_back(ZPoly::monomial(e.m, e.n));
    Eigen::MatrixXcd G = detail::scaled_pair_matrix(fb.monos, id_images);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, G);
    if (es.info() != Eigen::Success) throw IllConditioned("generalized eigensolve failed");
    rep.norm_T_sq = es.eigenvalues().maxCoeff();
    return rep;
}

// --------------------------------------------------------------- serialization

inline nlohmann::ordered_json solve_report_to_json(const SolveReport& r) {
    nlohmann::ordered_json j;
    j["u"] = zpoly_to_json(r.u);
    j["method"] = to_string(r.method);
    j["norm_u_sq"] = {{"pi_rational", r.norm_u_sq.coeff.str()}, {"float", r.norm_u_sq.to_double()}};
    j["norm_f_sq"] = {{"pi_rational", r.norm_f_sq.coeff.str()}, {"float", r.norm_f_sq.to_double()}};
    j["bound"] = rat_to_string(r.bound);
    j["ratio"] = r.ratio;
    j["ratio_exact_le_bound"] = r.ratio_exact_le_bound;
    j["residual"] = r.residual;
    nlohmann::ordered_json tr = nlohmann::ordered_json::array();
    for (auto& [buf, val] : r.trace) tr.push_back({{"buffer", buf}, {"norm_u_sq", val}});
    j["trace"] = tr;
    return j;
}

}  // namespace wfock
