#pragma once

#include "wfock/errors.hpp"
#include "wfock/operators.hpp"
#include "wfock/zpoly.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <vector>

namespace wfock {

/// Radial Gauss-type nodes in t = r^2 against e^{-t}, uniform trapezoid in the
/// angle. Exact (up to rounding) for monomials z^m zb^n with m+n <= 2*radial-2
/// and |m-n| < angular.
struct QuadratureGrid {
    int radial_nodes = 64;
    int angular_nodes = 64;
    mutable double error_estimate = 0.0;

    void validate() const {
        if (radial_nodes < 8 || angular_nodes < 8)
            throw ConfigError("quadrature node counts must be >= 8");
    }
};

namespace quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Evaluates (L_n, L_{n+1}) at x via the three-term recurrence.
inline std::pair<long double, long double> laguerre_pair(int n, long double x) {
    long double lm = 1.0L, l = 1.0L - x;
    if (n == 0) return {lm, l};
    for (int k = 1; k <= n; ++k) {
        long double lp = ((2.0L * k + 1.0L - x) * l - k * lm) / (k + 1.0L);
        lm = l;
        l = lp;
    }
    return {lm, l};  // (L_n, L_{n+1})
}

/// Gauss-Laguerre (alpha = 0). Nodes start from the Jacobi-matrix eigenvalues
/// and are Newton-polished on the recurrence in extended precision;
/// Golub-Welsch weights lose several digits here because the first
/// eigenvector components decay like e^{-t/2}, so the closed form
/// w = x / ((n+1) L_{n+1}(x))^2 is used instead.
inline Rule gauss_laguerre(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = 2.0 * i + 1.0;
        if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = static_cast<double>(i + 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        long double x = es.eigenvalues()(i);
        for (int it = 0; it < 6; ++it) {
            auto [ln, lnp1] = laguerre_pair(n, x);
            // at the step target: x L_n'(x) = (n+1) L_{n+1}(x) - (n+1-x) L_n(x)
            long double dln = ((n + 1) * lnp1 - (n + 1 - x) * ln) / x;
            long double step = ln / dln;
            x -= step;
            if (std::abs(static_cast<double>(step)) < 1e-17 * std::max(1.0, static_cast<double>(x)))
                break;
        }
        auto [ln, lnp1] = laguerre_pair(n, x);
        (void)ln;
        long double d = (n + 1.0L) * lnp1;
        r.nodes[i] = static_cast<double>(x);
        r.weights[i] = static_cast<double>(x / (d * d));
    }
    return r;
}

/// Gauss-Legendre on [0, 1].
inline Rule gauss_legendre01(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i - 1, i) = J(i, i - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
        double v0 = es.eigenvectors()(0, i);
        r.weights[i] = v0 * v0;  // mu0 = 1 after mapping [-1,1] -> [0,1]
    }
    return r;
}

}  // namespace quad

/// integral of p e^{-|z|^2} dA over the plane, radial x angular product rule.
inline std::complex<double> integrate_gaussian_once(const ZPoly& p, int radial, int angular) {
    quad::Rule rr = quad::gauss_laguerre(radial);
    std::complex<double> acc = 0;
    for (int a = 0; a < angular; ++a) {
        double th = 2.0 * M_PI * a / angular;
        std::complex<double> dir(std::cos(th), std::sin(th));
        for (int i = 0; i < radial; ++i) {
            double rad = std::sqrt(rr.nodes[i]);
            acc += rr.weights[i] * p.eval(rad * dir);
        }
    }
    return acc * (M_PI / angular);  // (1/2) * (2 pi / A) * sum
}

inline std::complex<double> integrate_gaussian(const ZPoly& p, const QuadratureGrid& grid) {
    grid.validate();
    std::complex<double> v1 = integrate_gaussian_once(p, grid.radial_nodes, grid.angular_nodes);
    std::complex<double> v2 =
        integrate_gaussian_once(p, 2 * grid.radial_nodes, 2 * grid.angular_nodes);
    grid.error_estimate = std::abs(v1 - v2);
    return v2;
}

struct DomainSpec {
    GC center{0};
    Rat radius{1};

    void validate() const {
        if (radius <= 0) throw ConfigError("disc radius must be positive");
    }
    Rat diameter() const { return 2 * radius; }
    std::complex<double> center_f() const { return {to_double(center.re), to_double(center.im)}; }
    double radius_f() const { return to_double(radius); }
};

inline std::complex<double> integrate_disc_once(const ZPoly& p, const DomainSpec& dom,
                                                bool weight_on, int radial, int angular) {
    quad::Rule rr = quad::gauss_legendre01(radial);
    double R = dom.radius_f();
    std::complex<double> z0 = dom.center_f();
    std::complex<double> acc = 0;
    for (int a = 0; a < angular; ++a) {
        double th = 2.0 * M_PI * a / angular;
        std::complex<double> dir(std::cos(th), std::sin(th));
        for (int i = 0; i < radial; ++i) {
            double rho = R * rr.nodes[i];
            std::complex<double> zeta = rho * dir;
            double w = rr.weights[i] * R * rho;
            double g = weight_on ? std::exp(-std::norm(zeta)) : 1.0;
            acc += w * g * p.eval(z0 + zeta);
        }
    }
    return acc * (2.0 * M_PI / angular);
}

/// integral of p over the disc, optionally against e^{-|z - z0|^2}.
inline std::complex<double> integrate_disc(const ZPoly& p, const DomainSpec& dom, bool weight_on,
                                           const QuadratureGrid& grid) {
    grid.validate();
    dom.validate();
    std::complex<double> v1 =
        integrate_disc_once(p, dom, weight_on, grid.radial_nodes, grid.angular_nodes);
    std::complex<double> v2 =
        integrate_disc_once(p, dom, weight_on, 2 * grid.radial_nodes, 2 * grid.angular_nodes);
    grid.error_estimate = std::abs(v1 - v2);
    if (grid.error_estimate > 1e-8)
        throw QuadratureNotConverged("disc quadrature error " + std::to_string(grid.error_estimate));
    return v2;
}

// ---------------------------------------------------------------- bump calculus
//
// The weak-solution pairings integrate WITHOUT the Gaussian weight, so the
// test battery must be compactly supported: the radial bump
// exp(-R^2 / (R^2 - |zeta|^2)) on |zeta| < R (a convenient rescaling of the
// classical profile; smooth, flat at the boundary). Derivatives stay in the
// closed family  P(zeta, zbar) / D^s * bump  with D = R^2 - zeta zbar, via
//   d   : (P, s) -> (dP D^2 + s P zbar D - R^2 P zbar, s + 2)
//   dbar: (P, s) -> (dbarP D^2 + s P zeta D - R^2 P zeta, s + 2)

struct BumpExpr {
    Rat R_sq;   // R^2
    ZPoly P;    // numerator, exact
    int s = 0;  // denominator power of D = R^2 - zeta zbar

    static BumpExpr base(const Rat& R_sq, ZPoly mod = ZPoly::one()) {
        return BumpExpr{R_sq, std::move(mod), 0};
    }

    ZPoly D() const {
        ZPoly d = ZPoly::constant(GC(R_sq));
        d.add_term({1, 1}, GC(-1));
        return d;
    }

    BumpExpr dz() const {
        ZPoly D2 = D() * D();
        ZPoly out = d_z(P) * D2 + GC(Rat(s)) * mul_monomial(P * D(), 0, 1)
                    - GC(R_sq) * mul_monomial(P, 0, 1);
        return BumpExpr{R_sq, out, s + 2};
    }
    BumpExpr dzbar() const {
        ZPoly D2 = D() * D();
        ZPoly out = d_zbar(P) * D2 + GC(Rat(s)) * mul_monomial(P * D(), 1, 0)
                    - GC(R_sq) * mul_monomial(P, 1, 0);
        return BumpExpr{R_sq, out, s + 2};
    }
    BumpExpr dz_pow(int k) const {
        BumpExpr e = *this;
        for (int i = 0; i < k; ++i) e = e.dz();
        return e;
    }
    BumpExpr dzbar_pow(int k) const {
        BumpExpr e = *this;
        for (int i = 0; i < k; ++i) e = e.dzbar();
        return e;
    }

    /// Value P/D^s * exp(-R^2/D) at zeta inside the disc; 0 outside.
    std::complex<double> eval(std::complex<double> zeta) const {
        double Rsq = to_double(R_sq);
        double Dv = Rsq - std::norm(zeta);
        if (Dv <= 0) return 0.0;
        double expo = Rsq / Dv;
        if (expo > 700.0) return 0.0;  // bump underflows before 1/D^s can overflow
        std::complex<double> num = P.eval(zeta);
        return num * std::exp(-expo) / std::pow(Dv, s);
    }
};

/// Test-battery member: monomial-modulated bump centered at `shift`.
struct BumpSpec {
    Rat R_sq{Rat(25, 4)};  // default radius 5/2
    GC shift{0};
    int mod_m = 0;
    int mod_n = 0;
};

inline std::vector<BumpSpec> default_bump_battery() {
    std::vector<BumpSpec> batt;
    for (const GC& a : {GC(0), GC(Rat(2, 5), Rat(1, 5)), GC(Rat(-1, 3), Rat(1, 2))})
        for (auto [m, n] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}})
            batt.push_back(BumpSpec{Rat(25, 4), a, m, n});
    return batt;
}

/// max over the battery of |int u T'(phi) - int f phi| where T' pairs each
/// operator term by its weak-solution definition: T' = alpha R
/// + beta (-1)^k dbar^k + gamma (-1)^k d^k + c, all pairings weight-free.
inline double weak_residual(const ZPoly& u, const ZPoly& f, const OperatorParams& P,
                            const std::vector<BumpSpec>& battery, const QuadratureGrid& grid) {
    P.validate();
    grid.validate();
    double worst = 0.0;
    GC sgn = (P.k % 2) ? GC(-1) : GC(1);
    for (const BumpSpec& spec : battery) {
        BumpExpr phi = BumpExpr::base(spec.R_sq, ZPoly::monomial(spec.mod_m, spec.mod_n));
        // pieces of T'(phi), each a BumpExpr, with its polynomial partner
        struct Piece { BumpExpr expr; GC coef; };
        std::vector<Piece> pieces;
        if (P.alpha != 0) pieces.push_back({phi.dzbar_pow(P.k).dz_pow(P.k), GC(P.alpha)});
        if (P.beta != 0) pieces.push_back({phi.dzbar_pow(P.k), sgn * GC(P.beta)});
        if (P.gamma != 0) pieces.push_back({phi.dz_pow(P.k), sgn * GC(P.gamma)});
        if (!P.c.is_zero()) pieces.push_back({phi, P.c});

        // translate u, f into bump-centered coordinates zeta = z - shift
        ZPoly u_c = translate(u, spec.shift);
        ZPoly f_c = translate(f, spec.shift);

        auto integrate = [&](const ZPoly& poly, const std::vector<Piece>& ps, int radial,
                             int angular) {
            quad::Rule rr = quad::gauss_legendre01(radial);
            double R = std::sqrt(to_double(spec.R_sq));
            std::complex<double> acc = 0;
            for (int a = 0; a < angular; ++a) {
                double th = 2.0 * M_PI * a / angular;
                std::complex<double> dir(std::cos(th), std::sin(th));
                for (int i = 0; i < radial; ++i) {
                    double rho = R * rr.nodes[i];
                    std::complex<double> zeta = rho * dir;
                    double w = rr.weights[i] * R * rho;
                    std::complex<double> tphi = 0;
                    for (auto& pc : ps)
                        tphi += std::complex<double>(to_double(pc.coef.re), to_double(pc.coef.im))
                                * pc.expr.eval(zeta);
                    acc += w * poly.eval(zeta) * tphi;
                }
            }
            return acc * (2.0 * M_PI / angular);
        };

        std::vector<Piece> phi_only{{phi, GC(1)}};
        auto once = [&](int radial, int angular) {
            std::complex<double> lhs = integrate(u_c, pieces, radial, angular);
            std::complex<double> rhs = integrate(f_c, phi_only, radial, angular);
            return lhs - rhs;
        };
        std::complex<double> d1 = once(grid.radial_nodes, grid.angular_nodes);
        std::complex<double> d2 = once(2 * grid.radial_nodes, 2 * grid.angular_nodes);
        grid.error_estimate = std::abs(d1 - d2);
        if (grid.error_estimate > 1e-6)
            throw QuadratureNotConverged("weak-residual quadrature did not settle");
        worst = std::max(worst, std::abs(d2));
    }
    return worst;
}

}  // namespace wfock
