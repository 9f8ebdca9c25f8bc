// A short tour: build an operator, inspect its weighted adjoint, check one
// commutator identity along two independent routes, and solve H u = f.

#include "wfock/identity_lab.hpp"
#include "wfock/solver.hpp"

#include <cstdio>

using namespace wfock;

int main() {
    OperatorParams P;
    P.k = 1;
    P.beta = 1;  // H = dbar

    ZPoly phi = ZPoly::one() + GC(2) * ZPoly::z() + GC::i() * ZPoly::monomial(1, 1);
    std::printf("phi        = %s\n", phi.str().c_str());
    std::printf("H phi      = %s\n", apply_H(P, phi).str().c_str());
    std::printf("H* phi     = %s   (the ladder form (M_zbar - d) phi)\n",
                apply_H_star(P, phi).str().c_str());

    // <H phi, psi> = <phi, H* psi> exactly, in units of pi
    ZPoly psi = ZPoly::monomial(1, 1);
    std::printf("<H phi, psi> = %s,  <phi, H* psi> = %s\n",
                inner(apply_H(P, phi), psi).str().c_str(),
                inner(phi, apply_H_star(P, psi)).str().c_str());

    // one commutator identity, operator route vs explicit-sum route
    IdentityReport r = check_commutators(1, phi)[3];  // [dbar, R*]
    std::printf("C4 two-route check: lhs %s rhs %s -> %s\n", r.lhs.str().c_str(),
                r.rhs.str().c_str(), r.passed ? "exact" : "mismatch");

    // minimum-norm solve of dbar u = 1 + zb^2
    ZPoly f = ZPoly::one() + ZPoly::monomial(0, 2);
    TruncationSpec tr;
    tr.N = 4;
    SolveReport sol = solve_min_norm(f, P, tr);
    std::printf("solve dbar u = %s:\n  u = %s\n  |u|^2 = %s, bound ratio %.6f, residual %.1e\n",
                f.str().c_str(), sol.u.str().c_str(), sol.norm_u_sq.str().c_str(), sol.ratio,
                sol.residual);
    return 0;
}
