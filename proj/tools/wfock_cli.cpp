// wfock: verification and certification CLI for the weighted-Gaussian
// operator calculus. Subcommands: verify, solve, certify, sweep, oracle.
// Exit codes: 0 success, 1 failed mathematical assertion, 2 bad configuration,
// 3 numerical non-convergence.

#include "wfock/identity_lab.hpp"
#include "wfock/oracle.hpp"
#include "wfock/parallel.hpp"
#include "wfock/rng.hpp"
#include "wfock/solver.hpp"
#include "wfock/transforms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace wfock;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
    int k = 1;
    std::string alpha = "0", beta = "0", gamma = "0", c_re = "0", c_im = "0";
    int N = 6;
    int buffer = 0;
    unsigned seed = 7;
    std::string out;
    std::string format = "json";

    OperatorParams params() const {
        OperatorParams p;
        p.k = k;
        p.alpha = rat_from_string(alpha);
        p.beta = rat_from_string(beta);
        p.gamma = rat_from_string(gamma);
        p.c = GC(rat_from_string(c_re), rat_from_string(c_im));
        return p;
    }
    TruncationSpec trunc() const {
        TruncationSpec t;
        t.N = N;
        t.buffer = buffer;
        return t;
    }
};

void add_param_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--k", o.k, "operator order k >= 1");
    cmd->add_option("--alpha", o.alpha, "alpha (rational, e.g. 1 or 3/2)");
    cmd->add_option("--beta", o.beta, "beta (rational)");
    cmd->add_option("--gamma", o.gamma, "gamma (rational)");
    cmd->add_option("--c-re", o.c_re, "Re c (rational)");
    cmd->add_option("--c-im", o.c_im, "Im c (rational)");
    cmd->add_option("--N", o.N, "ambient truncation degree per variable");
    cmd->add_option("--buffer", o.buffer, "extra search-space degree (default k)");
    cmd->add_option("--seed", o.seed, "seed for random test polynomials");
    cmd->add_option("--out", o.out, "output path (stdout when omitted)");
    cmd->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

void emit(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw ConfigError("cannot open output path " + out_path);
    os << payload;
}

std::string sidecar(const std::string& path, const std::string& ext) {
    auto dot = path.rfind('.');
    std::string base = (dot == std::string::npos) ? path : path.substr(0, dot);
    return base + ext;
}

ZPoly load_zpoly(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read f from " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad ZPoly JSON in ") + path + ": " + e.what());
    }
    return zpoly_from_json(j);
}

// ------------------------------------------------------------------ verify

int run_verify(const CommonOpts& o, int count, int deg) {
    Rng rng(o.seed);
    std::vector<ZPoly> phis;
    for (int i = 0; i < count; ++i) phis.push_back(random_zpoly(rng, deg));

    std::vector<std::vector<IdentityReport>> results(phis.size());
    int k = o.k;
    parallel_for(phis.size(), [&](std::size_t i) {
        std::vector<IdentityReport> rs = check_commutators(k, phis[i]);
        auto es = check_gauss_specialization(k, phis[i]);
        rs.insert(rs.end(), es.begin(), es.end());
        auto fs = check_norm_sums(k, phis[i]);
        rs.insert(rs.end(), fs.begin(), fs.end());
        CrossTerms ct = cross_terms(k, phis[i]);
        rs.insert(rs.end(), ct.identities.begin(), ct.identities.end());
        OperatorParams P;
        P.k = k;
        P.alpha = 1; P.beta = 1; P.gamma = 1;
        P.c = GC::i();
        rs.push_back(expand_norm_Hstar(P, phis[i]));
        P.c = GC(1, 2);
        rs.push_back(expand_norm_Hstar(P, phis[i]));
        results[i] = std::move(rs);
    });

    std::vector<IdentityReport> flat;
    for (auto& rs : results) flat.insert(flat.end(), rs.begin(), rs.end());

    bool all_passed = true;
    int refuted_vanishing = 0;
    for (auto& r : flat) {
        all_passed = all_passed && r.passed;
        if (r.vanishing_claim_holds.has_value() && !*r.vanishing_claim_holds) ++refuted_vanishing;
    }

    ordered_json j;
    j["command"] = "verify";
    j["k"] = k;
    j["seed"] = o.seed;
    j["phi_count"] = count;
    j["phi_degree"] = deg;
    j["all_exact_checks_passed"] = all_passed;
    j["vanishing_claims_refuted"] = refuted_vanishing;
    ordered_json arr = ordered_json::array();
    for (auto& r : flat) arr.push_back(report_to_json(r));
    j["reports"] = arr;

    std::ostringstream csv;
    reports_to_csv(flat, csv);
    if (!o.out.empty()) {
        emit(sidecar(o.out, ".json"), j.dump(2) + "\n");
        emit(sidecar(o.out, ".csv"), csv.str());
    } else if (o.format == "csv") {
        emit("", csv.str());
    } else {
        emit("", j.dump(2));
    }
    std::cerr << "verify: " << flat.size() << " checks, "
              << (all_passed ? "all exact" : "FAILURES PRESENT") << ", vanishing claims refuted on "
              << refuted_vanishing << " inputs\n";
    return all_passed ? 0 : 1;
}

// ------------------------------------------------------------------- solve

int run_solve(const CommonOpts& o, const std::string& f_path, const std::string& method) {
    ZPoly f = f_path.empty() ? ZPoly::one() : load_zpoly(f_path);
    SolveReport r = (method == "weak") ? solve_weak_galerkin(f, o.params(), o.trunc())
                                       : solve_min_norm(f, o.params(), o.trunc());
    ordered_json j = solve_report_to_json(r);
    j["command"] = "solve";
    emit(o.out, j.dump(2) + "\n");
    return 0;
}

// ----------------------------------------------------------------- certify

int run_certify(const CommonOpts& o) {
    OperatorParams P = o.params();
    double cc = coercivity_constant(P, o.N);
    double floor = to_double(P.coercivity_lower());
    RightInverseReport ri = right_inverse(P, o.trunc());
    double bound = to_double(ri.bound);

    bool pure = P.pure_alpha() || P.pure_beta() || P.pure_gamma();
    bool coercivity_ok = cc >= floor - 1e-9;
    bool ht_ok = ri.HT_identity_error <= 1e-9;
    bool norm_ok = ri.norm_T_sq <= bound + 1e-6;
    bool pass = coercivity_ok && ht_ok && (pure ? norm_ok : true);

    ordered_json j;
    j["command"] = "certify";
    j["k"] = P.k;
    j["alpha"] = rat_to_string(P.alpha);
    j["beta"] = rat_to_string(P.beta);
    j["gamma"] = rat_to_string(P.gamma);
    j["c"] = P.c.str();
    j["N"] = o.N;
    j["coercivity_constant"] = cc;
    j["coercivity_floor"] = floor;
    j["coercivity_ok"] = coercivity_ok;
    j["right_inverse_norm_sq"] = ri.norm_T_sq;
    j["right_inverse_bound"] = bound;
    j["right_inverse_norm_ok"] = norm_ok;
    j["HT_identity_error"] = ri.HT_identity_error;
    j["pure_case"] = pure;
    j["passed"] = pass;
    emit(o.out, j.dump(2) + "\n");
    std::cerr << "certify: coercivity " << cc << " (floor " << floor << "), |T|^2 " << ri.norm_T_sq
              << " (bound " << bound << ") -> " << (pass ? "ok" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

// ------------------------------------------------------------------- sweep

int run_sweep(const CommonOpts& o, const std::string& kind, const std::string& lambdas,
              const std::string& z0_re, const std::string& z0_im, const std::string& radius,
              int count, int deg) {
    Rng rng(o.seed);
    std::ostringstream ratio_csv, cross_csv;

    if (kind == "mixed") {
        ratio_csv << "k,alpha,beta,gamma,c_re,c_im,N,buffer,ratio,residual\n";
        cross_csv << "k,alpha,beta,gamma,l,gamma_pairing_re,gamma_pairing_im,"
                     "beta_pairing_re,beta_pairing_im,hypothesis_re,hypothesis_im\n";
        std::vector<std::array<int, 3>> abgs = {{1, 1, 0}, {1, 0, 1}, {1, 1, 1}};
        int kmax = std::min(std::max(o.k, 1), 2);
        for (int k = 1; k <= kmax; ++k) {
            for (auto [a, b, g] : abgs) {
                OperatorParams P;
                P.k = k;
                P.alpha = a; P.beta = b; P.gamma = g;
                TruncationSpec tr;
                tr.N = o.N;
                tr.buffer = std::max(o.buffer, 2 * k);
                for (int i = 0; i < count; ++i) {
                    ZPoly f = random_zpoly(rng, deg);
                    SolveReport r = solve_min_norm(f, P, tr);
                    ratio_csv << k << ',' << a << ',' << b << ',' << g << ",0,0," << tr.N << ','
                              << tr.buffer << ',' << r.ratio << ',' << r.residual << "\n";
                }
                ZPoly phi = random_zpoly(rng, deg);
                CrossTerms ct = cross_terms(k, phi, Rat(b), Rat(g));
                for (auto& c : ct.per_l) {
                    cross_csv << k << ',' << a << ',' << b << ',' << g << ',' << c.l << ','
                              << c.gamma_pairing.coeff.re.str() << ',' << c.gamma_pairing.coeff.im.str() << ','
                              << c.beta_pairing.coeff.re.str() << ',' << c.beta_pairing.coeff.im.str() << ','
                              << c.hypothesis.coeff.re.str() << ',' << c.hypothesis.coeff.im.str() << "\n";
                }
            }
        }
        if (!o.out.empty()) {
            emit(sidecar(o.out, ".csv"), ratio_csv.str());
            emit(sidecar(o.out, "_cross.csv"), cross_csv.str());
        } else {
            emit("", ratio_csv.str() + "\n" + cross_csv.str());
        }
        return 0;
    }

    if (kind == "scaling") {
        ratio_csv << "case,lambda,z0_re,z0_im,k,ratio\n";
        WeightSpec w;
        w.z0 = GC(rat_from_string(z0_re), rat_from_string(z0_im));
        std::stringstream ls(lambdas);
        std::string tok;
        std::vector<Rat> lams;
        while (std::getline(ls, tok, ',')) lams.push_back(rat_from_string(tok));
        if (lams.empty()) lams = {Rat(1, 2), Rat(1), Rat(2)};
        for (const Rat& lam : lams)
            for (int k = 1; k <= std::max(1, std::min(o.k, 2)); ++k) {
                w.lambda = lam;
                ZPoly f = random_zpoly(rng, deg, 4);
                OperatorParams Pb;
                Pb.k = k; Pb.beta = 1;
                RescaleReport rb = rescale_solve(f, Pb, w, o.trunc());
                ratio_csv << "dbar_k," << rat_to_string(lam) << ',' << z0_re << ',' << z0_im << ','
                          << k << ',' << rb.ratio << "\n";
                OperatorParams Pa;
                Pa.k = k; Pa.alpha = 1;
                RescaleReport ra = rescale_solve(f, Pa, w, o.trunc());
                ratio_csv << "ddbar_k," << rat_to_string(lam) << ',' << z0_re << ',' << z0_im << ','
                          << k << ',' << ra.ratio << "\n";
            }
        emit(o.out.empty() ? "" : sidecar(o.out, ".csv"), ratio_csv.str());
        return 0;
    }

    if (kind == "domain") {
        ratio_csv << "case,radius,factor,lhs,rhs\n";
        QuadratureGrid grid;
        std::vector<Rat> radii = {Rat(1, 2), Rat(1)};
        if (!radius.empty()) radii = {rat_from_string(radius)};
        for (const Rat& rad : radii) {
            DomainSpec dom;
            dom.radius = rad;
            dom.center = GC(rat_from_string(z0_re), rat_from_string(z0_im));
            ZPoly f = random_zpoly(rng, 2, 3);
            for (const char* which : {"dbar_k", "ddbar_k"}) {
                OperatorParams P;
                P.k = 1;
                if (std::string(which) == "dbar_k") P.beta = 1; else P.alpha = 1;
                DomainReport r = solve_on_domain(f, P, dom, o.trunc(), grid);
                ratio_csv << which << ',' << rat_to_string(rad) << ',' << r.factor << ','
                          << r.norm_u_disc << ',' << r.factor * r.norm_f_disc << "\n";
            }
        }
        emit(o.out.empty() ? "" : sidecar(o.out, ".csv"), ratio_csv.str());
        return 0;
    }

    throw ConfigError("unknown sweep kind " + kind);
}

// ------------------------------------------------------------------ oracle

int run_oracle(const CommonOpts& o, int radial, int angular) {
    QuadratureGrid grid;
    grid.radial_nodes = radial;
    grid.angular_nodes = angular;

    double worst_rel = 0;
    for (int m = 0; m <= 16; ++m)
        for (int n = 0; n <= 16; ++n) {
            if (m + n > 32 || (m + n) % 4 != 0) continue;  // a spread of exact rows
            std::complex<double> got = integrate_gaussian(ZPoly::monomial(m, n), grid);
            std::complex<double> want =
                (m == n) ? std::complex<double>(to_double(Rat(factorial_big(m))) * M_PI, 0) : 0;
            // relative to the integral of |z^m zb^n|, the natural magnitude scale
            double scale = M_PI * std::tgamma(0.5 * (m + n) + 1.0);
            worst_rel = std::max(worst_rel, std::abs(got - want) / std::max(1.0, scale));
        }

    Rng rng(o.seed);
    auto battery = default_bump_battery();
    double worst_weak = 0;
    std::vector<OperatorParams> cases;
    for (int k = 1; k <= 2; ++k) {
        OperatorParams Pa; Pa.k = k; Pa.alpha = 1;
        OperatorParams Pb; Pb.k = k; Pb.beta = 1;
        cases.push_back(Pa);
        cases.push_back(Pb);
    }
    QuadratureGrid wgrid;
    wgrid.radial_nodes = 128;
    wgrid.angular_nodes = 64;
    for (int i = 0; i < 10; ++i) {
        const OperatorParams& P = cases[i % cases.size()];
        ZPoly u = random_zpoly(rng, 4, 4);
        ZPoly f = apply_H(P, u);
        worst_weak = std::max(worst_weak, weak_residual(u, f, P, battery, wgrid));
    }

    bool pass = worst_rel <= 1e-10 && worst_weak <= 1e-6;
    ordered_json j;
    j["command"] = "oracle";
    j["radial_nodes"] = radial;
    j["angular_nodes"] = angular;
    j["monomial_worst_relative_error"] = worst_rel;
    j["weak_residual_worst"] = worst_weak;
    j["passed"] = pass;
    emit(o.out, j.dump(2) + "\n");
    std::cerr << "oracle: monomial rel err " << worst_rel << ", weak residual " << worst_weak
              << " -> " << (pass ? "ok" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted-Gaussian operator calculus: verify, solve, certify, sweep, oracle"};
    app.require_subcommand(1);

    CommonOpts vo, so, co, wo, oo;
    int v_count = 50, v_deg = 6;
    std::string f_path, method = "strong";
    std::string sweep_kind = "mixed", lambdas, z0_re = "0", z0_im = "0", radius;
    int s_count = 5, s_deg = 6;
    int radial = 64, angular = 64;

    CLI::App* verify = app.add_subcommand("verify", "run the exact identity suites");
    add_param_flags(verify, vo);
    verify->add_option("--count", v_count, "number of random test polynomials");
    verify->add_option("--deg", v_deg, "max total degree of test polynomials");

    CLI::App* solve = app.add_subcommand("solve", "minimum-norm solve of H u = f");
    add_param_flags(solve, so);
    solve->add_option("--f", f_path, "source polynomial (ZPoly JSON file); default f = 1");
    solve->add_option("--method", method, "strong (exact H u = f) or weak (Galerkin)")
        ->check(CLI::IsMember({"strong", "weak"}));

    CLI::App* certify = app.add_subcommand("certify", "coercivity and right-inverse bounds");
    add_param_flags(certify, co);

    CLI::App* sweep = app.add_subcommand("sweep", "parameter sweeps emitting ratio tables");
    add_param_flags(sweep, wo);
    sweep->add_option("--kind", sweep_kind, "mixed | scaling | domain")
        ->check(CLI::IsMember({"mixed", "scaling", "domain"}));
    sweep->add_option("--lambda", lambdas, "comma-separated scales for --kind scaling");
    sweep->add_option("--z0-re", z0_re, "weight center, real part");
    sweep->add_option("--z0-im", z0_im, "weight center, imaginary part");
    sweep->add_option("--radius", radius, "disc radius for --kind domain (rational)");
    sweep->add_option("--count", s_count, "solves per grid point (mixed)");
    sweep->add_option("--deg", s_deg, "max degree of random f");

    CLI::App* oracle = app.add_subcommand("oracle", "quadrature cross-validation");
    add_param_flags(oracle, oo);
    oracle->add_option("--radial-nodes", radial, "radial quadrature nodes");
    oracle->add_option("--angular-nodes", angular, "angular quadrature nodes");

    try {
        app.parse(argc, argv);
        if (verify->parsed()) return run_verify(vo, v_count, v_deg);
        if (solve->parsed()) return run_solve(so, f_path, method);
        if (certify->parsed()) return run_certify(co);
        if (sweep->parsed())
            return run_sweep(wo, sweep_kind, lambdas, z0_re, z0_im, radius, s_count, s_deg);
        if (oracle->parsed()) return run_oracle(oo, radial, angular);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const QuadratureNotConverged& e) {
        std::cerr << "numerical non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
