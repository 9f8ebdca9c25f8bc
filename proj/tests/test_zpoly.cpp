#include <doctest.h>

#include "wfock/rng.hpp"
#include "wfock/zpoly.hpp"

using namespace wfock;

namespace {
ZPoly Z() { return ZPoly::z(); }
ZPoly Zb() { return ZPoly::zbar(); }
}

TEST_CASE("rational parsing round-trips") {
    CHECK(rat_to_string(rat_from_string("-7/2")) == "-7/2");
    CHECK(rat_to_string(rat_from_string("42")) == "42");
    CHECK(rat_from_string("6/4") == Rat(3, 2));
    CHECK_THROWS_AS(rat_from_string("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string("0.5"), std::invalid_argument);
}

TEST_CASE("linear_combine cancels and scales") {
    CHECK(linear_combine({{GC(1), Z()}, {GC(-1), Z()}}).is_zero());
    CHECK(linear_combine({{GC(2), ZPoly::one()}}) == ZPoly::constant(GC(2)));
    ZPoly mixed = linear_combine({{GC(1), Z()}, {GC::i(), Zb()}});
    CHECK(mixed.coeff(1, 0) == GC(1));
    CHECK(mixed.coeff(0, 1) == GC::i());
}

TEST_CASE("mul_monomial shifts exponents") {
    CHECK(mul_monomial(ZPoly::one(), 0, 1) == Zb());
    CHECK(mul_monomial(Z(), 1, 0) == ZPoly::monomial(2, 0));
    ZPoly p = mul_monomial(Z() + Zb(), 1, 1);
    CHECK(p == ZPoly::monomial(2, 1) + ZPoly::monomial(1, 2));
}

TEST_CASE("Wirtinger derivatives on monomials") {
    CHECK(d_z(ZPoly::monomial(2, 0)) == GC(2) * Z());
    CHECK(d_z(ZPoly::monomial(0, 3)).is_zero());
    CHECK(d_z(ZPoly::monomial(2, 1), 2) == GC(2) * Zb());
    CHECK(d_zbar(ZPoly::monomial(0, 2)) == GC(2) * Zb());
    CHECK(d_zbar(Z()).is_zero());
    CHECK(d_zbar(ZPoly::monomial(1, 2), 2) == GC(2) * Z());
    CHECK(d_z(ZPoly::one(), 0) == ZPoly::one());
}

TEST_CASE("gauss_derivative closed forms") {
    CHECK(gauss_derivative(0, 1) == -Z());
    CHECK(gauss_derivative(1, 0) == -Zb());
    CHECK(gauss_derivative(1, 1) == ZPoly::monomial(1, 1) - ZPoly::one());
    for (int i = 0; i <= 10; ++i) {
        ZPoly want = GC(Rat(i % 2 ? -1 : 1)) * ZPoly::monomial(0, i);
        CHECK(gauss_derivative(i, 0) == want);
        ZPoly wantj = GC(Rat(i % 2 ? -1 : 1)) * ZPoly::monomial(i, 0);
        CHECK(gauss_derivative(0, i) == wantj);
    }
}

TEST_CASE("gauss_derivative matches the weighted-differentiation recurrence") {
    // P -> d_zbar(P) - z P for a dbar step, P -> d_z(P) - zb P for a d step
    for (int i = 0; i + 0 <= 8; ++i)
        for (int j = 0; i + j <= 8; ++j) {
            ZPoly p = ZPoly::one();
            for (int t = 0; t < j; ++t) p = d_zbar(p) - mul_monomial(p, 1, 0);
            for (int t = 0; t < i; ++t) p = d_z(p) - mul_monomial(p, 0, 1);
            CHECK(gauss_derivative(i, j) == p);
        }
}

TEST_CASE("mixed partials commute") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        ZPoly p = random_zpoly(rng, 10);
        int i = rng.uniform_int(0, 4), j = rng.uniform_int(0, 4);
        CHECK(d_z(d_zbar(p, j), i) == d_zbar(d_z(p, i), j));
    }
}

TEST_CASE("Leibniz rule for first derivatives") {
    Rng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        ZPoly p = random_zpoly(rng, 6), q = random_zpoly(rng, 6);
        CHECK(d_z(p * q) == d_z(p) * q + p * d_z(q));
        CHECK(d_zbar(p * q) == d_zbar(p) * q + p * d_zbar(q));
    }
}

TEST_CASE("conj_flip is an involution matching complex conjugation") {
    Rng rng(13);
    ZPoly p = random_zpoly(rng, 5);
    CHECK(p.conj_flip().conj_flip() == p);
    std::complex<double> at(0.3, -0.8);
    CHECK(std::abs(p.conj_flip().eval(at) - std::conj(p.eval(at))) < 1e-12);
}

TEST_CASE("translate composes and evaluates correctly") {
    Rng rng(14);
    ZPoly p = random_zpoly(rng, 5);
    GC t(Rat(1, 2), Rat(-1, 3));
    ZPoly shifted = translate(p, t);
    std::complex<double> zv(0.25, 0.5), tv(0.5, -1.0 / 3.0);
    CHECK(std::abs(shifted.eval(zv) - p.eval(zv + tv)) < 1e-12);
    CHECK(translate(shifted, -t) == p);
}

TEST_CASE("JSON round trip preserves canonical form") {
    Rng rng(15);
    ZPoly p = random_zpoly(rng, 6);
    auto j = zpoly_to_json(p);
    CHECK(zpoly_from_json(j) == p);
    // graded-lex order in the serialized term list
    auto terms = j["terms"];
    for (std::size_t i = 1; i < terms.size(); ++i) {
        int dm = terms[i - 1]["m"].get<int>() + terms[i - 1]["n"].get<int>();
        int dc = terms[i]["m"].get<int>() + terms[i]["n"].get<int>();
        CHECK((dm < dc || (dm == dc && terms[i - 1]["m"].get<int>() < terms[i]["m"].get<int>())));
    }
    CHECK_THROWS_AS(zpoly_from_json(nlohmann::json::parse(R"({"terms":[{"m":-1,"n":0,"re":"1","im":"0"}]})")),
                    std::invalid_argument);
}
