#pragma once

#include "wfock/rational.hpp"
#include "wfock/zpoly.hpp"

#include <cstdint>
#include <random>

namespace wfock {

/// Deterministic generator: mt19937 with hand-rolled draws (std distributions
/// differ across standard libraries; raw engine output does not).
class Rng {
public:
    explicit Rng(std::uint32_t seed) : eng_(seed) {}

    std::uint32_t next_u32() { return eng_(); }

    /// Uniform in [lo, hi], unbiased via rejection.
    int uniform_int(int lo, int hi) {
        std::uint32_t span = static_cast<std::uint32_t>(hi - lo + 1);
        std::uint32_t limit = UINT32_MAX - UINT32_MAX % span;
        std::uint32_t v;
        do { v = next_u32(); } while (v >= limit);
        return lo + static_cast<int>(v % span);
    }

    Rat small_rational() {
        int num = uniform_int(-9, 9);
        int den = uniform_int(1, 4);
        return Rat(num, den);
    }

    GC small_gaussian_rational() { return GC(small_rational(), small_rational()); }

private:
    std::mt19937 eng_;
};

/// Random charge-mixed polynomial: `terms` draws of monomials with total
/// degree <= max_total_degree and small complex-rational coefficients.
inline ZPoly random_zpoly(Rng& rng, int max_total_degree, int terms = 8) {
    ZPoly p;
    for (int t = 0; t < terms; ++t) {
        int d = rng.uniform_int(0, max_total_degree);
        int m = rng.uniform_int(0, d);
        p.add_term({m, d - m}, rng.small_gaussian_rational());
    }
    return p;
}

}  // namespace wfock
