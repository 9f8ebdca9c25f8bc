#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wfock {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt factorial_big(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Rat factorial_rat(int n) { return Rat(factorial_big(n)); }

inline BigInt binomial_big(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

/// Falling factorial n!/(n-k)!; zero when k > n.
inline BigInt falling_big(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) r *= (n - i);
    return r;
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Renders p/q with no denominator when q == 1 ("3", "-7/2").
inline std::string rat_to_string(const Rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

/// Parses "p", "-p/q" (decimal-free). Throws std::invalid_argument on junk.
inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("bad rational literal '" + s + "': " + e.what());
    }
}

/// Complex number with exact rational real and imaginary parts.
struct GC {
    Rat re{0};
    Rat im{0};

    GC() = default;
    GC(Rat r) : re(std::move(r)) {}
    GC(int r) : re(r) {}
    GC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GC(int r, int i) : re(r), im(i) {}

    static GC i() { return GC(0, 1); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GC conj() const { return GC(re, -im); }
    Rat norm_sq() const { return re * re + im * im; }

    friend GC operator+(const GC& a, const GC& b) { return GC(a.re + b.re, a.im + b.im); }
    friend GC operator-(const GC& a, const GC& b) { return GC(a.re - b.re, a.im - b.im); }
    friend GC operator-(const GC& a) { return GC(-a.re, -a.im); }
    friend GC operator*(const GC& a, const GC& b) {
        return GC(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend GC operator/(const GC& a, const GC& b) {
        Rat n = b.norm_sq();
        if (n == 0) throw std::domain_error("division by zero GC");
        return GC((a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n);
    }
    // hidden friend: keeps Rat-typed operands out of unrelated overload sets
    friend GC operator*(const Rat& r, const GC& c) { return GC(r * c.re, r * c.im); }
    GC& operator+=(const GC& o) { re += o.re; im += o.im; return *this; }
    GC& operator-=(const GC& o) { re -= o.re; im -= o.im; return *this; }
    GC& operator*=(const GC& o) { *this = *this * o; return *this; }

    friend bool operator==(const GC& a, const GC& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const GC& a, const GC& b) { return !(a == b); }

    std::string str() const {
        if (im == 0) return rat_to_string(re);
        return rat_to_string(re) + (im > 0 ? "+" : "") + rat_to_string(im) + "i";
    }
};

}  // namespace wfock
