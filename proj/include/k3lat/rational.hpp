#pragma once

// Exact integer and rational arithmetic used throughout the library.
//
// All quantities are exact: arbitrary-precision integers (boost cpp_int)
// and rationals kept in lowest terms with positive denominator
// (boost cpp_rational guarantees both).  Nothing here ever rounds.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3lat {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline bool is_integer(const Rat& x) { return rat_den(x) == 1; }

// Prints "p/q", or just "p" for integers.
inline std::string rat_str(const Rat& x) {
    std::ostringstream os;
    os << rat_num(x);
    if (rat_den(x) != 1) os << "/" << rat_den(x);
    return os.str();
}

inline std::string int_str(const Int& n) {
    std::ostringstream os;
    os << n;
    return os.str();
}

// Parses "p", "-p", "p/q".  Whitespace around tokens is tolerated.
inline Rat parse_rat(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = t.find('/');
    auto parse_int = [](const std::string& u) -> Int {
        if (u.empty() || (u.size() == 1 && (u[0] == '+' || u[0] == '-')))
            throw std::invalid_argument("bad integer literal");
        for (size_t i = 0; i < u.size(); ++i) {
            char c = u[i];
            if (i == 0 && (c == '+' || c == '-')) continue;
            if (!isdigit(static_cast<unsigned char>(c)))
                throw std::invalid_argument("bad integer literal: " + u);
        }
        return Int(u);
    };
    if (slash == std::string::npos) return Rat(parse_int(t));
    Int num = parse_int(t.substr(0, slash));
    Int den = parse_int(t.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
}

inline Int parse_int(const std::string& s) {
    Rat r = parse_rat(s);
    if (!is_integer(r)) throw std::invalid_argument("expected an integer: " + s);
    return rat_num(r);
}

inline bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    return boost::multiprecision::miller_rabin_test(n, 32);
}

// n = p1^e1 * ... * pk^ek by trial division; intended for the modest
// integers that show up in discriminants and diameters.
inline std::map<Int, int> factorize(Int n) {
    if (n == 0) throw std::domain_error("factorize(0)");
    if (n < 0) n = -n;
    std::map<Int, int> out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            ++out[p];
            n /= p;
        }
    }
    if (n > 1) ++out[n];
    return out;
}

// Largest squarefree divisor with the same square class, i.e. the product
// of primes occurring to odd exponent.
inline Int squarefree_part(const Int& n) {
    Int out = 1;
    for (const auto& [p, e] : factorize(n))
        if (e % 2 == 1) out *= p;
    return out;
}

// Strips all prime factors <= bound; the input is "bound-smooth" iff the
// result is 1.
inline Int remove_small_factors(Int n, const Int& bound) {
    if (n == 0) throw std::domain_error("remove_small_factors(0)");
    if (n < 0) n = -n;
    for (Int p = 2; p <= bound && p * p <= n; p += (p == 2 ? 1 : 2))
        while (n % p == 0) n /= p;
    // n may itself be a single prime <= bound
    if (n > 1 && n <= bound) n = 1;
    return n;
}

inline bool is_smooth(const Int& n, const Int& bound) {
    return remove_small_factors(n, bound) == 1;
}

// p-adic valuation; u receives the prime-to-p part.
inline int p_valuation(Int n, const Int& p, Int* u = nullptr) {
    if (n == 0) throw std::domain_error("p_valuation(0)");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    if (u) *u = n;
    return v;
}

// r^k for integer k of either sign (k < 0 requires r != 0).
inline Rat rat_pow(const Rat& r, int k) {
    if (k == 0) return Rat(1);
    if (r == 0 && k < 0) throw std::domain_error("0 to a negative power");
    Rat base = k > 0 ? r : Rat(1) / r;
    int e = k > 0 ? k : -k;
    Rat out(1);
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

}  // namespace k3lat
