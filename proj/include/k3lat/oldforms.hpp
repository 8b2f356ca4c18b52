#pragma once

// Atkin-Lehner action on oldform spaces.  For a newform f of level J and
// weight w, the span of a_{P^0} f, ..., a_{P^d} f at level J*P^d carries
// the involution w_P(a_{P^i} f) = s * p^{(d-2i)(w/2)} a_{P^{d-i}} f,
// where p is the norm of P and s the Atkin-Lehner eigenvalue on f
// (s = +1 when P does not divide J).

#include "k3lat/gram_lattice.hpp"

#include <string>

namespace k3lat {

struct OldformSpace {
    std::string newform_label;
    Int p;       // norm of the prime P
    int w = 2;   // weight, even
    int d = 0;   // power of P raised
    int s = 1;   // Atkin-Lehner eigenvalue on the newform, +1 or -1
};

inline bool is_prime_power(Int n) {
    if (n < 2) return false;
    auto f = factorize(n);
    return f.size() == 1;
}

inline void validate_oldform_space(const OldformSpace& sp) {
    if (sp.p < 2) throw std::invalid_argument("p must be at least 2");
    if (sp.w <= 0 || sp.w % 2 != 0) throw std::invalid_argument("weight must be a positive even integer");
    if (sp.d < 0) throw std::invalid_argument("d must be nonnegative");
    if (sp.s != 1 && sp.s != -1) throw std::invalid_argument("Atkin-Lehner eigenvalue must be +1 or -1");
}

inline bool oldform_norm_is_prime_power(const OldformSpace& sp) { return is_prime_power(sp.p); }

// Matrix of w_P in the basis (a_{P^0} f, ..., a_{P^d} f): antidiagonal,
// with exact rational entries when the exponent goes negative.
inline RatMatrix al_matrix(const OldformSpace& sp) {
    validate_oldform_space(sp);
    int n = sp.d + 1;
    RatMatrix m(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i <= sp.d; ++i) {
        int exp = (sp.d - 2 * i) * (sp.w / 2);
        m[sp.d - i][i] = Rat(sp.s) * rat_pow(Rat(sp.p), exp);
    }
    return m;
}

inline bool al_involution_check(const OldformSpace& sp) {
    RatMatrix m = al_matrix(sp);
    int n = static_cast<int>(m.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Rat s(0);
            for (int k = 0; k < n; ++k) s += m[i][k] * m[k][j];
            if (s != Rat(i == j ? 1 : 0)) return false;
        }
    return true;
}

}  // namespace k3lat
