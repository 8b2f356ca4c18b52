#pragma once

// Global sanity checks for genus-1 fibrations over P^1: Euler-number
// bookkeeping, plurigenera from the canonical bundle formula (with
// multiple fibers), Kodaira dimension, and the canonical self-
// intersection of a quotient by an involution with isolated fixed points.

#include "k3lat/kodaira.hpp"

#include <numeric>
#include <optional>
#include <vector>

namespace k3lat {

struct FibrationData {
    int chi = 1;
    std::vector<FiberInstance> fibers;
    std::vector<int> multiple_fibers;  // multiplicities m_i >= 2
};

inline void validate_fibration(const FibrationData& fd) {
    if (fd.chi < 1) throw std::invalid_argument("chi must be positive");
    for (int m : fd.multiple_fibers)
        if (m < 2) throw std::invalid_argument("multiple fiber multiplicity must be >= 2");
}

struct EulerCheck {
    bool declared_complete = false;
    int deficit = 0;  // 12*chi - sum of fiber Euler numbers

    bool ok() const { return !declared_complete || deficit == 0; }
};

// Multiple fibers of type mI_0 are smooth curves and contribute nothing
// to the Euler number, so only the listed singular fibers count.
inline EulerCheck euler_check(const FibrationData& fd, bool declared_complete) {
    validate_fibration(fd);
    int sum = euler_sum(fd.fibers);
    int deficit = 12 * fd.chi - sum;
    if (deficit < 0) throw std::domain_error("overfull configuration");
    return {declared_complete, deficit};
}

// h^0(nK) for a relatively minimal genus-1 fibration over P^1:
// nK has degree n(chi-2) + sum floor(n(m_i-1)/m_i) on the base.
inline Int plurigenus(const FibrationData& fd, int n) {
    validate_fibration(fd);
    if (n <= 0) throw std::invalid_argument("plurigenus needs n >= 1");
    Int deg = Int(n) * (fd.chi - 2);
    for (int m : fd.multiple_fibers) deg += Int(n) * (m - 1) / m;
    Int h0 = deg + 1;
    return h0 > 0 ? h0 : Int(0);
}

enum class KodairaDimension { minus_infinity, zero, one };

inline std::string kodaira_dimension_str(KodairaDimension k) {
    switch (k) {
        case KodairaDimension::minus_infinity: return "-inf";
        case KodairaDimension::zero: return "0";
        case KodairaDimension::one: return "1";
    }
    throw std::logic_error("unreachable");
}

// Decided by the growth of P_n: linear growth iff the Q-degree of K is
// positive; otherwise P_n is 0 or 1 and we probe n <= 12*lcm(m_i).
inline KodairaDimension kodaira_dimension(const FibrationData& fd) {
    validate_fibration(fd);
    Rat deg = Rat(fd.chi - 2);
    long lcm = 1;
    for (int m : fd.multiple_fibers) {
        deg += Rat(m - 1, m);
        lcm = std::lcm(lcm, static_cast<long>(m));
    }
    if (deg > 0) return KodairaDimension::one;
    for (long n = 1; n <= 12 * lcm; ++n)
        if (plurigenus(fd, static_cast<int>(n)) > 0) return KodairaDimension::zero;
    return KodairaDimension::minus_infinity;
}

struct QuotientCanonicalSquare {
    std::optional<int> exact;
    std::string note;
};

// K^2 of the quotient by an involution with isolated fixed points.  When
// the fixed points sit at smooth points acted on by -1 the quotient has
// canonical singularities and K_T^2 = K_S^2 / 2 exactly; otherwise only
// the strict inequality 2*K_T^2 < K_S^2 is expected.
inline QuotientCanonicalSquare quotient_canonical_square(int ks2, bool fixed_points_canonical) {
    if (!fixed_points_canonical)
        return {std::nullopt,
                "K_T^2 <= " + std::to_string(ks2 / 2) + " with strict drop expected (2*K_T^2 < K_S^2)"};
    if (ks2 % 2 != 0) throw std::domain_error("K_S^2 must be even when the fixed points are canonical");
    return {ks2 / 2, ""};
}

}  // namespace k3lat
