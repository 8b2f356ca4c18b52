#pragma once

// Chinese remaindering and lattice-based rational reconstruction.
//
// To recover a = b/c from its residues a_i mod p_i, consider the plane
// lattice { (b, c) : b = c * a_i mod p_i for all i }.  The pair (b, c)
// for the true fraction lies in it, and once the modulus outgrows b^2+c^2
// it is the shortest vector, which Gauss reduction finds.  The margin
// below quantifies "outgrows": we only trust a vector whose norm^2 is at
// most prod(p_i) / 2^margin.

#include "k3lat/rational.hpp"

#include <array>
#include <optional>
#include <vector>

namespace k3lat {

using Vec2 = std::array<Int, 2>;

struct PlaneLattice {
    Vec2 u, v;  // basis rows

    Int det() const { return u[0] * v[1] - u[1] * v[0]; }
};

inline Int dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline Int norm2(const Vec2& a) { return dot(a, a); }

// Lagrange (a.k.a. Gauss) reduction.  Returns a basis whose first vector
// realizes the lattice minimum and whose second is shortest among vectors
// independent of the first.  The lattice itself is unchanged.
inline PlaneLattice gauss_reduce(PlaneLattice lat) {
    if (lat.det() == 0) throw std::domain_error("singular lattice");
    Vec2 a = lat.u, b = lat.v;
    if (norm2(a) > norm2(b)) std::swap(a, b);
    while (true) {
        // nearest integer to dot(a,b)/norm2(a)
        Int n = dot(a, b), d = norm2(a);
        Int m = (2 * n + (n >= 0 ? d : -d)) / (2 * d);
        b[0] -= m * a[0];
        b[1] -= m * a[1];
        if (norm2(b) >= norm2(a)) break;
        std::swap(a, b);
    }
    return {a, b};
}

struct ResidueEntry {
    Int prime;
    Int residue;  // normalized to [0, prime)
};

// Coordinates modulo several pairwise-distinct primes.
class ResidueSystem {
  public:
    explicit ResidueSystem(std::vector<ResidueEntry> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) throw std::invalid_argument("residue system needs at least one entry");
        for (auto& e : entries_) {
            if (e.prime < 2) throw std::invalid_argument("modulus must be at least 2");
            if (!is_probable_prime(e.prime))
                throw std::invalid_argument("modulus is not prime: " + int_str(e.prime));
            e.residue %= e.prime;
            if (e.residue < 0) e.residue += e.prime;
        }
        for (size_t i = 0; i < entries_.size(); ++i)
            for (size_t j = i + 1; j < entries_.size(); ++j)
                if (entries_[i].prime == entries_[j].prime)
                    throw std::invalid_argument("duplicate prime: " + int_str(entries_[i].prime));
    }

    const std::vector<ResidueEntry>& entries() const { return entries_; }

    Int modulus() const {
        Int m = 1;
        for (const auto& e : entries_) m *= e.prime;
        return m;
    }

  private:
    std::vector<ResidueEntry> entries_;
};

// Extended gcd: returns g = gcd(a,b) and x,y with a*x + b*y = g.
inline Int ext_gcd(const Int& a, const Int& b, Int& x, Int& y) {
    if (b == 0) {
        x = (a >= 0) ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    Int x1, y1;
    Int g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

inline Int mod_inverse(const Int& a, const Int& m) {
    Int x, y;
    Int g = ext_gcd(a % m, m, x, y);
    if (g != 1) throw std::domain_error("not invertible mod " + int_str(m));
    x %= m;
    if (x < 0) x += m;
    return x;
}

// The unique residue mod prod(p_i) that agrees with every entry.
inline std::pair<Int, Int> crt_combine(const ResidueSystem& sys) {
    Int mod = 1, res = 0;
    for (const auto& e : sys.entries()) {
        // combine (res mod mod) with (e.residue mod e.prime)
        Int inv = mod_inverse(mod % e.prime, e.prime);
        Int t = ((e.residue - res) % e.prime) * inv % e.prime;
        if (t < 0) t += e.prime;
        res += mod * t;
        mod *= e.prime;
    }
    return {mod, res};
}

inline constexpr int kDefaultConfidenceMargin = 10;

// Result norm^2 must not exceed prod(p_i)/2^margin, the denominator must be
// a unit mod every prime, and a single prime never convinces us of anything.
inline std::optional<Rat> rational_reconstruct(const ResidueSystem& sys,
                                               int margin = kDefaultConfidenceMargin) {
    if (sys.entries().size() < 2) return std::nullopt;
    auto [mod, res] = crt_combine(sys);
    PlaneLattice lat{{mod, Int(0)}, {res, Int(1)}};
    PlaneLattice red = gauss_reduce(lat);
    Vec2 best = red.u;
    // accept iff norm^2 * 2^margin <= modulus
    if (norm2(best) * (Int(1) << margin) > mod) return std::nullopt;
    Int b = best[0], c = best[1];
    if (c == 0) return std::nullopt;
    if (c < 0) {
        b = -b;
        c = -c;
    }
    for (const auto& e : sys.entries())
        if (c % e.prime == 0) return std::nullopt;
    return Rat(b, c);
}

}  // namespace k3lat
