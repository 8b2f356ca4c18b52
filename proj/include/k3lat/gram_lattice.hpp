#pragma once

// Quadratic lattices presented by Gram matrices, with the scaling and
// sub/overlattice calculus needed for Picard and transcendental lattices.
//
// Conventions: twist(L, r) = L(r) rescales the form; scale_vectors(L, r)
// = rL rescales the vectors, so gram(rL) = gram(L(r^2)).  We always store
// the honest determinant; callers decide whether they care about the sign.

#include "k3lat/rational.hpp"

#include <algorithm>
#include <set>
#include <vector>

namespace k3lat {

using RatMatrix = std::vector<std::vector<Rat>>;
using IntMatrix = std::vector<std::vector<Int>>;

inline Rat rat_matrix_det(RatMatrix m) {
    size_t n = m.size();
    Rat det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return Rat(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rat f = m[r][col] / m[col][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

// Solves A x = b for nondegenerate square A.
inline std::vector<Rat> rat_solve(RatMatrix a, std::vector<Rat> b) {
    size_t n = a.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::domain_error("singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rat f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rat> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// Row-style Hermite normal form of an integer matrix (rows span the same
// lattice).  Returns the nonzero rows.
inline IntMatrix hermite_normal_form(IntMatrix m) {
    if (m.empty()) return m;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // clear column c below row r with gcd steps
        for (size_t i = r + 1; i < rows; ++i) {
            while (m[i][c] != 0) {
                if (m[r][c] == 0) {
                    std::swap(m[r], m[i]);
                    continue;
                }
                Int q = m[i][c] / m[r][c];
                for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) std::swap(m[r], m[i]);
            }
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) m[r][j] = -m[r][j];
        // reduce entries above the pivot
        for (size_t i = 0; i < r; ++i) {
            Int q = m[i][c] / m[r][c];
            if (m[i][c] % m[r][c] < 0) q -= 1;
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

class GramLattice {
  public:
    explicit GramLattice(RatMatrix gram) : gram_(std::move(gram)) {
        size_t n = gram_.size();
        if (n == 0) throw std::invalid_argument("rank-0 lattice not supported");
        for (const auto& row : gram_)
            if (row.size() != n) throw std::invalid_argument("gram matrix must be square");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (gram_[i][j] != gram_[j][i])
                    throw std::invalid_argument("gram matrix must be symmetric");
        det_ = rat_matrix_det(gram_);
        if (det_ == 0) throw std::invalid_argument("degenerate gram matrix");
    }

    size_t rank() const { return gram_.size(); }
    const RatMatrix& gram() const { return gram_; }
    const Rat& det() const { return det_; }

    bool operator==(const GramLattice& o) const { return gram_ == o.gram_; }

  private:
    RatMatrix gram_;
    Rat det_;
};

inline Rat disc(const GramLattice& l) { return l.det(); }

// L(r): same underlying group, form multiplied by r.
inline GramLattice twist(const GramLattice& l, const Rat& r) {
    if (r == 0) throw std::domain_error("twist by zero");
    RatMatrix g = l.gram();
    for (auto& row : g)
        for (auto& x : row) x *= r;
    return GramLattice(std::move(g));
}

// rL: vectors scaled by r, so the form picks up r^2.
inline GramLattice scale_vectors(const GramLattice& l, const Rat& r) {
    if (r == 0) throw std::domain_error("scale by zero");
    return twist(l, r * r);
}

enum class OverlatticeIntegrality { none, integral, even };

// The overlattice L + Z*(v/d), for v in L not divisible by d.  The index
// must come out to exactly d (so disc drops by d^2); a v whose fraction
// v/d reduces is rejected.
inline GramLattice adjoin_fraction(const GramLattice& l, const std::vector<Int>& v, const Int& d,
                                   OverlatticeIntegrality required = OverlatticeIntegrality::none) {
    size_t n = l.rank();
    if (d < 2) throw std::invalid_argument("denominator must be at least 2");
    if (v.size() != n) throw std::invalid_argument("vector length must equal rank");
    Int content = 0;
    for (const auto& x : v) content = boost::multiprecision::gcd(content, x);
    if (content == 0) throw std::invalid_argument("zero vector");
    if (boost::multiprecision::gcd(content, d) != 1)
        throw std::domain_error("vector already divisible");

    // basis of d*L' = <d*e_1, ..., d*e_n, v> inside Z^n, then rescale
    IntMatrix rows(n + 1, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) rows[i][i] = d;
    for (size_t j = 0; j < n; ++j) rows[n][j] = v[j];
    IntMatrix basis = hermite_normal_form(std::move(rows));
    if (basis.size() != n) throw std::domain_error("overlattice basis has wrong rank");

    RatMatrix b(n, std::vector<Rat>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) b[i][j] = Rat(basis[i][j], d);

    const RatMatrix& g = l.gram();
    RatMatrix out(n, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            Rat s(0);
            for (size_t a = 0; a < n; ++a)
                for (size_t c = 0; c < n; ++c) s += b[i][a] * g[a][c] * b[j][c];
            out[i][j] = s;
        }

    if (required != OverlatticeIntegrality::none) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (!is_integer(out[i][j])) throw std::domain_error("non-integral overlattice");
        if (required == OverlatticeIntegrality::even)
            for (size_t i = 0; i < n; ++i)
                if (rat_num(out[i][i]) % 2 != 0) throw std::domain_error("non-integral overlattice");
    }
    return GramLattice(std::move(out));
}

struct SquareClass {
    int sign;        // +1 or -1
    Int squarefree;  // positive squarefree part

    bool operator==(const SquareClass& o) const = default;
};

inline SquareClass square_class(const Rat& x) {
    if (x == 0) throw std::domain_error("square class of zero");
    Int prod = rat_num(x) * rat_den(x);  // same class as x
    int sign = prod < 0 ? -1 : 1;
    return {sign, squarefree_part(prod)};
}

inline std::string square_class_str(const SquareClass& c) {
    return (c.sign < 0 ? "-" : "") + int_str(c.squarefree);
}

// A place of Q: a finite prime or the real place.
struct Place {
    bool infinite = false;
    Int p = 0;

    bool operator<(const Place& o) const {
        if (infinite != o.infinite) return !infinite;  // finite primes sort first
        return p < o.p;
    }
    bool operator==(const Place& o) const = default;
};

inline std::string place_str(const Place& v) { return v.infinite ? "inf" : int_str(v.p); }

// Hilbert symbol (a,b)_p for nonzero integers at a finite prime.
inline int hilbert_symbol(Int a, Int b, const Int& p) {
    auto legendre = [](Int u, const Int& q) -> int {
        u %= q;
        if (u < 0) u += q;
        Int r = boost::multiprecision::powm(u, (q - 1) / 2, q);
        return r == 1 ? 1 : -1;
    };
    Int u, v;
    int alpha = p_valuation(a, p, &u);
    int beta = p_valuation(b, p, &v);
    if (p == 2) {
        auto eps = [](const Int& x) { return static_cast<int>(((x - 1) / 2) % 2 != 0); };
        auto omega = [](const Int& x) { return static_cast<int>(((x * x - 1) / 8) % 2 != 0); };
        int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return e % 2 == 0 ? 1 : -1;
    }
    int s = 1;
    if ((alpha * beta) % 2 == 1 && ((p - 1) / 2) % 2 == 1) s = -s;
    if (beta % 2 == 1) s *= legendre(u, p);
    if (alpha % 2 == 1) s *= legendre(v, p);
    return s;
}

inline int hilbert_symbol_real(const Int& a, const Int& b) {
    return (a < 0 && b < 0) ? -1 : 1;
}

// Diagonalizes a symmetric rational matrix by congruence.  Deterministic:
// pivot on the first nonzero diagonal entry; if the remaining diagonal is
// all zero, symmetrize a nonzero off-diagonal entry first.
inline std::vector<Rat> diagonalize_form(RatMatrix m) {
    size_t n = m.size();
    auto add_row_col = [&](size_t dst, size_t src, const Rat& f) {
        for (size_t j = 0; j < n; ++j) m[dst][j] += f * m[src][j];
        for (size_t i = 0; i < n; ++i) m[i][dst] += f * m[i][src];
    };
    auto swap_row_col = [&](size_t a, size_t b) {
        std::swap(m[a], m[b]);
        for (size_t i = 0; i < n; ++i) std::swap(m[i][a], m[i][b]);
    };
    for (size_t k = 0; k < n; ++k) {
        size_t piv = k;
        while (piv < n && m[piv][piv] == 0) ++piv;
        if (piv == n) {
            // all zero diagonal: find m[i][j] != 0 and add row/col j to i
            bool found = false;
            for (size_t i = k; i < n && !found; ++i)
                for (size_t j = i + 1; j < n && !found; ++j)
                    if (m[i][j] != 0) {
                        add_row_col(i, j, Rat(1));
                        piv = i;
                        found = true;
                    }
            if (!found) break;  // degenerate tail
        }
        if (piv != k) swap_row_col(k, piv);
        for (size_t i = k + 1; i < n; ++i) {
            if (m[i][k] == 0) continue;
            add_row_col(i, k, -m[i][k] / m[k][k]);
        }
    }
    std::vector<Rat> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = m[i][i];
    return d;
}

// Places where the ternary conic attached to a rank-3 form has no local
// point.  Always of even cardinality by Hilbert reciprocity.
inline std::set<Place> conic_invariant(const GramLattice& l) {
    if (l.rank() != 3) throw std::invalid_argument("conic invariant needs rank 3");
    std::vector<Rat> d = diagonalize_form(l.gram());
    // clear denominators and squares: class of each entry as an integer
    Int a = rat_num(d[0]) * rat_den(d[0]);
    Int b = rat_num(d[1]) * rat_den(d[1]);
    Int c = rat_num(d[2]) * rat_den(d[2]);
    // a x^2 + b y^2 + c z^2 = 0 is isotropic over Q_v iff (-a*c, -b*c)_v = 1
    Int s = -a * c, t = -b * c;
    std::set<Place> bad;
    if (hilbert_symbol_real(s, t) == -1) bad.insert(Place{true, 0});
    std::set<Int> primes{2};
    for (const auto& [p, e] : factorize(s)) primes.insert(p);
    for (const auto& [p, e] : factorize(t)) primes.insert(p);
    for (const auto& p : primes)
        if (hilbert_symbol(s, t, p) == -1) bad.insert(Place{false, p});
    return bad;
}

// --- standard lattices (root bases with diagonal 2; U hyperbolic) ---

inline GramLattice lattice_diag(const std::vector<Rat>& d) {
    RatMatrix g(d.size(), std::vector<Rat>(d.size(), Rat(0)));
    for (size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
    return GramLattice(std::move(g));
}

inline GramLattice lattice_U() {
    return GramLattice(RatMatrix{{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});
}

inline GramLattice lattice_A(int n) {
    if (n < 1) throw std::invalid_argument("A_n needs n >= 1");
    RatMatrix g(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) {
        g[i][i] = 2;
        if (i + 1 < n) g[i][i + 1] = g[i + 1][i] = -1;
    }
    return GramLattice(std::move(g));
}

inline GramLattice lattice_D(int n) {
    if (n < 4) throw std::invalid_argument("D_n needs n >= 4");
    // chain 0-1-...-(n-2), fork node n-1 attached to n-3
    RatMatrix g(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) g[i][i] = 2;
    for (int i = 0; i + 1 < n - 1; ++i) g[i][i + 1] = g[i + 1][i] = -1;
    g[n - 3][n - 1] = g[n - 1][n - 3] = -1;
    return GramLattice(std::move(g));
}

inline GramLattice lattice_E(int n) {
    if (n < 6 || n > 8) throw std::invalid_argument("E_n needs n in {6,7,8}");
    // chain 0-1-...-(n-2), branch node n-1 attached to chain node 2
    RatMatrix g(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) g[i][i] = 2;
    for (int i = 0; i + 1 < n - 1; ++i) g[i][i + 1] = g[i + 1][i] = -1;
    g[2][n - 1] = g[n - 1][2] = -1;
    return GramLattice(std::move(g));
}

}  // namespace k3lat
