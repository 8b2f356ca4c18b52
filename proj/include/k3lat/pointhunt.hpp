#pragma once

// Singular-point hunting on projective schemes over small prime fields.
//
// The reduction of a scheme mod p is searched exhaustively: projective
// points are enumerated through normalized representatives (first nonzero
// coordinate 1), a point is singular when the Jacobian matrix drops below
// rank num_vars - 1 - dim, and singular points collected across several
// primes are matched up and fed to rational reconstruction.  A candidate
// rational point is then verified exactly over Q, which turns the
// heuristic search into a proof for the points it finds.

#include "k3lat/rational.hpp"
#include "k3lat/reconstruct.hpp"
#include "k3lat/gram_lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace k3lat {

struct Monomial {
    Int coeff;
    std::vector<int> exps;  // one exponent per variable
};

struct Poly {
    int num_vars = 0;
    int degree = 0;  // total degree; every monomial matches (homogeneous)
    std::vector<Monomial> terms;
};

namespace detail {

// Grammar: poly := ['+'|'-'] term (('+'|'-') term)*
//          term := factor ('*' factor)*
//          factor := integer | 'x' index ('^' exponent)?
inline Poly parse_poly_impl(const std::string& src, int num_vars) {
    Poly p;
    p.num_vars = num_vars;
    size_t i = 0;
    auto skip_ws = [&]() {
        while (i < src.size() && isspace(static_cast<unsigned char>(src[i]))) ++i;
    };
    auto read_int = [&]() -> Int {
        size_t start = i;
        while (i < src.size() && isdigit(static_cast<unsigned char>(src[i]))) ++i;
        if (i == start) throw std::invalid_argument("expected a number in polynomial: " + src);
        return Int(src.substr(start, i - start));
    };
    skip_ws();
    bool first = true;
    while (i < src.size()) {
        int sign = 1;
        skip_ws();
        if (i < src.size() && (src[i] == '+' || src[i] == '-')) {
            sign = src[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            throw std::invalid_argument("expected + or - in polynomial: " + src);
        }
        first = false;
        Monomial m;
        m.coeff = sign;
        m.exps.assign(num_vars, 0);
        bool saw_factor = false;
        while (true) {
            skip_ws();
            if (i >= src.size()) break;
            if (src[i] == '+' || src[i] == '-') break;
            if (src[i] == '*') {
                ++i;
                continue;
            }
            if (isdigit(static_cast<unsigned char>(src[i]))) {
                m.coeff *= read_int();
                saw_factor = true;
                continue;
            }
            if (src[i] == 'x') {
                ++i;
                int var = static_cast<int>(static_cast<long>(read_int()));
                if (var < 0 || var >= num_vars)
                    throw std::invalid_argument("variable index out of range in: " + src);
                int exp = 1;
                if (i < src.size() && src[i] == '^') {
                    ++i;
                    exp = static_cast<int>(static_cast<long>(read_int()));
                }
                m.exps[var] += exp;
                saw_factor = true;
                continue;
            }
            throw std::invalid_argument(std::string("unexpected character '") + src[i] +
                                        "' in polynomial: " + src);
        }
        if (!saw_factor) throw std::invalid_argument("empty term in polynomial: " + src);
        p.terms.push_back(std::move(m));
    }
    if (p.terms.empty()) throw std::invalid_argument("empty polynomial");
    // combine and drop zero monomials
    std::map<std::vector<int>, Int> combined;
    for (const auto& m : p.terms) combined[m.exps] += m.coeff;
    p.terms.clear();
    for (auto& [e, c] : combined)
        if (c != 0) p.terms.push_back({c, e});
    if (p.terms.empty()) throw std::invalid_argument("polynomial is identically zero");
    p.degree = 0;
    for (int e : p.terms.front().exps) p.degree += e;
    for (const auto& m : p.terms) {
        int d = 0;
        for (int e : m.exps) d += e;
        if (d != p.degree) throw std::invalid_argument("polynomial is not homogeneous: " + src);
    }
    return p;
}

}  // namespace detail

inline Poly parse_poly(const std::string& src, int num_vars) {
    return detail::parse_poly_impl(src, num_vars);
}

inline Poly poly_derivative(const Poly& p, int var) {
    Poly d;
    d.num_vars = p.num_vars;
    d.degree = p.degree > 0 ? p.degree - 1 : 0;
    for (const auto& m : p.terms) {
        if (m.exps[var] == 0) continue;
        Monomial n = m;
        n.coeff *= m.exps[var];
        n.exps[var] -= 1;
        d.terms.push_back(std::move(n));
    }
    return d;
}

inline Rat poly_eval(const Poly& p, const std::vector<Rat>& x) {
    Rat out(0);
    for (const auto& m : p.terms) {
        Rat t(m.coeff);
        for (int v = 0; v < p.num_vars; ++v)
            for (int e = 0; e < m.exps[v]; ++e) t *= x[v];
        out += t;
    }
    return out;
}

struct ProjScheme {
    int num_vars = 0;                 // homogeneous coordinates, so P^(num_vars-1)
    std::vector<Poly> polys;
    int declared_dim = 0;

    std::vector<Poly> jacobian() const {
        std::vector<Poly> out;
        for (const auto& p : polys)
            for (int v = 0; v < num_vars; ++v) out.push_back(poly_derivative(p, v));
        return out;
    }
};

inline ProjScheme make_scheme(int num_vars, const std::vector<std::string>& poly_srcs,
                              int declared_dim) {
    if (num_vars < 2) throw std::invalid_argument("scheme needs at least 2 variables");
    if (declared_dim < 0 || declared_dim >= num_vars - 1)
        throw std::invalid_argument("declared dimension must be in [0, num_vars-2]");
    ProjScheme s;
    s.num_vars = num_vars;
    s.declared_dim = declared_dim;
    for (const auto& src : poly_srcs) s.polys.push_back(parse_poly(src, num_vars));
    return s;
}

struct ModPoint {
    int64_t prime = 0;
    std::vector<int64_t> coords;  // normalized: first nonzero coordinate is 1

    bool operator==(const ModPoint& o) const = default;
};

inline constexpr int64_t kDefaultEnumerationBudget = 100000000;  // 10^8 evaluations

namespace detail {

inline int64_t pow_mod(int64_t b, int e, int64_t p) {
    int64_t out = 1 % p;
    b %= p;
    if (b < 0) b += p;
    while (e > 0) {
        if (e & 1) out = out * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return out;
}

inline int64_t eval_mod(const Poly& poly, const std::vector<int64_t>& x, int64_t p,
                        const std::vector<int64_t>& coeffs_mod) {
    int64_t out = 0;
    for (size_t t = 0; t < poly.terms.size(); ++t) {
        int64_t v = coeffs_mod[t];
        const auto& exps = poly.terms[t].exps;
        for (int var = 0; var < poly.num_vars && v != 0; ++var)
            if (exps[var] > 0) v = v * pow_mod(x[var], exps[var], p) % p;
        out = (out + v) % p;
    }
    return out;
}

inline std::vector<int64_t> coeffs_mod_p(const Poly& poly, int64_t p) {
    std::vector<int64_t> out;
    out.reserve(poly.terms.size());
    for (const auto& m : poly.terms) {
        Int c = m.coeff % p;
        if (c < 0) c += p;
        out.push_back(static_cast<int64_t>(c));
    }
    return out;
}

inline int matrix_rank_mod(std::vector<std::vector<int64_t>> m, int64_t p) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] % p == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        int64_t inv = pow_mod(m[r][c], static_cast<int>(p - 2), p);
        for (size_t i = r + 1; i < rows; ++i) {
            int64_t f = m[i][c] % p * inv % p;
            if (f == 0) continue;
            for (size_t j = c; j < cols; ++j) {
                m[i][j] = (m[i][j] - f * m[r][j]) % p;
                if (m[i][j] < 0) m[i][j] += p;
            }
        }
        ++r;
        ++rank;
    }
    return rank;
}

inline int rat_matrix_rank(RatMatrix m) {
    if (m.empty()) return 0;
    size_t rows = m.size(), cols = m[0].size();
    int rank = 0;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

}  // namespace detail

inline void check_enumeration_budget(const ProjScheme& s, int64_t p,
                                     int64_t budget = kDefaultEnumerationBudget) {
    double total = 1;
    for (int i = 0; i < s.num_vars; ++i) total *= static_cast<double>(p);
    if (total > static_cast<double>(budget)) throw std::runtime_error("enumeration too large");
}

// All F_p-points of the scheme, through normalized representatives in
// lexicographic order on the full coordinate tuple.
inline std::vector<ModPoint> enumerate_points(const ProjScheme& s, int64_t p,
                                              int64_t budget = kDefaultEnumerationBudget) {
    if (p < 2 || !is_probable_prime(Int(p))) throw std::invalid_argument("p must be prime");
    check_enumeration_budget(s, p, budget);
    std::vector<std::vector<int64_t>> coeffs;
    coeffs.reserve(s.polys.size());
    for (const auto& poly : s.polys) coeffs.push_back(detail::coeffs_mod_p(poly, p));

    std::vector<ModPoint> out;
    std::vector<int64_t> x(s.num_vars, 0);
    // leading coordinate from the back gives lexicographically sorted points
    for (int lead = s.num_vars - 1; lead >= 0; --lead) {
        std::fill(x.begin(), x.end(), 0);
        x[lead] = 1;
        int free_vars = s.num_vars - 1 - lead;
        int64_t count = 1;
        for (int i = 0; i < free_vars; ++i) count *= p;
        for (int64_t idx = 0; idx < count; ++idx) {
            int64_t rem = idx;
            for (int i = free_vars - 1; i >= 0; --i) {
                x[lead + 1 + i] = rem % p;
                rem /= p;
            }
            bool on = true;
            for (size_t k = 0; k < s.polys.size() && on; ++k)
                on = detail::eval_mod(s.polys[k], x, p, coeffs[k]) == 0;
            if (on) out.push_back({p, x});
        }
    }
    return out;
}

// Points where the Jacobian matrix has rank below num_vars - 1 - dim.
inline std::vector<ModPoint> singular_points(const ProjScheme& s, int64_t p,
                                             int64_t budget = kDefaultEnumerationBudget) {
    auto points = enumerate_points(s, p, budget);
    std::vector<Poly> jac = s.jacobian();
    std::vector<std::vector<int64_t>> jac_coeffs;
    jac_coeffs.reserve(jac.size());
    for (const auto& poly : jac) jac_coeffs.push_back(detail::coeffs_mod_p(poly, p));

    int expected_rank = s.num_vars - 1 - s.declared_dim;
    std::vector<ModPoint> out;
    size_t npolys = s.polys.size();
    for (const auto& pt : points) {
        std::vector<std::vector<int64_t>> m(npolys, std::vector<int64_t>(s.num_vars));
        for (size_t i = 0; i < npolys; ++i)
            for (int v = 0; v < s.num_vars; ++v) {
                size_t idx = i * s.num_vars + v;
                m[i][v] = jac[idx].terms.empty()
                              ? 0
                              : detail::eval_mod(jac[idx], pt.coords, p, jac_coeffs[idx]);
            }
        if (detail::matrix_rank_mod(std::move(m), p) < expected_rank) out.push_back(pt);
    }
    return out;
}

inline std::vector<std::pair<int64_t, int64_t>> count_points_sequence(
    const ProjScheme& s, const std::vector<int64_t>& primes,
    int64_t budget = kDefaultEnumerationBudget) {
    std::vector<std::pair<int64_t, int64_t>> out;
    for (int64_t p : primes)
        out.push_back({p, static_cast<int64_t>(enumerate_points(s, p, budget).size())});
    return out;
}

// Exact verification over Q: membership and Jacobian rank at a rational
// point.  This is the step that upgrades a reconstructed guess to a fact.
inline bool on_scheme_exact(const ProjScheme& s, const std::vector<Rat>& x) {
    for (const auto& poly : s.polys)
        if (poly_eval(poly, x) != 0) return false;
    return true;
}

inline bool singular_exact(const ProjScheme& s, const std::vector<Rat>& x) {
    std::vector<Poly> jac = s.jacobian();
    RatMatrix m(s.polys.size(), std::vector<Rat>(s.num_vars));
    for (size_t i = 0; i < s.polys.size(); ++i)
        for (int v = 0; v < s.num_vars; ++v) m[i][v] = poly_eval(jac[i * s.num_vars + v], x);
    return detail::rat_matrix_rank(std::move(m)) < s.num_vars - 1 - s.declared_dim;
}

enum class MatchStrategy { unique, coordinate_zero_pattern };

struct RationalPointCandidate {
    std::vector<Rat> coords;  // normalized: first nonzero coordinate is 1
    bool on_scheme = false;
    bool singular = false;
    bool verified = false;  // on_scheme && singular, checked exactly
    std::vector<int64_t> primes_used;
};

struct CollationReport {
    std::vector<RationalPointCandidate> candidates;
    std::vector<int64_t> bad_primes;      // skipped: degenerate reduction
    std::vector<int64_t> missing_primes;  // good primes where the family is absent
    std::string note;                     // e.g. the quadratic-splitting hint
};

using SingularRun = std::pair<int64_t, std::vector<ModPoint>>;

namespace detail {

inline bool prime_divides_poly(const Poly& poly, int64_t p) {
    for (const auto& m : poly.terms)
        if (m.coeff % p != 0) return false;
    return true;
}

// Lang-Weil scale for the singular locus: a well-behaved reduction has a
// singular locus of dimension < declared_dim, so its count stays near
// p^(dim-1); a blowup past 3x that signals a bad prime.
inline int64_t singular_count_threshold(const ProjScheme& s, int64_t p) {
    int64_t scale = 1;
    int64_t q = 1;
    for (int i = 1; i < s.declared_dim; ++i) {
        q *= p;
        scale += q;
    }
    return 3 * scale;
}

}  // namespace detail

namespace detail {

// Shortest-vector guess with no confidence gate: collation verifies its
// candidates exactly over Q afterwards, which is the real filter.  The
// gated rational_reconstruct is tried first so that large prime sets keep
// their confidence guarantee.
inline std::optional<Rat> reconstruct_or_guess(const ResidueSystem& sys, int margin) {
    if (auto confident = rational_reconstruct(sys, margin)) return confident;
    auto [mod, res] = crt_combine(sys);
    PlaneLattice red = gauss_reduce({{mod, Int(0)}, {res, Int(1)}});
    Int b = red.u[0], c = red.u[1];
    if (c == 0) return std::nullopt;
    if (c < 0) {
        b = -b;
        c = -c;
    }
    for (const auto& e : sys.entries())
        if (c % e.prime == 0) return std::nullopt;
    return Rat(b, c);
}

}  // namespace detail

// Matches singular points across primes, reconstructs rational coordinates
// and verifies them exactly over Q.
//
// unique strategy: at most one singular point per prime is expected.  If
// instead every prime shows 0 or 2 points (a Galois-stable conjugate pair
// visible exactly at split primes), no candidate is produced and the note
// reports the observed split.  Any other multiplicity pattern is an error.
inline CollationReport collate_and_reconstruct(const ProjScheme& s,
                                               const std::vector<SingularRun>& runs,
                                               MatchStrategy strategy,
                                               int margin = kDefaultConfidenceMargin) {
    if (runs.size() < 2) throw std::invalid_argument("collation needs at least two primes");
    CollationReport rep;

    std::vector<SingularRun> good;
    for (const auto& run : runs) {
        bool bad = false;
        for (const auto& poly : s.polys)
            if (detail::prime_divides_poly(poly, run.first)) bad = true;
        if (static_cast<int64_t>(run.second.size()) > detail::singular_count_threshold(s, run.first))
            bad = true;
        if (bad)
            rep.bad_primes.push_back(run.first);
        else
            good.push_back(run);
    }
    if (good.size() < 2) {
        rep.note = "fewer than two usable primes after discarding bad reductions";
        return rep;
    }
    size_t n_good = good.size();

    auto quadratic_note = [&](size_t present) {
        rep.note = "singular points present for " + std::to_string(present) + " of " +
                   std::to_string(n_good) +
                   " good primes: likely quadratic field of definition (split primes only)";
    };

    // group key: zero-coordinate signature (trivial for the unique strategy)
    auto signature = [&](const ModPoint& pt) -> std::vector<bool> {
        std::vector<bool> sig(pt.coords.size());
        for (size_t i = 0; i < pt.coords.size(); ++i) sig[i] = pt.coords[i] == 0;
        return sig;
    };

    std::map<std::vector<bool>, std::map<int64_t, std::vector<const ModPoint*>>> families;
    if (strategy == MatchStrategy::unique) {
        bool all_le1 = true, all_02 = true;
        size_t present = 0;
        for (const auto& [p, pts] : good) {
            if (pts.size() > 1) all_le1 = false;
            if (pts.size() != 0 && pts.size() != 2) all_02 = false;
            if (!pts.empty()) ++present;
        }
        if (!all_le1) {
            if (all_02 && present < n_good) {
                quadratic_note(present);
                return rep;
            }
            std::string detail_msg;
            for (const auto& [p, pts] : good)
                detail_msg += " p=" + std::to_string(p) + ":" + std::to_string(pts.size());
            throw std::invalid_argument("ambiguous matching: singular point counts per prime are" +
                                        detail_msg + "; use coordinate_zero_pattern");
        }
        for (const auto& [p, pts] : good)
            if (pts.size() == 1) families[{}][p].push_back(&pts[0]);
    } else {
        for (const auto& [p, pts] : good)
            for (const auto& pt : pts) families[signature(pt)][p].push_back(&pt);
        for (const auto& [sig, per_prime] : families)
            for (const auto& [p, pts] : per_prime)
                if (pts.size() > 1)
                    throw std::invalid_argument("ambiguous matching: prime " + std::to_string(p) +
                                                " has several singular points with one zero pattern");
    }

    for (const auto& [sig, per_prime] : families) {
        if (per_prime.size() < 2) continue;  // nothing to intersect
        if (per_prime.size() < n_good) {
            for (const auto& [p, pts] : good)
                if (!per_prime.count(p)) rep.missing_primes.push_back(p);
            if (per_prime.size() * 2 <= n_good + 1) quadratic_note(per_prime.size());
        }

        RationalPointCandidate cand;
        bool complete = true;
        for (int v = 0; v < s.num_vars && complete; ++v) {
            std::vector<ResidueEntry> entries;
            for (const auto& [p, pts] : per_prime) entries.push_back({Int(p), Int(pts[0]->coords[v])});
            auto rec = detail::reconstruct_or_guess(ResidueSystem(entries), margin);
            if (!rec) {
                complete = false;
                break;
            }
            cand.coords.push_back(*rec);
        }
        if (!complete) continue;
        for (const auto& [p, pts] : per_prime) cand.primes_used.push_back(p);
        cand.on_scheme = on_scheme_exact(s, cand.coords);
        cand.singular = cand.on_scheme && singular_exact(s, cand.coords);
        cand.verified = cand.on_scheme && cand.singular;
        rep.candidates.push_back(std::move(cand));
    }
    std::sort(rep.missing_primes.begin(), rep.missing_primes.end());
    rep.missing_primes.erase(std::unique(rep.missing_primes.begin(), rep.missing_primes.end()),
                             rep.missing_primes.end());
    return rep;
}

}  // namespace k3lat
