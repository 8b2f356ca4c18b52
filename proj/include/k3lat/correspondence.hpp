#pragma once

// Bookkeeping for chains of finite maps between K3 surfaces.  Each move
// kind has an invariant-level validity rule on the lattice data of its
// endpoints; chains compose moves and re-check end-to-end invariants.
//
// Rules (checked when the relevant fields are present, otherwise the
// validator reports missing data rather than guessing):
//   isogeny(p)        rank fixed; disc ratio = +/- p^j, |j| <= 22 - rank,
//                     and for even rank the square class is fixed
//   jacobian(d)       rank fixed; disc divided by d^2
//   q_jacobian        rank and disc fixed; Galois-fixed sublattice grows
//   kummer_quotient   transcendental lattice twisted by 2
//   twist_base_change rank and |disc| fixed

#include "k3lat/gram_lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace k3lat {

struct CorrNode {
    std::string name;
    std::optional<int> picard_rank;  // in [1, 20]
    std::optional<Rat> picard_disc;  // nonzero
    std::optional<GramLattice> transcendental;
    std::optional<int> rational_sublattice_rank;
};

inline void validate_node(const CorrNode& n) {
    if (n.picard_rank && (*n.picard_rank < 1 || *n.picard_rank > 20))
        throw std::invalid_argument("picard rank out of range for node " + n.name);
    if (n.picard_disc && *n.picard_disc == 0)
        throw std::invalid_argument("picard discriminant must be nonzero for node " + n.name);
    if (n.picard_rank && n.transcendental &&
        *n.picard_rank + static_cast<int>(n.transcendental->rank()) != 22)
        throw std::invalid_argument("picard rank + transcendental rank must be 22 for node " + n.name);
}

enum class MoveKind { isogeny, jacobian, q_jacobian, kummer_quotient, twist_base_change };

inline std::string move_kind_str(MoveKind k) {
    switch (k) {
        case MoveKind::isogeny: return "isogeny";
        case MoveKind::jacobian: return "jacobian";
        case MoveKind::q_jacobian: return "q-jacobian";
        case MoveKind::kummer_quotient: return "kummer-quotient";
        case MoveKind::twist_base_change: return "twist-base-change";
    }
    throw std::logic_error("unreachable");
}

struct CorrMove {
    MoveKind kind;
    Int param = 0;  // p for isogeny, d for jacobian
    CorrNode source, target;
};

struct MoveCheck {
    bool ok = false;
    std::string violation;  // empty when ok; starts with "insufficient data" when undecidable
};

namespace detail {

// ratio = sign * p^j with j possibly negative; returns false otherwise.
inline bool power_ratio(const Rat& ratio, const Int& p, int& j, int& sign) {
    Int num = rat_num(ratio), den = rat_den(ratio);
    sign = num < 0 ? -1 : 1;
    if (num < 0) num = -num;
    Int u;
    int vn = p_valuation(num, p, &u);
    if (u != 1) return false;
    int vd = p_valuation(den, p, &u);
    if (u != 1) return false;
    j = vn - vd;
    return true;
}

}  // namespace detail

inline MoveCheck validate_move(const CorrMove& m) {
    validate_node(m.source);
    validate_node(m.target);
    const auto& s = m.source;
    const auto& t = m.target;
    auto need = [&](bool have, const std::string& what) -> std::optional<MoveCheck> {
        if (!have) return MoveCheck{false, "insufficient data: " + what};
        return std::nullopt;
    };

    switch (m.kind) {
        case MoveKind::isogeny: {
            if (m.param < 2 || !is_probable_prime(m.param))
                throw std::invalid_argument("isogeny degree must be prime");
            if (auto r = need(s.picard_rank && t.picard_rank, "picard ranks")) return *r;
            if (*s.picard_rank != *t.picard_rank)
                return {false, "picard rank must be invariant under finite maps"};
            if (auto r = need(s.picard_disc && t.picard_disc, "picard discriminants")) return *r;
            Rat ratio = *t.picard_disc / *s.picard_disc;
            int j = 0, sign = 1;
            if (!detail::power_ratio(ratio, m.param, j, sign))
                return {false, "disc ratio " + rat_str(ratio) + " is not a power of " + int_str(m.param)};
            int tbound = 22 - *s.picard_rank;
            if (j > tbound || j < -tbound)
                return {false, "disc exponent " + std::to_string(j) + " exceeds transcendental rank " +
                                   std::to_string(tbound)};
            if (*s.picard_rank % 2 == 0) {
                if (j % 2 != 0)
                    return {false, "odd exponent " + std::to_string(j) + " at even rank breaks the square class"};
                if (sign < 0) return {false, "sign change at even rank breaks the square class"};
            }
            return {true, ""};
        }
        case MoveKind::jacobian: {
            if (m.param < 2) throw std::invalid_argument("jacobian multisection degree must be >= 2");
            if (auto r = need(s.picard_rank && t.picard_rank, "picard ranks")) return *r;
            if (*s.picard_rank != *t.picard_rank)
                return {false, "picard rank must be invariant under finite maps"};
            if (auto r = need(s.picard_disc && t.picard_disc, "picard discriminants")) return *r;
            Rat expect = *s.picard_disc / Rat(m.param * m.param);
            if (*t.picard_disc != expect)
                return {false, "expected " + rat_str(expect) + ", got " + rat_str(*t.picard_disc)};
            return {true, ""};
        }
        case MoveKind::q_jacobian: {
            if (auto r = need(s.picard_rank && t.picard_rank, "picard ranks")) return *r;
            if (*s.picard_rank != *t.picard_rank)
                return {false, "picard rank must be invariant under finite maps"};
            if (auto r = need(s.picard_disc && t.picard_disc, "picard discriminants")) return *r;
            if (*s.picard_disc != *t.picard_disc)
                return {false, "geometric disc must be unchanged, expected " + rat_str(*s.picard_disc)};
            if (s.rational_sublattice_rank && t.rational_sublattice_rank &&
                !(*t.rational_sublattice_rank > *s.rational_sublattice_rank))
                return {false, "rational sublattice rank must strictly increase"};
            return {true, ""};
        }
        case MoveKind::kummer_quotient: {
            if (auto r = need(static_cast<bool>(s.transcendental), "source transcendental lattice"))
                return *r;
            if (auto r = need(static_cast<bool>(t.transcendental), "target transcendental lattice"))
                return *r;
            GramLattice expect = twist(*s.transcendental, Rat(2));
            if (!(*t.transcendental == expect))
                return {false, "transcendental lattice must be the source twisted by 2"};
            return {true, ""};
        }
        case MoveKind::twist_base_change: {
            if (auto r = need(s.picard_rank && t.picard_rank, "picard ranks")) return *r;
            if (*s.picard_rank != *t.picard_rank)
                return {false, "picard rank must be invariant under twist"};
            if (auto r = need(s.picard_disc && t.picard_disc, "picard discriminants")) return *r;
            if (boost::multiprecision::abs(*s.picard_disc) != boost::multiprecision::abs(*t.picard_disc))
                return {false, "expected |disc| = " + rat_str(boost::multiprecision::abs(*s.picard_disc))};
            return {true, ""};
        }
    }
    throw std::logic_error("unreachable");
}

struct ChainReport {
    bool ok = false;
    std::vector<MoveCheck> per_move;
    std::string first_violation;
    Int total_degree_class = 1;  // product of map degrees up to squares
    std::optional<SquareClass> start_class, end_class;
    bool square_class_consistent = true;  // meaningful for even-rank chains
};

inline Int move_degree(const CorrMove& m) {
    switch (m.kind) {
        case MoveKind::isogeny: return m.param;
        case MoveKind::jacobian: return m.param * m.param;
        case MoveKind::kummer_quotient: return 2;
        default: return 1;
    }
}

inline ChainReport chain_report(const std::vector<CorrMove>& moves) {
    ChainReport rep;
    for (size_t i = 0; i + 1 < moves.size(); ++i)
        if (moves[i].target.name != moves[i + 1].source.name)
            throw std::invalid_argument("broken path: move " + std::to_string(i) + " ends at " +
                                        moves[i].target.name + " but move " + std::to_string(i + 1) +
                                        " starts at " + moves[i + 1].source.name);
    rep.ok = true;
    Int degree = 1;
    for (const auto& m : moves) {
        MoveCheck chk = validate_move(m);
        if (!chk.ok && rep.first_violation.empty())
            rep.first_violation = move_kind_str(m.kind) + " " + m.source.name + " -> " + m.target.name +
                                  ": " + chk.violation;
        rep.ok = rep.ok && chk.ok;
        rep.per_move.push_back(std::move(chk));
        degree *= move_degree(m);
    }
    rep.total_degree_class = squarefree_part(degree);
    if (!moves.empty()) {
        const auto& first = moves.front().source;
        const auto& last = moves.back().target;
        if (first.picard_disc) rep.start_class = square_class(*first.picard_disc);
        if (last.picard_disc) rep.end_class = square_class(*last.picard_disc);
        bool even_rank = first.picard_rank && *first.picard_rank % 2 == 0;
        if (even_rank && rep.start_class && rep.end_class)
            rep.square_class_consistent = (*rep.start_class == *rep.end_class);
    }
    return rep;
}

// The empirical smoothness relation between a Picard discriminant and the
// diameter of the attached isogeny class: |disc|/diameter should factor
// over primes <= smooth_bound.
inline bool smooth_diameter_check(const Rat& disc, const Int& diameter, const Int& smooth_bound) {
    if (disc == 0 || diameter < 1 || smooth_bound < 2)
        throw std::invalid_argument("smooth_diameter_check needs nonzero disc, diameter >= 1, bound >= 2");
    Rat q = boost::multiprecision::abs(disc) / Rat(diameter);
    return is_smooth(rat_num(q), smooth_bound) && is_smooth(rat_den(q), smooth_bound);
}

}  // namespace k3lat
