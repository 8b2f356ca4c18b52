#pragma once

// Height pairing on sections of an elliptic surface, the Shioda-Tate
// determinant formula for the Neron-Severi lattice, and exhaustive
// searches over section contact patterns.
//
// A section is recorded by the fiber component it meets at every place
// plus its intersection number e with the zero section:
//   height  h(P)   = 2*chi + 2*e - sum_v contr_v(P)
//   pairing <P,Q>  = chi + e_P + e_Q - (P.Q) - sum_v contr_v(P,Q)
// Torsion sections are exactly the height-0, e = 0 patterns.

#include "k3lat/kodaira.hpp"
#include "k3lat/gram_lattice.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace k3lat {

struct SectionContact {
    std::vector<ComponentLabel> contacts;  // one per fiber
    int e = 0;                             // intersection with the zero section

    bool operator==(const SectionContact& o) const = default;
};

struct SurfaceConfig {
    int chi = 2;
    std::vector<FiberInstance> fibers;
    std::vector<SectionContact> sections;
    int torsion_order = 1;
    std::optional<std::vector<SectionContact>> torsion_sections;
};

inline Int component_order_product(const std::vector<FiberInstance>& fibers) {
    Int prod = 1;
    for (const auto& f : fibers) prod *= component_group_order(f);
    return prod;
}

inline void check_section(const SurfaceConfig& cfg, const SectionContact& s) {
    if (s.contacts.size() != cfg.fibers.size())
        throw std::invalid_argument("contact list length does not match fiber count");
    if (s.e < 0) throw std::invalid_argument("section meets the zero section negatively");
    for (size_t i = 0; i < cfg.fibers.size(); ++i) check_label(cfg.fibers[i], s.contacts[i]);
}

inline Rat height(const SurfaceConfig& cfg, const SectionContact& s) {
    check_section(cfg, s);
    Rat h = Rat(2 * cfg.chi + 2 * s.e);
    for (size_t i = 0; i < cfg.fibers.size(); ++i) h -= contribution(cfg.fibers[i], s.contacts[i]);
    return h;
}

// st is the intersection number s.t (pass -chi to recover the diagonal,
// since a section has self-intersection -chi).
inline Rat pairing(const SurfaceConfig& cfg, const SectionContact& s, const SectionContact& t,
                   int st) {
    check_section(cfg, s);
    check_section(cfg, t);
    Rat h = Rat(cfg.chi + s.e + t.e - st);
    for (size_t i = 0; i < cfg.fibers.size(); ++i)
        h -= pair_contribution(cfg.fibers[i], s.contacts[i], t.contacts[i]);
    return h;
}

inline void validate_config(const SurfaceConfig& cfg) {
    if (cfg.chi < 1) throw std::invalid_argument("chi must be positive");
    if (euler_sum(cfg.fibers) > 12 * cfg.chi)
        throw std::invalid_argument("fiber Euler numbers exceed 12*chi");
    if (cfg.torsion_order < 1) throw std::invalid_argument("torsion order must be positive");
    if (component_order_product(cfg.fibers) % cfg.torsion_order != 0)
        throw std::invalid_argument("torsion order does not divide the component group order");
    for (const auto& s : cfg.sections) check_section(cfg, s);
    if (cfg.torsion_sections)
        for (const auto& t : *cfg.torsion_sections)
            if (height(cfg, t) != 0) throw std::invalid_argument("torsion section has nonzero height");
}

// det(NS) up to sign: product of component group orders times the
// Mordell-Weil Gram determinant, divided by torsion^2.  An empty Gram
// matrix (rank-0 Mordell-Weil group) contributes 1.
inline Rat ns_determinant(const SurfaceConfig& cfg, const RatMatrix& mw_gram) {
    for (const auto& row : mw_gram)
        if (row.size() != mw_gram.size())
            throw std::invalid_argument("Mordell-Weil Gram matrix must be square");
    Rat det = rat_matrix_det(mw_gram);
    return Rat(component_order_product(cfg.fibers)) * det /
           Rat(Int(cfg.torsion_order) * Int(cfg.torsion_order));
}

// The multiplier in "disc = coeff * h" for a rank-1 Mordell-Weil group.
inline Rat ns_det_coefficient(const std::vector<FiberInstance>& fibers, int torsion_order) {
    return Rat(component_order_product(fibers)) / Rat(Int(torsion_order) * Int(torsion_order));
}

namespace detail {

struct LabelChoice {
    ComponentLabel label;
    Rat contr;
};

// For identical fibers, patterns are canonical when the encoded labels are
// non-increasing along each group of equal fibers.
inline std::vector<int> previous_equal_fiber(const std::vector<FiberInstance>& fibers) {
    std::vector<int> prev(fibers.size(), -1);
    for (size_t i = 0; i < fibers.size(); ++i)
        for (size_t j = i; j-- > 0;)
            if (fibers[j] == fibers[i]) {
                prev[i] = static_cast<int>(j);
                break;
            }
    return prev;
}

}  // namespace detail

// All contact patterns of exactly the target height with 0 <= e <= e_max,
// in a deterministic order (by e, then lexicographically on labels).  With
// reduce_symmetry the list holds one representative per orbit of the fiber
// automorphisms a <-> -a and permutations of identical fibers.
inline std::vector<SectionContact> solve_contacts(int chi, const std::vector<FiberInstance>& fibers,
                                                  const Rat& target, int e_max,
                                                  bool reduce_symmetry = true) {
    if (e_max < 0) throw std::invalid_argument("e_max must be nonnegative");
    size_t nf = fibers.size();
    std::vector<std::vector<detail::LabelChoice>> choices(nf);
    for (size_t i = 0; i < nf; ++i) {
        auto labels = reduce_symmetry ? canonical_labels(fibers[i]) : all_labels(fibers[i]);
        for (const auto& l : labels) choices[i].push_back({l, contribution(fibers[i], l)});
    }
    // suffix bounds for pruning
    std::vector<Rat> max_rest(nf + 1, Rat(0));
    for (size_t i = nf; i-- > 0;) {
        Rat mx(0);
        for (const auto& ch : choices[i]) mx = std::max(mx, ch.contr);
        max_rest[i] = max_rest[i + 1] + mx;
    }
    std::vector<int> prev = detail::previous_equal_fiber(fibers);

    std::vector<SectionContact> out;
    std::vector<ComponentLabel> cur(nf);
    for (int e = 0; e <= e_max; ++e) {
        Rat need = Rat(2 * chi + 2 * e) - target;
        if (need < 0) continue;
        auto dfs = [&](auto&& self, size_t i, Rat remaining) -> void {
            if (i == nf) {
                if (remaining == 0) out.push_back({cur, e});
                return;
            }
            if (remaining > max_rest[i]) return;
            for (const auto& ch : choices[i]) {
                if (ch.contr > remaining) continue;
                if (reduce_symmetry && prev[i] >= 0 && ch.label.c > cur[prev[i]].c) continue;
                cur[i] = ch.label;
                self(self, i + 1, remaining - ch.contr);
            }
        };
        dfs(dfs, 0, need);
    }
    std::sort(out.begin(), out.end(), [](const SectionContact& a, const SectionContact& b) {
        if (a.e != b.e) return a.e < b.e;
        return a.contacts < b.contacts;
    });
    return out;
}

// All height-0, e = 0 patterns (torsion sections never meet the zero
// section).  Not reduced by symmetry: torsion translate arithmetic needs
// the actual component choices.
inline std::vector<SectionContact> torsion_candidates(int chi,
                                                      const std::vector<FiberInstance>& fibers) {
    return solve_contacts(chi, fibers, Rat(0), 0, /*reduce_symmetry=*/false);
}

inline SectionContact translate_section(const std::vector<FiberInstance>& fibers,
                                        const SectionContact& s, const SectionContact& t, int e) {
    SectionContact out;
    out.e = e;
    out.contacts.resize(fibers.size());
    for (size_t i = 0; i < fibers.size(); ++i)
        out.contacts[i] = label_add(fibers[i], s.contacts[i], t.contacts[i]);
    return out;
}

// Subgroups of the product of component groups, all of whose nonzero
// elements are torsion candidates, isomorphic to prod Z/k_i.  Each group
// is returned as its list of nonzero elements, deterministically ordered.
inline std::vector<std::vector<SectionContact>> torsion_groups(
    int chi, const std::vector<FiberInstance>& fibers, const std::vector<int>& invariant_factors) {
    for (int k : invariant_factors)
        if (k < 2) throw std::invalid_argument("nonsensical torsion spec: factor < 2");
    long order = 1;
    for (int k : invariant_factors) order *= k;

    auto candidates = torsion_candidates(chi, fibers);
    std::set<std::vector<ComponentLabel>> candidate_set;
    for (const auto& c : candidates) candidate_set.insert(c.contacts);

    SectionContact zero;
    zero.contacts.assign(fibers.size(), ComponentLabel{0});
    zero.e = 0;

    // order statistics of the target group: for each d, #{g : d*g = 0}
    auto target_count = [&](long d) {
        long n = 1;
        for (int k : invariant_factors) n *= std::gcd(d, static_cast<long>(k));
        return n;
    };

    std::set<std::set<std::vector<ComponentLabel>>> seen;
    std::vector<std::vector<SectionContact>> out;
    size_t ngen = invariant_factors.size();
    std::vector<size_t> gen(ngen, 0);

    auto try_group = [&](const std::vector<size_t>& gens) {
        // close under addition
        std::set<std::vector<ComponentLabel>> elems{zero.contacts};
        std::vector<std::vector<ComponentLabel>> frontier{zero.contacts};
        for (size_t gi : gens) {
            const auto& g = candidates[gi];
            std::vector<std::vector<ComponentLabel>> next;
            for (const auto& base : elems) {
                SectionContact cur{base, 0};
                for (long step = 1;; ++step) {
                    cur = translate_section(fibers, cur, g, 0);
                    if (elems.count(cur.contacts)) break;
                    next.push_back(cur.contacts);
                    if (static_cast<long>(elems.size() + next.size()) > order) return;
                }
            }
            for (auto& v : next) elems.insert(std::move(v));
        }
        if (static_cast<long>(elems.size()) != order) return;
        for (const auto& v : elems)
            if (v != zero.contacts && !candidate_set.count(v)) return;  // escapes height 0
        // structure check via order statistics
        for (long d = 1; d <= order; ++d) {
            if (order % d != 0) continue;
            long cnt = 0;
            for (const auto& v : elems) {
                SectionContact acc = zero, g{v, 0};
                for (long s = 0; s < d; ++s) acc = translate_section(fibers, acc, g, 0);
                if (acc.contacts == zero.contacts) ++cnt;
            }
            if (cnt != target_count(d)) return;
        }
        if (!seen.insert(elems).second) return;
        std::vector<SectionContact> group;
        for (const auto& v : elems)
            if (v != zero.contacts) group.push_back({v, 0});
        out.push_back(std::move(group));
    };

    auto rec = [&](auto&& self, size_t k, size_t start) -> void {
        if (k == ngen) {
            try_group(gen);
            return;
        }
        for (size_t i = start; i < candidates.size(); ++i) {
            gen[k] = i;
            self(self, k + 1, i + 1);
        }
    };
    if (candidates.size() >= ngen) rec(rec, 0, 0);
    return out;
}

struct ExclusionReport {
    Rat candidate_disc;
    Rat required_height;
    bool feasible = false;
    std::vector<SectionContact> pattern_classes;  // height-h patterns up to symmetry
    std::string certificate;
};

namespace detail {

inline std::string section_str(const std::vector<FiberInstance>& fibers, const SectionContact& s) {
    std::string out = "(";
    for (size_t i = 0; i < fibers.size(); ++i) {
        if (i) out += ",";
        out += label_str(fibers[i], s.contacts[i]);
    }
    out += ");e=" + std::to_string(s.e);
    return out;
}

}  // namespace detail

// Feasibility of each candidate Picard discriminant for a frame with a
// rank-1 Mordell-Weil group and prescribed torsion.  The generator height
// is forced by the determinant formula; a candidate survives only if some
// contact pattern of that height stays consistent under every torsion
// translate (each translate must again admit the height with an integer
// e >= 0).
inline std::vector<ExclusionReport> exclude_discriminant(int chi,
                                                         const std::vector<FiberInstance>& fibers,
                                                         const std::vector<int>& invariant_factors,
                                                         const std::vector<Rat>& candidate_discs,
                                                         int e_max = 3) {
    for (int k : invariant_factors)
        if (k < 2) throw std::invalid_argument("nonsensical torsion spec: factor < 2");
    long torsion = 1;
    for (int k : invariant_factors) torsion *= k;
    if (component_order_product(fibers) % torsion != 0)
        throw std::invalid_argument("nonsensical torsion spec: order does not divide component product");

    Rat coeff = ns_det_coefficient(fibers, static_cast<int>(torsion));
    auto groups = torsion_groups(chi, fibers, invariant_factors);

    std::vector<ExclusionReport> reports;
    for (const Rat& d : candidate_discs) {
        ExclusionReport rep;
        rep.candidate_disc = d;
        Rat h = d / coeff;
        rep.required_height = h;
        rep.pattern_classes = solve_contacts(chi, fibers, h, e_max, /*reduce_symmetry=*/true);
        if (h <= 0) {
            rep.feasible = false;
            rep.certificate = "required generator height " + rat_str(h) + " is not positive";
            reports.push_back(std::move(rep));
            continue;
        }
        if (rep.pattern_classes.empty()) {
            rep.feasible = false;
            rep.certificate = "no contact pattern attains height " + rat_str(h) +
                              " with e <= " + std::to_string(e_max);
            reports.push_back(std::move(rep));
            continue;
        }
        if (groups.empty()) {
            rep.feasible = false;
            rep.certificate = "frame admits no torsion subgroup of the required structure";
            reports.push_back(std::move(rep));
            continue;
        }
        auto patterns = solve_contacts(chi, fibers, h, e_max, /*reduce_symmetry=*/false);
        std::string first_failure;
        bool found = false;
        for (const auto& pat : patterns) {
            for (const auto& group : groups) {
                bool all_ok = true;
                std::string failure;
                for (const auto& tors : group) {
                    SectionContact tr = translate_section(fibers, pat, tors, 0);
                    Rat sum(0);
                    for (size_t i = 0; i < fibers.size(); ++i)
                        sum += contribution(fibers[i], tr.contacts[i]);
                    // need h = 2*chi + 2e' - sum with integer e' >= 0
                    Rat twice_e = h + sum - Rat(2 * chi);
                    bool ok = twice_e >= 0 && is_integer(twice_e) && rat_num(twice_e) % 2 == 0;
                    if (!ok) {
                        all_ok = false;
                        failure = "pattern " + detail::section_str(fibers, pat) +
                                  " translated by torsion " + detail::section_str(fibers, tors) +
                                  " would need 2e = " + rat_str(twice_e);
                        break;
                    }
                }
                if (all_ok) {
                    rep.feasible = true;
                    rep.certificate = "witness: pattern " + detail::section_str(fibers, pat) +
                                      " consistent with all torsion translates";
                    found = true;
                    break;
                }
                if (first_failure.empty()) first_failure = failure;
            }
            if (found) break;
        }
        if (!found) {
            rep.feasible = false;
            rep.certificate = "every pattern/torsion combination fails; e.g. " + first_failure;
        }
        reports.push_back(std::move(rep));
    }
    return reports;
}

// True iff no contact pattern can produce a fractional height, i.e. every
// local contribution of every fiber is an integer.
inline bool integral_height_check(const std::vector<FiberInstance>& fibers) {
    for (const auto& f : fibers)
        for (const auto& l : all_labels(f))
            if (!is_integer(contribution(f, l))) return false;
    return true;
}

}  // namespace k3lat
