#pragma once

// Kodaira fiber types: Euler numbers, component groups, and the local
// height contributions attached to the component a section meets.
//
// Component labels:
//   I_n      : integers mod n (0 = component met by the zero section)
//   I*_n     : 0, near, far1, far2; the group is (Z/2)^2 for even n and
//              Z/4 (generated by a far component) for odd n
//   III, III*: 0, 1
//   IV, IV*  : 0, 1, 2 (1 and 2 are exchanged by the fiber automorphism)
//   II, II*, I_0, I_1: only 0
//
// The contribution tables are the inverse-Cartan entries of the dual root
// lattice (A_{n-1} for I_n, D_{n+4} for I*_n, E_6/E_7 for IV*/III*); the
// unit tests recompute them from the root Gram matrices.

#include "k3lat/rational.hpp"

#include <optional>
#include <vector>

namespace k3lat {

enum class FiberKind { In, Istar, II, III, IV, IIstar, IIIstar, IVstar };

struct FiberInstance {
    FiberKind kind;
    int n = 0;  // used by In and Istar

    bool operator==(const FiberInstance& o) const = default;
    bool operator<(const FiberInstance& o) const {
        if (kind != o.kind) return kind < o.kind;
        return n < o.n;
    }
};

inline FiberInstance fiber_In(int n) {
    if (n < 0) throw std::invalid_argument("I_n needs n >= 0");
    return {FiberKind::In, n};
}
inline FiberInstance fiber_Istar(int n) {
    if (n < 0) throw std::invalid_argument("I*_n needs n >= 0");
    return {FiberKind::Istar, n};
}

inline std::string fiber_str(const FiberInstance& f) {
    switch (f.kind) {
        case FiberKind::In: return "I" + std::to_string(f.n);
        case FiberKind::Istar: return "I" + std::to_string(f.n) + "*";
        case FiberKind::II: return "II";
        case FiberKind::III: return "III";
        case FiberKind::IV: return "IV";
        case FiberKind::IIstar: return "II*";
        case FiberKind::IIIstar: return "III*";
        case FiberKind::IVstar: return "IV*";
    }
    throw std::logic_error("unreachable");
}

inline int euler_number(const FiberInstance& f) {
    switch (f.kind) {
        case FiberKind::In: return f.n;
        case FiberKind::Istar: return f.n + 6;
        case FiberKind::II: return 2;
        case FiberKind::III: return 3;
        case FiberKind::IV: return 4;
        case FiberKind::IVstar: return 8;
        case FiberKind::IIIstar: return 9;
        case FiberKind::IIstar: return 10;
    }
    throw std::logic_error("unreachable");
}

inline int component_group_order(const FiberInstance& f) {
    switch (f.kind) {
        case FiberKind::In: return f.n >= 1 ? f.n : 1;
        case FiberKind::Istar: return 4;
        case FiberKind::II: return 1;
        case FiberKind::III: return 2;
        case FiberKind::IV: return 3;
        case FiberKind::IVstar: return 3;
        case FiberKind::IIIstar: return 2;
        case FiberKind::IIstar: return 1;
    }
    throw std::logic_error("unreachable");
}

// Encoding: I_n uses 0..n-1; I*_n uses 0,1,2,3 = (zero, near, far1, far2);
// the additive types use 0..order-1.
struct ComponentLabel {
    int c = 0;

    bool operator==(const ComponentLabel& o) const = default;
    bool operator<(const ComponentLabel& o) const { return c < o.c; }
};

namespace istar_label {
inline constexpr int zero = 0, near = 1, far1 = 2, far2 = 3;
}

inline bool label_valid(const FiberInstance& f, const ComponentLabel& l) {
    switch (f.kind) {
        case FiberKind::In: return f.n >= 1 ? (l.c >= 0 && l.c < f.n) : l.c == 0;
        case FiberKind::Istar: return l.c >= 0 && l.c < 4;
        default: return l.c >= 0 && l.c < component_group_order(f);
    }
}

inline void check_label(const FiberInstance& f, const ComponentLabel& l) {
    if (!label_valid(f, l))
        throw std::invalid_argument("invalid component label " + std::to_string(l.c) + " for fiber " +
                                    fiber_str(f));
}

inline std::string label_str(const FiberInstance& f, const ComponentLabel& l) {
    if (f.kind == FiberKind::Istar) {
        static const char* names[] = {"0", "near", "far1", "far2"};
        return names[l.c];
    }
    return std::to_string(l.c);
}

inline ComponentLabel parse_label(const FiberInstance& f, const std::string& s) {
    ComponentLabel l;
    if (f.kind == FiberKind::Istar) {
        if (s == "0" || s == "zero") l.c = istar_label::zero;
        else if (s == "near") l.c = istar_label::near;
        else if (s == "far1" || s == "far") l.c = istar_label::far1;
        else if (s == "far2") l.c = istar_label::far2;
        else throw std::invalid_argument("bad I*_n component label: " + s);
    } else {
        l.c = static_cast<int>(parse_int(s));
    }
    check_label(f, l);
    return l;
}

// All labels of a fiber, identity first.
inline std::vector<ComponentLabel> all_labels(const FiberInstance& f) {
    std::vector<ComponentLabel> out;
    int count = (f.kind == FiberKind::In && f.n >= 1) ? f.n
                : (f.kind == FiberKind::Istar)        ? 4
                                                      : component_group_order(f);
    for (int c = 0; c < count; ++c) out.push_back({c});
    return out;
}

// Representatives up to the fiber automorphism a <-> -a (and far1 <-> far2).
inline std::vector<ComponentLabel> canonical_labels(const FiberInstance& f) {
    std::vector<ComponentLabel> out;
    switch (f.kind) {
        case FiberKind::In:
            for (int c = 0; c <= std::max(f.n, 1) / 2; ++c)
                if (f.n == 0 ? c == 0 : true) out.push_back({c});
            break;
        case FiberKind::Istar:
            out = {{istar_label::zero}, {istar_label::near}, {istar_label::far1}};
            break;
        case FiberKind::IV:
        case FiberKind::IVstar:
            out = {{0}, {1}};
            break;
        default:
            out = all_labels(f);
    }
    return out;
}

// Group law on the component group, used for torsion translates.
inline ComponentLabel label_add(const FiberInstance& f, const ComponentLabel& a,
                                const ComponentLabel& b) {
    check_label(f, a);
    check_label(f, b);
    switch (f.kind) {
        case FiberKind::In:
            return {f.n >= 1 ? (a.c + b.c) % f.n : 0};
        case FiberKind::Istar:
            if (f.n % 2 == 0) {
                // Klein group: 0=(0,0), near=(1,0), far1=(0,1), far2=(1,1)
                auto bits = [](int c) { return std::pair<int, int>{(c == 1 || c == 3) ? 1 : 0,
                                                                   (c == 2 || c == 3) ? 1 : 0}; };
                auto [a0, a1] = bits(a.c);
                auto [b0, b1] = bits(b.c);
                int x = a0 ^ b0, y = a1 ^ b1;
                return {x == 0 ? (y == 0 ? 0 : 2) : (y == 0 ? 1 : 3)};
            } else {
                // Z/4 generated by far1: far1=1, near=2, far2=3
                static const int to_z4[] = {0, 2, 1, 3};
                static const int from_z4[] = {0, 2, 1, 3};
                return {from_z4[(to_z4[a.c] + to_z4[b.c]) % 4]};
            }
        case FiberKind::III:
        case FiberKind::IIIstar:
            return {(a.c + b.c) % 2};
        case FiberKind::IV:
        case FiberKind::IVstar:
            return {(a.c + b.c) % 3};
        default:
            return {0};
    }
}

inline ComponentLabel label_neg(const FiberInstance& f, const ComponentLabel& a) {
    check_label(f, a);
    switch (f.kind) {
        case FiberKind::In:
            return {f.n >= 1 && a.c != 0 ? f.n - a.c : 0};
        case FiberKind::Istar:
            if (f.n % 2 == 0) return a;               // every element is 2-torsion
            return {a.c == 2 ? 3 : a.c == 3 ? 2 : a.c};  // invert in Z/4
        case FiberKind::IV:
        case FiberKind::IVstar:
            return {a.c == 0 ? 0 : 3 - a.c};
        default:
            return a;
    }
}

// Local height contribution of a section through component c.
inline Rat contribution(const FiberInstance& f, const ComponentLabel& c) {
    check_label(f, c);
    switch (f.kind) {
        case FiberKind::In:
            if (f.n == 0 || c.c == 0) return Rat(0);
            return Rat(Int(c.c) * Int(f.n - c.c), Int(f.n));
        case FiberKind::Istar:
            if (c.c == istar_label::zero) return Rat(0);
            if (c.c == istar_label::near) return Rat(1);
            return Rat(1) + Rat(f.n, 4);
        case FiberKind::III: return c.c == 0 ? Rat(0) : Rat(1, 2);
        case FiberKind::IV: return c.c == 0 ? Rat(0) : Rat(2, 3);
        case FiberKind::IVstar: return c.c == 0 ? Rat(0) : Rat(4, 3);
        case FiberKind::IIIstar: return c.c == 0 ? Rat(0) : Rat(3, 2);
        case FiberKind::II:
        case FiberKind::IIstar: return Rat(0);
    }
    throw std::logic_error("unreachable");
}

// Off-diagonal local term of the height pairing for two sections.
inline Rat pair_contribution(const FiberInstance& f, const ComponentLabel& c1,
                             const ComponentLabel& c2) {
    check_label(f, c1);
    check_label(f, c2);
    if (c1 == c2) return contribution(f, c1);
    if (c1.c == 0 || c2.c == 0) return Rat(0);
    int a = std::min(c1.c, c2.c), b = std::max(c1.c, c2.c);
    switch (f.kind) {
        case FiberKind::In:
            return Rat(Int(a) * Int(f.n - b), Int(f.n));
        case FiberKind::Istar:
            if (a == istar_label::near) return Rat(1, 2);   // near with a far
            return Rat(f.n + 2, 4);                          // the two far components
        case FiberKind::III:
        case FiberKind::IIIstar:
            throw std::logic_error("unreachable");  // distinct nonzero labels impossible
        case FiberKind::IV: return Rat(1, 3);
        case FiberKind::IVstar: return Rat(2, 3);
        case FiberKind::II:
        case FiberKind::IIstar: return Rat(0);
    }
    throw std::logic_error("unreachable");
}

// "distance" of a component in the sense used for I_n fibers: min(a, n-a).
inline int label_distance(const FiberInstance& f, const ComponentLabel& c) {
    if (f.kind != FiberKind::In || f.n == 0) return c.c == 0 ? 0 : 1;
    return std::min(c.c, f.n - c.c);
}

// --- fiber list parsing -------------------------------------------------
//
// Compact strings: "I0*,I0*,I6,I3,I2,I1", with an optional multiplier
// suffix "xk" ("I2*x2,I2x4").  Frame notation with root symbols is also
// accepted: "A7+8A1" (A_k -> I_{k+1}, D_k -> I*_{k-4}, E6/E7/E8 ->
// IV*/III*/II*), with either "8A1" or "A1x8" multiplicities.

inline FiberInstance parse_fiber_token(const std::string& tok) {
    if (tok == "II") return {FiberKind::II, 0};
    if (tok == "III") return {FiberKind::III, 0};
    if (tok == "IV") return {FiberKind::IV, 0};
    if (tok == "II*") return {FiberKind::IIstar, 0};
    if (tok == "III*") return {FiberKind::IIIstar, 0};
    if (tok == "IV*") return {FiberKind::IVstar, 0};
    if (tok.size() >= 2 && tok[0] == 'I' && isdigit(static_cast<unsigned char>(tok[1]))) {
        bool star = tok.back() == '*';
        std::string digits = tok.substr(1, tok.size() - 1 - (star ? 1 : 0));
        int n = static_cast<int>(parse_int(digits));
        return star ? fiber_Istar(n) : fiber_In(n);
    }
    if (tok.size() >= 2 && (tok[0] == 'A' || tok[0] == 'D' || tok[0] == 'E')) {
        int k = static_cast<int>(parse_int(tok.substr(1)));
        if (tok[0] == 'A') return fiber_In(k + 1);
        if (tok[0] == 'D') {
            if (k < 4) throw std::invalid_argument("D_k frame needs k >= 4");
            return fiber_Istar(k - 4);
        }
        if (k == 6) return {FiberKind::IVstar, 0};
        if (k == 7) return {FiberKind::IIIstar, 0};
        if (k == 8) return {FiberKind::IIstar, 0};
        throw std::invalid_argument("E_k frame needs k in {6,7,8}");
    }
    throw std::invalid_argument("unrecognized fiber type: " + tok);
}

inline std::vector<FiberInstance> parse_fibers(const std::string& s) {
    std::vector<FiberInstance> out;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        // leading multiplicity: "8A1"
        size_t i = 0;
        long lead = 1;
        if (isdigit(static_cast<unsigned char>(token[0])) &&
            token.find_first_not_of("0123456789") != std::string::npos) {
            while (i < token.size() && isdigit(static_cast<unsigned char>(token[i]))) ++i;
            if (i < token.size() && (token[i] == 'A' || token[i] == 'D' || token[i] == 'E')) {
                lead = std::stol(token.substr(0, i));
            } else {
                i = 0;
            }
        }
        std::string body = token.substr(i);
        long mult = 1;
        auto x = body.rfind('x');
        if (x != std::string::npos && x + 1 < body.size() &&
            isdigit(static_cast<unsigned char>(body[x + 1]))) {
            mult = std::stol(body.substr(x + 1));
            body = body.substr(0, x);
        }
        if (lead < 1 || mult < 1) throw std::invalid_argument("bad multiplicity in " + token);
        FiberInstance f = parse_fiber_token(body);
        for (long k = 0; k < lead * mult; ++k) out.push_back(f);
        token.clear();
    };
    for (char c : s) {
        if (c == ',' || c == '+' || isspace(static_cast<unsigned char>(c)))
            flush();
        else
            token += c;
    }
    flush();
    if (out.empty()) throw std::invalid_argument("empty fiber list");
    return out;
}

inline int euler_sum(const std::vector<FiberInstance>& fibers) {
    int s = 0;
    for (const auto& f : fibers) s += euler_number(f);
    return s;
}

inline std::string fibers_str(const std::vector<FiberInstance>& fs) {
    std::string out;
    for (size_t i = 0; i < fs.size(); ++i) {
        if (i) out += ",";
        out += fiber_str(fs[i]);
    }
    return out;
}

}  // namespace k3lat
