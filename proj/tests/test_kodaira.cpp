#include "k3lat/kodaira.hpp"
#include "k3lat/gram_lattice.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace k3lat;

namespace {

// Inverse of a positive-definite rational Gram matrix.
RatMatrix invert(const RatMatrix& g) {
    size_t n = g.size();
    RatMatrix inv(n, std::vector<Rat>(n));
    for (size_t c = 0; c < n; ++c) {
        std::vector<Rat> e(n, Rat(0));
        e[c] = 1;
        std::vector<Rat> col = rat_solve(g, e);
        for (size_t r = 0; r < n; ++r) inv[r][c] = col[r];
    }
    return inv;
}

// Index of the root-lattice node carried by each nonzero component, in the
// bases produced by lattice_A / lattice_D:
//  - I_n: non-identity components a = 1..n-1 form the A_{n-1} chain in order
//  - I*_n: D_{n+4} basis is chain 0..n+2 then fork node n+3;
//    near = chain start (0), far1 = chain end (n+2), far2 = fork (n+3)
int root_index(const FiberInstance& f, const ComponentLabel& l) {
    if (f.kind == FiberKind::In) return l.c - 1;
    if (f.kind == FiberKind::Istar) {
        if (l.c == istar_label::near) return 0;
        if (l.c == istar_label::far1) return f.n + 2;
        return f.n + 3;
    }
    throw std::logic_error("unused");
}

}  // namespace

TEST_CASE("euler numbers") {
    CHECK(euler_number(fiber_In(6)) == 6);
    CHECK(euler_number(fiber_Istar(0)) == 6);
    CHECK(euler_number(fiber_Istar(2)) == 8);
    CHECK(euler_number(parse_fiber_token("III*")) == 9);
    CHECK(euler_number(parse_fiber_token("II")) == 2);
    CHECK(euler_number(parse_fiber_token("IV*")) == 8);
    CHECK(euler_number(parse_fiber_token("II*")) == 10);
    CHECK(euler_number(fiber_In(0)) == 0);
}

TEST_CASE("component group orders") {
    CHECK(component_group_order(fiber_Istar(0)) == 4);
    CHECK(component_group_order(fiber_In(6)) == 6);
    CHECK(component_group_order(parse_fiber_token("II*")) == 1);
    CHECK(component_group_order(fiber_In(0)) == 1);
    CHECK(component_group_order(fiber_In(1)) == 1);
    CHECK(component_group_order(parse_fiber_token("IV")) == 3);
    CHECK(component_group_order(parse_fiber_token("III")) == 2);
}

TEST_CASE("local contributions") {
    CHECK(contribution(fiber_In(6), {2}) == Rat(4, 3));
    CHECK(contribution(fiber_In(8), {4}) == Rat(2));
    CHECK(contribution(fiber_Istar(0), {istar_label::near}) == Rat(1));
    CHECK(contribution(fiber_Istar(2), {istar_label::far1}) == Rat(3, 2));
    CHECK(contribution(parse_fiber_token("III"), {1}) == Rat(1, 2));
    CHECK(contribution(parse_fiber_token("IV"), {2}) == Rat(2, 3));
    CHECK(contribution(parse_fiber_token("IV*"), {1}) == Rat(4, 3));
    CHECK(contribution(parse_fiber_token("III*"), {1}) == Rat(3, 2));
    CHECK(contribution(parse_fiber_token("II*"), {0}) == Rat(0));
    CHECK(contribution(fiber_In(1), {0}) == Rat(0));
    CHECK_THROWS_AS(contribution(fiber_In(6), {6}), std::invalid_argument);
}

TEST_CASE("pair contributions") {
    CHECK(pair_contribution(fiber_In(6), {1}, {1}) == Rat(5, 6));
    CHECK(pair_contribution(fiber_In(6), {1}, {3}) == Rat(1, 2));
    CHECK(pair_contribution(fiber_In(6), {0}, {3}) == Rat(0));
    CHECK(pair_contribution(fiber_Istar(0), {istar_label::near}, {istar_label::far1}) == Rat(1, 2));
    CHECK(pair_contribution(fiber_Istar(2), {istar_label::far1}, {istar_label::far2}) == Rat(1));
}

TEST_CASE("diagonal pair contribution equals contribution for every label") {
    std::vector<FiberInstance> fibers{fiber_In(0), fiber_In(1),  fiber_In(2),
                                      fiber_In(7), fiber_Istar(0), fiber_Istar(3),
                                      fiber_Istar(4)};
    for (const char* t : {"II", "III", "IV", "II*", "III*", "IV*"})
        fibers.push_back(parse_fiber_token(t));
    for (const auto& f : fibers)
        for (const auto& l : all_labels(f)) CHECK(pair_contribution(f, l, l) == contribution(f, l));
}

TEST_CASE("contributions of I_n are symmetric under a <-> n-a") {
    for (int n = 2; n <= 9; ++n)
        for (int a = 1; a < n; ++a)
            CHECK(contribution(fiber_In(n), {a}) == contribution(fiber_In(n), {n - a}));
}

TEST_CASE("contribution bounds") {
    std::vector<FiberInstance> fibers{fiber_In(9), fiber_Istar(5), parse_fiber_token("IV*"),
                                      parse_fiber_token("III*")};
    for (const auto& f : fibers)
        for (const auto& l : all_labels(f)) {
            Rat c = contribution(f, l);
            CHECK(c >= 0);
            CHECK(c <= Rat(2) + Rat(f.kind == FiberKind::Istar ? f.n : 0, 4));
        }
}

// The full contribution table is the inverse Gram matrix of the dual root
// lattice restricted to the components met: A_{n-1} for I_n, D_{n+4} for
// I*_n.  E_6, E_7 cover IV*, III*.
TEST_CASE("contribution tables match inverse root Gram matrices") {
    for (int n = 2; n <= 9; ++n) {
        RatMatrix inv = invert(lattice_A(n - 1).gram());
        FiberInstance f = fiber_In(n);
        for (int a = 1; a < n; ++a)
            for (int b = 1; b < n; ++b)
                CHECK(pair_contribution(f, {a}, {b}) == inv[root_index(f, {a})][root_index(f, {b})]);
    }
    for (int n = 0; n <= 6; ++n) {
        RatMatrix inv = invert(lattice_D(n + 4).gram());
        FiberInstance f = fiber_Istar(n);
        std::vector<ComponentLabel> labels{{istar_label::near}, {istar_label::far1}, {istar_label::far2}};
        for (const auto& l1 : labels)
            for (const auto& l2 : labels)
                CHECK(pair_contribution(f, l1, l2) == inv[root_index(f, l1)][root_index(f, l2)]);
    }
    // IV*: the two nonzero components carry the E_6 cokernel; diagonal 4/3,
    // off-diagonal 2/3 are the extreme entries of the inverse Cartan matrix
    RatMatrix e6 = invert(lattice_E(6).gram());
    CHECK(e6[0][0] == Rat(4, 3));  // ends of the two long arms (nodes 0 and 4)
    CHECK(e6[0][4] == Rat(2, 3));
    CHECK(pair_contribution(parse_fiber_token("IV*"), {1}, {1}) == Rat(4, 3));
    CHECK(pair_contribution(parse_fiber_token("IV*"), {1}, {2}) == Rat(2, 3));
    RatMatrix e7 = invert(lattice_E(7).gram());
    CHECK(e7[5][5] == Rat(3, 2));  // end of the length-3 arm
    CHECK(pair_contribution(parse_fiber_token("III*"), {1}, {1}) == Rat(3, 2));
}

TEST_CASE("component group law") {
    FiberInstance i6 = fiber_In(6);
    CHECK(label_add(i6, {2}, {5}) == ComponentLabel{1});
    CHECK(label_neg(i6, {2}) == ComponentLabel{4});
    CHECK(label_neg(i6, {0}) == ComponentLabel{0});

    // I*_even: Klein group
    FiberInstance d4 = fiber_Istar(0);
    CHECK(label_add(d4, {istar_label::near}, {istar_label::far1}) == ComponentLabel{istar_label::far2});
    CHECK(label_add(d4, {istar_label::near}, {istar_label::near}) == ComponentLabel{istar_label::zero});
    CHECK(label_neg(d4, {istar_label::far1}) == ComponentLabel{istar_label::far1});

    // I*_odd: cyclic of order 4 generated by a far component
    FiberInstance d5 = fiber_Istar(1);
    CHECK(label_add(d5, {istar_label::far1}, {istar_label::far1}) == ComponentLabel{istar_label::near});
    CHECK(label_add(d5, {istar_label::far1}, {istar_label::near}) == ComponentLabel{istar_label::far2});
    CHECK(label_add(d5, {istar_label::far1}, {istar_label::far2}) == ComponentLabel{istar_label::zero});
    CHECK(label_neg(d5, {istar_label::far1}) == ComponentLabel{istar_label::far2});

    // associativity and inverses on a sample
    for (const auto& f : {fiber_In(8), fiber_Istar(2), fiber_Istar(3), parse_fiber_token("IV")}) {
        for (const auto& a : all_labels(f))
            for (const auto& b : all_labels(f)) {
                CHECK(label_add(f, a, b) == label_add(f, b, a));
                CHECK(label_add(f, a, label_neg(f, a)) == ComponentLabel{0});
                for (const auto& c : all_labels(f))
                    CHECK(label_add(f, label_add(f, a, b), c) == label_add(f, a, label_add(f, b, c)));
            }
    }
}

TEST_CASE("fiber list parsing") {
    auto fs = parse_fibers("I0*,I0*,I6,I3,I2,I1");
    REQUIRE(fs.size() == 6);
    CHECK(fs[0] == fiber_Istar(0));
    CHECK(fs[2] == fiber_In(6));
    CHECK(fibers_str(fs) == "I0*,I0*,I6,I3,I2,I1");

    auto fs2 = parse_fibers("I2*x2,I2x4");
    REQUIRE(fs2.size() == 6);
    CHECK(fs2[0] == fiber_Istar(2));
    CHECK(fs2[1] == fiber_Istar(2));
    CHECK(fs2[5] == fiber_In(2));

    auto frame = parse_fibers("A7+8A1");
    REQUIRE(frame.size() == 9);
    CHECK(frame[0] == fiber_In(8));
    for (int i = 1; i < 9; ++i) CHECK(frame[i] == fiber_In(2));

    CHECK(parse_fibers("D4+E8")[0] == fiber_Istar(0));
    CHECK(parse_fibers("D4+E8")[1] == parse_fiber_token("II*"));
    CHECK(parse_fibers("E7x1")[0] == parse_fiber_token("III*"));
    CHECK(parse_fibers("I12*")[0] == fiber_Istar(12));
    CHECK_THROWS_AS(parse_fibers("I6,Q3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_fibers(""), std::invalid_argument);
}

TEST_CASE("label distance") {
    CHECK(label_distance(fiber_In(6), {2}) == 2);
    CHECK(label_distance(fiber_In(6), {5}) == 1);
    CHECK(label_distance(fiber_In(8), {4}) == 4);
}
