#include "k3lat/gram_lattice.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace k3lat;

namespace {

// Local solvability oracle for a x^2 + b y^2 + c z^2 = 0 by exhaustive
// residue search: over Z/p^k a primitive solution must exist for solvable
// forms once k covers the relevant valuations (k=4 at 2, k=3 at odd p is
// plenty for the small diagonal entries used here).
bool solvable_mod_prime_power(long a, long b, long c, long p, int k) {
    long mod = 1;
    for (int i = 0; i < k; ++i) mod *= p;
    auto red = [&](long x) { return ((x % mod) + mod) % mod; };
    for (long x = 0; x < mod; ++x)
        for (long y = 0; y < mod; ++y)
            for (long z = 0; z < mod; ++z) {
                if (x % p == 0 && y % p == 0 && z % p == 0) continue;
                long v = red(red(a * x % mod * x) + red(b * y % mod * y) + red(c * z % mod * z));
                if (v == 0) return true;
            }
    return false;
}

bool solvable_real(long a, long b, long c) {
    return !(a > 0 && b > 0 && c > 0) && !(a < 0 && b < 0 && c < 0);
}

}  // namespace

TEST_CASE("gram lattice construction validates input") {
    CHECK_THROWS_AS(GramLattice(RatMatrix{}), std::invalid_argument);
    CHECK_THROWS_AS(GramLattice(RatMatrix{{Rat(0), Rat(1)}, {Rat(2), Rat(0)}}), std::invalid_argument);
    CHECK_THROWS_AS(GramLattice(RatMatrix{{Rat(1), Rat(1)}, {Rat(1), Rat(1)}}), std::invalid_argument);
}

TEST_CASE("discriminants of the standard lattices") {
    CHECK(disc(lattice_U()) == -1);
    CHECK(disc(lattice_A(2)) == 3);
    for (int n = 1; n <= 9; ++n) CHECK(disc(lattice_A(n)) == n + 1);
    for (int n = 4; n <= 10; ++n) CHECK(disc(lattice_D(n)) == 4);
    CHECK(disc(lattice_E(6)) == 3);
    CHECK(disc(lattice_E(7)) == 2);
    CHECK(disc(lattice_E(8)) == 1);
}

TEST_CASE("twist scales the form") {
    CHECK(twist(lattice_diag({Rat(2)}), Rat(2)) == lattice_diag({Rat(4)}));
    GramLattice mu = twist(lattice_U(), Rat(-1));
    CHECK(mu.gram()[0][1] == -1);
    CHECK(disc(mu) == -1);
    CHECK(disc(twist(lattice_A(2), Rat(2))) == 12);
    CHECK_THROWS_AS(twist(lattice_U(), Rat(0)), std::domain_error);
}

TEST_CASE("scaling vectors matches twisting by the square") {
    CHECK(scale_vectors(lattice_diag({Rat(1)}), Rat(2)) == lattice_diag({Rat(4)}));
    CHECK(scale_vectors(lattice_U(), Rat(1)) == lattice_U());
    CHECK(disc(scale_vectors(lattice_A(2), Rat(3))) == 3 * 81);
}

TEST_CASE("adjoining a fractional vector") {
    GramLattice e8 = lattice_diag({Rat(8)});
    GramLattice out = adjoin_fraction(e8, {Int(1)}, Int(2));
    CHECK(out == lattice_diag({Rat(2)}));
    CHECK_THROWS_AS(adjoin_fraction(lattice_U(), {Int(2), Int(0)}, Int(2)), std::domain_error);
    // isotropic vector (1,0) of U halves to disc -1/4
    GramLattice half = adjoin_fraction(lattice_U(), {Int(1), Int(0)}, Int(2));
    CHECK(disc(half) == Rat(-1, 4));
}

TEST_CASE("adjoin integrality flags") {
    // <4>: (1)/2 gives <1>, integral but odd diagonal
    GramLattice l = lattice_diag({Rat(4)});
    CHECK(adjoin_fraction(l, {Int(1)}, Int(2), OverlatticeIntegrality::integral) ==
          lattice_diag({Rat(1)}));
    CHECK_THROWS_AS(adjoin_fraction(l, {Int(1)}, Int(2), OverlatticeIntegrality::even),
                    std::domain_error);
    CHECK_THROWS_AS(adjoin_fraction(lattice_diag({Rat(2)}), {Int(1)}, Int(2),
                                    OverlatticeIntegrality::integral),
                    std::domain_error);
}

TEST_CASE("square classes") {
    CHECK(square_class(Rat(-64)) == SquareClass{-1, Int(1)});
    CHECK(square_class(Rat(40)) == SquareClass{1, Int(10)});
    CHECK(square_class(Rat(-144)) == SquareClass{-1, Int(1)});
    CHECK(square_class(Rat(2, 3)) == SquareClass{1, Int(6)});
    CHECK_THROWS_AS(square_class(Rat(0)), std::domain_error);
}

TEST_CASE("conic invariant of definite and isotropic forms") {
    auto bad = conic_invariant(lattice_diag({Rat(1), Rat(1), Rat(1)}));
    REQUIRE(bad.size() == 2);
    CHECK(bad.count(Place{false, Int(2)}) == 1);
    CHECK(bad.count(Place{true, Int(0)}) == 1);
    CHECK(conic_invariant(lattice_diag({Rat(1), Rat(1), Rat(-1)})).empty());
    CHECK_THROWS_AS(conic_invariant(lattice_U()), std::invalid_argument);
}

TEST_CASE("conic invariant matches exhaustive local solvability") {
    // small diagonal forms; oracle checks solvability at 2, 3, 5 and the reals
    std::vector<std::array<long, 3>> forms{{1, 1, 1},   {1, 1, -1}, {1, -2, -3}, {1, 2, 3},
                                           {2, 3, -5},  {1, -5, 5}, {-1, -1, 3}, {1, 3, 3},
                                           {2, -3, -1}, {5, 2, 1}};
    for (const auto& [a, b, c] : forms) {
        auto bad = conic_invariant(lattice_diag({Rat(a), Rat(b), Rat(c)}));
        CHECK(bad.size() % 2 == 0);
        CHECK(solvable_real(a, b, c) == (bad.count(Place{true, Int(0)}) == 0));
        for (long p : {2L, 3L, 5L}) {
            bool expected = solvable_mod_prime_power(a, b, c, p, p == 2 ? 4 : 3);
            CHECK(expected == (bad.count(Place{false, Int(p)}) == 0));
        }
    }
}

TEST_CASE("lattice laws on random lattices") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> entry(-4, 4);
    std::uniform_int_distribution<int> rankd(1, 4);
    std::uniform_int_distribution<int> scale_num(1, 5);
    std::uniform_int_distribution<int> scale_den(1, 5);
    std::uniform_int_distribution<int> sign(0, 1);
    int built = 0;
    while (built < 2000) {
        int n = rankd(rng);
        RatMatrix g(n, std::vector<Rat>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) g[i][j] = g[j][i] = Rat(entry(rng));
        Rat d = rat_matrix_det(g);
        if (d == 0) continue;
        ++built;
        GramLattice l{g};
        Rat r = Rat(scale_num(rng), scale_den(rng)) * (sign(rng) ? 1 : -1);
        // rL and L(r^2) are isometric (identical Gram here)
        CHECK(scale_vectors(l, r) == twist(l, r * r));
        // disc(twist) = r^rank * disc
        CHECK(disc(twist(l, r)) == rat_pow(r, n) * disc(l));
        // square class invariance under twisting by squares
        CHECK(square_class(disc(twist(l, r * r))) == square_class(disc(l)));
    }
}

TEST_CASE("adjoin law on random lattices") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> entry(-4, 4);
    std::uniform_int_distribution<int> rankd(1, 4);
    std::uniform_int_distribution<int> coordd(-3, 3);
    std::uniform_int_distribution<int> dd(2, 5);
    int built = 0;
    while (built < 1000) {
        int n = rankd(rng);
        RatMatrix g(n, std::vector<Rat>(n));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) g[i][j] = g[j][i] = Rat(entry(rng));
        if (rat_matrix_det(g) == 0) continue;
        GramLattice l{g};
        Int d(dd(rng));
        std::vector<Int> v(n);
        Int content = 0;
        for (auto& x : v) {
            x = coordd(rng);
            content = boost::multiprecision::gcd(content, x);
        }
        if (content == 0 || boost::multiprecision::gcd(content, d) != 1) continue;
        ++built;
        GramLattice out = adjoin_fraction(l, v, d);
        CHECK(disc(out) == disc(l) / Rat(d * d));
        CHECK(square_class(disc(out)) == square_class(disc(l)));
    }
}
