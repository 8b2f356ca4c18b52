#include "k3lat/reconstruct.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>
#include <set>

using namespace k3lat;

namespace {

// Brute-force successive minima over integer combinations with small
// coefficients; valid as long as the reduced basis has coefficients in
// range, which holds for the small lattices used here.
struct Minima {
    Int norm1;
    Int norm2;
    std::vector<Vec2> shortest;
};

Minima enumerate_minima(const PlaneLattice& lat, int range = 10) {
    Minima m{Int(-1), Int(-1), {}};
    std::vector<Vec2> all;
    for (int a = -range; a <= range; ++a)
        for (int b = -range; b <= range; ++b) {
            if (a == 0 && b == 0) continue;
            Vec2 v{a * lat.u[0] + b * lat.v[0], a * lat.u[1] + b * lat.v[1]};
            all.push_back(v);
            Int n = norm2(v);
            if (m.norm1 == -1 || n < m.norm1) m.norm1 = n;
        }
    for (const auto& v : all)
        if (norm2(v) == m.norm1) m.shortest.push_back(v);
    // second minimum: shortest among vectors independent of some fixed minimum
    const Vec2& s = m.shortest.front();
    for (const auto& v : all) {
        if (s[0] * v[1] - s[1] * v[0] == 0) continue;
        Int n = norm2(v);
        if (m.norm2 == -1 || n < m.norm2) m.norm2 = n;
    }
    return m;
}

bool same_up_to_sign(const Vec2& a, const Vec2& b) {
    return (a[0] == b[0] && a[1] == b[1]) || (a[0] == -b[0] && a[1] == -b[1]);
}

}  // namespace

TEST_CASE("gauss reduction leaves a reduced basis reduced") {
    PlaneLattice lat{{Int(1), Int(0)}, {Int(0), Int(1)}};
    PlaneLattice red = gauss_reduce(lat);
    CHECK(norm2(red.u) == 1);
    CHECK(norm2(red.v) == 1);
    CHECK(boost::multiprecision::abs(red.det()) == 1);
}

TEST_CASE("gauss reduction finds the shortest vector of {(5,0),(3,1)}") {
    PlaneLattice lat{{Int(5), Int(0)}, {Int(3), Int(1)}};
    PlaneLattice red = gauss_reduce(lat);
    Minima oracle = enumerate_minima(lat);
    CHECK(norm2(red.u) == oracle.norm1);
    CHECK(norm2(red.v) == oracle.norm2);
    CHECK(boost::multiprecision::abs(red.det()) == 5);
    Vec2 expected{Int(-2), Int(1)};
    CHECK((same_up_to_sign(red.u, expected) || same_up_to_sign(red.v, expected)));
}

TEST_CASE("gauss reduction of {(100,1),(99,1)} yields (1,0)") {
    PlaneLattice lat{{Int(100), Int(1)}, {Int(99), Int(1)}};
    PlaneLattice red = gauss_reduce(lat);
    Vec2 e1{Int(1), Int(0)};
    CHECK((same_up_to_sign(red.u, e1) || same_up_to_sign(red.v, e1)));
}

TEST_CASE("gauss reduction rejects a dependent basis") {
    PlaneLattice lat{{Int(2), Int(4)}, {Int(1), Int(2)}};
    CHECK_THROWS_AS(gauss_reduce(lat), std::domain_error);
}

TEST_CASE("gauss reduction preserves the lattice on random bases") {
    // reducedness (|u| <= |v|, |<u,v>| <= |u|^2/2) certifies the successive
    // minima, so no brute force is needed here
    std::mt19937 rng(20240811);
    std::uniform_int_distribution<int> coeff(-1000, 1000);
    for (int trial = 0; trial < 2000; ++trial) {
        PlaneLattice lat{{Int(coeff(rng)), Int(coeff(rng))}, {Int(coeff(rng)), Int(coeff(rng))}};
        if (lat.det() == 0) continue;
        PlaneLattice red = gauss_reduce(lat);
        CHECK(boost::multiprecision::abs(red.det()) == boost::multiprecision::abs(lat.det()));
        CHECK(norm2(red.u) <= norm2(red.v));
        CHECK(2 * boost::multiprecision::abs(dot(red.u, red.v)) <= norm2(red.u));
        // the original basis vectors lie in the reduced lattice
        for (const Vec2& w : {lat.u, lat.v}) {
            Int d = red.det();
            Int x = w[0] * red.v[1] - w[1] * red.v[0];
            Int y = red.u[0] * w[1] - red.u[1] * w[0];
            CHECK(x % d == 0);
            CHECK(y % d == 0);
        }
    }
}

TEST_CASE("residue systems validate their entries") {
    CHECK_THROWS_AS(ResidueSystem({}), std::invalid_argument);
    CHECK_THROWS_AS(ResidueSystem({{Int(4), Int(1)}}), std::invalid_argument);  // not prime
    CHECK_THROWS_AS(ResidueSystem({{Int(5), Int(1)}, {Int(5), Int(2)}}), std::invalid_argument);
    ResidueSystem sys({{Int(5), Int(-1)}});
    CHECK(sys.entries()[0].residue == 4);  // normalized into [0, p)
}

TEST_CASE("crt combines residues") {
    auto [m1, r1] = crt_combine(ResidueSystem({{Int(3), Int(2)}, {Int(5), Int(3)}}));
    CHECK(m1 == 15);
    CHECK(r1 == 8);
    auto [m2, r2] = crt_combine(ResidueSystem({{Int(7), Int(0)}}));
    CHECK(m2 == 7);
    CHECK(r2 == 0);
    auto [m3, r3] = crt_combine(ResidueSystem({{Int(3), Int(1)}, {Int(5), Int(1)}, {Int(7), Int(1)}}));
    CHECK(m3 == 105);
    CHECK(r3 == 1);
}

TEST_CASE("crt result reduces back to the inputs") {
    std::mt19937 rng(7);
    std::vector<Int> primes{Int(3), Int(5), Int(7), Int(11), Int(13)};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ResidueEntry> entries;
        for (const auto& p : primes) {
            std::uniform_int_distribution<long> d(0, static_cast<long>(p) - 1);
            entries.push_back({p, Int(d(rng))});
        }
        ResidueSystem sys(entries);
        auto [mod, res] = crt_combine(sys);
        for (const auto& e : sys.entries()) CHECK(res % e.prime == e.residue);
        CHECK(mod == sys.modulus());
    }
}

TEST_CASE("constant residues reconstruct the integer") {
    auto r = rational_reconstruct(ResidueSystem({{Int(101), Int(7)}, {Int(103), Int(7)}}));
    REQUIRE(r.has_value());
    CHECK(*r == Rat(7));
}

TEST_CASE("reconstruction of 1/2 from five small primes") {
    // oracle: enumerate all fractions b/c with |b| <= 50, 1 <= c <= 50 and
    // keep those matching every residue; the survivor is the expected value
    std::vector<ResidueEntry> entries{
        {Int(5), Int(3)}, {Int(7), Int(4)}, {Int(11), Int(6)}, {Int(13), Int(7)}, {Int(17), Int(9)}};
    std::vector<Rat> matches;
    for (int b = -50; b <= 50; ++b)
        for (int c = 1; c <= 50; ++c) {
            if (std::gcd(std::abs(b), c) != 1) continue;
            bool all = true;
            for (const auto& e : entries) {
                Int lhs = Int(b) % e.prime, rhs = Int(c) * e.residue % e.prime;
                if ((lhs - rhs) % e.prime != 0) all = false;
            }
            if (all) matches.push_back(Rat(b, c));
        }
    REQUIRE(matches.size() == 1);
    REQUIRE(matches.front() == Rat(1, 2));

    auto r = rational_reconstruct(ResidueSystem(entries));
    REQUIRE(r.has_value());
    CHECK(*r == Rat(1, 2));
}

TEST_CASE("a single prime never gives a confident answer") {
    CHECK_FALSE(rational_reconstruct(ResidueSystem({{Int(5), Int(2)}})).has_value());
    CHECK_FALSE(rational_reconstruct(ResidueSystem({{Int(1000003), Int(2)}})).has_value());
}

TEST_CASE("reconstruction declines when the modulus is too small") {
    // residues of 12/35 modulo two small primes: norm^2 is far above M/1024
    std::vector<ResidueEntry> entries{{Int(101), Int(12 * 75 % 101)}, {Int(103), Int(12 * 50 % 103)}};
    // (35^-1 = 75 mod 101, 35^-1 = 50 mod 103)
    CHECK_FALSE(rational_reconstruct(ResidueSystem(entries)).has_value());
}

TEST_CASE("planted fractions are recovered exactly") {
    std::mt19937 rng(123456);
    std::vector<long> primes{10007, 10009, 10037, 10039, 10061, 10067, 10069, 10079};
    std::uniform_int_distribution<int> num(-999, 999);
    std::uniform_int_distribution<int> den(1, 999);
    std::uniform_int_distribution<size_t> which(0, primes.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
        int b = num(rng), c = den(rng);
        int g = std::gcd(std::abs(b), c);
        if (g == 0) continue;
        b /= g;
        c /= g;
        // five distinct primes
        std::set<long> chosen;
        while (chosen.size() < 5) chosen.insert(primes[which(rng)]);
        std::vector<ResidueEntry> entries;
        for (long p : chosen) {
            Int inv = mod_inverse(Int(c), Int(p));
            Int res = (Int(b) % p * inv % p + p) % p;
            entries.push_back({Int(p), res});
        }
        auto r = rational_reconstruct(ResidueSystem(entries));
        REQUIRE(r.has_value());
        CHECK(*r == Rat(b, c));
    }
}
