#include "k3lat/fibration.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace k3lat;

TEST_CASE("euler check reports deficits and completeness") {
    FibrationData fd;
    fd.chi = 2;
    fd.fibers = parse_fibers("I0*,I0*,I4,I2,I2,I2");
    EulerCheck inc = euler_check(fd, false);
    CHECK(inc.deficit == 2);
    CHECK(inc.ok());

    FibrationData full;
    full.chi = 2;
    full.fibers = parse_fibers("I2*,I1*,I4,I2,I2,I1");
    EulerCheck comp = euler_check(full, true);
    CHECK(comp.deficit == 0);
    CHECK(comp.ok());

    FibrationData empty;
    empty.chi = 1;
    CHECK(euler_check(empty, false).deficit == 12);

    FibrationData over;
    over.chi = 1;
    over.fibers = parse_fibers("I0*,I0*,I2");
    CHECK_THROWS_AS(euler_check(over, false), std::domain_error);

    FibrationData incomplete_but_declared;
    incomplete_but_declared.chi = 2;
    incomplete_but_declared.fibers = parse_fibers("I4");
    CHECK_FALSE(euler_check(incomplete_but_declared, true).ok());
}

TEST_CASE("plurigenera with two triple fibers") {
    FibrationData fd;
    fd.chi = 1;
    fd.multiple_fibers = {3, 3};
    std::vector<long> expect{0, 1, 2, 1, 2, 3};
    for (int n = 1; n <= 6; ++n) CHECK(plurigenus(fd, n) == expect[n - 1]);
    // matches floor(n/3) + a(n), a = 1,0,1 for n = 0,1,2 mod 3
    for (int n = 1; n <= 30; ++n) {
        int a[] = {1, 0, 1};
        CHECK(plurigenus(fd, n) == n / 3 + a[n % 3]);
    }
}

TEST_CASE("plurigenera with a double and a triple fiber") {
    FibrationData fd;
    fd.chi = 1;
    fd.multiple_fibers = {2, 3};
    std::vector<long> expect{0, 1, 1, 1, 1, 2};
    for (int n = 1; n <= 6; ++n) CHECK(plurigenus(fd, n) == expect[n - 1]);
}

TEST_CASE("plurigenera of a K3 are all 1") {
    FibrationData fd;
    fd.chi = 2;
    for (int n = 1; n <= 12; ++n) CHECK(plurigenus(fd, n) == 1);
}

TEST_CASE("plurigenus input validation") {
    FibrationData fd;
    fd.chi = 1;
    CHECK_THROWS_AS(plurigenus(fd, 0), std::invalid_argument);
    fd.multiple_fibers = {1};
    CHECK_THROWS_AS(plurigenus(fd, 1), std::invalid_argument);
}

TEST_CASE("plurigenus growth is eventually linear of slope deg") {
    FibrationData fd;
    fd.chi = 1;
    fd.multiple_fibers = {2, 3};
    // deg = -1 + 1/2 + 2/3 = 1/6; over one period of length 6 the gain is 1
    for (int n = 12; n <= 48; n += 6)
        CHECK(plurigenus(fd, n + 6) - plurigenus(fd, n) == 1);
    // monotone once in the positive range
    for (int n = 6; n < 60; ++n) CHECK(plurigenus(fd, n + 1) >= plurigenus(fd, n));
}

TEST_CASE("kodaira dimensions") {
    FibrationData k3;
    k3.chi = 2;
    CHECK(kodaira_dimension(k3) == KodairaDimension::zero);

    FibrationData one_mult;
    one_mult.chi = 2;
    one_mult.multiple_fibers = {2};
    CHECK(kodaira_dimension(one_mult) == KodairaDimension::one);

    FibrationData e6;
    e6.chi = 1;
    e6.multiple_fibers = {2, 3};
    CHECK(kodaira_dimension(e6) == KodairaDimension::one);

    FibrationData rational;
    rational.chi = 1;
    CHECK(kodaira_dimension(rational) == KodairaDimension::minus_infinity);

    FibrationData one_triple;
    one_triple.chi = 1;
    one_triple.multiple_fibers = {3};
    CHECK(kodaira_dimension(one_triple) == KodairaDimension::minus_infinity);

    FibrationData two_double;
    two_double.chi = 1;
    two_double.multiple_fibers = {2, 2};
    CHECK(kodaira_dimension(two_double) == KodairaDimension::zero);

    FibrationData honest;
    honest.chi = 3;
    CHECK(kodaira_dimension(honest) == KodairaDimension::one);
}

TEST_CASE("K3 self-consistency: kappa 0 and plurigenus constantly 1") {
    FibrationData k3;
    k3.chi = 2;
    CHECK(kodaira_dimension(k3) == KodairaDimension::zero);
    for (int n = 1; n <= 24; ++n) CHECK(plurigenus(k3, n) == 1);
}

TEST_CASE("quotient canonical self-intersection") {
    CHECK(quotient_canonical_square(4, true).exact == 2);
    CHECK(quotient_canonical_square(2, true).exact == 1);
    CHECK(quotient_canonical_square(0, true).exact == 0);
    CHECK_THROWS_AS(quotient_canonical_square(3, true), std::domain_error);
    auto adv = quotient_canonical_square(4, false);
    CHECK_FALSE(adv.exact.has_value());
    CHECK(adv.note.find("strict drop") != std::string::npos);
}
