#include "doctest.h"
#include "tip/rational.hpp"

using namespace tip;

TEST_CASE("rationals stay canonical and render num/den") {
    CHECK(to_string(rat(5)) == "5/1");
    CHECK(to_string(rat(2, 4)) == "1/2");
    CHECK(to_string(rat(-2, 4)) == "-1/2");
    CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
}

TEST_CASE("parsing accepts p/q and bare integers, rejects junk") {
    CHECK(*parse_rational("9/10") == rat(9, 10));
    CHECK(*parse_rational("-3/6") == rat(-1, 2));
    CHECK(*parse_rational("7") == rat(7));
    CHECK(!parse_rational("0.9"));
    CHECK(!parse_rational("a/b"));
    CHECK(!parse_rational("1/0"));
    CHECK(!parse_rational(""));
}

TEST_CASE("integer powers with negative exponents") {
    CHECK(pow_int(rat(1, 2), -4) == rat(16));
    CHECK(pow_int(rat(1, 2), 0) == rat(1));
    CHECK(pow_int(rat(2, 3), 3) == rat(8, 27));
    CHECK(pow_int(rat(9, 10), -1) == rat(10, 9));
}

TEST_CASE("ceil and abs") {
    CHECK(rat_ceil(rat(7, 2)) == rat(4));
    CHECK(rat_ceil(rat(-7, 2)) == rat(-3));
    CHECK(rat_ceil(rat(3)) == rat(3));
    CHECK(rat_abs(rat(-5, 3)) == rat(5, 3));
}
