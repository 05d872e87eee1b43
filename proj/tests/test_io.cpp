#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "casimir/io.hpp"

using namespace casimir::io;

TEST_CASE("float formatting is deterministic and round-trip exact", "[io]")
{
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-8.596811) == format_double(-8.596811));
    const double v = -9.6593271534e-4;
    CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.1).find(',') == std::string::npos);
}

TEST_CASE("non-finite values are refused", "[io]")
{
    CHECK_THROWS_AS(format_double(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    CHECK_THROWS_AS(format_double(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("csv rows use commas and a bare newline", "[io]")
{
    CHECK(csv_row({"a", "b", "c"}) == "a,b,c\n");
    CHECK(csv_row({"1"}) == "1\n");
}

TEST_CASE("criterion JSON lines", "[io]")
{
    CHECK(jsonl_criterion("x", 1.0, 2.0, true) ==
          "{\"name\":\"x\",\"measured\":1,\"bound\":2,\"pass\":true}\n");
    CHECK(jsonl_criterion("y", 0.5, 0.25, false) ==
          "{\"name\":\"y\",\"measured\":0.5,\"bound\":0.25,\"pass\":false}\n");
}

TEST_CASE("grids hit their endpoints exactly", "[io]")
{
    auto lin = make_grid(1.0, 2.0, 5, false);
    REQUIRE(lin.size() == 5);
    CHECK(lin.front() == 1.0);
    CHECK(lin.back() == 2.0);
    CHECK(lin[2] == Catch::Approx(1.5));

    auto lg = make_grid(1.0, 100.0, 3, true);
    CHECK(lg[1] == Catch::Approx(10.0).epsilon(1e-12));

    CHECK(make_grid(3.0, 4.0, 1, false) == std::vector<double>{3.0});
    CHECK_THROWS_AS(make_grid(2.0, 1.0, 5, false), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.0, 1.0, 5, true), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 2.0, 0, false), std::invalid_argument);
}
