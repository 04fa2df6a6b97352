#include "doctest.h"

#include "npdisc/geometry.hpp"
#include "npdisc/sequences.hpp"

#include <cmath>

using namespace npdisc;

TEST_CASE("dyadic generations hold floor(2^{n/2}) points")
{
    // 1 + 2 + 2 + 4 + 5 + 8
    CHECK(sequences::named_sequence("dyadic_separated", 6).size() == 22);
}

TEST_CASE("Blaschke sum of v_n")
{
    const auto v = sequences::named_sequence("vn_quadratic", 10);
    double oracle = 0.0;
    for (int n = 2; n <= 11; ++n) oracle += 1.0 / (n * n);
    CHECK(sequences::blaschke_sum(v).sum == doctest::Approx(oracle).epsilon(1e-15));
}

TEST_CASE("two-point separation product is the distance")
{
    const auto s = sequences::DiscSequence::from_values("pair", {{0.2, 0.1}, {-0.4, 0.3}});
    const double d = geometry::pseudo_dist(s[0].point, s[1].point);
    CHECK(sequences::separation_delta(s, 0).value == doctest::Approx(d));
    CHECK(sequences::nearest_gap(s, 1) == doctest::Approx(d));
}

TEST_CASE("interpolation budget")
{
    const double d = 0.25;
    CHECK(sequences::garnett_budget(d) == doctest::Approx(d / std::pow(1 + std::log(4.0), 2)));
    CHECK(sequences::garnett_budget(0.0) == 0.0);
}

TEST_CASE("Carleson ratio counts points in the box exactly")
{
    // one point with 1 - |v| = 1/8 at angle 0, box p = 2 has side 1/4
    const auto s = sequences::DiscSequence::from_values("one", {{0.875, 0.0}});
    CHECK(sequences::carleson_ratio(s, 2) == 0.5);
    CHECK(sequences::carleson_ratio(s, 4) == 0.0);
}

TEST_CASE("sequence construction errors")
{
    CHECK_THROWS(sequences::named_sequence("nope", 5));
    CHECK_THROWS(sequences::named_sequence("dyadic_separated", 31));
    CHECK_THROWS(sequences::DiscSequence::from_values("dup", {{0.5, 0.0}, {0.5, 0.0}}));
}

TEST_CASE("v_n is separated with a shrinking gap, w_n is strongly separated")
{
    CHECK(sequences::is_separated(sequences::named_sequence("wn_gaussian", 10)).inf_gap > 0.6);
    CHECK(sequences::is_separated(sequences::named_sequence("vn_quadratic", 2000)).inf_gap < 1e-3);
}
