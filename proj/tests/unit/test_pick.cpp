#include "doctest.h"

#include "npdisc/geometry.hpp"
#include "npdisc/pick.hpp"
#include "npdisc/sequences.hpp"

#include <cmath>

using namespace npdisc;
using geometry::cd;

TEST_CASE("one-point Pick matrix")
{
    const cd z{0.3, 0.1}, w{0.5, -0.2};
    const auto m = pick::pick_matrix(pick::PickProblem::drury_arveson({geometry::DiscPoint::from_value(z)}, {w}));
    CHECK(m(0, 0).real() == doctest::Approx((1 - std::norm(w)) / (1 - std::norm(z))));
}

TEST_CASE("identity data is interpolable, Schwarz-violating data is not")
{
    std::vector<geometry::DiscPoint> nodes{geometry::DiscPoint::from_value(0.0), geometry::DiscPoint::from_value(0.5)};
    CHECK(pick::solvable(pick::PickProblem::drury_arveson(nodes, {0.0, 0.5})));
    CHECK_FALSE(pick::solvable(pick::PickProblem::drury_arveson(nodes, {0.0, 0.9})));
}

TEST_CASE("psd check reports the smallest eigenvalue")
{
    pick::Mat m(2, 2);
    m << 2.0, 1.0, 1.0, 2.0;
    const auto v = pick::psd_check(m);
    CHECK(v.min_eigenvalue == doctest::Approx(1.0));
    CHECK(v.verdict == pick::Verdict::PositiveDefinite);
    m(0, 1) = m(1, 0) = 3.0;
    CHECK(pick::psd_check(m).verdict == pick::Verdict::Indefinite);
}

TEST_CASE("extractor argument checks")
{
    const auto seq = sequences::named_sequence("wn_gaussian", 5);
    std::vector<geometry::DiscPoint> pts;
    for (const auto& p : seq.points()) pts.push_back(p.point);
    CHECK_THROWS_AS(pick::extract_interpolating_subsequence(pts, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(pick::extract_interpolating_subsequence(pts, 0.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(pick::extract_interpolating_subsequence(pts, 0.5, 8), pick::ExtractionExhausted);
}

TEST_CASE("extractor keeps an increasing index list")
{
    const auto seq = sequences::named_sequence("vn_quadratic", 2000);
    std::vector<geometry::DiscPoint> pts;
    for (const auto& p : seq.points()) pts.push_back(p.point);
    const auto res = pick::extract_interpolating_subsequence(pts, 0.5, 3);
    REQUIRE(res.indices.size() == 3);
    for (std::size_t i = 1; i < 3; ++i) CHECK(res.indices[i] > res.indices[i - 1]);
}

TEST_CASE("crossing determinant equals lhs minus rhs in sign")
{
    const auto c = pick::crossing_determinant(0.5, 2.0, 1e-3);
    CHECK(c.s == doctest::Approx(3.0));
    CHECK((c.det < 0.0) == (c.lhs > c.rhs));
    CHECK_THROWS(pick::crossing_determinant(0.5, 0.5, 1e-3));
}
