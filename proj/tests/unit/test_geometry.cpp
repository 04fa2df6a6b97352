#include "doctest.h"

#include "npdisc/geometry.hpp"
#include "npdisc/kernels.hpp"
#include "npdisc/random.hpp"

#include <cmath>

using namespace npdisc;
using geometry::BallPoint;
using geometry::cd;
using geometry::Vec;

TEST_CASE("scalar distance matches the disc formula")
{
    const cd z{0.2, -0.7}, w{-0.5, 0.1};
    CHECK(geometry::pseudo_dist(z, w) == doctest::Approx(std::abs(z - w) / std::abs(1.0 - z * std::conj(w))));
}

TEST_CASE("log-gap disc points keep distances far below double resolution")
{
    // 1 - e^{-900} and 1 - e^{-961}: d = (a - b)/(a + b - ab) = (1 - e^{-61})/(1 + e^{-61} - e^{-961})
    const auto p = geometry::DiscPoint::from_log_gap(1.0, -900.0);
    const auto q = geometry::DiscPoint::from_log_gap(1.0, -961.0);
    const double e = std::exp(-61.0);
    CHECK(geometry::pseudo_dist(p, q) == doctest::Approx((1.0 - e) / (1.0 + e)).epsilon(1e-15));
}

TEST_CASE("ball points outside the closed ball are rejected")
{
    Vec v(2);
    v << 0.8, 0.8;
    CHECK_THROWS(BallPoint(v));
}

TEST_CASE("Mobius automorphism is an involution")
{
    CounterRng rng(3);
    for (int i = 0; i < 50; ++i) {
        Vec a(3), z(3);
        for (int k = 0; k < 3; ++k) {
            a(k) = rng.in_disc(0.5);
            z(k) = rng.in_disc(0.5);
        }
        const BallPoint A(a), Z(z);
        const auto back = geometry::mobius_auto(A, geometry::mobius_auto(A, Z));
        CHECK((back.coords() - z).norm() < 1e-12);
    }
}

TEST_CASE("distance interval brackets the value")
{
    Vec a(2), b(2);
    a << cd(0.6, 0.0), cd(0.0, 0.7);
    b << cd(0.59, 0.0), cd(0.0, 0.71);
    const auto iv = geometry::pseudo_dist_interval(BallPoint(a), BallPoint(b));
    CHECK(iv.lo <= iv.value);
    CHECK(iv.value <= iv.hi);
}

TEST_CASE("crossing map derivatives and parameter")
{
    const auto f = geometry::crossing_map(0.5);
    CHECK(geometry::crossing_parameter(f) == doctest::Approx(3.0));
    for (cd z : {cd(0.1, 0.2), cd(-0.6, 0.3), cd(0.0, -0.9)})
        CHECK((f.derivative(z) - f.numeric_derivative(z)).norm() < 1e-7);
    // f(1) = f(-1) up to the Blaschke factor value b(-1)^2 = 1
    CHECK((f(1.0).coords() - f(-1.0).coords()).norm() < 1e-15);
}

TEST_CASE("Hardy disc embedding has norm |z|")
{
    const auto d = geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::hardy(256));
    const auto v = d.eval({0.6, 0.3}, false);
    CHECK(v.point.norm() == doctest::Approx(std::abs(cd(0.6, 0.3))).epsilon(1e-12));
    CHECK(d.first_moment() == doctest::Approx(1.0));
}

TEST_CASE("kernel identities agree with direct evaluation")
{
    const auto d = geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::geometric(0.5, 2000));
    const double x = 0.9;
    const auto r = geometry::tangential_ratio(d, x, 0.0);
    const auto direct = geometry::tangential_ratio(d.as_curve(), x, 0.0);
    CHECK(r.ratio1 == doctest::Approx(direct.ratio1).epsilon(1e-8));
    CHECK(r.ratio2 == doctest::Approx(direct.ratio2).epsilon(1e-8));
}

TEST_CASE("divergent first moment surfaces at the boundary")
{
    const auto d = geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::hs(-0.5));
    CHECK(std::isinf(d.first_moment()));
    CHECK_THROWS_AS(geometry::transversality_pairing(d, 0.0), geometry::NonFiniteValue);
}
