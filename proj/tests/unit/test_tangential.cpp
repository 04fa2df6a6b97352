#include "doctest.h"

#include "npdisc/random.hpp"
#include "npdisc/tangential.hpp"

#include <cmath>
#include <numbers>

using namespace npdisc;
using tangential::cd;

TEST_CASE("clip radius range")
{
    CHECK_THROWS(tangential::ConformalChain{0.5}.validate());
    CHECK_NOTHROW(tangential::ConformalChain{0.75}.validate());
}

TEST_CASE("f1 maps the disc into the disc and its defect is stable")
{
    const tangential::ConformalChain c;
    CounterRng rng(1);
    for (int i = 0; i < 200; ++i) {
        const cd z = rng.in_disc(0.99);
        const cd f = tangential::chain_eval(c, z, tangential::Stage::Clipped);
        CHECK(std::abs(f) < 1.0);
        CHECK(tangential::clipped_defect(c, z) == doctest::Approx(1.0 - std::norm(f)).epsilon(1e-9));
    }
}

TEST_CASE("conjugate of cos kt is sin kt")
{
    tangential::BoundarySampling b;
    b.m = 256;
    for (std::size_t k = 0; k < b.m; ++k) b.values.push_back(std::cos(5.0 * b.angle(k)) + 2.0);
    const auto h = tangential::harmonic_conjugate(b);
    for (std::size_t k = 0; k < b.m; ++k) CHECK(h.values[k] == doctest::Approx(std::sin(5.0 * b.angle(k))).scale(1.0));
}

TEST_CASE("grid size must be a power of two")
{
    CHECK_THROWS(tangential::boundary_modulus_defect(tangential::ConformalChain{}, 300));
}

TEST_CASE("interior f2 agrees with the truncated Fourier extension away from the circle")
{
    const auto e = tangential::assemble_embedding(tangential::ConformalChain{}, 4096);
    const cd z{0.3, 0.4};
    CHECK(std::abs(e.f2(z) - e.f2_fourier(z)) < 1e-3);
    CHECK(e.ball_defect(z) > 0.0);
    CHECK(std::abs(e.f2(1.0)) == 0.0);
}
