#include "doctest.h"

#include "npdisc/kernels.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace npdisc;
using kernels::KernelHandle;

TEST_CASE("family tags parse")
{
    CHECK(KernelHandle::parse("hardy").family() == kernels::Family::Hardy);
    CHECK(KernelHandle::parse("hs:-0.5").parameter() == -0.5);
    CHECK(KernelHandle::parse("geom:0.25").family() == kernels::Family::Geometric);
    CHECK_THROWS(KernelHandle::parse("bergman"));
    CHECK_THROWS(KernelHandle::parse("hs:abc"));
}

TEST_CASE("H_s weights are powers of n + 1")
{
    const auto k = KernelHandle::hs(-0.5, 100);
    for (std::size_t n : {0u, 1u, 7u, 100u}) CHECK(k.weights()[n] == doctest::Approx(std::pow(n + 1.0, -0.5)));
}

TEST_CASE("Hardy kernel is the Szego kernel")
{
    const auto k = KernelHandle::hardy(4096);
    const std::complex<double> z{0.3, 0.4}, w{-0.2, 0.5};
    const auto expect = 1.0 / (1.0 - z * std::conj(w));
    CHECK(std::abs(kernels::kernel_eval(k, z, w) - expect) < 1e-12);
}

TEST_CASE("radial sums agree with direct summation")
{
    const auto k = KernelHandle::hs(-0.5, 256);
    double direct = 0.0;
    for (int n = 0; n < 5000; ++n) direct += std::pow(n + 1.0, -0.5) * std::pow(0.9, n);
    CHECK(k.radial_sum(0.9) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(KernelHandle::geometric(0.5).radial_sum(0.5) == doctest::Approx((1 - 0.25) / 0.5));
}

TEST_CASE("monomial multiplier norms")
{
    const auto k = KernelHandle::hs(-1.0, 64);
    CHECK(kernels::monomial_multiplier_norm(k, 8) == doctest::Approx(3.0));
}

TEST_CASE("classification of reference families")
{
    const auto hardy = kernels::classify(KernelHandle::hardy(512), 512);
    CHECK(hardy.mu == doctest::Approx(1.0));
    CHECK(hardy.iso_to_hinf);
    CHECK(hardy.cnp);

    const auto dirichlet_like = kernels::classify(KernelHandle::hs(-0.5, 2048), 2048);
    CHECK(std::isinf(dirichlet_like.mu));
    CHECK_FALSE(dirichlet_like.iso_to_hinf);

    // c_n mass for s = -2 is 1 - 1/zeta(2)
    const auto compact = kernels::classify(KernelHandle::hs(-2.0, 2048), 2048);
    CHECK(compact.moduli_mass == doctest::Approx(1.0 - 6.0 / (std::numbers::pi * std::numbers::pi)).epsilon(1e-6));
    CHECK(compact.compact_regime);
}

TEST_CASE("comparability heuristic")
{
    CHECK(kernels::are_comparable(KernelHandle::hardy().weights(), KernelHandle::geometric(0.5).weights(), 256)
              .comparable);
    const auto c = kernels::are_comparable(KernelHandle::hardy().weights(), KernelHandle::hs(-0.5).weights(), 256);
    CHECK_FALSE(c.comparable);
    CHECK(c.verdict == "diverging");
}

TEST_CASE("kernel evaluation refuses points too close to the circle")
{
    CHECK_THROWS(kernels::kernel_eval(KernelHandle::hardy(), {0.9995, 0.0}, {0.0, 0.0}));
}
