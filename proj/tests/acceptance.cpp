// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include "npdisc/cli.hpp"
#include "npdisc/geometry.hpp"
#include "npdisc/kernels.hpp"
#include "npdisc/pick.hpp"
#include "npdisc/random.hpp"
#include "npdisc/sequences.hpp"
#include "npdisc/series.hpp"
#include "npdisc/tangential.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace npdisc;
using geometry::BallPoint;
using geometry::cd;
using geometry::Vec;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

std::vector<series::CoefficientSequence> random_moduli(std::size_t count, std::size_t N)
{
    CounterRng rng(20240601);
    std::vector<series::CoefficientSequence> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> c(N, 0.0);  // c[0] holds c_1
        double total = 0.0;
        // a mix of fast and slow decay, some zero entries, total mass in (0.3, 1]
        const double decay = rng.uniform(0.05, 1.0);
        for (std::size_t n = 1; n <= N; ++n) {
            const bool zero = n > 1 && rng.uniform() < 0.2;
            c[n - 1] = zero ? 0.0 : rng.uniform(0.01, 1.0) * std::exp(-decay * double(n));
            total += c[n - 1];
        }
        const double mass = rng.uniform(0.3, 1.0);
        for (auto& v : c) v *= mass / total;
        out.emplace_back(std::move(c));
    }
    return out;
}

// Coefficients of 1/(1 - g) by long-division in long double.
std::vector<long double> reciprocal_oracle(const series::CoefficientSequence& c, std::size_t N)
{
    std::vector<long double> h(N + 1, 0.0L), q(N + 1, 0.0L);
    h[0] = 1.0L;
    for (std::size_t n = 1; n <= N; ++n) h[n] = -static_cast<long double>(c[n]);
    q[0] = 1.0L / h[0];
    for (std::size_t n = 1; n <= N; ++n) {
        long double s = 0.0L;
        for (std::size_t k = 1; k <= n; ++k) s += h[k] * q[n - k];
        q[n] = -s / h[0];
    }
    return q;
}

Outcome c1_recursion_vs_generating()
{
    const std::size_t N = 200;
    double worst = 0.0;
    for (const auto& c : random_moduli(50, N)) {
        const auto a = series::weights_from_moduli(c, N);
        const auto q = reciprocal_oracle(c, N);
        for (std::size_t n = 0; n <= N; ++n)
            worst = std::max(worst, double(std::fabs((a[n] - q[n]) / q[n])));
    }
    return {worst <= 1e-12, fmt("max relative deviation %.3g", worst)};
}

Outcome c2_supermultiplicative()
{
    const std::size_t N = 200;
    double worst = 0.0;
    for (const auto& c : random_moduli(50, N)) {
        const auto a = series::weights_from_moduli(c, N);
        for (std::size_t k = 0; k <= N; ++k)
            for (std::size_t n = 0; k + n <= N; ++n) worst = std::max(worst, a[k] * a[n] / a[n + k]);
    }
    return {worst <= 1.0 + 1e-12, fmt("max a_k a_n / a_{n+k} = %.15g", worst)};
}

Outcome c3_efp_geometric()
{
    const std::size_t N = 256;
    const auto k = kernels::KernelHandle::geometric(0.5, N);
    std::size_t inexact = 0;
    for (std::size_t n = 1; n <= N; ++n)
        if (k.weights()[n] != 0.5) ++inexact;
    const auto rep = kernels::classify(k, N);
    const bool ok = inexact == 0 && k.weights()[0] == 1.0 && std::fabs(rep.mu - 2.0) <= 1e-10 &&
                    std::fabs(rep.efp_limit_estimate - 0.5) <= 1e-10;
    return {ok, fmt("inexact a_n: %.0f, mu = %.15g, limit estimate = %.15g", double(inexact), rep.mu,
                    rep.efp_limit_estimate)};
}

Outcome c4_hs_scale()
{
    double min_c = std::numeric_limits<double>::infinity();
    for (double s : {0.0, -0.25, -0.5, -0.75, -1.0}) {
        const auto c = series::moduli_from_weights(kernels::KernelHandle::hs(s, 512).weights(), 512);
        for (std::size_t n = 1; n < c.size(); ++n) min_c = std::min(min_c, c[n]);
    }
    const auto k = kernels::KernelHandle::hs(-2.0, 4096);
    const auto rep = kernels::classify(k, 4096);
    const bool ok = min_c >= -1e-12 && rep.moduli_mass < 1.0 && std::isfinite(rep.strictly_cyclic_sup);
    return {ok, fmt("min c_n = %.3g, s=-2: sum c_n = %.12g, strict cyclicity sup = %.6g", min_c, rep.moduli_mass,
                    rep.strictly_cyclic_sup)};
}

BallPoint random_ball(CounterRng& rng, int d, double radius)
{
    Vec v(d);
    do {
        for (int i = 0; i < d; ++i) v(i) = cd(rng.uniform(-1, 1), rng.uniform(-1, 1));
    } while (v.norm() >= 1.0);
    return BallPoint(Vec(v * radius * std::pow(rng.uniform(), 0.25)));
}

Outcome c5_mobius()
{
    CounterRng rng(5);
    double worst_norm = 0.0, worst_inv = 0.0;
    for (int d : {2, 4}) {
        for (int i = 0; i < 1000; ++i) {
            const auto z = random_ball(rng, d, 0.999), w = random_ball(rng, d, 0.999), a = random_ball(rng, d, 0.999);
            const double dzw = geometry::pseudo_dist(z, w);
            worst_norm = std::max(worst_norm, std::fabs(geometry::mobius_auto(w, z).norm() - dzw));
            const double moved =
                geometry::pseudo_dist(geometry::mobius_auto(a, z), geometry::mobius_auto(a, w));
            worst_inv = std::max(worst_inv, std::fabs(moved - dzw));
        }
    }
    return {worst_norm <= 1e-12 && worst_inv <= 1e-10,
            fmt("max | ||phi_w(z)|| - d | = %.3g, max invariance error = %.3g", worst_norm, worst_inv)};
}

Outcome c6_sequence_distances()
{
    const auto v = sequences::named_sequence("vn_quadratic", 100);  // v_2 .. v_101
    double worst_v = 0.0;
    for (int n = 2; n <= 100; ++n) {
        const double d = geometry::pseudo_dist(v[n - 2].point, v[n - 1].point);
        const double expect = (2.0 * n + 1.0) / (2.0 * n * n + 2.0 * n);
        worst_v = std::max(worst_v, std::fabs(d - expect));
    }
    const auto w = sequences::named_sequence("wn_gaussian", 101);
    double worst_w = 0.0;
    for (int n = 1; n <= 100; ++n) {
        const double d = geometry::pseudo_dist(w[n - 1].point, w[n].point);
        const double e1 = std::exp(-2.0 * n - 1.0), e2 = std::exp(-double(n) * n - 2.0 * n - 1.0);
        const double expect = (1.0 - e1) / (1.0 + e1 - e2);
        worst_w = std::max(worst_w, std::fabs(d - expect));
    }
    return {worst_v <= 1e-14 && worst_w <= 1e-14, fmt("max error v_n: %.3g, w_n: %.3g", worst_v, worst_w)};
}

Outcome c7_crossing_determinant()
{
    double worst_ratio = 0.0, max_det = -std::numeric_limits<double>::infinity();
    for (double r : {0.3, 0.5, 0.7})
        for (double C : {1.5, 2.0, 5.0, 20.0}) {
            const auto res = pick::crossing_determinant(r, C, 1e-4);
            max_det = std::max(max_det, res.det);
            worst_ratio = std::max(worst_ratio, std::fabs(res.kernel_ratio - 1.0));
        }
    return {max_det < 0.0 && worst_ratio <= 0.05,
            fmt("largest determinant %.6g, max |kernel ratio - 1| = %.3g", max_det, worst_ratio)};
}

Outcome c8_crossing_distortion()
{
    const auto f = geometry::crossing_map(0.5);
    const double s = geometry::crossing_parameter(f);
    std::vector<std::pair<cd, cd>> pairs;
    for (double x : {1e-2, 1e-3, 1e-4}) pairs.emplace_back(1.0 - x, -1.0 + s * x);
    const auto prof = geometry::distortion_profile(f, pairs);
    const auto& S = prof.samples;
    const bool decreasing = S[0].d_image > S[1].d_image && S[1].d_image > S[2].d_image;
    double min_source = 1.0;
    for (const auto& smp : S) min_source = std::min(min_source, smp.d_source);
    return {decreasing && S[2].d_image < 0.2 && min_source > 0.99,
            fmt("image distances %.4g, %.4g, %.4g", S[0].d_image, S[1].d_image, S[2].d_image) +
                fmt("; min source distance %.6g", min_source)};
}

Outcome c9_transversality()
{
    double worst = 0.0, min_re = std::numeric_limits<double>::infinity();
    for (double r : {0.3, 0.5, 0.7}) {
        const auto f = geometry::crossing_map(r);
        // f = (z^2, b^2)/sqrt2 with b = (z - r)/(1 - r z), differentiated by hand
        const auto b = [r](cd z) { return (z - r) / (1.0 - r * z); };
        const auto db = [r](cd z) { return (1.0 - r * r) / ((1.0 - r * z) * (1.0 - r * z)); };
        const cd one = 1.0;
        Vec f1(2), df1(2);
        f1 << one, b(one) * b(one);
        f1 /= std::sqrt(2.0);
        df1 << 2.0 * one, 2.0 * b(one) * db(one);
        df1 /= std::sqrt(2.0);
        const double symbolic = std::real(geometry::inner(df1, f1));
        const double library = std::real(geometry::inner(f.derivative(one), f(one).coords()));
        worst = std::max({worst, std::fabs(symbolic - 2.0 / (1.0 - r)), std::fabs(library - symbolic)});
        for (int k = 0; k < 64; ++k)
            min_re = std::min(min_re, geometry::transversality_pairing(f, 2.0 * std::numbers::pi * k / 64.0));
    }
    return {worst <= 1e-10 && min_re > 0.0,
            fmt("max pairing error %.3g, min Re pairing over 64 angles %.6g", worst, min_re)};
}

Outcome c10_extractor()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto seq = sequences::named_sequence("wn_gaussian", 12);
    std::vector<geometry::DiscPoint> pts;
    for (const auto& p : seq.points()) pts.push_back(p.point);
    const auto res = pick::extract_interpolating_subsequence(pts, 0.5, 10);
    CounterRng rng(10);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t failures = 0;
    for (std::size_t k = 1; k <= res.indices.size(); ++k) {
        std::vector<geometry::DiscPoint> nodes;
        for (std::size_t i = 0; i < k; ++i) nodes.push_back(pts[res.indices[i]]);
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<cd> w(k);
            for (auto& x : w) x = rng.in_disc(0.5);
            const auto m = pick::normalized_pick_matrix(pick::PickProblem::drury_arveson(nodes, w));
            const auto v = pick::psd_check(m);
            worst = std::min(worst, v.min_eigenvalue / v.matrix_scale);
            if (!(v.min_eigenvalue > 1e-10 * v.matrix_scale)) ++failures;
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = res.indices.size() == 10 && failures == 0 && secs < 10.0;
    return {ok, fmt("selected %.0f points, failures %.0f, min eigenvalue / scale %.4g", double(res.indices.size()),
                    double(failures), worst) +
                    fmt(", %.2f s", secs)};
}

Outcome c11_carleson()
{
    const auto seq = sequences::named_sequence("dyadic_separated", 20);
    double worst_margin = std::numeric_limits<double>::infinity();
    for (unsigned p = 1; p <= 10; ++p)
        worst_margin = std::min(worst_margin, sequences::carleson_ratio(seq, p) - double(p + 1));
    return {worst_margin >= 0.0, fmt("min ratio(p) - (p + 1) over p = 1..10: %.6g", worst_margin)};
}

Outcome c12_tangential()
{
    const auto e = tangential::assemble_embedding(tangential::ConformalChain{}, 4096);
    const double defect = e.sphere_defect();
    const auto rep = tangential::tangency_report(e, 4, 14);

    // H(H(u)) = -(u - mean - Nyquist part)
    const auto& u = e.u1();
    const auto hh = tangential::harmonic_conjugate(tangential::harmonic_conjugate(u));
    const std::size_t m = u.m;
    double mean = 0.0, nyq = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        mean += u.values[k];
        nyq += (k % 2 ? -1.0 : 1.0) * u.values[k];
        scale = std::max(scale, std::fabs(u.values[k]));
    }
    mean /= double(m);
    nyq /= double(m);
    double inv = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double expect = -(u.values[k] - mean - (k % 2 ? -1.0 : 1.0) * nyq);
        inv = std::max(inv, std::fabs(hh.values[k] - expect) / scale);
    }
    const bool ok = defect < 1e-8 && rep.ratio1_decreasing && rep.ratio2_increasing && inv <= 1e-12;
    return {ok, fmt("sphere defect %.3g, involution error %.3g", defect, inv) +
                    (rep.ratio1_decreasing ? ", ratio1 decreasing" : ", ratio1 NOT decreasing") +
                    (rep.ratio2_increasing ? ", ratio2 increasing" : ", ratio2 NOT increasing")};
}

Outcome c13_hs_exponents()
{
    bool ok = true;
    std::string detail;
    for (double s : {-0.25, -0.5, -0.75}) {
        const auto disc = geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::hs(s, 256));
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (int j = 6; j <= 16; ++j, ++n) {
            const double x = 1.0 - std::ldexp(1.0, -j);
            const double X = std::log(1.0 - x), Y = std::log(geometry::tangential_ratio(disc, x, 0.0).ratio1);
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double target = (1.0 + s) / 2.0;
        ok = ok && std::fabs(slope - target) <= 0.05;
        if (!detail.empty()) detail += "; ";
        detail += fmt("s=%.2f slope %.4f (target %.4f)", s, slope, target);
    }
    return {ok, detail};
}

Outcome c14_schwarz_pick()
{
    std::vector<geometry::GeneralCurve> maps;
    for (double r : {0.3, 0.5, 0.7}) maps.push_back(geometry::crossing_map(r));
    for (const char* tag : {"hardy", "hs:-0.5", "hs:-2", "geom:0.5"})
        maps.push_back(geometry::EmbeddedDisc::from_kernel(kernels::KernelHandle::parse(tag)).as_curve());
    maps.push_back(tangential::assemble_embedding(tangential::ConformalChain{}).curve());

    CounterRng rng(14);
    double worst = 0.0;
    std::string worst_label;
    for (const auto& F : maps) {
        for (int i = 0; i < 1000; ++i) {
            const cd l = rng.in_disc(0.999), m = rng.in_disc(0.999);
            const double ds = geometry::pseudo_dist(l, m);
            const double di = geometry::pseudo_dist(F(l), F(m));
            if (ds > 0.0 && di / ds > worst) {
                worst = di / ds;
                worst_label = F.label();
            }
        }
    }
    return {worst <= 1.0 + 1e-10, fmt("max d_image / d_source = %.15g", worst) + " (" + worst_label + ", " +
                                      std::to_string(maps.size()) + " maps)"};
}

Outcome c15_cli_determinism()
{
    std::size_t mismatches = 0;
    for (const auto& r : cli::recipes()) {
        std::vector<std::string> args{r.name, "--reproducible", "--seed", "12345"};
        std::string first;
        for (int run = 0; run < 2; ++run) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            if (code != 0) {
                ++mismatches;
                break;
            }
            if (run == 0)
                first = out.str();
            else if (out.str() != first)
                ++mismatches;
        }
    }
    return {mismatches == 0, fmt("%.0f recipes, %.0f mismatches or failures", double(cli::recipes().size()),
                                 double(mismatches))};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"recursion agrees with series reciprocal", c1_recursion_vs_generating},
        {"weights are supermultiplicative", c2_supermultiplicative},
        {"geometric moduli give a_n = 1/2 and mu = 2", c3_efp_geometric},
        {"H_s moduli nonnegative, s=-2 compact with finite strict cyclicity", c4_hs_scale},
        {"Mobius map norm equals pseudohyperbolic distance and is invariant", c5_mobius},
        {"closed-form distances of v_n and w_n", c6_sequence_distances},
        {"crossing map Pick determinant negative", c7_crossing_determinant},
        {"crossing map collapses distances", c8_crossing_distortion},
        {"crossing map transversality pairing", c9_transversality},
        {"extractor output is positive definite", c10_extractor},
        {"dyadic Carleson ratios at least p + 1", c11_carleson},
        {"tangential embedding sphere identity and ratios", c12_tangential},
        {"H_s ratio1 exponents", c13_hs_exponents},
        {"analytic maps contract pseudohyperbolic distance", c14_schwarz_pick},
        {"CLI output reproducible", c15_cli_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures;
}
