#include "npdisc/tangential.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace npdisc::tangential {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cd kI{0.0, 1.0};
constexpr double kPoleGuard = 1e-8;
constexpr double kDomainSlack = 1e-4;

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

double wrap_angle(double t)
{
    t = std::remainder(t, 2.0 * kPi);  // [-pi, pi]
    return t == -kPi ? kPi : t;
}

cd mobius1(cd z)
{
    const cd den = kI * z + 1.0;
    if (std::abs(den) < kPoleGuard) throw ChainSingularity("conformal chain: pole of (z+i)/(iz+1) at z = i");
    return (z + kI) / den;
}

cd upper_sqrt(cd w)
{
    // Rounding can leave a boundary value a hair below the real axis.
    if (w.imag() < 0.0 && w.imag() > -1e-12 * std::abs(w)) w = cd(w.real(), 0.0);
    return std::sqrt(w);
}

// g from zeta and delta = zeta - 1, without the cancellation in
// (sqrt(w) - 1) when zeta is close to 1.
cd half_disc(cd zeta, cd delta)
{
    const cd den = kI * zeta + 1.0;
    if (std::abs(den) < kPoleGuard) throw ChainSingularity("conformal chain: pole of (z+i)/(iz+1) at z = i");
    const cd w_minus_1 = delta * (1.0 - kI) / den;
    const cd s = upper_sqrt(1.0 + w_minus_1);
    return w_minus_1 / ((s + 1.0) * (s + 1.0));
}

cd half_disc(cd z) { return half_disc(z, z - 1.0); }

// Principal log with the cut moved to the negative imaginary axis.
cd cut_log(cd g)
{
    if (g == 0.0) throw ChainSingularity("conformal chain: log(0) at g = 0");
    return std::log(-kI * g) + kI * (kPi / 2.0);
}

cd rho(const ConformalChain& c, cd z) { return c.clip_radius * z + (1.0 - c.clip_radius); }

// g(rho(z)) given z - 1.
cd clipped_half_disc(const ConformalChain& c, cd z, cd z_minus_1)
{
    return half_disc(rho(c, z), c.clip_radius * z_minus_1);
}

// e^{it} - 1 = 2i sin(t/2) e^{it/2}.
cd unit_minus_one(double t) { return 2.0 * kI * std::sin(t / 2.0) * std::polar(1.0, t / 2.0); }

void check_domain(cd z)
{
    if (!(std::abs(z) <= 1.0 + kDomainSlack)) throw std::domain_error("conformal chain: |z| > 1");
}

// 1 - f1(z) = 3 pi i / (L + 2 pi i); 0 at z = 1.
cd one_minus_f1(const ConformalChain& c, cd z)
{
    const cd g = clipped_half_disc(c, z, z - 1.0);
    if (g == 0.0) return 0.0;
    return 3.0 * kPi * kI / (cut_log(g) + 2.0 * kPi * kI);
}

// int_0^a log log(1/t) dt = int_{log(1/a)}^inf log(s) e^{-s} ds, a < 1.
double loglog_integral(double a)
{
    boost::math::quadrature::exp_sinh<double> integrator;
    const double s0 = -std::log(a);
    return integrator.integrate([s0](double v) { return std::log(s0 + v) * std::exp(-(s0 + v)); }, 0.0,
                                std::numeric_limits<double>::infinity());
}

// Forward real DFT scaled by 1/m: coefficients k = 0..m/2.
std::vector<cd> real_dft(const std::vector<double>& x)
{
    const int m = static_cast<int>(x.size());
    double* in = fftw_alloc_real(std::size_t(m));
    fftw_complex* out = fftw_alloc_complex(std::size_t(m / 2 + 1));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(m, in, out, FFTW_ESTIMATE);
    }
    std::copy(x.begin(), x.end(), in);
    fftw_execute(plan);
    std::vector<cd> coeffs(std::size_t(m / 2 + 1));
    for (int k = 0; k <= m / 2; ++k) coeffs[std::size_t(k)] = cd(out[k][0], out[k][1]) / double(m);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return coeffs;
}

// Inverse of real_dft (coefficients already scaled by 1/m).
std::vector<double> inverse_real_dft(const std::vector<cd>& coeffs, std::size_t m)
{
    fftw_complex* in = fftw_alloc_complex(m / 2 + 1);
    double* out = fftw_alloc_real(m);
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k <= m / 2; ++k) {
        in[k][0] = coeffs[k].real();
        in[k][1] = coeffs[k].imag();
    }
    fftw_execute(plan);
    std::vector<double> x(out, out + m);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(out);
    return x;
}

}  // namespace

void ConformalChain::validate() const
{
    if (!(clip_radius > 2.0 / 3.0 && clip_radius < 1.0))
        throw std::invalid_argument("conformal chain: clip radius must lie in (2/3, 1)");
}

cd chain_eval(const ConformalChain& c, cd z, Stage stage)
{
    c.validate();
    check_domain(z);
    switch (stage) {
    case Stage::Mobius1: return mobius1(z);
    case Stage::SquareRoot: return upper_sqrt(mobius1(z));
    case Stage::HalfDisc: return half_disc(z);
    case Stage::Log: return cut_log(half_disc(z));
    case Stage::Final: {
        const cd g = half_disc(z);
        if (g == 0.0) return 1.0;
        const cd L = cut_log(g);
        return (L - kPi * kI) / (L + 2.0 * kPi * kI);
    }
    case Stage::Clipped: return 1.0 - one_minus_f1(c, z);
    }
    throw std::invalid_argument("conformal chain: unknown stage");
}

cd chain_derivative(const ConformalChain& c, cd z, Stage stage)
{
    const double h = 1e-5;
    const auto central = [&](double step) {
        return (chain_eval(c, z + step, stage) - chain_eval(c, z - step, stage)) / (2.0 * step);
    };
    return (4.0 * central(h / 2) - central(h)) / 3.0;
}

namespace {

double defect_from_g(cd g)
{
    if (g == 0.0) return 0.0;
    const cd L = cut_log(g);
    return 3.0 * kPi * (kPi + 2.0 * L.imag()) / std::norm(L + 2.0 * kPi * kI);
}

}  // namespace

double clipped_defect(const ConformalChain& c, cd z)
{
    c.validate();
    check_domain(z);
    return defect_from_g(clipped_half_disc(c, z, z - 1.0));
}

double boundary_u1(const ConformalChain& c, double t)
{
    t = wrap_angle(t);
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    return 0.5 * std::log(defect_from_g(clipped_half_disc(c, std::polar(1.0, t), unit_minus_one(t))));
}

double BoundarySampling::angle(std::size_t k) const { return 2.0 * kPi * double(k) / double(m); }

BoundarySampling boundary_modulus_defect(const ConformalChain& c, std::size_t m)
{
    c.validate();
    if (!is_power_of_two(m) || m < 256) throw std::invalid_argument("boundary sampling: m must be a power of two >= 256");
    BoundarySampling b;
    b.m = m;
    b.values.resize(m);
    for (std::size_t k = 1; k < m; ++k) b.values[k] = boundary_u1(c, b.angle(k));

    // Cell average over [-h/2, h/2] of alpha_+- - log log(1/|t|).
    const double h = b.angle(1);
    const double loglog_h = std::log(std::log(1.0 / h));
    const double alpha_plus = b.values[1] + loglog_h;
    const double alpha_minus = b.values[m - 1] + loglog_h;
    b.values[0] = 0.5 * (alpha_plus + alpha_minus) - loglog_integral(h / 2.0) / (h / 2.0);
    b.singular_index = 0;
    return b;
}

BoundarySampling harmonic_conjugate(const BoundarySampling& b)
{
    if (!is_power_of_two(b.m) || b.values.size() != b.m) throw std::invalid_argument("harmonic_conjugate: bad sampling");
    auto coeffs = real_dft(b.values);
    coeffs[0] = 0.0;
    coeffs[b.m / 2] = 0.0;
    for (std::size_t k = 1; k < b.m / 2; ++k) coeffs[k] *= -kI;
    BoundarySampling out;
    out.m = b.m;
    out.values = inverse_real_dft(coeffs, b.m);
    out.singular_index = b.singular_index;
    return out;
}

TangentialEmbedding assemble_embedding(const ConformalChain& c, std::size_t m)
{
    TangentialEmbedding e;
    e.chain_ = c;
    e.u1_ = boundary_modulus_defect(c, m);
    e.u1_tilde_ = harmonic_conjugate(e.u1_);
    const auto coeffs = real_dft(e.u1_.values);
    auto analytic = std::make_shared<std::vector<cd>>(m / 2);
    (*analytic)[0] = coeffs[0].real();
    for (std::size_t k = 1; k < m / 2; ++k) (*analytic)[k] = 2.0 * coeffs[k];
    e.analytic_ = std::move(analytic);
    return e;
}

std::vector<cd> TangentialEmbedding::f2_grid() const
{
    std::vector<cd> out(u1_.m);
    for (std::size_t k = 0; k < u1_.m; ++k) out[k] = std::exp(cd(u1_.values[k], u1_tilde_.values[k]));
    return out;
}

cd TangentialEmbedding::f1(cd z) const { return chain_eval(chain_, z, Stage::Clipped); }

double TangentialEmbedding::f1_defect(cd z) const { return clipped_defect(chain_, z); }

cd TangentialEmbedding::log_f2(cd z) const
{
    const double rz = std::abs(z);
    if (!(rz < 1.0)) throw std::domain_error("log_f2: requires |z| < 1");
    const double theta = rz > 0.0 ? std::arg(z) : 0.0;
    const double lo = theta - kPi, hi = theta + kPi;
    const double e = 1.0 - rz;

    // Geometric cuts (ratio 2) toward the kernel peak at theta and toward the
    // singular angle, plus a uniform mesh of width <= 1/4 elsewhere.
    std::vector<double> cuts{lo, hi, theta, 0.0};
    for (int k = -20; e * std::ldexp(1.0, k) < 2.0 * kPi; ++k) {
        const double d = e * std::ldexp(1.0, k);
        cuts.push_back(theta - d);
        cuts.push_back(theta + d);
    }
    for (int k = 1; k <= 50; ++k) {
        const double d = std::ldexp(1.0, -k);
        cuts.push_back(-d);
        cuts.push_back(d);
    }
    for (int k = 1; k < 26; ++k) cuts.push_back(lo + (hi - lo) * k / 26.0);
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double t) { return t < lo || t > hi; }), cuts.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const ConformalChain chain = chain_;
    const auto integrand = [&](double t) {
        const cd w = std::polar(1.0, t);
        return (w + z) / (w - z) * boundary_u1(chain, t);
    };
    using Gauss = boost::math::quadrature::gauss<double, 20>;
    const auto& x = Gauss::abscissa();
    const auto& wts = Gauss::weights();
    cd sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]), half = 0.5 * (cuts[i + 1] - cuts[i]);
        if (!(half > 0.0)) continue;
        cd seg = 0.0;
        for (std::size_t n = 0; n < x.size(); ++n) {
            const double w = wts[n];
            seg += w * integrand(mid + half * x[n]);
            if (x[n] != 0.0) seg += w * integrand(mid - half * x[n]);
        }
        sum += half * seg;
    }
    return sum / (2.0 * kPi);
}

cd TangentialEmbedding::f2(cd z) const
{
    const double rz = std::abs(z);
    if (rz > 1.0 + 1e-15) throw std::domain_error("f2: |z| > 1");
    if (rz < 1.0) return std::exp(log_f2(z));
    const double t = wrap_angle(std::arg(z));
    if (t == 0.0) return 0.0;
    // u1~(t) = Im sum_{k>=1} c_k e^{ikt}.
    const auto& c = *analytic_;
    const cd w = std::polar(1.0, t);
    cd s = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) s = (s + c[k]) * w;
    return std::exp(cd(boundary_u1(chain_, t), s.imag()));
}

cd TangentialEmbedding::f2_fourier(cd z) const
{
    if (!(std::abs(z) < 1.0)) throw std::domain_error("f2_fourier: requires |z| < 1");
    const auto& c = *analytic_;
    cd s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return std::exp(s);
}

double TangentialEmbedding::ball_defect(cd z) const
{
    const double a = std::exp(2.0 * log_f2(z).real());
    return f1_defect(z) - a;
}

geometry::BallPoint TangentialEmbedding::operator()(cd z) const
{
    const double rz = std::abs(z);
    if (rz > 1.0 + 1e-15) throw std::domain_error("tangential embedding: |z| > 1");
    geometry::Vec v(2);
    if (rz >= 1.0) {
        v << f1(z), f2(z);
        const double n = v.norm();
        if (n > 1.0) v /= n;
        return geometry::BallPoint::on_sphere(std::move(v));
    }
    v << f1(z), f2(z);
    return geometry::BallPoint(std::move(v));
}

geometry::GeneralCurve TangentialEmbedding::curve() const
{
    const TangentialEmbedding self = *this;
    return geometry::GeneralCurve([self](cd z) { return self(z); }, "tangential");
}

double TangentialEmbedding::sphere_defect() const
{
    const auto f2 = f2_grid();
    double worst = 0.0;
    for (std::size_t k = 0; k < u1_.m; ++k) {
        if (k == u1_.singular_index) continue;
        const cd a = f1(std::polar(1.0, u1_.angle(k)));
        worst = std::max(worst, std::abs(std::norm(a) + std::norm(f2[k]) - 1.0));
    }
    return worst;
}

csv::Table TangentialEmbedding::boundary_table() const
{
    csv::Table t;
    t.header = {"t", "u1", "u1_tilde", "|f1|", "|f2|", "sphere_defect"};
    const auto f2 = f2_grid();
    for (std::size_t k = 0; k < u1_.m; ++k) {
        const double a = std::abs(f1(std::polar(1.0, u1_.angle(k))));
        const double b = std::abs(f2[k]);
        t.rows.push_back({csv::format_double(u1_.angle(k)), csv::format_double(u1_.values[k]),
                          csv::format_double(u1_tilde_.values[k]), csv::format_double(a), csv::format_double(b),
                          csv::format_double(std::abs(a * a + b * b - 1.0))});
    }
    return t;
}

TangencyReport tangency_report(const TangentialEmbedding& F, int j_min, int j_max, int fit_j_min, int fit_j_max)
{
    if (j_min < 1 || j_max > 40 || j_min > j_max) throw std::invalid_argument("tangency_report: bad j range");
    TangencyReport rep;
    rep.fit_j_min = fit_j_min;
    rep.fit_j_max = fit_j_max;
    for (int j = j_min; j <= j_max; ++j) {
        TangencyRow row;
        row.j = j;
        const double gap = std::ldexp(1.0, -j);
        row.x = 1.0 - gap;
        const cd one_minus = one_minus_f1(F.chain(), row.x);
        const double a2 = std::exp(2.0 * F.log_f2(row.x).real());
        const double defect = F.f1_defect(row.x) - a2;  // 1 - |F(x)|^2
        const double norm = std::sqrt(1.0 - defect);
        row.ratio1 = (defect / (1.0 + norm)) / std::sqrt(std::norm(one_minus) + a2);
        row.re_gap = one_minus.real();
        row.ratio2 = row.re_gap / gap;
        const double l = std::log(gap);
        row.inv_log_sq = 1.0 / (l * l);
        rep.rows.push_back(row);
    }
    rep.ratio1_decreasing = rep.ratio2_increasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        rep.ratio1_decreasing = rep.ratio1_decreasing && rep.rows[i].ratio1 < rep.rows[i - 1].ratio1;
        rep.ratio2_increasing = rep.ratio2_increasing && rep.rows[i].ratio2 > rep.rows[i - 1].ratio2;
    }

    double sxy = 0.0, sxx = 0.0;
    std::vector<double> X, Y;
    for (const auto& row : rep.rows) {
        if (row.j < fit_j_min || row.j > fit_j_max) continue;
        sxy += row.re_gap * row.inv_log_sq;
        sxx += row.inv_log_sq * row.inv_log_sq;
        X.push_back(std::log(row.inv_log_sq));
        Y.push_back(std::log(row.re_gap));
    }
    if (X.size() >= 2) {
        rep.c1 = sxy / sxx;
        const double n = double(X.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            mx += X[i] / n;
            my += Y[i] / n;
        }
        double cxx = 0.0, cyy = 0.0, cxy = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            cxx += (X[i] - mx) * (X[i] - mx);
            cyy += (Y[i] - my) * (Y[i] - my);
            cxy += (X[i] - mx) * (Y[i] - my);
        }
        rep.fit_slope = cxy / cxx;
        rep.fit_correlation = cxy / std::sqrt(cxx * cyy);
    }
    return rep;
}

csv::Table tangency_table(const TangencyReport& r)
{
    csv::Table t;
    t.header = {"x", "ratio1", "ratio2"};
    for (const auto& row : r.rows)
        t.rows.push_back({csv::format_double(row.x), csv::format_double(row.ratio1), csv::format_double(row.ratio2)});
    return t;
}

}  // namespace npdisc::tangential
