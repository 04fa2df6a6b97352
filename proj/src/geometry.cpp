#include "npdisc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace npdisc::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNormSlack = 1e-12;
constexpr double kDerivStep = 1e-6;

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

BallPoint::BallPoint(Vec coords, double tail_norm) : coords_(std::move(coords)), tail_(tail_norm)
{
    if (!(tail_ >= 0.0)) throw std::invalid_argument("BallPoint: tail norm must be nonnegative");
    norm_ = coords_.norm();
    if (!std::isfinite(norm_)) throw std::invalid_argument("BallPoint: non-finite coordinates");
    if (norm_ > 1.0 + kNormSlack) throw std::invalid_argument("BallPoint: point lies outside the closed ball");
    boundary_ = norm_ >= 1.0;
}

BallPoint BallPoint::scalar(cd z)
{
    Vec v(1);
    v(0) = z;
    return BallPoint(std::move(v));
}

BallPoint BallPoint::on_sphere(Vec coords, double tail_norm)
{
    BallPoint p(std::move(coords), tail_norm);
    p.boundary_ = true;
    return p;
}

cd inner(const Vec& z, const Vec& w) { return w.dot(z); }

DiscPoint DiscPoint::from_value(cd z)
{
    const double m = std::abs(z);
    if (!(m < 1.0)) throw std::invalid_argument("DiscPoint: |z| must be < 1");
    DiscPoint p;
    if (m > 0.0) {
        p.anchor_ = z / m;
        p.gap_unit_ = 1.0 - m;
    } else {
        p.anchor_ = 1.0;
        p.gap_unit_ = 1.0;
    }
    return p;
}

DiscPoint DiscPoint::from_gap(cd anchor, cd gap)
{
    if (std::abs(std::abs(anchor) - 1.0) > 1e-14) throw std::invalid_argument("DiscPoint: anchor must be unimodular");
    if (gap == 0.0) throw std::invalid_argument("DiscPoint: zero gap is a boundary point");
    DiscPoint p;
    p.anchor_ = anchor;
    p.gap_unit_ = gap;
    if (!(p.one_minus_modulus_sq() > 0.0)) throw std::invalid_argument("DiscPoint: point outside the open disc");
    return p;
}

DiscPoint DiscPoint::from_log_gap(cd anchor, double log_gap)
{
    if (std::abs(std::abs(anchor) - 1.0) > 1e-14) throw std::invalid_argument("DiscPoint: anchor must be unimodular");
    if (!(log_gap <= std::log(2.0)) || !std::isfinite(log_gap))
        throw std::invalid_argument("DiscPoint: log gap must be finite and at most log 2");
    DiscPoint p;
    p.anchor_ = anchor;
    p.gap_unit_ = 1.0;
    p.log_scale_ = log_gap;
    return p;
}

cd DiscPoint::gap() const { return gap_unit_ * std::exp(log_scale_); }

double DiscPoint::one_minus_modulus_sq() const
{
    const double s = std::exp(log_scale_);
    return s * (2.0 * gap_unit_.real() - std::norm(gap_unit_) * s);
}

double DiscPoint::log_one_minus_modulus_sq() const
{
    return log_scale_ + std::log(2.0 * gap_unit_.real() - std::norm(gap_unit_) * std::exp(log_scale_));
}

double DiscPoint::one_minus_modulus() const
{
    return one_minus_modulus_sq() / (1.0 + std::abs(value()));
}

double pseudo_dist(const DiscPoint& z, const DiscPoint& w)
{
    if (z.anchor_ != w.anchor_) return pseudo_dist(z.value(), w.value());
    // z - w = anchor (h - g); 1 - z conj(w) = g + conj(h) - g conj(h).
    const double m = std::max(z.log_scale_, w.log_scale_);
    const cd g = z.gap_unit_ * std::exp(z.log_scale_ - m);
    const cd h = w.gap_unit_ * std::exp(w.log_scale_ - m);
    const cd gh = z.gap_unit_ * std::conj(w.gap_unit_) * std::exp(z.log_scale_ + w.log_scale_ - m);
    return std::abs(h - g) / std::abs(g + std::conj(h) - gh);
}

std::pair<cd, double> one_minus_prod(const DiscPoint& z, const DiscPoint& w)
{
    if (z.anchor_ != w.anchor_) return {1.0 - z.value() * std::conj(w.value()), 0.0};
    const double m = std::max(z.log_scale_, w.log_scale_);
    const cd g = z.gap_unit_ * std::exp(z.log_scale_ - m);
    const cd h = w.gap_unit_ * std::exp(w.log_scale_ - m);
    const cd gh = z.gap_unit_ * std::conj(w.gap_unit_) * std::exp(z.log_scale_ + w.log_scale_ - m);
    return {g + std::conj(h) - gh, m};
}

double pseudo_dist(cd z, cd w)
{
    if (!(std::abs(z) < 1.0 && std::abs(w) < 1.0))
        throw std::domain_error("pseudo_dist: points must lie in the open disc");
    return std::abs(z - w) / std::abs(1.0 - z * std::conj(w));
}

namespace {

// |z|^2 |w|^2 - |<z, w>|^2 without cancellation.
double wedge_sq(const Vec& z, const Vec& w)
{
    const double zz = z.squaredNorm();
    if (zz == 0.0) return 0.0;
    const Vec perp = w - (inner(w, z) / zz) * z;
    return zz * perp.squaredNorm();
}

}  // namespace

double pseudo_dist(const BallPoint& z, const BallPoint& w)
{
    if (!z.is_interior() || !w.is_interior())
        throw std::domain_error("pseudo_dist: boundary points have no pseudohyperbolic distance");
    if (z.dim() != w.dim()) throw std::invalid_argument("pseudo_dist: dimension mismatch");
    const Vec& a = z.coords();
    const Vec& b = w.coords();
    const double num = (a - b).squaredNorm() - wedge_sq(a, b);
    const double den = std::norm(1.0 - inner(a, b));
    return std::sqrt(clamp_unit(num / den));
}

DistanceInterval pseudo_dist_interval(const BallPoint& z, const BallPoint& w)
{
    DistanceInterval out;
    out.value = pseudo_dist(z, w);
    const double tz = z.tail_norm(), tw = w.tail_norm();
    if (tz == 0.0 && tw == 0.0) {
        out.lo = out.hi = out.value;
        return out;
    }
    const double zz = z.coords().squaredNorm(), ww = w.coords().squaredNorm();
    const double p_hi = (1.0 - zz) * (1.0 - ww);
    const double p_lo = std::max(0.0, 1.0 - zz - tz * tz) * std::max(0.0, 1.0 - ww - tw * tw);
    const double base = std::abs(1.0 - inner(z.coords(), w.coords()));
    const double d_lo = std::max(0.0, base - tz * tw);
    const double d_hi = base + tz * tw;
    out.lo = d_lo > 0.0 ? std::sqrt(clamp_unit(1.0 - p_hi / (d_lo * d_lo))) : 0.0;
    out.hi = std::sqrt(clamp_unit(1.0 - p_lo / (d_hi * d_hi)));
    out.lo = std::min(out.lo, out.value);
    out.hi = std::max(out.hi, out.value);
    return out;
}

BallPoint mobius_auto(const BallPoint& w, const BallPoint& z)
{
    if (!w.is_interior() || !z.is_interior()) throw std::domain_error("mobius_auto: points must be interior");
    if (w.dim() != z.dim()) throw std::invalid_argument("mobius_auto: dimension mismatch");
    const Vec& a = w.coords();
    const Vec& x = z.coords();
    const double aa = a.squaredNorm();
    if (aa == 0.0) return BallPoint(Vec(-x));
    const cd denom = 1.0 - inner(x, a);
    if (std::abs(denom) < 1e-15) throw std::domain_error("mobius_auto: <z, w> is numerically 1");
    const Vec proj = (inner(x, a) / aa) * a;
    const Vec out = (a - proj - std::sqrt(1.0 - aa) * (x - proj)) / denom;
    // Rounding can push |phi| a hair above 1 for points hugging the sphere.
    const double n = out.norm();
    return BallPoint(n > 1.0 ? Vec(out / n) : out);
}

GeneralCurve::GeneralCurve(PointFn eval, DerivFn deriv, std::string label)
    : eval_(std::move(eval)), deriv_(std::move(deriv)), label_(std::move(label))
{
}

GeneralCurve::GeneralCurve(PointFn eval, std::string label) : GeneralCurve(std::move(eval), {}, std::move(label))
{
}

Vec GeneralCurve::derivative(cd z) const { return deriv_ ? deriv_(z) : numeric_derivative(z); }

Vec GeneralCurve::numeric_derivative(cd z) const
{
    const double h = kDerivStep;
    const double r = std::abs(z);
    if (r + 2.0 * h < 1.0) {
        const auto central = [&](double step) {
            return Vec((eval_(z + step).coords() - eval_(z - step).coords()) / (2.0 * step));
        };
        return (4.0 * central(h / 2) - central(h)) / 3.0;
    }
    // Radial one-sided stencil: g(t) = f(z - t u), g'(0) = -u f'(z).
    const cd u = z / r;
    const Vec g0 = eval_(z).coords();
    const auto one_sided = [&](double step) {
        const Vec g1 = eval_(z - step * u).coords();
        const Vec g2 = eval_(z - 2.0 * step * u).coords();
        return Vec((-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * step));
    };
    const Vec gp = (4.0 * one_sided(h / 2) - one_sided(h)) / 3.0;
    return -gp / u;
}

EmbeddedDisc EmbeddedDisc::from_kernel(const kernels::KernelHandle& k)
{
    EmbeddedDisc e;
    const auto c = k.moduli().values();
    e.b_.resize(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] < -1e-12)
            throw std::invalid_argument("embedding: kernel " + k.tag() + " has a negative modulus c_" +
                                        std::to_string(i + 1));
        e.b_[i] = std::sqrt(std::max(c[i], 0.0));
    }
    if (e.b_.empty() || e.b_[0] == 0.0) throw std::invalid_argument("embedding: b_1 must be nonzero");
    e.kernel_ = k;
    e.label_ = k.tag();
    e.mass_ = k.moduli_mass();
    e.regime_ = k.compact_regime() ? Regime::Compact : Regime::Open;

    switch (k.family()) {
    case kernels::Family::Hardy: e.first_moment_ = 1.0; break;
    case kernels::Family::Geometric: e.first_moment_ = 1.0 / (1.0 - k.parameter()); break;
    case kernels::Family::Hs:
    case kernels::Family::Custom: {
        double full = 0.0, half = 0.0;
        const std::size_t N = c.size();
        for (std::size_t n = 1; n <= N; ++n) {
            full += double(n) * std::max(c[n - 1], 0.0);
            if (n == N / 2) half = full;
        }
        const bool grows = k.family() == kernels::Family::Hs && full - half > 0.01 * full;
        e.first_moment_ = grows ? kInf : full;
        break;
    }
    }
    return e;
}

EmbeddedDisc EmbeddedDisc::from_amplitudes(std::vector<cd> b, std::string label)
{
    if (b.empty() || b[0] == 0.0) throw std::invalid_argument("embedding: b_1 must be nonzero");
    double mass = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        mass += std::norm(b[i]);
        moment += double(i + 1) * std::norm(b[i]);
    }
    if (mass > 1.0 + kNormSlack) throw std::invalid_argument("embedding: sum |b_n|^2 exceeds 1");
    EmbeddedDisc e;
    e.b_ = std::move(b);
    e.label_ = std::move(label);
    e.mass_ = mass;
    e.first_moment_ = moment;
    e.regime_ = mass < 1.0 - kNormSlack ? Regime::Compact : Regime::Open;
    return e;
}

double EmbeddedDisc::radial_kernel(double y) const
{
    if (kernel_) return kernel_->radial_sum(y);
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("radial_kernel: argument outside [0, 1]");
    double g = 0.0;
    for (std::size_t i = b_.size(); i-- > 0;) g = g * y + std::norm(b_[i]);
    g *= y;
    return g >= 1.0 ? kInf : 1.0 / (1.0 - g);
}

EmbeddedValue EmbeddedDisc::eval(cd z, bool with_derivative) const
{
    const double r = std::abs(z);
    if (r > 1.0 + 1e-15) throw std::domain_error("embedding: |z| > 1");
    const std::size_t N = b_.size();
    Vec point(static_cast<Eigen::Index>(N));
    Vec deriv;
    if (with_derivative) {
        if (r >= 1.0 && !std::isfinite(first_moment_))
            throw NonFiniteValue("embedding: derivative diverges at the boundary (sum n |b_n|^2 = inf)");
        deriv.resize(static_cast<Eigen::Index>(N));
    }
    cd power = 1.0;  // z^{n-1}
    double partial = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        const auto i = static_cast<Eigen::Index>(n - 1);
        if (with_derivative) deriv(i) = double(n) * b_[n - 1] * power;
        power *= z;
        point(i) = b_[n - 1] * power;
        partial += std::norm(b_[n - 1]);
    }
    const double tail = std::sqrt(std::max(0.0, mass_ - partial)) * std::pow(r, double(N + 1));
    const bool on_sphere = r >= 1.0 && regime_ == Regime::Open;
    BallPoint p = on_sphere ? BallPoint::on_sphere(std::move(point), tail) : BallPoint(std::move(point), tail);
    return {std::move(p), std::move(deriv)};
}

GeneralCurve EmbeddedDisc::as_curve() const
{
    const EmbeddedDisc self = *this;
    return GeneralCurve([self](cd z) { return self.eval(z, false).point; },
                        [self](cd z) { return self.eval(z, true).deriv; }, label_);
}

GeneralCurve crossing_map(double r)
{
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("crossing_map: r must lie in (0, 1)");
    const double k = 1.0 / std::numbers::sqrt2;
    auto eval = [r, k](cd z) {
        if (std::abs(z) > 1.0 + 1e-15) throw std::domain_error("crossing_map: |z| > 1");
        const cd b = (z - r) / (1.0 - r * z);
        Vec v(2);
        v << k * z * z, k * b * b;
        return BallPoint(std::move(v));
    };
    auto deriv = [r, k](cd z) {
        const cd den = 1.0 - r * z;
        const cd b = (z - r) / den;
        const cd db = (1.0 - r * r) / (den * den);
        Vec v(2);
        v << k * 2.0 * z, k * 2.0 * b * db;
        return v;
    };
    return GeneralCurve(eval, deriv, "crossing:" + std::to_string(r));
}

double crossing_parameter(const GeneralCurve& f)
{
    const double plus = inner(f.derivative(1.0), f(1.0).coords()).real();
    const double minus = inner(f.derivative(-1.0), f(-1.0).coords()).real();
    if (!(minus < 0.0)) throw std::domain_error("crossing_parameter: <f'(-1), f(-1)> must be negative");
    return plus / -minus;
}

double transversality_pairing(const GeneralCurve& f, double t)
{
    const cd z = std::polar(1.0, t);
    const Vec d = f.derivative(z);
    const double p = inner(f(z).coords(), Vec(d * z)).real();
    if (!std::isfinite(p)) throw NonFiniteValue("transversality_pairing: non-finite pairing");
    return p;
}

double transversality_pairing(const EmbeddedDisc& f, double /*t*/)
{
    if (!std::isfinite(f.first_moment()))
        throw NonFiniteValue("transversality_pairing: sum n |b_n|^2 diverges (tangential embedding)");
    return f.first_moment();
}

std::vector<std::pair<double, double>> transversality_sweep(const GeneralCurve& f, std::size_t grid)
{
    std::vector<std::pair<double, double>> out(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double t = 2.0 * std::numbers::pi * double(k) / double(grid);
        out[k] = {t, transversality_pairing(f, t)};
    }
    return out;
}

TangentialRatios tangential_ratio(const GeneralCurve& f, double x, double t)
{
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("tangential_ratio: x must lie in (0, 1)");
    const Vec f1 = f(std::polar(1.0, t)).coords();
    const BallPoint fx = f(std::polar(x, t));
    const Vec diff = f1 - fx.coords();
    TangentialRatios out;
    out.ratio1 = (1.0 - fx.norm()) / diff.norm();
    out.ratio2 = inner(diff, f1).real() / (1.0 - x);
    return out;
}

TangentialRatios tangential_ratio(const EmbeddedDisc& f, double x, double /*t*/)
{
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("tangential_ratio: x must lie in (0, 1)");
    const double inv_a1 = 1.0 / f.radial_kernel(1.0);
    const double inv_ax = 1.0 / f.radial_kernel(x);
    const double inv_ax2 = 1.0 / f.radial_kernel(x * x);
    const double defect_sq = inv_ax2;  // 1 - |f(x)|^2
    const double norm_x = std::sqrt(1.0 - defect_sq);
    const double gap_sq = 2.0 * inv_ax - inv_a1 - inv_ax2;
    TangentialRatios out;
    out.ratio1 = (defect_sq / (1.0 + norm_x)) / std::sqrt(gap_sq);
    out.ratio2 = (inv_ax - inv_a1) / (1.0 - x);
    return out;
}

DistortionProfile distortion_profile(const GeneralCurve& F, const std::vector<std::pair<cd, cd>>& pairs)
{
    DistortionProfile out;
    out.samples.reserve(pairs.size());
    out.min_ratio = kInf;
    out.max_ratio = 0.0;
    for (const auto& [lambda, mu] : pairs) {
        DistortionSample s;
        s.d_source = pseudo_dist(lambda, mu);
        s.d_image = pseudo_dist(F(lambda), F(mu));
        if (s.d_source > 0.0) {
            const double ratio = s.d_image / s.d_source;
            out.min_ratio = std::min(out.min_ratio, ratio);
            out.max_ratio = std::max(out.max_ratio, ratio);
        }
        out.samples.push_back(s);
    }
    if (out.samples.empty()) out.min_ratio = 0.0;
    return out;
}

}  // namespace npdisc::geometry
