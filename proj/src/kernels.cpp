#include "npdisc/kernels.hpp"

#include "npdisc/csv.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace npdisc::kernels {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInteriorGuard = 0.999;
constexpr double kDoublingTolerance = 0.01;
constexpr std::size_t kMaxRadialTerms = std::size_t{1} << 27;
constexpr std::size_t kBoundaryTerms = std::size_t{1} << 20;

std::string format_parameter(double x) { return csv::format_double(x); }

// sum_{n>=0} (n+1)^s q^n for |q| < 1, summed until the terms are negligible.
std::complex<double> hs_series(double s, std::complex<double> q)
{
    const double rho = std::abs(q);
    std::complex<double> sum = 0.0;
    std::complex<double> power = 1.0;
    for (std::size_t n = 0; n < kMaxRadialTerms; ++n) {
        if ((n & 1023) == 0 && n > 0) power = std::polar(std::pow(rho, double(n)), double(n) * std::arg(q));
        const std::complex<double> term = std::pow(double(n + 1), s) * power;
        sum += term;
        if (n > 16 && std::abs(term) < 1e-18 * std::abs(sum) &&
            std::pow(rho, double(n)) < 1e-18 * std::abs(sum))
            return sum;
        power *= q;
    }
    throw std::domain_error("hs kernel: series did not converge (point too close to the circle)");
}

// Compensated radial sum for real 0 <= y < 1.
double hs_radial(double s, double y)
{
    double sum = 0.0, comp = 0.0;
    double power = 1.0;
    const double log_y = std::log(y);
    for (std::size_t n = 0; n < kMaxRadialTerms; ++n) {
        if ((n & 1023) == 0 && n > 0) power = std::exp(double(n) * log_y);
        const double term = std::pow(double(n + 1), s) * power;
        const double t = sum + term;
        comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (n > 16 && term < 1e-19 * sum && power < 1e-19 * sum) return sum + comp;
        power *= y;
    }
    throw std::domain_error("hs kernel: radial sum did not converge");
}

series::CoefficientSequence geometric_moduli(double q, std::size_t N)
{
    std::vector<double> c(N);
    double p = 1.0 - q;
    for (std::size_t n = 0; n < N; ++n, p *= q) c[n] = p;
    return series::CoefficientSequence(std::move(c));
}

series::KernelWeights hs_weights(double s, std::size_t N)
{
    std::vector<double> a(N + 1);
    a[0] = 1.0;
    for (std::size_t n = 1; n <= N; ++n) a[n] = std::pow(double(n + 1), s);
    return series::KernelWeights(std::move(a));
}

double parse_number(std::string_view text, std::string_view what)
{
    try {
        return csv::parse_double(text);
    } catch (const csv::ParseError&) {
        throw std::invalid_argument("kernel family: malformed " + std::string(what) + " '" +
                                    std::string(text) + "'");
    }
}

}  // namespace

KernelHandle::KernelHandle(Family family, std::string tag, double parameter, series::KernelWeights a,
                           series::CoefficientSequence c)
    : family_(family), tag_(std::move(tag)), parameter_(parameter), weights_(std::move(a)),
      moduli_(std::move(c))
{
}

KernelHandle KernelHandle::hardy(std::size_t N)
{
    if (N < 1) throw std::invalid_argument("kernel: N must be at least 1");
    std::vector<double> c(N, 0.0);
    c[0] = 1.0;
    return KernelHandle(Family::Hardy, "hardy", 0.0, series::KernelWeights(std::vector<double>(N + 1, 1.0)),
                        series::CoefficientSequence(std::move(c)));
}

KernelHandle KernelHandle::hs(double s, std::size_t N)
{
    if (N < 1) throw std::invalid_argument("kernel: N must be at least 1");
    if (!std::isfinite(s)) throw std::invalid_argument("kernel: hs exponent must be finite");
    auto a = hs_weights(s, N);
    auto c = series::moduli_from_weights(a);
    return KernelHandle(Family::Hs, "hs:" + format_parameter(s), s, std::move(a), std::move(c));
}

KernelHandle KernelHandle::geometric(double q, std::size_t N)
{
    if (N < 1) throw std::invalid_argument("kernel: N must be at least 1");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("kernel: geom ratio must lie in (0, 1)");
    auto c = geometric_moduli(q, N);
    auto a = series::weights_from_moduli(c, N);
    return KernelHandle(Family::Geometric, "geom:" + format_parameter(q), q, std::move(a), std::move(c));
}

KernelHandle KernelHandle::from_moduli(series::CoefficientSequence c, std::size_t N, std::string tag)
{
    auto a = series::weights_from_moduli(c, N);
    std::vector<double> padded(N, 0.0);
    for (std::size_t n = 1; n <= N; ++n) padded[n - 1] = c[n];
    return KernelHandle(Family::Custom, std::move(tag), 0.0, std::move(a),
                        series::CoefficientSequence(std::move(padded)));
}

KernelHandle KernelHandle::parse(std::string_view tag, std::size_t N)
{
    if (tag == "hardy") return hardy(N);
    const auto colon = tag.find(':');
    if (colon == std::string_view::npos)
        throw std::invalid_argument("kernel family: unknown family tag '" + std::string(tag) + "'");
    const auto head = tag.substr(0, colon);
    const auto arg = tag.substr(colon + 1);
    if (head == "hs") return hs(parse_number(arg, "hs exponent"), N);
    if (head == "geom") return geometric(parse_number(arg, "geom ratio"), N);
    if (head == "custom") {
        std::ifstream in{std::string(arg)};
        if (!in) throw std::invalid_argument("kernel family: cannot read '" + std::string(arg) + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            return from_moduli(series::moduli_from_csv(buf.str()), N, "custom:" + std::string(arg));
        } catch (const csv::ParseError& e) {
            throw std::invalid_argument(std::string("kernel family: ") + e.what());
        }
    }
    throw std::invalid_argument("kernel family: unknown family tag '" + std::string(tag) + "'");
}

KernelHandle KernelHandle::resized(std::size_t N) const
{
    switch (family_) {
    case Family::Hardy: return hardy(N);
    case Family::Hs: return hs(parameter_, N);
    case Family::Geometric: return geometric(parameter_, N);
    case Family::Custom: break;
    }
    std::vector<double> c(moduli_.values().begin(), moduli_.values().end());
    return from_moduli(series::CoefficientSequence(std::move(c)), N, tag_);
}

double KernelHandle::weight(std::size_t n) const
{
    switch (family_) {
    case Family::Hardy: return 1.0;
    case Family::Hs: return std::pow(double(n + 1), parameter_);
    case Family::Geometric: return n == 0 ? 1.0 : 1.0 - parameter_;
    case Family::Custom: break;
    }
    if (n > truncation()) throw std::out_of_range("custom kernel: weight index beyond truncation");
    return weights_[n];
}

double KernelHandle::radial_sum(double y) const
{
    if (!(y >= 0.0 && y <= 1.0)) throw std::domain_error("radial_sum: argument outside [0, 1]");
    switch (family_) {
    case Family::Hardy: return y == 1.0 ? kInf : 1.0 / (1.0 - y);
    case Family::Geometric: return y == 1.0 ? kInf : (1.0 - parameter_ * y) / (1.0 - y);
    case Family::Hs:
        if (y == 1.0) return parameter_ < -1.0 ? boost::math::zeta(-parameter_) : kInf;
        return hs_radial(parameter_, y);
    case Family::Custom: break;
    }
    // Exact kernel of the truncated embedding: 1 / (1 - g_N(y)).
    double g = 0.0;
    const auto c = moduli_.values();
    for (std::size_t i = c.size(); i-- > 0;) g = g * y + c[i];
    g *= y;
    return g >= 1.0 ? kInf : 1.0 / (1.0 - g);
}

double KernelHandle::moduli_mass() const
{
    switch (family_) {
    case Family::Hardy:
    case Family::Geometric: return 1.0;
    case Family::Hs: return parameter_ < -1.0 ? 1.0 - 1.0 / boost::math::zeta(-parameter_) : 1.0;
    case Family::Custom: break;
    }
    return moduli_.partial_sum();
}

bool KernelHandle::compact_regime() const { return moduli_mass() < 1.0 - 1e-12; }

std::complex<double> kernel_eval(const KernelHandle& k, std::complex<double> z, std::complex<double> w)
{
    const double rz = std::abs(z), rw = std::abs(w);
    if (rz > 1.0 || rw > 1.0) throw std::domain_error("kernel_eval: point outside the closed disc");
    if ((rz > kInteriorGuard || rw > kInteriorGuard) && !k.compact_regime())
        throw std::domain_error("kernel_eval: kernel is unbounded near the circle outside the compact regime");
    const std::complex<double> q = z * std::conj(w);

    switch (k.family()) {
    case Family::Hardy: return 1.0 / (1.0 - q);
    case Family::Geometric: return (1.0 - k.parameter() * q) / (1.0 - q);
    case Family::Hs: {
        if (std::abs(q) <= kInteriorGuard * kInteriorGuard) return hs_series(k.parameter(), q);
        // Compact regime only: s < -1 and the series converges on the circle.
        if (std::abs(1.0 - q) < 1e-14) return boost::math::zeta(-k.parameter());
        std::complex<double> sum = 0.0, power = 1.0;
        for (std::size_t n = 0; n < kBoundaryTerms; ++n, power *= q)
            sum += std::pow(double(n + 1), k.parameter()) * power;
        return sum;
    }
    case Family::Custom: break;
    }
    const auto a = k.weights().values();
    std::complex<double> s = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) s = s * q + a[i];
    return s;
}

double monomial_multiplier_norm(const KernelHandle& k, std::size_t n)
{
    return 1.0 / std::sqrt(k.weight(n));
}

Comparison are_comparable(const series::KernelWeights& a, const series::KernelWeights& b, std::size_t N)
{
    if (N > a.truncation() || N > b.truncation())
        throw std::invalid_argument("are_comparable: N exceeds a truncation");
    std::vector<double> ratio(N + 1);
    for (std::size_t n = 0; n <= N; ++n) ratio[n] = a[n] / b[n];

    Comparison out;
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    out.ratio_min = *lo;
    out.ratio_max = *hi;

    const std::size_t tail_len = std::max<std::size_t>(N / 4, 1);
    const auto tail_begin = ratio.end() - static_cast<std::ptrdiff_t>(std::min(tail_len, ratio.size()));
    const auto [tlo, thi] = std::minmax_element(tail_begin, ratio.end());
    double mean = 0.0;
    for (auto it = tail_begin; it != ratio.end(); ++it) mean += *it;
    mean /= static_cast<double>(ratio.end() - tail_begin);
    out.tail_drift = (*thi - *tlo) / mean;

    bool increasing = true, decreasing = true;
    for (auto it = tail_begin + 1; it < ratio.end(); ++it) {
        increasing = increasing && *it > *(it - 1);
        decreasing = decreasing && *it < *(it - 1);
    }
    if (out.tail_drift < 0.05) {
        out.comparable = true;
        out.verdict = "comparable";
    } else {
        out.verdict = (increasing || decreasing) ? "diverging" : "inconclusive";
    }
    return out;
}

ClassificationReport classify(const KernelHandle& k, std::size_t N)
{
    if (N < 8) throw std::invalid_argument("classify: N must be at least 8");
    const KernelHandle h = N == k.truncation() ? k : k.resized(N);
    const auto& a = h.weights();
    const auto& c = h.moduli();
    const std::size_t half = N / 2;

    ClassificationReport r;
    r.family_tag = h.tag();
    r.truncation = N;

    double mu_half = 0.0, mu_full = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        mu_full += double(n) * c[n];
        if (n == half) mu_half = mu_full;
    }
    r.mu_partial = mu_full;
    r.mu = std::abs(mu_full - mu_half) > kDoublingTolerance * std::abs(mu_full) ? kInf : mu_full;

    const std::size_t tail = std::max<std::size_t>(N / 8, 1);
    double acc = 0.0;
    for (std::size_t n = N - tail + 1; n <= N; ++n) acc += a[n];
    r.efp_limit_estimate = acc / double(tail);
    r.efp_gap = std::isfinite(r.mu) ? std::abs(r.efp_limit_estimate - 1.0 / r.mu)
                                    : std::numeric_limits<double>::quiet_NaN();

    r.min_weight = *std::min_element(a.values().begin(), a.values().end());
    r.iso_to_hinf = std::isfinite(r.mu) && r.mu > 0.0;

    double ratio_half = 0.0, ratio_full = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        ratio_full = std::max(ratio_full, a[n] / a[n - 1]);
        if (n == half) ratio_half = ratio_full;
    }
    r.ratio_sup = ratio_full;
    r.ratio_bounded = ratio_full <= (1.0 + kDoublingTolerance) * ratio_half;

    double cyclic_half = 0.0, cyclic_full = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        double s = 0.0;
        for (std::size_t j = 0; j <= n; ++j) s += a[j] * a[n - j];
        cyclic_full = std::max(cyclic_full, s / a[n]);
        if (n == half) cyclic_half = cyclic_full;
    }
    r.strictly_cyclic_partial = cyclic_full;
    r.strictly_cyclic_sup = cyclic_full > (1.0 + kDoublingTolerance) * cyclic_half ? kInf : cyclic_full;

    const auto cv = c.values();
    r.cnp = std::all_of(cv.begin(), cv.end(), [](double x) { return x >= -1e-12; });
    r.moduli_mass = h.moduli_mass();
    r.compact_regime = h.compact_regime();
    return r;
}

std::vector<std::string> report_csv_header()
{
    return {"family",      "N",         "mu",          "mu_partial", "efp_limit_estimate",
            "efp_gap",     "min_weight", "iso_to_hinf", "ratio_sup",  "ratio_bounded",
            "strictly_cyclic_sup", "strictly_cyclic_partial", "cnp", "moduli_mass", "compact_regime"};
}

std::vector<std::string> report_csv_row(const ClassificationReport& r)
{
    const auto f = [](double x) { return csv::format_double(x); };
    const auto b = [](bool x) { return std::string(x ? "true" : "false"); };
    return {r.family_tag,
            std::to_string(r.truncation),
            f(r.mu),
            f(r.mu_partial),
            f(r.efp_limit_estimate),
            f(r.efp_gap),
            f(r.min_weight),
            b(r.iso_to_hinf),
            f(r.ratio_sup),
            b(r.ratio_bounded),
            f(r.strictly_cyclic_sup),
            f(r.strictly_cyclic_partial),
            b(r.cnp),
            f(r.moduli_mass),
            b(r.compact_regime)};
}

double continuity_bound(double r_squared, double h_norm)
{
    if (!(r_squared >= 0.0 && r_squared < 1.0))
        throw std::domain_error("continuity_bound: requires the compact regime (r^2 < 1)");
    return h_norm / std::sqrt(1.0 - r_squared);
}

double continuity_bound(const KernelHandle& k, double h_norm)
{
    if (!k.compact_regime())
        throw std::domain_error("continuity_bound: kernel is not in the compact regime");
    return continuity_bound(k.moduli_mass(), h_norm);
}

}  // namespace npdisc::kernels
