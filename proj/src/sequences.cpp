#include "npdisc/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace npdisc::sequences {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normalized_angle(cd z)
{
    double t = std::arg(z);
    if (t < 0.0) t += kTwoPi;
    return t >= kTwoPi ? 0.0 : t;
}

// floor(2^{n/2}) without floating-point rounding.
std::uint64_t floor_sqrt_pow2(unsigned n)
{
    if (n % 2 == 0) return std::uint64_t{1} << (n / 2);
    const std::uint64_t target = std::uint64_t{1} << n;
    auto x = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(target)));
    while (x * x > target) --x;
    while ((x + 1) * (x + 1) <= target) ++x;
    return x;
}

SequencePoint radial_point(double sign, double gap)
{
    return {DiscPoint::from_gap(sign, gap), gap, sign > 0 ? 0.0 : std::numbers::pi};
}

}  // namespace

DiscSequence::DiscSequence(std::string label, std::vector<SequencePoint> points)
    : label_(std::move(label)), points_(std::move(points))
{
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            if (points_[i].angle == points_[j].angle && points_[i].one_minus_modulus == points_[j].one_minus_modulus &&
                geometry::pseudo_dist(points_[i].point, points_[j].point) == 0.0)
                throw std::invalid_argument("DiscSequence: repeated point at positions " + std::to_string(i + 1) +
                                            " and " + std::to_string(j + 1));
}

DiscSequence DiscSequence::from_values(std::string label, const std::vector<cd>& values)
{
    std::vector<SequencePoint> pts;
    pts.reserve(values.size());
    for (const cd& v : values) {
        if (!(std::abs(v) < 1.0)) throw std::invalid_argument("DiscSequence: points must lie in the open disc");
        pts.push_back({DiscPoint::from_value(v), 1.0 - std::abs(v), normalized_angle(v)});
    }
    return DiscSequence(std::move(label), std::move(pts));
}

BlaschkeSum blaschke_sum(const DiscSequence& s)
{
    BlaschkeSum out;
    const std::size_t half = s.size() / 2;
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.sum += s[i].one_minus_modulus;
        if (i + 1 == half) out.half_sum = out.sum;
    }
    out.converged = s.size() >= 2 && out.sum - out.half_sum <= 0.01 * out.sum;
    return out;
}

Delta separation_delta(const DiscSequence& s, std::size_t n)
{
    if (n >= s.size()) throw std::out_of_range("separation_delta: index beyond the list");
    Delta out;
    out.truncation = s.size();
    double log_delta = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == n) continue;
        log_delta += std::log(geometry::pseudo_dist(s[i].point, s[n].point));
    }
    out.log_value = log_delta;
    out.underflow = log_delta < kLogDeltaFloor;
    out.value = out.underflow ? 0.0 : std::exp(log_delta);
    return out;
}

double nearest_gap(const DiscSequence& s, std::size_t n)
{
    if (n >= s.size()) throw std::out_of_range("nearest_gap: index beyond the list");
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
        if (i != n) gap = std::min(gap, geometry::pseudo_dist(s[i].point, s[n].point));
    return gap;
}

Separation is_separated(const DiscSequence& s)
{
    if (s.size() < 2) throw std::invalid_argument("is_separated: need at least two points");
    Separation out;
    out.inf_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            out.inf_gap = std::min(out.inf_gap, geometry::pseudo_dist(s[i].point, s[j].point));
    out.separated = out.inf_gap > kSeparationThreshold;
    return out;
}

double carleson_ratio(const DiscSequence& s, unsigned p)
{
    if (p < 1 || p > 1000) throw std::invalid_argument("carleson_ratio: p must lie in 1..1000");
    const double side = std::ldexp(1.0, -static_cast<int>(p));
    double mass = 0.0;
    for (const auto& v : s.points())
        if (v.one_minus_modulus <= side && v.angle >= 0.0 && v.angle < side) mass += v.one_minus_modulus;
    return mass / side;
}

double garnett_budget(double delta)
{
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("garnett_budget: delta must lie in [0, 1]");
    if (delta == 0.0) return 0.0;
    const double l = 1.0 - std::log(delta);
    return delta / (l * l);
}

std::vector<Budget> garnett_targets(const DiscSequence& s)
{
    std::vector<Budget> out(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) {
        const Delta d = separation_delta(s, n);
        out[n].underflow = d.underflow;
        out[n].value = garnett_budget(std::min(d.value, 1.0));
    }
    return out;
}

const std::vector<std::string>& named_sequence_tags()
{
    static const std::vector<std::string> tags{"vn_quadratic", "wn_gaussian", "dyadic_separated", "xn_alternating"};
    return tags;
}

DiscSequence named_sequence(std::string_view tag, std::size_t N)
{
    if (N < 1) throw std::invalid_argument("named_sequence: N must be at least 1");
    std::vector<SequencePoint> pts;
    if (tag == "vn_quadratic" || tag == "xn_alternating") {
        if (N > 1000000) throw std::invalid_argument("named_sequence: N too large");
        const bool alternate = tag == "xn_alternating";
        for (std::size_t n = 2; n <= N + 1; ++n) {
            const double gap = 1.0 / (double(n) * double(n));
            pts.push_back(radial_point(alternate && n % 2 == 1 ? -1.0 : 1.0, gap));
        }
    } else if (tag == "wn_gaussian") {
        if (N > 1000) throw std::invalid_argument("named_sequence: wn_gaussian supports N <= 1000");
        for (std::size_t n = 1; n <= N; ++n) {
            const double log_gap = -double(n) * double(n);
            pts.push_back({DiscPoint::from_log_gap(1.0, log_gap), std::exp(log_gap), 0.0});
        }
    } else if (tag == "dyadic_separated") {
        if (N > 30) throw std::invalid_argument("named_sequence: dyadic_separated supports N <= 30 generations");
        for (unsigned n = 1; n <= N; ++n) {
            const double gap = std::ldexp(1.0, -static_cast<int>(n));
            const std::uint64_t count = floor_sqrt_pow2(n);
            for (std::uint64_t k = 0; k < count; ++k) {
                const double angle = double(k) * gap;
                pts.push_back({DiscPoint::from_gap(std::polar(1.0, angle), gap), gap, angle});
            }
        }
    } else {
        throw std::invalid_argument("named_sequence: unknown tag '" + std::string(tag) + "'");
    }
    return DiscSequence(std::string(tag), std::move(pts));
}

csv::Table separation_table(const DiscSequence& s)
{
    csv::Table t;
    t.header = {"n", "delta_n", "gap_n", "budget_n"};
    for (std::size_t n = 0; n < s.size(); ++n) {
        const Delta d = separation_delta(s, n);
        const double gap = s.size() > 1 ? nearest_gap(s, n) : std::numeric_limits<double>::infinity();
        t.rows.push_back({std::to_string(n + 1), csv::format_double(d.value), csv::format_double(gap),
                          csv::format_double(garnett_budget(std::min(d.value, 1.0)))});
    }
    return t;
}

csv::Table carleson_table(const DiscSequence& s, unsigned p_max)
{
    csv::Table t;
    t.header = {"p", "carleson_ratio"};
    for (unsigned p = 1; p <= p_max; ++p)
        t.rows.push_back({std::to_string(p), csv::format_double(carleson_ratio(s, p))});
    return t;
}

}  // namespace npdisc::sequences
