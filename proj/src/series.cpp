#include "npdisc/series.hpp"

#include "npdisc/csv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace npdisc::series {

namespace {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

constexpr double kMassSlack = 1e-12;

std::vector<double> read_indexed_column(const std::string& text, std::size_t first_index)
{
    const auto table = csv::parse(text);
    const auto n_col = table.column("n");
    const auto v_col = table.column("value");
    std::vector<double> values;
    values.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto n = csv::parse_double(table.rows[i][n_col]);
        if (n != static_cast<double>(first_index + i))
            throw csv::ParseError("series csv: indices must be consecutive from " +
                                  std::to_string(first_index));
        values.push_back(csv::parse_double(table.rows[i][v_col]));
    }
    return values;
}

}  // namespace

CoefficientSequence::CoefficientSequence(std::vector<double> values) : values_(std::move(values))
{
}

double CoefficientSequence::operator[](std::size_t n) const
{
    if (n == 0) throw std::out_of_range("CoefficientSequence is indexed from 1");
    return n <= values_.size() ? values_[n - 1] : 0.0;
}

double CoefficientSequence::partial_sum() const
{
    CompensatedSum s;
    for (double c : values_) s.add(c);
    return s.value();
}

bool CoefficientSequence::is_valid() const
{
    if (values_.empty() || !(values_.front() > 0.0)) return false;
    if (std::any_of(values_.begin(), values_.end(), [](double c) { return !(c >= 0.0); }))
        return false;
    return partial_sum() <= 1.0 + kMassSlack;
}

void CoefficientSequence::validate() const
{
    if (values_.empty()) throw std::invalid_argument("moduli: empty sequence");
    if (!(values_.front() > 0.0))
        throw std::invalid_argument("moduli: c_1 must be positive (invalid embedding)");
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!(values_[i] >= 0.0))
            throw std::invalid_argument("moduli: c_" + std::to_string(i + 1) + " is negative");
    if (partial_sum() > 1.0 + kMassSlack)
        throw std::invalid_argument("moduli: sum of c_n exceeds 1");
}

KernelWeights::KernelWeights(std::vector<double> values) : values_(std::move(values))
{
    if (values_.empty() || values_.front() != 1.0)
        throw std::invalid_argument("weights: a_0 must equal 1");
    for (std::size_t n = 1; n < values_.size(); ++n)
        if (!(values_[n] > 0.0))
            throw std::invalid_argument("weights: a_" + std::to_string(n) + " must be positive");
}

KernelWeights weights_from_moduli(const CoefficientSequence& c, std::size_t N)
{
    if (N < 1) throw std::invalid_argument("weights_from_moduli: N must be at least 1");
    c.validate();

    std::vector<double> a(N + 1, 0.0);
    a[0] = 1.0;
    const std::size_t support = c.size();
    const bool compensated = N > kCompensatedThreshold;
    for (std::size_t n = 1; n <= N; ++n) {
        const std::size_t kmax = std::min(n, support);
        if (compensated) {
            CompensatedSum s;
            for (std::size_t k = 1; k <= kmax; ++k) s.add(c[k] * a[n - k]);
            a[n] = s.value();
        } else {
            double s = 0.0;
            for (std::size_t k = 1; k <= kmax; ++k) s += c[k] * a[n - k];
            a[n] = s;
        }
    }
    return KernelWeights(std::move(a));
}

CoefficientSequence moduli_from_weights(const KernelWeights& a, std::size_t N)
{
    if (N > a.truncation())
        throw std::invalid_argument("moduli_from_weights: N exceeds the weight truncation");
    // a_n = c_n + sum_{k=1}^{n-1} c_k a_{n-k}, solved for c_n.
    std::vector<double> c(N, 0.0);
    const bool compensated = N > kCompensatedThreshold;
    for (std::size_t n = 1; n <= N; ++n) {
        if (compensated) {
            CompensatedSum s;
            s.add(a[n]);
            for (std::size_t k = 1; k < n; ++k) s.add(-c[k - 1] * a[n - k]);
            c[n - 1] = s.value();
        } else {
            double s = a[n];
            for (std::size_t k = 1; k < n; ++k) s -= c[k - 1] * a[n - k];
            c[n - 1] = s;
        }
    }
    return CoefficientSequence(std::move(c));
}

CoefficientSequence moduli_from_weights(const KernelWeights& a)
{
    return moduli_from_weights(a, a.truncation());
}

bool is_complete_np(const KernelWeights& a, double tol)
{
    const auto c = moduli_from_weights(a);
    const auto v = c.values();
    return std::all_of(v.begin(), v.end(), [tol](double x) { return x >= -tol; });
}

std::vector<double> reciprocal_newton(std::span<const double> h, std::size_t N)
{
    if (h.empty() || h[0] == 0.0)
        throw std::invalid_argument("reciprocal_newton: constant term must be nonzero");
    const auto coeff = [&h](std::size_t i) { return i < h.size() ? h[i] : 0.0; };

    std::vector<double> r{1.0 / h[0]};
    std::size_t have = 1;
    while (have < N + 1) {
        const std::size_t want = std::min(2 * have, N + 1);
        // e = h r mod z^want; then r <- r + r (1 - e) = r (2 - h r).
        std::vector<double> e(want, 0.0);
        for (std::size_t i = 0; i < want; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j <= std::min(i, have - 1); ++j) s += r[j] * coeff(i - j);
            e[i] = s;
        }
        std::vector<double> defect(want, 0.0);
        defect[0] = 1.0 - e[0];
        for (std::size_t i = 1; i < want; ++i) defect[i] = -e[i];
        std::vector<double> next(want, 0.0);
        for (std::size_t i = 0; i < want; ++i) {
            double s = i < have ? r[i] : 0.0;
            for (std::size_t j = 0; j <= std::min(i, have - 1); ++j) s += r[j] * defect[i - j];
            next[i] = s;
        }
        r = std::move(next);
        have = want;
    }
    return r;
}

GeneratingValue evaluate_generating(const CoefficientSequence& c, std::complex<double> z)
{
    if (std::abs(z) >= 1.0) throw std::domain_error("evaluate_generating: |z| >= 1");
    if (std::abs(z) > kGeneratingRadius)
        throw std::domain_error("evaluate_generating: |z| beyond the truncation guard 0.999");
    // Horner on g(z) = z (c_1 + z (c_2 + ...)).
    std::complex<double> g = 0.0;
    const auto v = c.values();
    for (std::size_t i = v.size(); i-- > 0;) g = g * z + v[i];
    g *= z;
    return {1.0 / (1.0 - g), 0.0};
}

GeneratingValue evaluate_generating(const KernelWeights& a, std::complex<double> z)
{
    if (std::abs(z) >= 1.0) throw std::domain_error("evaluate_generating: |z| >= 1");
    if (std::abs(z) > kGeneratingRadius)
        throw std::domain_error("evaluate_generating: |z| beyond the truncation guard 0.999");
    std::complex<double> s = 0.0;
    const auto v = a.values();
    for (std::size_t i = v.size(); i-- > 0;) s = s * z + v[i];
    const double rho = std::abs(z);
    const double tail =
        v.empty() ? 0.0 : std::abs(v.back()) * std::pow(rho, static_cast<double>(v.size())) / (1.0 - rho);
    return {s, tail};
}

std::string to_csv(const CoefficientSequence& c)
{
    csv::Table t;
    t.header = {"n", "value"};
    for (std::size_t n = 1; n <= c.size(); ++n)
        t.rows.push_back({std::to_string(n), csv::format_double(c[n])});
    return csv::to_string(t);
}

std::string to_csv(const KernelWeights& a)
{
    csv::Table t;
    t.header = {"n", "value"};
    for (std::size_t n = 0; n <= a.truncation(); ++n)
        t.rows.push_back({std::to_string(n), csv::format_double(a[n])});
    return csv::to_string(t);
}

CoefficientSequence moduli_from_csv(const std::string& text)
{
    return CoefficientSequence(read_indexed_column(text, 1));
}

KernelWeights weights_from_csv(const std::string& text)
{
    return KernelWeights(read_indexed_column(text, 0));
}

}  // namespace npdisc::series
