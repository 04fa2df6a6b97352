#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace npdisc::series {

inline constexpr std::size_t kDefaultTruncation = 256;

/// Convolutions longer than this switch to compensated (Neumaier) summation.
inline constexpr std::size_t kCompensatedThreshold = 1000;

/// Truncated moduli c_1..c_N of an embedding f(z) = (b_1 z, b_2 z^2, ...),
/// with c_n = |b_n|^2.
///
/// Construction does not validate: moduli recovered from arbitrary kernel
/// weights may be negative, and that sign is exactly what the complete
/// Nevanlinna-Pick test reads. Use is_valid() / validate() where an
/// embedding is required.
class CoefficientSequence {
public:
    CoefficientSequence() = default;

    /// values[0] is c_1.
    explicit CoefficientSequence(std::vector<double> values);

    /// c_n for 1 <= n; zero beyond the truncation.
    double operator[](std::size_t n) const;

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }

    double partial_sum() const;

    /// c_1 > 0, every c_n >= 0 and sum c_n <= 1 (to 1e-12).
    bool is_valid() const;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;

private:
    std::vector<double> values_;
};

/// Kernel Taylor weights a_0..a_N of K(z, w) = sum a_n (z conj w)^n.
class KernelWeights {
public:
    KernelWeights() = default;

    /// values[0] is a_0. Requires a_0 = 1 and a_n > 0.
    explicit KernelWeights(std::vector<double> values);

    double operator[](std::size_t n) const { return values_.at(n); }

    /// Truncation length N (the largest stored index).
    std::size_t truncation() const { return values_.empty() ? 0 : values_.size() - 1; }
    std::span<const double> values() const { return values_; }

private:
    std::vector<double> values_;
};

/// a_0 = 1, a_n = sum_{k=1}^{n} c_k a_{n-k}.  Entries of c beyond its own
/// truncation are taken to be zero.
KernelWeights weights_from_moduli(const CoefficientSequence& c,
                                  std::size_t N = kDefaultTruncation);

/// Taylor coefficients of 1 - 1/(sum a_n z^n), by back-substitution in the
/// renewal recursion. Negative entries are returned, not rejected.
CoefficientSequence moduli_from_weights(const KernelWeights& a, std::size_t N);
CoefficientSequence moduli_from_weights(const KernelWeights& a);

/// True iff every recovered modulus is >= -tol.
bool is_complete_np(const KernelWeights& a, double tol = 1e-12);

/// Reciprocal of a truncated power series h (h[0] != 0) by Newton iteration
/// r <- r (2 - h r) with precision doubling. Shares no code with the
/// renewal recursion and serves as its cross-check.
std::vector<double> reciprocal_newton(std::span<const double> h, std::size_t N);

struct GeneratingValue {
    std::complex<double> value;
    /// Estimated magnitude of the discarded tail (zero for a finite
    /// moduli polynomial, which is evaluated exactly).
    double tail_estimate = 0.0;
};

/// Largest |z| accepted by evaluate_generating.
inline constexpr double kGeneratingRadius = 0.999;

/// 1 / (1 - sum c_n z^n).
GeneratingValue evaluate_generating(const CoefficientSequence& c, std::complex<double> z);

/// sum_{n <= N} a_n z^n.
GeneratingValue evaluate_generating(const KernelWeights& a, std::complex<double> z);

/// `n,value` CSV columns, rows n = 1..N for moduli and n = 0..N for weights.
std::string to_csv(const CoefficientSequence& c);
std::string to_csv(const KernelWeights& a);

/// Reads `n,value` rows (header required, `#` comments ignored). Indices
/// must be consecutive starting at 1.
CoefficientSequence moduli_from_csv(const std::string& text);
KernelWeights weights_from_csv(const std::string& text);

}  // namespace npdisc::series
