#pragma once

#include "npdisc/series.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace npdisc::kernels {

/// Kernel family of a handle. Closed-form families can produce a_n for any
/// n, which is what lets radial sums run far past the stored truncation.
enum class Family { Hardy, Hs, Geometric, Custom };

/// Weighted Hardy kernel K(z, w) = sum a_n (z conj w)^n together with the
/// moduli c_n of 1 - 1/K. The pair is consistent by construction.
class KernelHandle {
public:
    /// a_n = 1, c = (1, 0, 0, ...).
    static KernelHandle hardy(std::size_t N = series::kDefaultTruncation);

    /// a_n = (n+1)^s; moduli obtained by inverting the weights.
    static KernelHandle hs(double s, std::size_t N = series::kDefaultTruncation);

    /// c_n = (1-q) q^{n-1}, so that a_n = 1-q for n >= 1 and mu = 1/(1-q).
    static KernelHandle geometric(double q, std::size_t N = series::kDefaultTruncation);

    /// Arbitrary valid moduli (zero beyond their own length).
    static KernelHandle from_moduli(series::CoefficientSequence c,
                                    std::size_t N = series::kDefaultTruncation,
                                    std::string tag = "custom");

    /// `hardy`, `hs:<s>`, `geom:<q>` or `custom:<path>`; the custom file
    /// holds moduli as `n,value` CSV. Throws std::invalid_argument.
    static KernelHandle parse(std::string_view tag, std::size_t N = series::kDefaultTruncation);

    /// Same family at a different truncation.
    KernelHandle resized(std::size_t N) const;

    Family family() const { return family_; }
    const std::string& tag() const { return tag_; }
    double parameter() const { return parameter_; }
    std::size_t truncation() const { return weights_.truncation(); }
    const series::KernelWeights& weights() const { return weights_; }
    const series::CoefficientSequence& moduli() const { return moduli_; }

    /// a_n; beyond the truncation only for closed-form families.
    double weight(std::size_t n) const;
    bool has_closed_form() const { return family_ != Family::Custom; }

    /// Radial kernel A(y) = sum a_n y^n = 1/(1 - g(y)) for 0 <= y <= 1.
    /// A(1) is +inf unless the kernel is in the compact regime.
    double radial_sum(double y) const;

    /// sum c_n over the full sequence where known in closed form,
    /// otherwise the truncated partial sum.
    double moduli_mass() const;

    /// sum c_n < 1: the closure of the embedded disc stays inside the ball.
    bool compact_regime() const;

private:
    KernelHandle(Family family, std::string tag, double parameter, series::KernelWeights a,
                 series::CoefficientSequence c);

    Family family_ = Family::Custom;
    std::string tag_;
    double parameter_ = 0.0;
    series::KernelWeights weights_;
    series::CoefficientSequence moduli_;
};

/// K(z, w). Points with |z| or |w| above 0.999 are refused unless the
/// handle is in the compact regime, where the closed disc is allowed.
std::complex<double> kernel_eval(const KernelHandle& k, std::complex<double> z, std::complex<double> w);

/// ||z^n|| in the space and in its multiplier algebra: 1/sqrt(a_n).
double monomial_multiplier_norm(const KernelHandle& k, std::size_t n);

struct Comparison {
    bool comparable = false;
    std::string verdict;  // "comparable", "diverging" or "inconclusive"
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    /// (max - min) / mean of a_n / a'_n over the last quarter of indices.
    double tail_drift = 0.0;
    /// Finite data cannot settle an asymptotic property; always true.
    bool heuristic = true;
};

/// Observed range of a_n / a'_n for n <= N plus a drift verdict.
Comparison are_comparable(const series::KernelWeights& a, const series::KernelWeights& b, std::size_t N);

struct ClassificationReport {
    std::string family_tag;
    std::size_t truncation = 0;
    double mu = 0.0;          // sum n c_n, +inf when the doubling test flags divergence
    double mu_partial = 0.0;  // the truncated sum behind mu
    double efp_limit_estimate = 0.0;  // mean of the last N/8 weights
    double efp_gap = 0.0;             // |estimate - 1/mu|; nan when mu is infinite
    double min_weight = 0.0;
    bool iso_to_hinf = false;
    double ratio_sup = 0.0;  // sup a_n / a_{n-1}
    bool ratio_bounded = false;
    double strictly_cyclic_partial = 0.0;  // sup_n sum_k a_k a_{n-k} / a_n
    double strictly_cyclic_sup = 0.0;      // +inf when the doubling test flags growth
    bool cnp = false;
    double moduli_mass = 0.0;
    bool compact_regime = false;
};

ClassificationReport classify(const KernelHandle& k, std::size_t N);

std::vector<std::string> report_csv_header();
std::vector<std::string> report_csv_row(const ClassificationReport& r);

/// ||h|| / sqrt(1 - r^2): uniform bound on sum |d_n| for h = sum d_n z^n.
double continuity_bound(double r_squared, double h_norm);
double continuity_bound(const KernelHandle& k, double h_norm);

}  // namespace npdisc::kernels
