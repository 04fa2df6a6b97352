#pragma once

#include "npdisc/csv.hpp"
#include "npdisc/geometry.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace npdisc::sequences {

using geometry::cd;
using geometry::DiscPoint;

/// One point with its radial gap 1 - |v| and angle arg v in [0, 2 pi)
/// stored exactly as generated, so box membership needs no rounding.
struct SequencePoint {
    DiscPoint point;
    double one_minus_modulus = 0.0;
    double angle = 0.0;
};

class DiscSequence {
public:
    /// Throws std::invalid_argument on repeated points.
    DiscSequence(std::string label, std::vector<SequencePoint> points);
    static DiscSequence from_values(std::string label, const std::vector<cd>& values);

    std::size_t size() const { return points_.size(); }
    const SequencePoint& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<SequencePoint>& points() const { return points_; }
    const std::string& label() const { return label_; }

private:
    std::string label_;
    std::vector<SequencePoint> points_;
};

struct BlaschkeSum {
    double sum = 0.0;
    double half_sum = 0.0;  // over the first half of the list
    /// Tail-doubling heuristic: the second half adds less than 1% of the sum.
    bool converged = false;
};

/// sum (1 - |v_n|) over the list.
BlaschkeSum blaschke_sum(const DiscSequence& s);

struct Delta {
    double value = 0.0;
    double log_value = 0.0;
    bool underflow = false;  // log delta fell below the -700 floor
    std::size_t truncation = 0;
};

inline constexpr double kLogDeltaFloor = -700.0;

/// prod_{i != n} |b_{v_i}(v_n)|, the product of pseudohyperbolic distances,
/// accumulated in log space. n is 0-based.
Delta separation_delta(const DiscSequence& s, std::size_t n);

/// min_{i != n} d(v_i, v_n).
double nearest_gap(const DiscSequence& s, std::size_t n);

struct Separation {
    bool separated = false;
    double inf_gap = 0.0;
};

inline constexpr double kSeparationThreshold = 1e-3;

Separation is_separated(const DiscSequence& s);

/// 2^p sum (1 - |v|) over v in S_p = {1 - 2^-p <= |v| < 1, 0 <= arg v < 2^-p}.
double carleson_ratio(const DiscSequence& s, unsigned p);

/// delta (1 + log(1/delta))^{-2}; 0 for delta = 0.
double garnett_budget(double delta);

struct Budget {
    double value = 0.0;
    bool underflow = false;
};

std::vector<Budget> garnett_targets(const DiscSequence& s);

/// "vn_quadratic": 1 - 1/n^2, n = 2..N+1.
/// "wn_gaussian": 1 - exp(-n^2), n = 1..N (anchored, no rounding to 1).
/// "dyadic_separated": (1 - 2^-n) e^{i k 2^-n}, 0 <= k < floor(2^{n/2}),
///   generations n = 1..N.
/// "xn_alternating": (-1)^n (1 - 1/n^2), n = 2..N+1.
DiscSequence named_sequence(std::string_view tag, std::size_t N);

const std::vector<std::string>& named_sequence_tags();

/// `n,delta_n,gap_n,budget_n` with n 1-based.
csv::Table separation_table(const DiscSequence& s);

/// `p,carleson_ratio` for p = 1..p_max.
csv::Table carleson_table(const DiscSequence& s, unsigned p_max);

}  // namespace npdisc::sequences
