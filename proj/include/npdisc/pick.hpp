#pragma once

#include "npdisc/geometry.hpp"
#include "npdisc/kernels.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace npdisc::pick {

using geometry::cd;
using Mat = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxPickSize = 2000;
inline constexpr std::size_t kEigenLimit = 200;
inline constexpr double kIndefiniteTolerance = 1e-10;

/// Interpolation data z_i -> w_i together with the kernel Gram matrix and
/// the normalized kernel k(z_i, z_j) / sqrt(k(z_i, z_i) k(z_j, z_j)).
class PickProblem {
public:
    /// Drury-Arveson kernel 1 / (1 - <x, y>) on ball points.
    static PickProblem drury_arveson(std::vector<geometry::BallPoint> nodes, std::vector<cd> targets);
    /// Scalar nodes (d = 1, the Szego kernel) in anchored form.
    static PickProblem drury_arveson(std::vector<geometry::DiscPoint> nodes, std::vector<cd> targets);
    /// Weighted kernel sum a_n (z conj w)^n on disc nodes.
    static PickProblem weighted(const kernels::KernelHandle& k, std::vector<cd> nodes, std::vector<cd> targets);

    std::size_t size() const { return targets_.size(); }
    const std::vector<cd>& targets() const { return targets_; }
    const Mat& gram() const { return gram_; }
    const Mat& normalized_gram() const { return normalized_; }
    const std::string& kernel_label() const { return label_; }

private:
    PickProblem(Mat gram, Mat normalized, std::vector<cd> targets, std::string label);
    Mat gram_;
    Mat normalized_;
    std::vector<cd> targets_;
    std::string label_;
};

/// [(1 - w_i conj(w_j)) K(z_i, z_j)].
Mat pick_matrix(const PickProblem& p);

/// D^{-1/2} A D^{-1/2} with D = diag K(z_i, z_i). A congruence, so it has the
/// same inertia as pick_matrix, but entries stay O(1) near the boundary.
Mat normalized_pick_matrix(const PickProblem& p);

/// Same construction for an explicit normalized kernel matrix.
Mat pick_from_kernel(const Mat& kernel, const std::vector<cd>& targets);

enum class Verdict { PositiveDefinite, PositiveSemidefinite, Indefinite };
std::string to_string(Verdict v);

struct PsdVerdict {
    /// Smallest eigenvalue (m <= 200) or smallest LDL^T pivot.
    double min_eigenvalue = 0.0;
    double matrix_scale = 0.0;  // largest |entry|
    Verdict verdict = Verdict::Indefinite;
    std::string method;  // "eigen" or "ldlt"
};

/// Throws std::invalid_argument when the input is not Hermitian to 1e-13
/// relative to its largest entry.
PsdVerdict psd_check(const Mat& m);

bool solvable(const PickProblem& p);

class ExtractionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExtractionStep {
    std::size_t k = 0;
    std::size_t index = 0;  // 0-based position in the input list
    double point_norm = 0.0;
    /// Smallest eigenvalue of the normalized A_k(w) over the verification sample.
    double min_eigenvalue = 0.0;
    std::string rule;  // "base" or "dominance"
    /// log((1 - r^2) delta K(z, z)) and log(remainder bound), normalized units.
    double log_leading = 0.0;
    double log_remainder = 0.0;
};

struct ExtractionResult {
    std::vector<std::size_t> indices;
    std::vector<ExtractionStep> steps;
};

struct ExtractorOptions {
    std::size_t corner_cap = 512;
    std::size_t random_draws = 256;
    std::size_t verify_draws = 256;
    std::uint64_t seed = 0;
};

/// Candidate set seen through its normalized kernel.
struct NodeSet {
    std::size_t size = 0;
    std::function<cd(std::size_t, std::size_t)> normalized_kernel;
    std::function<double(std::size_t)> norm;
};

NodeSet node_set(const std::vector<geometry::BallPoint>& points);
NodeSet node_set(const std::vector<geometry::DiscPoint>& points);

/// Greedy selection n_1 < n_2 < ... : the first point is taken, and a later
/// candidate z is accepted once (1 - r^2) delta K(z, z) exceeds a Hadamard
/// bound on the other terms of the expansion of det A_k(w) along z, where
/// delta is the sampled minimum of det A_{k-1}(w) over |w_i| <= r. Each
/// acceptance is then checked on a fresh sample of targets.
ExtractionResult extract_interpolating_subsequence(const NodeSet& nodes, double r, std::size_t k_max,
                                                   const ExtractorOptions& options = {});
ExtractionResult extract_interpolating_subsequence(const std::vector<geometry::BallPoint>& points, double r,
                                                   std::size_t k_max, const ExtractorOptions& options = {});
ExtractionResult extract_interpolating_subsequence(const std::vector<geometry::DiscPoint>& points, double r,
                                                   std::size_t k_max, const ExtractorOptions& options = {});

struct CrossingResult {
    double det = 0.0;
    /// (C^2 + (1-x)(1-sx))^2 (1 - |f(1-x)|^2)(1 - |f(-1+sx)|^2)
    double lhs = 0.0;
    /// (C^2 - (1-x)^2)(C^2 - (1-sx)^2) |1 - <f(-1+sx), f(1-x)>|^2; det < 0 iff lhs > rhs
    double rhs = 0.0;
    double kernel_ratio = 0.0;
    double s = 0.0;
};

/// 2x2 Pick matrix of the crossing map at f(1 - x), f(-1 + s x) with the
/// targets (1 - x)/C and (-1 + s x)/C that f^{-1}/C would have to take.
CrossingResult crossing_determinant(double r, double C, double x);

}  // namespace npdisc::pick
