#include "npdisc/pick.hpp"

#include "npdisc/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace npdisc::pick {

namespace {

using geometry::BallPoint;
using geometry::DiscPoint;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHermitianTolerance = 1e-13;

void check_targets(const std::vector<cd>& targets, std::size_t nodes)
{
    if (targets.size() != nodes) throw std::invalid_argument("pick: node count differs from target count");
    if (targets.empty()) throw std::invalid_argument("pick: empty problem");
    if (targets.size() > kMaxPickSize) throw std::invalid_argument("pick: more than 2000 nodes");
    for (const auto& w : targets)
        if (!(std::abs(w) < 1.0)) throw std::invalid_argument("pick: targets must satisfy |w| < 1");
}

Mat normalize(const Mat& gram)
{
    const auto n = gram.rows();
    Mat out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = gram(i, j) / std::sqrt(gram(i, i).real() * gram(j, j).real());
    return out;
}

double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// log det of a Hermitian matrix, -inf when it is not positive definite.
double log_det_pd(const Mat& m)
{
    Eigen::LLT<Mat> llt(m);
    if (llt.info() != Eigen::Success) return -kInf;
    double s = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) s += 2.0 * std::log(llt.matrixL()(i, i).real());
    return std::isfinite(s) ? s : -kInf;
}

double min_eigenvalue(const Mat& m)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double log_sum_exp(const std::vector<double>& v)
{
    double m = -kInf;
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// All +-r sign patterns when there are at most `cap`, else `cap` random
// corners; then `draws` uniform samples from the polydisc of radius r.
std::vector<std::vector<cd>> target_sample(std::size_t len, double r, std::size_t cap, std::size_t draws,
                                           CounterRng& rng)
{
    std::vector<std::vector<cd>> out;
    const bool all = len < 63 && (std::size_t{1} << len) <= cap;
    const std::size_t corners = all ? (std::size_t{1} << len) : cap;
    for (std::size_t c = 0; c < corners; ++c) {
        std::vector<cd> w(len);
        const std::uint64_t bits = all ? c : rng.next_u64();
        for (std::size_t i = 0; i < len; ++i) w[i] = ((bits >> (i % 64)) & 1) ? -r : r;
        out.push_back(std::move(w));
    }
    for (std::size_t d = 0; d < draws; ++d) {
        std::vector<cd> w(len);
        for (auto& x : w) x = rng.in_disc(r);
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace

PickProblem::PickProblem(Mat gram, Mat normalized, std::vector<cd> targets, std::string label)
    : gram_(std::move(gram)), normalized_(std::move(normalized)), targets_(std::move(targets)),
      label_(std::move(label))
{
}

PickProblem PickProblem::drury_arveson(std::vector<BallPoint> nodes, std::vector<cd> targets)
{
    check_targets(targets, nodes.size());
    const auto n = static_cast<Eigen::Index>(nodes.size());
    for (const auto& z : nodes)
        if (!z.is_interior()) throw std::invalid_argument("pick: nodes must be interior points");
    Mat gram(n, n), normalized(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& a = nodes[std::size_t(i)];
            const auto& b = nodes[std::size_t(j)];
            if (a.dim() != b.dim()) throw std::invalid_argument("pick: nodes of different dimension");
            if (i < j && geometry::pseudo_dist(a, b) == 0.0)
                throw std::invalid_argument("pick: coincident nodes");
            const cd den = 1.0 - geometry::inner(a.coords(), b.coords());
            gram(i, j) = 1.0 / den;
            const double sa = 1.0 - a.coords().squaredNorm(), sb = 1.0 - b.coords().squaredNorm();
            normalized(i, j) = std::sqrt(sa * sb) / den;
        }
    }
    return PickProblem(std::move(gram), std::move(normalized), std::move(targets), "drury-arveson");
}

PickProblem PickProblem::drury_arveson(std::vector<DiscPoint> nodes, std::vector<cd> targets)
{
    check_targets(targets, nodes.size());
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Mat gram(n, n), normalized(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& a = nodes[std::size_t(i)];
            const auto& b = nodes[std::size_t(j)];
            if (i < j && geometry::pseudo_dist(a, b) == 0.0)
                throw std::invalid_argument("pick: coincident nodes");
            const auto [mant, scale] = geometry::one_minus_prod(a, b);
            gram(i, j) = std::exp(-scale) / mant;
            const double half = 0.5 * (a.log_one_minus_modulus_sq() + b.log_one_minus_modulus_sq());
            normalized(i, j) = std::exp(half - scale) / mant;
        }
    }
    return PickProblem(std::move(gram), std::move(normalized), std::move(targets), "drury-arveson");
}

PickProblem PickProblem::weighted(const kernels::KernelHandle& k, std::vector<cd> nodes, std::vector<cd> targets)
{
    check_targets(targets, nodes.size());
    const auto n = static_cast<Eigen::Index>(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!(std::abs(nodes[i]) < 1.0)) throw std::invalid_argument("pick: nodes must lie in the open disc");
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j]) throw std::invalid_argument("pick: coincident nodes");
    }
    Mat gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            gram(i, j) = kernels::kernel_eval(k, nodes[std::size_t(i)], nodes[std::size_t(j)]);
            gram(j, i) = std::conj(gram(i, j));
        }
    Mat normalized = normalize(gram);
    return PickProblem(std::move(gram), std::move(normalized), std::move(targets), k.tag());
}

Mat pick_from_kernel(const Mat& kernel, const std::vector<cd>& targets)
{
    const auto n = kernel.rows();
    if (static_cast<std::size_t>(n) != targets.size()) throw std::invalid_argument("pick: size mismatch");
    Mat out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = (1.0 - targets[std::size_t(i)] * std::conj(targets[std::size_t(j)])) * kernel(i, j);
    return out;
}

Mat pick_matrix(const PickProblem& p)
{
    Mat m = pick_from_kernel(p.gram(), p.targets());
    if (!m.allFinite())
        throw std::domain_error("pick_matrix: kernel entries overflow; use normalized_pick_matrix");
    return m;
}

Mat normalized_pick_matrix(const PickProblem& p) { return pick_from_kernel(p.normalized_gram(), p.targets()); }

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::PositiveDefinite: return "positive-definite";
    case Verdict::PositiveSemidefinite: return "positive-semidefinite";
    case Verdict::Indefinite: return "indefinite";
    }
    return "unknown";
}

PsdVerdict psd_check(const Mat& m)
{
    if (m.rows() == 0 || m.rows() != m.cols()) throw std::invalid_argument("psd_check: need a nonempty square matrix");
    if (!m.allFinite()) throw std::invalid_argument("psd_check: non-finite entries");
    PsdVerdict out;
    out.matrix_scale = max_abs(m);
    const double asym = max_abs(m - m.adjoint());
    if (asym > kHermitianTolerance * out.matrix_scale) throw std::invalid_argument("psd_check: matrix is not Hermitian");
    const Mat h = 0.5 * (m + m.adjoint());

    if (static_cast<std::size_t>(h.rows()) <= kEigenLimit) {
        out.method = "eigen";
        out.min_eigenvalue = min_eigenvalue(h);
    } else {
        // Pivoted LDL^T: the pivots have the inertia of h (Sylvester).
        out.method = "ldlt";
        Eigen::LDLT<Mat> ldlt(h);
        out.min_eigenvalue = ldlt.vectorD().real().minCoeff();
    }
    const double tol = kIndefiniteTolerance * out.matrix_scale;
    if (out.min_eigenvalue > tol)
        out.verdict = Verdict::PositiveDefinite;
    else if (out.min_eigenvalue < -tol)
        out.verdict = Verdict::Indefinite;
    else
        out.verdict = Verdict::PositiveSemidefinite;
    return out;
}

bool solvable(const PickProblem& p)
{
    const Mat m = pick_from_kernel(p.gram(), p.targets());
    return psd_check(m.allFinite() ? m : normalized_pick_matrix(p)).verdict != Verdict::Indefinite;
}

NodeSet node_set(const std::vector<BallPoint>& points)
{
    auto pts = std::make_shared<const std::vector<BallPoint>>(points);
    for (const auto& p : *pts)
        if (!p.is_interior()) throw std::invalid_argument("extractor: nodes must be interior");
    NodeSet s;
    s.size = pts->size();
    s.normalized_kernel = [pts](std::size_t i, std::size_t j) {
        const auto& a = (*pts)[i];
        const auto& b = (*pts)[j];
        const double sa = 1.0 - a.coords().squaredNorm(), sb = 1.0 - b.coords().squaredNorm();
        return cd(std::sqrt(sa * sb)) / (1.0 - geometry::inner(a.coords(), b.coords()));
    };
    s.norm = [pts](std::size_t i) { return (*pts)[i].norm(); };
    return s;
}

NodeSet node_set(const std::vector<DiscPoint>& points)
{
    auto pts = std::make_shared<const std::vector<DiscPoint>>(points);
    NodeSet s;
    s.size = pts->size();
    s.normalized_kernel = [pts](std::size_t i, std::size_t j) {
        const auto& a = (*pts)[i];
        const auto& b = (*pts)[j];
        const auto [mant, scale] = geometry::one_minus_prod(a, b);
        const double half = 0.5 * (a.log_one_minus_modulus_sq() + b.log_one_minus_modulus_sq());
        return std::exp(half - scale) / mant;
    };
    s.norm = [pts](std::size_t i) { return std::abs((*pts)[i].value()); };
    return s;
}

ExtractionResult extract_interpolating_subsequence(const NodeSet& nodes, double r, std::size_t k_max,
                                                   const ExtractorOptions& options)
{
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("extractor: r must lie in (0, 1)");
    if (k_max < 1 || k_max > 50) throw std::invalid_argument("extractor: k_max must lie in 1..50");
    if (nodes.size == 0) throw std::invalid_argument("extractor: empty point list");
    if (!(nodes.norm(nodes.size - 1) > 0.9))
        throw std::invalid_argument("extractor: final point norm must exceed 0.9 (points must approach the sphere)");

    CounterRng rng(options.seed);
    const double grow = 1.0 + r * r;

    const auto kernel_block = [&](const std::vector<std::size_t>& idx) {
        const auto n = static_cast<Eigen::Index>(idx.size());
        Mat k(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) k(i, j) = nodes.normalized_kernel(idx[std::size_t(i)], idx[std::size_t(j)]);
        return k;
    };

    // Smallest eigenvalue of the normalized A_k(w) over a fresh target sample.
    const auto verify = [&](const Mat& kernel) {
        const auto sample =
            target_sample(std::size_t(kernel.rows()), r, options.corner_cap, options.verify_draws, rng);
        double worst = kInf;
        for (const auto& w : sample) worst = std::min(worst, min_eigenvalue(pick_from_kernel(kernel, w)));
        return worst;
    };

    ExtractionResult result;
    result.indices.push_back(0);
    {
        ExtractionStep step;
        step.k = 1;
        step.index = 0;
        step.point_norm = nodes.norm(0);
        step.min_eigenvalue = verify(kernel_block(result.indices));
        step.rule = "base";
        result.steps.push_back(step);
    }

    std::size_t cursor = 1;
    while (result.indices.size() < k_max) {
        const std::size_t k = result.indices.size() + 1;
        const Mat base = kernel_block(result.indices);

        const auto sample = target_sample(k - 1, r, options.corner_cap, options.random_draws, rng);
        double log_delta = kInf;
        for (const auto& w : sample) log_delta = std::min(log_delta, log_det_pd(pick_from_kernel(base, w)));

        // Hadamard row bounds of A_{k-1}(w), uniform in |w_i| <= r.
        std::vector<double> log_rho(k - 1);
        double log_rho_total = 0.0;
        for (std::size_t l = 0; l + 1 < k; ++l) {
            log_rho[l] = std::log(grow * base.row(static_cast<Eigen::Index>(l)).norm());
            log_rho_total += log_rho[l];
        }

        bool accepted = false;
        for (std::size_t cand = cursor; cand < nodes.size && std::isfinite(log_delta); ++cand) {
            std::vector<double> log_b(k - 1), log_cof(k - 1);
            for (std::size_t i = 0; i + 1 < k; ++i) {
                log_b[i] = std::log(grow * std::abs(nodes.normalized_kernel(result.indices[i], cand)));
                log_cof[i] = log_b[i] + log_rho_total - log_rho[i];
            }
            const double log_remainder = log_sum_exp(log_b) + log_sum_exp(log_cof);
            const double log_leading = std::log(1.0 - r * r) + log_delta;
            if (!(log_leading > log_remainder)) continue;

            auto trial = result.indices;
            trial.push_back(cand);
            const Mat kernel = kernel_block(trial);
            const double worst = verify(kernel);
            if (!(worst > kIndefiniteTolerance * max_abs(kernel))) continue;

            ExtractionStep step;
            step.k = k;
            step.index = cand;
            step.point_norm = nodes.norm(cand);
            step.min_eigenvalue = worst;
            step.rule = "dominance";
            step.log_leading = log_leading;
            step.log_remainder = log_remainder;
            result.steps.push_back(step);
            result.indices = std::move(trial);
            cursor = cand + 1;
            accepted = true;
            break;
        }
        if (!accepted)
            throw ExtractionExhausted("extractor: point list exhausted after " + std::to_string(result.indices.size()) +
                                      " of " + std::to_string(k_max) +
                                      " indices; the norms do not approach 1 fast enough for this truncation");
    }
    return result;
}

ExtractionResult extract_interpolating_subsequence(const std::vector<BallPoint>& points, double r, std::size_t k_max,
                                                   const ExtractorOptions& options)
{
    return extract_interpolating_subsequence(node_set(points), r, k_max, options);
}

ExtractionResult extract_interpolating_subsequence(const std::vector<DiscPoint>& points, double r, std::size_t k_max,
                                                   const ExtractorOptions& options)
{
    return extract_interpolating_subsequence(node_set(points), r, k_max, options);
}

CrossingResult crossing_determinant(double r, double C, double x)
{
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("crossing_determinant: r must lie in (0, 1)");
    if (!(C > 1.0)) throw std::invalid_argument("crossing_determinant: C must exceed 1");
    if (!(x > 0.0 && x < 0.1)) throw std::invalid_argument("crossing_determinant: x must lie in (0, 0.1)");

    const auto f = geometry::crossing_map(r);
    CrossingResult out;
    out.s = geometry::crossing_parameter(f);
    const double z1 = 1.0 - x, z2 = -1.0 + out.s * x;
    if (!(z2 < 0.0 && z2 > -1.0)) throw std::invalid_argument("crossing_determinant: x too large for this r");
    const auto f1 = f(z1), f2 = f(z2);

    const auto p = PickProblem::drury_arveson(std::vector<BallPoint>{f1, f2}, std::vector<cd>{z1 / C, z2 / C});
    const Mat a = pick_matrix(p);
    out.det = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();

    const double d1 = 1.0 - f1.coords().squaredNorm();
    const double d2 = 1.0 - f2.coords().squaredNorm();
    const double cross = std::norm(1.0 - geometry::inner(f2.coords(), f1.coords()));
    const double C2 = C * C;
    const double sx = 1.0 - out.s * x;
    out.lhs = std::pow(C2 + z1 * sx, 2) * d1 * d2;
    out.rhs = (C2 - z1 * z1) * (C2 - sx * sx) * cross;
    out.kernel_ratio = d1 * d2 / cross;
    return out;
}

}  // namespace npdisc::pick
