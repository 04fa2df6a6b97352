#pragma once

#include "npdisc/kernels.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace npdisc::geometry {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;

/// Raised when a quantity requested at a boundary point is infinite, e.g. the
/// derivative of a tangential embedding.
class NonFiniteValue : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Point of C^d or a truncation of l^2. `tail_norm` bounds the norm of the
/// discarded coordinates (zero for finite-dimensional points).
class BallPoint {
public:
    BallPoint() = default;
    /// Throws std::invalid_argument if the norm exceeds 1 by more than 1e-12.
    explicit BallPoint(Vec coords, double tail_norm = 0.0);
    static BallPoint scalar(cd z);
    /// Truncation of a point whose full norm is 1.
    static BallPoint on_sphere(Vec coords, double tail_norm = 0.0);

    const Vec& coords() const { return coords_; }
    Eigen::Index dim() const { return coords_.size(); }
    double norm() const { return norm_; }
    double tail_norm() const { return tail_; }
    bool is_boundary() const { return boundary_; }
    bool is_interior() const { return !boundary_; }

private:
    Vec coords_;
    double norm_ = 0.0;
    double tail_ = 0.0;
    bool boundary_ = false;
};

/// <z, w> = sum z_i conj(w_i).
cd inner(const Vec& z, const Vec& w);

/// Disc point stored as anchor * (1 - gap), |anchor| = 1, with the gap kept
/// as gap_unit * exp(log_scale). Points like 1 - exp(-n^2) round to 1 in
/// plain doubles; this form keeps their distances exact.
class DiscPoint {
public:
    DiscPoint() = default;
    static DiscPoint from_value(cd z);
    static DiscPoint from_gap(cd anchor, cd gap);
    /// anchor * (1 - exp(log_gap)).
    static DiscPoint from_log_gap(cd anchor, double log_gap);

    cd anchor() const { return anchor_; }
    /// The gap; may underflow to 0 for extreme points.
    cd gap() const;
    double log_gap_modulus() const { return std::log(std::abs(gap_unit_)) + log_scale_; }
    cd value() const { return anchor_ * (1.0 - gap()); }
    /// 1 - |z|^2 = 2 Re(gap) - |gap|^2.
    double one_minus_modulus_sq() const;
    double one_minus_modulus() const;
    double log_one_minus_modulus_sq() const;

    friend double pseudo_dist(const DiscPoint& z, const DiscPoint& w);
    /// 1 - z conj(w) as mantissa * exp(log_scale); exact cancellation-free
    /// form when both points share an anchor.
    friend std::pair<cd, double> one_minus_prod(const DiscPoint& z, const DiscPoint& w);

private:
    cd anchor_ = 1.0;
    cd gap_unit_ = 1.0;
    double log_scale_ = 0.0;
};

/// d(z, w)^2 = 1 - (1 - |w|^2)(1 - |z|^2) / |1 - <w, z>|^2, evaluated in a
/// cancellation-free form. Rejects boundary points.
double pseudo_dist(const BallPoint& z, const BallPoint& w);
double pseudo_dist(cd z, cd w);
double pseudo_dist(const DiscPoint& z, const DiscPoint& w);
std::pair<cd, double> one_minus_prod(const DiscPoint& z, const DiscPoint& w);

struct DistanceInterval {
    double lo = 0.0;
    double value = 0.0;
    double hi = 0.0;
};

/// Distance of the stored coordinates plus the range compatible with the
/// two tail-norm bounds.
DistanceInterval pseudo_dist_interval(const BallPoint& z, const BallPoint& w);

/// phi_w(z) = (w - P_w z - sqrt(1 - |w|^2) P_w^perp z) / (1 - <z, w>).
BallPoint mobius_auto(const BallPoint& w, const BallPoint& z);

/// A map from the closed disc into the closed ball with an optional analytic
/// derivative; without one, derivatives are taken numerically.
class GeneralCurve {
public:
    using PointFn = std::function<BallPoint(cd)>;
    using DerivFn = std::function<Vec(cd)>;

    GeneralCurve(PointFn eval, DerivFn deriv, std::string label);
    GeneralCurve(PointFn eval, std::string label);

    BallPoint operator()(cd z) const { return eval_(z); }
    Vec derivative(cd z) const;
    /// Central differences with step 1e-6 and one Richardson step; radial
    /// one-sided stencil when the central stencil would leave the disc.
    Vec numeric_derivative(cd z) const;
    bool has_analytic_derivative() const { return static_cast<bool>(deriv_); }
    const std::string& label() const { return label_; }

private:
    PointFn eval_;
    DerivFn deriv_;
    std::string label_;
};

struct EmbeddedValue {
    BallPoint point;
    Vec deriv;  // empty when not requested
};

/// f(z) = (b_1 z, b_2 z^2, ...) truncated at N.
class EmbeddedDisc {
public:
    enum class Regime { Open, Compact };

    /// b_n = sqrt(c_n) from the handle's moduli; radial sums use the
    /// handle's closed form where it has one.
    static EmbeddedDisc from_kernel(const kernels::KernelHandle& k);
    /// Explicit amplitudes; requires b_1 != 0 and sum |b_n|^2 <= 1.
    static EmbeddedDisc from_amplitudes(std::vector<cd> b, std::string label = "custom");

    std::size_t truncation() const { return b_.size(); }
    const std::vector<cd>& amplitudes() const { return b_; }
    Regime regime() const { return regime_; }
    const std::string& label() const { return label_; }

    /// sum |b_n|^2 of the full sequence (closed form where known).
    double mass() const { return mass_; }
    /// sum n |b_n|^2, +inf when the doubling test flags divergence.
    double first_moment() const { return first_moment_; }

    /// Radial kernel A(y) = 1 / (1 - sum |b_n|^2 y^n), 0 <= y <= 1.
    double radial_kernel(double y) const;

    /// Point and (optionally) derivative. |z| <= 1 in either regime; at
    /// |z| = 1 the derivative is refused with NonFiniteValue when the first
    /// moment diverges.
    EmbeddedValue eval(cd z, bool with_derivative = true) const;

    GeneralCurve as_curve() const;

private:
    EmbeddedDisc() = default;
    std::vector<cd> b_;
    std::optional<kernels::KernelHandle> kernel_;
    Regime regime_ = Regime::Open;
    double mass_ = 1.0;
    double first_moment_ = 0.0;
    std::string label_;
};

/// f(z) = (z^2, b(z)^2) / sqrt(2) with b(z) = (z - r)/(1 - r z).
GeneralCurve crossing_map(double r);

/// <f'(1), f(1)> / (-<f'(-1), f(-1)>), real parts.
double crossing_parameter(const GeneralCurve& f);

/// Re <f(e^{it}), f'(e^{it}) e^{it}>. Throws NonFiniteValue if not finite.
double transversality_pairing(const GeneralCurve& f, double t);
/// sum n |b_n|^2 (independent of t); throws NonFiniteValue when divergent.
double transversality_pairing(const EmbeddedDisc& f, double t);

inline constexpr std::size_t kSweepGrid = 2048;

/// Pairing on the uniform grid t_k = 2 pi k / grid.
std::vector<std::pair<double, double>> transversality_sweep(const GeneralCurve& f,
                                                            std::size_t grid = kSweepGrid);

struct TangentialRatios {
    double ratio1 = 0.0;  // (1 - |f(x e^{it})|) / |f(e^{it}) - f(x e^{it})|
    double ratio2 = 0.0;  // Re <f(e^{it}) - f(x e^{it}), f(e^{it})> / (1 - x)
};

TangentialRatios tangential_ratio(const GeneralCurve& f, double x, double t);
/// Same ratios from the radial kernel identities
///   1 - |f(x)|^2 = 1/A(x^2),  |f(1) - f(x)|^2 = 2/A(x) - 1/A(1) - 1/A(x^2),
///   Re <f(1) - f(x), f(1)> = 1/A(x) - 1/A(1),
/// which stay accurate far past the coefficient truncation.
TangentialRatios tangential_ratio(const EmbeddedDisc& f, double x, double t);

struct DistortionSample {
    double d_source = 0.0;
    double d_image = 0.0;
};

struct DistortionProfile {
    std::vector<DistortionSample> samples;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

DistortionProfile distortion_profile(const GeneralCurve& F, const std::vector<std::pair<cd, cd>>& pairs);

}  // namespace npdisc::geometry
