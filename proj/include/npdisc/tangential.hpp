#pragma once

#include "npdisc/csv.hpp"
#include "npdisc/geometry.hpp"

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <vector>

namespace npdisc::tangential {

using geometry::cd;

class ChainSingularity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// z -> (z+i)/(iz+1) -> sqrt -> (w-1)/(w+1) = g -> log (cut along the
/// negative imaginary axis) -> (w - pi i)/(w + 2 pi i) = f, and the clipped
/// map f1(z) = f(r z + 1 - r).
struct ConformalChain {
    double clip_radius = 0.75;

    /// Throws std::invalid_argument unless 2/3 < r < 1.
    void validate() const;
};

enum class Stage { Mobius1, SquareRoot, HalfDisc, Log, Final, Clipped };

/// Composition through `stage`. |z| <= 1 (a 1e-4 slack admits derivative
/// stencils at the circle). Throws ChainSingularity within 1e-8 of the pole
/// at z = i or at log(0); the Final stage returns 1 at g = 0.
cd chain_eval(const ConformalChain& c, cd z, Stage stage);

/// Central differences with one Richardson step.
cd chain_derivative(const ConformalChain& c, cd z, Stage stage);

/// 1 - |f1(z)|^2 = 3 pi (pi + 2 Im L) / |L + 2 pi i|^2 with L = log g(rho(z)),
/// free of cancellation near the circle.
double clipped_defect(const ConformalChain& c, cd z);

/// u1(t) = (1/2) log(1 - |f1(e^{it})|^2) for t != 0 (mod 2 pi).
double boundary_u1(const ConformalChain& c, double t);

inline constexpr std::size_t kNoSingularIndex = std::numeric_limits<std::size_t>::max();

/// Samples at t_k = 2 pi k / m, k = 0..m-1.
struct BoundarySampling {
    std::size_t m = 0;
    std::vector<double> values;
    std::size_t singular_index = kNoSingularIndex;

    double angle(std::size_t k) const;
};

/// u1 on the grid. The sample at t = 0, where u1 = -inf, is the cell
/// average of the model alpha_+- - log log(1/|t|) with alpha_+ and alpha_-
/// fitted from the two neighbouring samples. m must be a power of two
/// >= 256.
BoundarySampling boundary_modulus_defect(const ConformalChain& c, std::size_t m = 4096);

/// Discrete conjugate function: multiplier -i sign(k) on the DFT, with the
/// mean and the Nyquist coefficient sent to 0.
BoundarySampling harmonic_conjugate(const BoundarySampling& b);

/// F = (f1, f2) with f2 = exp(u1 + i u1~).
class TangentialEmbedding {
public:
    const ConformalChain& chain() const { return chain_; }
    const BoundarySampling& u1() const { return u1_; }
    const BoundarySampling& u1_tilde() const { return u1_tilde_; }
    std::size_t grid_size() const { return u1_.m; }

    /// exp(u1_k + i u1~_k) on the grid.
    std::vector<cd> f2_grid() const;

    cd f1(cd z) const;
    /// 1 - |f1(z)|^2.
    double f1_defect(cd z) const;

    /// log f2(z) for |z| < 1: the Schwarz integral of the exact u1,
    ///   (1/2 pi) int (e^{it} + z)/(e^{it} - z) u1(t) dt,
    /// by composite 20-point Gauss on segments refined geometrically toward
    /// arg z and toward the singular angle.
    cd log_f2(cd z) const;

    /// Interior via log_f2; on the circle exp(u1(t) + i u1~(t)) with u1~
    /// trigonometrically interpolated from the grid; f2(1) = 0.
    cd f2(cd z) const;

    /// exp of the truncated analytic Fourier series of u1 + i u1~ (grid
    /// coefficients); only a cross-check, it cannot resolve points within a
    /// few grid cells of the circle.
    cd f2_fourier(cd z) const;

    /// 1 - |F(z)|^2 computed as (1 - |f1|^2) - |f2|^2, |z| < 1.
    double ball_defect(cd z) const;

    geometry::BallPoint operator()(cd z) const;
    geometry::GeneralCurve curve() const;

    /// max over grid points other than the singular one of
    /// | |f1|^2 + |f2|^2 - 1 |.
    double sphere_defect() const;

    /// `t,u1,u1_tilde,|f1|,|f2|,sphere_defect`.
    csv::Table boundary_table() const;

private:
    friend TangentialEmbedding assemble_embedding(const ConformalChain& c, std::size_t m);
    ConformalChain chain_;
    BoundarySampling u1_;
    BoundarySampling u1_tilde_;
    /// Analytic coefficients of u1 + i u1~: c_0 = mean, c_k = 2 u1^_k.
    std::shared_ptr<const std::vector<cd>> analytic_;
};

TangentialEmbedding assemble_embedding(const ConformalChain& c, std::size_t m = 4096);

struct TangencyRow {
    int j = 0;
    double x = 0.0;
    double ratio1 = 0.0;
    double ratio2 = 0.0;
    double re_gap = 0.0;      // Re <F(1) - F(x), F(1)>
    double inv_log_sq = 0.0;  // 1 / log^2(1 - x)
};

struct TangencyReport {
    std::vector<TangencyRow> rows;
    bool ratio1_decreasing = false;
    bool ratio2_increasing = false;
    /// Least-squares c1 in re_gap ~ c1 / log^2(1 - x) over the fit window.
    double c1 = 0.0;
    /// Regression of log re_gap on log(1 / log^2(1 - x)).
    double fit_slope = 0.0;
    double fit_correlation = 0.0;
    int fit_j_min = 0;
    int fit_j_max = 0;
};

/// Both tangential ratios along x = 1 - 2^-j.
TangencyReport tangency_report(const TangentialEmbedding& F, int j_min = 4, int j_max = 14, int fit_j_min = 6,
                               int fit_j_max = 14);

csv::Table tangency_table(const TangencyReport& r);

}  // namespace npdisc::tangential
