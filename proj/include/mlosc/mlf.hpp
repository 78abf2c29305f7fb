#ifndef MLOSC_MLF_HPP
#define MLOSC_MLF_HPP

#include <complex>
#include <vector>

#include "mlosc/errors.hpp"

namespace mlosc {

using Complex = std::complex<double>;

/// Parameter pair (alpha, beta) of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
};

struct SeriesResult {
    Complex value;
    double error_bound; // rigorous bound on the truncation error (modulus)
    int terms_used;
};

/// Truncated power series with an a-posteriori tail bound. The summation
/// stops once the ratio of successive absolute terms has dropped below 1/2
/// and the geometric tail estimate is negligible against the partial sum.
/// Throws NonConvergedError if the ratio never falls below 1/2 within
/// max_terms, and DomainError for alpha <= 0 or beta <= 0.
SeriesResult ml_series_truncated(const MLParams& params, Complex z, int max_terms);

/// E_{alpha,beta}(z) for 0 < alpha <= 2, beta > 0. Direct series where the
/// floating-point cancellation stays harmless; parabolic-contour Laplace
/// inversion (with explicit residues for the branch-point free poles of the
/// integrand) in the decay sector pi*alpha/2 <= |arg z| <= pi otherwise.
/// Large arguments in the open growth sector |arg z| < pi*alpha/2 raise
/// UnsupportedRegionError.
Complex ml_eval(const MLParams& params, Complex z);

/// E_{alpha,beta}(i*lambda*f) evaluated through the splitting
///   E_{alpha,beta}(i y) = E_{2a,b}(-y^2) + i y E_{2a,b+a}(-y^2),
/// which keeps both inner arguments on the negative real axis. Requires
/// 0 < alpha <= 1. This is the evaluation path used by the integral engine.
Complex ml_eval_imag(const MLParams& params, double lambda, double f_val);

/// Probe describing an empirical estimate of the sector-bound constant:
/// rays {mu, (mu+pi)/2, pi} (their conjugates give the same moduli) times a
/// radius grid. Requires pi*alpha/2 < mu < min(pi, pi*alpha), hence alpha < 2.
struct SectorProbe {
    MLParams params;
    double mu = 0.0;
    std::vector<double> radius_grid;
};

/// max over the probe of (1+|z|)*|E_{alpha,beta}(z)|. An empirical lower
/// estimate of the constant C in the sector bound C/(1+|z|); used for
/// bound-ratio reporting only, never as a proof.
double envelope_constant(const SectorProbe& probe);

namespace detail {

/// E_{alpha,beta}(-x) for x >= 0 and 0 < alpha <= 2 (series, asymptotic
/// expansion with the conjugate-pole oscillatory term, or contour, chosen
/// per argument). This is the hot path of the integral engine.
double ml_neg_axis(double alpha, double beta, double x);

/// Parabolic-contour Laplace inversion of s^{alpha-beta}/(s^alpha - z);
/// valid for |arg z| >= pi*alpha/2. Exposed for tests.
Complex ml_contour(double alpha, double beta, Complex z);

/// Asymptotic expansion of E_{alpha,beta}(-x); returns false when the
/// expansion cannot reach ~1e-13 relative accuracy at this x.
bool ml_asymptotic_neg(double alpha, double beta, double x, double& out);

double log_gamma(double x); // x > 0
double rgamma(double x);    // 1/Gamma(x), any real x (reflection for x <= 0)

} // namespace detail

} // namespace mlosc

#endif
