#include "mlosc/mlf.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mlosc {

namespace detail {

double log_gamma(double x)
{
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

// sin(pi*x) with argument reduction done on x itself, so large |x| and
// near-integer x stay accurate.
static double sin_pi(double x)
{
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r < 0.5) return std::sin(M_PI * r);
    if (r < 1.5) return std::sin(M_PI * (1.0 - r));
    return std::sin(M_PI * (r - 2.0));
}

double rgamma(double x)
{
    if (x > 0)
        return std::exp(-log_gamma(x));
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x)/pi
    double s = sin_pi(x);
    if (s == 0.0) return 0.0; // non-positive integer
    double lg = log_gamma(1.0 - x);
    return std::exp(lg) * s / M_PI;
}

namespace {

constexpr double kSeriesLossNats = 11.5;   // tolerated log of max-term / result
constexpr double kDirectSeriesRadius = 5.0;
constexpr int kSeriesMaxTermsInternal = 60000;

struct SeriesOut {
    Complex value;
    double bound;
    int used;
    bool converged;
};

// Direct series in log space: |z|^k/Gamma(ak+b) = exp(k log|z| - lgamma(ak+b)).
// The term ratio |t_{k+1}|/|t_k| is strictly decreasing (digamma is
// increasing), so once it drops below 1/2 the geometric tail bound is valid.
SeriesOut series_sum(double alpha, double beta, Complex z, int max_terms)
{
    SeriesOut out{Complex(0.0, 0.0), 0.0, 0, false};
    const double az = std::abs(z);
    if (az == 0.0) {
        out.value = Complex(rgamma(beta), 0.0);
        out.bound = 0.0;
        out.used = 1;
        out.converged = true;
        return out;
    }
    const double logaz = std::log(az);
    const double argz = std::arg(z);
    const bool real_axis = (z.imag() == 0.0);
    Complex sum(0.0, 0.0);
    double abs_accum = 0.0;
    double prev_abs = -1.0;
    double ratio = std::numeric_limits<double>::infinity();
    int k = 0;
    for (; k < max_terms; ++k) {
        const double logt = k * logaz - log_gamma(alpha * k + beta);
        const double at = std::exp(logt);
        if (real_axis) // keep real arguments exactly real
            sum += Complex((z.real() < 0.0 && (k & 1)) ? -at : at, 0.0);
        else
            sum += std::polar(at, k * argz);
        abs_accum += at;
        if (prev_abs > 0.0) ratio = at / prev_abs;
        prev_abs = at;
        if (ratio < 0.5) {
            // next term <= ratio * at, and subsequent ratios only shrink
            const double tail = at * ratio / (1.0 - ratio);
            if (tail <= 1e-18 * (std::abs(sum) + at) || tail == 0.0) {
                out.bound = tail;
                out.used = k + 1;
                out.converged = true;
                break;
            }
        }
    }
    if (!out.converged && ratio < 0.5) {
        out.bound = prev_abs * ratio / (1.0 - ratio);
        out.used = k;
        out.converged = true;
    }
    // floating-point allowance on top of the analytic tail bound
    out.bound += 8.0 * std::numeric_limits<double>::epsilon() * abs_accum;
    out.value = sum;
    return out;
}

// Estimated precision loss (nats) of the direct series: the peak term is
// ~exp(|z|^{1/alpha}) while the result can be as small as ~1/(1+|z|) in the
// decay sector or as large as exp(Re z^{1/alpha}) in the growth sector.
double series_loss_nats(double alpha, double beta, Complex z)
{
    (void)beta;
    const double az = std::abs(z);
    if (az == 0.0) return 0.0;
    const double peak = std::pow(az, 1.0 / alpha);
    const double phi = std::min(std::abs(std::arg(z)) / alpha, M_PI);
    const double exp_part = peak * std::cos(phi);
    const double alg_part = -std::log1p(az);
    return peak - std::max(exp_part, alg_part);
}

bool series_terms_practical(double alpha, Complex z)
{
    const double az = std::abs(z);
    if (az <= 0.25) return true;
    const double need = std::pow(2.0 * az, 1.0 / alpha) / alpha + 64.0;
    return need < kSeriesMaxTermsInternal;
}

struct Pole {
    Complex s;
    bool on_cut;
};

// Principal-branch roots of s^alpha = z (the poles of the inversion
// integrand). At most two for alpha <= 2.
std::vector<Pole> branch_poles(double alpha, Complex z)
{
    std::vector<Pole> poles;
    const double r = std::pow(std::abs(z), 1.0 / alpha);
    const double theta = std::arg(z);
    for (int j = -2; j <= 2; ++j) {
        const double psi = (theta + 2.0 * M_PI * j) / alpha;
        if (std::abs(psi) <= M_PI + 1e-12) {
            Pole p;
            p.s = std::polar(r, psi);
            p.on_cut = std::abs(psi) > M_PI - 1e-8;
            poles.push_back(p);
        }
    }
    return poles;
}

// Laplace inversion on the parabola s(u) = mu (1+iu)^2 with the trapezoid
// rule. Poles at angle < pi are pushed outside the contour (mu small enough)
// and added back as residues e^{s} s^{1-beta}/alpha; poles on the negative
// real axis stay inside and are captured by the quadrature, whose u-plane
// images sit at height 1, above the integration strip |Im u| <= d = 0.8.
Complex contour_eval(double alpha, double beta, Complex z, double target_nats = 38.0)
{
    const double d = 0.8;
    double mu = 4.0;
    const auto poles = branch_poles(alpha, z);
    for (const auto& p : poles) {
        if (p.on_cut) continue;
        const double r = std::abs(p.s);
        const double c = std::cos(0.5 * std::arg(p.s));
        const double cap = 0.9 * r * c * c / ((1.0 + d) * (1.0 + d));
        mu = std::min(mu, cap);
    }
    mu = std::clamp(mu, 1e-4, 4.0);

    const double h = 2.0 * M_PI * d / (target_nats + mu * (1.0 + d) * (1.0 + d));
    const double umax = std::sqrt(1.0 + target_nats / mu);
    const int n_half = static_cast<int>(std::ceil(umax / h));

    const bool zreal = (z.imag() == 0.0);
    auto integrand = [&](double u) -> Complex {
        const Complex w(1.0, u);
        const Complex s = mu * w * w;
        const Complex logs = std::log(s);
        const Complex num = std::exp(s + (alpha - beta) * logs) * w;
        const Complex den = std::exp(alpha * logs) - z;
        return num / den;
    };

    Complex acc = integrand(0.0);
    if (zreal) {
        // conjugate symmetry halves the work
        Complex side(0.0, 0.0);
        for (int k = 1; k <= n_half; ++k) side += integrand(k * h);
        acc += 2.0 * Complex(side.real(), 0.0);
    } else {
        for (int k = 1; k <= n_half; ++k) acc += integrand(k * h) + integrand(-k * h);
    }
    Complex result = (mu * h / M_PI) * acc;

    for (const auto& p : poles) {
        if (p.on_cut) continue;
        result += std::exp(p.s + (1.0 - beta) * std::log(p.s)) / alpha;
    }
    if (zreal) result = Complex(result.real(), 0.0);
    return result;
}

} // namespace

bool ml_asymptotic_neg(double alpha, double beta, double x, double& out)
{
    if (x < 4.0) return false;
    // algebraic part: -sum_{k>=1} (-x)^{-k} / Gamma(beta - alpha k)
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double smallest_kept = std::numeric_limits<double>::infinity();
    bool ok = false;
    bool diverged = false;
    bool any_term = false;
    const double logx = std::log(x);
    for (int k = 1; k <= 120; ++k) {
        const double mag = std::exp(-k * logx);
        if (mag < 1e-320) {
            ok = true;
            break;
        }
        const double w = beta - alpha * k;
        if (w < 0.5 && std::abs(w - std::round(w)) < 1e-12)
            continue; // Gamma pole (up to rounding of w): term vanishes
        const double g = rgamma(w);
        if (g == 0.0) continue;
        const double term = -((k % 2 == 1) ? -mag : mag) * g;
        const double at = std::abs(term);
        if (at > prev) {
            diverged = true;
            break;
        }
        sum += term;
        any_term = true;
        prev = at;
        smallest_kept = at;
        if (at <= 1e-17 * (std::abs(sum) + 1e-300)) {
            ok = true;
            break;
        }
    }
    if (!ok && !diverged && !any_term)
        ok = true; // every coefficient sits on a Gamma pole: algebraic part is 0
    // oscillatory part from the conjugate pole pair s0 = x^{1/alpha} e^{i pi/alpha}
    double osc = 0.0;
    if (alpha >= 1.0) {
        const double r = std::pow(x, 1.0 / alpha);
        if (alpha > 1.0 + 1e-12) {
            const Complex s0 = std::polar(r, M_PI / alpha);
            const Complex c = std::exp(s0 + (1.0 - beta) * std::log(s0));
            osc = 2.0 / alpha * c.real();
        } else {
            // single pole on the cut: principal-value limit
            osc = std::exp(-r) * std::pow(r, 1.0 - beta) * std::cos(M_PI * (1.0 - beta));
        }
    }
    const double value = osc + sum;
    if (!ok) {
        // accept a truncated-at-smallest-term expansion only when the
        // smallest term is negligible against the result
        if (!(smallest_kept <= 5e-14 * std::abs(value))) return false;
    }
    out = value;
    return true;
}

// Reciprocal-Gamma tables per (alpha, beta), cached across kernel calls. The
// integral engine evaluates millions of points with the same two parameter
// pairs, so per-term lgamma calls would dominate the runtime.
struct NegAxisTables {
    double alpha = -1.0, beta = -1.0;
    std::vector<double> series_rg; // 1/Gamma(alpha k + beta), k = 0,1,...
    std::vector<double> asym_rg;   // 1/Gamma(beta - alpha k), k = 1..120 (0 at poles)
};

const NegAxisTables& neg_axis_tables(double alpha, double beta)
{
    static thread_local NegAxisTables slots[4];
    static thread_local int next = 0;
    for (const auto& s : slots)
        if (s.alpha == alpha && s.beta == beta) return s;
    NegAxisTables& s = slots[next];
    next = (next + 1) & 3;
    s.alpha = alpha;
    s.beta = beta;
    s.series_rg.clear();
    s.asym_rg.clear();
    for (int k = 0; alpha * k + beta <= 185.0 || k < 8; ++k)
        s.series_rg.push_back(rgamma(alpha * k + beta));
    for (int k = 1; k <= 120; ++k) {
        const double w = beta - alpha * k;
        const bool pole = w < 0.5 && std::abs(w - std::round(w)) < 1e-12;
        s.asym_rg.push_back(pole ? 0.0 : rgamma(w));
    }
    return s;
}

// series via the cached table; valid in the cancellation-safe regime where
// the term ratio reaches 1/2 long before x^k can overflow
bool series_neg_cached(const NegAxisTables& t, double x, double& out)
{
    double xk = 1.0;
    double sum = t.series_rg[0];
    double prev = std::abs(sum);
    for (size_t k = 1; k < t.series_rg.size(); ++k) {
        xk *= -x;
        if (std::abs(xk) > 1e250) return false;
        const double term = xk * t.series_rg[k];
        sum += term;
        const double at = std::abs(term);
        if (at < 0.5 * prev && at <= 1e-17 * (std::abs(sum) + 1e-300)) {
            out = sum;
            return true;
        }
        if (at > 0.0) prev = at;
    }
    return false;
}

bool asym_neg_cached(const NegAxisTables& t, double alpha, double beta, double x, double& out)
{
    if (x < 4.0) return false;
    const double invx = 1.0 / x;
    double mag = 1.0;
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    double smallest = std::numeric_limits<double>::infinity();
    bool ok = false, diverged = false, any = false;
    for (size_t k = 1; k <= t.asym_rg.size(); ++k) {
        mag *= invx;
        if (mag < 1e-320) {
            ok = true;
            break;
        }
        const double g = t.asym_rg[k - 1];
        if (g == 0.0) continue;
        const double term = -((k % 2 == 1) ? -mag : mag) * g;
        const double at = std::abs(term);
        if (at > prev) {
            diverged = true;
            break;
        }
        sum += term;
        any = true;
        prev = at;
        smallest = at;
        if (at <= 1e-17 * (std::abs(sum) + 1e-300)) {
            ok = true;
            break;
        }
    }
    if (!ok && !diverged && !any) ok = true;
    double osc = 0.0;
    if (alpha >= 1.0) {
        const double r = std::pow(x, 1.0 / alpha);
        if (alpha > 1.0 + 1e-12) {
            const Complex s0 = std::polar(r, M_PI / alpha);
            osc = 2.0 / alpha * std::exp(s0 + (1.0 - beta) * std::log(s0)).real();
        } else {
            osc = std::exp(-r) * std::pow(r, 1.0 - beta) * std::cos(M_PI * (1.0 - beta));
        }
    }
    const double value = osc + sum;
    if (!ok && !(smallest <= 5e-14 * std::abs(value))) return false;
    out = value;
    return true;
}

double ml_neg_axis(double alpha, double beta, double x)
{
    if (x == 0.0) return rgamma(beta);
    if (alpha == 2.0) {
        const double w = std::sqrt(x);
        if (beta == 1.0) return std::cos(w);
        if (beta == 2.0) return std::sin(w) / w;
    }
    if (alpha == 1.0) {
        if (beta == 1.0) return std::exp(-x);
        if (beta == 2.0) return -std::expm1(-x) / x;
    }
    const NegAxisTables& tables = neg_axis_tables(alpha, beta);
    const double peak = std::pow(x, 1.0 / alpha);
    double v;
    if (peak + std::log1p(x) <= kSeriesLossNats) {
        if (series_neg_cached(tables, x, v)) return v;
        auto s = series_sum(alpha, beta, Complex(-x, 0.0), kSeriesMaxTermsInternal);
        if (s.converged) return s.value.real();
    }
    if (asym_neg_cached(tables, alpha, beta, x, v)) return v;
    // 33 nats (~4e-15) is plenty for the quadrature kernels this path feeds
    return contour_eval(alpha, beta, Complex(-x, 0.0), 33.0).real();
}

Complex ml_contour(double alpha, double beta, Complex z)
{
    return contour_eval(alpha, beta, z);
}

} // namespace detail

namespace {

void check_params(const MLParams& p)
{
    if (!std::isfinite(p.alpha) || !std::isfinite(p.beta))
        throw DomainError("mlf: non-finite parameters");
    if (p.alpha <= 0.0)
        throw DomainError("mlf: alpha must be positive");
    if (p.beta <= 0.0)
        throw DomainError("mlf: beta must be positive");
}

void check_finite(Complex z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("mlf: non-finite argument");
}

} // namespace

SeriesResult ml_series_truncated(const MLParams& params, Complex z, int max_terms)
{
    check_params(params);
    check_finite(z);
    if (max_terms < 1)
        throw DomainError("ml_series_truncated: max_terms must be >= 1");
    auto s = detail::series_sum(params.alpha, params.beta, z, max_terms);
    if (!s.converged)
        throw NonConvergedError("ml_series_truncated: term ratio did not fall below 1/2 "
                                "within the term budget (|z| too large for direct series)");
    if (!std::isfinite(s.value.real()) || !std::isfinite(s.value.imag()))
        throw NonConvergedError("ml_series_truncated: series overflowed at working precision");
    return SeriesResult{s.value, s.bound, s.used};
}

Complex ml_eval(const MLParams& params, Complex z)
{
    check_params(params);
    check_finite(z);
    if (params.alpha > 2.0)
        throw DomainError("ml_eval: alpha must lie in (0, 2]");

    const double a = params.alpha, b = params.beta;
    if (std::abs(z) == 0.0) return Complex(detail::rgamma(b), 0.0);

    const bool flip = z.imag() < 0.0;
    const Complex zc = flip ? std::conj(z) : z;
    const double theta = std::arg(zc); // in [0, pi]

    Complex v;
    const double peak = std::pow(std::abs(zc), 1.0 / a);
    const bool series_ok = detail::series_loss_nats(a, b, zc) <= detail::kSeriesLossNats &&
                           detail::series_terms_practical(a, zc) &&
                           peak <= 650.0 && // keep exp(peak) representable
                           (std::abs(zc) <= detail::kDirectSeriesRadius ||
                            theta >= M_PI * a / 2.0 - 1e-12);
    if (series_ok) {
        auto s = detail::series_sum(a, b, zc, detail::kSeriesMaxTermsInternal);
        if (!s.converged)
            throw NonConvergedError("ml_eval: series did not converge");
        v = s.value;
    } else if (theta >= M_PI * a / 2.0 - 1e-12) {
        if (zc.imag() == 0.0 && zc.real() < 0.0)
            v = Complex(detail::ml_neg_axis(a, b, -zc.real()), 0.0);
        else
            v = detail::ml_contour(a, b, zc);
    } else {
        throw UnsupportedRegionError("ml_eval: large argument in the exponential-growth "
                                     "sector |arg z| < pi*alpha/2");
    }
    return flip ? std::conj(v) : v;
}

Complex ml_eval_imag(const MLParams& params, double lambda, double f_val)
{
    check_params(params);
    if (params.alpha > 1.0)
        throw DomainError("ml_eval_imag: alpha must lie in (0, 1]");
    if (!std::isfinite(lambda) || lambda <= 0.0)
        throw DomainError("ml_eval_imag: lambda must be positive");
    if (!std::isfinite(f_val))
        throw DomainError("ml_eval_imag: non-finite phase value");

    const double y = lambda * f_val;
    if (params.alpha == 1.0 && params.beta == 1.0)
        return Complex(std::cos(y), std::sin(y)); // E_{2,1}(-y^2) + iy E_{2,2}(-y^2)

    const double x = y * y;
    const double re = detail::ml_neg_axis(2.0 * params.alpha, params.beta, x);
    const double im = detail::ml_neg_axis(2.0 * params.alpha, params.beta + params.alpha, x);
    return Complex(re, y * im);
}

double envelope_constant(const SectorProbe& probe)
{
    check_params(probe.params);
    const double a = probe.params.alpha;
    if (a >= 2.0)
        throw DomainError("envelope_constant: sector bound requires alpha < 2");
    if (!(probe.mu > M_PI * a / 2.0 && probe.mu < std::min(M_PI, M_PI * a)))
        throw DomainError("envelope_constant: mu must satisfy pi*alpha/2 < mu < min(pi, pi*alpha)");
    if (probe.radius_grid.empty())
        throw DomainError("envelope_constant: empty radius grid");

    const double rays[3] = {probe.mu, 0.5 * (probe.mu + M_PI), M_PI};
    double c_hat = 0.0;
    for (double r : probe.radius_grid) {
        if (!(std::isfinite(r) && r > 0.0))
            throw DomainError("envelope_constant: radii must be positive");
        for (double th : rays) {
            const Complex z = std::polar(r, th);
            c_hat = std::max(c_hat, (1.0 + r) * std::abs(ml_eval(probe.params, z)));
        }
    }
    return c_hat;
}

} // namespace mlosc
