#ifndef MLOSC_DECAY_HPP
#define MLOSC_DECAY_HPP

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "mlosc/quad.hpp"

namespace mlosc {

/// lambda^{-rho} rates of the three decay estimates:
///   DInf          rho = 1/2 - 1/(2p)
///   D4Plus/Minus  rho = 2/3 - 1/(3p)
///   A2            rho = 1/3 - 1/(3p)
/// with 1/p = 0 at p = infinity. Throws UnsupportedClassError for Zero.
double theoretical_exponent(PhaseClass cls, double p);

struct DecayRow {
    double lambda;
    Complex I;
    double abs_I;
    double bound_ratio; // |I| * lambda^rho / ||psi||_p
    double majorant;    // c_hat * int |psi|/(1+lambda|f|)
    double error_estimate;
    long cells;
    bool budget_exhausted;
};

struct DecayReport {
    PhaseClass phase_class;
    MLParams params;
    double p;
    double q;   // Hoelder conjugate; 1 when p = infinity
    double rho;
    double c_hat;
    double psi_norm;
    double verdict_slack;
    double lambda_min, lambda_max;
    int points_per_decade;
    double quad_tol;
    std::vector<DecayRow> rows;
    double fitted_slope;
    bool pass;
    std::string message;
};

struct DecayScanExtras {
    double quad_tol = 1e-6;
    int threads = 1;
    long cell_budget = 0; // 0 = automatic
    std::optional<double> rho_override;
};

/// lambda-sweep of |I_{alpha,beta}(lambda)| on the canonical phase of `cls`,
/// with the majorant integral computed alongside each point. The verdict
/// passes iff the bound ratios over the last two decades stay within
/// (1 + tol) of their maximum over all earlier decades.
DecayReport decay_scan(PhaseClass cls, const MLParams& params,
                       const AmplitudeSpec& amplitude, double lambda_min,
                       double lambda_max, int points_per_decade, double tol,
                       const DecayScanExtras& extras = {});

/// Recomputes bound ratios and the verdict from the stored moduli with a
/// different exponent (used for p-sensitivity checks). Returns the verdict.
bool reverdict(DecayReport& report, double rho, double slack);

/// The empirical sector constant used by decay certification: probe rays
/// {mu, (mu+pi)/2, pi} at mu = pi*alpha/2 + 0.02*pi, radii geometric in
/// [1e-2, 1e6] at 8 points per decade.
double calibrated_envelope_constant(const MLParams& params);

/// K(q, lambda) = int_0^1 (1 - (1+lambda x^2)^{1-q}) / ((q-1) lambda x^2) dx.
/// The proof's inner-integral bound for the DInf case; K*sqrt(lambda) stays
/// bounded in lambda. Accepts any lambda > 0 so the lambda -> 0 limit K -> 1
/// is checkable.
double k_integral(double q, double lambda);

/// int_0^upper ln(1+y) / y^{3/2} dy, which converges to 2*pi; the tail beyond
/// `upper` is below 2*ln(1+upper)/sqrt(upper) + 4/sqrt(upper).
double log_integral_check(double upper);

struct LineFit {
    double slope;
    double intercept;
};

/// Ordinary least squares for (log lambda, -log |I|) pairs.
LineFit fit_loglog(const std::vector<std::pair<double, double>>& points);

/// CSV with columns exactly: lambda, re_I, im_I, abs_I, bound_ratio, after
/// header comment lines echoing the resolved configuration.
void write_csv(const DecayReport& report, std::ostream& os);

nlohmann::ordered_json report_to_json(const DecayReport& report);

} // namespace mlosc

#endif
