#ifndef MLOSC_QUAD_HPP
#define MLOSC_QUAD_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "mlosc/mlf.hpp"
#include "mlosc/phase.hpp"

namespace mlosc {

/// Amplitude psi of the integral. Three families:
///   constant        psi = value, any p up to infinity
///   power_singular  psi = |x1-a1|^{-gamma1} |x2-a2|^{-gamma2}, anchor on the
///                   domain boundary, gamma_i * p < 1 for finite p
///   grid            bilinear interpolation of nx*ny samples over the domain
struct AmplitudeSpec {
    enum class Kind { Constant, PowerSingular, Grid };
    Kind kind = Kind::Constant;
    double p = std::numeric_limits<double>::infinity();

    double value = 1.0;                   // Constant
    double gamma1 = 0.0, gamma2 = 0.0;    // PowerSingular
    double anchor1 = 0.0, anchor2 = 0.0;
    int nx = 0, ny = 0;                   // Grid (values[j*nx+i], i along x1)
    std::vector<double> values;

    static AmplitudeSpec constant(double c, double p = std::numeric_limits<double>::infinity());
    static AmplitudeSpec power_singular(double g1, double g2, double a1, double a2, double p);
};

struct Rect {
    double x1min = 0, x1max = 1, x2min = 0, x2max = 1;
    double width1() const { return x1max - x1min; }
    double width2() const { return x2max - x2min; }
};

/// One integral I_{alpha,beta}(lambda) = int E_{a,b}(i lambda f(x)) psi(x) dx.
struct IntegralSpec {
    MLParams params{0.5, 1.0};   // alpha in (0,1], beta > 0
    double lambda = 1.0;         // >= 0 (0 admitted as a test anchor)
    CubicForm phase{};
    AmplitudeSpec amplitude{};
    Rect domain{};
    long cell_budget = 200000;   // leaf-cell cap; exceeded -> flagged result
};

struct QuadResult {
    Complex value{};
    double error_estimate = 0.0;
    long cells_used = 0;
    bool budget_exhausted = false;
    std::optional<double> majorant; // filled by decay scans
};

/// Adaptive tensor Gauss-Legendre integration (31-point value, embedded
/// 15-point error estimate). Cells are split on the axis with the larger
/// high-order Legendre coefficient tail, ordered by error density; the
/// initial mesh seeds extra refinement along {f = 0} and grades toward
/// amplitude singularities. Final accumulation runs in sorted cell order,
/// so results are bit-stable.
QuadResult integrate(const IntegralSpec& spec, double tol);

/// The proof's majorant C * int |psi| / (1 + lambda |f|) dx, computed with
/// the same adaptive engine.
double envelope_integral(const IntegralSpec& spec, double c_hat, double tol = 1e-6);

/// L^p norm of the amplitude over the rectangle (closed forms for constant
/// and power_singular, quadrature for grid; p = infinity -> essential sup).
double pnorm(const AmplitudeSpec& amplitude, const Rect& domain);

/// IntegralSpec plus the integration tolerance, as serialized to JSON with
/// field names: alpha, beta, lambda, phase, amplitude{kind,...,p}, domain, tol.
struct IntegralJob {
    IntegralSpec spec;
    double tol = 1e-6;
};

nlohmann::ordered_json job_to_json(const IntegralJob& job);
IntegralJob job_from_json(const nlohmann::json& j);

} // namespace mlosc

#endif
