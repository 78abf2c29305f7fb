#include "mlosc/decay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include "mlosc/detail/gauss.hpp"

namespace mlosc {

namespace {

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double theoretical_exponent(PhaseClass cls, double p)
{
    if (!(p > 1.0)) throw DomainError("theoretical_exponent: p must lie in (1, inf]");
    const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
    switch (cls) {
        case PhaseClass::DInf: return 0.5 - 0.5 * ip;
        case PhaseClass::D4Plus:
        case PhaseClass::D4Minus: return 2.0 / 3.0 - ip / 3.0;
        case PhaseClass::A2: return 1.0 / 3.0 - ip / 3.0;
        case PhaseClass::Zero:
            throw UnsupportedClassError("theoretical_exponent: no estimate for the zero phase");
    }
    throw DomainError("theoretical_exponent: bad class");
}

double calibrated_envelope_constant(const MLParams& params)
{
    SectorProbe probe;
    probe.params = params;
    probe.mu = M_PI * params.alpha / 2.0 + 0.02 * M_PI;
    for (double r = 1e-2; r <= 1.0000001e6; r *= std::pow(10.0, 0.125))
        probe.radius_grid.push_back(r);
    return envelope_constant(probe);
}

double k_integral(double q, double lambda)
{
    if (!(q > 1.0)) throw DomainError("k_integral: q must exceed 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw DomainError("k_integral: lambda must be positive");
    auto f = [q, lambda](double x) {
        const double eps = lambda * x * x;
        if (eps < 1e-5) // removable singularity: integrand -> 1 as x -> 0
            return 1.0 - 0.5 * q * eps + q * (q + 1.0) * eps * eps / 6.0;
        return (1.0 - std::pow(1.0 + eps, 1.0 - q)) / ((q - 1.0) * eps);
    };
    auto [v, err] = detail::integrate_1d(f, 0.0, 1.0, 1e-11);
    (void)err;
    return v;
}

double log_integral_check(double upper)
{
    if (!(upper >= 1e3)) throw DomainError("log_integral_check: upper must be >= 1e3");
    // substitute y = t^2: 2 * int_0^sqrt(upper) ln(1+t^2)/t^2 dt
    auto f = [](double t) {
        const double t2 = t * t;
        if (t2 < 1e-10) return 1.0 - 0.5 * t2;
        return std::log1p(t2) / t2;
    };
    const double tmax = std::sqrt(upper);
    double total = 0.0;
    double lo = 0.0;
    for (double hi = 1.0; lo < tmax; hi *= 10.0) {
        const double seg_hi = std::min(hi, tmax);
        auto [v, err] = detail::integrate_1d(f, lo, seg_hi, 1e-12);
        (void)err;
        total += v;
        lo = seg_hi;
    }
    return 2.0 * total;
}

LineFit fit_loglog(const std::vector<std::pair<double, double>>& points)
{
    if (points.size() < 3)
        throw DegenerateFitError("fit_loglog: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = (double)points.size();
    for (const auto& [x, y] : points) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double var = sxx - sx * sx / n;
    if (!(var > 1e-14 * (sxx + 1.0)))
        throw DegenerateFitError("fit_loglog: zero abscissa variance");
    const double slope = (sxy - sx * sy / n) / var;
    return {slope, (sy - slope * sx) / n};
}

namespace {

bool verdict_rule(const std::vector<DecayRow>& rows, double lambda_max, double slack,
                  std::string& message)
{
    // pass iff max over the last two decades <= (1+slack) * max over earlier
    const double cut = lambda_max / 100.0;
    double late = 0.0, early = 0.0;
    for (const auto& r : rows) {
        double& side = (r.lambda > cut) ? late : early;
        side = std::max(side, r.bound_ratio);
    }
    const bool pass = late <= (1.0 + slack) * early;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "max ratio %.6g over the last two decades vs %.6g earlier (slack %.3g)",
                  late, early, slack);
    message = buf;
    return pass;
}

} // namespace

bool reverdict(DecayReport& report, double rho, double slack)
{
    report.rho = rho;
    report.verdict_slack = slack;
    for (auto& r : report.rows)
        r.bound_ratio = r.abs_I * std::pow(r.lambda, rho) / report.psi_norm;
    report.pass = verdict_rule(report.rows, report.lambda_max, slack, report.message);
    return report.pass;
}

DecayReport decay_scan(PhaseClass cls, const MLParams& params,
                       const AmplitudeSpec& amplitude, double lambda_min,
                       double lambda_max, int points_per_decade, double tol,
                       const DecayScanExtras& extras)
{
    if (cls == PhaseClass::Zero)
        throw UnsupportedClassError("decay_scan: the zero phase has no decay estimate");
    if (!(lambda_min >= 1.0 && lambda_min < lambda_max))
        throw DomainError("decay_scan: need 1 <= lambda_min < lambda_max");
    if (lambda_max / lambda_min < 100.0)
        throw InsufficientDecadesError("decay_scan: need at least two decades of lambda");
    if (points_per_decade < 3)
        throw DomainError("decay_scan: need >= 3 points per decade");
    if (!(tol > 0))
        throw DomainError("decay_scan: verdict slack must be positive");

    DecayReport rep;
    rep.phase_class = cls;
    rep.params = params;
    rep.p = amplitude.p;
    rep.q = std::isinf(amplitude.p) ? 1.0 : amplitude.p / (amplitude.p - 1.0);
    rep.rho = extras.rho_override ? *extras.rho_override : theoretical_exponent(cls, amplitude.p);
    rep.verdict_slack = tol;
    rep.lambda_min = lambda_min;
    rep.lambda_max = lambda_max;
    rep.points_per_decade = points_per_decade;
    rep.quad_tol = extras.quad_tol;
    rep.psi_norm = pnorm(amplitude, Rect{});
    rep.c_hat = calibrated_envelope_constant(params);

    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double lam = lambda_min * std::pow(10.0, (double)k / points_per_decade);
        if (lam > lambda_max * (1.0 + 1e-9)) break;
        grid.push_back(lam);
    }

    auto budget_for = [&](double lam) -> long {
        if (extras.cell_budget > 0) return extras.cell_budget;
        if (params.alpha == 1.0) {
            const double want = lam * lam / 2500.0;
            return (long)std::clamp(want, 2e5, 8e6);
        }
        return 200000;
    };

    auto compute_row = [&](double lam) {
        IntegralSpec spec;
        spec.params = params;
        spec.lambda = lam;
        spec.phase = canonical_form(cls);
        spec.amplitude = amplitude;
        spec.cell_budget = budget_for(lam);
        QuadResult r = integrate(spec, extras.quad_tol);
        DecayRow row;
        row.lambda = lam;
        row.I = r.value;
        row.abs_I = std::abs(r.value);
        row.majorant =
            envelope_integral(spec, rep.c_hat, std::max(extras.quad_tol, 1e-5));
        row.error_estimate = r.error_estimate;
        row.cells = r.cells_used;
        row.budget_exhausted = r.budget_exhausted;
        row.bound_ratio = row.abs_I * std::pow(lam, rep.rho) / rep.psi_norm;
        return row;
    };

    rep.rows.resize(grid.size());
    const int threads = std::max(1, extras.threads);
    if (threads == 1) {
        for (size_t i = 0; i < grid.size(); ++i) rep.rows[i] = compute_row(grid[i]);
    } else {
        std::vector<std::future<DecayRow>> slots(grid.size());
        size_t next = 0;
        while (next < grid.size()) {
            const size_t batch = std::min<size_t>(threads, grid.size() - next);
            for (size_t b = 0; b < batch; ++b)
                slots[next + b] = std::async(std::launch::async, compute_row, grid[next + b]);
            for (size_t b = 0; b < batch; ++b) rep.rows[next + b] = slots[next + b].get();
            next += batch;
        }
    }

    // slope fit on the upper half of the grid to dodge preasymptotics
    std::vector<std::pair<double, double>> pts;
    for (size_t i = rep.rows.size() / 2; i < rep.rows.size(); ++i)
        if (rep.rows[i].abs_I > 0)
            pts.emplace_back(std::log(rep.rows[i].lambda), -std::log(rep.rows[i].abs_I));
    rep.fitted_slope = pts.size() >= 3 ? fit_loglog(pts).slope
                                       : std::numeric_limits<double>::quiet_NaN();

    rep.pass = verdict_rule(rep.rows, lambda_max, tol, rep.message);
    return rep;
}

void write_csv(const DecayReport& r, std::ostream& os)
{
    os << "# mlosc decay report\n";
    os << "# class=" << to_string(r.phase_class) << " alpha=" << fmt17(r.params.alpha)
       << " beta=" << fmt17(r.params.beta)
       << " p=" << (std::isinf(r.p) ? std::string("inf") : fmt17(r.p))
       << " q=" << fmt17(r.q) << " rho=" << fmt17(r.rho) << "\n";
    os << "# c_hat=" << fmt17(r.c_hat) << " psi_norm=" << fmt17(r.psi_norm)
       << " lambda_min=" << fmt17(r.lambda_min) << " lambda_max=" << fmt17(r.lambda_max)
       << " points_per_decade=" << r.points_per_decade
       << " verdict_slack=" << fmt17(r.verdict_slack) << " quad_tol=" << fmt17(r.quad_tol)
       << "\n";
    os << "lambda,re_I,im_I,abs_I,bound_ratio\n";
    for (const auto& row : r.rows) {
        os << fmt17(row.lambda) << ',' << fmt17(row.I.real()) << ',' << fmt17(row.I.imag())
           << ',' << fmt17(row.abs_I) << ',' << fmt17(row.bound_ratio) << '\n';
    }
}

nlohmann::ordered_json report_to_json(const DecayReport& r)
{
    nlohmann::ordered_json j;
    j["config"]["class"] = to_string(r.phase_class);
    j["config"]["alpha"] = r.params.alpha;
    j["config"]["beta"] = r.params.beta;
    if (std::isinf(r.p))
        j["config"]["p"] = "inf";
    else
        j["config"]["p"] = r.p;
    j["config"]["lambda_min"] = r.lambda_min;
    j["config"]["lambda_max"] = r.lambda_max;
    j["config"]["points_per_decade"] = r.points_per_decade;
    j["config"]["verdict_slack"] = r.verdict_slack;
    j["config"]["quad_tol"] = r.quad_tol;
    j["q"] = r.q;
    j["rho"] = r.rho;
    j["c_hat"] = r.c_hat;
    j["psi_norm"] = r.psi_norm;
    j["fitted_slope"] = r.fitted_slope;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["message"] = r.message;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json rj;
        rj["lambda"] = row.lambda;
        rj["re_I"] = row.I.real();
        rj["im_I"] = row.I.imag();
        rj["abs_I"] = row.abs_I;
        rj["bound_ratio"] = row.bound_ratio;
        rj["majorant"] = row.majorant;
        rj["error_estimate"] = row.error_estimate;
        rj["cells"] = row.cells;
        rj["budget_exhausted"] = row.budget_exhausted;
        rows.push_back(std::move(rj));
    }
    j["rows"] = std::move(rows);
    return j;
}

} // namespace mlosc
