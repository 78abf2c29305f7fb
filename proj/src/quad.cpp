#include "mlosc/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "mlosc/detail/gauss.hpp"

namespace mlosc {

namespace {

double eval_phase(const CubicForm& f, double x1, double x2)
{
    return ((f.c30 * x1 + f.c21 * x2) * x1 + f.c12 * x2 * x2) * x1 +
           f.c03 * x2 * x2 * x2;
}

void validate_amplitude(const AmplitudeSpec& a, const Rect& dom)
{
    if (!(a.p > 1.0))
        throw DomainError("amplitude: p must lie in (1, inf]");
    switch (a.kind) {
        case AmplitudeSpec::Kind::Constant:
            if (!std::isfinite(a.value)) throw DomainError("amplitude: non-finite value");
            break;
        case AmplitudeSpec::Kind::PowerSingular: {
            if (!(a.gamma1 >= 0 && a.gamma2 >= 0 && a.gamma1 < 1 && a.gamma2 < 1))
                throw DomainError("amplitude: gamma must lie in [0, 1)");
            const double w1 = dom.width1(), w2 = dom.width2();
            const bool on_edge =
                std::abs(a.anchor1 - dom.x1min) <= 1e-12 * w1 ||
                std::abs(a.anchor1 - dom.x1max) <= 1e-12 * w1 ||
                std::abs(a.anchor2 - dom.x2min) <= 1e-12 * w2 ||
                std::abs(a.anchor2 - dom.x2max) <= 1e-12 * w2;
            if (!on_edge)
                throw DomainError("amplitude: singular anchor must sit on the domain boundary");
            break;
        }
        case AmplitudeSpec::Kind::Grid:
            if (a.nx < 2 || a.ny < 2 || (int)a.values.size() != a.nx * a.ny)
                throw DomainError("amplitude: grid needs nx,ny >= 2 and nx*ny values");
            for (double v : a.values)
                if (!std::isfinite(v)) throw DomainError("amplitude: non-finite grid value");
            break;
    }
}

void validate_spec(const IntegralSpec& s)
{
    if (!(s.params.alpha > 0.0 && s.params.alpha <= 1.0))
        throw DomainError("integrate: alpha must lie in (0, 1]");
    if (!(s.params.beta > 0.0)) throw DomainError("integrate: beta must be positive");
    if (!(s.lambda >= 0.0) || !std::isfinite(s.lambda))
        throw DomainError("integrate: lambda must be non-negative");
    if (!(s.domain.width1() > 0 && s.domain.width2() > 0))
        throw DomainError("integrate: empty domain");
    if (s.cell_budget < 16) throw DomainError("integrate: cell budget too small");
    for (double v : {s.phase.c30, s.phase.c21, s.phase.c12, s.phase.c03})
        if (!std::isfinite(v)) throw DomainError("integrate: non-finite phase coefficient");
    validate_amplitude(s.amplitude, s.domain);
}

struct AmplitudeEval {
    const AmplitudeSpec& a;
    const Rect& dom;

    double operator()(double x1, double x2) const
    {
        switch (a.kind) {
            case AmplitudeSpec::Kind::Constant:
                return a.value;
            case AmplitudeSpec::Kind::PowerSingular: {
                double v = 1.0;
                if (a.gamma1 > 0) v *= std::pow(std::abs(x1 - a.anchor1), -a.gamma1);
                if (a.gamma2 > 0) v *= std::pow(std::abs(x2 - a.anchor2), -a.gamma2);
                return v;
            }
            case AmplitudeSpec::Kind::Grid: {
                const double u = (x1 - dom.x1min) / dom.width1() * (a.nx - 1);
                const double v = (x2 - dom.x2min) / dom.width2() * (a.ny - 1);
                const int i = std::clamp((int)std::floor(u), 0, a.nx - 2);
                const int j = std::clamp((int)std::floor(v), 0, a.ny - 2);
                const double fu = u - i, fv = v - j;
                const double* p = a.values.data();
                const double v00 = p[j * a.nx + i], v10 = p[j * a.nx + i + 1];
                const double v01 = p[(j + 1) * a.nx + i], v11 = p[(j + 1) * a.nx + i + 1];
                return (1 - fu) * (1 - fv) * v00 + fu * (1 - fv) * v10 +
                       (1 - fu) * fv * v01 + fu * fv * v11;
            }
        }
        return 0.0;
    }
};

struct Kernel {
    const IntegralSpec& spec;
    AmplitudeEval psi;
    bool envelope_mode;
    double c_hat;
    bool exp_fast;  // alpha == beta == 1: kernel is exp(i lambda f)
    double rg_beta; // E(0) = 1/Gamma(beta)

    Kernel(const IntegralSpec& s, bool env, double c)
        : spec(s),
          psi{s.amplitude, s.domain},
          envelope_mode(env),
          c_hat(c),
          exp_fast(!env && s.params.alpha == 1.0 && s.params.beta == 1.0),
          rg_beta(detail::rgamma(s.params.beta))
    {
    }

    Complex operator()(double x1, double x2) const
    {
        const double w = psi(x1, x2);
        const double f = eval_phase(spec.phase, x1, x2);
        if (envelope_mode)
            return Complex(c_hat * std::abs(w) / (1.0 + spec.lambda * std::abs(f)), 0.0);
        if (spec.lambda == 0.0) return Complex(rg_beta * w, 0.0);
        const double y = spec.lambda * f;
        if (exp_fast) {
            double s, c;
            ::sincos(y, &s, &c);
            return w * Complex(c, s);
        }
        const double x = y * y;
        const double re = detail::ml_neg_axis(2.0 * spec.params.alpha, spec.params.beta, x);
        const double im = detail::ml_neg_axis(2.0 * spec.params.alpha,
                                              spec.params.beta + spec.params.alpha, x);
        return w * Complex(re, y * im);
    }
};

struct Cell {
    double x1lo, x1hi, x2lo, x2hi;
    Complex val;
    double err;
    int axis_hint;
    long gen;
};

struct CellEval {
    Complex val;
    double err;
    int axis_hint;
};

// Cell value from the 31-point tensor rule, error from the embedded 15-point
// comparison. The 15/7 pairing over-refines oscillatory kernels by an order
// of magnitude (refinement always proceeds until the weaker rule resolves),
// which made the alpha=1 sweeps intractable; 31|15 has the same structure
// with a far larger per-axis capacity.
CellEval eval_cell(const Kernel& K, double x1lo, double x1hi, double x2lo, double x2hi)
{
    const auto& g31 = detail::gauss31();
    const auto& g15 = detail::gauss15();
    const auto& tail = detail::legendre_tail_table();

    const double m1 = 0.5 * (x1lo + x1hi), h1 = 0.5 * (x1hi - x1lo);
    const double m2 = 0.5 * (x2lo + x2hi), h2 = 0.5 * (x2hi - x2lo);

    static thread_local Complex F[31][31];
    double xs1[31], xs2[31];
    for (int i = 0; i < 31; ++i) {
        xs1[i] = m1 + h1 * g31.node[i];
        xs2[i] = m2 + h2 * g31.node[i];
    }
    for (int i = 0; i < 31; ++i)
        for (int j = 0; j < 31; ++j) F[i][j] = K(xs1[i], xs2[j]);

    // collapse along each axis with the 31-point weights
    Complex prof1[31], prof2[31];
    for (int i = 0; i < 31; ++i) prof1[i] = Complex(0, 0);
    for (int j = 0; j < 31; ++j) prof2[j] = Complex(0, 0);
    for (int i = 0; i < 31; ++i)
        for (int j = 0; j < 31; ++j) {
            prof1[i] += g31.weight[j] * F[i][j];
            prof2[j] += g31.weight[i] * F[i][j];
        }
    Complex i31(0, 0);
    for (int i = 0; i < 31; ++i) i31 += g31.weight[i] * prof1[i];
    i31 *= h1 * h2;

    Complex i15(0, 0);
    for (int i = 0; i < 15; ++i) {
        const double x1 = m1 + h1 * g15.node[i];
        Complex row(0, 0);
        for (int j = 0; j < 15; ++j) row += g15.weight[j] * K(x1, m2 + h2 * g15.node[j]);
        i15 += g15.weight[i] * row;
    }
    i15 *= h1 * h2;

    // high-order Legendre content of the collapsed profiles picks the axis
    Complex c29a(0, 0), c30a(0, 0), c29b(0, 0), c30b(0, 0);
    for (int i = 0; i < 31; ++i) {
        c29a += g31.weight[i] * tail.p29[i] * prof1[i];
        c30a += g31.weight[i] * tail.p30[i] * prof1[i];
        c29b += g31.weight[i] * tail.p29[i] * prof2[i];
        c30b += g31.weight[i] * tail.p30[i] * prof2[i];
    }
    const double t1 = std::abs(c29a) + std::abs(c30a);
    const double t2 = std::abs(c29b) + std::abs(c30b);

    CellEval out;
    out.val = i31;
    out.err = std::abs(i31 - i15);
    if (t1 > 1.02 * t2)
        out.axis_hint = 0;
    else if (t2 > 1.02 * t1)
        out.axis_hint = 1;
    else
        out.axis_hint = (x1hi - x1lo >= x2hi - x2lo) ? 0 : 1;
    return out;
}

// 1D breakpoints: uniform base plus a geometric grading toward singular
// anchors (ratio 1/4)
std::vector<double> axis_cuts(double lo, double hi, bool grade_lo, bool grade_hi)
{
    std::vector<double> cuts;
    const int base = 4;
    for (int i = 0; i <= base; ++i) cuts.push_back(lo + (hi - lo) * i / base);
    const double len = hi - lo;
    if (grade_lo)
        for (double s = 0.25; s >= 1e-7; s *= 0.25) cuts.push_back(lo + len * s);
    if (grade_hi)
        for (double s = 0.25; s >= 1e-7; s *= 0.25) cuts.push_back(hi - len * s);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

bool sign_change_on_cell(const CubicForm& f, double x1lo, double x1hi, double x2lo,
                         double x2hi)
{
    int pos = 0, neg = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double v = eval_phase(f, x1lo + (x1hi - x1lo) * i / 2.0,
                                        x2lo + (x2hi - x2lo) * j / 2.0);
            if (v > 0) ++pos;
            if (v < 0) ++neg;
        }
    return (pos > 0 && neg > 0) || (pos + neg < 9);
}

struct HeapEntry {
    double key; // error density err/area: equidistributing error per unit
                // area needs far fewer cells on oscillatory kernels than
                // equalizing raw per-cell errors
    long gen;
    int idx;
    bool operator<(const HeapEntry& o) const
    {
        if (key != o.key) return key < o.key;
        return idx > o.idx; // deterministic tie-break
    }
};

double cell_key(const Cell& c)
{
    const double area = (c.x1hi - c.x1lo) * (c.x2hi - c.x2lo);
    return area > 0 ? c.err / area : 0.0;
}

QuadResult run_engine(const IntegralSpec& spec, double tol, bool envelope_mode, double c_hat)
{
    validate_spec(spec);
    if (!(tol > 1e-12 && tol < 1e-2))
        throw DomainError("integrate: tol must lie in (1e-12, 1e-2)");

    const Kernel K(spec, envelope_mode, c_hat);
    const Rect& dom = spec.domain;

    const bool singular = spec.amplitude.kind == AmplitudeSpec::Kind::PowerSingular;
    auto near_edge = [](double a, double lo, double hi) {
        return std::abs(a - lo) <= 1e-12 * std::abs(hi - lo);
    };
    const bool g1lo = singular && spec.amplitude.gamma1 > 0 &&
                      near_edge(spec.amplitude.anchor1, dom.x1min, dom.x1max);
    const bool g1hi = singular && spec.amplitude.gamma1 > 0 &&
                      near_edge(spec.amplitude.anchor1, dom.x1max, dom.x1min);
    const bool g2lo = singular && spec.amplitude.gamma2 > 0 &&
                      near_edge(spec.amplitude.anchor2, dom.x2min, dom.x2max);
    const bool g2hi = singular && spec.amplitude.gamma2 > 0 &&
                      near_edge(spec.amplitude.anchor2, dom.x2max, dom.x2min);

    const auto cuts1 = axis_cuts(dom.x1min, dom.x1max, g1lo, g1hi);
    const auto cuts2 = axis_cuts(dom.x2min, dom.x2max, g2lo, g2hi);

    // initial mesh, with two pre-split rounds along the zero set of f
    std::vector<std::array<double, 4>> boxes;
    for (size_t i = 0; i + 1 < cuts1.size(); ++i)
        for (size_t j = 0; j + 1 < cuts2.size(); ++j)
            boxes.push_back({cuts1[i], cuts1[i + 1], cuts2[j], cuts2[j + 1]});
    for (int round = 0; round < 2; ++round) {
        std::vector<std::array<double, 4>> next;
        for (const auto& b : boxes) {
            if (sign_change_on_cell(spec.phase, b[0], b[1], b[2], b[3])) {
                const double mx = 0.5 * (b[0] + b[1]), my = 0.5 * (b[2] + b[3]);
                next.push_back({b[0], mx, b[2], my});
                next.push_back({mx, b[1], b[2], my});
                next.push_back({b[0], mx, my, b[3]});
                next.push_back({mx, b[1], my, b[3]});
            } else {
                next.push_back(b);
            }
        }
        boxes.swap(next);
    }

    // At alpha = 1 the kernel oscillates without decay, and refining from
    // coarse cells would evaluate every intermediate generation. Pre-tile by
    // the predicted per-axis phase span instead (corner bound on |grad f|,
    // factor 2 headroom for interior extrema); these splits cost no kernel
    // evaluations.
    if (!envelope_mode && spec.params.alpha == 1.0 && spec.lambda > 0.0) {
        const CubicForm& f = spec.phase;
        auto grad_bound = [&f](const std::array<double, 4>& b, int axis) {
            double m = 0;
            for (double x : {b[0], b[1]})
                for (double y : {b[2], b[3]}) {
                    const double g =
                        axis == 0 ? (3 * f.c30 * x * x + 2 * f.c21 * x * y + f.c12 * y * y)
                                  : (f.c21 * x * x + 2 * f.c12 * x * y + 3 * f.c03 * y * y);
                    m = std::max(m, std::abs(g));
                }
            return m;
        };
        const double span_cap = 40.0;
        const double min_w1 = 1e-7 * dom.width1(), min_w2 = 1e-7 * dom.width2();
        std::vector<std::array<double, 4>> stack;
        stack.swap(boxes);
        while (!stack.empty()) {
            const auto b = stack.back();
            stack.pop_back();
            const double w1 = b[1] - b[0], w2 = b[3] - b[2];
            const bool over1 =
                spec.lambda * grad_bound(b, 0) * w1 > span_cap && w1 > min_w1;
            const bool over2 =
                spec.lambda * grad_bound(b, 1) * w2 > span_cap && w2 > min_w2;
            if (over1 && over2) {
                const double mx = 0.5 * (b[0] + b[1]), my = 0.5 * (b[2] + b[3]);
                stack.push_back({b[0], mx, b[2], my});
                stack.push_back({mx, b[1], b[2], my});
                stack.push_back({b[0], mx, my, b[3]});
                stack.push_back({mx, b[1], my, b[3]});
            } else if (over1) {
                const double mx = 0.5 * (b[0] + b[1]);
                stack.push_back({b[0], mx, b[2], b[3]});
                stack.push_back({mx, b[1], b[2], b[3]});
            } else if (over2) {
                const double my = 0.5 * (b[2] + b[3]);
                stack.push_back({b[0], b[1], b[2], my});
                stack.push_back({b[0], b[1], my, b[3]});
            } else {
                boxes.push_back(b);
            }
        }
    }

    std::vector<Cell> cells;
    cells.reserve(boxes.size() * 2);
    std::priority_queue<HeapEntry> heap;
    Complex value_sum(0, 0);
    double err_sum = 0;
    long gen_counter = 0;

    auto push_cell = [&](double a, double b, double c, double d) {
        const CellEval e = eval_cell(K, a, b, c, d);
        Cell cell{a, b, c, d, e.val, e.err, e.axis_hint, ++gen_counter};
        cells.push_back(cell);
        heap.push(HeapEntry{cell_key(cell), cell.gen, (int)cells.size() - 1});
        value_sum += e.val;
        err_sum += e.err;
    };

    for (const auto& b : boxes) push_cell(b[0], b[1], b[2], b[3]);

    bool budget_hit = false;
    while (true) {
        const double target = tol * (1.0 + std::abs(value_sum));
        if (err_sum <= 0.9 * target) break;
        if ((long)cells.size() >= spec.cell_budget) {
            budget_hit = true;
            break;
        }
        if (heap.empty()) break;
        const HeapEntry top = heap.top();
        heap.pop();
        if (top.gen != cells[top.idx].gen) continue; // stale entry
        const Cell cell = cells[top.idx];

        value_sum -= cell.val;
        err_sum -= cell.err;

        if (cell.axis_hint == 0) {
            const double m = 0.5 * (cell.x1lo + cell.x1hi);
            const CellEval ea = eval_cell(K, cell.x1lo, m, cell.x2lo, cell.x2hi);
            cells[top.idx] = Cell{cell.x1lo, m,      cell.x2lo, cell.x2hi,
                                  ea.val,    ea.err, ea.axis_hint, ++gen_counter};
            heap.push(HeapEntry{cell_key(cells[top.idx]), cells[top.idx].gen, top.idx});
            value_sum += ea.val;
            err_sum += ea.err;
            push_cell(m, cell.x1hi, cell.x2lo, cell.x2hi);
        } else {
            const double m = 0.5 * (cell.x2lo + cell.x2hi);
            const CellEval ea = eval_cell(K, cell.x1lo, cell.x1hi, cell.x2lo, m);
            cells[top.idx] = Cell{cell.x1lo, cell.x1hi, cell.x2lo, m,
                                  ea.val,    ea.err,    ea.axis_hint, ++gen_counter};
            heap.push(HeapEntry{cell_key(cells[top.idx]), cells[top.idx].gen, top.idx});
            value_sum += ea.val;
            err_sum += ea.err;
            push_cell(cell.x1lo, cell.x1hi, m, cell.x2hi);
        }
    }

    // deterministic accumulation: sort leaves, then compensated summation
    std::vector<int> order(cells.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Cell& ca = cells[a];
        const Cell& cb = cells[b];
        if (ca.x1lo != cb.x1lo) return ca.x1lo < cb.x1lo;
        if (ca.x2lo != cb.x2lo) return ca.x2lo < cb.x2lo;
        if (ca.x1hi != cb.x1hi) return ca.x1hi < cb.x1hi;
        return ca.x2hi < cb.x2hi;
    });
    double sr = 0, cr = 0, si = 0, ci = 0, se = 0, ce = 0;
    auto kahan = [](double& s, double& c, double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    };
    for (int idx : order) {
        kahan(sr, cr, cells[idx].val.real());
        kahan(si, ci, cells[idx].val.imag());
        kahan(se, ce, cells[idx].err);
    }

    QuadResult out;
    out.value = Complex(sr, si);
    out.error_estimate = se;
    out.cells_used = (long)cells.size();
    out.budget_exhausted = budget_hit;
    return out;
}

} // namespace

AmplitudeSpec AmplitudeSpec::constant(double c, double p)
{
    AmplitudeSpec a;
    a.kind = Kind::Constant;
    a.value = c;
    a.p = p;
    return a;
}

AmplitudeSpec AmplitudeSpec::power_singular(double g1, double g2, double a1, double a2,
                                            double p)
{
    AmplitudeSpec a;
    a.kind = Kind::PowerSingular;
    a.gamma1 = g1;
    a.gamma2 = g2;
    a.anchor1 = a1;
    a.anchor2 = a2;
    a.p = p;
    return a;
}

QuadResult integrate(const IntegralSpec& spec, double tol)
{
    return run_engine(spec, tol, false, 0.0);
}

double envelope_integral(const IntegralSpec& spec, double c_hat, double tol)
{
    if (!(c_hat > 0) || !std::isfinite(c_hat))
        throw DomainError("envelope_integral: c_hat must be positive");
    return run_engine(spec, tol, true, c_hat).value.real();
}

double pnorm(const AmplitudeSpec& amplitude, const Rect& domain)
{
    validate_amplitude(amplitude, domain);
    const bool inf_p = std::isinf(amplitude.p);
    const double p = amplitude.p;
    switch (amplitude.kind) {
        case AmplitudeSpec::Kind::Constant: {
            const double area = domain.width1() * domain.width2();
            return inf_p ? std::abs(amplitude.value)
                         : std::abs(amplitude.value) * std::pow(area, 1.0 / p);
        }
        case AmplitudeSpec::Kind::PowerSingular: {
            if (inf_p) {
                if (amplitude.gamma1 > 0 || amplitude.gamma2 > 0)
                    throw DivergentNormError("pnorm: singular amplitude has no L^inf norm");
                return 1.0;
            }
            auto axis = [&](double g, double a, double lo, double hi) {
                if (g == 0.0) return hi - lo;
                const double gp = g * p;
                if (gp >= 1.0)
                    throw DivergentNormError("pnorm: gamma*p >= 1, |psi|^p not integrable");
                const double right = std::max(0.0, hi - a);
                const double left = std::max(0.0, a - lo);
                return (std::pow(right, 1.0 - gp) + std::pow(left, 1.0 - gp)) / (1.0 - gp);
            };
            const double m1 =
                axis(amplitude.gamma1, amplitude.anchor1, domain.x1min, domain.x1max);
            const double m2 =
                axis(amplitude.gamma2, amplitude.anchor2, domain.x2min, domain.x2max);
            return std::pow(m1 * m2, 1.0 / p);
        }
        case AmplitudeSpec::Kind::Grid: {
            if (inf_p) {
                double m = 0;
                for (double v : amplitude.values) m = std::max(m, std::abs(v));
                return m;
            }
            // composite GL7 over each bilinear patch
            const auto& g7 = detail::gauss7();
            const AmplitudeEval ev{amplitude, domain};
            const double hx = domain.width1() / (amplitude.nx - 1);
            const double hy = domain.width2() / (amplitude.ny - 1);
            double acc = 0;
            for (int i = 0; i + 1 < amplitude.nx; ++i)
                for (int j = 0; j + 1 < amplitude.ny; ++j) {
                    const double cx = domain.x1min + hx * (i + 0.5);
                    const double cy = domain.x2min + hy * (j + 0.5);
                    for (int u = 0; u < 7; ++u)
                        for (int v = 0; v < 7; ++v) {
                            const double x = cx + 0.5 * hx * g7.node[u];
                            const double y = cy + 0.5 * hy * g7.node[v];
                            acc += g7.weight[u] * g7.weight[v] *
                                   std::pow(std::abs(ev(x, y)), p);
                        }
                }
            return std::pow(acc * 0.25 * hx * hy, 1.0 / p);
        }
    }
    throw DomainError("pnorm: unknown amplitude kind");
}

namespace {

nlohmann::ordered_json amplitude_to_json(const AmplitudeSpec& a)
{
    nlohmann::ordered_json j;
    switch (a.kind) {
        case AmplitudeSpec::Kind::Constant:
            j["kind"] = "constant";
            j["value"] = a.value;
            break;
        case AmplitudeSpec::Kind::PowerSingular:
            j["kind"] = "power_singular";
            j["gamma1"] = a.gamma1;
            j["gamma2"] = a.gamma2;
            j["anchor"] = {a.anchor1, a.anchor2};
            break;
        case AmplitudeSpec::Kind::Grid:
            j["kind"] = "grid";
            j["nx"] = a.nx;
            j["ny"] = a.ny;
            j["values"] = a.values;
            break;
    }
    if (std::isinf(a.p))
        j["p"] = "inf";
    else
        j["p"] = a.p;
    return j;
}

AmplitudeSpec amplitude_from_json(const nlohmann::json& j)
{
    AmplitudeSpec a;
    const std::string kind = j.at("kind").get<std::string>();
    if (j.contains("p")) {
        if (j["p"].is_string()) {
            if (j["p"].get<std::string>() != "inf")
                throw DomainError("amplitude: p must be a number or \"inf\"");
            a.p = std::numeric_limits<double>::infinity();
        } else {
            a.p = j["p"].get<double>();
        }
    }
    if (kind == "constant") {
        a.kind = AmplitudeSpec::Kind::Constant;
        a.value = j.value("value", 1.0);
    } else if (kind == "power_singular") {
        a.kind = AmplitudeSpec::Kind::PowerSingular;
        a.gamma1 = j.at("gamma1").get<double>();
        a.gamma2 = j.at("gamma2").get<double>();
        a.anchor1 = j.at("anchor").at(0).get<double>();
        a.anchor2 = j.at("anchor").at(1).get<double>();
    } else if (kind == "grid") {
        a.kind = AmplitudeSpec::Kind::Grid;
        a.nx = j.at("nx").get<int>();
        a.ny = j.at("ny").get<int>();
        a.values = j.at("values").get<std::vector<double>>();
    } else {
        throw DomainError("amplitude: unknown kind " + kind);
    }
    return a;
}

} // namespace

nlohmann::ordered_json job_to_json(const IntegralJob& job)
{
    nlohmann::ordered_json j;
    j["alpha"] = job.spec.params.alpha;
    j["beta"] = job.spec.params.beta;
    j["lambda"] = job.spec.lambda;
    j["phase"] = {job.spec.phase.c30, job.spec.phase.c21, job.spec.phase.c12,
                  job.spec.phase.c03};
    j["amplitude"] = amplitude_to_json(job.spec.amplitude);
    j["domain"] = {job.spec.domain.x1min, job.spec.domain.x1max, job.spec.domain.x2min,
                   job.spec.domain.x2max};
    j["tol"] = job.tol;
    return j;
}

IntegralJob job_from_json(const nlohmann::json& j)
{
    IntegralJob job;
    job.spec.params.alpha = j.at("alpha").get<double>();
    job.spec.params.beta = j.at("beta").get<double>();
    job.spec.lambda = j.at("lambda").get<double>();
    const auto& ph = j.at("phase");
    if (!ph.is_array() || ph.size() != 4)
        throw DomainError("spec: phase must be [c30, c21, c12, c03]");
    job.spec.phase = {ph[0].get<double>(), ph[1].get<double>(), ph[2].get<double>(),
                      ph[3].get<double>()};
    job.spec.amplitude = amplitude_from_json(j.at("amplitude"));
    if (j.contains("domain")) {
        const auto& d = j["domain"];
        if (!d.is_array() || d.size() != 4)
            throw DomainError("spec: domain must be [x1min, x1max, x2min, x2max]");
        job.spec.domain = {d[0].get<double>(), d[1].get<double>(), d[2].get<double>(),
                           d[3].get<double>()};
    }
    job.tol = j.value("tol", 1e-6);
    if (j.contains("cell_budget")) job.spec.cell_budget = j["cell_budget"].get<long>();
    return job;
}

} // namespace mlosc
