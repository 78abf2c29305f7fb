#include "mlosc/phase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>

namespace mlosc {

namespace {

using Coeffs = std::array<double, 4>; // [c30, c21, c12, c03]

Coeffs as_array(const CubicForm& f) { return {f.c30, f.c21, f.c12, f.c03}; }

CubicForm from_array(const Coeffs& a) { return {a[0], a[1], a[2], a[3]}; }

double max_abs(const Coeffs& a)
{
    double m = 0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

void check_finite(const CubicForm& f)
{
    for (double v : as_array(f))
        if (!std::isfinite(v)) throw DomainError("phase: non-finite coefficient");
}

// product of binary forms given by coefficient vectors (degree = size-1)
template <size_t M, size_t N>
std::array<double, M + N - 1> form_mul(const std::array<double, M>& a,
                                       const std::array<double, N>& b)
{
    std::array<double, M + N - 1> r{};
    for (size_t i = 0; i < M; ++i)
        for (size_t j = 0; j < N; ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

double eval_form(const CubicForm& f, double x1, double x2)
{
    return ((f.c30 * x1 + f.c21 * x2) * x1 + f.c12 * x2 * x2) * x1 + f.c03 * x2 * x2 * x2;
}

// scale coefficients by a power of two so max|c| lands in [1/2, 1]
Coeffs pow2_normalize(const Coeffs& c, double& factor)
{
    const double m = max_abs(c);
    factor = std::exp2(-std::ceil(std::log2(m)));
    Coeffs out = c;
    for (double& v : out) v *= factor;
    return out;
}

// Hessian covariant of the cubic; identically zero iff the form is a
// perfect cube.
std::array<double, 3> hessian(const Coeffs& c)
{
    const double a = c[0], b = c[1], cc = c[2], d = c[3];
    return {3 * a * cc - b * b, 9 * a * d - b * cc, 3 * b * d - cc * cc};
}

struct ProjPoint {
    // direction (x1, x2) with x1^2 + x2^2 = 1 representing a zero line
    double x1, x2;
};

double chordal(const std::complex<double>& t, const std::complex<double>& s)
{
    return std::abs(t - s) /
           (std::sqrt(1.0 + std::norm(t)) * std::sqrt(1.0 + std::norm(s)));
}

struct RotatedForm {
    Coeffs g;    // g = f(R x), leading coefficient bounded away from 0
    double c, s; // rotation entries; R = [[c,-s],[s,c]]
};

// rotate so the dehomogenized cubic g(t,1) keeps full degree
RotatedForm rotate_full_degree(const CubicForm& f)
{
    double best_val = -1.0, best_phi = 0.0;
    for (int k = 0; k < 7; ++k) {
        const double phi = k * M_PI / 7.0;
        const double v = std::abs(eval_form(f, std::cos(phi), std::sin(phi)));
        if (v > best_val) {
            best_val = v;
            best_phi = phi;
        }
    }
    RotatedForm out;
    out.c = std::cos(best_phi);
    out.s = std::sin(best_phi);
    LinearChange rot{out.c, -out.s, out.s, out.c, 1.0};
    out.g = as_array(apply_linear_change(f, rot));
    return out;
}

ProjPoint direction_from_root(const RotatedForm& rf, double t)
{
    // root t of g(t,1): direction (t,1) in the rotated frame, mapped back
    const double n = std::sqrt(1.0 + t * t);
    const double d1 = t / n, d2 = 1.0 / n;
    return {rf.c * d1 - rf.s * d2, rf.s * d1 + rf.c * d2};
}

double polish_root(const Coeffs& p, double t, int iters)
{
    // Newton on p0 t^3 + p1 t^2 + p2 t + p3
    for (int i = 0; i < iters; ++i) {
        const double val = ((p[0] * t + p[1]) * t + p[2]) * t + p[3];
        const double der = (3 * p[0] * t + 2 * p[1]) * t + p[2];
        if (der == 0.0) break;
        t -= val / der;
    }
    return t;
}

// least-squares factor lambda minimizing ||lambda*h - target||
double fit_factor(const Coeffs& h, const Coeffs& target)
{
    double num = 0, den = 0;
    for (int i = 0; i < 4; ++i) {
        num += h[i] * target[i];
        den += h[i] * h[i];
    }
    return den > 0 ? num / den : 0.0;
}

double cond2x2(double a, double b, double c, double d)
{
    const double f1 = a * a + b * b + c * c + d * d;
    const double det = a * d - b * c;
    const double h = std::sqrt(std::max(0.0, f1 * f1 / 4.0 - det * det));
    const double s1 = std::sqrt(f1 / 2.0 + h);
    const double s2 = std::sqrt(std::max(0.0, f1 / 2.0 - h));
    return s2 > 0 ? s1 / s2 : std::numeric_limits<double>::infinity();
}

} // namespace

const char* to_string(PhaseClass c)
{
    switch (c) {
        case PhaseClass::DInf: return "DInf";
        case PhaseClass::D4Plus: return "D4Plus";
        case PhaseClass::D4Minus: return "D4Minus";
        case PhaseClass::A2: return "A2";
        case PhaseClass::Zero: return "Zero";
    }
    return "?";
}

PhaseClass phase_class_from_string(const std::string& s)
{
    if (s == "DInf" || s == "dinf") return PhaseClass::DInf;
    if (s == "D4Plus" || s == "d4plus") return PhaseClass::D4Plus;
    if (s == "D4Minus" || s == "d4minus") return PhaseClass::D4Minus;
    if (s == "A2" || s == "a2") return PhaseClass::A2;
    if (s == "Zero" || s == "zero") return PhaseClass::Zero;
    throw DomainError("unknown phase class: " + s);
}

CubicForm canonical_form(PhaseClass c)
{
    switch (c) {
        case PhaseClass::DInf: return {0, 1, 0, 0};
        case PhaseClass::D4Plus: return {0, 1, 0, 1};
        case PhaseClass::D4Minus: return {0, 1, 0, -1};
        case PhaseClass::A2: return {1, 0, 0, 0};
        case PhaseClass::Zero: return {0, 0, 0, 0};
    }
    return {};
}

CubicForm apply_linear_change(const CubicForm& form, const LinearChange& T)
{
    check_finite(form);
    const double norm2 = T.t11 * T.t11 + T.t12 * T.t12 + T.t21 * T.t21 + T.t22 * T.t22;
    const double det = T.t11 * T.t22 - T.t12 * T.t21;
    if (!std::isfinite(norm2) || !std::isfinite(T.scale))
        throw DomainError("apply_linear_change: non-finite transform");
    if (std::abs(det) < 1e-12 * norm2)
        throw SingularTransformError("apply_linear_change: transform is singular");
    if (!(T.scale > 0))
        throw DomainError("apply_linear_change: scale must be positive");

    // X = t11 x1 + t12 x2, Y = t21 x1 + t22 x2; expand f(X, Y)
    const std::array<double, 2> X{T.t11, T.t12}, Y{T.t21, T.t22};
    const auto X2 = form_mul(X, X);
    const auto X3 = form_mul(X2, X);
    const auto X2Y = form_mul(X2, Y);
    const auto Y2 = form_mul(Y, Y);
    const auto XY2 = form_mul(X, Y2);
    const auto Y3 = form_mul(Y2, Y);

    Coeffs out{};
    for (int i = 0; i < 4; ++i)
        out[i] = T.scale * (form.c30 * X3[i] + form.c21 * X2Y[i] +
                            form.c12 * XY2[i] + form.c03 * Y3[i]);
    return from_array(out);
}

PhaseClass classify(const CubicForm& form, double tol)
{
    check_finite(form);
    if (!(tol > 0 && tol < 1)) throw DomainError("classify: tol must lie in (0,1)");
    const Coeffs raw = as_array(form);
    if (max_abs(raw) == 0.0) return PhaseClass::Zero;

    double factor;
    const Coeffs c = pow2_normalize(raw, factor);
    const double maxn = max_abs(c); // in [1/2, 1]

    // A perfect cube has a vanishing Hessian covariant. Otherwise decide the
    // root multiplicity through the Hessian's discriminant, which equals
    // -3 * disc(cubic) but degrades only like cond^2 under changes of basis
    // (the raw discriminant degrades like cond^6 relative to the coefficient
    // norm, which would break classification of moderately skewed images).
    const auto h = hessian(c);
    const double hmax = std::max({std::abs(h[0]), std::abs(h[1]), std::abs(h[2])});
    if (hmax <= tol * maxn * maxn) return PhaseClass::A2;

    const double disc_h = h[1] * h[1] - 4.0 * h[0] * h[2]; // = -3 * discriminant
    if (std::abs(disc_h) <= tol * hmax * hmax) return PhaseClass::DInf;
    return disc_h < 0 ? PhaseClass::D4Minus : PhaseClass::D4Plus;
}

NormalizeResult normalize(const CubicForm& form, double tol)
{
    const PhaseClass cls = classify(form, tol);
    if (cls == PhaseClass::Zero)
        return {cls, LinearChange{}, 0.0};

    double factor;
    const Coeffs scaled = pow2_normalize(as_array(form), factor);
    const RotatedForm rf = rotate_full_degree(from_array(scaled));
    const Coeffs& g = rf.g;
    const double a = g[0], b = g[1], c = g[2], d = g[3];

    std::array<std::array<double, 2>, 2> cols{}; // columns of T
    double sep = 1.0;

    auto col_from_dir = [](const ProjPoint& p) { return std::array<double, 2>{p.x1, p.x2}; };

    switch (cls) {
        case PhaseClass::A2: {
            const double t3 = -b / (3 * a); // triple root
            const ProjPoint dir = direction_from_root(rf, t3);
            cols[1] = col_from_dir(dir); // triple line to the axis x1 = 0
            cols[0] = {-cols[1][1], cols[1][0]};
            break;
        }
        case PhaseClass::DInf: {
            const double denom = 2 * (b * b - 3 * a * c); // = 2 a^2 (u-v)^2 at a double root
            const double u0 = (9 * a * d - b * c) / denom; // double root
            const double v0 = -b / a - 2 * u0;             // simple root
            const double u = polish_root({0, 3 * a, 2 * b, c}, u0, 2); // root of g'
            const double v = polish_root(g, v0, 2);
            sep = chordal(u, v);
            cols[1] = col_from_dir(direction_from_root(rf, u)); // double -> x1=0
            cols[0] = col_from_dir(direction_from_root(rf, v)); // simple -> x2=0
            break;
        }
        case PhaseClass::D4Minus: {
            // depressed cubic, three real roots by the trigonometric formula
            const double p = (3 * a * c - b * b) / (3 * a * a);
            const double q = (2 * b * b * b - 9 * a * b * c + 27 * a * a * d) / (27 * a * a * a);
            const double m = 2 * std::sqrt(std::max(0.0, -p / 3.0));
            double arg = (m > 0 && p != 0) ? 3 * q / (p * m) : 0.0;
            arg = std::clamp(arg, -1.0, 1.0);
            const double th = std::acos(arg);
            std::array<double, 3> roots;
            for (int k = 0; k < 3; ++k)
                roots[k] =
                    polish_root(g, m * std::cos((th - 2 * M_PI * k) / 3.0) - b / (3 * a), 2);
            sep = std::min({chordal(roots[0], roots[1]), chordal(roots[0], roots[2]),
                            chordal(roots[1], roots[2])});

            // projective frame sending x2=0, x1=x2, x1=-x2 to the root lines;
            // try the six assignments, keep the best-conditioned transform
            std::array<ProjPoint, 3> dirs;
            for (int k = 0; k < 3; ++k) dirs[k] = direction_from_root(rf, roots[k]);
            double best_cond = std::numeric_limits<double>::infinity();
            const int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
            for (auto& pm : perm) {
                const auto r0 = dirs[pm[0]], r1 = dirs[pm[1]], r2 = dirs[pm[2]];
                const double det12 = r1.x1 * r2.x2 - r1.x2 * r2.x1;
                if (std::abs(det12) < 1e-14) continue;
                // solve r0 = A r1 + B r2
                const double A = (r0.x1 * r2.x2 - r0.x2 * r2.x1) / det12;
                const double B = (r1.x1 * r0.x2 - r1.x2 * r0.x1) / det12;
                const double c1[2] = {r0.x1, r0.x2};
                const double c2[2] = {A * r1.x1 - B * r2.x1, A * r1.x2 - B * r2.x2};
                const double cnd = cond2x2(c1[0], c2[0], c1[1], c2[1]);
                if (cnd < best_cond) {
                    best_cond = cnd;
                    cols[0] = {c1[0], c1[1]};
                    cols[1] = {c2[0], c2[1]};
                }
            }
            break;
        }
        case PhaseClass::D4Plus: {
            // one real root by Cardano, then the definite quadratic cofactor
            const double p = (3 * a * c - b * b) / (3 * a * a);
            const double q = (2 * b * b * b - 9 * a * b * c + 27 * a * a * d) / (27 * a * a * a);
            const double D = q * q / 4.0 + p * p * p / 27.0;
            const double sq = std::sqrt(std::max(0.0, D));
            const double t0 = polish_root(
                g, std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq) - b / (3 * a), 3);
            // g = (x1 - t0 x2)(A x1^2 + B x1 x2 + C x2^2)
            const double A = a, B = b + A * t0, C = c + B * t0;
            const double qdisc = B * B - 4 * A * C; // negative for a cc pair
            const std::complex<double> pair(-B / (2 * A),
                                            std::sqrt(std::max(0.0, -qdisc)) / (2 * std::abs(A)));
            sep = chordal(std::complex<double>(t0, 0.0), pair);

            const double sg = (A > 0) ? 1.0 : -1.0;
            const double l11 = std::sqrt(sg * A);
            const double l12 = sg * B / (2 * l11);
            const double l22 = std::sqrt(std::max(sg * C - l12 * l12, 1e-300));
            // n = L^{-T} m with m = (1, -t0)
            const double n1 = 1.0 / l11;
            const double n2 = (-t0 - l12 * n1) / l22;
            const double nn = std::hypot(n1, n2);
            // rotation O sending (0,1) to n/|n|; T = L^{-1} O in the rotated frame
            const double o11 = n2 / nn, o12 = n1 / nn, o21 = -n1 / nn, o22 = n2 / nn;
            const double i11 = 1.0 / l11, i12 = -l12 / (l11 * l22), i22 = 1.0 / l22;
            const double t11 = i11 * o11 + i12 * o21, t12 = i11 * o12 + i12 * o22;
            const double t21 = i22 * o21, t22 = i22 * o22;
            cols[0] = {rf.c * t11 - rf.s * t21, rf.s * t11 + rf.c * t21};
            cols[1] = {rf.c * t12 - rf.s * t22, rf.s * t12 + rf.c * t22};
            break;
        }
        case PhaseClass::Zero:
            break; // handled above
    }

    if (sep < tol)
        throw IllConditionedError("normalize: root separation " + std::to_string(sep) +
                                  " below tol (class boundary)");

    LinearChange T{cols[0][0], cols[1][0], cols[0][1], cols[1][1], 1.0};

    // fit the positive scale, flipping the class's odd axis if needed
    const Coeffs target = as_array(canonical_form(cls));
    Coeffs h = as_array(apply_linear_change(form, T));
    double lam = fit_factor(h, target);
    if (lam < 0) {
        if (cls == PhaseClass::A2) { // canonical form odd in x1
            T.t11 = -T.t11;
            T.t21 = -T.t21;
        } else { // DInf and D4 canonicals are odd in x2
            T.t12 = -T.t12;
            T.t22 = -T.t22;
        }
        h = as_array(apply_linear_change(form, T));
        lam = fit_factor(h, target);
    }
    if (!(lam > 0))
        throw IllConditionedError("normalize: could not fit a positive scale");
    T.scale = lam;

    double residual = 0.0;
    const Coeffs fin = as_array(apply_linear_change(form, T));
    for (int i = 0; i < 4; ++i)
        residual = std::max(residual, std::abs(fin[i] - target[i]));
    return {cls, T, residual};
}

} // namespace mlosc
