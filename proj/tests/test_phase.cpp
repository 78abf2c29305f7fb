#include "doctest.h"

#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "mlosc/phase.hpp"

using mlosc::CubicForm;
using mlosc::LinearChange;
using mlosc::PhaseClass;

namespace {

bool coeffs_close(const CubicForm& a, const CubicForm& b, double tol)
{
    return std::abs(a.c30 - b.c30) <= tol && std::abs(a.c21 - b.c21) <= tol &&
           std::abs(a.c12 - b.c12) <= tol && std::abs(a.c03 - b.c03) <= tol;
}

// random transform with condition number <= cond_max, via R(t1) diag(s1,s2) R(t2)
LinearChange random_transform(std::mt19937& rng, double cond_max)
{
    std::uniform_real_distribution<double> uth(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> ulog(0.0, std::log10(cond_max));
    std::uniform_real_distribution<double> usc(-0.5, 0.5);
    const double th1 = uth(rng), th2 = uth(rng);
    const double ratio = std::pow(10.0, ulog(rng));
    const double s1 = std::pow(10.0, usc(rng));
    const double s2 = s1 / ratio;
    const double c1 = std::cos(th1), n1 = std::sin(th1);
    const double c2 = std::cos(th2), n2 = std::sin(th2);
    LinearChange T;
    T.t11 = c1 * s1 * c2 - n1 * s2 * n2;
    T.t12 = -c1 * s1 * n2 - n1 * s2 * c2;
    T.t21 = n1 * s1 * c2 + c1 * s2 * n2;
    T.t22 = -n1 * s1 * n2 + c1 * s2 * c2;
    T.scale = 1.0;
    return T;
}

// exact rational pushforward for integer inputs (test-only oracle)
struct Frac {
    long long n = 0, d = 1;
    static Frac make(long long n, long long d)
    {
        long long g = std::gcd(std::abs(n), std::abs(d));
        if (g == 0) return {0, 1};
        if (d < 0) { n = -n; d = -d; }
        return {n / g, d / g};
    }
    Frac operator*(const Frac& o) const { return make(n * o.n, d * o.d); }
    Frac operator+(const Frac& o) const { return make(n * o.d + o.n * d, d * o.d); }
};

std::array<Frac, 4> rational_pushforward(const std::array<long long, 4>& f,
                                         const std::array<long long, 4>& t)
{
    // expand f(t0 x + t1 y, t2 x + t3 y) with exact arithmetic
    auto mul = [](const std::vector<Frac>& a, const std::vector<Frac>& b) {
        std::vector<Frac> r(a.size() + b.size() - 1, Frac{0, 1});
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
        return r;
    };
    std::vector<Frac> X = {Frac::make(t[0], 1), Frac::make(t[1], 1)};
    std::vector<Frac> Y = {Frac::make(t[2], 1), Frac::make(t[3], 1)};
    auto X2 = mul(X, X), X3 = mul(X2, X), X2Y = mul(X2, Y);
    auto Y2 = mul(Y, Y), XY2 = mul(X, Y2), Y3 = mul(Y2, Y);
    std::array<Frac, 4> out{};
    for (int i = 0; i < 4; ++i) {
        out[i] = Frac::make(f[0], 1) * X3[i] + Frac::make(f[1], 1) * X2Y[i] +
                 Frac::make(f[2], 1) * XY2[i] + Frac::make(f[3], 1) * Y3[i];
    }
    return out;
}

const PhaseClass kAllClasses[5] = {PhaseClass::DInf, PhaseClass::D4Plus,
                                   PhaseClass::D4Minus, PhaseClass::A2, PhaseClass::Zero};

} // namespace

TEST_CASE("apply_linear_change: spec examples")
{
    // identity
    CubicForm f{0, 1, 0, 0};
    CHECK(coeffs_close(apply_linear_change(f, LinearChange{}), f, 0.0));

    // swap x1 <-> x2 sends x1^3 to x2^3
    CubicForm cube{1, 0, 0, 0};
    LinearChange swap{0, 1, 1, 0, 1.0};
    CHECK(coeffs_close(apply_linear_change(cube, swap), CubicForm{0, 0, 0, 1}, 0.0));

    // shear: x1^2 x2 with (1,1,0,1) -> (x1+x2)^2 x2 = x1^2 x2 + 2 x1 x2^2 + x2^3
    LinearChange shear{1, 1, 0, 1, 1.0};
    CHECK(coeffs_close(apply_linear_change(f, shear), CubicForm{0, 1, 2, 1}, 0.0));
}

TEST_CASE("apply_linear_change: errors and rational cross-check")
{
    CubicForm f{1, -2, 3, 5};
    LinearChange singular{1, 2, 2, 4, 1.0};
    CHECK_THROWS_AS(apply_linear_change(f, singular), mlosc::SingularTransformError);
    LinearChange negscale{1, 0, 0, 1, -1.0};
    CHECK_THROWS_AS(apply_linear_change(f, negscale), mlosc::DomainError);

    std::mt19937 rng(42);
    std::uniform_int_distribution<long long> ui(-9, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::array<long long, 4> fi{ui(rng), ui(rng), ui(rng), ui(rng)};
        std::array<long long, 4> ti{ui(rng), ui(rng), ui(rng), ui(rng)};
        if (ti[0] * ti[3] - ti[1] * ti[2] == 0) continue;
        CubicForm fd{double(fi[0]), double(fi[1]), double(fi[2]), double(fi[3])};
        LinearChange td{double(ti[0]), double(ti[1]), double(ti[2]), double(ti[3]), 1.0};
        CubicForm got = apply_linear_change(fd, td);
        auto exact = rational_pushforward(fi, ti);
        CHECK(got.c30 == double(exact[0].n) / double(exact[0].d));
        CHECK(got.c21 == double(exact[1].n) / double(exact[1].d));
        CHECK(got.c12 == double(exact[2].n) / double(exact[2].d));
        CHECK(got.c03 == double(exact[3].n) / double(exact[3].d));
    }
}

TEST_CASE("classify: canonical forms and discriminant signs")
{
    CHECK(classify(CubicForm{0, 1, 0, 0}, 1e-9) == PhaseClass::DInf);
    CHECK(classify(CubicForm{0, 1, 0, 1}, 1e-9) == PhaseClass::D4Plus);
    CHECK(classify(CubicForm{0, 1, 0, -1}, 1e-9) == PhaseClass::D4Minus);
    CHECK(classify(CubicForm{1, 0, 0, 0}, 1e-9) == PhaseClass::A2);
    CHECK(classify(CubicForm{0, 0, 0, 1}, 1e-9) == PhaseClass::A2); // x2^3
    CHECK(classify(CubicForm{0, 0, 0, 0}, 1e-9) == PhaseClass::Zero);
    CHECK_THROWS_AS(classify(CubicForm{0, 1, 0, 0}, 2.0), mlosc::DomainError);
}

TEST_CASE("classify/normalize: 1000 random images of each class recover it")
{
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> uscale(0.2, 5.0);
    for (PhaseClass cls : kAllClasses) {
        const CubicForm canon = mlosc::canonical_form(cls);
        int bad = 0;
        double worst_residual = 0.0;
        for (int i = 0; i < 1000; ++i) {
            LinearChange T = random_transform(rng, 100.0);
            T.scale = uscale(rng);
            CubicForm img = apply_linear_change(canon, T);
            if (classify(img, 1e-9) != cls) {
                ++bad;
                continue;
            }
            auto nr = normalize(img, 1e-9);
            if (nr.cls != cls) ++bad;
            worst_residual = std::max(worst_residual, nr.residual);
        }
        INFO("class ", mlosc::to_string(cls), " worst residual ", worst_residual);
        CHECK(bad == 0);
        CHECK(worst_residual < 1e-6);
    }
}

TEST_CASE("normalize: spec examples")
{
    // already canonical
    auto r1 = normalize(CubicForm{0, 1, 0, 0}, 1e-9);
    CHECK(r1.cls == PhaseClass::DInf);
    CHECK(r1.residual < 1e-12);

    // 2 x1^3: monomial rescale
    auto r2 = normalize(CubicForm{2, 0, 0, 0}, 1e-9);
    CHECK(r2.cls == PhaseClass::A2);
    CHECK(coeffs_close(apply_linear_change(CubicForm{2, 0, 0, 0}, r2.change),
                       CubicForm{1, 0, 0, 0}, 1e-12));

    // (x1+x2)^2 (x1-x2) = x1^3 + x1^2 x2 - x1 x2^2 - x2^3
    CubicForm f{1, 1, -1, -1};
    auto r3 = normalize(f, 1e-9);
    CHECK(r3.cls == PhaseClass::DInf);
    CHECK(r3.residual < 1e-9);
    CHECK(coeffs_close(apply_linear_change(f, r3.change), CubicForm{0, 1, 0, 0}, 1e-9));
}

TEST_CASE("normalize: scale is always positive and reported")
{
    std::mt19937 rng(99);
    for (PhaseClass cls : {PhaseClass::DInf, PhaseClass::D4Plus, PhaseClass::D4Minus,
                           PhaseClass::A2}) {
        for (int i = 0; i < 50; ++i) {
            LinearChange T = random_transform(rng, 30.0);
            CubicForm img = apply_linear_change(mlosc::canonical_form(cls), T);
            // also negate the form: class and positive scale must survive
            CubicForm neg{-img.c30, -img.c21, -img.c12, -img.c03};
            for (const CubicForm& probe : {img, neg}) {
                auto nr = normalize(probe, 1e-9);
                CHECK(nr.cls == cls);
                CHECK(nr.change.scale > 0);
            }
        }
    }
}

TEST_CASE("classify: invariance under well-conditioned transforms")
{
    std::mt19937 rng(5);
    CubicForm forms[] = {{0.3, -1.2, 0.7, 2.0}, {1, 1, 1, 1}, {0, 1, 0, -1}, {2, 3, 0, 0}};
    for (const auto& f : forms) {
        PhaseClass base = classify(f, 1e-9);
        for (int i = 0; i < 100; ++i) {
            LinearChange T = random_transform(rng, 50.0);
            CHECK(classify(apply_linear_change(f, T), 1e-9) == base);
        }
    }
}

TEST_CASE("near-degenerate forms: thresholds and conditioning")
{
    // x1^2 x2 + eps x2^3 classifies by threshold on the discriminant
    CHECK(classify(CubicForm{0, 1, 0, 1e-12}, 1e-9) == PhaseClass::DInf);
    CHECK(classify(CubicForm{0, 1, 0, 1e-6}, 1e-9) == PhaseClass::D4Plus);
    CHECK(classify(CubicForm{0, 1, 0, -1e-6}, 1e-9) == PhaseClass::D4Minus);

    // eps x1^3 + x1^2 x2 is a mild perturbation of the DInf canonical
    auto ok = normalize(CubicForm{1e-3, 1, 0, 0}, 1e-9);
    CHECK(ok.cls == PhaseClass::DInf);
    CHECK(ok.residual < 1e-9);

    // x2 (x1^2 - 0.037 x2^2): still D4Minus at tol = 0.4, but the two inner
    // lines sit 0.37 apart in the chordal metric; the conditioning guard fires
    CubicForm tight{0, 1, 0, -0.037};
    CHECK(classify(tight, 0.4) == PhaseClass::D4Minus);
    CHECK_THROWS_AS(normalize(tight, 0.4), mlosc::IllConditionedError);
    auto fine = normalize(tight, 1e-9);
    CHECK(fine.cls == PhaseClass::D4Minus);
    CHECK(fine.residual < 1e-9);
}

TEST_CASE("discriminant sign consistency on exact canonical inputs")
{
    auto disc = [](const CubicForm& f) {
        const double a = f.c30, b = f.c21, c = f.c12, d = f.c03;
        return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c -
               4 * a * c * c * c - 27 * a * a * d * d;
    };
    CHECK(disc(mlosc::canonical_form(PhaseClass::D4Minus)) > 0);
    CHECK(disc(mlosc::canonical_form(PhaseClass::D4Plus)) < 0);
    CHECK(disc(mlosc::canonical_form(PhaseClass::DInf)) == 0);
    CHECK(disc(mlosc::canonical_form(PhaseClass::A2)) == 0);
    CHECK(disc(mlosc::canonical_form(PhaseClass::Zero)) == 0);
}
