#ifndef MLOSC_DETAIL_GAUSS_HPP
#define MLOSC_DETAIL_GAUSS_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

namespace mlosc::detail {

// Gauss-Legendre rule on [-1,1]. Nodes/weights are computed once by Newton
// iteration on P_n (roots bracketed by the Chebyshev initial guess).
template <int N>
struct GaussRule {
    std::array<double, N> node;
    std::array<double, N> weight;
};

const GaussRule<31>& gauss31();
const GaussRule<15>& gauss15();
const GaussRule<7>& gauss7();

// Values of P_29 and P_30 at the 31 Gauss nodes, used for the per-axis
// smoothness indicator in the 2D engine.
struct LegendreTailTable {
    std::array<double, 31> p29;
    std::array<double, 31> p30;
};
const LegendreTailTable& legendre_tail_table();

// Adaptive 1D quadrature with a GL15/GL7 pair. Recursion splits the interval
// in half until the local two-rule difference fits within the local share of
// the tolerance. Works for real or complex integrands.
template <typename F>
auto integrate_1d(F&& f, double a, double b, double tol, int max_depth = 48)
    -> std::pair<decltype(f(a)), double>
{
    using V = decltype(f(a));
    const auto& g15 = gauss15();
    const auto& g7 = gauss7();

    struct Rec {
        F& f;
        const GaussRule<15>& g15;
        const GaussRule<7>& g7;
        double err_sum = 0;

        V eval15(double lo, double hi) const {
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            V s{};
            for (int i = 0; i < 15; ++i)
                s += g15.weight[i] * f(mid + half * g15.node[i]);
            return half * s;
        }
        V eval7(double lo, double hi) const {
            const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            V s{};
            for (int i = 0; i < 7; ++i)
                s += g7.weight[i] * f(mid + half * g7.node[i]);
            return half * s;
        }
        V run(double lo, double hi, double local_tol, int depth) {
            V v15 = eval15(lo, hi);
            double err = std::abs(v15 - eval7(lo, hi));
            if (err <= local_tol || depth <= 0) {
                err_sum += err;
                return v15;
            }
            const double mid = 0.5 * (lo + hi);
            return run(lo, mid, 0.5 * local_tol, depth - 1) +
                   run(mid, hi, 0.5 * local_tol, depth - 1);
        }
    };

    Rec rec{f, g15, g7};
    V v = rec.run(a, b, tol, max_depth);
    return {v, rec.err_sum};
}

} // namespace mlosc::detail

#endif
