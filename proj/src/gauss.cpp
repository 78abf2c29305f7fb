#include "mlosc/detail/gauss.hpp"

#include <limits>

namespace mlosc::detail {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre_pd(int n, double x)
{
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    double d = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, d};
}

template <int N>
GaussRule<N> make_rule()
{
    GaussRule<N> r{};
    const int m = (N + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev guess for the i-th root of P_N, then Newton.
        double x = -std::cos(M_PI * (i + 0.75) / (N + 0.5));
        for (int it = 0; it < 64; ++it) {
            auto [p, d] = legendre_pd(N, x);
            double step = p / d;
            x -= step;
            if (std::abs(step) <= 4 * std::abs(x) * std::numeric_limits<double>::epsilon())
                break;
        }
        auto [p, d] = legendre_pd(N, x);
        (void)p;
        double w = 2.0 / ((1.0 - x * x) * d * d);
        r.node[i] = x;
        r.node[N - 1 - i] = -x;
        r.weight[i] = w;
        r.weight[N - 1 - i] = w;
    }
    if (N % 2 == 1) {
        auto [p, d] = legendre_pd(N, 0.0);
        (void)p;
        r.node[N / 2] = 0.0;
        r.weight[N / 2] = 2.0 / (d * d);
    }
    return r;
}

double legendre_p(int n, double x)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) return p0;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

} // namespace

const GaussRule<31>& gauss31()
{
    static const GaussRule<31> rule = make_rule<31>();
    return rule;
}

const GaussRule<15>& gauss15()
{
    static const GaussRule<15> rule = make_rule<15>();
    return rule;
}

const GaussRule<7>& gauss7()
{
    static const GaussRule<7> rule = make_rule<7>();
    return rule;
}

const LegendreTailTable& legendre_tail_table()
{
    static const LegendreTailTable table = [] {
        LegendreTailTable t{};
        const auto& g = gauss31();
        for (int i = 0; i < 31; ++i) {
            t.p29[i] = legendre_p(29, g.node[i]);
            t.p30[i] = legendre_p(30, g.node[i]);
        }
        return t;
    }();
    return table;
}

} // namespace mlosc::detail
