#include "steklov/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace steklov {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
using GL = boost::math::quadrature::gauss<double, 7>;

struct Panel {
    double a, b;
    int depth;
};

struct PanelEval {
    double k15 = 0.0, g7 = 0.0, abs_sum = 0.0;
    std::array<double, 15> x{}, w{}, fx{};
};

PanelEval eval_panel(const ScalarFn& f, double a, double b)
{
    const auto& xa = GK::abscissa();
    const auto& wk = GK::weights();
    const auto& wg = GL::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    PanelEval e;
    std::size_t slot = 0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        if (i == 0) {
            const double v = f(c);
            e.k15 += wk[0] * v;
            e.g7 += wg[0] * v;
            e.x[slot] = c;
            e.w[slot] = wk[0] * h;
            e.fx[slot++] = v;
            continue;
        }
        const double x1 = c - h * xa[i], x2 = c + h * xa[i];
        const double v1 = f(x1), v2 = f(x2);
        e.k15 += wk[i] * (v1 + v2);
        if (i % 2 == 0)
            e.g7 += wg[i / 2] * (v1 + v2);
        e.x[slot] = x1;
        e.w[slot] = wk[i] * h;
        e.fx[slot++] = v1;
        e.x[slot] = x2;
        e.w[slot] = wk[i] * h;
        e.fx[slot++] = v2;
    }
    for (std::size_t i = 0; i < slot; ++i)
        e.abs_sum += e.w[i] * std::abs(e.fx[i]);
    e.k15 *= h;
    e.g7 *= h;
    return e;
}

} // namespace

AdaptiveResult integrate_adaptive(const ScalarFn& f, const RVec& breaks, double rel_tol, double scale, bool keep_rule,
                                  int max_depth, std::size_t max_evaluations)
{
    AdaptiveResult res;
    if (breaks.size() < 2)
        return res;
    const double total_width = breaks.back() - breaks.front();
    std::vector<Panel> stack;
    for (std::size_t i = breaks.size() - 1; i-- > 0;)
        if (breaks[i + 1] > breaks[i])
            stack.push_back({breaks[i], breaks[i + 1], 0});
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        PanelEval e = eval_panel(f, p.a, p.b);
        res.evaluations += 15;
        const double err = std::abs(e.k15 - e.g7);
        const double budget = std::max(rel_tol * std::max(std::abs(e.k15), std::abs(scale) * (p.b - p.a) / total_width),
                                       50.0 * std::numeric_limits<double>::epsilon() * e.abs_sum);
        const double mid = 0.5 * (p.a + p.b);
        const bool tiny = !(mid > p.a && mid < p.b) || (p.b - p.a) <= 1e-14 * std::max(1.0, std::abs(mid));
        const bool exhausted = res.evaluations >= max_evaluations;
        if (err <= budget || tiny || p.depth >= max_depth || exhausted) {
            if (!(err <= budget) && !tiny)
                res.converged = false;
            res.value += e.k15;
            res.error += err;
            ++res.panels;
            if (keep_rule) {
                res.rule.nodes.insert(res.rule.nodes.end(), e.x.begin(), e.x.end());
                res.rule.weights.insert(res.rule.weights.end(), e.w.begin(), e.w.end());
                res.rule.values.insert(res.rule.values.end(), e.fx.begin(), e.fx.end());
            }
            continue;
        }
        stack.push_back({mid, p.b, p.depth + 1});
        stack.push_back({p.a, mid, p.depth + 1});
    }
    return res;
}

RVec locate_peaks(const ScalarFn& f, std::size_t base)
{
    RVec v(base);
    const double h = two_pi / static_cast<double>(base);
    for (std::size_t k = 0; k < base; ++k)
        v[k] = f(grid_theta(base, k));
    RVec peaks;
    for (std::size_t k = 0; k < base; ++k) {
        const double l = v[(k + base - 1) % base], r = v[(k + 1) % base];
        if (!(v[k] >= l && v[k] > r))
            continue;
        const double c = grid_theta(base, k);
        auto neg = [&](double t) { return -f(t); };
        auto m = boost::math::tools::brent_find_minima(neg, c - h, c + h, 52);
        peaks.push_back(wrap_angle(m.first));
    }
    std::sort(peaks.begin(), peaks.end());
    peaks.erase(std::unique(peaks.begin(), peaks.end()), peaks.end());
    return peaks;
}

AdaptiveResult integrate_peaked_periodic(const ScalarFn& f, const ScalarFn& shape, std::size_t base, double rel_tol,
                                         bool keep_rule)
{
    return integrate_periodic(f, base, locate_peaks(shape, base), rel_tol, keep_rule);
}

AdaptiveResult integrate_periodic(const ScalarFn& f, std::size_t base, const RVec& extra_breaks, double rel_tol,
                                  bool keep_rule)
{
    RVec breaks(base + 1);
    double scale = 0.0;
    for (std::size_t k = 0; k <= base; ++k)
        breaks[k] = -pi + two_pi * static_cast<double>(k) / static_cast<double>(base);
    for (std::size_t k = 0; k < base; ++k)
        scale += std::abs(f(breaks[k]));
    scale *= two_pi / static_cast<double>(base);
    breaks.insert(breaks.end(), extra_breaks.begin(), extra_breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    return integrate_adaptive(f, breaks, rel_tol, scale, keep_rule);
}

double apply_rule(const QuadratureRule& r, const ScalarFn& g)
{
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        s += r.weights[i] * r.values[i] * g(r.nodes[i]);
    return s;
}

} // namespace steklov
