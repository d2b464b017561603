#include "steklov/appendix.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace steklov {

namespace {

struct ValueDeriv {
    cplx v, d;
};

ValueDeriv horner(const Poly& p, cplx z)
{
    cplx v = 0.0, d = 0.0;
    for (std::size_t j = p.c.size(); j-- > 0;) {
        d = d * z + v;
        v = v * z + p.c[j];
    }
    return {v, d};
}

RVec theta_samples(const AppendixOptions& opt)
{
    RVec t(static_cast<std::size_t>(opt.theta_samples));
    const double l0 = std::log(opt.theta_min), l1 = std::log(opt.upsilon);
    for (int i = 0; i < opt.theta_samples; ++i)
        t[i] = std::exp(l0 + (l1 - l0) * (i + 0.5) / opt.theta_samples);
    return t;
}

struct Frozen {
    TaylorKind kind;
    double beta;
    double c1, c2, C;
};

// fitted once on orders 2^6..2^12 and theta in (1e-4, 0.1), padded by 10%
constexpr Frozen frozen_table[] = {
    {TaylorKind::A, 0.25, 0.66, 1.02, 0.45},  {TaylorKind::A, 0.5, 0.41, 0.80, 0.74},
    {TaylorKind::A, 0.75, 0.19, 0.46, 0.95},  {TaylorKind::B, 0.125, 0.87, 1.24, 0.27},
    {TaylorKind::B, 0.25, 0.79, 1.37, 0.52},  {TaylorKind::B, 0.375, 0.65, 1.49, 0.74},
};

const Frozen* find_frozen(TaylorKind kind, double beta)
{
    for (const auto& f : frozen_table)
        if (f.kind == kind && std::abs(f.beta - beta) < 1e-12)
            return &f;
    return nullptr;
}

} // namespace

std::pair<double, double> ratio_interval(TaylorKind kind, double beta)
{
    const Frozen* f = find_frozen(kind, beta);
    if (!f)
        throw Error(Status::invalid_argument, "no frozen ratio interval for this exponent");
    return {f->c1, f->c2};
}

double derivative_constant(TaylorKind kind, double beta)
{
    const Frozen* f = find_frozen(kind, beta);
    if (!f)
        throw Error(Status::invalid_argument, "no frozen derivative constant for this exponent");
    return f->C;
}

RatioSuite ratio_suite(TaylorKind kind, double beta, const AppendixOptions& opt)
{
    RatioSuite s;
    s.kind = kind;
    s.beta = beta;
    s.n = opt.orders;
    s.min = std::numeric_limits<double>::infinity();
    s.max = 0.0;
    const RVec th = theta_samples(opt);
    for (int n : opt.orders) {
        const Poly p = taylor_poly(kind, beta, n).poly();
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (double t : th) {
            if (kind == TaylorKind::B && std::abs(t * n - opt.band_center) < opt.band_halfwidth)
                continue;
            const cplx v = horner(p, std::polar(1.0, t)).v;
            const double scale = std::pow(1.0 / n + t, kind == TaylorKind::A ? beta : -beta);
            const double r = v.real() / scale;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            if (kind == TaylorKind::A && !(-v.imag() > 0.0))
                s.sign_ok = false;
            ++s.samples;
        }
        s.lo.push_back(lo);
        s.hi.push_back(hi);
        s.min = std::min(s.min, lo);
        s.max = std::max(s.max, hi);
    }
    if (const Frozen* f = find_frozen(kind, beta)) {
        s.c1 = f->c1;
        s.c2 = f->c2;
        s.passed = s.sign_ok && s.min >= s.c1 && s.max <= s.c2 && s.c1 > 0.0;
    } else {
        s.c1 = s.min;
        s.c2 = s.max;
        s.passed = s.sign_ok && s.min > 0.0 && std::isfinite(s.max);
    }
    return s;
}

DerivativeSuite derivative_suite(TaylorKind kind, double beta, const AppendixOptions& opt)
{
    DerivativeSuite s;
    s.kind = kind;
    s.beta = beta;
    s.n = opt.orders;
    const RVec th = theta_samples(opt);
    double sup_all = 0.0;
    for (int n : opt.orders) {
        const Poly p = taylor_poly(kind, beta, n).poly();
        double sup = 0.0;
        for (double t : th) {
            const double d = std::abs(horner(p, std::polar(1.0, t)).d);
            const double bound = kind == TaylorKind::A
                                     ? std::min(std::pow(n, 1.0 - beta), std::pow(t, beta - 1.0))
                                     : std::min(std::pow(n, 1.0 + beta), std::pow(n, beta) / t);
            sup = std::max(sup, d / bound);
        }
        s.sup.push_back(sup);
        sup_all = std::max(sup_all, sup);
    }
    const Frozen* f = find_frozen(kind, beta);
    s.C = f ? f->C : sup_all;
    s.passed = sup_all <= s.C;
    return s;
}

TailCheck tail_check(double beta, int n)
{
    TailCheck t;
    t.beta = beta;
    t.n = n;
    t.value = taylor_tail_A(beta, n) * boost::math::tgamma(1.0 - beta) * std::pow(n, beta);
    t.passed = t.value >= 0.9 && t.value <= 1.1;
    return t;
}

PhaseCheck phase_check(const AppendixOptions& opt)
{
    PhaseCheck pc;
    pc.m = opt.phase_m;
    const std::size_t G = opt.phase_grid;
    const double h = two_pi / static_cast<double>(G);
    for (int m : opt.phase_m) {
        const Poly Q = factor_Q(m, opt.phase_alpha).q;
        const RVec ph = outer_phase(Q, G);
        double d = 0.0;
        for (std::size_t k = 0; k + 1 < G; ++k)
            d = std::max(d, std::abs(ph[k + 1] - ph[k]) / h);
        pc.ratio.push_back(d / m);
    }
    const auto [lo, hi] = std::minmax_element(pc.ratio.begin(), pc.ratio.end());
    pc.spread = pc.ratio.empty() ? 0.0 : *hi / *lo;
    pc.passed = !pc.ratio.empty() && pc.spread <= opt.phase_spread;
    return pc;
}

NoliCheck noli_check(const AppendixOptions& opt)
{
    NoliCheck nc;
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> deg(1, opt.noli_max_degree);
    std::uniform_real_distribution<double> rad(1.05, 3.0), ang(-pi, pi);
    for (int i = 0; i < opt.noli_instances; ++i) {
        const int n = deg(rng);
        Poly P = Poly::constant(1.0);
        for (int j = 0; j < n; ++j) {
            const cplx r = std::polar(rad(rng), ang(rng));
            P = P * Poly(CVec{1.0, -1.0 / r});
        }
        const ZeroReport z = symmetrized_zero_test(P, n, opt.noli_tol);
        ++nc.instances;
        if (!z.passed)
            ++nc.failures;
        nc.max_deviation = std::max(nc.max_deviation, z.max_deviation);
    }
    nc.passed = nc.failures == 0;
    return nc;
}

double trifle_integral(double gamma, double a)
{
    // x = t^k with k = 1/(1 - gamma) removes the singularity: integrand k cos(t^k)
    const double k = 1.0 / (1.0 - gamma);
    const double T = std::pow(a, 1.0 - gamma);
    RVec breaks{0.0};
    for (double x = pi / 2; x < a; x += pi)
        breaks.push_back(std::pow(x, 1.0 - gamma));
    breaks.push_back(T);
    auto f = [k](double t) { return k * std::cos(std::pow(t, k)); };
    return integrate_adaptive(f, breaks, 1e-12, 1.0).value;
}

TrifleCheck trifle_check(const AppendixOptions& opt)
{
    TrifleCheck tc;
    tc.gammas = opt.trifle_gammas;
    for (int i = 0; i < 40; ++i)
        tc.a.push_back(std::exp(std::log(1e-3) + (std::log(50.0) - std::log(1e-3)) * (i + 1) / 40.0));
    tc.min_value = std::numeric_limits<double>::infinity();
    for (double g : tc.gammas)
        for (double a : tc.a)
            tc.min_value = std::min(tc.min_value, trifle_integral(g, a));
    tc.passed = tc.min_value > 0.0;
    return tc;
}

bool AppendixReport::passed() const
{
    for (const auto& r : ratios)
        if (!r.passed)
            return false;
    for (const auto& d : derivatives)
        if (!d.passed)
            return false;
    for (const auto& t : tails)
        if (!t.passed)
            return false;
    return phase.passed && noli.passed && trifle.passed;
}

AppendixReport appendix_checks(const AppendixOptions& opt)
{
    AppendixReport r;
    for (double b : opt.beta_A) {
        r.ratios.push_back(ratio_suite(TaylorKind::A, b, opt));
        r.derivatives.push_back(derivative_suite(TaylorKind::A, b, opt));
        r.tails.push_back(tail_check(b, opt.tail_n));
    }
    for (double b : opt.beta_B) {
        r.ratios.push_back(ratio_suite(TaylorKind::B, b, opt));
        r.derivatives.push_back(derivative_suite(TaylorKind::B, b, opt));
    }
    r.phase = phase_check(opt);
    r.noli = noli_check(opt);
    r.trifle = trifle_check(opt);
    return r;
}

} // namespace steklov
