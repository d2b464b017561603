#include "steklov/variational.hpp"

#include "steklov/fft.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace steklov {

Measure AtomicSteklovMeasure::to_measure(std::size_t G) const
{
    return Measure::from_density(RVec(G, delta / two_pi), atoms);
}

MomentSequence AtomicSteklovMeasure::moments(int N) const
{
    MomentSequence s;
    s.s.assign(N + 1, 0.0);
    s.s[0] = delta;
    for (const auto& a : atoms) {
        const cplx step = std::polar(1.0, a.angle);
        cplx e = 1.0;
        for (int j = 0; j <= N; ++j) {
            s.s[j] += a.mass * e;
            e *= step;
        }
    }
    return s;
}

void AtomicSteklovMeasure::validate(double tol) const
{
    if (!(delta > 0.0 && delta <= 1.0))
        throw Error(Status::invalid_argument, "delta must lie in (0, 1]");
    double total = 0.0;
    for (const auto& a : atoms) {
        if (!(a.mass >= 0.0))
            throw Error(Status::invalid_argument, "negative atom mass");
        total += a.mass;
    }
    if (std::abs(total - (1.0 - delta)) > tol)
        throw Error(Status::invalid_argument, "atom masses must sum to 1 - delta");
}

double bound_sqrt(int n, double delta) { return std::sqrt((n + 1.0) / delta); }

double bound_l1(int n, double delta)
{
    return (1.0 + std::sqrt(n * (1.0 - delta) / delta)) / std::sqrt(delta);
}

namespace {

double phi_one_of(const MomentSequence& s, int n)
{
    const Verblunsky g = levinson(s, n, false).gamma;
    return std::abs(szego_values(g, n, 1.0).p);
}

} // namespace

BoundReport evaluate_candidate(const AtomicSteklovMeasure& mu, int n)
{
    mu.validate(1e-9);
    BoundReport r;
    r.n = n;
    r.delta = mu.delta;
    r.achieved = phi_one_of(mu.moments(n), n);
    r.bound_sqrt = bound_sqrt(n, mu.delta);
    r.bound_l1 = bound_l1(n, mu.delta);
    return r;
}

namespace {

struct Searcher {
    int n;
    double delta;
    const SearchOptions& opt;
    std::size_t evals = 0;
    bool exhausted = false;
    double best_value = -1.0;
    AtomicSteklovMeasure best;
    double max_ratio = 0.0;
    double bound;

    Searcher(int n_, double d, const SearchOptions& o) : n(n_), delta(d), opt(o), bound(std::min(bound_sqrt(n_, d), bound_l1(n_, d))) {}

    double value(const AtomicSteklovMeasure& mu)
    {
        if (evals >= opt.budget) {
            exhausted = true;
            return -1.0;
        }
        ++evals;
        const double v = phi_one_of(mu.moments(n), n);
        max_ratio = std::max(max_ratio, v / bound);
        if (v > best_value) {
            best_value = v;
            best = mu;
        }
        return v;
    }

    // maximize over a scalar parameter in [lo, hi] given a setter; returns the improved value
    template <class Set>
    double line_search(AtomicSteklovMeasure& mu, double current, double lo, double hi, double x0, int samples, bool periodic,
                       Set set)
    {
        double bx = x0, bv = current;
        const double h = (hi - lo) / samples;
        for (int i = 0; i < samples && !exhausted; ++i) {
            const double x = periodic ? lo + h * (i + 0.5) : lo + (hi - lo) * i / std::max(samples - 1, 1);
            AtomicSteklovMeasure t = mu;
            set(t, x);
            const double v = value(t);
            if (v > bv) {
                bv = v;
                bx = x;
            }
        }
        if (!exhausted) {
            const double a = periodic ? bx - h : std::max(lo, bx - h);
            const double b = periodic ? bx + h : std::min(hi, bx + h);
            std::uintmax_t iters = 40;
            auto neg = [&](double x) {
                AtomicSteklovMeasure t = mu;
                set(t, x);
                const double v = value(t);
                return v < 0.0 ? std::numeric_limits<double>::infinity() : -v;
            };
            auto r = boost::math::tools::brent_find_minima(neg, a, b, 40, iters);
            if (std::isfinite(r.second) && -r.second > bv) {
                bv = -r.second;
                bx = r.first;
            }
        }
        if (bv > current)
            set(mu, bx);
        return std::max(bv, current);
    }

    double ascend(AtomicSteklovMeasure mu)
    {
        double cur = value(mu);
        const int N = static_cast<int>(mu.atoms.size());
        for (int sweep = 0; sweep < 200 && !exhausted; ++sweep) {
            const double before = cur;
            for (int i = 0; i < N && !exhausted; ++i)
                cur = line_search(mu, cur, -pi, pi, mu.atoms[i].angle, opt.angle_samples, true,
                                  [i](AtomicSteklovMeasure& t, double x) { t.atoms[i].angle = wrap_angle(x); });
            for (int i = 0; i < N && !exhausted && N > 1; ++i) {
                int j = (i + 1) % N;
                const double mi = mu.atoms[i].mass, mj = mu.atoms[j].mass;
                cur = line_search(mu, cur, -mi, mj, 0.0, 8, false, [i, j, mi, mj](AtomicSteklovMeasure& t, double x) {
                    t.atoms[i].mass = std::max(0.0, mi + x);
                    t.atoms[j].mass = std::max(0.0, mj - x);
                });
            }
            if (cur - before <= 1e-13 * std::max(1.0, cur))
                break;
        }
        return cur;
    }
};

} // namespace

SearchResult search_extremal(int n, double delta, const SearchOptions& opt)
{
    if (n < 1)
        throw Error(Status::invalid_argument, "n must be at least 1", n);
    if (!(delta > 0.0 && delta < 1.0))
        throw Error(Status::invalid_argument, "delta must lie in (0, 1)");
    const int N = opt.atoms > 0 ? opt.atoms : n;
    Searcher s(n, delta, opt);
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> ang(-pi, pi);
    std::exponential_distribution<double> ex(1.0);
    std::vector<double> finals;
    for (int start = 0; start < opt.starts && !s.exhausted; ++start) {
        AtomicSteklovMeasure mu;
        mu.delta = delta;
        double tot = 0.0;
        for (int k = 0; k < N; ++k) {
            const double e = ex(rng);
            mu.atoms.push_back({ang(rng), e});
            tot += e;
        }
        for (auto& a : mu.atoms)
            a.mass *= (1.0 - delta) / tot;
        finals.push_back(s.ascend(mu));
    }

    SearchResult r;
    r.best = s.best;
    std::sort(r.best.atoms.begin(), r.best.atoms.end(), [](const Atom& a, const Atom& b) { return a.angle < b.angle; });
    r.report = evaluate_candidate(r.best, n);
    r.evaluations = s.evals;
    r.budget_exhausted = s.exhausted;
    r.max_bound_ratio = s.max_ratio;
    std::sort(finals.begin(), finals.end(), std::greater<>());
    for (double v : finals) {
        if (v < opt.report_fraction * s.best_value)
            break;
        if (r.local_maxima.empty() || std::abs(r.local_maxima.back() - v) > opt.distinct_tol * v)
            r.local_maxima.push_back(v);
    }
    return r;
}

double weight_lambda(const RVec& w)
{
    RVec l(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!(w[k] > 0.0))
            throw Error(Status::invalid_argument, "weight must be positive", static_cast<long>(k));
        l[k] = std::log(two_pi * w[k]);
    }
    return std::exp(grid_integral(l) / (2.0 * two_pi));
}

double weight_Lambda(const RVec& w) { return std::sqrt(grid_integral(w)); }

double weight_norm(const RVec& w, double p)
{
    RVec a(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        a[k] = std::pow(std::abs(w[k]), p);
    return std::pow(grid_integral(a), 1.0 / p);
}

PolyPair weighted_szego(const RVec& w, int n)
{
    const Measure mu = Measure::from_density(w);
    const MomentSequence s = compute_moments(mu, n);
    const Verblunsky g = levinson(s, n, false).gamma;
    PolyPair pp = szego_recurse(g, n);
    const double sc = 1.0 / std::sqrt(s.s[0].real());
    for (auto& x : pp.p.c)
        x *= sc;
    for (auto& x : pp.p_star.c)
        x *= sc;
    return pp;
}

cplx weighted_phi_at_one(const RVec& w, int n)
{
    const Measure mu = Measure::from_density(w);
    const MomentSequence s = compute_moments(mu, n);
    const Verblunsky g = levinson(s, n, false).gamma;
    return szego_values(g, n, 1.0).p / std::sqrt(s.s[0].real());
}

WeightPair random_agreeing_pair(std::mt19937_64& rng, std::size_t G, double eps)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto smooth = [&](int modes) {
        RVec a(modes), ph(modes);
        double total = 0.0;
        for (int j = 0; j < modes; ++j) {
            a[j] = u(rng) / (1.0 + j);
            ph[j] = two_pi * u(rng);
            total += a[j];
        }
        const double a0 = total * (1.0 + 0.05 + u(rng));
        RVec w(G);
        for (std::size_t k = 0; k < G; ++k) {
            const double t = grid_theta(G, k);
            double v = a0;
            for (int j = 0; j < modes; ++j)
                v += a[j] * std::cos((j + 1) * t + ph[j]);
            w[k] = v;
        }
        return w;
    };
    WeightPair pair;
    pair.w1 = smooth(1 + static_cast<int>(6 * u(rng)));
    const double m1 = grid_integral(pair.w1);
    for (auto& v : pair.w1)
        v /= m1;
    RVec other = smooth(1 + static_cast<int>(6 * u(rng)));
    const double m2 = grid_integral(other) * (0.5 + u(rng));
    pair.w2 = pair.w1;
    for (std::size_t k = 0; k < G; ++k)
        if (std::abs(grid_theta(G, k)) > eps)
            pair.w2[k] = other[k] / m2;
    return pair;
}

WeightPair peak_pair(std::size_t G, double delta, double width, double eps)
{
    WeightPair pair;
    pair.w1.resize(G);
    for (std::size_t k = 0; k < G; ++k) {
        const double t = grid_theta(G, k);
        pair.w1[k] = delta / two_pi + (1.0 - delta) * std::exp(-0.5 * t * t / (width * width)) /
                                          (std::sqrt(two_pi) * width);
    }
    pair.w2.assign(G, 1.0 / two_pi);
    for (std::size_t k = 0; k < G; ++k)
        if (std::abs(grid_theta(G, k)) <= eps)
            pair.w2[k] = pair.w1[k];
    return pair;
}

LocalizationReport localization_bound(const WeightPair& pair, int n, double eps)
{
    const std::size_t G = pair.w1.size();
    if (G == 0 || pair.w2.size() != G)
        throw Error(Status::invalid_argument, "weights must share one grid");
    if (!(eps > 0.0 && eps < pi))
        throw Error(Status::invalid_argument, "eps must lie in (0, pi)");
    for (std::size_t k = 0; k < G; ++k)
        if (std::abs(grid_theta(G, k)) <= eps && pair.w1[k] != pair.w2[k])
            throw Error(Status::invalid_argument, "weights differ on [-eps, eps]", static_cast<long>(k));

    LocalizationReport r;
    r.lambda1 = weight_lambda(pair.w1);
    r.lambda2 = weight_lambda(pair.w2);
    r.Lambda1 = weight_Lambda(pair.w1);
    r.Lambda2 = weight_Lambda(pair.w2);
    const PolyPair p1 = weighted_szego(pair.w1, n);
    const PolyPair p2 = weighted_szego(pair.w2, n);
    r.lhs = std::abs(p1.p(1.0) / p2.p(1.0));
    const CVec v1 = eval_on_grid(p1.p, G), v2 = eval_on_grid(p2.p, G);
    RVec integrand(G, 0.0);
    for (std::size_t k = 0; k < G; ++k)
        if (std::abs(grid_theta(G, k)) > eps)
            integrand[k] = std::abs(v1[k] * v2[k]) * (pair.w1[k] + pair.w2[k]);
    r.tail_integral = grid_integral(integrand);
    r.rhs = r.Lambda2 / r.lambda1 + 4.0 * r.Lambda1 / (eps * r.lambda1) * r.tail_integral;
    r.slack = r.rhs - r.lhs;
    r.holds = r.lhs <= r.rhs * (1.0 + 1e-6);
    return r;
}

PerturbResult perturb_weight(const RVec& w, const RVec& donor, double delta0, double tau, double p)
{
    const std::size_t G = w.size();
    if (donor.size() != G)
        throw Error(Status::invalid_argument, "donor and weight must share one grid");
    if (!(tau > 0.0 && tau < pi))
        throw Error(Status::invalid_argument, "tau must lie in (0, pi)");
    if (!(delta0 > 0.0))
        throw Error(Status::invalid_argument, "delta0 must be positive");
    RVec w2 = w;
    for (std::size_t k = 0; k < G; ++k)
        if (std::abs(grid_theta(G, k)) < tau)
            w2[k] = donor[k] / delta0;
    PerturbResult r;
    r.norm_before = grid_integral(w2);
    r.w_tilde.resize(G);
    RVec d1(G), dp(G);
    r.floor = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < G; ++k) {
        r.w_tilde[k] = w2[k] / r.norm_before;
        r.floor = std::min(r.floor, r.w_tilde[k]);
        d1[k] = std::abs(w[k] - r.w_tilde[k]);
        dp[k] = std::pow(d1[k], p);
    }
    r.norm_after = grid_integral(r.w_tilde);
    r.deviation_l1 = grid_integral(d1);
    r.deviation_p = std::pow(grid_integral(dp), 1.0 / p);
    return r;
}

double iteration_floor(double delta, int step)
{
    return (delta + (1.0 - delta) * std::ldexp(1.0, -step)) / two_pi;
}

namespace {

double beta_at(const RVec& beta, int k)
{
    if (beta.empty())
        throw Error(Status::invalid_argument, "beta sequence is empty");
    return beta[std::min<std::size_t>(static_cast<std::size_t>(k), beta.size()) - 1];
}

struct Donor {
    RVec density;
    double delta0 = 0.0;
};

} // namespace

IterationResult iterate_growth(double delta, const RVec& beta, int K, const IterationOptions& opt)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw Error(Status::invalid_argument, "delta must lie in (0, 1)");
    if (K < 1 || K > 4)
        throw Error(Status::invalid_argument, "K must lie in 1..4", K);
    const std::size_t G = opt.grid;
    RVec taus = opt.tau_candidates;
    if (taus.empty())
        for (int i = 0; i < 20; ++i)
            taus.push_back(0.5 * std::pow(2.0, -0.5 * i));

    IterationResult res;
    IterationStep first;
    first.w.assign(G, 1.0 / two_pi);
    first.k = {1};
    first.phi_abs = {std::abs(weighted_phi_at_one(first.w, 1))};
    first.norm_p = weight_norm(first.w, opt.p);
    first.floor = 1.0 / two_pi;
    first.floor_required = iteration_floor(delta, 1);
    if (!(first.phi_abs[0] > beta_at(beta, 1)))
        throw Error(Status::step_failure, "first step: |phi_1(1, w_1)| does not exceed beta_1", 1);
    res.steps.push_back(first);

    std::map<int, Donor> donors;
    auto donor_for = [&](int N) -> const Donor& {
        auto it = donors.find(N);
        if (it != donors.end())
            return it->second;
        DecouplingParams dp = opt.donor;
        dp.n = N;
        dp.grid = G;
        const DecouplingConstruction c = build_decoupling(dp);
        AssembleOptions ao;
        ao.path_b = false;
        ao.quadrature = false;
        const AssembledMeasure am = assemble_measure(c, ao);
        Donor d;
        d.density.resize(G);
        for (std::size_t k = 0; k < G; ++k)
            d.density[k] = am.sigma_prime.values[k].real();
        d.delta0 = am.delta_realized;
        return donors.emplace(N, std::move(d)).first->second;
    };

    for (int j = 1; j < K; ++j) {
        const IterationStep& cur = res.steps.back();
        const double floor_j = iteration_floor(delta, j);
        const double eps_max = std::min(opt.C_tilde - cur.norm_p, floor_j - iteration_floor(delta, j + 1));
        if (!(eps_max > 0.0))
            throw Error(Status::step_failure, "no admissible eps: norm bound or floor margin exhausted", j);
        bool done = false;
        double eps = 0.9 * eps_max;
        for (int h = 0; h <= opt.eps_halvings && !done; ++h, eps *= 0.5) {
            for (int N : opt.orders) {
                if (done)
                    break;
                if (N <= cur.k.back())
                    continue;
                const Donor& d = donor_for(N);
                for (double tau : taus) {
                    PerturbResult pr = perturb_weight(cur.w, d.density, d.delta0, tau, opt.p);
                    if (!(pr.deviation_p <= eps && pr.floor >= floor_j - eps))
                        continue;
                    if (!(weight_norm(pr.w_tilde, opt.p) < opt.C_tilde))
                        continue;
                    IterationStep next;
                    next.k = cur.k;
                    next.k.push_back(N);
                    bool ok = true;
                    for (int k : next.k) {
                        const double v = std::abs(weighted_phi_at_one(pr.w_tilde, k));
                        next.phi_abs.push_back(v);
                        if (!(v > beta_at(beta, k) * std::sqrt(static_cast<double>(k))))
                            ok = false;
                    }
                    if (!ok)
                        continue;
                    next.w = std::move(pr.w_tilde);
                    next.eps = eps;
                    next.tau = tau;
                    next.delta0 = d.delta0;
                    next.norm_p = weight_norm(next.w, opt.p);
                    next.floor = pr.floor;
                    next.floor_required = iteration_floor(delta, j + 1);
                    next.deviation_p = pr.deviation_p;
                    res.steps.push_back(std::move(next));
                    done = true;
                    break;
                }
            }
        }
        if (!done)
            throw Error(Status::step_failure, "no admissible (eps, order, tau) found", j + 1);
    }

    const IterationStep& last = res.steps.back();
    res.verified = last.floor >= iteration_floor(delta, K) - 1e-9;
    for (std::size_t i = 0; i < last.k.size(); ++i)
        res.verified = res.verified && last.phi_abs[i] > beta_at(beta, last.k[i]) * std::sqrt(double(last.k[i]));
    return res;
}

} // namespace steklov
