#include "oracles.hpp"

#include "steklov/appendix.hpp"
#include "steklov/applications.hpp"
#include "steklov/variational.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>

using namespace steklov;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::map<int, std::pair<bool, std::string>> results;

void report(int id, bool ok, const std::string& detail)
{
    results[id] = {ok, detail};
    std::fprintf(stderr, "[criterion %d done]\n", id);
}

std::string num(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double spread(const RVec& v)
{
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo;
}

// bound checks (criterion 3) and averaged Christoffel-Darboux checks (criterion 13) over every measure below
struct Ledger {
    std::size_t bound_instances = 0;
    double worst_bound_ratio = 0.0;
    std::size_t cd_instances = 0;
    double worst_cd_excess = -INFINITY;

    void bound(int n, double delta, double achieved)
    {
        const double b = std::min(bound_sqrt(n, delta), bound_l1(n, delta));
        worst_bound_ratio = std::max(worst_bound_ratio, achieved / b);
        ++bound_instances;
    }

    // g: coefficients of the probability measure, delta: its Steklov constant
    void cd(const Verblunsky& g, int n, double delta, std::size_t G)
    {
        const RVec K = christoffel_diagonal_on_grid(g, n, G);
        const double kmax = *std::max_element(K.begin(), K.end());
        worst_cd_excess = std::max(worst_cd_excess, kmax / (n + 1.0) - 1.0 / delta);
        ++cd_instances;
    }
} ledger;

Measure with_atoms(double delta, const std::vector<Atom>& atoms, std::size_t G)
{
    return Measure::from_density(RVec(G, delta / two_pi), atoms);
}

void criterion1()
{
    const auto t0 = Clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> natoms(1, 8);
    const double deltas[3] = {0.1, 0.5, 0.9};
    const int n = 30;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const double delta = deltas[t % 3];
        const auto r = oracle::random_steklov(rng, delta, natoms(rng));
        const Measure mu = with_atoms(delta, r.atoms, 4096);
        const Verblunsky g = verblunsky_from_moments(compute_moments(mu, n));
        const auto gs = oracle::gram_schmidt(oracle::atomic_moments(delta, r.atoms, n), n);
        for (int k = 0; k <= n; ++k) {
            const Poly p = szego_recurse(g, k).p;
            double scale = 0.0, diff = 0.0;
            for (int j = 0; j <= k; ++j) {
                scale = std::max(scale, std::abs(gs[k][j]));
                diff = std::max(diff, std::abs(p.coeff(j) - gs[k][j]));
            }
            worst = std::max(worst, diff / scale);
            if (k >= 1)
                ledger.bound(k, delta, std::abs(szego_values(g, k, 1.0).p));
        }
        ledger.cd(g, n, delta, 4096);
    }
    const double secs = seconds_since(t0);
    report(1, worst <= 1e-8 && secs < 10.0,
           "max relative coefficient deviation " + num(worst) + " (tol 1e-8), " + num(secs) + " s (limit 10 s)");
}

void criterion2()
{
    const auto t0 = Clock::now();
    const SmallDeltaConstruction sd = build_small_delta(10, 0.1, 1e6);
    const double target = std::sqrt(11 / 0.1);
    const double rel = std::abs(sd.phi_at_1 / target - 1.0);
    bool monotone = true;
    double prev = 0.0;
    for (double m : {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}) {
        const SmallDeltaConstruction s = build_small_delta(10, 0.1, m);
        monotone = monotone && s.phi_at_1 > prev;
        prev = s.phi_at_1;
    }
    const double secs = seconds_since(t0);
    report(2, rel <= 0.01 && monotone && secs < 1.0,
           "|phi_10(1)| = " + num(sd.phi_at_1) + " vs " + num(target) + ", rel " + num(rel) +
               " (tol 1%), monotone in m: " + (monotone ? "yes" : "no") + ", " + num(secs) + " s (limit 1 s)");
}

void small_delta_sweep()
{
    for (int n : {1, 2, 5, 10, 20})
        for (double delta : {0.1, 0.5, 0.9})
            for (double m : {0.0, 0.01, 1.0, 100.0}) {
                const SmallDeltaConstruction sd = build_small_delta(n, delta, m, 4096);
                // probability normalization of the same measure
                const double mass = sd.sigma.total_mass;
                ledger.bound(n, delta / mass, sd.phi_at_1 * std::sqrt(mass));
                const Verblunsky g = verblunsky_from_moments(compute_moments(sd.sigma, n));
                ledger.cd(g, n, delta / mass, 4096);
            }
}

void search_sweep()
{
    for (int n : {1, 2, 3, 4})
        for (double delta : {0.1, 0.5, 0.9}) {
            SearchOptions o;
            o.budget = 4000;
            o.starts = 4;
            const SearchResult s = search_extremal(n, delta, o);
            ledger.worst_bound_ratio = std::max(ledger.worst_bound_ratio, s.max_bound_ratio);
            ledger.bound_instances += s.evaluations;
        }
}

struct SweepEntry {
    int n = 0;
    DecouplingConstruction c;
    ConditionReport cond;
    AssembledMeasure am;
};

std::map<int, SweepEntry> sweep;

void decoupling_sweep()
{
    for (int n : {64, 128, 256, 512, 1024, 2048}) {
        DecouplingParams p;
        p.n = n;
        p.grid = std::size_t(1) << 18;
        SweepEntry e;
        e.n = n;
        e.c = build_decoupling(p);
        e.cond = check_decoupling_conditions(e.c, 0.0, false);
        AssembleOptions o;
        o.path_b = n == 256;
        e.am = assemble_measure(e.c, o);
        ledger.bound(n, e.am.delta_realized, e.c.growth_ratio * std::sqrt(static_cast<double>(n)));
        ledger.cd(e.am.gamma_full, n, e.am.delta_realized, std::size_t(1) << 14);
        sweep.emplace(n, std::move(e));
    }
}

void criterion4(double secs)
{
    RVec growth, norm, dr;
    double min_re_f = INFINITY;
    int worst_n = 0;
    for (const auto& [n, e] : sweep) {
        growth.push_back(e.c.growth_ratio);
        norm.push_back(e.c.normalization_integral);
        dr.push_back(e.am.delta_realized);
        if (e.c.min_re_f < min_re_f) {
            min_re_f = e.c.min_re_f;
            worst_n = n;
        }
    }
    const bool g_ok = spread(growth) < 1.5, f_ok = min_re_f > 0.0, n_ok = spread(norm) < 2.0,
               d_ok = spread(dr) < 2.0, t_ok = secs < 300.0;
    std::string d = "growth max/min " + num(spread(growth)) + " (< 1.5) [" + num(*std::min_element(growth.begin(), growth.end())) +
                    ", " + num(*std::max_element(growth.begin(), growth.end())) + "]; min Re f_n " + num(min_re_f) +
                    " at n=" + std::to_string(worst_n) + " (> 0); normalization max/min " + num(spread(norm)) +
                    " (< 2); realized delta max/min " + num(spread(dr)) + " (< 2); " + num(secs) + " s (limit 300 s)";
    report(4, g_ok && f_ok && n_ok && d_ok && t_ok, d);
}

void criterion5()
{
    RVec c5;
    for (const auto& [n, e] : sweep)
        c5.push_back(e.cond.c5);
    report(5, spread(c5) < 2.0,
           "condition-5 constant in [" + num(*std::min_element(c5.begin(), c5.end())) + ", " +
               num(*std::max_element(c5.begin(), c5.end())) + "], max/min " + num(spread(c5)) + " (< 2)");
}

void criterion6()
{
    const AssembledMeasure& am = sweep.at(256).am;
    const bool ok = am.path_agreement >= 0.0 && am.path_agreement <= 1e-5 && std::abs(am.mass_adaptive - 1.0) <= 1e-8;
    report(6, ok,
           "paths agree to " + num(am.path_agreement) + " (tol 1e-5), mass " + num(am.mass_adaptive) + " (1 +- 1e-8)");
}

void criterion7()
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> ut(0.05, 0.95), ub(-pi, pi), ud(0.1, 0.9);
    std::uniform_int_distribution<int> un(1, 20), ua(1, 5);
    const std::size_t G = 4096;
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const double delta = ud(rng);
        const auto r = oracle::random_steklov(rng, delta, ua(rng));
        const Measure mu = with_atoms(delta, r.atoms, G);
        const double t = ut(rng), beta = ub(rng);
        const int n = un(rng);
        const Poly ins = insert_point_mass(mu, t, beta, n);
        std::vector<Atom> atoms;
        for (const auto& a : r.atoms)
            atoms.push_back({a.angle, (1.0 - t) * a.mass});
        atoms.push_back({beta, t});
        std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.angle < b.angle; });
        const Measure mixed = with_atoms((1.0 - t) * delta, atoms, G);
        const Poly full = levinson(compute_moments(mixed, n), n).Phi;
        for (int j = 0; j <= n; ++j)
            worst = std::max(worst, std::abs(ins.coeff(j) - full.coeff(j)));
    }
    // five atoms: Phi_5 vanishes at each of them, so inserting at one changes nothing
    Measure five;
    five.atoms = {{-2.5, 0.2}, {-1.0, 0.15}, {0.3, 0.25}, {1.4, 0.2}, {2.9, 0.2}};
    five.refresh_mass();
    const Poly Phi = levinson(compute_moments(five, 5), 5, true).Phi;
    const Poly same = insert_point_mass(five, 0.4, 1.4, 5);
    double zero_case = 0.0;
    for (int j = 0; j <= 5; ++j)
        zero_case = std::max(zero_case, std::abs(same.coeff(j) - Phi.coeff(j)));
    report(7, worst <= 1e-10 && zero_case <= 1e-10,
           "max deviation from recomputation " + num(worst) + " over 20 cases, zero case " + num(zero_case) +
               " (tol 1e-10)");
}

void criterion8()
{
    std::mt19937_64 rng(88);
    std::uniform_real_distribution<double> ue(0.05, 1.0);
    std::uniform_int_distribution<int> un(1, 64);
    int holds = 0;
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double eps = ue(rng);
        const int n = un(rng);
        const WeightPair p = random_agreeing_pair(rng, std::size_t(1) << 13, eps);
        const LocalizationReport r = localization_bound(p, n, eps);
        if (r.lhs <= r.rhs * (1.0 + 1e-6))
            ++holds;
        worst = std::max(worst, r.lhs / r.rhs);
        const Verblunsky g = verblunsky_from_moments(compute_moments(Measure::from_density(p.w1), n));
        ledger.bound(n, two_pi * *std::min_element(p.w1.begin(), p.w1.end()), std::abs(szego_values(g, n, 1.0).p));
    }
    report(8, holds == 100, std::to_string(holds) + "/100 pairs hold, max LHS/RHS " + num(worst) + " (<= 1 + 1e-6)");
}

void criterion9()
{
    const auto t0 = Clock::now();
    try {
        const IterationResult r = iterate_growth(0.5, {0.1}, 3);
        const IterationStep& last = r.steps.back();
        bool grow = last.k.size() == 3;
        std::string d = "k_j:";
        for (std::size_t j = 0; j < last.k.size(); ++j) {
            grow = grow && last.phi_abs[j] > 0.1 * std::sqrt(static_cast<double>(last.k[j]));
            d += " " + std::to_string(last.k[j]) + " (|phi| " + num(last.phi_abs[j]) + ")";
        }
        const double need = (0.5 + 0.5 / 8.0) / two_pi - 1e-9;
        const bool floor_ok = last.floor >= need;
        report(9, grow && floor_ok, d + "; floor " + num(last.floor) + " (>= " + num(need) + ")");
    } catch (const Error& e) {
        report(9, false, std::string("iteration stopped: ") + e.what() + " (" + num(seconds_since(t0)) + " s)");
    }
}

void criterion10()
{
    std::vector<int> ns;
    RVec omega;
    for (const auto& [n, e] : sweep) {
        if (n > 1024)
            continue;
        ns.push_back(n);
        omega.push_back(polynomial_entropy(e.c).omega);
    }
    const EntropyFit f = fit_entropy(ns, omega);
    bool zero = true;
    for (int n : {1, 8, 64, 256})
        zero = zero && polynomial_entropy(Measure::lebesgue(4096), n).omega == 0.0;
    std::string d = "Omega:";
    for (std::size_t i = 0; i < ns.size(); ++i)
        d += " " + std::to_string(ns[i]) + "->" + num(omega[i]);
    d += "; slope " + num(f.slope) + " (> 0), relative residual " + num(f.residual) +
         " (< 0.1); Lebesgue entropy exactly 0: " + (zero ? "yes" : "no");
    report(10, f.slope > 0.0 && f.residual < 0.1 && zero, d);
}

void criterion11()
{
    const LineTransplant t = circle_to_line(Measure::lebesgue(std::size_t(1) << 14), 10);
    const RVec ref = oracle::chebyshev_line_values(10);
    double worst = 0.0;
    for (int k = 0; k <= 10; ++k)
        worst = std::max(worst, std::abs(t.P0_all[k] - ref[k]));
    double cmin = INFINITY;
    std::string d = "Lebesgue vs line oracle " + num(worst) + " (tol 1e-8); |P_k(0)|/sqrt(k):";
    for (int k : {32, 64, 128}) {
        DecouplingParams p;
        p.n = k;
        p.grid = std::size_t(1) << 18;
        const DecouplingConstruction c = build_decoupling(p);
        const AssembledMeasure am = assemble_measure(c, AssembleOptions{0, 1e-14, false, false, false});
        const SymmetricTransplant s = symmetric_transplant(c, am.delta_realized);
        cmin = std::min(cmin, s.ratio);
        d += " " + std::to_string(k) + "->" + num(s.ratio);
    }
    d += "; reported constant " + num(cmin) + " (> 0)";
    report(11, worst <= 1e-8 && cmin > 0.0, d);
}

void criterion12()
{
    const AppendixReport a = appendix_checks();
    std::string d;
    for (const auto& s : a.ratios)
        d += std::string(s.kind == TaylorKind::A ? "A" : "B") + "(" + num(s.beta) + ") [" + num(s.min) + ", " +
             num(s.max) + "] in [" + num(s.c1) + ", " + num(s.c2) + "]" + (s.passed ? "" : " FAILED") + "; ";
    for (const auto& t : a.tails)
        d += "tail(" + num(t.beta) + ") " + num(t.value) + "; ";
    d += "phase spread " + num(a.phase.spread) + " (< 1.5); root deviation " + num(a.noli.max_deviation) +
         " over " + std::to_string(a.noli.instances) + " instances (tol 1e-7)";
    report(12, a.passed(), d);
}

void criterion3()
{
    report(3, ledger.bound_instances >= 500 && ledger.worst_bound_ratio <= 1.0 + 1e-6,
           std::to_string(ledger.bound_instances) + " instances, max |phi_n(1)|/bound " +
               num(ledger.worst_bound_ratio) + " (<= 1 + 1e-6)");
}

void criterion13()
{
    report(13, ledger.worst_cd_excess <= 1e-6,
           std::to_string(ledger.cd_instances) + " measures, max of K_n(z,z)/(n+1) - 1/delta " +
               num(ledger.worst_cd_excess) + " (<= 1e-6)");
}

} // namespace

int main()
{
    criterion1();
    criterion2();
    small_delta_sweep();
    search_sweep();
    const auto t0 = Clock::now();
    decoupling_sweep();
    criterion4(seconds_since(t0));
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    criterion11();
    criterion12();
    criterion3();
    criterion13();
    int failed = 0;
    for (const auto& [id, r] : results) {
        std::printf("criterion %2d: %s  %s\n", id, r.first ? "PASS" : "FAIL", r.second.c_str());
        failed += r.first ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failed, results.size());
    return failed == 0 ? 0 : 1;
}
