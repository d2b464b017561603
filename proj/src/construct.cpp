#include "steklov/construct.hpp"

#include "steklov/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace steklov {

SmallDeltaConstruction build_small_delta(int n, double delta, double m, std::size_t G)
{
    if (n < 1)
        throw Error(Status::invalid_argument, "n must be at least 1", n);
    if (!(delta > 0.0 && delta < 1.0))
        throw Error(Status::invalid_argument, "delta must lie in (0, 1)");
    if (!(m >= 0.0) || !std::isfinite(m))
        throw Error(Status::invalid_argument, "atom mass must be nonnegative");
    if (G == 0)
        G = default_grid_size(static_cast<std::size_t>(n));

    SmallDeltaConstruction sd;
    sd.n = n;
    sd.delta = delta;
    sd.m = m;
    std::vector<Atom> atoms;
    if (m > 0.0)
        for (int k = 1; k <= n; ++k)
            atoms.push_back({two_pi * k / (n + 1.0), m});
    sd.sigma = Measure::from_density(RVec(G, delta / two_pi), atoms);

    const double a = m / (delta + m), b = delta / (delta + m);
    CVec c(n + 1, a);
    c[n] = a + b;
    sd.Phi = Poly(std::move(c));
    sd.Phi_at_1 = 1.0 + m * n / (delta + m);
    sd.norm_sq = delta * sd.Phi_at_1;
    sd.phi_at_1 = sd.Phi_at_1 / std::sqrt(sd.norm_sq);

    // <Phi, z^j> = sum_k a_k s_{k-j}, relative to ||Phi|| ||z^j||
    MomentSequence s = compute_moments(sd.sigma, n);
    const double scale = std::sqrt(sd.norm_sq * s.s[0].real());
    auto mom = [&](int l) { return l >= 0 ? s.s[l] : std::conj(s.s[-l]); };
    for (int j = 0; j < n; ++j) {
        cplx ip = 0.0;
        for (int k = 0; k <= n; ++k)
            ip += sd.Phi.c[k] * mom(k - j);
        sd.orthogonality_residual = std::max(sd.orthogonality_residual, std::abs(ip) / scale);
    }
    return sd;
}

double C_tilde_of(double rho, double alpha, double eps)
{
    return 1.0 / (rho / (1.0 + eps) + std::pow(1.0 + eps, -alpha));
}

cplx F_tilde_at(double rho, double alpha, double eps, cplx z)
{
    const cplx w = 1.0 + eps - z;
    return C_tilde_of(rho, alpha, eps) * (rho / w + std::pow(w, -alpha));
}

Factorization factor_Q(int m, double alpha, const Tolerances& tol)
{
    const TaylorPoly B = taylor_poly(TaylorKind::B, alpha / 2.0, m);
    const TrigPolynomial target = shifted_fejer(m) + TrigPolynomial::from_modulus_sq(B.poly());
    Factorization f = fejer_riesz_factorize(target, tol);
    for (auto& x : f.q.c)
        x = cplx(x.real(), 0.0);
    if (!(f.q.coeff(0).real() > 0.0))
        throw Error(Status::construction_failure, "Q_m(0) is not positive");
    return f;
}

DecouplingConstruction build_decoupling(const DecouplingParams& p)
{
    const int n = p.n;
    if (!(p.alpha > 0.5 && p.alpha < 1.0))
        throw Error(Status::invalid_argument, "alpha must lie in (1/2, 1)");
    if (!(p.rho > 0.0))
        throw Error(Status::invalid_argument, "rho must be positive");
    const int m = static_cast<int>(std::floor(p.delta1 * n));
    if (m < 1 || 2 * m + 1 >= n)
        throw Error(Status::invalid_argument, "need 1 <= floor(delta1 n) and 2 floor(delta1 n) + 1 < n", m);

    DecouplingConstruction c;
    c.params = p;
    c.m = m;
    c.eps = 1.0 / n;
    c.grid = p.grid ? p.grid : std::max<std::size_t>(std::size_t(1) << 18, default_grid_size(n));
    if (!is_pow2(c.grid) || c.grid < 2 * static_cast<std::size_t>(n) + 2)
        throw Error(Status::resolution, "grid must be a power of two above 2n + 2", static_cast<long>(c.grid));

    c.B = taylor_poly(TaylorKind::B, p.alpha / 2.0, m);
    c.A = taylor_poly(TaylorKind::A, 1.0 - p.alpha, m);
    c.factorization = factor_Q(m, p.alpha, p.tol);
    c.Q = c.factorization.q;

    const Poly one_minus_z(CVec{1.0, -1.0});
    const Poly damp = Poly::constant(1.0) - cplx(0.1) * c.A.poly();
    c.P = c.Q * one_minus_z * damp;
    c.f = c.P + c.Q + c.Q.star(n);
    c.f.c.resize(n + 1, 0.0);

    SchurCohnResult sc = inverse_schur_cohn(c.f, n, p.tol.rt);
    c.gamma = sc.gamma;
    c.schur_remainder = sc.max_remainder;
    c.C_n = 1.0 / (c.f.coeff(0).real() * sc.rho_product);
    c.normalization_integral = two_pi * c.C_n * c.C_n;
    c.phi_star = cplx(c.C_n) * c.f;
    c.phi = c.phi_star.star(n);
    c.C_tilde = C_tilde_of(p.rho, p.alpha, c.eps);

    const std::size_t G = c.grid;
    const CVec fv = eval_on_grid(c.f, G);
    const CVec qv = eval_on_grid(c.Q, G);
    c.F_tilde.values.resize(G);
    c.min_re_f = c.min_re_f_over_Q = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < G; ++k) {
        const double th = grid_theta(G, k);
        c.F_tilde.values[k] = F_tilde_at(p.rho, p.alpha, c.eps, std::polar(1.0, th));
        if (fv[k].real() < c.min_re_f) {
            c.min_re_f = fv[k].real();
            c.argmin_re_f = th;
        }
        const double r = (fv[k] / qv[k]).real();
        if (r < c.min_re_f_over_Q) {
            c.min_re_f_over_Q = r;
            c.argmin_re_f_over_Q = th;
        }
    }
    if (!(c.min_re_f_over_Q > 0.0)) {
        std::ostringstream os;
        os << "Re(f_n / Q_m) = " << c.min_re_f_over_Q << " at theta = " << c.argmin_re_f_over_Q;
        throw Error(Status::construction_failure, os.str());
    }
    c.growth_ratio = std::abs(c.phi_star(1.0)) / std::sqrt(static_cast<double>(n));
    c.f1_minus_2Q1 = std::abs(c.f(1.0) - 2.0 * c.Q(1.0));
    return c;
}

ConditionReport check_decoupling_conditions(const DecouplingConstruction& c, double C1, bool quadrature)
{
    const int n = c.params.n;
    ConditionReport r;
    ZeroFreeReport zf = zero_free_closed_disk(c.phi_star);
    r.zero_free = zf.zero_free;
    r.zero_method = zf.method;
    r.min_root_modulus = zf.min_root_modulus;
    r.zero_count_resolved = zf.resolved;

    r.norma_residual = -1.0;
    if (quadrature) {
        const Poly& ps = c.phi_star;
        auto inv = [&](double t) { return 1.0 / std::norm(ps(std::polar(1.0, t))); };
        auto shape = [&](double t) { return -std::norm(ps(std::polar(1.0, t))); };
        AdaptiveResult q = integrate_peaked_periodic(inv, shape, next_pow2(16 * static_cast<std::size_t>(n)), 1e-10);
        r.norma_quadrature = q.value;
        r.norma_evaluations = q.evaluations;
        r.norma_residual = std::abs(q.value / two_pi - 1.0);
    }
    r.growth_ratio = c.growth_ratio;

    const std::size_t G = c.grid;
    const CVec ps = eval_on_grid(c.phi_star, G);
    double mean = 0.0;
    r.min_re_F = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < G; ++k) {
        const cplx F = c.F_tilde.values[k];
        r.min_re_F = std::min(r.min_re_F, F.real());
        mean += F.real();
        const double th = grid_theta(G, k);
        const cplx ph = std::polar(1.0, n * th) * std::conj(ps[k]);
        const double v = (std::abs(ps[k]) + std::abs(F * (ph - ps[k]))) / std::sqrt(F.real());
        if (v > r.c5) {
            r.c5 = v;
            r.c5_argmax = th;
        }
    }
    mean /= static_cast<double>(G);
    r.norka_residual = std::abs(mean - 1.0);
    r.mean_value_residual = std::abs(F_tilde_at(c.params.rho, c.params.alpha, c.eps, 0.0).real() - 1.0);
    r.c5_argmax_scaled = n * std::abs(r.c5_argmax);
    r.C1 = C1;
    r.c5_within_C1 = r.c5 <= C1;

    const Poly lhs = c.f.star(n) - c.f;
    Poly Pn = c.P;
    Pn.c.resize(n + 1, 0.0);
    const Poly rhs = Pn.star(n) - Pn;
    double scale = 0.0;
    for (int j = 0; j <= n; ++j) {
        r.cancellation_residual = std::max(r.cancellation_residual, std::abs(lhs.coeff(j) - rhs.coeff(j)));
        scale = std::max(scale, std::abs(c.f.coeff(j)));
    }
    r.cancellation_residual /= scale;
    return r;
}

namespace {

struct PointEval {
    cplx phi_star, phi, F;
};

PointEval point_eval(const DecouplingConstruction& c, double theta)
{
    const cplx z = std::polar(1.0, theta);
    PointEval e;
    e.phi_star = c.phi_star(z);
    e.phi = std::polar(1.0, c.params.n * theta) * std::conj(e.phi_star);
    e.F = F_tilde_at(c.params.rho, c.params.alpha, c.eps, z);
    return e;
}

} // namespace

double assembled_density(const DecouplingConstruction& c, double theta)
{
    const PointEval e = point_eval(c, theta);
    const cplx D = e.phi + e.phi_star + e.F * (e.phi_star - e.phi);
    return 2.0 * e.F.real() / (pi * std::norm(D));
}

double assembled_peak_shape(const DecouplingConstruction& c, double theta)
{
    const PointEval e = point_eval(c, theta);
    return -std::norm(e.phi + e.phi_star + e.F * (e.phi_star - e.phi));
}

Verblunsky sigma_tilde_verblunsky(const DecouplingConstruction& c, int T)
{
    const std::size_t G = c.grid;
    if (T < 0 || static_cast<std::size_t>(T) >= G / 2)
        throw Error(Status::resolution, "tail order exceeds grid resolution", T);
    RVec w(G);
    for (std::size_t k = 0; k < G; ++k)
        w[k] = c.F_tilde.values[k].real() / two_pi;
    const CVec cf = grid_fourier(w);
    MomentSequence s;
    s.s.resize(T + 1);
    for (int k = 0; k <= T; ++k)
        s.s[k] = two_pi * cf[(G - static_cast<std::size_t>(k)) % G];
    return levinson(s, T, false).gamma;
}

Measure AssembledMeasure::measure() const
{
    RVec w(sigma_prime.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        w[k] = sigma_prime.values[k].real();
    return Measure::from_density(std::move(w));
}

AssembledMeasure assemble_measure(const DecouplingConstruction& c, const AssembleOptions& opt)
{
    const int n = c.params.n;
    const std::size_t G = c.grid;
    AssembledMeasure am;
    am.n = n;

    const Verblunsky head = inverse_szego(c.phi_star, n, c.params.tol);

    const CVec ps = eval_on_grid(c.phi_star, G);
    RVec inv_re(G);
    for (std::size_t k = 0; k < G; ++k)
        inv_re[k] = 1.0 / c.F_tilde.values[k].real();
    const CVec Pi = outer_from_modulus_sq(inv_re);
    am.sigma_prime.values.resize(G);
    double smin = std::numeric_limits<double>::infinity(), pd_max = 0.0;
    RVec sig(G);
    for (std::size_t k = 0; k < G; ++k) {
        const double th = grid_theta(G, k);
        const cplx F = c.F_tilde.values[k];
        const cplx ph = std::polar(1.0, n * th) * std::conj(ps[k]);
        const cplx D = ph + ps[k] + F * (ps[k] - ph);
        const double pim2 = 1.0 / std::norm(Pi[k]);
        am.outer_consistency = std::max(am.outer_consistency, std::abs(pim2 - F.real()) / F.real());
        sig[k] = pim2 * 4.0 / (two_pi * std::norm(D));
        am.sigma_prime.values[k] = sig[k];
        smin = std::min(smin, sig[k]);
        pd_max = std::max(pd_max, std::abs(Pi[k] * D));
    }
    am.delta_realized = two_pi * smin;
    am.steklov_equivalence = pd_max * std::sqrt(am.delta_realized) / 2.0;
    am.mass_grid = grid_integral(sig);

    if (opt.path_b || opt.tail_order > 0) {
        int T = opt.tail_order;
        Verblunsky gt;
        if (T > 0) {
            gt = sigma_tilde_verblunsky(c, T);
            am.tail_energy = std::numeric_limits<double>::quiet_NaN();
        } else {
            const int cap = static_cast<int>(std::min<std::size_t>(24 * static_cast<std::size_t>(n), G / 2 - 1));
            Verblunsky all = sigma_tilde_verblunsky(c, cap);
            RVec suffix(cap + 1, 0.0);
            for (int j = cap - 1; j >= 0; --j)
                suffix[j] = suffix[j + 1] + std::norm(all.gamma[j]);
            T = cap;
            for (int j = 0; j <= cap; ++j)
                if (suffix[j] <= opt.tail_tol) {
                    T = j;
                    break;
                }
            am.tail_energy = suffix[T];
            gt.gamma.assign(all.gamma.begin(), all.gamma.begin() + T);
        }
        am.tail_order = T;
        am.gamma_full.gamma = head.gamma;
        am.gamma_full.gamma.insert(am.gamma_full.gamma.end(), gt.gamma.begin(), gt.gamma.end());
        if (opt.path_b) {
            const PolyPair pp = szego_recurse(am.gamma_full, n + T);
            const CVec vb = eval_on_grid(pp.p_star, G);
            am.path_agreement = 0.0;
            for (std::size_t k = 0; k < G; ++k) {
                const double sb = 1.0 / (two_pi * std::norm(vb[k]));
                am.path_agreement = std::max(am.path_agreement, std::abs(sb - sig[k]) / sig[k]);
            }
        }
    } else {
        am.gamma_full = head;
    }

    if (opt.quadrature || opt.round_trip) {
        auto dens = [&](double t) { return assembled_density(c, t); };
        auto shape = [&](double t) { return assembled_peak_shape(c, t); };
        const std::size_t base = next_pow2(16 * static_cast<std::size_t>(n));
        const RVec peaks = locate_peaks(shape, base);
        am.peaks = peaks.size();
        AdaptiveResult q = integrate_periodic(dens, base, peaks, 1e-9, opt.round_trip);
        am.evaluations = q.evaluations;
        am.mass_adaptive = q.value;
        am.mass_error = q.error;
        if (opt.round_trip) {
            MomentSequence s;
            s.s.assign(n + 1, 0.0);
            const QuadratureRule& r = q.rule;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) {
                const double wv = r.weights[i] * r.values[i];
                const cplx step = std::polar(1.0, r.nodes[i]);
                cplx e = 1.0;
                for (int j = 0; j <= n; ++j) {
                    s.s[j] += wv * e;
                    e *= step;
                }
            }
            const Verblunsky g = levinson(s, n, false).gamma;
            am.round_trip = 0.0;
            for (int j = 0; j < n; ++j)
                am.round_trip = std::max(am.round_trip, std::abs(g.gamma[j] - head.gamma[j]));
        }
    }

    if (opt.path_b && am.path_agreement > c.params.tol.assembly) {
        std::ostringstream os;
        os << "density paths disagree: max relative difference " << am.path_agreement << " at tail order "
           << am.tail_order;
        throw Error(Status::assembly_mismatch, os.str());
    }
    return am;
}

PointwiseBound pointwise_bound_check(const DecouplingConstruction& c, const AssembledMeasure& am)
{
    const int n = c.params.n;
    const double alpha = c.params.alpha;
    const std::size_t G = am.sigma_prime.size() ? am.sigma_prime.size() : c.grid;
    const CVec ps = eval_on_grid(c.phi_star, G);
    PointwiseBound b;
    auto ratio = [&](std::size_t k) {
        const double th = grid_theta(G, k);
        const double nt = n * th;
        const double bound = n / (1.0 + nt * nt) + std::pow(std::abs(th), -alpha);
        return std::norm(ps[k]) / bound;
    };
    for (std::size_t k = 0; k < G; ++k) {
        const double r = ratio(k);
        if (r > b.C) {
            b.C = r;
            b.argmax = grid_theta(G, k);
        }
    }
    b.ratio_at_pi = ratio(0);
    b.ratio_near_zero = ratio(grid_zero_index(G) + 1);
    b.phi_sq_at_pi = std::norm(ps[0]);
    b.phi_sq_at_one = std::norm(ps[grid_zero_index(G)]);
    return b;
}

} // namespace steklov
