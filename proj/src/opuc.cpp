#include "steklov/opuc.hpp"

#include "steklov/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace steklov {

namespace {

constexpr double degenerate_gap = 64.0 * std::numeric_limits<double>::epsilon();

void check_gamma(const Verblunsky& g, int n, bool allow_terminal_unit)
{
    if (n < 0 || static_cast<std::size_t>(n) > g.size())
        throw Error(Status::invalid_argument, "order exceeds number of Verblunsky coefficients", n);
    for (int j = 0; j < n; ++j) {
        double a = std::abs(g.gamma[j]);
        bool terminal = allow_terminal_unit && j == n - 1;
        if (!std::isfinite(a) || a > 1.0 + 1e-14 || (!terminal && a >= 1.0))
            throw Error(Status::invalid_coefficient, "|gamma_j| >= 1", j);
    }
}

double rho_of(cplx g)
{
    double a = std::abs(g);
    return std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
}

PolyPair recurse(const Verblunsky& g, int n, double sign, bool normalize, bool allow_terminal_unit)
{
    check_gamma(g, n, allow_terminal_unit);
    CVec p{1.0}, ps{1.0};
    p.reserve(n + 1);
    ps.reserve(n + 1);
    for (int k = 0; k < n; ++k) {
        const cplx gk = sign * g.gamma[k];
        const double r = normalize ? rho_of(gk) : 1.0;
        CVec np(k + 2, 0.0), nps(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) {
            np[j + 1] += p[j];
            np[j] -= std::conj(gk) * ps[j];
            nps[j] += ps[j];
            nps[j + 1] -= gk * p[j];
        }
        if (normalize) {
            const double inv = 1.0 / r;
            for (auto& x : np)
                x *= inv;
            for (auto& x : nps)
                x *= inv;
        }
        p.swap(np);
        ps.swap(nps);
    }
    return {Poly(std::move(p)), Poly(std::move(ps))};
}

} // namespace

MomentSequence compute_moments(const Measure& mu, int N)
{
    if (N < 0)
        throw Error(Status::invalid_argument, "negative moment order");
    const std::size_t G = mu.grid_size();
    MomentSequence out;
    out.s.assign(static_cast<std::size_t>(N) + 1, 0.0);
    if (G > 0) {
        if (G < 2 * static_cast<std::size_t>(N) + 2)
            throw Error(Status::resolution, "grid too coarse for moment order " + std::to_string(N),
                        static_cast<long>(G));
        CVec w(mu.density.begin(), mu.density.end());
        CVec b = dft(w, +1);
        const double h = two_pi / static_cast<double>(G);
        for (int j = 0; j <= N; ++j)
            out.s[j] = ((j % 2 == 0) ? h : -h) * b[j];
        out.s[0] = cplx(out.s[0].real(), 0.0);
    }
    for (const auto& a : mu.atoms)
        for (int j = 0; j <= N; ++j)
            out.s[j] += a.mass * std::polar(1.0, j * a.angle);
    return out;
}

LevinsonResult levinson(const MomentSequence& ms, int N, bool allow_terminal_unit)
{
    if (ms.s.empty() || N > ms.order())
        throw Error(Status::invalid_argument, "moment sequence shorter than requested order", N);
    const double s0 = ms.s[0].real();
    if (!(s0 > 0.0) || std::abs(ms.s[0].imag()) > 1e-12 * std::abs(s0))
        throw Error(Status::indefinite_moments, "s_0 must be real and positive", 0);
    CVec s(ms.s.size());
    for (std::size_t j = 0; j < s.size(); ++j)
        s[j] = ms.s[j] / s0;

    LevinsonResult res;
    res.gamma.gamma.resize(N);
    CVec a{1.0};
    double D = 1.0;
    for (int k = 0; k < N; ++k) {
        cplx num = 0.0;
        for (int j = 0; j <= k; ++j)
            num += a[j] * s[j + 1];
        const cplx cg = num / D;
        const cplx gk = std::conj(cg);
        const double mod = std::abs(gk);
        const double gap = (1.0 - mod) * (1.0 + mod);
        const bool terminal = allow_terminal_unit && k == N - 1;
        if (!std::isfinite(mod) || (!terminal && gap <= degenerate_gap) || (terminal && gap < -1e-10))
            throw Error(Status::indefinite_moments,
                        "Toeplitz matrix not positive definite at leading minor " + std::to_string(k + 1),
                        k + 1);
        res.gamma.gamma[k] = gk;
        CVec na(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) {
            na[j + 1] += a[j];
            na[j] -= cg * std::conj(a[k - j]);
        }
        a.swap(na);
        D *= std::max(gap, 0.0);
    }
    res.Phi = Poly(std::move(a));
    res.last_D = D;
    return res;
}

Verblunsky verblunsky_from_moments(const MomentSequence& s) { return levinson(s, s.order(), false).gamma; }

PolyPair szego_recurse(const Verblunsky& g, int n) { return recurse(g, n, 1.0, true, false); }

PolyPair second_kind_recurse(const Verblunsky& g, int n) { return recurse(g, n, -1.0, true, false); }

PolyPair monic_recurse(const Verblunsky& g, int n, bool allow_terminal_unit)
{
    return recurse(g, n, 1.0, false, allow_terminal_unit);
}

ValuePair szego_values(const Verblunsky& g, int n, cplx z)
{
    check_gamma(g, n, false);
    cplx p = 1.0, ps = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx gk = g.gamma[k];
        const double inv = 1.0 / rho_of(gk);
        const cplx np = (z * p - std::conj(gk) * ps) * inv;
        const cplx nps = (ps - gk * z * p) * inv;
        p = np;
        ps = nps;
    }
    return {p, ps};
}

double rho_product(const Verblunsky& g, int n)
{
    check_gamma(g, n, false);
    double r = 1.0;
    for (int k = 0; k < n; ++k)
        r *= rho_of(g.gamma[k]);
    return r;
}

SchurCohnResult inverse_schur_cohn(const Poly& phi_star, int n, double remainder_tol)
{
    if (n < 0 || phi_star.degree() > n)
        throw Error(Status::invalid_argument, "phi_star degree exceeds order", n);
    Poly phi = phi_star.star(n);
    const cplx lead = phi.coeff(n);
    if (std::abs(lead) == 0.0)
        throw Error(Status::not_orthonormal, "phi_star(0) = 0", 0);
    CVec P(phi.c.begin(), phi.c.end());
    for (auto& x : P)
        x /= lead;

    SchurCohnResult res;
    res.gamma.gamma.assign(n, 0.0);
    for (int k = n; k >= 1; --k) {
        const cplx gk = -std::conj(P[0]);
        const double mod = std::abs(gk);
        if (!(mod < 1.0))
            throw Error(Status::not_orthonormal, "zero of phi_star in the closed disk (|gamma| >= 1)", k - 1);
        res.gamma.gamma[k - 1] = gk;
        const double gap = (1.0 - mod) * (1.0 + mod);
        // num = Phi_k + conj(gamma) Phi_k^*, Phi_k^* coefficient j = conj(P[k - j])
        double scale = 0.0;
        CVec num(k + 1);
        for (int j = 0; j <= k; ++j) {
            num[j] = P[j] + std::conj(gk) * std::conj(P[k - j]);
            scale = std::max(scale, std::abs(num[j]));
        }
        const double rem = std::abs(num[0]) / std::max(scale, 1e-300);
        res.max_remainder = std::max(res.max_remainder, rem);
        if (rem > remainder_tol)
            throw Error(Status::not_orthonormal, "division step leaves a remainder", k - 1);
        CVec next(k);
        for (int j = 1; j <= k; ++j)
            next[j - 1] = num[j] / gap;
        P.swap(next);
        res.rho_product *= std::sqrt(gap);
    }
    return res;
}

Verblunsky inverse_szego(const Poly& phi_star, int n, const Tolerances& tol)
{
    const cplx b0 = phi_star.coeff(0);
    if (!(b0.real() > 0.0) || std::abs(b0.imag()) > tol.rt * std::abs(b0))
        throw Error(Status::invalid_argument, "phi_star(0) must be real and positive", 0);
    SchurCohnResult sc = inverse_schur_cohn(phi_star, n, tol.rt);
    const double mismatch = std::abs(b0.real() * sc.rho_product - 1.0);
    if (mismatch > tol.rt)
        throw Error(Status::not_orthonormal,
                    "phi_star(0) differs from prod rho^{-1} (relative " + std::to_string(mismatch) + ")", 0);
    PolyPair fwd = szego_recurse(sc.gamma, n);
    double scale = 0.0, diff = 0.0;
    for (int j = 0; j <= n; ++j) {
        scale = std::max(scale, std::abs(phi_star.coeff(j)));
        diff = std::max(diff, std::abs(phi_star.coeff(j) - fwd.p_star.coeff(j)));
    }
    if (diff > tol.rt * scale)
        throw Error(Status::not_orthonormal, "forward recursion does not reproduce the input", n);
    return sc.gamma;
}

cplx cd_kernel(const Verblunsky& g, int n, cplx xi, cplx z)
{
    check_gamma(g, n, false);
    cplx px = 1.0, psx = 1.0, pz = 1.0, psz = 1.0;
    cplx sum = 1.0;
    for (int k = 0; k < n; ++k) {
        const cplx gk = g.gamma[k];
        const double inv = 1.0 / rho_of(gk);
        const cplx npx = (xi * px - std::conj(gk) * psx) * inv;
        const cplx npsx = (psx - gk * xi * px) * inv;
        const cplx npz = (z * pz - std::conj(gk) * psz) * inv;
        const cplx npsz = (psz - gk * z * pz) * inv;
        px = npx;
        psx = npsx;
        pz = npz;
        psz = npsz;
        sum += std::conj(px) * pz;
    }
    return sum;
}

cplx cd_kernel_closed(const Verblunsky& g, int n, cplx xi, cplx z)
{
    if (static_cast<std::size_t>(n) + 1 > g.size())
        throw Error(Status::invalid_argument, "closed form needs gamma_0..gamma_n", n);
    const cplx den = 1.0 - z * std::conj(xi);
    if (std::abs(den) < 1e-12)
        return cd_kernel(g, n, xi, z);
    ValuePair vx = szego_values(g, n + 1, xi);
    ValuePair vz = szego_values(g, n + 1, z);
    return (vz.p_star * std::conj(vx.p_star) - vz.p * std::conj(vx.p)) / den;
}

RVec christoffel_diagonal_on_grid(const Verblunsky& g, int n, std::size_t G)
{
    check_gamma(g, n, false);
    RVec inv_rho(n);
    for (int k = 0; k < n; ++k)
        inv_rho[k] = 1.0 / rho_of(g.gamma[k]);
    RVec out(G);
    for (std::size_t i = 0; i < G; ++i) {
        const cplx z = std::polar(1.0, grid_theta(G, i));
        cplx p = 1.0, ps = 1.0;
        double sum = 1.0;
        for (int k = 0; k < n; ++k) {
            const cplx gk = g.gamma[k];
            const cplx np = (z * p - std::conj(gk) * ps) * inv_rho[k];
            ps = (ps - gk * z * p) * inv_rho[k];
            p = np;
            sum += std::norm(p);
        }
        out[i] = sum;
    }
    return out;
}

Poly insert_point_mass(const Measure& mu, double t, double beta, int n)
{
    if (!(t > 0.0 && t < 1.0))
        throw Error(Status::invalid_argument, "mass fraction t must lie in (0, 1)");
    if (n < 1)
        throw Error(Status::invalid_argument, "order must be positive", n);
    MomentSequence s = compute_moments(mu, n);
    LevinsonResult lv = levinson(s, n, true);
    const cplx xi = std::polar(1.0, beta);

    // K_{n-1}(xi, z) as a polynomial in z
    CVec K(n, 0.0);
    const Verblunsky& g = lv.gamma;
    CVec p{1.0}, ps{1.0};
    K[0] = 1.0;
    cplx px = 1.0, psx = 1.0;
    double kxx = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
        const cplx gk = g.gamma[k];
        const double inv = 1.0 / rho_of(gk);
        CVec np(k + 2, 0.0), nps(k + 2, 0.0);
        for (int j = 0; j <= k; ++j) {
            np[j + 1] += p[j] * inv;
            np[j] -= std::conj(gk) * ps[j] * inv;
            nps[j] += ps[j] * inv;
            nps[j + 1] -= gk * p[j] * inv;
        }
        p.swap(np);
        ps.swap(nps);
        const cplx npx = (xi * px - std::conj(gk) * psx) * inv;
        psx = (psx - gk * xi * px) * inv;
        px = npx;
        kxx += std::norm(px);
        for (int j = 0; j <= k + 1; ++j)
            K[j] += std::conj(px) * p[j];
    }
    const Poly& Phi = lv.Phi;
    const cplx phi_xi = Phi(xi);
    const cplx factor = t * phi_xi / (1.0 - t + t * kxx);
    Poly out = Phi;
    for (int j = 0; j < n; ++j)
        out.c[j] -= factor * K[j];
    return out;
}

Measure bernstein_szego_measure(const Verblunsky& g, int N, std::size_t G)
{
    if (G == 0)
        G = default_grid_size(static_cast<std::size_t>(N));
    PolyPair pp = szego_recurse(g, N);
    CVec v = eval_on_grid(pp.p_star, G);
    RVec w(G);
    for (std::size_t k = 0; k < G; ++k)
        w[k] = 1.0 / (two_pi * std::norm(v[k]));
    return Measure::from_density(std::move(w));
}

double phi_at_one(const MomentSequence& s, int n)
{
    Verblunsky g = levinson(s, n, false).gamma;
    return std::abs(szego_values(g, n, 1.0).p);
}

} // namespace steklov
