#include "steklov/applications.hpp"

#include "steklov/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace steklov {

namespace {

double ln_plus(double a) { return std::max(std::log(std::max(a, 1e-300)), 0.0); }

std::size_t mirror_index(std::size_t G, std::size_t k) { return (G - k) % G; }

} // namespace

double symmetry_residual(const Measure& sigma)
{
    double r = 0.0;
    const std::size_t G = sigma.grid_size();
    for (std::size_t k = 0; k < G; ++k)
        r = std::max(r, std::abs(sigma.density[k] - sigma.density[mirror_index(G, k)]));
    // atoms must pair with their reflections
    for (const auto& a : sigma.atoms) {
        const double target = wrap_angle(-a.angle);
        double best = a.mass;
        for (const auto& b : sigma.atoms)
            if (std::abs(wrap_angle(b.angle - target)) < 1e-12)
                best = std::abs(a.mass - b.mass);
        r = std::max(r, best);
    }
    return r;
}

RealLineMeasure line_measure(const Measure& sigma, double tol)
{
    const double res = symmetry_residual(sigma);
    if (res > tol)
        throw Error(Status::symmetry, "measure is not symmetric under theta -> -theta");
    RealLineMeasure out;
    out.source = sigma;
    const std::size_t G = sigma.grid_size();
    out.floor = G ? std::numeric_limits<double>::infinity() : 0.0;
    for (std::size_t k = G / 2 + 1; k < G; ++k) {
        const double t = grid_theta(G, k);
        out.x.push_back(std::cos(t));
        out.weight.push_back(sigma.density[k] / std::abs(std::sin(t)));
        out.floor = std::min(out.floor, out.weight.back());
    }
    std::reverse(out.x.begin(), out.x.end());
    std::reverse(out.weight.begin(), out.weight.end());
    out.mass = 0.5 * sigma.ac_mass();
    for (const auto& a : sigma.atoms) {
        if (a.angle < 0.0)
            continue;
        const bool endpoint = a.angle == 0.0 || a.angle == pi;
        out.atoms.push_back({std::cos(a.angle), endpoint ? 0.5 * a.mass : a.mass});
        out.mass += out.atoms.back().mass;
    }
    std::sort(out.atoms.begin(), out.atoms.end(), [](const LineAtom& a, const LineAtom& b) { return a.x < b.x; });
    return out;
}

double line_value_at_zero(const Verblunsky& g, int k)
{
    if (k < 0)
        throw Error(Status::invalid_argument, "negative line order", k);
    if (k == 0)
        return std::sqrt(2.0);
    const ValuePair v = szego_values(g, 2 * k, cplx(0.0, 1.0));
    const double Phi0 = -g.gamma[2 * k - 1].real();
    cplx ik = 1.0;
    for (int j = 0; j < k % 4; ++j)
        ik *= cplx(0.0, -1.0);
    return ((v.p + v.p_star) * ik).real() / std::sqrt(1.0 + Phi0);
}

LineTransplant circle_to_line(const Measure& sigma, int k, double tol)
{
    LineTransplant out;
    out.line = line_measure(sigma, tol);
    out.symmetry_residual = symmetry_residual(sigma);
    out.k = k;
    MomentSequence s = compute_moments(sigma, 2 * k);
    out.gamma = levinson(s, 2 * k).gamma;
    for (const auto& g : out.gamma.gamma)
        out.gamma_imag_max = std::max(out.gamma_imag_max, std::abs(g.imag()));
    if (out.gamma_imag_max > tol)
        throw Error(Status::symmetry, "Verblunsky coefficients of a symmetric measure must be real");
    out.P0_all.resize(static_cast<std::size_t>(k) + 1);
    for (int j = 0; j <= k; ++j)
        out.P0_all[j] = line_value_at_zero(out.gamma, j);
    out.P0 = out.P0_all.back();
    return out;
}

Verblunsky rotate_verblunsky(const Verblunsky& g, double a)
{
    Verblunsky out = g;
    for (std::size_t n = 0; n < g.size(); ++n)
        out.gamma[n] = std::polar(1.0, -static_cast<double>(n + 1) * a) * g.gamma[n];
    return out;
}

Verblunsky sieve_verblunsky(const Verblunsky& g, int N)
{
    if (N < 1)
        throw Error(Status::invalid_argument, "sieve factor must be positive", N);
    Verblunsky out;
    out.gamma.assign(g.size() * static_cast<std::size_t>(N), 0.0);
    for (std::size_t j = 0; j < g.size(); ++j)
        out.gamma[N * j + N - 1] = g.gamma[j];
    return out;
}

Measure rotate_measure(const Measure& mu, long steps)
{
    const std::size_t G = mu.grid_size();
    Measure out = mu;
    if (G) {
        const long s = ((steps % static_cast<long>(G)) + static_cast<long>(G)) % static_cast<long>(G);
        for (std::size_t k = 0; k < G; ++k)
            out.density[(k + s) % G] = mu.density[k];
    }
    const double a = G ? two_pi * static_cast<double>(steps) / static_cast<double>(G) : 0.0;
    std::vector<Atom> atoms = mu.atoms;
    for (auto& at : atoms)
        at.angle += a;
    return Measure::from_density(out.density, atoms);
}

Measure dilate_measure(const Measure& mu, int N)
{
    if (N < 1)
        throw Error(Status::invalid_argument, "dilation factor must be positive", N);
    const std::size_t G = mu.grid_size();
    RVec w(G);
    for (std::size_t k = 0; k < G; ++k) {
        const long long j = static_cast<long long>(N) * static_cast<long long>(k) +
                            (1LL - N) * static_cast<long long>(G / 2);
        const long long g = static_cast<long long>(G);
        w[k] = mu.density[static_cast<std::size_t>(((j % g) + g) % g)];
    }
    std::vector<Atom> atoms;
    for (const auto& a : mu.atoms)
        for (int r = 0; r < N; ++r)
            atoms.push_back({(a.angle + two_pi * r) / N, a.mass / N});
    return Measure::from_density(std::move(w), std::move(atoms));
}

SymmetricTransplant symmetric_transplant(const DecouplingConstruction& c, double delta_realized)
{
    SymmetricTransplant out;
    const int n = c.params.n;
    if (n % 2 != 0)
        throw Error(Status::invalid_argument, "transplant needs an even order", n);
    for (const auto& g : c.gamma.gamma)
        out.gamma_imag_max = std::max(out.gamma_imag_max, std::abs(g.imag()));
    if (out.gamma_imag_max > 1e-9)
        throw Error(Status::symmetry, "construction is not symmetric under theta -> -theta");
    const Verblunsky star = sieve_verblunsky(c.gamma, 2);
    out.phi_circle = std::abs(szego_values(star, 2 * n, 1.0).p);
    const Verblunsky rot = rotate_verblunsky(star, pi / 2.0);
    Verblunsky real = rot;
    for (auto& g : real.gamma) {
        out.gamma_imag_max = std::max(out.gamma_imag_max, std::abs(g.imag()));
        g = g.real();
    }
    out.k = n;
    out.P0 = line_value_at_zero(real, n);
    out.ratio = std::abs(out.P0) / std::sqrt(static_cast<double>(n));
    out.line_floor = delta_realized / two_pi;
    return out;
}

EntropyEntry polynomial_entropy(const Measure& sigma, int n)
{
    EntropyEntry e;
    e.n = n;
    const MomentSequence s = compute_moments(sigma, n);
    const Verblunsky g = levinson(s, n, true).gamma;
    const double scale = 1.0 / std::sqrt(sigma.total_mass);
    // |phi_n| = |phi_n^*| on the circle
    Poly phi = szego_recurse(g, n).p_star;
    for (auto& a : phi.c)
        a *= scale;
    const std::size_t G = sigma.grid_size();
    if (G) {
        const CVec v = eval_on_grid(phi, G);
        const double h = two_pi / static_cast<double>(G);
        for (std::size_t k = 0; k < G; ++k) {
            const double a = std::abs(v[k]);
            e.omega += h * a * a * ln_plus(a) * sigma.density[k];
            e.norm_sq += h * a * a * sigma.density[k];
            e.sup_phi = std::max(e.sup_phi, a);
        }
        e.evaluations = G;
    }
    for (const auto& at : sigma.atoms) {
        const double a = std::abs(phi(std::polar(1.0, at.angle)));
        e.omega += at.mass * a * a * ln_plus(a);
        e.norm_sq += at.mass * a * a;
        e.sup_phi = std::max(e.sup_phi, a);
    }
    return e;
}

EntropyEntry polynomial_entropy(const DecouplingConstruction& c, double rel_tol)
{
    EntropyEntry e;
    const int n = c.params.n;
    e.n = n;
    auto mod = [&](double t) { return std::abs(c.phi_star(std::polar(1.0, t))); };
    auto ent = [&](double t) {
        const double a = mod(t);
        return a * a * ln_plus(a) * assembled_density(c, t);
    };
    auto nrm = [&](double t) {
        const double a = mod(t);
        return a * a * assembled_density(c, t);
    };
    auto shape = [&](double t) { return assembled_peak_shape(c, t); };
    const std::size_t base = next_pow2(16 * static_cast<std::size_t>(n));
    const RVec peaks = locate_peaks(shape, base);
    const AdaptiveResult r1 = integrate_periodic(ent, base, peaks, rel_tol);
    const AdaptiveResult r2 = integrate_periodic(nrm, base, peaks, rel_tol);
    e.omega = r1.value;
    e.norm_sq = r2.value;
    e.evaluations = r1.evaluations + r2.evaluations;
    const CVec v = eval_on_grid(c.phi_star, c.grid);
    for (const auto& x : v)
        e.sup_phi = std::max(e.sup_phi, std::abs(x));
    return e;
}

EntropyFit fit_entropy(const std::vector<int>& n, const RVec& omega)
{
    if (n.size() != omega.size() || n.size() < 2)
        throw Error(Status::invalid_argument, "entropy fit needs at least two points");
    const double m = static_cast<double>(n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(static_cast<double>(n[i]));
        sx += x;
        sy += omega[i];
        sxx += x * x;
        sxy += x * omega[i];
    }
    EntropyFit f;
    f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / m;
    double rr = 0, yy = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double r = omega[i] - (f.slope * std::log(static_cast<double>(n[i])) + f.intercept);
        rr += r * r;
        yy += omega[i] * omega[i];
    }
    f.residual = yy > 0 ? std::sqrt(rr / yy) : 0.0;
    return f;
}

} // namespace steklov
