#include "steklov/special.hpp"

#include "steklov/fft.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace steklov {

cplx TrigPolynomial::eval(double theta) const
{
    cplx acc = 0.0;
    for (int j = -d; j <= d; ++j)
        acc += c[j + d] * std::polar(1.0, j * theta);
    return acc;
}

RVec TrigPolynomial::real_on_grid(std::size_t G) const
{
    CVec a(G, 0.0);
    const long g = static_cast<long>(G);
    for (int j = -d; j <= d; ++j) {
        long slot = ((j % g) + g) % g;
        a[slot] += (j % 2 == 0) ? c[j + d] : -c[j + d];
    }
    CVec v = dft(a, +1);
    RVec out(G);
    for (std::size_t k = 0; k < G; ++k)
        out[k] = v[k].real();
    return out;
}

TrigPolynomial TrigPolynomial::from_modulus_sq(const Poly& q)
{
    TrigPolynomial t;
    t.d = q.degree();
    t.c.assign(2 * t.d + 1, 0.0);
    for (int l = 0; l <= t.d; ++l) {
        cplx s = 0.0;
        for (int k = 0; k + l <= t.d; ++k)
            s += q.c[k + l] * std::conj(q.c[k]);
        t.c[l + t.d] = s;
        t.c[t.d - l] = std::conj(s);
    }
    t.real_valued = true;
    return t;
}

TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b)
{
    TrigPolynomial t;
    t.d = std::max(a.d, b.d);
    t.c.assign(2 * t.d + 1, 0.0);
    for (int j = -t.d; j <= t.d; ++j)
        t.c[j + t.d] = a.coeff(j) + b.coeff(j);
    t.real_valued = a.real_valued && b.real_valued;
    return t;
}

TrigPolynomial operator*(double s, const TrigPolynomial& a)
{
    TrigPolynomial t = a;
    for (auto& x : t.c)
        x *= s;
    return t;
}

TrigPolynomial fejer_kernel(int m)
{
    if (m < 1)
        throw Error(Status::invalid_argument, "Fejer kernel order must be >= 1", m);
    TrigPolynomial t;
    t.d = m - 1;
    t.c.assign(2 * t.d + 1, 0.0);
    for (int j = -t.d; j <= t.d; ++j)
        t.c[j + t.d] = 1.0 - std::abs(j) / static_cast<double>(m);
    return t;
}

double fejer_value(int m, double theta)
{
    const double s = std::sin(theta / 2.0);
    if (std::abs(s) < 1e-7) {
        const double md = m;
        return md - md * (md * md - 1.0) * theta * theta / 12.0;
    }
    const double num = std::sin(m * theta / 2.0);
    return num * num / (m * s * s);
}

TrigPolynomial shifted_fejer(int m)
{
    TrigPolynomial t = fejer_kernel(m);
    for (int j = -t.d; j <= t.d; ++j)
        t.c[j + t.d] *= 1.0 + std::cos(j * pi / m);
    return t;
}

double shifted_fejer_value(int m, double theta)
{
    return fejer_value(m, theta) + 0.5 * fejer_value(m, theta - pi / m) + 0.5 * fejer_value(m, theta + pi / m);
}

Poly TaylorPoly::poly() const
{
    CVec c(static_cast<std::size_t>(n) + 1);
    c[0] = 1.0;
    const double sign = kind == TaylorKind::A ? -1.0 : 1.0;
    for (int j = 1; j <= n; ++j)
        c[j] = sign * coeffs[j];
    return Poly(std::move(c));
}

double taylor_tail_A(double beta, int n)
{
    double M = 1.0;
    for (int k = 1; k <= n; ++k)
        M *= (k - beta) / k;
    return M;
}

TaylorPoly taylor_poly(TaylorKind kind, double beta, int n, bool enforce_window)
{
    if (n < 0)
        throw Error(Status::invalid_argument, "negative degree", n);
    const double hi = kind == TaylorKind::A ? 1.0 : 0.5;
    if (!(beta > 0.0) || (enforce_window && !(beta < hi)) || (!enforce_window && !(beta < 1.0)))
        throw Error(Status::invalid_argument, "exponent outside the admissible window");
    TaylorPoly t;
    t.kind = kind;
    t.beta = beta;
    t.n = n;
    t.coeffs.assign(static_cast<std::size_t>(n) + 1, 0.0);
    if (n >= 1)
        t.coeffs[1] = beta;
    for (int j = 1; j < n; ++j) {
        const double r = kind == TaylorKind::A ? (j - beta) / (j + 1.0) : (j + beta) / (j + 1.0);
        t.coeffs[j + 1] = t.coeffs[j] * r;
    }
    if (kind == TaylorKind::A)
        t.tail = taylor_tail_A(beta, n);
    return t;
}

namespace {

// analytic part of the cepstrum of log g, evaluated back on the grid
CVec analytic_log_half(const RVec& g)
{
    const std::size_t N = g.size();
    RVec L(N);
    for (std::size_t k = 0; k < N; ++k)
        L[k] = std::log(g[k]);
    CVec C = grid_fourier(L);
    CVec H(N / 2, 0.0);
    H[0] = 0.5 * C[0].real();
    for (std::size_t j = 1; j < N / 2; ++j)
        H[j] = C[j];
    return eval_on_grid(H, N);
}

bool is_real_symmetric(const TrigPolynomial& p)
{
    for (int j = -p.d; j <= p.d; ++j)
        if (std::abs(p.coeff(j).imag()) > 1e-14 * (1.0 + std::abs(p.coeff(j))))
            return false;
    return true;
}

double modulus_residual(const Poly& q, const TrigPolynomial& p, std::size_t N)
{
    CVec qv = eval_on_grid(q, N);
    RVec pv = p.real_on_grid(N);
    double r = 0.0;
    for (std::size_t k = 0; k < N; ++k)
        r = std::max(r, std::abs(std::norm(qv[k]) - pv[k]) / std::max(pv[k], 1e-300));
    return r;
}

} // namespace

Factorization fejer_riesz_factorize(const TrigPolynomial& p, const Tolerances& tol)
{
    if (!p.real_valued)
        throw Error(Status::not_factorizable, "trigonometric polynomial is not real-valued");
    const int d = p.d;
    std::size_t N = next_pow2(std::max<std::size_t>(64, 32 * static_cast<std::size_t>(d + 1)));
    const std::size_t N_max = std::size_t(1) << 22;
    const bool real_coeffs = is_real_symmetric(p);
    for (;;) {
        RVec pv = p.real_on_grid(N);
        const auto mm = std::minmax_element(pv.begin(), pv.end());
        const double pmin = *mm.first, pmax = *mm.second;
        if (pmin < tol.pos) {
            if (pmin >= -1e-12 * std::max(pmax, 1.0) && d <= 64)
                return fejer_riesz_roots(p);
            throw Error(Status::not_factorizable, "p below the positivity floor on the grid",
                        static_cast<long>(mm.first - pv.begin()));
        }
        CVec h = analytic_log_half(pv);
        CVec Qv(N);
        for (std::size_t k = 0; k < N; ++k)
            Qv[k] = std::exp(h[k]);
        CVec q = grid_fourier(Qv);
        double total = 0.0, tail = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            total += std::norm(q[j]);
            if (static_cast<long>(j) > d)
                tail += std::norm(q[j]);
        }
        const double trunc = std::sqrt(tail / total);
        Factorization f;
        f.method = "cepstral";
        f.grid = N;
        f.truncation_error = trunc;
        CVec c(q.begin(), q.begin() + d + 1);
        if (real_coeffs)
            for (auto& x : c)
                x = cplx(x.real(), 0.0);
        f.q = Poly(std::move(c));
        f.residual = modulus_residual(f.q, p, N);
        if (f.residual > tol.fact || trunc > tol.fact) {
            if (N < N_max) {
                N *= 2;
                continue;
            }
            throw Error(Status::degree_insufficient,
                        "cepstral truncation error " + std::to_string(std::max(trunc, f.residual)), d);
        }
        return f;
    }
}

Factorization fejer_riesz_roots(const TrigPolynomial& p)
{
    const int d = p.d;
    if (d > 64)
        throw Error(Status::invalid_argument, "root-based factorization limited to degree 64", d);
    Factorization f;
    f.method = "roots";
    if (d == 0) {
        const double c0 = p.coeff(0).real();
        if (!(c0 > 0.0))
            throw Error(Status::not_factorizable, "nonpositive constant");
        f.q = Poly::constant(std::sqrt(c0));
        return f;
    }
    CVec lc(2 * d + 1);
    for (int k = 0; k <= 2 * d; ++k)
        lc[k] = p.coeff(k - d);
    std::vector<cplx> roots = poly_roots(Poly(lc));
    std::vector<cplx> keep, circle;
    for (const auto& r : roots) {
        const double a = std::abs(r);
        if (a > 1.0 + 1e-6)
            keep.push_back(r);
        else if (a >= 1.0 - 1e-6)
            circle.push_back(r);
    }
    std::sort(circle.begin(), circle.end(), [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
    if (circle.size() % 2 != 0)
        throw Error(Status::not_factorizable, "odd multiplicity zero on the circle");
    // a double zero near theta = pi may straddle the branch cut of arg
    if (circle.size() >= 2 && std::abs(circle.front() - circle.back()) < std::abs(circle[0] - circle[1]))
        std::rotate(circle.begin(), circle.begin() + 1, circle.end());
    for (std::size_t k = 0; k + 1 < circle.size(); k += 2) {
        cplx m = 0.5 * (circle[k] + circle[k + 1]);
        keep.push_back(m / std::abs(m));
    }
    if (static_cast<int>(keep.size()) != d)
        throw Error(Status::not_factorizable, "root split does not give degree d", static_cast<long>(keep.size()));
    Poly q = Poly::constant(1.0);
    for (const auto& r : keep)
        q = q * Poly(CVec{-r, 1.0});
    const std::size_t N = next_pow2(64 * static_cast<std::size_t>(d + 1));
    RVec pv = p.real_on_grid(N);
    const std::size_t kmax = static_cast<std::size_t>(std::max_element(pv.begin(), pv.end()) - pv.begin());
    const cplx qv = q(std::polar(1.0, grid_theta(N, kmax)));
    const double s = std::sqrt(pv[kmax]) / std::abs(qv);
    const cplx q0 = q.coeff(0);
    const cplx rot = std::conj(q0) / std::abs(q0);
    q = (s * rot) * q;
    if (is_real_symmetric(p))
        for (auto& x : q.c)
            x = cplx(x.real(), 0.0);
    f.q = q;
    f.grid = N;
    f.residual = modulus_residual(f.q, p, N);
    return f;
}

CVec outer_from_modulus_sq(const RVec& g)
{
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!(g[k] > 0.0))
            throw Error(Status::not_factorizable, "modulus must be positive", static_cast<long>(k));
    CVec h = analytic_log_half(g);
    for (auto& x : h)
        x = std::exp(x);
    return h;
}

RVec outer_phase(const Poly& Q, std::size_t G)
{
    CVec v = eval_on_grid(Q, G);
    double vmax = 0.0;
    for (const auto& x : v)
        vmax = std::max(vmax, std::abs(x));
    for (std::size_t k = 0; k < G; ++k)
        if (std::abs(v[k]) <= 1e-14 * vmax)
            throw Error(Status::branch, "zero of Q on the circle", static_cast<long>(k));
    RVec ph(G, 0.0);
    const std::size_t k0 = grid_zero_index(G);
    ph[k0] = 0.0;
    auto step = [&](std::size_t from, std::size_t to) {
        const double d = std::arg(v[to] / v[from]);
        if (std::abs(d) > pi / 2)
            throw Error(Status::branch, "phase jump exceeds pi/2; grid too coarse or winding", static_cast<long>(to));
        ph[to] = ph[from] + d;
    };
    for (std::size_t k = k0 + 1; k < G; ++k)
        step(k - 1, k);
    for (std::size_t k = k0; k-- > 0;)
        step(k + 1, k);
    return ph;
}

std::vector<cplx> poly_roots(const Poly& p)
{
    Poly q = p.trimmed(0.0);
    const int n = q.degree();
    if (n <= 0)
        return {};
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    const cplx lead = q.c[n];
    for (int i = 1; i < n; ++i)
        C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        C(i, n - 1) = -q.c[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    std::vector<cplx> r(n);
    for (int i = 0; i < n; ++i)
        r[i] = es.eigenvalues()(i);
    return r;
}

WindingResult winding_number(const Poly& p, double r, std::size_t max_grid)
{
    const int deg = p.degree();
    CVec sc(p.c.size());
    double rk = 1.0;
    for (std::size_t j = 0; j < p.c.size(); ++j) {
        sc[j] = p.c[j] * rk;
        rk *= r;
    }
    const Poly ps(sc);
    std::size_t G = next_pow2(std::max<std::size_t>(64, 8 * static_cast<std::size_t>(std::max(deg, 1))));
    G = std::min(G, max_grid);
    CVec v = eval_on_grid(ps, G);
    WindingResult res;
    res.grid = G;
    res.resolved = true;
    double total = 0.0;
    const double h = two_pi / static_cast<double>(G);
    // recursive bisection on cells whose phase step is not small
    std::function<double(double, double, cplx, cplx, int)> cell = [&](double a, double b, cplx va, cplx vb,
                                                                     int depth) -> double {
        if (std::abs(va) == 0.0 || std::abs(vb) == 0.0) {
            res.resolved = false;
            return 0.0;
        }
        const double d = std::arg(vb / va);
        if (std::abs(d) < pi / 4)
            return d;
        if (depth > 48) {
            res.resolved = false;
            return d;
        }
        const double m = 0.5 * (a + b);
        const cplx vm = ps(std::polar(1.0, m));
        return cell(a, m, va, vm, depth + 1) + cell(m, b, vm, vb, depth + 1);
    };
    for (std::size_t k = 0; k < G; ++k) {
        const double a = grid_theta(G, k);
        total += cell(a, a + h, v[k], v[(k + 1) % G], 0);
    }
    res.count = static_cast<int>(std::lround(total / two_pi));
    return res;
}

ZeroFreeReport zero_free_closed_disk(const Poly& p)
{
    ZeroFreeReport rep;
    const Poly q = p.trimmed(0.0);
    if (q.degree() <= 256) {
        rep.method = "companion";
        std::vector<cplx> r = poly_roots(q);
        double mn = std::numeric_limits<double>::infinity();
        int inside = 0;
        for (const auto& z : r) {
            mn = std::min(mn, std::abs(z));
            if (std::abs(z) <= 1.0)
                ++inside;
        }
        rep.min_root_modulus = mn;
        rep.zeros_inside = inside;
        rep.zero_free = inside == 0;
        return rep;
    }
    rep.method = "winding";
    WindingResult w = winding_number(q, 1.0);
    rep.zeros_inside = w.count;
    rep.resolved = w.resolved;
    rep.zero_free = w.resolved && w.count == 0;
    rep.min_root_modulus = std::numeric_limits<double>::quiet_NaN();
    return rep;
}

ZeroReport symmetrized_zero_test(const Poly& P, int n, double tol)
{
    ZeroReport rep;
    if (P.trimmed(0.0).degree() > n)
        return rep;
    std::vector<cplx> pr = poly_roots(P);
    rep.precondition_ok = std::all_of(pr.begin(), pr.end(), [](cplx z) { return std::abs(z) > 1.0; }) &&
                          std::abs(P.coeff(0)) > 0.0;
    const Poly D = P + P.star(n);
    rep.roots = poly_roots(D);
    for (const auto& z : rep.roots)
        rep.max_deviation = std::max(rep.max_deviation, std::abs(std::abs(z) - 1.0));
    rep.passed = rep.precondition_ok && static_cast<int>(rep.roots.size()) == n && rep.max_deviation <= tol;
    return rep;
}

} // namespace steklov
