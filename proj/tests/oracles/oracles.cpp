#include "oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

using Q = boost::multiprecision::cpp_bin_float_quad;

struct QC {
    Q re = 0, im = 0;
};

QC operator+(const QC& a, const QC& b) { return {a.re + b.re, a.im + b.im}; }
QC operator-(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
QC operator*(const QC& a, const QC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
QC conj(const QC& a) { return {a.re, -a.im}; }

using QPoly = std::vector<QC>;

QC to_q(cplx z) { return {Q(z.real()), Q(z.imag())}; }

cplx to_d(const QC& z) { return {static_cast<double>(z.re), static_cast<double>(z.im)}; }

QC moment(const std::vector<QC>& s, int j)
{
    return j >= 0 ? s[j] : conj(s[-j]);
}

QC inner(const QPoly& p, const QPoly& q, const std::vector<QC>& s)
{
    QC acc;
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t k = 0; k < q.size(); ++k)
            acc = acc + p[j] * conj(q[k]) * moment(s, static_cast<int>(j) - static_cast<int>(k));
    return acc;
}

} // namespace

std::vector<CVec> gram_schmidt(const CVec& s_in, int n)
{
    if (static_cast<int>(s_in.size()) < n + 1)
        throw std::invalid_argument("need s_0..s_n");
    std::vector<QC> s;
    for (const auto& z : s_in)
        s.push_back(to_q(z));
    std::vector<QPoly> basis;
    for (int k = 0; k <= n; ++k) {
        QPoly v(k + 1);
        v[k] = {1, 0};
        QPoly w = v;
        for (const auto& e : basis) {
            const QC c = inner(v, e, s);
            for (std::size_t j = 0; j < e.size(); ++j)
                w[j] = w[j] - c * e[j];
        }
        const QC nn = inner(w, w, s);
        if (!(nn.re > 0))
            throw std::domain_error("Gram matrix is not positive definite");
        const Q inv = 1 / boost::multiprecision::sqrt(nn.re);
        for (auto& x : w)
            x = {x.re * inv, x.im * inv};
        basis.push_back(std::move(w));
    }
    std::vector<CVec> out;
    for (const auto& b : basis) {
        CVec c;
        for (const auto& x : b)
            c.push_back(to_d(x));
        out.push_back(std::move(c));
    }
    return out;
}

CVec atomic_moments(double delta, const std::vector<steklov::Atom>& atoms, int N)
{
    CVec out;
    for (int j = 0; j <= N; ++j) {
        QC acc{Q(j == 0 ? delta : 0.0), 0};
        for (const auto& a : atoms) {
            const Q arg = Q(j) * Q(a.angle);
            acc = acc + QC{Q(a.mass) * boost::multiprecision::cos(arg), Q(a.mass) * boost::multiprecision::sin(arg)};
        }
        out.push_back(to_d(acc));
    }
    return out;
}

cplx determinant_Phi_at_zero(const CVec& s, int n)
{
    auto mom = [&](int j) { return j >= 0 ? s[j] : std::conj(s[-j]); };
    Eigen::MatrixXcd T(n, n);
    Eigen::VectorXcd b(n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k)
            T(j, k) = mom(k - j);
        b(j) = -mom(n - j);
    }
    const cplx den = T.determinant();
    Eigen::MatrixXcd T0 = T;
    T0.col(0) = b;
    return T0.determinant() / den;
}

RVec chebyshev_line_values(int k) { return line_values(k, 1.0, {}); }

RVec line_values(int k, double c, const std::vector<std::pair<double, double>>& atoms)
{
    const int M = 4 * (k + 1);
    std::vector<Q> x(M), w(M, Q(c) / (2 * M));
    const Q pi_q = boost::math::constants::pi<Q>();
    for (int i = 0; i < M; ++i)
        x[i] = boost::multiprecision::cos((2 * i + 1) * pi_q / (2 * M));
    for (const auto& [xa, ma] : atoms) {
        x.push_back(Q(xa));
        w.push_back(Q(ma));
    }
    auto inner_line = [&](const std::vector<Q>& p, const std::vector<Q>& q) {
        Q acc = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            Q pv = 0, qv = 0;
            for (std::size_t j = p.size(); j-- > 0;)
                pv = pv * x[i] + p[j];
            for (std::size_t j = q.size(); j-- > 0;)
                qv = qv * x[i] + q[j];
            acc += w[i] * pv * qv;
        }
        return acc;
    };
    std::vector<std::vector<Q>> basis;
    RVec out;
    for (int j = 0; j <= k; ++j) {
        std::vector<Q> v(j + 1, Q(0));
        v[j] = 1;
        std::vector<Q> r = v;
        for (const auto& e : basis) {
            const Q c = inner_line(v, e);
            for (std::size_t i = 0; i < e.size(); ++i)
                r[i] -= c * e[i];
        }
        const Q nrm = boost::multiprecision::sqrt(inner_line(r, r));
        for (auto& c : r)
            c /= nrm;
        out.push_back(static_cast<double>(r[0]));
        basis.push_back(std::move(r));
    }
    return out;
}

RVec F_tilde_taylor(double rho, double alpha, double eps, int N)
{
    const double r = 1.0 + eps;
    const double Ct = 1.0 / (rho / r + std::pow(r, -alpha));
    RVec a(N + 1);
    double binom = 1.0; // (alpha)_j / j!
    for (int j = 0; j <= N; ++j) {
        if (j > 0)
            binom *= (alpha + j - 1) / j;
        a[j] = Ct * (rho * std::pow(r, -1.0 - j) + binom * std::pow(r, -alpha - j));
    }
    return a;
}

double inverse_square_integral(const steklov::Poly& f)
{
    const int d = f.degree();
    std::vector<double> breaks{-steklov::pi, steklov::pi};
    if (d >= 1) {
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i)
            C(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i)
            C(i, d - 1) = -f.c[i] / f.c[d];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
        for (int i = 0; i < d; ++i)
            breaks.push_back(std::arg(es.eigenvalues()(i)));
    }
    std::sort(breaks.begin(), breaks.end());
    auto g = [&](double t) {
        cplx z = std::polar(1.0, t), v = 0.0;
        for (int j = d; j >= 0; --j)
            v = v * z + f.c[j];
        return 1.0 / std::norm(v);
    };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] - breaks[i] < 1e-15)
            continue;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, breaks[i], breaks[i + 1], 18, 1e-12);
    }
    return total;
}

namespace {

double phi2_at_one(double delta, double t1, double t2, double u)
{
    const double m1 = (1.0 - delta) * u, m2 = (1.0 - delta) * (1.0 - u);
    cplx s[3];
    for (int j = 0; j < 3; ++j)
        s[j] = (j == 0 ? delta : 0.0) + m1 * std::polar(1.0, j * t1) + m2 * std::polar(1.0, j * t2);
    auto mom = [&](int j) { return j >= 0 ? s[j] : std::conj(s[-j]); };
    Eigen::Matrix2cd T;
    Eigen::Vector2cd b;
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k)
            T(j, k) = mom(k - j);
        b(j) = -mom(2 - j);
    }
    const Eigen::Vector2cd c = T.lu().solve(b);
    const cplx P[3] = {c(0), c(1), 1.0};
    cplx nn = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
            nn += P[j] * std::conj(P[k]) * mom(j - k);
    return std::abs(P[0] + P[1] + P[2]) / std::sqrt(nn.real());
}

} // namespace

double brute_force_n2(double delta)
{
    const double pi = steklov::pi;
    double best = 0.0, bt1 = 0.0, bt2 = 0.0, bu = 0.0;
    const int A = 90, U = 20;
    for (int i = 0; i < A; ++i)
        for (int j = i; j < A; ++j)
            for (int k = 0; k <= U; ++k) {
                const double t1 = -pi + 2 * pi * (i + 0.5) / A, t2 = -pi + 2 * pi * (j + 0.5) / A;
                const double u = static_cast<double>(k) / U;
                const double v = phi2_at_one(delta, t1, t2, u);
                if (v > best) {
                    best = v;
                    bt1 = t1;
                    bt2 = t2;
                    bu = u;
                }
            }
    double ha = 2 * pi / A, hu = 1.0 / U;
    for (int round = 0; round < 30; ++round) {
        const double c1 = bt1, c2 = bt2, cu = bu;
        for (int i = -5; i <= 5; ++i)
            for (int j = -5; j <= 5; ++j)
                for (int k = -5; k <= 5; ++k) {
                    const double t1 = c1 + ha * i / 5, t2 = c2 + ha * j / 5;
                    const double u = std::clamp(cu + hu * k / 5, 0.0, 1.0);
                    const double v = phi2_at_one(delta, t1, t2, u);
                    if (v > best) {
                        best = v;
                        bt1 = t1;
                        bt2 = t2;
                        bu = u;
                    }
                }
        ha *= 0.6;
        hu *= 0.6;
    }
    return best;
}

RandomSteklov random_steklov(std::mt19937_64& rng, double delta, int atoms)
{
    std::uniform_real_distribution<double> ang(-steklov::pi, steklov::pi);
    std::exponential_distribution<double> ex(1.0);
    RandomSteklov r{delta, {}};
    RVec w(atoms);
    double sum = 0.0;
    for (auto& x : w)
        sum += (x = ex(rng));
    for (int i = 0; i < atoms; ++i)
        r.atoms.push_back({ang(rng), (1.0 - delta) * w[i] / sum});
    std::sort(r.atoms.begin(), r.atoms.end(), [](const auto& a, const auto& b) { return a.angle < b.angle; });
    return r;
}

} // namespace oracle
