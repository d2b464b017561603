#include "steklov/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace steklov {

namespace {

double pairwise_sum(const double* x, std::size_t n)
{
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

} // namespace

const char* status_name(Status s) noexcept
{
    switch (s) {
    case Status::ok: return "ok";
    case Status::invalid_argument: return "invalid_argument";
    case Status::resolution: return "resolution";
    case Status::indefinite_moments: return "indefinite_moments";
    case Status::invalid_coefficient: return "invalid_coefficient";
    case Status::not_orthonormal: return "not_orthonormal";
    case Status::not_factorizable: return "not_factorizable";
    case Status::degree_insufficient: return "degree_insufficient";
    case Status::branch: return "branch";
    case Status::construction_failure: return "construction_failure";
    case Status::assembly_mismatch: return "assembly_mismatch";
    case Status::symmetry: return "symmetry";
    case Status::step_failure: return "step_failure";
    case Status::io: return "io";
    }
    return "unknown";
}

Error::Error(Status code, const std::string& what, long index)
    : std::runtime_error(std::string(status_name(code)) + ": " + what), code_(code), index_(index)
{
}

bool is_pow2(std::size_t g) noexcept { return g != 0 && (g & (g - 1)) == 0; }

std::size_t next_pow2(std::size_t g) noexcept
{
    std::size_t p = 1;
    while (p < g)
        p <<= 1;
    return p;
}

std::size_t default_grid_size(std::size_t order)
{
    std::size_t floor = std::size_t(1) << 14;
    if (const char* env = std::getenv("STEKLOV_GRID")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v >= 16)
            floor = next_pow2(static_cast<std::size_t>(v));
    }
    return next_pow2(std::max(floor, 8 * order));
}

Poly Poly::monomial(int n, cplx a)
{
    CVec c(static_cast<std::size_t>(n) + 1, 0.0);
    c[n] = a;
    return Poly(std::move(c));
}

cplx Poly::operator()(cplx z) const
{
    cplx acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

Poly Poly::star(int n) const
{
    if (degree() > n) {
        for (int k = n + 1; k <= degree(); ++k)
            if (c[k] != cplx(0.0))
                throw Error(Status::invalid_argument, "star order below polynomial degree", k);
    }
    CVec out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 0; k <= std::min(n, degree()); ++k)
        out[n - k] = std::conj(c[k]);
    return Poly(std::move(out));
}

Poly Poly::derivative() const
{
    if (c.size() <= 1)
        return Poly::constant(0.0);
    CVec d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k)
        d[k - 1] = static_cast<double>(k) * c[k];
    return Poly(std::move(d));
}

Poly Poly::trimmed(double tol) const
{
    std::size_t len = c.size();
    while (len > 1 && std::abs(c[len - 1]) <= tol)
        --len;
    return Poly(CVec(c.begin(), c.begin() + static_cast<long>(len)));
}

Poly operator+(const Poly& a, const Poly& b)
{
    CVec c(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t k = 0; k < a.c.size(); ++k)
        c[k] += a.c[k];
    for (std::size_t k = 0; k < b.c.size(); ++k)
        c[k] += b.c[k];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b)
{
    if (a.c.empty() || b.c.empty())
        return Poly();
    CVec c(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j)
            c[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(c));
}

Poly operator*(cplx s, const Poly& a)
{
    Poly out = a;
    for (auto& x : out.c)
        x *= s;
    return out;
}

double wrap_angle(double a)
{
    double r = std::remainder(a, two_pi);
    if (r <= -pi)
        r += two_pi;
    return r;
}

Measure Measure::lebesgue(std::size_t G)
{
    return from_density(RVec(G, 1.0 / two_pi));
}

Measure Measure::from_density(RVec w, std::vector<Atom> atoms)
{
    Measure mu;
    mu.density = std::move(w);
    for (auto& a : atoms)
        a.angle = wrap_angle(a.angle);
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.angle < y.angle; });
    mu.atoms = std::move(atoms);
    mu.refresh_mass();
    return mu;
}

double Measure::ac_mass() const
{
    if (density.empty())
        return 0.0;
    return pairwise_sum(density.data(), density.size()) * two_pi / static_cast<double>(density.size());
}

double Measure::min_density() const
{
    if (density.empty())
        return 0.0;
    return *std::min_element(density.begin(), density.end());
}

void Measure::refresh_mass()
{
    total_mass = ac_mass();
    for (const auto& a : atoms)
        total_mass += a.mass;
}

void Measure::validate() const
{
    if (!density.empty() && !is_pow2(density.size()))
        throw Error(Status::invalid_argument, "grid size must be a power of two");
    for (std::size_t k = 0; k < density.size(); ++k)
        if (!(density[k] >= 0.0) || !std::isfinite(density[k]))
            throw Error(Status::invalid_argument, "negative or non-finite density", static_cast<long>(k));
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (!(atoms[k].mass >= 0.0))
            throw Error(Status::invalid_argument, "negative atom mass", static_cast<long>(k));
        if (!(atoms[k].angle > -pi && atoms[k].angle <= pi))
            throw Error(Status::invalid_argument, "atom angle outside (-pi, pi]", static_cast<long>(k));
        if (k > 0 && !(atoms[k].angle > atoms[k - 1].angle))
            throw Error(Status::invalid_argument, "atom angles not strictly increasing", static_cast<long>(k));
    }
    if (!(total_mass > 0.0))
        throw Error(Status::invalid_argument, "measure has zero mass");
}

bool Measure::is_probability(double tol) const { return std::abs(total_mass - 1.0) <= tol; }

bool Measure::is_steklov(double delta, double tol) const
{
    return !density.empty() && min_density() >= delta / two_pi - tol;
}

std::size_t Measure::growth_points() const
{
    std::size_t atoms_with_mass = 0;
    for (const auto& a : atoms)
        if (a.mass > 0.0)
            ++atoms_with_mass;
    for (double w : density)
        if (w > 0.0)
            return static_cast<std::size_t>(-1);
    return atoms_with_mass;
}

RVec Verblunsky::rho() const
{
    RVec r(gamma.size());
    for (std::size_t j = 0; j < gamma.size(); ++j) {
        double a = std::abs(gamma[j]);
        r[j] = std::sqrt(std::max(0.0, (1.0 - a) * (1.0 + a)));
    }
    return r;
}

} // namespace steklov
