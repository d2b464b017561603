#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace steklov {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

enum class Status : int {
    ok = 0,
    invalid_argument = 1,
    resolution = 2,
    indefinite_moments = 3,
    invalid_coefficient = 4,
    not_orthonormal = 5,
    not_factorizable = 6,
    degree_insufficient = 7,
    branch = 8,
    construction_failure = 9,
    assembly_mismatch = 10,
    symmetry = 11,
    step_failure = 12,
    io = 13,
};

const char* status_name(Status s) noexcept;

class Error : public std::runtime_error {
public:
    Error(Status code, const std::string& what, long index = -1);
    Status code() const noexcept { return code_; }
    long index() const noexcept { return index_; }

private:
    Status code_;
    long index_;
};

struct Tolerances {
    double rt = 1e-8;
    double norm = 1e-10;
    double grid = 1e-9;
    double fact = 1e-9;
    double pos = 1e-12;
    double assembly = 1e-5;
};

bool is_pow2(std::size_t g) noexcept;
std::size_t next_pow2(std::size_t g) noexcept;

// max(2^14, 8N) rounded up to a power of two; STEKLOV_GRID overrides the 2^14 floor.
std::size_t default_grid_size(std::size_t order);

inline double grid_theta(std::size_t G, std::size_t k)
{
    return -pi + two_pi * static_cast<double>(k) / static_cast<double>(G);
}

// index of theta = 0 on the grid
inline std::size_t grid_zero_index(std::size_t G) { return G / 2; }

struct Poly {
    CVec c;

    Poly() = default;
    explicit Poly(CVec coeffs) : c(std::move(coeffs)) {}

    static Poly constant(cplx a) { return Poly(CVec{a}); }
    static Poly monomial(int n, cplx a = 1.0);

    int degree() const { return static_cast<int>(c.size()) - 1; }
    cplx coeff(int k) const { return (k >= 0 && k < static_cast<int>(c.size())) ? c[k] : cplx(0.0); }
    cplx operator()(cplx z) const;

    // n-th reciprocal: coefficient n-k is conj(c_k)
    Poly star(int n) const;
    Poly derivative() const;
    Poly trimmed(double tol = 0.0) const;
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(cplx s, const Poly& a);

struct GridFunction {
    CVec values;

    GridFunction() = default;
    explicit GridFunction(CVec v) : values(std::move(v)) {}
    std::size_t size() const { return values.size(); }
    double theta(std::size_t k) const { return grid_theta(values.size(), k); }
};

struct Atom {
    double angle;
    double mass;
};

// wraps an angle into (-pi, pi]
double wrap_angle(double a);

struct Measure {
    RVec density; // w(theta_k) per radian; empty for a purely atomic measure
    std::vector<Atom> atoms;
    double total_mass = 0.0;

    static Measure lebesgue(std::size_t G);
    static Measure from_density(RVec w, std::vector<Atom> atoms = {});

    std::size_t grid_size() const { return density.size(); }
    double ac_mass() const;
    double min_density() const;
    void refresh_mass();
    // throws invalid_argument when density/mass/angle invariants fail
    void validate() const;
    bool is_probability(double tol) const;
    bool is_steklov(double delta, double tol) const;
    std::size_t growth_points() const;
};

struct MomentSequence {
    CVec s;
    int order() const { return static_cast<int>(s.size()) - 1; }
};

struct Verblunsky {
    CVec gamma;

    Verblunsky() = default;
    explicit Verblunsky(CVec g) : gamma(std::move(g)) {}
    std::size_t size() const { return gamma.size(); }
    RVec rho() const;
};

} // namespace steklov
