#pragma once

#include "steklov/types.hpp"

#include <string>

namespace steklov {

// c_{-d}..c_d stored at index j + d
struct TrigPolynomial {
    CVec c;
    int d = 0;
    bool real_valued = true;

    cplx coeff(int j) const { return (j >= -d && j <= d) ? c[j + d] : cplx(0.0); }
    cplx eval(double theta) const;
    RVec real_on_grid(std::size_t G) const;
    static TrigPolynomial from_modulus_sq(const Poly& q);
};

TrigPolynomial operator+(const TrigPolynomial& a, const TrigPolynomial& b);
TrigPolynomial operator*(double s, const TrigPolynomial& a);

TrigPolynomial fejer_kernel(int m);
double fejer_value(int m, double theta);
TrigPolynomial shifted_fejer(int m);
double shifted_fejer_value(int m, double theta);

enum class TaylorKind { A, B };

struct TaylorPoly {
    TaylorKind kind = TaylorKind::A;
    double beta = 0.0;
    int n = 0;
    RVec coeffs; // c_j (A) or d_j (B), j = 0..n, coeffs[0] = 0
    double tail = 0.0; // A: M_n = 1 - sum_{j<=n} c_j

    // A: 1 - sum c_j z^j; B: 1 + sum d_j z^j
    Poly poly() const;
};

TaylorPoly taylor_poly(TaylorKind kind, double beta, int n, bool enforce_window = true);
// M_n for A-kind, by the product recurrence
double taylor_tail_A(double beta, int n);

struct Factorization {
    Poly q;
    double truncation_error = 0.0;
    double residual = 0.0;
    std::size_t grid = 0;
    std::string method;
};

Factorization fejer_riesz_factorize(const TrigPolynomial& p, const Tolerances& tol = {});
// root-based factorization (degree <= 64)
Factorization fejer_riesz_roots(const TrigPolynomial& p);

// Outer function on the standard grid with |Pi|^2 = g and Pi(0) > 0.
CVec outer_from_modulus_sq(const RVec& g);

// continuous branch of arg Q on the grid with phase(0) = 0
RVec outer_phase(const Poly& Q, std::size_t G);

std::vector<cplx> poly_roots(const Poly& p);

struct WindingResult {
    int count = 0;
    bool resolved = false;
    std::size_t grid = 0;
};
// zeros of p inside |z| < r by the argument principle
WindingResult winding_number(const Poly& p, double r, std::size_t max_grid = std::size_t(1) << 22);

struct ZeroFreeReport {
    bool zero_free = false;
    std::string method;
    double min_root_modulus = 0.0;
    int zeros_inside = 0;
    bool resolved = true;
};
// companion eigenvalues up to degree 256, winding on |z| = 1 - 1e-6 and |z| = 1 + 1e-6 above
ZeroFreeReport zero_free_closed_disk(const Poly& p);

struct ZeroReport {
    bool precondition_ok = false;
    bool passed = false;
    double max_deviation = 0.0;
    std::vector<cplx> roots;
};
ZeroReport symmetrized_zero_test(const Poly& P, int n, double tol = 1e-7);

} // namespace steklov
