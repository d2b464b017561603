#pragma once

#include "steklov/types.hpp"

namespace steklov {

struct PolyPair {
    Poly p;
    Poly p_star;
};

struct ValuePair {
    cplx p;
    cplx p_star;
};

MomentSequence compute_moments(const Measure& mu, int N);

// Levinson recursion on the Toeplitz system; gamma_0..gamma_{N-1}.
Verblunsky verblunsky_from_moments(const MomentSequence& s);

// Same recursion, optionally accepting |gamma_{N-1}| = 1 (measure with exactly N growth points).
// Also returns the monic Phi_N.
struct LevinsonResult {
    Verblunsky gamma;
    Poly Phi;
    double last_D = 0.0;
};
LevinsonResult levinson(const MomentSequence& s, int N, bool allow_terminal_unit = false);

PolyPair szego_recurse(const Verblunsky& g, int n);
PolyPair second_kind_recurse(const Verblunsky& g, int n);
PolyPair monic_recurse(const Verblunsky& g, int n, bool allow_terminal_unit = false);

// phi_n(z), phi_n^*(z) by the scalar recursion, O(n)
ValuePair szego_values(const Verblunsky& g, int n, cplx z);

double rho_product(const Verblunsky& g, int n);

struct SchurCohnResult {
    Verblunsky gamma;
    double rho_product = 1.0;
    double max_remainder = 0.0;
};

// Downward recursion on an arbitrary positive multiple of phi_n^*.
// Throws not_orthonormal when some |gamma| >= 1 (a zero in the closed disk).
SchurCohnResult inverse_schur_cohn(const Poly& phi_star, int n, double remainder_tol = 1e-8);

// Inverse of the Szego recursion; input must be orthonormal (phi^*(0) = prod rho^{-1} > 0).
Verblunsky inverse_szego(const Poly& phi_star, int n, const Tolerances& tol = {});

cplx cd_kernel(const Verblunsky& g, int n, cplx xi, cplx z);
cplx cd_kernel_closed(const Verblunsky& g, int n, cplx xi, cplx z);

// K_n(z, z) at every grid node
RVec christoffel_diagonal_on_grid(const Verblunsky& g, int n, std::size_t G);

// Phi_n(z, (1 - t) mu + t delta_beta) by the rank-one update
Poly insert_point_mass(const Measure& mu, double t, double beta, int n);

Measure bernstein_szego_measure(const Verblunsky& g, int N, std::size_t G = 0);

// |phi_n(1)| for the probability normalization of s, by Levinson plus the scalar recursion
double phi_at_one(const MomentSequence& s, int n);

} // namespace steklov
