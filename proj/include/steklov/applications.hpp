#pragma once

#include "steklov/construct.hpp"

namespace steklov {

struct LineAtom {
    double x;
    double mass;
};

// psi'(cos theta) = sigma'(theta) / |sin theta| on the grid nodes with 0 < theta < pi
struct RealLineMeasure {
    RVec x;
    RVec weight;
    std::vector<LineAtom> atoms;
    double floor = 0.0;
    double mass = 0.0;
    Measure source;
};

// max deviation between sigma and its reflection theta -> -theta
double symmetry_residual(const Measure& sigma);

// Throws symmetry when sigma is not even within tol.
RealLineMeasure line_measure(const Measure& sigma, double tol = 1e-9);

// P_k(0, psi) from the Verblunsky coefficients of the symmetric circle measure
double line_value_at_zero(const Verblunsky& g, int k);

struct LineTransplant {
    RealLineMeasure line;
    int k = 0;
    double P0 = 0.0;
    RVec P0_all; // P_0(0) .. P_k(0)
    Verblunsky gamma;
    double symmetry_residual = 0.0;
    double gamma_imag_max = 0.0;
};

LineTransplant circle_to_line(const Measure& sigma, int k, double tol = 1e-9);

// gamma of mu(theta - a)
Verblunsky rotate_verblunsky(const Verblunsky& g, double a);
// gamma of w(N theta): gamma'_{N j + N - 1} = gamma_j, zero elsewhere
Verblunsky sieve_verblunsky(const Verblunsky& g, int N);

// shift by whole grid steps; atoms move by the same angle
Measure rotate_measure(const Measure& mu, long steps);
// w(N theta) on the same grid; each atom splits into N atoms of mass m / N
Measure dilate_measure(const Measure& mu, int N);

// Transplant of the decoupling construction: dilate by 2 (symmetric about both axes),
// rotate by pi/2, read P_n(0) on the line.
struct SymmetricTransplant {
    int k = 0;
    double P0 = 0.0;
    double ratio = 0.0; // |P_k(0)| / sqrt(k)
    double phi_circle = 0.0; // |phi_{2k}(1)| of the doubly symmetric measure
    double gamma_imag_max = 0.0;
    double line_floor = 0.0;
};

SymmetricTransplant symmetric_transplant(const DecouplingConstruction& c, double delta_realized);

struct EntropyEntry {
    int n = 0;
    double omega = 0.0;
    double sup_phi = 0.0;
    double norm_sq = 0.0; // int |phi_n|^2 d sigma
    std::size_t evaluations = 0;
};

// int |phi_n|^2 ln+ |phi_n| d sigma: density by the grid rule, atoms exactly
EntropyEntry polynomial_entropy(const Measure& sigma, int n);
// the same against the assembled density of the construction, by adaptive quadrature
EntropyEntry polynomial_entropy(const DecouplingConstruction& c, double rel_tol = 1e-9);

struct EntropyFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; // ||omega - fit|| / ||omega||
};

EntropyFit fit_entropy(const std::vector<int>& n, const RVec& omega);

struct EntropyReport {
    std::vector<EntropyEntry> entries;
    EntropyFit fit;
};

} // namespace steklov
