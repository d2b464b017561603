#pragma once

#include "steklov/opuc.hpp"
#include "steklov/quadrature.hpp"
#include "steklov/special.hpp"

#include <string>

namespace steklov {

// Point-mass construction: delta/(2 pi) background plus n atoms of mass m at 2 pi k/(n + 1).
struct SmallDeltaConstruction {
    int n = 0;
    double delta = 0.0;
    double m = 0.0;
    Measure sigma;
    Poly Phi;
    double Phi_at_1 = 0.0;
    double norm_sq = 0.0;
    double phi_at_1 = 0.0;
    double orthogonality_residual = 0.0;
};

SmallDeltaConstruction build_small_delta(int n, double delta, double m, std::size_t G = 0);

struct DecouplingParams {
    int n = 256;
    double alpha = 0.75;
    double rho = 0.05;
    double delta1 = 1.0 / 16.0;
    std::size_t grid = 0; // 0: max(2^18, default_grid_size(n))
    Tolerances tol{};
};

struct DecouplingConstruction {
    DecouplingParams params;
    int m = 0;
    double eps = 0.0;
    TaylorPoly A, B;
    Poly Q, P, f;
    Poly phi_star, phi;
    double C_n = 0.0;
    double C_tilde = 0.0;
    // int |f_n|^{-2} d theta = 2 pi C_n^2
    double normalization_integral = 0.0;
    Verblunsky gamma;
    double schur_remainder = 0.0;
    Factorization factorization;
    std::size_t grid = 0;
    GridFunction F_tilde;
    double min_re_f = 0.0;
    double argmin_re_f = 0.0;
    double min_re_f_over_Q = 0.0;
    double argmin_re_f_over_Q = 0.0;
    double growth_ratio = 0.0; // |phi_n^*(1)| / sqrt(n)
    double f1_minus_2Q1 = 0.0;
};

// Q_m with |Q_m|^2 = shifted Fejer + |B_m|^2, B-kind exponent alpha / 2
Factorization factor_Q(int m, double alpha, const Tolerances& tol = {});

cplx F_tilde_at(double rho, double alpha, double eps, cplx z);
double C_tilde_of(double rho, double alpha, double eps);

// Throws construction_failure when Re(f_n / Q_m) <= 0 somewhere on the grid.
DecouplingConstruction build_decoupling(const DecouplingParams& p);

struct ConditionReport {
    bool zero_free = false;
    std::string zero_method;
    double min_root_modulus = 0.0;
    bool zero_count_resolved = true;
    double norma_residual = 0.0;
    double norma_quadrature = 0.0;
    std::size_t norma_evaluations = 0;
    double growth_ratio = 0.0;
    double min_re_F = 0.0;
    double norka_residual = 0.0;
    double mean_value_residual = 0.0;
    double c5 = 0.0;
    double c5_argmax = 0.0;
    double c5_argmax_scaled = 0.0; // n * |theta| at the maximum
    double C1 = 0.0;
    bool c5_within_C1 = false;
    double cancellation_residual = 0.0;
};

ConditionReport check_decoupling_conditions(const DecouplingConstruction& c, double C1, bool quadrature = true);

struct AssembleOptions {
    int tail_order = 0; // 0: smallest order with tail energy below tail_tol
    double tail_tol = 1e-14;
    bool path_b = true;
    bool quadrature = true;
    bool round_trip = false;
};

struct AssembledMeasure {
    GridFunction sigma_prime;
    Verblunsky gamma_full;
    int n = 0;
    int tail_order = 0;
    double tail_energy = 0.0;
    double delta_realized = 0.0;
    double path_agreement = -1.0;
    double outer_consistency = 0.0;
    double mass_grid = 0.0;
    double mass_adaptive = -1.0;
    double mass_error = 0.0;
    std::size_t peaks = 0;
    std::size_t evaluations = 0;
    double round_trip = -1.0;
    double steklov_equivalence = 0.0; // max |Pi (phi + phi^* + F (phi^* - phi))| sqrt(delta) / 2

    Measure measure() const;
};

AssembledMeasure assemble_measure(const DecouplingConstruction& c, const AssembleOptions& opt = {});

// sigma'(theta) of the assembled measure in closed form
double assembled_density(const DecouplingConstruction& c, double theta);
// -|phi^* (1 + F) + phi (1 - F)|^2: its maxima mark the narrow peaks of sigma'
double assembled_peak_shape(const DecouplingConstruction& c, double theta);

// gamma-tilde_0..gamma-tilde_{T-1} of Re F-tilde / (2 pi) from its grid moments
Verblunsky sigma_tilde_verblunsky(const DecouplingConstruction& c, int T);

struct PointwiseBound {
    double C = 0.0;
    double argmax = 0.0;
    double ratio_at_pi = 0.0;
    double ratio_near_zero = 0.0;
    double phi_sq_at_pi = 0.0;
    double phi_sq_at_one = 0.0;
};

// smallest C with |phi_n|^2 <= C (n / (1 + (n theta)^2) + |theta|^{-alpha}) on the grid
PointwiseBound pointwise_bound_check(const DecouplingConstruction& c, const AssembledMeasure& am);

} // namespace steklov
