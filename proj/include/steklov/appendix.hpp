#pragma once

#include "steklov/construct.hpp"

#include <cstdint>
#include <string>

namespace steklov {

// Re A_n(e^{i theta}) / (1/n + theta)^beta, or Re B_n / (1/n + theta)^{-beta}, on a log theta grid
struct RatioSuite {
    TaylorKind kind = TaylorKind::A;
    double beta = 0.0;
    std::vector<int> n;
    RVec lo, hi; // per order
    double min = 0.0, max = 0.0;
    double c1 = 0.0, c2 = 0.0; // frozen interval
    bool sign_ok = true; // A-kind: -Im A_n > 0
    std::size_t samples = 0;
    bool passed = false;
};

// |A_n'| / min(n^{1-beta}, theta^{beta-1}) or |B_n'| / min(n^{1+beta}, n^beta / theta)
struct DerivativeSuite {
    TaylorKind kind = TaylorKind::A;
    double beta = 0.0;
    std::vector<int> n;
    RVec sup; // per order
    double C = 0.0; // frozen
    bool passed = false;
};

struct TailCheck {
    double beta = 0.0;
    int n = 0;
    double value = 0.0; // M_n Gamma(1 - beta) n^beta
    bool passed = false;
};

// max |phi'| / m for the phase of Q_m
struct PhaseCheck {
    std::vector<int> m;
    RVec ratio;
    double spread = 0.0;
    bool passed = false;
};

struct NoliCheck {
    int instances = 0;
    int failures = 0;
    double max_deviation = 0.0;
    bool passed = false;
};

// int_0^a cos x / x^gamma dx > 0
struct TrifleCheck {
    RVec gammas;
    RVec a;
    double min_value = 0.0;
    bool passed = false;
};

struct AppendixOptions {
    std::vector<int> orders{64, 128, 256, 512, 1024, 2048, 4096};
    double theta_min = 1e-4;
    double upsilon = 0.1;
    int theta_samples = 240;
    RVec beta_A{0.25, 0.5, 0.75};
    RVec beta_B{0.125, 0.25, 0.375};
    double band_center = 0.01; // B-kind ratios skip |theta n - center| < halfwidth
    double band_halfwidth = 0.005;
    int tail_n = 4096;
    std::vector<int> phase_m{16, 32, 64, 128};
    double phase_alpha = 0.75;
    std::size_t phase_grid = std::size_t(1) << 16;
    double phase_spread = 1.5;
    int noli_instances = 50;
    int noli_max_degree = 12;
    double noli_tol = 1e-7;
    std::uint64_t seed = 7;
    RVec trifle_gammas{0.5, 0.75, 0.9};
};

struct AppendixReport {
    std::vector<RatioSuite> ratios;
    std::vector<DerivativeSuite> derivatives;
    std::vector<TailCheck> tails;
    PhaseCheck phase;
    NoliCheck noli;
    TrifleCheck trifle;

    bool passed() const;
};

// frozen constants of the bounded-ratio checks
std::pair<double, double> ratio_interval(TaylorKind kind, double beta);
double derivative_constant(TaylorKind kind, double beta);

RatioSuite ratio_suite(TaylorKind kind, double beta, const AppendixOptions& opt = {});
DerivativeSuite derivative_suite(TaylorKind kind, double beta, const AppendixOptions& opt = {});
TailCheck tail_check(double beta, int n);
PhaseCheck phase_check(const AppendixOptions& opt = {});
NoliCheck noli_check(const AppendixOptions& opt = {});
double trifle_integral(double gamma, double a);
TrifleCheck trifle_check(const AppendixOptions& opt = {});

AppendixReport appendix_checks(const AppendixOptions& opt = {});

} // namespace steklov
