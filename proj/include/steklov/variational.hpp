#pragma once

#include "steklov/construct.hpp"

#include <cstdint>
#include <random>

namespace steklov {

// delta/(2 pi) background plus atoms whose masses sum to 1 - delta
struct AtomicSteklovMeasure {
    double delta = 1.0;
    std::vector<Atom> atoms;

    Measure to_measure(std::size_t G) const;
    MomentSequence moments(int N) const;
    void validate(double tol = 1e-12) const;
};

struct BoundReport {
    int n = 0;
    double delta = 0.0;
    double achieved = 0.0;
    double bound_sqrt = 0.0;
    double bound_l1 = 0.0;

    double bound() const { return std::min(bound_sqrt, bound_l1); }
    bool within(double rel = 1e-6) const { return achieved <= bound() * (1.0 + rel); }
};

double bound_sqrt(int n, double delta);
double bound_l1(int n, double delta);

BoundReport evaluate_candidate(const AtomicSteklovMeasure& mu, int n);

struct SearchOptions {
    std::size_t budget = 20000; // objective evaluations
    int starts = 8;
    int atoms = 0; // 0: n
    std::uint64_t seed = 1;
    int angle_samples = 24;
    double distinct_tol = 1e-7;
    double report_fraction = 0.9; // local maxima above this fraction of the best are listed
};

struct SearchResult {
    AtomicSteklovMeasure best;
    BoundReport report;
    std::size_t evaluations = 0;
    bool budget_exhausted = false;
    double max_bound_ratio = 0.0; // max achieved / bound over all evaluations
    std::vector<double> local_maxima;
};

SearchResult search_extremal(int n, double delta, const SearchOptions& opt = {});

struct WeightPair {
    RVec w1, w2;
};

double weight_lambda(const RVec& w);
double weight_Lambda(const RVec& w);
double weight_norm(const RVec& w, double p);
// phi_n(z, w) for a non-normalized weight on the grid
PolyPair weighted_szego(const RVec& w, int n);
cplx weighted_phi_at_one(const RVec& w, int n);

struct LocalizationReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double lambda1 = 0.0, Lambda1 = 0.0, lambda2 = 0.0, Lambda2 = 0.0;
    double tail_integral = 0.0;
    double slack = 0.0; // rhs - lhs
    bool holds = false;
};

// Smooth positive w1 and a second weight equal to it on [-eps, eps]; probability-normalized w1.
WeightPair random_agreeing_pair(std::mt19937_64& rng, std::size_t G, double eps);
// w1 flat plus a narrow bump at 0 (floor delta / (2 pi)), w2 flat, equal on [-eps, eps]
WeightPair peak_pair(std::size_t G, double delta, double width, double eps);

// Throws invalid_argument when the weights differ on [-eps, eps].
LocalizationReport localization_bound(const WeightPair& pair, int n, double eps);

struct PerturbResult {
    RVec w_tilde;
    double deviation_l1 = 0.0;
    double deviation_p = 0.0;
    double floor = 0.0; // min w_tilde
    double norm_before = 0.0; // ||w_2||_1
    double norm_after = 0.0;
};

// w_2 = donor / delta0 on (-tau, tau), w elsewhere; returns w_2 / ||w_2||_1
PerturbResult perturb_weight(const RVec& w, const RVec& donor, double delta0, double tau, double p = 2.0);

struct IterationOptions {
    double p = 2.0;
    double C_tilde = 2.0;
    std::size_t grid = std::size_t(1) << 18;
    std::vector<int> orders{64, 128, 256, 512, 1024};
    std::vector<double> tau_candidates{}; // empty: 0.5 * 2^{-i/2}, i = 0..19
    int eps_halvings = 6; // eps starts at 0.9 of the largest admissible value
    DecouplingParams donor{};
};

struct IterationStep {
    RVec w;
    std::vector<int> k;
    std::vector<double> phi_abs; // |phi_{k_j}(1, w)|
    double eps = 0.0;
    double tau = 0.0;
    double delta0 = 0.0;
    double norm_p = 0.0;
    double floor = 0.0;
    double floor_required = 0.0;
    double deviation_p = 0.0;
};

struct IterationResult {
    std::vector<IterationStep> steps;
    bool verified = false;
};

double iteration_floor(double delta, int step);

// beta[k - 1] is the threshold at order k; the last entry extends to larger orders
IterationResult iterate_growth(double delta, const RVec& beta, int K, const IterationOptions& opt = {});

} // namespace steklov
