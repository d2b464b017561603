#pragma once

#include "steklov/types.hpp"

#include <functional>

namespace steklov {

using ScalarFn = std::function<double(double)>;

// nodes/weights of the accepted Gauss-Kronrod panels, with the integrand values
struct QuadratureRule {
    RVec nodes;
    RVec weights;
    RVec values;
};

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    std::size_t panels = 0;
    bool converged = true;
    QuadratureRule rule;
};

// Adaptive GK15 on consecutive intervals [breaks_i, breaks_{i+1}].
// A panel is accepted when |K15 - G7| <= rel_tol * max(|K15|, scale * width / total_width)
// or when the difference is at the rounding level of the panel sum. Panels narrower than
// 1e-14 max(1, |midpoint|) are accepted as they stand.
AdaptiveResult integrate_adaptive(const ScalarFn& f, const RVec& breaks, double rel_tol, double scale,
                                  bool keep_rule = false, int max_depth = 60,
                                  std::size_t max_evaluations = 20000000);

// local maxima of f sampled on the base grid, refined by Brent's method
RVec locate_peaks(const ScalarFn& f, std::size_t base);

// integral over (-pi, pi] with base cells plus breakpoints at the refined peaks of `shape`
AdaptiveResult integrate_peaked_periodic(const ScalarFn& f, const ScalarFn& shape, std::size_t base, double rel_tol,
                                         bool keep_rule = false);

// integral over (-pi, pi] with base cells plus the given breakpoints
AdaptiveResult integrate_periodic(const ScalarFn& f, std::size_t base, const RVec& extra_breaks, double rel_tol,
                                  bool keep_rule = false);

// sum of w_i v_i g(x_i) over a stored rule
double apply_rule(const QuadratureRule& r, const ScalarFn& g);

} // namespace steklov
