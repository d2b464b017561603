#pragma once

#include "steklov/types.hpp"

namespace steklov {

// Unnormalized DFT. sign = -1: X_j = sum x_k e^{-2 pi i jk/G}; sign = +1: conjugate kernel.
CVec dft(const CVec& x, int sign);

// p(e^{i theta_k}) on the grid theta_k = -pi + 2 pi k/G. Degrees >= G are folded (exact at the nodes).
CVec eval_on_grid(const Poly& p, std::size_t G);
CVec eval_on_grid(const CVec& coeffs, std::size_t G);

// Fourier coefficients c_j of the grid samples, values_k = sum_j c_j e^{i j theta_k}.
// Entry j (0 <= j < G) holds frequency j for j < G/2 and j - G otherwise.
CVec grid_fourier(const CVec& values);
CVec grid_fourier(const RVec& values);

// frequency carried by slot j of grid_fourier output
inline long grid_frequency(std::size_t j, std::size_t G)
{
    return j < G / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(G);
}

// trapezoid integral over (-pi, pi] of grid samples
double grid_integral(const RVec& values);

} // namespace steklov
