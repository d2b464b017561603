#include "steklov/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numeric>

namespace steklov {

namespace {

std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

} // namespace

CVec dft(const CVec& x, int sign)
{
    const std::size_t G = x.size();
    CVec out(G);
    if (G == 0)
        return out;
    CVec in = x;
    auto* ip = reinterpret_cast<fftw_complex*>(in.data());
    auto* op = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(G), ip, op, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

CVec eval_on_grid(const CVec& coeffs, std::size_t G)
{
    if (!is_pow2(G))
        throw Error(Status::invalid_argument, "grid size must be a power of two");
    CVec a(G, 0.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        a[j % G] += (j % 2 == 0) ? coeffs[j] : -coeffs[j];
    return dft(a, +1);
}

CVec eval_on_grid(const Poly& p, std::size_t G) { return eval_on_grid(p.c, G); }

CVec grid_fourier(const CVec& values)
{
    const std::size_t G = values.size();
    CVec c = dft(values, -1);
    const double inv = 1.0 / static_cast<double>(G);
    for (std::size_t j = 0; j < G; ++j)
        c[j] *= (j % 2 == 0) ? inv : -inv;
    return c;
}

CVec grid_fourier(const RVec& values) { return grid_fourier(CVec(values.begin(), values.end())); }

double grid_integral(const RVec& values)
{
    if (values.empty())
        return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) * two_pi / static_cast<double>(values.size());
}

} // namespace steklov
