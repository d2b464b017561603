#include "doctest.h"
#include "oracles.hpp"

#include "steklov/construct.hpp"
#include "steklov/fft.hpp"

#include <cmath>

using namespace steklov;

namespace {

const DecouplingConstruction& construction64()
{
    static const DecouplingConstruction c = [] {
        DecouplingParams p;
        p.n = 64;
        return build_decoupling(p);
    }();
    return c;
}

} // namespace

TEST_CASE("point-mass construction")
{
    const SmallDeltaConstruction sd = build_small_delta(10, 0.1, 1e6);
    CHECK(std::abs(sd.phi_at_1 / std::sqrt(11 / 0.1) - 1.0) < 0.01);
    CHECK(sd.orthogonality_residual < 1e-8);
    // the pipeline normalizes to unit mass
    const double pipeline = phi_at_one(compute_moments(sd.sigma, 10), 10) / std::sqrt(sd.sigma.total_mass);
    CHECK(std::abs(pipeline - sd.phi_at_1) < 1e-6 * sd.phi_at_1);

    const SmallDeltaConstruction flat = build_small_delta(6, 0.3, 0.0);
    CHECK(flat.Phi_at_1 == doctest::Approx(1.0));
    CHECK(flat.phi_at_1 == doctest::Approx(1.0 / std::sqrt(0.3)));

    // gamma_{n-1} = -conj(Phi_n(0)) = -m/(delta + m)
    const SmallDeltaConstruction s3 = build_small_delta(3, 0.4, 0.2, 4096);
    const Verblunsky g = verblunsky_from_moments(compute_moments(s3.sigma, 3));
    CHECK(std::abs(g.gamma[2] + 0.2 / 0.6) < 1e-10);

    double prev = 0.0;
    for (double m : {10.0, 100.0, 1e3, 1e4, 1e5, 1e6}) {
        const double v = build_small_delta(10, 0.1, m).phi_at_1;
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("decoupling construction identities")
{
    const DecouplingConstruction& c = construction64();
    CHECK(c.m == 4);
    CHECK(c.P.trimmed(0.0).degree() == 2 * c.m + 1);
    CHECK(std::abs(c.f1_minus_2Q1) < 1e-12 * std::abs(c.Q(1.0)));
    CHECK(std::abs(c.f(1.0) - 2.0 * c.Q(1.0)) < 1e-12 * std::abs(c.Q(1.0)));

    const Poly rebuilt = c.P + c.Q + c.Q.star(64);
    for (int j = 0; j <= 64; ++j)
        CHECK(std::abs(rebuilt.coeff(j) - c.f.coeff(j)) < 1e-14);

    // |Q|^2 = shifted Fejer + |B|^2 on a few angles
    const Poly B = c.B.poly();
    for (double t : {-2.5, -0.3, 0.0, 0.01, 1.2}) {
        const cplx z = std::polar(1.0, t);
        CHECK(std::abs(std::norm(c.Q(z)) - shifted_fejer_value(c.m, t) - std::norm(B(z))) < 1e-9);
    }
    CHECK(c.Q.coeff(0).real() > 0.0);
    CHECK(c.min_re_f_over_Q > 0.0);
}

TEST_CASE("normalization integrals")
{
    const DecouplingConstruction& c = construction64();
    const double I = oracle::inverse_square_integral(c.f);
    CHECK(std::abs(I - c.normalization_integral) < 1e-8 * I);
    CHECK(std::abs(I - two_pi * c.C_n * c.C_n) < 1e-8 * I);
    CHECK(std::abs(oracle::inverse_square_integral(c.phi_star) - two_pi) < 1e-8);

    const ConditionReport r = check_decoupling_conditions(c, 0.0);
    CHECK(r.zero_free);
    CHECK(r.norma_residual < 1e-8);
    CHECK(r.norka_residual < 1e-9);
    CHECK(r.mean_value_residual < 1e-9);
    CHECK(r.min_re_F > 0.0);
    CHECK(r.cancellation_residual < 1e-12);
    CHECK(r.c5 > 0.0);
}

TEST_CASE("F-tilde normalization")
{
    for (double eps : {1.0 / 64, 1.0 / 1024}) {
        const double Ct = C_tilde_of(0.05, 0.75, eps);
        CHECK(std::abs(F_tilde_at(0.05, 0.75, eps, 0.0).real() - 1.0) < 1e-14);
        CHECK(std::abs(Ct * (0.05 / (1 + eps) + std::pow(1 + eps, -0.75)) - 1.0) < 1e-15);
    }
}

TEST_CASE("sigma-tilde coefficients against exact moments")
{
    const DecouplingConstruction& c = construction64();
    const int T = 40;
    const RVec a = oracle::F_tilde_taylor(c.params.rho, c.params.alpha, c.eps, T);
    MomentSequence s;
    s.s.push_back(a[0]);
    for (int k = 1; k <= T; ++k)
        s.s.push_back(0.5 * a[k]);
    const Verblunsky exact = verblunsky_from_moments(s);
    const Verblunsky grid = sigma_tilde_verblunsky(c, T);
    for (int k = 0; k < T; ++k)
        CHECK(std::abs(exact.gamma[k] - grid.gamma[k]) < 1e-9);
}

TEST_CASE("assembled density")
{
    const DecouplingConstruction& c = construction64();
    AssembleOptions o;
    o.round_trip = true;
    const AssembledMeasure am = assemble_measure(c, o);
    CHECK(std::abs(am.mass_adaptive - 1.0) < 1e-8);
    CHECK(am.delta_realized > 0.0);
    CHECK(am.path_agreement < 1e-5);
    CHECK(am.round_trip < 1e-7);
    for (std::size_t k = 0; k < am.sigma_prime.size(); k += 997)
        CHECK(std::abs(am.sigma_prime.values[k].real() - assembled_density(c, am.sigma_prime.theta(k))) <
              1e-8 * am.sigma_prime.values[k].real());

    const Verblunsky& g = am.gamma_full;
    const Verblunsky forward = inverse_szego(c.phi_star, 64);
    for (int k = 0; k < 64; ++k)
        CHECK(std::abs(g.gamma[k] - forward.gamma[k]) < 1e-7);

    const RVec K = christoffel_diagonal_on_grid(g, 64, std::size_t(1) << 14);
    for (double v : K)
        CHECK(v / 65.0 <= 1.0 / am.delta_realized + 1e-6);

    const PointwiseBound pb = pointwise_bound_check(c, am);
    CHECK(pb.C > 0.0);

    // |phi_n(-1)|^2 stays bounded as n doubles
    DecouplingParams p;
    p.n = 128;
    const DecouplingConstruction c2 = build_decoupling(p);
    const PointwiseBound pb2 = pointwise_bound_check(c2, assemble_measure(c2));
    CHECK(pb2.phi_sq_at_pi < 2.0 * pb.phi_sq_at_pi);
    CHECK(pb2.C < 2.0 * pb.C);
    CHECK(pb.C < 2.0 * pb2.C);
}

TEST_CASE("invalid decoupling parameters")
{
    DecouplingParams p;
    p.n = 64;
    p.alpha = 0.4;
    CHECK_THROWS_AS(build_decoupling(p), Error);
    p.alpha = 0.75;
    p.delta1 = 0.6;
    CHECK_THROWS_AS(build_decoupling(p), Error);
}
