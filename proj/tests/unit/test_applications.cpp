#include "doctest.h"
#include "oracles.hpp"

#include "steklov/applications.hpp"

#include <cmath>
#include <random>

using namespace steklov;

TEST_CASE("Lebesgue measure on the line")
{
    const LineTransplant t = circle_to_line(Measure::lebesgue(8192), 10);
    const RVec ref = oracle::chebyshev_line_values(10);
    for (int k = 0; k <= 10; ++k)
        CHECK(std::abs(t.P0_all[k] - ref[k]) < 1e-8);
    for (int k = 1; k <= 10; k += 2)
        CHECK(std::abs(t.P0_all[k]) < 1e-12);
    CHECK(std::abs(t.line.mass - 0.5) < 1e-6);
}

TEST_CASE("asymmetric measures are rejected")
{
    Measure mu = Measure::from_density(RVec(1024, 0.5 / two_pi), {{0.3, 0.5}});
    CHECK(symmetry_residual(mu) > 0.1);
    CHECK_THROWS_AS(circle_to_line(mu, 4), Error);
}

TEST_CASE("symmetric atomic measure against a direct line oracle")
{
    // sigma = 0.6 Lebesgue + 0.2 (delta_a + delta_{-a}); line weight plus an atom of mass 0.2 at cos a
    const double a = 1.1;
    Measure mu = Measure::from_density(RVec(8192, 0.6 / two_pi), {{-a, 0.2}, {a, 0.2}});
    const LineTransplant t = circle_to_line(mu, 6);
    REQUIRE(t.line.atoms.size() == 1);
    CHECK(std::abs(t.line.atoms[0].x - std::cos(a)) < 1e-12);
    CHECK(std::abs(t.line.atoms[0].mass - 0.2) < 1e-15);
    CHECK(t.gamma_imag_max < 1e-12);
    const RVec ref = oracle::line_values(6, 0.6, {{std::cos(a), 0.2}});
    for (int k = 0; k <= 6; ++k)
        CHECK(std::abs(t.P0_all[k] - ref[k]) < 1e-8);
}

TEST_CASE("rotation and sieving of coefficients")
{
    std::mt19937_64 rng(8);
    const auto r = oracle::random_steklov(rng, 0.5, 3);
    Measure mu = Measure::from_density(RVec(4096, 0.5 / two_pi), r.atoms);
    const Verblunsky g = verblunsky_from_moments(compute_moments(mu, 6));

    const long steps = 256; // pi / 8
    const Measure rot = rotate_measure(mu, steps);
    const Verblunsky gr = verblunsky_from_moments(compute_moments(rot, 6));
    const Verblunsky pred = rotate_verblunsky(g, two_pi * steps / 4096.0);
    for (int k = 0; k < 6; ++k)
        CHECK(std::abs(gr.gamma[k] - pred.gamma[k]) < 1e-10);

    const Measure dil = dilate_measure(Measure::from_density(RVec(4096, 1.0 / two_pi)), 2);
    CHECK(std::abs(dil.total_mass - 1.0) < 1e-12);
    const Measure dm = dilate_measure(mu, 3);
    const Verblunsky gd = verblunsky_from_moments(compute_moments(dm, 18));
    const Verblunsky ps = sieve_verblunsky(g, 3);
    for (int k = 0; k < 18; ++k)
        CHECK(std::abs(gd.gamma[k] - ps.gamma[k]) < 1e-9);
}

TEST_CASE("entropy")
{
    const EntropyEntry leb = polynomial_entropy(Measure::lebesgue(1024), 20);
    CHECK(leb.omega == 0.0);
    CHECK(leb.norm_sq == 1.0);

    const SmallDeltaConstruction sd = build_small_delta(8, 0.3, 0.05, 8192);
    const EntropyEntry e = polynomial_entropy(sd.sigma, 8);
    CHECK(e.omega >= 0.0);
    CHECK(std::abs(e.norm_sq - 1.0) < 1e-9);
    CHECK(e.omega <= std::log(e.sup_phi) * e.norm_sq + 1e-12);
    CHECK(e.sup_phi <= std::sqrt(9 / 0.3) * (1 + 1e-9));

    const EntropyFit f = fit_entropy({64, 128, 256}, {1.0, 1.5, 2.0});
    CHECK(f.slope == doctest::Approx(0.5 / std::log(2.0)));
    CHECK(f.residual < 1e-12);
}

TEST_CASE("transplant of the decoupling construction")
{
    DecouplingParams p;
    p.n = 64;
    const DecouplingConstruction c = build_decoupling(p);
    const AssembledMeasure am = assemble_measure(c);
    const SymmetricTransplant s = symmetric_transplant(c, am.delta_realized);
    CHECK(s.k == 64);
    CHECK(s.gamma_imag_max < 1e-12);
    CHECK(s.ratio > 0.5);
    CHECK(std::abs(s.phi_circle - c.growth_ratio * std::sqrt(64.0)) < 1e-8 * s.phi_circle);
}
