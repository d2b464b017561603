#include "doctest.h"
#include "oracles.hpp"

#include "steklov/fft.hpp"
#include "steklov/opuc.hpp"

#include <cmath>
#include <random>

using namespace steklov;

namespace {

double max_diff(const CVec& a, const CVec& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const cplx x = i < a.size() ? a[i] : 0.0, y = i < b.size() ? b[i] : 0.0;
        d = std::max(d, std::abs(x - y));
    }
    return d;
}

Measure atomic_measure(const oracle::RandomSteklov& r, std::size_t G)
{
    return Measure::from_density(RVec(G, r.delta / two_pi), r.atoms);
}

} // namespace

TEST_CASE("moments of simple measures")
{
    const MomentSequence s = compute_moments(Measure::lebesgue(1024), 3);
    CHECK(std::abs(s.s[0] - 1.0) < 1e-14);
    for (int j = 1; j <= 3; ++j)
        CHECK(std::abs(s.s[j]) < 1e-14);

    Measure atom;
    atom.atoms = {{0.0, 1.0}};
    atom.refresh_mass();
    for (const auto& v : compute_moments(atom, 2).s)
        CHECK(std::abs(v - 1.0) < 1e-14);

    Measure mu = Measure::from_density(RVec(1024, 0.5 / two_pi), {{-2 * pi / 3, 0.25}, {2 * pi / 3, 0.25}});
    const MomentSequence t = compute_moments(mu, 1);
    CHECK(std::abs(t.s[0] - 1.0) < 1e-13);
    CHECK(std::abs(t.s[1] - (-0.25)) < 1e-13);
    const CVec o = oracle::atomic_moments(0.5, mu.atoms, 1);
    CHECK(std::abs(t.s[1] - o[1]) < 1e-13);
}

TEST_CASE("measure validation")
{
    Measure bad = Measure::from_density(RVec(64, 1.0 / two_pi));
    bad.atoms = {{0.5, 0.1}, {0.2, 0.1}};
    bad.refresh_mass();
    CHECK_THROWS_AS(bad.validate(), Error);
    Measure twice = Measure::from_density(RVec(64, 1.0 / two_pi), {{0.5, 0.1}, {0.5, 0.1}});
    CHECK_THROWS_AS(twice.validate(), Error);
    Measure neg = Measure::from_density(RVec(64, -1.0));
    CHECK_THROWS_AS(neg.validate(), Error);
}

TEST_CASE("Levinson against the Gram-Schmidt oracle")
{
    Measure mu = Measure::from_density(RVec(4096, 0.7 / two_pi), {{pi / 2, 0.3}});
    const MomentSequence s = compute_moments(mu, 4);
    const Verblunsky g = verblunsky_from_moments(s);
    const auto gs = oracle::gram_schmidt(s.s, 4);
    for (int k = 0; k < 4; ++k) {
        // gamma_k = -conj(Phi_{k+1}(0)), Phi monic
        const cplx Phi0 = gs[k + 1][0] / gs[k + 1][k + 1];
        CHECK(std::abs(g.gamma[k] + std::conj(Phi0)) < 1e-10);
    }
}

TEST_CASE("Lebesgue gives vanishing coefficients")
{
    MomentSequence s;
    s.s = {1.0, 0.0, 0.0, 0.0, 0.0};
    for (const auto& g : verblunsky_from_moments(s).gamma)
        CHECK(std::abs(g) == 0.0);
    const PolyPair pp = szego_recurse(Verblunsky(CVec(5, 0.0)), 5);
    CHECK(max_diff(pp.p.c, Poly::monomial(5).c) == 0.0);
    CHECK(max_diff(pp.p_star.c, CVec{1.0}) == 0.0);
}

TEST_CASE("indefinite moments are rejected")
{
    MomentSequence s;
    s.s = {1.0, 2.0, 0.0};
    CHECK_THROWS_AS(verblunsky_from_moments(s), Error);
}

TEST_CASE("one Szego step")
{
    const cplx g{0.3, -0.4};
    const PolyPair pp = szego_recurse(Verblunsky(CVec{g}), 1);
    const double r = std::sqrt(1.0 - std::norm(g));
    CHECK(std::abs(pp.p.coeff(0) + std::conj(g) / r) < 1e-15);
    CHECK(std::abs(pp.p.coeff(1) - 1.0 / r) < 1e-15);
    const PolyPair ps = second_kind_recurse(Verblunsky(CVec{g}), 1);
    CHECK(std::abs(ps.p.coeff(0) - std::conj(g) / r) < 1e-15);
}

TEST_CASE("Szego recursion against the determinant formula")
{
    std::mt19937_64 rng(11);
    for (double delta : {0.2, 0.6}) {
        const auto r = oracle::random_steklov(rng, delta, 5);
        const CVec s = oracle::atomic_moments(r.delta, r.atoms, 8);
        const Verblunsky g = verblunsky_from_moments(MomentSequence{s});
        const PolyPair pp = szego_recurse(g, 8);
        const cplx Phi0 = oracle::determinant_Phi_at_zero(s, 8);
        CHECK(std::abs(pp.p.coeff(0) / pp.p.coeff(8) - Phi0) < 1e-9);
        const auto gs = oracle::gram_schmidt(s, 8);
        CHECK(max_diff(pp.p.c, gs[8]) < 1e-9 * std::abs(pp.p.coeff(8)));
    }
}

TEST_CASE("Gram-Schmidt oracle on small cases")
{
    const auto gs = oracle::gram_schmidt({1.0, 0.0, 0.0}, 2);
    CHECK(max_diff(gs[2], CVec{0.0, 0.0, 1.0}) < 1e-15);
    const cplx c{0.2, 0.1};
    const auto g1 = oracle::gram_schmidt({1.0, c}, 1);
    const double r = std::sqrt(1.0 - std::norm(c));
    // Phi_1 = z - s_1 under <p, q> = int p conj(q) d mu
    CHECK(max_diff(g1[1], CVec{-c / r, 1.0 / r}) < 1e-15);
}

TEST_CASE("star transform and moduli")
{
    Poly p(CVec{{1.0, 2.0}, {0.5, -1.0}, {3.0, 0.25}});
    CHECK(max_diff(p.star(4).star(4).c, p.c) == 0.0);
    for (double t : {-2.0, 0.3, 1.7}) {
        const cplx z = std::polar(1.0, t);
        CHECK(std::abs(std::abs(p(z)) - std::abs(p.star(2)(z))) < 1e-13);
    }
}

TEST_CASE("Schur-Cohn round trip")
{
    const cplx g0{0.3, 0.4};
    const PolyPair pp = szego_recurse(Verblunsky(CVec{g0}), 1);
    const Verblunsky back = inverse_szego(pp.p_star, 1);
    CHECK(std::abs(back.gamma[0] - g0) < 1e-15);
    CHECK(inverse_szego(Poly::constant(1.0), 0).size() == 0);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    CVec g(12);
    for (auto& x : g)
        x = {u(rng), u(rng)};
    const Poly ps = szego_recurse(Verblunsky(g), 12).p_star;
    const SchurCohnResult sc = inverse_schur_cohn(3.5 * ps, 12);
    CHECK(max_diff(sc.gamma.gamma, g) < 1e-12);
}

TEST_CASE("Christoffel-Darboux kernel")
{
    CHECK(std::abs(cd_kernel(Verblunsky(CVec(4, 0.0)), 4, 1.0, 1.0) - 5.0) < 1e-14);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    CVec g(7);
    for (auto& x : g)
        x = {u(rng), u(rng)};
    const cplx xi = std::polar(1.0, 0.4), z = std::polar(0.8, -1.1);
    CHECK(std::abs(cd_kernel(Verblunsky(g), 6, xi, z) - cd_kernel_closed(Verblunsky(g), 6, xi, z)) < 1e-10);

    const auto r = oracle::random_steklov(rng, 0.3, 4);
    const Measure mu = atomic_measure(r, 4096);
    const Verblunsky gm = verblunsky_from_moments(compute_moments(mu, 10));
    for (double k : christoffel_diagonal_on_grid(gm, 10, 4096))
        CHECK(k / 11.0 <= 1.0 / 0.3 + 1e-6);
}

TEST_CASE("point mass insertion")
{
    const Measure leb = Measure::lebesgue(1024);
    const Poly ins = insert_point_mass(leb, 0.5, 0.0, 3);
    Measure mixed = Measure::from_density(RVec(1024, 0.5 / two_pi), {{0.0, 0.5}});
    const Poly full = levinson(compute_moments(mixed, 3), 3).Phi;
    CHECK(max_diff(ins.c, full.c) < 1e-10);

    const Poly small = insert_point_mass(leb, 1e-12, 0.7, 3);
    CHECK(max_diff(small.c, Poly::monomial(3).c) < 1e-11);

    // three atoms: Phi_3 vanishes at each of them
    Measure three;
    three.atoms = {{-2.0, 0.3}, {0.4, 0.3}, {1.9, 0.4}};
    three.refresh_mass();
    const Poly Phi = levinson(compute_moments(three, 3), 3, true).Phi;
    const Poly same = insert_point_mass(three, 0.3, 0.4, 3);
    CHECK(max_diff(same.c, Phi.c) < 1e-10);

    CHECK_THROWS_AS(insert_point_mass(leb, 1.5, 0.0, 3), Error);
}

TEST_CASE("Bernstein-Szego measure")
{
    const Measure flat = bernstein_szego_measure(Verblunsky(CVec(3, 0.0)), 3, 1024);
    CHECK(std::abs(flat.min_density() - 1.0 / two_pi) < 1e-15);
    const Measure bs = bernstein_szego_measure(Verblunsky(CVec{0.5}), 1, 4096);
    CHECK(std::abs(bs.total_mass - 1.0) < 1e-12);
    const Verblunsky g = verblunsky_from_moments(compute_moments(bs, 3));
    CHECK(std::abs(g.gamma[0] - 0.5) < 1e-9);
    CHECK(std::abs(g.gamma[1]) < 1e-9);
    CHECK(std::abs(g.gamma[2]) < 1e-9);
}

TEST_CASE("second kind polynomials approximate the Caratheodory function")
{
    std::mt19937_64 rng(17);
    const auto r = oracle::random_steklov(rng, 0.4, 3);
    const CVec s = oracle::atomic_moments(r.delta, r.atoms, 6);
    const Verblunsky g = verblunsky_from_moments(MomentSequence{s});
    const PolyPair phi = szego_recurse(g, 6), psi = second_kind_recurse(g, 6);
    // Taylor coefficients of psi^* / phi^*: F = 1 + 2 sum conj(s_j) z^j
    CVec q(7, 0.0);
    for (int j = 0; j <= 6; ++j) {
        cplx acc = psi.p_star.coeff(j);
        for (int i = 0; i < j; ++i)
            acc -= q[i] * phi.p_star.coeff(j - i);
        q[j] = acc / phi.p_star.coeff(0);
    }
    CHECK(std::abs(q[0] - 1.0) < 1e-8);
    for (int j = 1; j <= 6; ++j)
        CHECK(std::abs(q[j] - 2.0 * std::conj(s[j])) < 1e-8);
}

TEST_CASE("grid evaluation folds high degrees")
{
    const Poly p = Poly::monomial(9);
    const CVec v = eval_on_grid(p, 8);
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(std::abs(v[k] - std::polar(1.0, 9 * grid_theta(8, k))) < 1e-13);
}
