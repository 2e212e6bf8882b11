// test_lindblad.cpp - Generator, steady state and time-evolution oracle checks

#include <doctest.h>

#include <cmath>
#include <random>

#include "ramanup/lindblad.hpp"

using namespace ramanup;

namespace {

Matrix3c random_density(std::mt19937_64& rng)
{
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix3c a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = Complex(dist(rng), dist(rng));
    Matrix3c rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

double max_abs_diff(const Matrix3c& a, const Matrix3c& b)
{
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("thermal occupation")
{
    // bath quanta at the working point; the reference analysis quotes ~17 for
    // a 5 GHz transition at 4.2 K
    CHECK(thermal_occupation(5.0e9, 4.2) == doctest::Approx(17.0).epsilon(0.006));
    CHECK(thermal_occupation(4.9e9, 4.2) == doctest::Approx(17.3646).epsilon(1e-4));
    CHECK(thermal_occupation(1.0e9, 4.2) == doctest::Approx(87.0148).epsilon(1e-4));
    CHECK(thermal_occupation(1.0e9, 0.0) == 0.0);
    CHECK(thermal_occupation(123.0, 0.0) == 0.0);
    CHECK_THROWS_AS(thermal_occupation(0.0, 4.2), std::invalid_argument);
    CHECK_THROWS_AS(thermal_occupation(-1.0, 4.2), std::invalid_argument);
}

TEST_CASE("hamiltonian assembly")
{
    CHECK(build_hamiltonian(AtomDrive{}).norm() == 0.0);

    const Matrix3c h = build_hamiltonian({1.0, 2.0, 0.3, 0.4});
    CHECK(h(0, 0) == Complex(0.0));
    CHECK(h(1, 1) == Complex(1.0));
    CHECK(h(2, 2) == Complex(2.0));
    CHECK(h(0, 1) == Complex(0.3));
    CHECK(h(1, 0) == Complex(0.3));
    CHECK(h(1, 2) == Complex(0.4));
    CHECK(h(2, 1) == Complex(0.4));
    CHECK(h(0, 2) == Complex(0.0));  // no direct drive on |1>-|3>
    CHECK(h(2, 0) == Complex(0.0));
    CHECK(is_hermitian(h));

    const Matrix3c h2 = build_hamiltonian({0.0, 0.0, 0.3, 0.0});
    CHECK(h2(0, 1) == Complex(0.3));
    CHECK(h2(1, 0) == Complex(0.3));
    CHECK((h2.cwiseAbs().sum() - 0.6) == doctest::Approx(0.0));
}

TEST_CASE("liouvillian basics")
{
    CHECK(build_liouvillian(Matrix3c::Zero(), RelaxationRates{}).matrix.norm() == 0.0);

    Matrix3c non_hermitian = Matrix3c::Zero();
    non_hermitian(0, 1) = Complex(0.0, 1.0);
    CHECK_THROWS_AS(build_liouvillian(non_hermitian, RelaxationRates{}),
                    std::invalid_argument);

    RelaxationRates bad;
    bad.gamma21 = -1.0;
    CHECK_THROWS_AS(build_liouvillian(Matrix3c::Zero(), bad), std::invalid_argument);
}

TEST_CASE("trace functional annihilation on random states")
{
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const AtomDrive drive{u(rng) - 1.0, u(rng) - 1.0, u(rng), u(rng)};
        const RelaxationRates rates{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
        const Liouvillian gen = build_liouvillian(drive, rates);
        const Matrix3c rho = random_density(rng);
        const Complex tr = gen.apply(rho).trace();
        CHECK(std::abs(tr) < 1e-12);
    }
}

TEST_CASE("thermal rate-equation oracle")
{
    // Drives off, only the thermal spin flips active: the ground-doublet
    // populations obey p1' = g21 (Nb+1) p2 - g21 Nb p1.
    const double gamma21 = 3.0, nb = 17.0;
    RelaxationRates rates;
    rates.gamma21 = gamma21;
    rates.n_bath = nb;
    const Liouvillian gen = build_liouvillian(AtomDrive{}, rates);

    Matrix3c rho0 = Matrix3c::Zero();
    rho0(0, 0) = 0.2;
    rho0(1, 1) = 0.8;

    const double p1_ss = (nb + 1.0) / (2.0 * nb + 1.0);
    const double lambda = gamma21 * (2.0 * nb + 1.0);
    for (double t : {1e-3 / lambda, 0.3 / lambda, 1.0 / lambda, 3.0 / lambda}) {
        const Matrix3c rho = evolve(rho0, gen, t);
        const double p1_expected = p1_ss + (0.2 - p1_ss) * std::exp(-lambda * t);
        CHECK(rho(0, 0).real() == doctest::Approx(p1_expected).epsilon(1e-7));
        CHECK(rho(2, 2).real() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
    }
}

TEST_CASE("steady state closed forms")
{
    RelaxationRates rates;
    rates.gamma31 = 60.0;
    rates.gamma32 = 30.0;
    rates.gamma21 = 27.4;

    SUBCASE("zero-temperature ground state")
    {
        const Matrix3c rho = steady_state(build_liouvillian(AtomDrive{}, rates));
        CHECK(rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(rho(1, 1)) < 1e-10);
        CHECK(std::abs(rho(2, 2)) < 1e-10);
    }

    SUBCASE("detailed balance at Nb = 17")
    {
        rates.n_bath = 17.0;
        const Matrix3c rho = steady_state(build_liouvillian(AtomDrive{}, rates));
        CHECK(rho(0, 0).real() == doctest::Approx(18.0 / 35.0).epsilon(1e-9));
        CHECK(rho(1, 1).real() == doctest::Approx(17.0 / 35.0).epsilon(1e-9));
        CHECK(std::abs(rho(2, 2)) < 1e-10);
    }

    SUBCASE("detailed balance across the bath matrix")
    {
        for (double nb : {0.1, 1.0, 17.0, 100.0}) {
            rates.n_bath = nb;
            const Matrix3c rho = steady_state(build_liouvillian(AtomDrive{}, rates));
            const double ratio = rho(1, 1).real() / rho(0, 0).real();
            CHECK(std::abs(ratio - nb / (nb + 1.0)) < 1e-8);
        }
    }
}

TEST_CASE("steady state degenerate kernels are rejected")
{
    CHECK_THROWS_AS(steady_state(build_liouvillian(AtomDrive{}, RelaxationRates{})),
                    NonUniqueSteadyStateError);

    // Pure dephasing only: populations are conserved, kernel dimension 3.
    RelaxationRates deph;
    deph.gamma2d = 1.0;
    deph.gamma3d = 2.0;
    CHECK_THROWS_AS(steady_state(build_liouvillian(AtomDrive{}, deph)),
                    NonUniqueSteadyStateError);
}

TEST_CASE("steady state invariants on random parameters")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const AtomDrive drive{20.0 * (u(rng) - 0.5), 20.0 * (u(rng) - 0.5), 5.0 * u(rng),
                              5.0 * u(rng)};
        RelaxationRates rates{0.1 + u(rng), 0.1 + u(rng), 0.1 + u(rng), u(rng), u(rng),
                              3.0 * u(rng)};
        const Liouvillian gen = build_liouvillian(drive, rates);
        const Matrix3c rho = steady_state(gen);

        CHECK(std::abs(rho.trace() - 1.0) < 1e-10);
        CHECK(is_hermitian(rho, 1e-12));
        CHECK(vectorize(gen.apply(rho)).norm() <= 1e-10 * gen.matrix.norm());

        Eigen::SelfAdjointEigenSolver<Matrix3c> eig(rho);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("weak-drive bilinearity of rho31")
{
    // Perturbative regime: the drives must stay small against the dephasing
    // rates AND the optical-pumping rate Omega^2/Gamma3 must stay small
    // against both the spin relaxation and the excited-state decay, or the
    // populations shift and the scaling picks up higher-order terms.
    RelaxationRates rates;
    rates.gamma31 = 1200.0;
    rates.gamma32 = 600.0;
    rates.gamma21 = 1e3;
    rates.gamma2d = 1e6;
    rates.gamma3d = 1e6;
    rates.n_bath = 1.0;

    const double omega = 1e-3 * 1e6;  // 1e-3 of the smallest dephasing rate
    const auto coherence = [&](double scale) {
        const AtomDrive drive{0.0, 0.0, scale * omega, scale * omega};
        return std::abs(rho31(steady_state(build_liouvillian(drive, rates))));
    };

    const double base = coherence(1.0);
    CHECK(base > 0.0);
    for (double lambda : {0.5, 0.7, 1.5, 2.0}) {
        const double ratio = coherence(lambda) / base;
        CHECK(ratio == doctest::Approx(lambda * lambda).epsilon(0.01));
    }
}

TEST_CASE("evolve basics")
{
    RelaxationRates rates;
    rates.gamma31 = 2.0;
    rates.gamma32 = 1.0;
    rates.gamma21 = 0.5;
    rates.n_bath = 0.3;
    const Liouvillian gen = build_liouvillian(AtomDrive{1.0, -2.0, 0.7, 0.4}, rates);

    Matrix3c rho0 = Matrix3c::Zero();
    rho0(0, 0) = 1.0;

    SUBCASE("t = 0 returns the initial state")
    {
        CHECK(max_abs_diff(evolve(rho0, gen, 0.0), rho0) == 0.0);
    }

    SUBCASE("trace and hermiticity preserved along the trajectory")
    {
        for (double t : {0.01, 0.1, 1.0, 10.0}) {
            const Matrix3c rho = evolve(rho0, gen, t);
            CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
            CHECK(is_hermitian(rho, 1e-8));
        }
    }

    SUBCASE("long-time limit matches the steady state")
    {
        const Matrix3c rho_ss = steady_state(gen);
        const Matrix3c rho_t = evolve(rho0, gen, 50.0 / 0.5);
        CHECK(max_abs_diff(rho_t, rho_ss) < 1e-6);
    }

    SUBCASE("step budget exhaustion raises integration failure")
    {
        EvolveOptions opts;
        opts.max_steps = 10;
        CHECK_THROWS_AS(evolve(rho0, gen, 1e6, opts), IntegrationFailure);
    }
}

TEST_CASE("oracle equivalence: linear solve vs long-time integration")
{
    // Rates and drives log-uniform over six decades; the integration horizon
    // follows the slowest relaxation channel.
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> expo(-2.0, 4.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        RelaxationRates rates;
        rates.gamma31 = std::pow(10.0, expo(rng));
        rates.gamma32 = std::pow(10.0, expo(rng));
        rates.gamma21 = std::pow(10.0, expo(rng));
        rates.gamma2d = std::pow(10.0, expo(rng));
        rates.gamma3d = std::pow(10.0, expo(rng));
        rates.n_bath = 5.0 * u(rng);

        AtomDrive drive;
        drive.omega_mu = std::pow(10.0, expo(rng));
        drive.omega_xi = std::pow(10.0, expo(rng));
        drive.delta2 = (u(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, expo(rng));
        drive.delta3 = (u(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, expo(rng));

        const double min_rate = std::min({rates.gamma31, rates.gamma32, rates.gamma21,
                                          rates.gamma2d, rates.gamma3d});
        const Liouvillian gen = build_liouvillian(drive, rates);
        const Matrix3c rho_ss = steady_state(gen);

        Matrix3c rho0 = Matrix3c::Zero();
        rho0(0, 0) = 0.5;
        rho0(1, 1) = 0.5;
        const Matrix3c rho_t = evolve(rho0, gen, 50.0 / min_rate);
        CHECK(max_abs_diff(rho_t, rho_ss) < 1e-6);
    }
}
