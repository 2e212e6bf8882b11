// test_ensemble.cpp - Quadrature contracts and the inhomogeneous average

#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ramanup/constants.hpp"
#include "ramanup/ensemble.hpp"

using namespace ramanup;
namespace cst = ramanup::constants;

namespace {

const double kSigmaMu = 2.0 * cst::pi * 13e6;
const double kSigmaO = 2.0 * cst::pi * 1e9;

RelaxationRates reference_rates()
{
    RelaxationRates r;
    r.gamma31 = 60.0;
    r.gamma32 = 30.0;
    r.gamma21 = 27.4;
    r.gamma2d = 1.7e6;
    r.gamma3d = 2.8e6;
    r.n_bath = 17.36;
    return r;
}

InhomogeneousDistribution reference_dist(double c_mu = 0.0, double c_o = 0.0)
{
    return InhomogeneousDistribution{kSigmaMu, kSigmaO, c_mu, c_o};
}

// Independent weak-drive oracle: second-order perturbation theory for the
// steady-state coherence, with the delta3 window integral in closed form and
// the delta2 average done by fine Simpson quadrature. No steady-state solver
// involved anywhere.
std::complex<double> weak_drive_oracle(const RelaxationRates& r, double omega_mu,
                                       double omega_xi,
                                       const InhomogeneousDistribution& dist, double span,
                                       double window)
{
    using Cx = std::complex<double>;
    const double g2 = 0.5 * (r.gamma2d + r.gamma21 * (2.0 * r.n_bath + 1.0));
    const double g3 = 0.5 * (r.gamma3d + r.gamma31 + r.gamma32 + r.gamma21 * r.n_bath);
    const double g23 = 0.5 * (r.gamma2d + r.gamma3d + r.gamma31 + r.gamma32 +
                              r.gamma21 * (r.n_bath + 1.0));
    const double dp = 1.0 / (2.0 * r.n_bath + 1.0);
    const double p2 = r.n_bath / (2.0 * r.n_bath + 1.0);
    const double w = window;

    const auto inner = [&](double d2) {
        const double j3 = 2.0 * std::atan(w / g3);
        const Cx phi = Cx(std::atan((w - d2) / g23) + std::atan((w + d2) / g23),
                          0.5 * std::log((g23 * g23 + (w - d2) * (w - d2)) /
                                         (g23 * g23 + (w + d2) * (w + d2))));
        const Cx p(g23 - g3, d2);
        return -omega_mu * omega_xi * (dp / Cx(g2, -d2) * j3 - p2 / p * (j3 - phi));
    };

    // Simpson over the Gaussian support with a refined segment on the pole.
    const auto segment = [&](double a, double b, int n) {
        Cx sum = 0.0;
        const double h = (b - a) / n;
        for (int i = 0; i <= n; ++i) {
            const double d2 = a + i * h;
            const double u = (d2 - dist.center_mu) / dist.sigma_mu;
            const double g =
                std::exp(-0.5 * u * u) / (std::sqrt(2.0 * cst::pi) * dist.sigma_mu);
            const double c = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += c * g * inner(d2);
        }
        return sum * (h / 3.0);
    };
    const double lo = dist.center_mu - span * dist.sigma_mu;
    const double hi = dist.center_mu + span * dist.sigma_mu;
    Cx total = 0.0;
    const double pole_edge = 20.0 * g2;
    if (lo < -pole_edge) total += segment(lo, -pole_edge, 4000);
    total += segment(std::max(lo, -pole_edge), std::min(hi, pole_edge), 20000);
    if (hi > pole_edge) total += segment(pole_edge, hi, 4000);

    const double u = dist.center_o / dist.sigma_o;
    return std::exp(-0.5 * u * u) * total;
}

}  // namespace

TEST_CASE("quadrature grid contract")
{
    const InhomogeneousDistribution dist = reference_dist();

    SUBCASE("weights carry the enclosed Gaussian mass")
    {
        const QuadratureGrid grid = quadrature_grid(dist, 15, 15, 4.0);
        const double expected = std::pow(std::erf(4.0 / std::sqrt(2.0)), 2);
        CHECK(grid.total_weight() == doctest::Approx(expected).epsilon(5e-4));
        CHECK(grid.total_weight() == doctest::Approx(0.99986).epsilon(1e-3));

        const QuadratureGrid fine = quadrature_grid(dist, 41, 41, 4.0);
        CHECK(fine.total_weight() == doctest::Approx(expected).epsilon(1e-6));
    }

    SUBCASE("nodes are symmetric about the center")
    {
        InhomogeneousDistribution shifted = reference_dist(3e7, -5e8);
        const QuadratureGrid grid = quadrature_grid(shifted, 9, 7, 3.5);
        for (const auto& node : grid.nodes) {
            const double mirrored2 = 2.0 * shifted.center_mu - node.delta2;
            const double mirrored3 = 2.0 * shifted.center_o - node.delta3;
            bool found = false;
            for (const auto& other : grid.nodes) {
                if (std::abs(other.delta2 - mirrored2) < 1e-6 * shifted.sigma_mu &&
                    std::abs(other.delta3 - mirrored3) < 1e-6 * shifted.sigma_o) {
                    found = true;
                    break;
                }
            }
            CHECK(found);
        }
    }

    SUBCASE("argument validation")
    {
        CHECK_THROWS_AS(quadrature_grid(dist, 2, 15, 4.0), std::invalid_argument);
        CHECK_THROWS_AS(quadrature_grid(dist, 15, 2, 4.0), std::invalid_argument);
        CHECK_THROWS_AS(quadrature_grid(dist, 15, 15, 0.0), std::invalid_argument);
        InhomogeneousDistribution bad = dist;
        bad.sigma_mu = 0.0;
        CHECK_THROWS_AS(quadrature_grid(bad, 15, 15, 4.0), std::invalid_argument);
    }
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly")
{
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double sum = 0.0, quartic = 0.0;
    for (int i = 0; i < 8; ++i) {
        sum += w[i];
        quartic += w[i] * std::pow(x[i], 4);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(quartic == doctest::Approx(2.0 / 5.0).epsilon(1e-13));
}

TEST_CASE("ensemble coherence vanishes without a drive")
{
    const RelaxationRates rates = reference_rates();
    const InhomogeneousDistribution dist = reference_dist();
    const QuadratureGrid grid = quadrature_grid(dist, 15, 15, 4.0);

    // bounded by accumulated solver roundoff; physical values are >= 1e-5
    AtomDrive no_mu{0.0, 0.0, 0.0, 2.8e4};
    CHECK(std::abs(ensemble_coherence(no_mu, rates, dist, grid)) < 1e-9);

    AtomDrive no_xi{0.0, 0.0, 3.2e5, 0.0};
    CHECK(std::abs(ensemble_coherence(no_xi, rates, dist, grid)) < 1e-9);
}

TEST_CASE("conjugate symmetry under center reflection")
{
    const RelaxationRates rates = reference_rates();
    const AtomDrive drive{0.0, 0.0, 3.2e5, 2.8e4};
    for (auto [c_mu, c_o] : {std::pair{5e7, 3e9}, std::pair{-1.2e8, -1e9}}) {
        const InhomogeneousDistribution plus = reference_dist(c_mu, c_o);
        const InhomogeneousDistribution minus = reference_dist(-c_mu, -c_o);
        const auto ip = ensemble_coherence(drive, rates, plus,
                                           quadrature_grid(plus, 21, 21, 4.0));
        const auto im = ensemble_coherence(drive, rates, minus,
                                           quadrature_grid(minus, 21, 21, 4.0));
        // the reflected ensemble is the complex conjugate system, up to
        // linear-solver roundoff at the strongly detuned nodes
        CHECK(std::abs(ip) == doctest::Approx(std::abs(im)).epsilon(1e-4));
        CHECK(std::abs(im - std::conj(ip)) < 1e-4 * std::abs(ip));
    }
}

TEST_CASE("weak-drive bilinearity of the ensemble average")
{
    const RelaxationRates rates = reference_rates();
    const InhomogeneousDistribution dist = reference_dist();
    const QuadratureGrid grid = quadrature_grid(dist, 21, 21, 4.0);

    // Drives well below 1e-3 of the dephasing rates; the optical side must be
    // weaker still, because at n_bath ~ 17 the thermal polarization is only
    // 1/35 and even slight optical pumping shifts it at the percent level.
    const double omega_mu = 1e3, omega_xi = 100.0;
    const auto value = [&](double lambda) {
        const AtomDrive drive{0.0, 0.0, lambda * omega_mu, lambda * omega_xi};
        return std::abs(ensemble_coherence(drive, rates, dist, grid));
    };
    const double base = value(1.0);
    CHECK(base > 0.0);
    for (double lambda : {0.5, 1.5, 2.0}) {
        CHECK(value(lambda) / base == doctest::Approx(lambda * lambda).epsilon(0.01));
    }
}

TEST_CASE("weak-drive oracle agreement")
{
    // Perturbation theory with closed-form window integrals, fully independent
    // of the steady-state solver.
    const RelaxationRates rates = reference_rates();
    const double omega_mu = 960.0, omega_xi = 84.0;
    const AtomDrive drive{0.0, 0.0, omega_mu, omega_xi};

    for (auto [c_mu, c_o] : {std::pair{0.0, 0.0}, std::pair{6e7, 2e9}}) {
        const InhomogeneousDistribution dist = reference_dist(c_mu, c_o);
        const QuadratureGrid grid = quadrature_grid(dist, 62, 62, 4.0);
        const auto numeric = ensemble_coherence(drive, rates, dist, grid, 2);
        const auto oracle =
            weak_drive_oracle(rates, omega_mu, omega_xi, dist, 4.0, 3.0 * kSigmaO);
        CHECK(std::abs(numeric - oracle) < 0.01 * std::abs(oracle));
    }
}

TEST_CASE("quadrature convergence at the reference operating point")
{
    const RelaxationRates rates = reference_rates();
    const InhomogeneousDistribution dist = reference_dist();
    const AtomDrive drive{0.0, 0.0, 3.2e5, 2.8e4};

    const auto coarse = ensemble_coherence(drive, rates, dist,
                                           quadrature_grid(dist, 31, 31, 4.0), 2);
    const auto fine = ensemble_coherence(drive, rates, dist,
                                         quadrature_grid(dist, 62, 62, 4.0), 2);
    CHECK(std::abs(fine - coarse) / std::abs(fine) < 1e-3);
}

TEST_CASE("parallel evaluation is bitwise deterministic")
{
    const RelaxationRates rates = reference_rates();
    const InhomogeneousDistribution dist = reference_dist(2e7, 5e8);
    const QuadratureGrid grid = quadrature_grid(dist, 21, 21, 4.0);
    const AtomDrive drive{0.0, 0.0, 3.2e5, 2.8e4};

    const auto serial = ensemble_averages(drive, rates, dist, grid, 1);
    const auto parallel2 = ensemble_averages(drive, rates, dist, grid, 2);
    const auto parallel7 = ensemble_averages(drive, rates, dist, grid, 7);
    CHECK(serial.coherence.real() == parallel2.coherence.real());
    CHECK(serial.coherence.imag() == parallel2.coherence.imag());
    CHECK(serial.coherence.real() == parallel7.coherence.real());
    CHECK(serial.coherence.imag() == parallel7.coherence.imag());
    CHECK(serial.pop_difference == parallel2.pop_difference);
    CHECK(serial.pop_difference == parallel7.pop_difference);
}

TEST_CASE("grid/distribution mismatch is rejected")
{
    const RelaxationRates rates = reference_rates();
    const InhomogeneousDistribution dist = reference_dist();
    const QuadratureGrid grid = quadrature_grid(reference_dist(1e7, 0.0), 15, 15, 4.0);
    const AtomDrive drive{0.0, 0.0, 1e4, 1e4};
    CHECK_THROWS_AS(ensemble_coherence(drive, rates, dist, grid), std::invalid_argument);
}

TEST_CASE("polarization")
{
    const MediumParams medium =
        make_medium(1.8e23, 1.8, 12e-3, 0.02e3, 0.5, 1536.478e-9, 4.9e9);

    SUBCASE("zero coherence gives zero polarization")
    {
        CHECK(polarization(1e-3, medium, {0.0, 0.0}) == 0.0);
    }

    SUBCASE("real for arbitrary complex coherence and linear in density")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            const std::complex<double> avg(u(rng), u(rng));
            const double z = 6e-3 * (u(rng) + 1.0);
            const double p = polarization(z, medium, avg);
            CHECK(std::isfinite(p));

            MediumParams doubled = medium;
            doubled.atom_density *= 2.0;
            CHECK(polarization(z, doubled, avg) == doctest::Approx(2.0 * p));
        }
    }

    SUBCASE("position bounds")
    {
        CHECK_THROWS_AS(polarization(-1e-6, medium, {1.0, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(polarization(13e-3, medium, {1.0, 0.0}), std::invalid_argument);
    }
}
