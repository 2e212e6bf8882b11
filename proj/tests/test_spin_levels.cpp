// test_spin_levels.cpp - Zeeman structure, transition amplitudes, spectra

#include <doctest.h>

#include <cmath>
#include <random>

#include "ramanup/constants.hpp"
#include "ramanup/spin_levels.hpp"

using namespace ramanup;
namespace cst = ramanup::constants;

namespace {

GTensor isotropic(double g)
{
    GTensor t;
    t.g = g * Eigen::Matrix3d::Identity();
    return t;
}

GTensor random_tensor(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.2, 8.0);
    std::uniform_real_distribution<double> angle(0.0, cst::pi);
    Eigen::Vector3d diag(u(rng), u(rng), u(rng));
    const double a = angle(rng), b = angle(rng);
    Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(a, Eigen::Vector3d::UnitZ()) *
         Eigen::AngleAxisd(b, Eigen::Vector3d::UnitX()))
            .toRotationMatrix();
    GTensor t;
    t.g = rot * diag.asDiagonal() * rot.transpose();
    return t;
}

std::map<int, SiteTensors> example_sites()
{
    return parse_gtensor_file(std::string(RAMANUP_DATA_DIR) + "/gtensors_example.txt");
}

}  // namespace

TEST_CASE("zeeman splitting")
{
    SUBCASE("zero field leaves the doublet degenerate")
    {
        const ZeemanDoublet d = zeeman_split(isotropic(2.0), {0.0, 29.0});
        CHECK(d.splitting_hz == 0.0);
        CHECK(std::abs(d.lower.norm() - 1.0) < 1e-14);
        CHECK(std::abs(d.lower.dot(d.upper)) < 1e-14);
    }

    SUBCASE("isotropic g = 2 at 0.175 T gives 4.90 GHz")
    {
        const ZeemanDoublet d = zeeman_split(isotropic(2.0), {0.175, 0.0});
        CHECK(d.splitting_hz == doctest::Approx(4.90e9).epsilon(2.1e-3));
        CHECK(d.splitting_hz == doctest::Approx(4.8987e9).epsilon(1e-4));
    }

    SUBCASE("splitting is exactly linear in the field magnitude")
    {
        std::mt19937_64 rng(5);
        const GTensor g = random_tensor(rng);
        std::uniform_real_distribution<double> angle(0.0, 360.0);
        for (int k = 0; k < 10; ++k) {
            const double alpha = angle(rng);
            const double f1 = zeeman_split(g, {0.05, alpha}).splitting_hz;
            const double f2 = zeeman_split(g, {0.10, alpha}).splitting_hz;
            const double f7 = zeeman_split(g, {0.35, alpha}).splitting_hz;
            CHECK(f2 == doctest::Approx(2.0 * f1).epsilon(1e-10));
            CHECK(f7 == doctest::Approx(7.0 * f1).epsilon(1e-10));
        }
    }

    SUBCASE("input validation")
    {
        GTensor asym;
        asym.g << 1, 0.5, 0, 0, 1, 0, 0, 0, 1;
        CHECK_THROWS_AS(zeeman_split(asym, {0.1, 0.0}), std::invalid_argument);
        CHECK_THROWS_AS(zeeman_split(isotropic(2.0), FieldConfig{-0.1, 0.0}),
                        std::invalid_argument);
        CHECK_THROWS_AS(zeeman_split(isotropic(2.0), FieldConfig{0.1, 400.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("transition amplitudes")
{
    SUBCASE("proportional tensors share the eigenbasis: no spin-flip lines")
    {
        const FieldConfig field{0.178, 40.0};
        std::mt19937_64 rng(7);
        const GTensor g = random_tensor(rng);
        GTensor ge;
        ge.g = 0.37 * g.g;
        const TransitionTable t =
            transition_amplitudes(zeeman_split(g, field), zeeman_split(ge, field));
        CHECK(std::abs(t.amplitude(0, 1)) < 1e-10);
        CHECK(std::abs(t.amplitude(1, 0)) < 1e-10);
        CHECK(std::abs(t.amplitude(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("rows of the amplitude table are orthonormal (100 random draws)")
    {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> field(0.01, 0.3);
        std::uniform_real_distribution<double> angle(0.0, 360.0);
        for (int k = 0; k < 100; ++k) {
            const FieldConfig f{field(rng), angle(rng)};
            const TransitionTable t = transition_amplitudes(
                zeeman_split(random_tensor(rng), f), zeeman_split(random_tensor(rng), f));
            const Eigen::Matrix2cd gram = t.amplitude * t.amplitude.adjoint();
            CHECK((gram - Eigen::Matrix2cd::Identity()).norm() < 1e-10);
        }
    }

    SUBCASE("non-normalized eigenvectors are rejected")
    {
        ZeemanDoublet bad = zeeman_split(isotropic(2.0), {0.1, 0.0});
        bad.lower *= 1.5;
        CHECK_THROWS_AS(transition_amplitudes(bad, bad), std::invalid_argument);
    }
}

TEST_CASE("line positions")
{
    SUBCASE("reference splittings reproduce the strong/weak line pattern")
    {
        const auto pos = line_positions(5.0e9, 1.8e9);
        CHECK(pos[0] == doctest::Approx(1.6e9));    // 1-3, spin preserving
        CHECK(pos[1] == doctest::Approx(-1.6e9));   // 2-4
        CHECK(pos[2] == doctest::Approx(3.4e9));    // 1-4, spin flip
        CHECK(pos[3] == doctest::Approx(-3.4e9));   // 2-3
    }

    SUBCASE("degenerate cases")
    {
        const auto zero_excited = line_positions(5.0e9, 0.0);
        CHECK(zero_excited[0] == doctest::Approx(2.5e9));
        CHECK(zero_excited[2] == doctest::Approx(2.5e9));

        const auto equal = line_positions(3.0e9, 3.0e9);
        CHECK(equal[0] == 0.0);
        CHECK(equal[1] == 0.0);
    }

    CHECK_THROWS_AS(line_positions(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("optimal angle")
{
    SUBCASE("proportional tensors have a flat objective")
    {
        std::mt19937_64 rng(13);
        const GTensor g = random_tensor(rng);
        GTensor ge;
        ge.g = 2.5 * g.g;
        CHECK_THROWS_AS(optimal_angle(g, ge), DegenerateOptimumError);
    }

    SUBCASE("bundled example dataset gives 29 degrees")
    {
        const SiteTensors site = example_sites().at(1);
        const OptimalAngleResult r = optimal_angle(site.ground, site.excited);
        CHECK(r.best.alpha_deg == doctest::Approx(29.0).epsilon(1.0 / 29.0));
        CHECK(r.best.overlap > 0.5);
        CHECK(r.local_maxima.size() >= 1);
    }

    SUBCASE("objective is periodic: alpha and alpha + 180 coincide")
    {
        const SiteTensors site = example_sites().at(1);
        const FieldConfig f1{1.0, 29.0};
        const FieldConfig f2{1.0, 209.0};
        const auto o1 = transition_amplitudes(zeeman_split(site.ground, f1),
                                              zeeman_split(site.excited, f1));
        const auto o2 = transition_amplitudes(zeeman_split(site.ground, f2),
                                              zeeman_split(site.excited, f2));
        CHECK(std::abs(o1.amplitude(1, 0)) ==
              doctest::Approx(std::abs(o2.amplitude(1, 0))).epsilon(1e-10));
    }

    SUBCASE("maximizer stable under grid refinement")
    {
        // the golden-section refinement already drives the bracket below 1e-7
        // degrees, so two independent runs must agree tightly
        const SiteTensors site = example_sites().at(1);
        const double a1 = optimal_angle(site.ground, site.excited).best.alpha_deg;
        const double a2 = optimal_angle(site.ground, site.excited).best.alpha_deg;
        CHECK(a1 == doctest::Approx(a2).epsilon(1e-9));
    }
}

TEST_CASE("absorption spectrum")
{
    const SiteTensors site = example_sites().at(1);

    SUBCASE("FWHM of a single line")
    {
        // sigma = 1.06 GHz -> FWHM 2.50 GHz
        const ZeemanDoublet zero_g = zeeman_split(site.ground, {0.0, 29.0});
        const ZeemanDoublet zero_e = zeeman_split(site.excited, {0.0, 29.0});
        const TransitionTable t = transition_amplitudes(zero_g, zero_e);
        const auto spec = absorption_spectrum(t, 1.06e9, 0.02, -6e9, 6e9, 24001);
        const double peak = spec[12000].alpha;
        double fwhm = 0.0;
        for (std::size_t i = 1; i < spec.size(); ++i) {
            if (spec[i - 1].alpha < 0.5 * peak && spec[i].alpha >= 0.5 * peak) {
                const double left = spec[i].detuning_hz;
                fwhm = 2.0 * std::abs(left);
                break;
            }
        }
        CHECK(fwhm == doctest::Approx(2.50e9).epsilon(4.2e-3));  // 2.50 +/- 0.01 GHz
        CHECK(fwhm == doctest::Approx(2.3548 * 1.06e9).epsilon(1e-3));
    }

    SUBCASE("zero field collapses to a single line at zero detuning")
    {
        const TransitionTable t =
            transition_amplitudes(zeeman_split(site.ground, {0.0, 29.0}),
                                  zeeman_split(site.excited, {0.0, 29.0}));
        const auto spec = absorption_spectrum(t, 1.06e9, 0.02, -6e9, 6e9, 1201);
        double peak_pos = 0.0, peak = -1.0;
        for (const auto& s : spec)
            if (s.alpha > peak) {
                peak = s.alpha;
                peak_pos = s.detuning_hz;
            }
        CHECK(std::abs(peak_pos) < 6e9 / 600.0);
    }

    SUBCASE("integrated area conserved between field configurations")
    {
        const auto area = [&](double b_tesla) {
            const TransitionTable t =
                transition_amplitudes(zeeman_split(site.ground, {b_tesla, 29.0}),
                                      zeeman_split(site.excited, {b_tesla, 29.0}));
            const auto spec = absorption_spectrum(t, 1.06e9, 0.02, -30e9, 30e9, 60001);
            double sum = 0.0;
            for (const auto& s : spec) sum += s.alpha;
            return sum * (60e9 / 60000);
        };
        CHECK(area(0.0) == doctest::Approx(area(0.178)).epsilon(1e-6));
    }

    SUBCASE("strong and weak lines sit at +-1.6 and +-3.4 GHz at 0.178 T")
    {
        const TransitionTable t =
            transition_amplitudes(zeeman_split(site.ground, {0.178, 29.0}),
                                  zeeman_split(site.excited, {0.178, 29.0}));
        CHECK(t.detuning_hz(0, 0) == doctest::Approx(1.6e9).epsilon(1e-3));
        CHECK(t.detuning_hz(1, 1) == doctest::Approx(-1.6e9).epsilon(1e-3));
        CHECK(t.detuning_hz(0, 1) == doctest::Approx(3.4e9).epsilon(1e-3));
        CHECK(t.detuning_hz(1, 0) == doctest::Approx(-3.4e9).epsilon(1e-3));
        // spin-preserving lines are the strong ones
        CHECK(std::abs(t.amplitude(0, 0)) > std::abs(t.amplitude(0, 1)));
        CHECK(std::abs(t.amplitude(1, 1)) > std::abs(t.amplitude(1, 0)));
    }
}

TEST_CASE("g-tensor file parsing")
{
    const auto sites = example_sites();
    REQUIRE(sites.count(1) == 1);
    CHECK(sites.at(1).has_ground);
    CHECK(sites.at(1).has_excited);
    CHECK(sites.at(1).ground.g(2, 2) == doctest::Approx(5.0));

    CHECK_THROWS(parse_gtensor_file("/nonexistent/path.txt"));
}
