// spin_levels.cpp

#include "ramanup/spin_levels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ramanup/constants.hpp"

namespace ramanup {

namespace c = constants;

void GTensor::validate() const
{
    if ((g - g.transpose()).norm() > 1e-12 * std::max(1.0, g.norm()))
        throw std::invalid_argument("GTensor: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(g);
    if (solver.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, g.norm()))
        throw std::invalid_argument("GTensor: matrix must be positive semidefinite");
}

void FieldConfig::validate() const
{
    if (b_tesla < 0) throw std::invalid_argument("FieldConfig: field magnitude must be >= 0");
    if (alpha_deg < 0 || alpha_deg >= 360)
        throw std::invalid_argument("FieldConfig: angle must lie in [0, 360)");
}

Eigen::Vector3d FieldConfig::direction() const
{
    const double a = alpha_deg * c::pi / 180.0;
    return {std::cos(a), std::sin(a), 0.0};
}

namespace {

// Spin-1/2 eigenvectors of sigma . v for a unit vector v, with a fixed gauge
// (largest component real and positive) so results are reproducible.
void pauli_eigenvectors(const Eigen::Vector3d& v_unit, Eigen::Vector2cd& minus,
                        Eigen::Vector2cd& plus)
{
    using Cx = std::complex<double>;
    Eigen::Matrix2cd m;
    m(0, 0) = Cx(v_unit.z(), 0.0);
    m(0, 1) = Cx(v_unit.x(), -v_unit.y());
    m(1, 0) = Cx(v_unit.x(), v_unit.y());
    m(1, 1) = Cx(-v_unit.z(), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m);
    minus = solver.eigenvectors().col(0);  // eigenvalue -1
    plus = solver.eigenvectors().col(1);   // eigenvalue +1
    for (Eigen::Vector2cd* vec : {&minus, &plus}) {
        const int idx = (std::abs((*vec)(0)) >= std::abs((*vec)(1))) ? 0 : 1;
        const Cx phase = (*vec)(idx) / std::abs((*vec)(idx));
        *vec /= phase;
    }
}

}  // namespace

ZeemanDoublet zeeman_split(const GTensor& g, const FieldConfig& field)
{
    g.validate();
    field.validate();
    ZeemanDoublet out;
    const Eigen::Vector3d v = g.g * field.direction();
    const double vnorm = v.norm();
    out.splitting_hz = c::bohr_magneton * field.b_tesla * vnorm / c::planck_h;
    if (field.b_tesla == 0.0 || vnorm < 1e-14) {
        // degenerate doublet: canonical basis
        out.splitting_hz = 0.0;
        out.lower = Eigen::Vector2cd(1.0, 0.0);
        out.upper = Eigen::Vector2cd(0.0, 1.0);
        return out;
    }
    pauli_eigenvectors(v / vnorm, out.lower, out.upper);
    return out;
}

double effective_g(const GTensor& g, const FieldConfig& field)
{
    g.validate();
    field.validate();
    return (g.g * field.direction()).norm();
}

TransitionTable transition_amplitudes(const ZeemanDoublet& ground, const ZeemanDoublet& excited)
{
    for (const auto* d : {&ground, &excited}) {
        if (std::abs(d->lower.norm() - 1.0) > 1e-8 || std::abs(d->upper.norm() - 1.0) > 1e-8 ||
            std::abs(d->lower.dot(d->upper)) > 1e-8)
            throw std::invalid_argument(
                "transition_amplitudes: eigenvector pairs must be orthonormal");
    }
    TransitionTable t;
    const Eigen::Vector2cd g_states[2] = {ground.lower, ground.upper};
    const Eigen::Vector2cd e_states[2] = {excited.lower, excited.upper};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            t.amplitude(i, j) = g_states[i].dot(e_states[j]);  // <g_i|e_j>

    const auto pos = line_positions(ground.splitting_hz, excited.splitting_hz);
    t.detuning_hz(0, 0) = pos[0];
    t.detuning_hz(1, 1) = pos[1];
    t.detuning_hz(0, 1) = pos[2];
    t.detuning_hz(1, 0) = pos[3];
    return t;
}

std::array<double, 4> line_positions(double fg_hz, double fe_hz)
{
    if (fg_hz < 0 || fe_hz < 0)
        throw std::invalid_argument("line_positions: splittings must be non-negative");
    const double diff = 0.5 * (fg_hz - fe_hz);
    const double sum = 0.5 * (fg_hz + fe_hz);
    return {diff, -diff, sum, -sum};
}

namespace {

double overlap_23(const GTensor& gg, const GTensor& ge, double alpha_deg)
{
    FieldConfig f{1.0, alpha_deg};
    const ZeemanDoublet dg = zeeman_split(gg, f);
    const ZeemanDoublet de = zeeman_split(ge, f);
    // |2> is the upper ground state, |3> the lower excited state
    return std::abs(dg.upper.dot(de.lower));
}

}  // namespace

OptimalAngleResult optimal_angle(const GTensor& g_ground, const GTensor& g_excited)
{
    g_ground.validate();
    g_excited.validate();

    constexpr double step = 0.5;
    const int n = static_cast<int>(180.0 / step);
    std::vector<double> value(n);
    for (int i = 0; i < n; ++i) value[i] = overlap_23(g_ground, g_excited, i * step);

    const double vmax = *std::max_element(value.begin(), value.end());
    const double vmin = *std::min_element(value.begin(), value.end());
    if (vmax - vmin < 1e-10)
        throw DegenerateOptimumError(
            "optimal_angle: overlap objective is flat (proportional tensors?)");

    OptimalAngleResult result;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < n; ++i) {
        const double prev = value[(i + n - 1) % n];
        const double next = value[(i + 1) % n];
        if (value[i] >= prev && value[i] > next) {
            // golden-section refinement on [alpha - step, alpha + step]
            double a = i * step - step, b = i * step + step;
            double x1 = b - golden * (b - a);
            double x2 = a + golden * (b - a);
            double f1 = overlap_23(g_ground, g_excited, x1);
            double f2 = overlap_23(g_ground, g_excited, x2);
            for (int iter = 0; iter < 60 && (b - a) > 1e-7; ++iter) {
                if (f1 < f2) {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + golden * (b - a);
                    f2 = overlap_23(g_ground, g_excited, x2);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - golden * (b - a);
                    f1 = overlap_23(g_ground, g_excited, x1);
                }
            }
            double alpha = 0.5 * (a + b);
            if (alpha < 0) alpha += 180.0;
            if (alpha >= 180.0) alpha -= 180.0;
            result.local_maxima.push_back({alpha, overlap_23(g_ground, g_excited, alpha)});
        }
    }
    if (result.local_maxima.empty())
        throw DegenerateOptimumError("optimal_angle: no local maxima found");
    result.best = *std::max_element(
        result.local_maxima.begin(), result.local_maxima.end(),
        [](const AngleOptimum& a, const AngleOptimum& b) { return a.overlap < b.overlap; });
    return result;
}

std::vector<SpectrumSample> absorption_spectrum(const TransitionTable& table, double sigma_o_hz,
                                                double alpha_peak, double f_min_hz,
                                                double f_max_hz, int n_points)
{
    if (!(sigma_o_hz > 0))
        throw std::invalid_argument("absorption_spectrum: sigma must be positive");
    if (n_points < 2 || !(f_max_hz > f_min_hz))
        throw std::invalid_argument("absorption_spectrum: invalid sampling range");
    std::vector<SpectrumSample> out(n_points);
    for (int k = 0; k < n_points; ++k) {
        const double f = f_min_hz + (f_max_hz - f_min_hz) * k / (n_points - 1);
        double a = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double u = (f - table.detuning_hz(i, j)) / sigma_o_hz;
                a += std::norm(table.amplitude(i, j)) * std::exp(-0.5 * u * u);
            }
        out[k] = {f, alpha_peak * a};
    }
    return out;
}

std::map<int, SiteTensors> parse_gtensor_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_gtensor_file: cannot open " + path);

    std::map<int, SiteTensors> sites;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("parse_gtensor_file: " + path + ":" +
                                 std::to_string(lineno) + ": " + what);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream header(line);
        std::string keyword;
        if (!(header >> keyword)) continue;  // blank line
        if (keyword != "site") fail("expected 'site <id> ground|excited'");
        int site_id = 0;
        std::string manifold;
        if (!(header >> site_id >> manifold) || (manifold != "ground" && manifold != "excited"))
            fail("expected 'site <id> ground|excited'");

        Eigen::Matrix3d m;
        for (int r = 0; r < 3; ++r) {
            if (!std::getline(in, line)) fail("unexpected end of file in matrix block");
            ++lineno;
            const auto h2 = line.find('#');
            if (h2 != std::string::npos) line.erase(h2);
            std::istringstream row(line);
            if (!(row >> m(r, 0) >> m(r, 1) >> m(r, 2))) fail("expected three values per row");
        }
        GTensor g{m};
        g.validate();
        auto& entry = sites[site_id];
        if (manifold == "ground") {
            entry.ground = g;
            entry.has_ground = true;
        } else {
            entry.excited = g;
            entry.has_excited = true;
        }
    }
    if (sites.empty()) fail("no tensor blocks found");
    return sites;
}

}  // namespace ramanup
