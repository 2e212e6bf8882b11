// ensemble.cpp - Gauss-Legendre machinery and the feature-aware ensemble average
//
// The integrand rho31(delta2, delta3) carries three narrow features inside
// windows that are orders of magnitude wider: the spin resonance at
// delta2 ~ 0, the two-photon resonance at delta3 ~ 0 and the one-photon
// ridge along delta3 ~ delta2. Each axis is therefore assembled from core
// panels on the features plus geometric shells that follow the power-law
// wings out to the window edges.

#include "ramanup/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "ramanup/constants.hpp"
#include "ramanup/parallel.hpp"

namespace ramanup {

namespace {

constexpr double kPi = constants::pi;
constexpr double kShellRatio = 5.0;

double gaussian_density(double x, double center, double sigma)
{
    const double u = (x - center) / sigma;
    return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * kPi) * sigma);
}

struct Axis {
    std::vector<double> nodes;
    std::vector<double> weights;  // plain measure (GL weight x jacobian)
};

void append_panel(Axis& axis, double a, double b, int n)
{
    if (!(b > a) || n < 1) return;
    static thread_local std::vector<double> x, w;
    gauss_legendre(n, x, w);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (int i = 0; i < n; ++i) {
        axis.nodes.push_back(mid + half * x[i]);
        axis.weights.push_back(half * w[i]);
    }
}

// Geometric shells from edge `from` towards `to` (outward from a feature core
// of width `scale`), n_out nodes per shell. Shell widths grow by kShellRatio
// per step but never beyond max_width, so slowly varying envelopes (the
// Gaussian) stay resolved far from the features.
void append_shells(Axis& axis, double from, double to, double scale, int n_out,
                   double max_width)
{
    const double dir = (to > from) ? 1.0 : -1.0;
    double e = from;
    double width = std::max(scale, std::abs(to - from) * 1e-12);
    while (dir * (to - e) > 0.0) {
        double step = std::min((kShellRatio - 1.0) * width, max_width);
        double next = e + dir * step;
        if (dir * (to - next) < 0.3 * step) next = to;
        append_panel(axis, std::min(e, next), std::max(e, next), n_out);
        width = std::abs(next - e);
        e = next;
    }
}

struct Feature {
    double center;
    double width;  // physical half-width of the resonance
    int n_core;
};

// Panel set over [lo, hi]: tight core panels (1.5 half-widths) on the features
// plus geometric shells across the gaps and out to the window edges. Where
// cores overlap, the union is segmented at the core edges and every segment
// receives nodes in proportion to the sharpest feature covering it. The
// shells adjacent to a core see its pole at a comfortable distance, so a
// handful of Gauss-Legendre nodes per shell resolves the power-law wings.
// Node placement is fully deterministic.
Axis build_axis(std::vector<Feature> features, double lo, double hi, int n_out,
                double max_shell_width)
{
    Axis axis;
    struct Core {
        double a, b;
    };
    std::vector<Core> cores;  // clipped, merged extents
    std::sort(features.begin(), features.end(),
              [](const Feature& a, const Feature& b) { return a.center < b.center; });
    for (const auto& f : features) {
        double a = std::max(f.center - 1.5 * f.width, lo);
        double b = std::min(f.center + 1.5 * f.width, hi);
        if (!(b > a)) continue;
        if (!cores.empty() && a <= cores.back().b)
            cores.back().b = std::max(cores.back().b, b);
        else
            cores.push_back({a, b});
    }
    if (cores.empty()) {
        const int n = features.empty() ? 32 : 2 * features.front().n_core;
        double e = lo;
        while (e < hi) {
            const double next = std::min(e + max_shell_width, hi);
            append_panel(axis, e, next, n);
            e = next;
        }
        return axis;
    }

    // Node density (nodes per unit length) contributed by each feature core.
    const auto density_at = [&](double x1, double x2) {
        double d = 0.0;
        for (const auto& f : features) {
            const double a = f.center - 1.5 * f.width;
            const double b = f.center + 1.5 * f.width;
            if (x1 < b && x2 > a) d = std::max(d, f.n_core / (3.0 * f.width));
        }
        return d;
    };
    const auto paneled_core = [&](double a, double b) {
        // segment at interior feature-core edges
        std::vector<double> cuts = {a, b};
        for (const auto& f : features) {
            for (double x : {f.center - 1.5 * f.width, f.center + 1.5 * f.width})
                if (x > a && x < b) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double x1 = cuts[k], x2 = cuts[k + 1];
            const int n = std::clamp(
                static_cast<int>(std::ceil((x2 - x1) * density_at(x1, x2))) + 2, 4, 96);
            append_panel(axis, x1, x2, n);
        }
    };

    append_shells(axis, cores.front().a, lo, cores.front().b - cores.front().a, n_out,
                  max_shell_width);
    for (std::size_t k = 0; k < cores.size(); ++k) {
        paneled_core(cores[k].a, cores[k].b);
        if (k + 1 < cores.size()) {
            const double mid = 0.5 * (cores[k].b + cores[k + 1].a);
            append_shells(axis, cores[k].b, mid, cores[k].b - cores[k].a, n_out,
                          max_shell_width);
            append_shells(axis, cores[k + 1].a, mid, cores[k + 1].b - cores[k + 1].a, n_out,
                          max_shell_width);
        }
    }
    append_shells(axis, cores.back().b, hi, cores.back().b - cores.back().a, n_out,
                  max_shell_width);
    return axis;
}

// Physical half-widths of the atomic response features, from the
// collapse-operator algebra plus saturation broadening.
struct ResponseScales {
    double spin;       // bare spin response width in delta2
    double two_ph;     // bare two-photon response width in delta3
    double one_ph;     // bare one-photon ridge width (delta3 ~ delta2)
    double broadened;  // saturation-broadened envelope scale
};

ResponseScales response_scales(const AtomDrive& d, const RelaxationRates& r)
{
    const double g2 = 0.5 * (r.gamma2d + r.gamma21 * (2.0 * r.n_bath + 1.0));
    const double g3 =
        0.5 * (r.gamma3d + r.gamma31 + r.gamma32 + r.gamma21 * r.n_bath);
    const double g23 = 0.5 * (r.gamma2d + r.gamma3d + r.gamma31 + r.gamma32 +
                              r.gamma21 * (r.n_bath + 1.0));
    // Saturation widens the response beyond the bare Rabi frequency once the
    // population relaxation is slow compared with the coherence decay.
    const double pump = (g23 > 0) ? d.omega_xi * d.omega_xi / g23 : 0.0;
    const double gamma_pop =
        r.gamma21 * (2.0 * r.n_bath + 1.0) + r.gamma31 + r.gamma32 + pump;
    const double gmax = std::max({g2, g3, g23});
    const double sat = (gamma_pop > 0) ? std::sqrt(1.0 + gmax / gamma_pop) : 1.0;
    const double broaden = (d.omega_mu + d.omega_xi) * sat;
    ResponseScales s;
    s.spin = g2;
    s.two_ph = g3;
    s.one_ph = g23;
    s.broadened = std::max({g2, g3, g23}) + broaden;
    return s;
}

void check_grid(const InhomogeneousDistribution& dist, const QuadratureGrid& grid)
{
    if (grid.n_mu < 3 || grid.n_o < 3 || grid.nodes.empty())
        throw std::invalid_argument("ensemble_coherence: invalid grid");
    if (grid.span < 3.0)
        throw std::invalid_argument("ensemble_coherence: grid must span at least 3 sigma");
    if (grid.dist.sigma_mu != dist.sigma_mu || grid.dist.sigma_o != dist.sigma_o ||
        grid.dist.center_mu != dist.center_mu || grid.dist.center_o != dist.center_o)
        throw std::invalid_argument("ensemble_coherence: grid/distribution mismatch");
}

}  // namespace

void InhomogeneousDistribution::validate() const
{
    if (!(sigma_mu > 0) || !(sigma_o > 0))
        throw std::invalid_argument("InhomogeneousDistribution: widths must be positive");
    if (!std::isfinite(center_mu) || !std::isfinite(center_o))
        throw std::invalid_argument("InhomogeneousDistribution: centers must be finite");
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    // Newton iteration on Legendre polynomials, symmetric abscissae.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double QuadratureGrid::total_weight() const
{
    std::vector<double> w(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) w[i] = nodes[i].weight;
    return tree_reduce(std::move(w));
}

QuadratureGrid quadrature_grid(const InhomogeneousDistribution& dist, int n_mu, int n_o,
                               double span)
{
    dist.validate();
    if (n_mu < 3 || n_o < 3)
        throw std::invalid_argument("quadrature_grid: node counts must be at least 3");
    if (!(span > 0)) throw std::invalid_argument("quadrature_grid: span must be positive");

    std::vector<double> x_mu, w_mu, x_o, w_o;
    gauss_legendre(n_mu, x_mu, w_mu);
    gauss_legendre(n_o, x_o, w_o);

    QuadratureGrid grid;
    grid.n_mu = n_mu;
    grid.n_o = n_o;
    grid.span = span;
    grid.dist = dist;
    grid.nodes.reserve(static_cast<std::size_t>(n_mu) * n_o);

    const double half_mu = span * dist.sigma_mu;
    const double half_o = span * dist.sigma_o;
    for (int i = 0; i < n_mu; ++i) {
        const double d2 = dist.center_mu + half_mu * x_mu[i];
        const double gm = gaussian_density(d2, dist.center_mu, dist.sigma_mu);
        for (int j = 0; j < n_o; ++j) {
            const double d3 = dist.center_o + half_o * x_o[j];
            const double go = gaussian_density(d3, dist.center_o, dist.sigma_o);
            const double w = w_mu[i] * half_mu * gm * w_o[j] * half_o * go;
            grid.nodes.push_back({d2, d3, w});
        }
    }
    return grid;
}

EnsembleAverages ensemble_averages(const AtomDrive& drive_template,
                                   const RelaxationRates& rates,
                                   const InhomogeneousDistribution& dist,
                                   const QuadratureGrid& grid, unsigned threads)
{
    dist.validate();
    check_grid(dist, grid);

    const ResponseScales scales = response_scales(drive_template, rates);
    const int n_core2 = std::max(8, grid.n_mu / 2);
    const int n_core3 = std::max(8, grid.n_o / 2);
    const int n_ridge = std::max(8, grid.n_o / 3);
    const int n_out2 = std::max(5, grid.n_mu / 4);
    const int n_out3 = std::max(5, grid.n_o / 4);

    // delta2: spin-resonance core inside the Gaussian support; shell widths
    // capped so the Gaussian envelope stays resolved.
    const double lo2 = dist.center_mu - grid.span * dist.sigma_mu;
    const double hi2 = dist.center_mu + grid.span * dist.sigma_mu;
    const Axis ax2 = build_axis({{0.0, scales.spin, n_core2}}, lo2, hi2, n_out2,
                                1.5 * dist.sigma_mu);

    // delta3 window: wide enough for the 1/delta3^2 wings of the response,
    // bounded by the optical inhomogeneous width.
    const double w3 = 3.0 * dist.sigma_o;
    const double pop_window = 6.0 * scales.broadened;

    struct Slot {
        std::complex<double> coh{};
        double pop = 0.0;
        double pop_weight = 0.0;
        Slot operator+(const Slot& o) const
        {
            return {coh + o.coh, pop + o.pop, pop_weight + o.pop_weight};
        }
    };

    const std::size_t n2 = ax2.nodes.size();
    std::vector<Slot> contrib(n2);
    parallel_for(n2, threads, [&](std::size_t i) {
        const double d2 = ax2.nodes[i];
        const double gm = gaussian_density(d2, dist.center_mu, dist.sigma_mu);
        AtomDrive drive = drive_template;
        drive.delta2 = d2;
        // two-photon core at 0 plus the one-photon ridge at delta3 = delta2
        const Axis ax3 = build_axis(
            {{0.0, scales.two_ph, n_core3}, {d2, scales.one_ph, n_ridge}}, -w3, w3,
            n_out3, w3);
        Slot slot;
        for (std::size_t j = 0; j < ax3.nodes.size(); ++j) {
            drive.delta3 = ax3.nodes[j];
            const Liouvillian gen = build_liouvillian(drive, rates);
            const Matrix3c rho = steady_state(gen);
            const double w = ax2.weights[i] * gm * ax3.weights[j];
            slot.coh += w * rho31(rho);
            // population average restricted to the addressed optical classes
            if (std::abs(drive.delta3) <= pop_window) {
                slot.pop += w * (rho(0, 0).real() - rho(1, 1).real());
                slot.pop_weight += w;
            }
        }
        contrib[i] = slot;
    });
    const Slot sum = tree_reduce(std::move(contrib));

    // sqrt(2 pi) sigma_o g_o(0): the optical Gaussian evaluated at the
    // coherence support, normalized to 1 when the laser sits at line center.
    const double u = dist.center_o / dist.sigma_o;
    const double envelope = std::exp(-0.5 * u * u);

    EnsembleAverages out;
    out.coherence = envelope * sum.coh;
    out.pop_difference = (sum.pop_weight > 0) ? sum.pop / sum.pop_weight : 0.0;
    return out;
}

std::complex<double> ensemble_coherence(const AtomDrive& drive_template,
                                        const RelaxationRates& rates,
                                        const InhomogeneousDistribution& dist,
                                        const QuadratureGrid& grid, unsigned threads)
{
    return ensemble_averages(drive_template, rates, dist, grid, threads).coherence;
}

double ensemble_population_difference(const AtomDrive& drive_template,
                                      const RelaxationRates& rates,
                                      const InhomogeneousDistribution& dist,
                                      const QuadratureGrid& grid, unsigned threads)
{
    return ensemble_averages(drive_template, rates, dist, grid, threads).pop_difference;
}

double polarization(double z_m, const MediumParams& medium, std::complex<double> avg_coherence)
{
    medium.validate();
    if (z_m < 0.0 || z_m > medium.length)
        throw std::invalid_argument("polarization: z outside the sample");
    const std::complex<double> phase(
        std::cos(medium.refractive_index * medium.k32 * z_m),
        std::sin(medium.refractive_index * medium.k32 * z_m));
    const std::complex<double> p =
        medium.atom_density * medium.d13 * avg_coherence * phase;
    return 2.0 * p.real();
}

}  // namespace ramanup
