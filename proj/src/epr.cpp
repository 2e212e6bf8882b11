// epr.cpp

#include "ramanup/epr.hpp"

#include <cmath>
#include <complex>

#include "ramanup/constants.hpp"
#include "ramanup/ensemble.hpp"  // gauss_legendre

namespace ramanup {

namespace {

constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

// Re int g(delta; center, sigma) / (delta + i half_width) ddelta
double dispersive_integral(double center, double sigma, double half_width)
{
    static thread_local std::vector<double> x, w;
    constexpr int n = 256;
    if (x.size() != n) gauss_legendre(n, x, w);
    const double span = 10.0 * sigma + 10.0 * half_width;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = center + span * x[i];
        const double u = (d - center) / sigma;
        const double g = std::exp(-0.5 * u * u) / (std::sqrt(2.0 * constants::pi) * sigma);
        const std::complex<double> kernel = 1.0 / std::complex<double>(d, half_width);
        sum += w[i] * span * g * kernel.real();
    }
    return sum;
}

}  // namespace

void CavityParams::validate() const
{
    if (!(f0_hz > 0) || !(kappa_hz > 0) || !(quality_factor > 0))
        throw std::invalid_argument("CavityParams: all fields must be positive");
    const double q_from_kappa = f0_hz / kappa_hz;
    if (std::abs(quality_factor - q_from_kappa) > 0.1 * quality_factor)
        throw std::invalid_argument("CavityParams: Q and f0/kappa disagree by more than 10%");
}

void SpinEnsembleCoupling::validate() const
{
    if (!(g_n_hz > 0) || !(gamma_mu_hz > 0) || !(df_db_hz_per_t > 0))
        throw std::invalid_argument("SpinEnsembleCoupling: all fields must be positive");
}

std::vector<EprTracePoint> dispersive_shift_spectrum(const CavityParams& cavity,
                                                     const SpinEnsembleCoupling& coupling,
                                                     const std::vector<double>& b_grid_tesla)
{
    cavity.validate();
    coupling.validate();
    for (std::size_t i = 1; i < b_grid_tesla.size(); ++i)
        if (!(b_grid_tesla[i] > b_grid_tesla[i - 1]))
            throw std::invalid_argument("dispersive_shift_spectrum: B grid must be monotone");

    const double sigma = coupling.gamma_mu_hz / kFwhmPerSigma;
    const double half_width = 0.5 * coupling.gamma_mu_hz;
    std::vector<EprTracePoint> trace;
    trace.reserve(b_grid_tesla.size());
    for (double b : b_grid_tesla) {
        const double center = coupling.df_db_hz_per_t * b - cavity.f0_hz;
        const double shift = coupling.g_n_hz * coupling.g_n_hz *
                             dispersive_integral(center, sigma, half_width);
        trace.push_back({b, shift});
    }
    return trace;
}

double calibrate_gn(const CavityParams& cavity, const SpinEnsembleCoupling& coupling,
                    double target_peak_shift_hz, const std::vector<double>& b_grid_tesla)
{
    if (!(target_peak_shift_hz > 0))
        throw std::invalid_argument("calibrate_gn: target shift must be positive");
    SpinEnsembleCoupling unit = coupling;
    unit.g_n_hz = 1.0;
    const auto trace = dispersive_shift_spectrum(cavity, unit, b_grid_tesla);
    double peak = 0.0;
    for (const auto& p : trace) peak = std::max(peak, std::abs(p.shift_hz));
    if (peak == 0.0) throw std::invalid_argument("calibrate_gn: trace is identically zero");
    return std::sqrt(target_peak_shift_hz / peak);
}

double cooperativity(double g_n_hz, double kappa_hz, double gamma_mu_hz)
{
    if (g_n_hz < 0 || !(kappa_hz > 0) || !(gamma_mu_hz > 0))
        throw std::invalid_argument("cooperativity: invalid arguments");
    return 4.0 * g_n_hz * g_n_hz / (kappa_hz * gamma_mu_hz);
}

std::vector<double> lockin_lineshape(const std::vector<double>& freq_hz,
                                     const std::vector<double>& transmission,
                                     double fm_depth_hz)
{
    if (freq_hz.size() != transmission.size() || freq_hz.size() < 3)
        throw std::invalid_argument("lockin_lineshape: trace too short or mismatched");
    const double span = freq_hz.back() - freq_hz.front();
    if (!(span > 0)) throw std::invalid_argument("lockin_lineshape: frequency grid must ascend");
    if (!(fm_depth_hz > 0) || fm_depth_hz >= span)
        throw std::invalid_argument("lockin_lineshape: fm depth must be positive and small "
                                    "compared with the trace span");

    const std::size_t n = freq_hz.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double slope;
        if (i == 0)
            slope = (transmission[1] - transmission[0]) / (freq_hz[1] - freq_hz[0]);
        else if (i == n - 1)
            slope = (transmission[n - 1] - transmission[n - 2]) /
                    (freq_hz[n - 1] - freq_hz[n - 2]);
        else
            slope = (transmission[i + 1] - transmission[i - 1]) /
                    (freq_hz[i + 1] - freq_hz[i - 1]);
        out[i] = fm_depth_hz * slope;
    }
    return out;
}

}  // namespace ramanup
