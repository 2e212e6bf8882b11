// ensemble.hpp - Inhomogeneous averaging of the single-atom coherence and the
// macroscopic polarization it sources.

#pragma once

#include <complex>
#include <vector>

#include "ramanup/lindblad.hpp"
#include "ramanup/propagation.hpp"

namespace ramanup {

// Two-dimensional Gaussian distribution of (delta2, delta3) detunings.
// Widths are standard deviations in rad/s; centers shift with the applied
// field and the laser detuning.
struct InhomogeneousDistribution {
    double sigma_mu = 0.0;   // microwave (spin) inhomogeneity
    double sigma_o = 0.0;    // optical inhomogeneity
    double center_mu = 0.0;  // spin line center relative to the microwave drive
    double center_o = 0.0;   // optical line center relative to two-photon resonance

    void validate() const;
};

// Tensor-product Gauss-Legendre grid over [center - span sigma, center + span sigma]
// per axis; weights carry the normalized Gaussian density, so their sum equals
// the Gaussian mass enclosed by the span.
struct QuadratureGrid {
    struct Node {
        double delta2;
        double delta3;
        double weight;
    };
    std::vector<Node> nodes;
    int n_mu = 0;
    int n_o = 0;
    double span = 0.0;
    InhomogeneousDistribution dist;

    double total_weight() const;
};

QuadratureGrid quadrature_grid(const InhomogeneousDistribution& dist, int n_mu, int n_o,
                               double span);

// Gauss-Legendre nodes/weights on [-1, 1]; exposed for the quadrature tests.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Ensemble average I of the steady-state coherence rho31 over the detuning
// distribution. The microwave axis follows the Gaussian; the optical Gaussian
// is replaced by its value at the coherence support (flat-line reading), so
//   I = sqrt(2 pi) sigma_o g_o(0) * integral( g_mu(d2) rho31(d2, d3) dd2 dd3 )
// with the d3 integral taken over a window sized to the power-broadened
// coherence. The grid argument supplies node counts and span; the integration
// panels are placed around the drive resonance so the narrow atomic response
// stays resolved at the grid's node budget.
// The drive template carries the Rabi frequencies; its detunings are replaced
// by the node offsets. Evaluation order is fixed, and the reduction is a
// deterministic tree fold, so results are bitwise reproducible at any thread
// count.
std::complex<double> ensemble_coherence(const AtomDrive& drive_template,
                                        const RelaxationRates& rates,
                                        const InhomogeneousDistribution& dist,
                                        const QuadratureGrid& grid, unsigned threads = 1);

// Ensemble-averaged ground-doublet population difference rho11 - rho22 over
// the microwave Gaussian, evaluated at the two-photon resonant optical class.
double ensemble_population_difference(const AtomDrive& drive_template,
                                      const RelaxationRates& rates,
                                      const InhomogeneousDistribution& dist,
                                      const QuadratureGrid& grid, unsigned threads = 1);

// One grid pass producing both averages.
struct EnsembleAverages {
    std::complex<double> coherence;  // I
    double pop_difference = 0.0;     // rho11 - rho22 of the addressed classes
};

EnsembleAverages ensemble_averages(const AtomDrive& drive_template,
                                   const RelaxationRates& rates,
                                   const InhomogeneousDistribution& dist,
                                   const QuadratureGrid& grid, unsigned threads = 1);

// Macroscopic polarization density at position z:
//   P(z) = N d13 avg exp(i n k32 z) + c.c.   (real, C/m^2)
double polarization(double z_m, const MediumParams& medium, std::complex<double> avg_coherence);

}  // namespace ramanup
