// spin_levels.hpp - Effective-spin Zeeman structure, optical transition
// amplitudes and absorption spectra from g-tensors.

#pragma once

#include <array>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ramanup {

struct DegenerateOptimumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Effective g-tensor of a Kramers doublet in the (D1, D2, b) frame.
// Must be symmetric and positive semidefinite.
struct GTensor {
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();

    void validate() const;
};

// Static field of magnitude b_tesla applied in the D1-D2 plane at angle
// alpha_deg measured from D1.
struct FieldConfig {
    double b_tesla = 0.0;
    double alpha_deg = 0.0;

    void validate() const;
    Eigen::Vector3d direction() const;
};

// One Zeeman-split doublet: splitting in Hz and the orthonormal spin
// eigenvectors (lower/upper energy).
struct ZeemanDoublet {
    double splitting_hz = 0.0;
    Eigen::Vector2cd lower = Eigen::Vector2cd::Zero();
    Eigen::Vector2cd upper = Eigen::Vector2cd::Zero();
};

// Ground + excited doublets of the working site.
struct LevelDiagram {
    ZeemanDoublet ground;
    ZeemanDoublet excited;
};

// The four optical transitions: rows index the ground states (|1>, |2>),
// columns the excited states (|3>, |4>). amplitude(i,j) is the spin-state
// overlap <g_i|e_j>; detuning_hz(i,j) is the line position relative to the
// zero-field optical frequency.
struct TransitionTable {
    Eigen::Matrix2cd amplitude = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2d detuning_hz = Eigen::Matrix2d::Zero();
};

// Diagonalizes H = muB B . g . S for effective spin 1/2.
ZeemanDoublet zeeman_split(const GTensor& g, const FieldConfig& field);

// Effective g-value along the field direction, |g n|.
double effective_g(const GTensor& g, const FieldConfig& field);

// Spin-state overlaps between ground and excited doublets. Eigenvector pairs
// must be orthonormal (checked to 1e-8).
TransitionTable transition_amplitudes(const ZeemanDoublet& ground, const ZeemanDoublet& excited);

// Line positions for ground/excited splittings fg, fe:
// spin-preserving at +/-(fg - fe)/2, spin-flip at +/-(fg + fe)/2.
// Order: {d13, d24, d14, d23}.
std::array<double, 4> line_positions(double fg_hz, double fe_hz);

struct AngleOptimum {
    double alpha_deg = 0.0;
    double overlap = 0.0;
};

struct OptimalAngleResult {
    AngleOptimum best;
    std::vector<AngleOptimum> local_maxima;  // all maxima over [0, 180)
};

// Field angle in the D1-D2 plane maximizing the |2> <-> |3> spin overlap.
// 0.5 degree grid seeding plus golden-section refinement. A flat objective
// (proportional tensors) raises DegenerateOptimumError.
OptimalAngleResult optimal_angle(const GTensor& g_ground, const GTensor& g_excited);

struct SpectrumSample {
    double detuning_hz;
    double alpha;
};

// Sum of Gaussians at the four line positions, heights proportional to the
// squared amplitudes, common standard deviation sigma_o_hz. alpha_peak scales
// a unit-amplitude line.
std::vector<SpectrumSample> absorption_spectrum(const TransitionTable& table, double sigma_o_hz,
                                                double alpha_peak, double f_min_hz,
                                                double f_max_hz, int n_points);

// Plain-text g-tensor dataset: "site <id> ground|excited" header lines, each
// followed by three rows of three values; '#' starts a comment.
struct SiteTensors {
    GTensor ground;
    GTensor excited;
    bool has_ground = false;
    bool has_excited = false;
};

std::map<int, SiteTensors> parse_gtensor_file(const std::string& path);

}  // namespace ramanup
