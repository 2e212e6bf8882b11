// lindblad.cpp - Generator assembly, steady-state solve and adaptive time evolution

#include "ramanup/lindblad.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ramanup/constants.hpp"

namespace ramanup {

namespace {

const Complex kI(0.0, 1.0);

Matrix3c ketbra(int row, int col)
{
    Matrix3c m = Matrix3c::Zero();
    m(row, col) = 1.0;
    return m;
}

Matrix9c kron3(const Matrix3c& a, const Matrix3c& b)
{
    Matrix9c out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out.block<3, 3>(3 * i, 3 * j) = a(i, j) * b;
    return out;
}

// vec(c rho c†) = (conj(c) ⊗ c) vec(rho);  -1/2 {c†c, rho} maps to
// -1/2 (I ⊗ c†c + (c†c)^T ⊗ I) under column-major vectorization.
Matrix9c dissipator(const Matrix3c& c)
{
    const Matrix3c cdc = c.adjoint() * c;
    const Matrix3c id = Matrix3c::Identity();
    return kron3(c.conjugate(), c) - 0.5 * kron3(id, cdc) - 0.5 * kron3(cdc.transpose(), id);
}

}  // namespace

double thermal_occupation(double frequency_hz, double temperature_k)
{
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("thermal_occupation: frequency must be positive");
    if (temperature_k < 0.0)
        throw std::invalid_argument("thermal_occupation: temperature must be non-negative");
    if (temperature_k == 0.0) return 0.0;
    const double x = constants::planck_h * frequency_hz /
                     (constants::k_boltzmann * temperature_k);
    // expm1 keeps precision in the high-temperature limit x -> 0
    return 1.0 / std::expm1(x);
}

Matrix3c build_hamiltonian(const AtomDrive& drive)
{
    Matrix3c h = Matrix3c::Zero();
    h(1, 1) = drive.delta2;
    h(2, 2) = drive.delta3;
    h(0, 1) = drive.omega_mu;
    h(1, 0) = drive.omega_mu;
    h(1, 2) = drive.omega_xi;
    h(2, 1) = drive.omega_xi;
    return h;
}

Liouvillian build_liouvillian(const Matrix3c& hamiltonian, const RelaxationRates& rates)
{
    if (!is_hermitian(hamiltonian, 1e-12))
        throw std::invalid_argument("build_liouvillian: Hamiltonian must be Hermitian");
    if (rates.gamma31 < 0 || rates.gamma32 < 0 || rates.gamma21 < 0 ||
        rates.gamma2d < 0 || rates.gamma3d < 0 || rates.n_bath < 0)
        throw std::invalid_argument("build_liouvillian: rates and n_bath must be non-negative");

    const Matrix3c id = Matrix3c::Identity();
    // -i [rho, H] = -i (rho H - H rho) -> -i (H^T ⊗ I - I ⊗ H)
    Matrix9c gen = -kI * (kron3(hamiltonian.transpose(), id) - kron3(id, hamiltonian));

    const double nb = rates.n_bath;
    const struct {
        double rate;
        int row, col;
    } collapses[] = {
        {rates.gamma31, 0, 2},             // |1><3|
        {rates.gamma32, 1, 2},             // |2><3|
        {rates.gamma21 * (nb + 1.0), 0, 1},  // |1><2|
        {rates.gamma21 * nb, 1, 0},        // |2><1|
        {rates.gamma2d, 1, 1},             // |2><2|
        {rates.gamma3d, 2, 2},             // |3><3|
    };
    for (const auto& c : collapses) {
        if (c.rate == 0.0) continue;
        gen += dissipator(std::sqrt(c.rate) * ketbra(c.row, c.col));
    }
    return Liouvillian{gen};
}

namespace {

using Vector9d = Eigen::Matrix<double, 9, 1>;
using Matrix9d = Eigen::Matrix<double, 9, 9>;

// The generator preserves Hermiticity, so the flow restricted to density
// matrices has an exact real form acting on (populations, Re/Im coherences).
// On the full matrix space the complex generator decomposes into two copies
// of this real form, so their singular spectra coincide; the real form is
// cheaper to factor and to integrate.
Vector9d real_coords(const Matrix3c& m)
{
    Vector9d r;
    r << m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(0, 1).real(), m(0, 1).imag(),
        m(0, 2).real(), m(0, 2).imag(), m(1, 2).real(), m(1, 2).imag();
    return r;
}

Matrix3c from_real_coords(const Vector9d& r)
{
    Matrix3c m;
    m(0, 0) = r(0);
    m(1, 1) = r(1);
    m(2, 2) = r(2);
    m(0, 1) = Complex(r(3), r(4));
    m(1, 0) = std::conj(m(0, 1));
    m(0, 2) = Complex(r(5), r(6));
    m(2, 0) = std::conj(m(0, 2));
    m(1, 2) = Complex(r(7), r(8));
    m(2, 1) = std::conj(m(1, 2));
    return m;
}

Matrix9d real_generator(const Liouvillian& gen)
{
    Matrix9d out;
    for (int b = 0; b < 9; ++b) {
        Vector9d e = Vector9d::Zero();
        e(b) = 1.0;
        out.col(b) = real_coords(gen.apply(from_real_coords(e)));
    }
    return out;
}

}  // namespace

Matrix3c steady_state(const Liouvillian& gen)
{
    // Null-space dimension check via the singular spectrum of the generator's
    // real form (identical to the complex spectrum; see real_generator). The
    // threshold is relative to the largest singular value, which is dominated
    // by the detunings; 1e-12 separates machine-zero kernel directions from
    // slow but physical relaxation modes even at the far edge of the
    // inhomogeneous windows (|delta| ~ 1e10 rad/s against rates ~ 1e2 1/s).
    const Matrix9d real_gen = real_generator(gen);
    Eigen::JacobiSVD<Matrix9d> svd(real_gen);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    if (largest == 0.0)
        throw NonUniqueSteadyStateError("steady_state: generator is identically zero");
    if (sv(7) <= 1e-12 * largest)
        throw NonUniqueSteadyStateError(
            "steady_state: generator null space is not one-dimensional");

    // Replace the first row with the trace functional; the trace row is a left
    // null vector of any Lindblad generator, so the replacement restores full
    // rank. In the real coordinates the trace reads r0 + r1 + r2.
    Matrix9d system = real_gen;
    Vector9d rhs = Vector9d::Zero();
    for (int k = 0; k < 9; ++k) system(0, k) = 0.0;
    system(0, 0) = 1.0;
    system(0, 1) = 1.0;
    system(0, 2) = 1.0;
    rhs(0) = 1.0;

    const Vector9d solution = system.partialPivLu().solve(rhs);
    const double residual = (real_gen * solution).norm();
    if (!(residual <= 1e-8 * largest * solution.norm()))
        throw NonUniqueSteadyStateError(
            "steady_state: residual check failed, generator is near-degenerate");
    Matrix3c rho = from_real_coords(solution);
    rho /= rho.trace().real();
    return rho;
}

Matrix3c evolve(const Matrix3c& rho0, const Liouvillian& gen, double t,
                const EvolveOptions& opts)
{
    if (t < 0.0) throw std::invalid_argument("evolve: time must be non-negative");
    if (t == 0.0) return rho0;

    // Dormand-Prince 5(4) coefficients.
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                            b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                            e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    const Matrix9d L = real_generator(gen);
    Vector9d y = real_coords(0.5 * (rho0 + rho0.adjoint()));

    const double gen_norm = L.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    if (gen_norm == 0.0) return rho0;

    // Gap estimate for the stationarity certificate.
    double sigma_gap = 0.0;
    if (opts.stationary_tol > 0.0) {
        Eigen::JacobiSVD<Matrix9d> svd(L);
        sigma_gap = svd.singularValues()(7);
    }

    double h = std::min(t, 0.1 / gen_norm);
    double time = 0.0;
    std::size_t steps = 0;
    int stationary_streak = 0;

    Vector9d k1 = L * y;
    Vector9d k2, k3, k4, k5, k6, k7, ynew, stage;
    while (time < t) {
        if (++steps > opts.max_steps)
            throw IntegrationFailure("evolve: step budget exhausted");
        h = std::min(h, t - time);
        if (h <= 16.0 * std::numeric_limits<double>::epsilon() * std::max(time, 1.0 / gen_norm))
            throw IntegrationFailure("evolve: step size underflow");

        stage.noalias() = y + (h * a21) * k1;
        k2.noalias() = L * stage;
        stage.noalias() = y + (h * a31) * k1 + (h * a32) * k2;
        k3.noalias() = L * stage;
        stage.noalias() = y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3;
        k4.noalias() = L * stage;
        stage.noalias() = y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4;
        k5.noalias() = L * stage;
        stage.noalias() =
            y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 + (h * a64) * k4 + (h * a65) * k5;
        k6.noalias() = L * stage;
        ynew.noalias() =
            y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 + (h * b6) * k6;
        k7.noalias() = L * ynew;  // FSAL stage

        stage.noalias() = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                          (h * e6) * k6 + (h * e7) * k7;
        const double scale =
            opts.abs_tol + opts.rel_tol * std::max(y.cwiseAbs().maxCoeff(),
                                                   ynew.cwiseAbs().maxCoeff());
        const double err = stage.cwiseAbs().maxCoeff() / scale;

        if (err <= 1.0) {
            time += h;
            y.swap(ynew);
            k1.swap(k7);
            if (sigma_gap > 0.0 &&
                k1.cwiseAbs().maxCoeff() <=
                    opts.stationary_tol * sigma_gap * std::max(y.cwiseAbs().maxCoeff(), 0.1)) {
                if (++stationary_streak >= 2) break;
            } else {
                stationary_streak = 0;
            }
        }
        const double factor =
            (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }

    return from_real_coords(y);
}

}  // namespace ramanup
