// fit.cpp - Bounded Levenberg-Marquardt estimation of the dephasing/loss parameters

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "ramanup/experiment.hpp"

namespace ramanup {

namespace {

// Internal coordinates: rates are fitted in log space (they are positive and
// vary over decades), the dB losses stay linear.
struct ParamMap {
    std::array<bool, 5> log_scale = {true, true, true, false, false};
    std::array<bool, 5> frozen{};
    std::array<double, 5> lower{}, upper{};

    std::array<double, 5> to_internal(const std::array<double, 5>& natural) const
    {
        std::array<double, 5> x{};
        for (int i = 0; i < 5; ++i) x[i] = log_scale[i] ? std::log(natural[i]) : natural[i];
        return x;
    }

    std::array<double, 5> to_natural(const std::array<double, 5>& internal) const
    {
        std::array<double, 5> p{};
        for (int i = 0; i < 5; ++i) p[i] = log_scale[i] ? std::exp(internal[i]) : internal[i];
        return p;
    }

    void clamp(std::array<double, 5>& internal) const
    {
        for (int i = 0; i < 5; ++i) internal[i] = std::clamp(internal[i], lower[i], upper[i]);
    }
};

double cost_of(const Eigen::VectorXd& r) { return 0.5 * r.squaredNorm(); }

}  // namespace

FitResult fit_parameters(const FitProblem& problem)
{
    if (problem.data.empty())
        throw std::invalid_argument("fit_parameters: no data points");

    const std::array<FitParameterSpec, 5> specs = {problem.gamma2d, problem.gamma3d,
                                                   problem.gamma21, problem.zeta_mu_db,
                                                   problem.zeta_xi_inv_db};
    ParamMap pmap;
    int n_free = 0;
    for (int i = 0; i < 5; ++i) {
        if (!(specs[i].upper >= specs[i].lower))
            throw std::invalid_argument("fit_parameters: invalid bounds");
        pmap.frozen[i] = specs[i].upper == specs[i].lower;
        if (pmap.log_scale[i] && (!(specs[i].init > 0) || !(specs[i].lower > 0)))
            throw std::invalid_argument("fit_parameters: rate parameters must be positive");
        pmap.lower[i] = pmap.log_scale[i] ? std::log(specs[i].lower) : specs[i].lower;
        pmap.upper[i] = pmap.log_scale[i] ? std::log(specs[i].upper) : specs[i].upper;
        if (!pmap.frozen[i]) ++n_free;
    }
    if (n_free > 0 && static_cast<int>(problem.data.size()) < n_free)
        throw std::invalid_argument("fit_parameters: fewer data points than free parameters");

    auto residuals = [&](const std::array<double, 5>& natural) {
        SystemModel model = problem.base;
        model.rates.gamma2d = natural[0];
        model.rates.gamma3d = natural[1];
        model.rates.gamma21 = natural[2];
        model.losses.zeta_mu_db = natural[3];
        model.losses.zeta_xi_inv_db = natural[4];
        Eigen::VectorXd r(problem.data.size());
        for (std::size_t k = 0; k < problem.data.size(); ++k) {
            const FitDataPoint& d = problem.data[k];
            const SignalResult s =
                (d.axis == SweepAxis::MicrowavePower)
                    ? signal_power(model, d.x_w, problem.p_xi_detected_w, 0.0, 0.0,
                                   problem.threads)
                    : signal_power(model, problem.p_mu_input_w, d.x_w, 0.0, 0.0,
                                   problem.threads);
            if (!(s.p_s_w > 0) || !(d.p_s_w > 0))
                throw std::invalid_argument(
                    "fit_parameters: log residuals need positive powers");
            r(k) = std::log(s.p_s_w) - std::log(d.p_s_w);
        }
        return r;
    };

    std::array<double, 5> init_natural{};
    for (int i = 0; i < 5; ++i) init_natural[i] = specs[i].init;
    std::array<double, 5> x = pmap.to_internal(init_natural);
    pmap.clamp(x);

    Eigen::VectorXd r = residuals(pmap.to_natural(x));
    double cost = cost_of(r);

    FitResult result;
    result.initial_cost = cost;
    result.cost_history.push_back(cost);

    if (n_free == 0) {
        // Degenerate fit: report the forward-model residual directly.
        result.gamma2d = specs[0].init;
        result.gamma3d = specs[1].init;
        result.gamma21 = specs[2].init;
        result.zeta_mu_db = specs[3].init;
        result.zeta_xi_inv_db = specs[4].init;
        result.final_cost = cost;
        result.converged = true;
        return result;
    }

    std::vector<int> free_idx;
    for (int i = 0; i < 5; ++i)
        if (!pmap.frozen[i]) free_idx.push_back(i);

    const int m = static_cast<int>(free_idx.size());
    const int n = static_cast<int>(problem.data.size());
    double lambda = 1e-3;
    bool converged = false;
    int iteration = 0;
    Eigen::MatrixXd jac(n, m);

    for (; iteration < problem.max_iterations && !converged; ++iteration) {
        // Forward-difference Jacobian in internal coordinates.
        for (int jcol = 0; jcol < m; ++jcol) {
            const int i = free_idx[jcol];
            std::array<double, 5> xh = x;
            const double h = 1e-4 * std::max(1.0, std::abs(x[i]));
            xh[i] = std::min(x[i] + h, pmap.upper[i]);
            double step = xh[i] - x[i];
            if (step == 0.0) {
                xh[i] = x[i] - h;
                step = -h;
            }
            const Eigen::VectorXd rh = residuals(pmap.to_natural(xh));
            jac.col(jcol) = (rh - r) / step;
        }

        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            for (int i = 0; i < m; ++i)
                damped(i, i) += lambda * std::max(jtj(i, i), 1e-12);
            const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);

            std::array<double, 5> x_try = x;
            for (int jcol = 0; jcol < m; ++jcol) x_try[free_idx[jcol]] += delta(jcol);
            pmap.clamp(x_try);

            const Eigen::VectorXd r_try = residuals(pmap.to_natural(x_try));
            const double cost_try = cost_of(r_try);
            if (cost_try < cost) {
                const double improvement = cost - cost_try;
                x = x_try;
                r = r_try;
                cost = cost_try;
                result.cost_history.push_back(cost);
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (improvement < 1e-12 * std::max(cost, 1e-300) || delta.norm() < 1e-10)
                    converged = true;
            } else {
                lambda *= 4.0;
            }
        }
        if (!accepted) {
            converged = true;  // no descent direction left at any damping
        }
    }

    // Covariance proxy from the final Jacobian.
    {
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const int dof = std::max(n - m, 1);
        const double s2 = 2.0 * cost / dof;
        const Eigen::MatrixXd cov = s2 * jtj.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
        for (int jcol = 0; jcol < m; ++jcol) {
            const double var = std::max(cov(jcol, jcol), 0.0);
            result.sensitivity[free_idx[jcol]] = std::sqrt(var);
        }
    }

    auto p = pmap.to_natural(x);
    for (int i = 0; i < 5; ++i)
        if (pmap.frozen[i]) p[i] = specs[i].init;
    result.gamma2d = p[0];
    result.gamma3d = p[1];
    result.gamma21 = p[2];
    result.zeta_mu_db = p[3];
    result.zeta_xi_inv_db = p[4];
    result.final_cost = cost;
    result.iterations = iteration;
    result.converged = converged;
    return result;
}

}  // namespace ramanup
