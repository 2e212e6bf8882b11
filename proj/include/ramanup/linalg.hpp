// linalg.hpp - Matrix aliases and vectorization helpers shared by the solver modules

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ramanup {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Matrix9c = Eigen::Matrix<Complex, 9, 9>;
using Vector9c = Eigen::Matrix<Complex, 9, 1>;

// Column-major vectorization: vec(rho) stacks the columns of rho.
// All superoperator builders share this contract.
inline Vector9c vectorize(const Matrix3c& m)
{
    Vector9c v;
    for (int col = 0; col < 3; ++col)
        for (int row = 0; row < 3; ++row)
            v(3 * col + row) = m(row, col);
    return v;
}

inline Matrix3c unvectorize(const Vector9c& v)
{
    Matrix3c m;
    for (int col = 0; col < 3; ++col)
        for (int row = 0; row < 3; ++row)
            m(row, col) = v(3 * col + row);
    return m;
}

inline bool is_hermitian(const Matrix3c& m, double tol = 1e-12)
{
    const double scale = m.norm();
    return (m - m.adjoint()).norm() <= tol * (scale > 0.0 ? scale : 1.0);
}

}  // namespace ramanup
