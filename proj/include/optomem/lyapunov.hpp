#pragma once

#include <Eigen/Dense>

#include "optomem/errors.hpp"

namespace optomem {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Steady-state covariance from A sigma + sigma A^T = -D.
template <typename Scalar>
struct LyapunovSolution {
  DenseMatrix<Scalar> sigma;
  Scalar residual = Scalar(0);        // ||A s + s A^T + D||_F / ||D||_F
  Scalar condition_estimate = Scalar(0);  // ||A||_F / min_{i,j} |l_i + conj(l_j)|
  bool ill_conditioned = false;       // condition_estimate > 1e14
};

/// Bartels-Stewart: real Schur reduction of A, block back-substitution in the
/// quasi-triangular system, one step of iterative refinement.
/// Pre: A stable (all eigenvalues in the open left half-plane), D symmetric.
template <typename Scalar>
LyapunovSolution<Scalar> solve_lyapunov(const DenseMatrix<Scalar>& a,
                                        const DenseMatrix<Scalar>& d);

extern template LyapunovSolution<double> solve_lyapunov<double>(
    const DenseMatrix<double>&, const DenseMatrix<double>&);
extern template LyapunovSolution<long double> solve_lyapunov<long double>(
    const DenseMatrix<long double>&, const DenseMatrix<long double>&);

}  // namespace optomem
