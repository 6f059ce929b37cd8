#include "optomem/lyapunov.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

namespace optomem {

namespace {

// Solve (T + shift I) x = b with T quasi-upper-triangular (1x1/2x2 diagonal
// blocks from a real Schur form) by back-substitution.
template <typename Scalar>
void shifted_quasi_triangular_solve(const DenseMatrix<Scalar>& t, Scalar shift,
                                    Eigen::Vector<Scalar, Eigen::Dynamic>& b) {
  const int n = static_cast<int>(t.rows());
  int i = n - 1;
  while (i >= 0) {
    const bool pair = (i > 0) && (t(i, i - 1) != Scalar(0));
    if (!pair) {
      const Scalar diag = t(i, i) + shift;
      if (diag == Scalar(0)) throw numerics_error("lyapunov: singular shifted block");
      b[i] /= diag;
      for (int r = 0; r < i; ++r) b[r] -= t(r, i) * b[i];
      --i;
    } else {
      // 2x2 block rows (i-1, i)
      const int j = i - 1;
      Eigen::Matrix<Scalar, 2, 2> blk;
      blk << t(j, j) + shift, t(j, i), t(i, j), t(i, i) + shift;
      const Scalar det = blk(0, 0) * blk(1, 1) - blk(0, 1) * blk(1, 0);
      if (det == Scalar(0)) throw numerics_error("lyapunov: singular shifted 2x2 block");
      const Scalar b0 = b[j], b1 = b[i];
      b[j] = (blk(1, 1) * b0 - blk(0, 1) * b1) / det;
      b[i] = (blk(0, 0) * b1 - blk(1, 0) * b0) / det;
      for (int r = 0; r < j; ++r) b[r] -= t(r, j) * b[j] + t(r, i) * b[i];
      i -= 2;
    }
  }
}

// Solve T Y + Y T^T = C for quasi-upper-triangular T, iterating column blocks
// of Y from the last to the first.
template <typename Scalar>
DenseMatrix<Scalar> quasi_triangular_lyapunov(const DenseMatrix<Scalar>& t,
                                              const DenseMatrix<Scalar>& c) {
  const int n = static_cast<int>(t.rows());
  DenseMatrix<Scalar> y = DenseMatrix<Scalar>::Zero(n, n);

  // Diagonal block boundaries of the Schur form.
  std::vector<int> starts;
  for (int i = 0; i < n;) {
    starts.push_back(i);
    i += (i + 1 < n && t(i + 1, i) != Scalar(0)) ? 2 : 1;
  }

  for (int bi = static_cast<int>(starts.size()) - 1; bi >= 0; --bi) {
    const int j0 = starts[bi];
    const int w = (bi + 1 < static_cast<int>(starts.size()) ? starts[bi + 1] : n) - j0;

    // rhs = C_{:,J} - sum_{K > J} Y_{:,K} (T_{J,K})^T
    DenseMatrix<Scalar> rhs = c.middleCols(j0, w);
    if (j0 + w < n) {
      const int rest = n - (j0 + w);
      rhs.noalias() -= y.middleCols(j0 + w, rest) *
                       t.block(j0, j0 + w, w, rest).transpose();
    }

    if (w == 1) {
      Eigen::Vector<Scalar, Eigen::Dynamic> col = rhs.col(0);
      shifted_quasi_triangular_solve(t, t(j0, j0), col);
      y.col(j0) = col;
    } else {
      // T Yj + Yj B^T = rhs with B the 2x2 diagonal block: Kronecker solve
      // (I2 (x) T + B (x) I_n) vec(Yj) = vec(rhs).
      Eigen::Matrix<Scalar, 2, 2> bblk = t.block(j0, j0, 2, 2);
      DenseMatrix<Scalar> big = DenseMatrix<Scalar>::Zero(2 * n, 2 * n);
      big.topLeftCorner(n, n) = t;
      big.bottomRightCorner(n, n) = t;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          big.block(a * n, b * n, n, n).diagonal().array() += bblk(a, b);
      Eigen::Vector<Scalar, Eigen::Dynamic> v(2 * n);
      v.head(n) = rhs.col(0);
      v.tail(n) = rhs.col(1);
      Eigen::Vector<Scalar, Eigen::Dynamic> sol =
          Eigen::PartialPivLU<DenseMatrix<Scalar>>(big).solve(v);
      y.col(j0) = sol.head(n);
      y.col(j0 + 1) = sol.tail(n);
    }
  }
  return y;
}

}  // namespace

template <typename Scalar>
LyapunovSolution<Scalar> solve_lyapunov(const DenseMatrix<Scalar>& a,
                                        const DenseMatrix<Scalar>& d) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n || d.rows() != n || d.cols() != n)
    throw numerics_error("solve_lyapunov: dimension mismatch");

  Eigen::RealSchur<DenseMatrix<Scalar>> schur(a);
  if (schur.info() != Eigen::Success)
    throw numerics_error("solve_lyapunov: Schur decomposition failed");
  const DenseMatrix<Scalar>& t = schur.matrixT();
  const DenseMatrix<Scalar>& u = schur.matrixU();

  // Eigenvalues off the quasi-triangular diagonal; stability + sep estimate.
  std::vector<std::complex<Scalar>> eig;
  for (int i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != Scalar(0)) {
      const Scalar re = (t(i, i) + t(i + 1, i + 1)) / Scalar(2);
      const Scalar disc = -(t(i, i) - t(i + 1, i + 1)) * (t(i, i) - t(i + 1, i + 1)) / Scalar(4) -
                          t(i, i + 1) * t(i + 1, i);
      const Scalar im = std::sqrt(std::max(disc, Scalar(0)));
      eig.emplace_back(re, im);
      eig.emplace_back(re, -im);
      i += 2;
    } else {
      eig.emplace_back(t(i, i), Scalar(0));
      ++i;
    }
  }
  Scalar sep = std::numeric_limits<Scalar>::max();
  for (const auto& li : eig) {
    if (li.real() >= Scalar(0))
      throw physics_error("solve_lyapunov: dynamical matrix is not stable");
    for (const auto& lj : eig)
      sep = std::min(sep, std::abs(li + std::conj(lj)));
  }

  const DenseMatrix<Scalar> c = -(u.transpose() * d * u);
  DenseMatrix<Scalar> y = quasi_triangular_lyapunov<Scalar>(t, c);
  DenseMatrix<Scalar> sigma = u * y * u.transpose();
  sigma = ((sigma + sigma.transpose()) / Scalar(2)).eval();

  // One refinement pass against the original equation.
  DenseMatrix<Scalar> res = a * sigma + sigma * a.transpose() + d;
  DenseMatrix<Scalar> cc = u.transpose() * res * u;
  DenseMatrix<Scalar> corr = u * quasi_triangular_lyapunov<Scalar>(t, cc) * u.transpose();
  sigma += ((corr + corr.transpose()) / Scalar(2)).eval();

  LyapunovSolution<Scalar> out;
  out.sigma = sigma;
  const Scalar dn = d.norm();
  out.residual = dn > Scalar(0)
                     ? Scalar((a * sigma + sigma * a.transpose() + d).norm() / dn)
                     : Scalar(0);
  out.condition_estimate = sep > Scalar(0) ? a.norm() / sep
                                           : std::numeric_limits<Scalar>::infinity();
  out.ill_conditioned = out.condition_estimate > Scalar(1e14);
  return out;
}

template LyapunovSolution<double> solve_lyapunov<double>(
    const DenseMatrix<double>&, const DenseMatrix<double>&);
template LyapunovSolution<long double> solve_lyapunov<long double>(
    const DenseMatrix<long double>&, const DenseMatrix<long double>&);

}  // namespace optomem
