#include "tracelab/ensembles.hpp"

#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace tracelab {

namespace {
using Eigen::Index;
}

Rng trial_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

ComplexMatrix random_gaussian(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto n = static_cast<Index>(dim);
  DenseMatrix m(n, n);
  const double s = 1.0 / std::sqrt(2.0);
  // Row-major fill so the draw order does not depend on storage order.
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(i, j) = Complex{re * s, im * s};
    }
  return ComplexMatrix(std::move(m));
}

ComplexMatrix random_unitary(std::size_t dim, Rng& rng) {
  const DenseMatrix g = random_gaussian(dim, rng).entries();
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ();
  const DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < q.cols(); ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return ComplexMatrix(std::move(q), 1.0);
}

ComplexMatrix random_normal(std::size_t dim, Rng& rng) {
  const ComplexMatrix u = random_unitary(dim, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd eig(static_cast<Index>(dim));
  for (Index k = 0; k < eig.size(); ++k) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    eig(k) = Complex{re, im};
  }
  return ComplexMatrix(u.entries() * eig.asDiagonal() * u.entries().adjoint());
}

ComplexMatrix truncate_rank(const ComplexMatrix& m, std::size_t rank) {
  Eigen::JacobiSVD<DenseMatrix> svd(m.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s = svd.singularValues();
  for (Index k = static_cast<Index>(rank); k < s.size(); ++k) s(k) = 0.0;
  return ComplexMatrix(svd.matrixU() * s.cast<Complex>().asDiagonal() * svd.matrixV().adjoint());
}

}  // namespace tracelab
