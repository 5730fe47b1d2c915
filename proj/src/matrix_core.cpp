#include "tracelab/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace tracelab {

namespace {

using Eigen::Index;

bool all_finite(const DenseMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

// Wraps the output of an internal computation; non-finite results are a
// numerical failure rather than bad input.
ComplexMatrix from_result(DenseMatrix m, const char* context,
                          std::optional<double> known_norm = std::nullopt) {
  if (!all_finite(m)) throw NumericalFailure(std::string(context) + ": non-finite result");
  return ComplexMatrix(std::move(m), known_norm);
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* context) {
  if (a.dim() != b.dim())
    throw ContractViolation(std::string(context) + ": dimension mismatch (" +
                            std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

double argument_0_2pi(Complex z) {
  double arg = std::arg(z);
  if (arg < 0.0) arg += 2.0 * std::numbers::pi;
  return arg;
}

Eigen::VectorXd singular_values_of(const DenseMatrix& m, const char* context) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  Eigen::VectorXd s = svd.singularValues();
  for (Index i = 0; i < s.size(); ++i)
    if (!std::isfinite(s(i))) throw NumericalFailure(std::string(context) + ": SVD produced non-finite values");
  return s;
}

DenseMatrix hermitian_part(const DenseMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace

ComplexMatrix::ComplexMatrix(DenseMatrix entries, std::optional<double> known_norm)
    : entries_(std::move(entries)), norm_cache_(known_norm) {
  if (entries_.rows() != entries_.cols())
    throw ContractViolation("ComplexMatrix: matrix must be square");
  if (entries_.rows() == 0) throw ContractViolation("ComplexMatrix: dimension must be positive");
  if (!all_finite(entries_)) throw ContractViolation("ComplexMatrix: entries must be finite");
}

ComplexMatrix ComplexMatrix::zero(std::size_t dim) {
  const auto n = static_cast<Index>(dim);
  return ComplexMatrix(DenseMatrix::Zero(n, n), 0.0);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  const auto n = static_cast<Index>(dim);
  return ComplexMatrix(DenseMatrix::Identity(n, n), 1.0);
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& diag) {
  const auto n = static_cast<Index>(diag.size());
  DenseMatrix m = DenseMatrix::Zero(n, n);
  double norm = 0.0;
  for (Index i = 0; i < n; ++i) {
    m(i, i) = diag[static_cast<std::size_t>(i)];
    norm = std::max(norm, std::abs(m(i, i)));
  }
  return ComplexMatrix(std::move(m), norm);
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const auto n = static_cast<Index>(rows.size());
  DenseMatrix m(n, n);
  Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Index>(row.size()) != n) throw ContractViolation("from_rows: matrix must be square");
    Index j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return ComplexMatrix(std::move(m));
}

double ComplexMatrix::op_norm() const {
  if (norm_cache_) return *norm_cache_;
  return operator_norm(entries_);
}

ComplexMatrix ComplexMatrix::adjoint() const {
  return ComplexMatrix(entries_.adjoint(), norm_cache_);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator+");
  return from_result(a.entries_ + b.entries_, "operator+");
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator-");
  return from_result(a.entries_ - b.entries_, "operator-");
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "operator*");
  return from_result(a.entries_ * b.entries_, "operator*");
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  std::optional<double> norm;
  if (a.norm_cache_) norm = std::abs(s) * *a.norm_cache_;
  return from_result(s * a.entries_, "scalar multiply", norm);
}

double operator_norm(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values_of(m, "operator_norm")(0);
}

double max_abs_entry(const DenseMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

std::vector<Complex> EigenvalueSequence::padded() const {
  std::vector<Complex> out = values;
  out.resize(values.size() + zero_tail_count, Complex{0.0, 0.0});
  return out;
}

std::vector<double> EigenvalueSequence::moduli() const {
  std::vector<double> out;
  out.reserve(size());
  for (const auto& v : values) out.push_back(std::abs(v));
  out.resize(size(), 0.0);
  return out;
}

SingularSequence::SingularSequence(std::vector<double> v, std::optional<std::size_t> dim)
    : values(std::move(v)), source_dim(dim) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i]))
      throw ContractViolation("SingularSequence: entries must be finite and nonnegative");
    if (i > 0 && values[i] > values[i - 1])
      throw ContractViolation("SingularSequence: entries must be nonincreasing");
  }
}

std::vector<Complex> all_eigenvalues(const ComplexMatrix& a) {
  const Index n = static_cast<Index>(a.dim());
  Eigen::ComplexSchur<DenseMatrix> schur(n);
  schur.setMaxIterations(kSchurSweepsPerDim * n);
  schur.compute(a.entries(), /*computeU=*/false);
  if (schur.info() != Eigen::Success)
    throw NumericalFailure("eigenvalue_sequence: Schur iteration did not converge within " +
                           std::to_string(kSchurSweepsPerDim * n) + " iterations");
  const DenseMatrix& t = schur.matrixT();
  std::vector<Complex> eig(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    eig[static_cast<std::size_t>(i)] = t(i, i);
    if (!std::isfinite(t(i, i).real()) || !std::isfinite(t(i, i).imag()))
      throw NumericalFailure("eigenvalue_sequence: non-finite eigenvalue");
  }
  return eig;
}

void sort_by_modulus(std::vector<Complex>& values) {
  std::stable_sort(values.begin(), values.end(),
                   [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });
  if (values.empty()) return;
  // Moduli that agree to rounding form one tie group, ordered by argument.
  const double tie_tol = 1e-12 * std::abs(values.front());
  std::size_t start = 0;
  while (start < values.size()) {
    std::size_t end = start + 1;
    while (end < values.size() && std::abs(values[end - 1]) - std::abs(values[end]) <= tie_tol) ++end;
    std::stable_sort(values.begin() + static_cast<std::ptrdiff_t>(start),
                     values.begin() + static_cast<std::ptrdiff_t>(end),
                     [](Complex x, Complex y) { return argument_0_2pi(x) < argument_0_2pi(y); });
    start = end;
  }
}

EigenvalueSequence eigenvalue_sequence(const ComplexMatrix& a, double zero_tol_rel) {
  if (!(zero_tol_rel >= 0.0 && zero_tol_rel < 1.0))
    throw ContractViolation("eigenvalue_sequence: zero_tol_rel must lie in [0, 1)");
  std::vector<Complex> eig = all_eigenvalues(a);
  const double threshold = zero_tol_rel * a.op_norm();

  EigenvalueSequence seq;
  seq.source_dim = a.dim();
  for (const auto& v : eig) {
    if (std::abs(v) <= threshold)
      ++seq.zero_tail_count;
    else
      seq.values.push_back(v);
  }
  sort_by_modulus(seq.values);
  return seq;
}

SingularSequence singular_value_sequence(const ComplexMatrix& a) {
  Eigen::VectorXd s = singular_values_of(a.entries(), "singular_value_sequence");
  std::vector<double> values(s.data(), s.data() + s.size());
  // Jacobi SVD returns them sorted; enforce it bitwise anyway.
  std::sort(values.begin(), values.end(), std::greater<>());
  return SingularSequence(std::move(values), a.dim());
}

PolarFactors polar_decompose(const ComplexMatrix& a) {
  Eigen::JacobiSVD<DenseMatrix> svd(a.entries(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const DenseMatrix& w = svd.matrixU();
  const DenseMatrix& v = svd.matrixV();
  const Eigen::VectorXd& sigma = svd.singularValues();
  DenseMatrix positive = v * sigma.cast<Complex>().asDiagonal() * v.adjoint();
  const double top = sigma.size() > 0 ? sigma(0) : 0.0;
  return PolarFactors{from_result(w * v.adjoint(), "polar_decompose", 1.0),
                      from_result(hermitian_part(positive), "polar_decompose", top)};
}

ComplexMatrix spectral_projection(const ComplexMatrix& a, double cutoff) {
  if (!(cutoff > 0.0)) throw ContractViolation("spectral_projection: cutoff must be positive");
  const DenseMatrix& m = a.entries();
  const double scale = std::max(1.0, max_abs_entry(m));
  if (max_abs_entry(m - m.adjoint()) > 1e-10 * scale)
    throw ContractViolation("spectral_projection: input is not Hermitian");

  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(hermitian_part(m));
  if (eig.info() != Eigen::Success) throw NumericalFailure("spectral_projection: eigensolver failed");
  const Eigen::VectorXd& evals = eig.eigenvalues();
  if (evals(0) < -1e-10 * std::max(1.0, std::abs(evals(evals.size() - 1))))
    throw ContractViolation("spectral_projection: input is not positive semidefinite");

  const DenseMatrix& vecs = eig.eigenvectors();
  const Index n = m.rows();
  DenseMatrix p = DenseMatrix::Zero(n, n);
  bool any = false;
  for (Index k = 0; k < n; ++k) {
    if (evals(k) >= cutoff) {
      p.noalias() += vecs.col(k) * vecs.col(k).adjoint();
      any = true;
    }
  }
  return from_result(hermitian_part(p), "spectral_projection", any ? 1.0 : 0.0);
}

namespace {

// X + i√(I−X²) for Hermitian X with ‖X‖ ≤ 1, through the eigenbasis of X.
DenseMatrix unitary_lift(const DenseMatrix& x) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(hermitian_part(x));
  if (eig.info() != Eigen::Success) throw NumericalFailure("four_unitary_decomposition: eigensolver failed");
  const Eigen::VectorXd& evals = eig.eigenvalues();
  Eigen::VectorXcd lifted(evals.size());
  for (Index k = 0; k < evals.size(); ++k) {
    const double t = std::clamp(evals(k), -1.0, 1.0);
    lifted(k) = Complex{t, std::sqrt(1.0 - t * t)};
  }
  return eig.eigenvectors() * lifted.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

FourUnitaryDecomposition four_unitary_decomposition(const ComplexMatrix& a) {
  const std::size_t n = a.dim();
  const double norm = a.op_norm();
  const Complex i{0.0, 1.0};
  if (norm == 0.0) {
    const auto id = ComplexMatrix::identity(n);
    return {{Complex{}, Complex{}, Complex{}, Complex{}}, {id, id, i * id, -i * id}};
  }
  const DenseMatrix& m = a.entries();
  const DenseMatrix re = hermitian_part(m) / norm;
  const DenseMatrix im = ((m - m.adjoint()) / (2.0 * i)) / norm;
  const DenseMatrix u_re = unitary_lift(re);
  const DenseMatrix u_im = unitary_lift(im);
  const Complex half = 0.5 * norm;
  return {{half, half, i * half, i * half},
          {from_result(u_re, "four_unitary_decomposition", 1.0),
           from_result(u_re.adjoint(), "four_unitary_decomposition", 1.0),
           from_result(u_im, "four_unitary_decomposition", 1.0),
           from_result(u_im.adjoint(), "four_unitary_decomposition", 1.0)}};
}

ResolventCheck resolvent_identity_check(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda) {
  require_same_dim(a, b, "resolvent_identity_residual");
  if (lambda == Complex{0.0, 0.0}) throw ContractViolation("resolvent_identity_residual: lambda must be nonzero");
  const Index n = static_cast<Index>(a.dim());
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix& am = a.entries();
  const DenseMatrix& bm = b.entries();
  const DenseMatrix shifted_ab = lambda * id - am * bm;
  const DenseMatrix shifted_ba = lambda * id - bm * am;

  auto condition = [](const DenseMatrix& m) {
    Eigen::VectorXd s = singular_values_of(m, "resolvent_identity_residual");
    const double smin = s(s.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smin;
  };
  const double kappa_ab = condition(shifted_ab);
  const double kappa_ba = condition(shifted_ba);
  if (!(kappa_ab <= kResolventConditionCap) || !(kappa_ba <= kResolventConditionCap))
    throw SingularityError("resolvent_identity_residual: lambda is numerically in the spectrum (condition > 1e12)");

  const DenseMatrix inv_ab = shifted_ab.partialPivLu().inverse();
  const DenseMatrix inv_ba = shifted_ba.partialPivLu().inverse();
  const DenseMatrix rhs = (id + bm * inv_ab * am) / lambda;
  const DenseMatrix diff = inv_ba - rhs;
  if (!all_finite(diff)) throw NumericalFailure("resolvent_identity_residual: non-finite result");

  ResolventCheck out;
  out.residual = operator_norm(diff);
  const double left_scale = kappa_ba * operator_norm(inv_ba);
  const double right_scale = kappa_ab * operator_norm(inv_ab) * a.op_norm() * b.op_norm() / std::abs(lambda);
  out.condition_scale = std::max({1.0, left_scale, right_scale});
  return out;
}

double resolvent_identity_residual(const ComplexMatrix& a, const ComplexMatrix& b, Complex lambda) {
  return resolvent_identity_check(a, b, lambda).residual;
}

std::size_t algebraic_multiplicity(const ComplexMatrix& a, Complex lambda, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw ContractViolation("algebraic_multiplicity: cluster_tol must be positive");
  const double radius = cluster_tol * std::max(1.0, a.op_norm());
  const auto eig = all_eigenvalues(a);
  return static_cast<std::size_t>(
      std::count_if(eig.begin(), eig.end(), [&](Complex v) { return std::abs(v - lambda) <= radius; }));
}

ComplexMatrix commutator(const ComplexMatrix& x, const ComplexMatrix& y) {
  require_same_dim(x, y, "commutator");
  return from_result(x.entries() * y.entries() - y.entries() * x.entries(), "commutator");
}

double intertwining_residual(const ComplexMatrix& a, const ComplexMatrix& b, int power) {
  require_same_dim(a, b, "intertwining_residual");
  if (power < 0) throw ContractViolation("intertwining_residual: power must be nonnegative");
  const Index n = static_cast<Index>(a.dim());
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix left_factor = id - b.entries() * a.entries();
  const DenseMatrix right_factor = id - a.entries() * b.entries();
  DenseMatrix left = b.entries();
  DenseMatrix right = b.entries();
  for (int k = 0; k < power; ++k) {
    left = left_factor * left;
    right = right * right_factor;
  }
  return operator_norm(left - right);
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  const Index n = static_cast<Index>(u.dim());
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  return max_abs_entry(u.entries().adjoint() * u.entries() - id) <= tol &&
         max_abs_entry(u.entries() * u.entries().adjoint() - id) <= tol;
}

bool is_hermitian(const ComplexMatrix& h, double tol) {
  return max_abs_entry(h.entries() - h.entries().adjoint()) <= tol;
}

}  // namespace tracelab
