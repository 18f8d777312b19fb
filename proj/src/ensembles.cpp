#include "rmt/ensembles.hpp"

#include <lapacke.h>

#include <cmath>

namespace rmt {

namespace {

void require_finite(const Eigen::MatrixXcd& m, const char* who) {
  if (!m.allFinite()) throw invalid_argument(std::string(who) + ": non-finite entries");
}

}  // namespace

Spectrum eigenvalues_hermitian(const Eigen::MatrixXcd& m) {
  require_finite(m, "eigenvalues_hermitian");
  if (m.rows() != m.cols()) throw invalid_argument("eigenvalues_hermitian: non-square");
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXcd a = m;
  std::vector<double> w(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'U', n,
                            reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) throw numerical_error("zheevd failed, info=" + std::to_string(info));
  return {std::move(w), 1.0};
}

Spectrum eigenvalues_hermitian(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw invalid_argument("eigenvalues_hermitian: non-finite entries");
  if (m.rows() != m.cols()) throw invalid_argument("eigenvalues_hermitian: non-square");
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd a = m;
  std::vector<double> w(n);
  int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, a.data(), n, w.data());
  if (info != 0) throw numerical_error("dsyevd failed, info=" + std::to_string(info));
  return {std::move(w), 1.0};
}

std::pair<Spectrum, Eigen::MatrixXcd> eigensystem_hermitian(const Eigen::MatrixXcd& m) {
  require_finite(m, "eigensystem_hermitian");
  if (m.rows() != m.cols()) throw invalid_argument("eigensystem_hermitian: non-square");
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXcd a = m;
  std::vector<double> w(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'U', n,
                            reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data());
  if (info != 0) throw numerical_error("zheevd failed, info=" + std::to_string(info));
  return {Spectrum{std::move(w), 1.0}, std::move(a)};
}

ComplexSpectrum eigenvalues_complex(const Eigen::MatrixXcd& m) {
  require_finite(m, "eigenvalues_complex");
  if (m.rows() != m.cols()) throw invalid_argument("eigenvalues_complex: non-square");
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXcd a = m;
  std::vector<std::complex<double>> w(n);
  int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n,
                           reinterpret_cast<lapack_complex_double*>(a.data()), n,
                           reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1,
                           nullptr, 1);
  if (info != 0) throw numerical_error("zgeev failed, info=" + std::to_string(info));
  return {std::move(w), 1.0};
}

HadamardReport hadamard_derivatives(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw invalid_argument("hadamard_derivatives: A, B must be square of equal size");
  const int n = static_cast<int>(a.rows());
  auto [spec, u] = eigensystem_hermitian(a);
  const double gap_tol = 1e-8 * a.norm();
  for (int i = 0; i + 1 < n; ++i)
    if (spec.values[i + 1] - spec.values[i] <= gap_tol)
      throw degenerate_spectrum_error("hadamard_derivatives: eigenvalue gap below tolerance");

  Eigen::MatrixXcd bu = u.adjoint() * b * u;  // bu(k,i) = <u_k | B u_i>
  HadamardReport rep;
  rep.first_derivs.resize(n);
  rep.second_derivs.resize(n);
  rep.eigvecs_used = u;
  for (int i = 0; i < n; ++i) {
    rep.first_derivs[i] = bu(i, i).real();
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      s += std::norm(bu(k, i)) / (spec.values[i] - spec.values[k]);
    }
    rep.second_derivs[i] = 2.0 * s;
  }
  return rep;
}

}  // namespace rmt
