#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rmt/errors.hpp"

namespace rmt {

// Ordered real spectrum of one draw; scale records the normalization already
// applied to the values (1 until someone rescales).
struct Spectrum {
  std::vector<double> values;  // ascending
  double scale = 1.0;
  int n() const { return static_cast<int>(values.size()); }
};

struct ComplexSpectrum {
  std::vector<std::complex<double>> values;  // unordered
  double scale = 1.0;
  int n() const { return static_cast<int>(values.size()); }
};

struct HadamardReport {
  std::vector<double> first_derivs;
  std::vector<double> second_derivs;
  Eigen::MatrixXcd eigvecs_used;
};

// GUE: diagonal N(0,1); off-diagonal real and imaginary parts N(0,1/2),
// Hermitian by construction.
template <class Rng>
Eigen::MatrixXcd sample_gue(int n, Rng& rng) {
  if (n < 1) throw invalid_argument("sample_gue: n must be >= 1");
  Eigen::MatrixXcd m(n, n);
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  for (int i = 0; i < n; ++i) {
    m(i, i) = std::complex<double>(rng.normal(), 0.0);
    for (int j = i + 1; j < n; ++j) {
      std::complex<double> z(rng.normal() * inv_sqrt2, rng.normal() * inv_sqrt2);
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

// GOE: diagonal N(0,1); off-diagonal N(0,1/2).
template <class Rng>
Eigen::MatrixXd sample_goe(int n, Rng& rng) {
  if (n < 1) throw invalid_argument("sample_goe: n must be >= 1");
  Eigen::MatrixXd m(n, n);
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  for (int i = 0; i < n; ++i) {
    m(i, i) = rng.normal();
    for (int j = i + 1; j < n; ++j) {
      double v = rng.normal() * inv_sqrt2;
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

// Ginibre: independent standard complex Gaussian entries, E|M_ij|^2 = 1.
template <class Rng>
Eigen::MatrixXcd sample_ginibre(int n, Rng& rng) {
  if (n < 1) throw invalid_argument("sample_ginibre: n must be >= 1");
  Eigen::MatrixXcd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = rng.complex_normal();
  return m;
}

// Wishart sample covariance (1/m) A A* with A an n x m standard complex
// Gaussian matrix. Hermitian PSD by construction.
template <class Rng>
Eigen::MatrixXcd sample_wishart(int n, int m, Rng& rng) {
  if (n < 1 || m < 1) throw invalid_argument("sample_wishart: dimensions must be >= 1");
  Eigen::MatrixXcd a(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal();
  Eigen::MatrixXcd w = (a * a.adjoint()) / static_cast<double>(m);
  // force exact Hermitian symmetry after the product
  for (int i = 0; i < n; ++i) {
    w(i, i) = std::complex<double>(w(i, i).real(), 0.0);
    for (int j = i + 1; j < n; ++j) w(j, i) = std::conj(w(i, j));
  }
  return w;
}

// Haar unitary via Gram-Schmidt of a Ginibre draw, normalizers positive real.
template <class Rng>
Eigen::MatrixXcd sample_haar_unitary(int n, Rng& rng) {
  if (n < 1) throw invalid_argument("sample_haar_unitary: n must be >= 1");
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXcd g = sample_ginibre(n, rng);
    Eigen::MatrixXcd u(n, n);
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      Eigen::VectorXcd v = g.col(k);
      for (int j = 0; j < k; ++j) v -= u.col(j).dot(v) * u.col(j);
      double norm = v.norm();
      if (!(norm > 1e-300)) {
        ok = false;
        break;
      }
      u.col(k) = v / norm;
    }
    if (ok) return u;
  }
  throw numerical_error("sample_haar_unitary: singular Ginibre draw after 8 retries");
}

// All n eigenvalues ascending; delegates to a dense Hermitian eigensolver
// meeting the usual backward-error contract.
Spectrum eigenvalues_hermitian(const Eigen::MatrixXcd& m);
Spectrum eigenvalues_hermitian(const Eigen::MatrixXd& m);

// Eigenvalues plus an orthonormal eigenbasis (columns), ascending order.
std::pair<Spectrum, Eigen::MatrixXcd> eigensystem_hermitian(const Eigen::MatrixXcd& m);

ComplexSpectrum eigenvalues_complex(const Eigen::MatrixXcd& m);

// First and second derivatives of the ordered eigenvalues of t -> A + tB at
// t=0. Requires simple spectrum: min gap > 1e-8 * ||A||_F.
HadamardReport hadamard_derivatives(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

}  // namespace rmt
