// Shared generators for the property tests. Fixed seeds keep every run
// byte-for-byte reproducible.
#pragma once

#include "dicke/density_matrix.hpp"
#include "dicke/x_state.hpp"

#include <random>

namespace testutil {

using dicke::Complex;
using dicke::DensityMatrix;
using dicke::Matrix2c;
using dicke::Matrix4c;
using dicke::XState;

inline std::mt19937& rng() {
  static std::mt19937 gen(20250810u);
  return gen;
}

inline double uniform(double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng());
}

inline Complex<double> random_phase() {
  const double t = uniform(0, 2 * EIGEN_PI);
  return {std::cos(t), std::sin(t)};
}

// Random point on the probability simplex (exponential spacings).
inline std::array<double, 4> random_populations() {
  std::array<double, 4> p{};
  double sum = 0;
  for (auto& v : p) sum += v = -std::log(uniform(1e-12, 1.0));
  for (auto& v : p) v /= sum;
  return p;
}

inline XState<double> random_x_state(bool complex_phases = true) {
  const auto p = random_populations();
  const double r14 = std::sqrt(p[0] * p[3]) * uniform(0, 0.98);
  const double r23 = std::sqrt(p[1] * p[2]) * uniform(0, 0.98);
  const Complex<double> c14 = complex_phases ? r14 * random_phase() : Complex<double>(r14);
  const Complex<double> c23 = complex_phases ? r23 * random_phase() : Complex<double>(r23);
  return XState<double>::validated(p[0], p[1], p[2], p[3], c14, c23);
}

// Ginibre construction: G G^dag / tr.
inline DensityMatrix<double> random_density() {
  std::normal_distribution<double> gauss;
  Matrix4c<double> g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g(i, j) = Complex<double>(gauss(rng()), gauss(rng()));
  Matrix4c<double> rho = g * g.adjoint();
  rho /= rho.trace();
  return dicke::validate_density(rho);
}

inline Matrix2c<double> random_unitary2() {
  std::normal_distribution<double> gauss;
  Matrix2c<double> g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = Complex<double>(gauss(rng()), gauss(rng()));
  Eigen::HouseholderQR<Matrix2c<double>> qr(g);
  Matrix2c<double> q = qr.householderQ();
  return q;
}

inline Matrix4c<double> bell_phi_plus() {
  Matrix4c<double> m = Matrix4c<double>::Zero();
  m(0, 0) = m(0, 3) = m(3, 0) = m(3, 3) = 0.5;
  return m;
}

inline Matrix4c<double> bell_psi_plus() {
  Matrix4c<double> m = Matrix4c<double>::Zero();
  m(1, 1) = m(1, 2) = m(2, 1) = m(2, 2) = 0.5;
  return m;
}

inline double max_abs(const Matrix4c<double>& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testutil
