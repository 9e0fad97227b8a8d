// Scalar-templated dense types and shared plumbing for the two-atom
// collective-emission library. Eigen is the only math dependency.
#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace dicke {

template <class Scalar> using Complex = std::complex<Scalar>;
template <class Scalar> using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;
template <class Scalar> using Matrix4c = Eigen::Matrix<Complex<Scalar>, 4, 4>;
template <class Scalar> using Matrix3r = Eigen::Matrix<Scalar, 3, 3>;
template <class Scalar> using Matrix4r = Eigen::Matrix<Scalar, 4, 4>;
template <class Scalar> using Vector3r = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar> using Vector4r = Eigen::Matrix<Scalar, 4, 1>;

// Fano-Bloch coefficients T[a][b] = Tr(rho sigma_a (x) sigma_b), a,b in 0..3.
template <class Scalar> using FanoBlochTensor = Matrix4r<Scalar>;

enum class Errc {
  NonHermitian,
  TraceNotOne,
  NotPositiveSemidefinite,
  NegativeDiscriminant,
  DegenerateBlock,
  ZeroSeparation,
  ParamOutOfRange,
  ResultNotPSD,
  DegenerateDenominator,
  BudgetTooSmall,
  ConfigError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonHermitian: return "NonHermitian";
    case Errc::TraceNotOne: return "TraceNotOne";
    case Errc::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case Errc::NegativeDiscriminant: return "NegativeDiscriminant";
    case Errc::DegenerateBlock: return "DegenerateBlock";
    case Errc::ZeroSeparation: return "ZeroSeparation";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::ResultNotPSD: return "ResultNotPSD";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::BudgetTooSmall: return "BudgetTooSmall";
    case Errc::ConfigError: return "ConfigError";
  }
  return "UnknownError";
}

// Domain error carrying the violated-invariant code and the offending magnitude.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, double magnitude = 0.0)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        magnitude_(magnitude) {}

  Errc code() const { return code_; }
  double magnitude() const { return magnitude_; }

 private:
  Errc code_;
  double magnitude_;
};

// Single-qubit basis is {|e>, |g>}; sigma_z |e> = +|e>.
template <class Scalar>
const Matrix2c<Scalar>& pauli(int k) {
  using C = Complex<Scalar>;
  static const Matrix2c<Scalar> sigma[4] = {
      (Matrix2c<Scalar>() << C(1, 0), C(0, 0), C(0, 0), C(1, 0)).finished(),
      (Matrix2c<Scalar>() << C(0, 0), C(1, 0), C(1, 0), C(0, 0)).finished(),
      (Matrix2c<Scalar>() << C(0, 0), C(0, -1), C(0, 1), C(0, 0)).finished(),
      (Matrix2c<Scalar>() << C(1, 0), C(0, 0), C(0, 0), C(-1, 0)).finished()};
  return sigma[k];
}

template <class Scalar>
Matrix4c<Scalar> kron(const Matrix2c<Scalar>& a, const Matrix2c<Scalar>& b) {
  Matrix4c<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// sigma_a (x) sigma_b in the product basis {|ee>, |eg>, |ge>, |gg>}.
template <class Scalar>
const Matrix4c<Scalar>& pauli_kron(int a, int b) {
  static const auto table = [] {
    std::array<Matrix4c<Scalar>, 16> t;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        t[4 * i + j] = kron<Scalar>(pauli<Scalar>(i), pauli<Scalar>(j));
    return t;
  }();
  return table[4 * a + b];
}

namespace detail {

// (1 - e^-x)/x, continuous at x = 0 and bounded on [0, inf). Keeps the
// equation-of-motion feeding terms finite at gamma = +/-1 without ever
// dividing by (1 -+ gamma), and free of overflow at large tau.
template <class Scalar>
Scalar one_minus_exp_over(Scalar x) {
  return x == Scalar(0) ? Scalar(1) : Scalar(-std::expm1(-x)) / x;
}

template <class Scalar>
Scalar clamp01(Scalar v) {
  // Measure values in [-1e-9, 0) report as 0, (1, 1+1e-9] as 1.
  if (v < Scalar(0) && v >= Scalar(-1e-9)) return Scalar(0);
  if (v > Scalar(1) && v <= Scalar(1) + Scalar(1e-9)) return Scalar(1);
  return v;
}

}  // namespace detail
}  // namespace dicke
