// Validated two-qubit density matrices, Fano-Bloch decomposition and the
// eigendecomposition-based principal square root.
//
// Basis convention everywhere: {|1>=|e1 e2>, |2>=|e1 g2>, |3>=|g1 e2>, |4>=|g1 g2>}.
#pragma once

#include "dicke/types.hpp"

namespace dicke {

// Hermitian, unit-trace, positive-semidefinite 4x4 operator. Construction
// goes through validated()/validate_density so every instance satisfies the
// invariants (PSD down to eigenvalues >= -1e-10; closed-form evolution can
// produce -1e-15 wobble, which must be accepted).
template <class Scalar>
class DensityMatrix {
 public:
  static constexpr Scalar hermitian_tol = Scalar(1e-12);
  static constexpr Scalar trace_tol = Scalar(1e-12);
  static constexpr Scalar psd_tol = Scalar(1e-10);

  template <class Derived>
  static DensityMatrix validated(const Eigen::MatrixBase<Derived>& m) {
    Matrix4c<Scalar> raw = m;
    const Scalar herm_dev = (raw - raw.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > hermitian_tol)
      throw Error(Errc::NonHermitian, "max |m - m^dag| = " + std::to_string(double(herm_dev)),
                  double(herm_dev));
    Matrix4c<Scalar> h = Scalar(0.5) * (raw + raw.adjoint());
    const Scalar tr_dev = std::abs(h.trace().real() - Scalar(1));
    if (tr_dev > trace_tol || std::abs(h.trace().imag()) > trace_tol)
      throw Error(Errc::TraceNotOne, "|tr - 1| = " + std::to_string(double(tr_dev)),
                  double(tr_dev));
    Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> es(h, Eigen::EigenvaluesOnly);
    const Scalar lmin = es.eigenvalues().minCoeff();
    if (lmin < -psd_tol)
      throw Error(Errc::NotPositiveSemidefinite,
                  "min eigenvalue = " + std::to_string(double(lmin)), double(lmin));
    DensityMatrix out;
    out.m_ = h;
    return out;
  }

  const Matrix4c<Scalar>& matrix() const { return m_; }

 private:
  DensityMatrix() = default;
  Matrix4c<Scalar> m_;
};

// Validates a raw 4x4 array as a density matrix. Entries within the Hermitian
// tolerance are symmetrized before the trace and PSD checks.
template <class Derived>
auto validate_density(const Eigen::MatrixBase<Derived>& m)
    -> DensityMatrix<typename Derived::RealScalar> {
  return DensityMatrix<typename Derived::RealScalar>::validated(m);
}

namespace detail {

// Principal square root of a Hermitian PSD matrix; tiny negative eigenvalues
// (>= -1e-10) are clamped to zero. Eigenvalues below 1e-14 * lambda_max are
// solver noise around exact null modes and are clamped too -- taking their
// square root would turn O(eps) noise into O(sqrt(eps)) errors.
template <class Scalar>
Matrix4c<Scalar> psd_sqrt(const Matrix4c<Scalar>& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> es(h);
  Vector4r<Scalar> ev = es.eigenvalues();
  const Scalar lmin = ev.minCoeff();
  if (lmin < Scalar(-1e-10))
    throw Error(Errc::NotPositiveSemidefinite,
                "min eigenvalue = " + std::to_string(double(lmin)), double(lmin));
  const Scalar floor = ev.maxCoeff() * Scalar(1e-14);
  Vector4r<Scalar> root = (ev.array() < floor).select(Vector4r<Scalar>::Zero(), ev).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

template <class Scalar>
Matrix4c<Scalar> hermitian_sqrt_generic(const DensityMatrix<Scalar>& rho) {
  return detail::psd_sqrt(rho.matrix());
}

// T[a][b] = Tr(rho sigma_a (x) sigma_b); T(0,0) = 1 for unit trace.
template <class Scalar>
FanoBlochTensor<Scalar> fano_bloch_of(const Matrix4c<Scalar>& m) {
  FanoBlochTensor<Scalar> t;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      t(a, b) = (m * pauli_kron<Scalar>(a, b)).trace().real();
  return t;
}

template <class Scalar>
FanoBlochTensor<Scalar> fano_bloch_decompose(const DensityMatrix<Scalar>& rho) {
  return fano_bloch_of(rho.matrix());
}

// rho = (1/4) sum_ab T[a][b] sigma_a (x) sigma_b
template <class Scalar>
Matrix4c<Scalar> fano_bloch_reconstruct(const FanoBlochTensor<Scalar>& t) {
  Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      m += (t(a, b) / Scalar(4)) * pauli_kron<Scalar>(a, b);
  return m;
}

}  // namespace dicke
