// X-shaped two-qubit states: the seven-parameter family with support on the
// diagonal and anti-diagonal only. Carries the closed-form spectral data and
// the analytic matrix square root used by the fast correlation paths.
#pragma once

#include "dicke/density_matrix.hpp"
#include "dicke/types.hpp"

#include <array>
#include <optional>

namespace dicke {

template <class Scalar>
struct XState {
  Scalar p11{}, p22{}, p33{}, p44{};  // populations, basis {ee, eg, ge, gg}
  Complex<Scalar> c14{};              // rho_14 = <ee|rho|gg>
  Complex<Scalar> c23{};              // rho_23 = <eg|rho|ge>

  static constexpr Scalar trace_tol = Scalar(1e-12);
  static constexpr Scalar psd_tol = Scalar(1e-10);

  // Trace one, non-negative populations, PSD 2x2 blocks.
  static XState validated(Scalar p11, Scalar p22, Scalar p33, Scalar p44,
                          Complex<Scalar> c14, Complex<Scalar> c23) {
    XState x{p11, p22, p33, p44, c14, c23};
    const Scalar tr_dev = std::abs(p11 + p22 + p33 + p44 - Scalar(1));
    if (tr_dev > trace_tol)
      throw Error(Errc::TraceNotOne, "|tr - 1| = " + std::to_string(double(tr_dev)),
                  double(tr_dev));
    for (Scalar p : {p11, p22, p33, p44})
      if (p < -psd_tol)
        throw Error(Errc::NotPositiveSemidefinite,
                    "negative population " + std::to_string(double(p)), double(p));
    const Scalar outer = std::abs(c14) - std::sqrt(std::max(p11 * p44, Scalar(0)));
    const Scalar inner = std::abs(c23) - std::sqrt(std::max(p22 * p33, Scalar(0)));
    if (outer > psd_tol || inner > psd_tol)
      throw Error(Errc::NotPositiveSemidefinite,
                  "off-diagonal exceeds block bound by " +
                      std::to_string(double(std::max(outer, inner))),
                  double(std::max(outer, inner)));
    return x;
  }

  Matrix4c<Scalar> to_matrix() const {
    Matrix4c<Scalar> m = Matrix4c<Scalar>::Zero();
    m(0, 0) = p11; m(1, 1) = p22; m(2, 2) = p33; m(3, 3) = p44;
    m(0, 3) = c14; m(3, 0) = std::conj(c14);
    m(1, 2) = c23; m(2, 1) = std::conj(c23);
    return m;
  }

  DensityMatrix<Scalar> to_density() const { return validate_density(to_matrix()); }
};

// Recognizes an X-shaped density matrix (off-X entries below tol).
template <class Scalar>
std::optional<XState<Scalar>> as_x_state(const DensityMatrix<Scalar>& rho,
                                         Scalar tol = Scalar(1e-13)) {
  const Matrix4c<Scalar>& m = rho.matrix();
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 3}, {2, 3}})
    if (std::abs(m(i, j)) > tol) return std::nullopt;
  return XState<Scalar>{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(),
                        m(3, 3).real(), m(0, 3), m(1, 2)};
}

// Local-unitary phase removal: |c14|, |c23| replace the coherences. Leaves
// populations and the spectrum unchanged.
template <class Scalar>
XState<Scalar> remove_x_phases(const XState<Scalar>& x) {
  XState<Scalar> out = x;
  out.c14 = std::abs(x.c14);
  out.c23 = std::abs(x.c23);
  return out;
}

// Closed-form spectral data of an X state. lambda_1 >= lambda_4 come from the
// outer {ee,gg} block, lambda_2 >= lambda_3 from the inner {eg,ge} block.
template <class Scalar>
struct XSpectralData {
  Scalar t1{}, d1{}, t2{}, d2{};
  std::array<Scalar, 4> lambda{};
};

namespace detail {

// Block determinant p q - |c|^2 with cancellation noise around exact
// rank-one blocks squashed to zero (it feeds square roots downstream).
template <class Scalar>
Scalar block_det(Scalar p, Scalar q, const Complex<Scalar>& c) {
  const Scalar d = p * q - std::norm(c);
  const Scalar t = p + q;
  return std::abs(d) < t * t * Scalar(1e-14) ? Scalar(0) : d;
}

}  // namespace detail

template <class Scalar>
XSpectralData<Scalar> x_spectrum(const XState<Scalar>& x) {
  XSpectralData<Scalar> s;
  s.t1 = x.p11 + x.p44;
  s.d1 = detail::block_det(x.p11, x.p44, x.c14);
  s.t2 = x.p22 + x.p33;
  s.d2 = detail::block_det(x.p22, x.p33, x.c23);
  auto block_eigs = [](Scalar t, Scalar d) {
    Scalar disc = t * t - 4 * d;
    if (disc < Scalar(-1e-10))
      throw Error(Errc::NegativeDiscriminant, "t^2 - 4d = " + std::to_string(double(disc)),
                  double(disc));
    const Scalar r = std::sqrt(std::max(disc, Scalar(0)));
    return std::pair{(t + r) / 2, (t - r) / 2};
  };
  auto [l1, l4] = block_eigs(s.t1, s.d1);
  auto [l2, l3] = block_eigs(s.t2, s.d2);
  s.lambda = {l1, l2, l3, l4};
  return s;
}

namespace detail {

// sqrt of the 2x2 block [[p, c], [conj(c), q]]: (B + sqrt(det) I)/sqrt(tr + 2 sqrt(det)).
// A numerically zero block maps to the zero block; a degenerate nonzero block
// cannot be rooted by the closed form.
template <class Scalar>
void sqrt_block(Scalar p, Scalar q, Complex<Scalar> c, Scalar& rp, Scalar& rq,
                Complex<Scalar>& rc) {
  const Scalar t = p + q;
  const Scalar d = std::max(block_det(p, q, c), Scalar(0));
  const Scalar denom2 = t + 2 * std::sqrt(d);
  if (denom2 < Scalar(1e-14)) {
    const Scalar mass = std::abs(p) + std::abs(q) + std::abs(c);
    if (mass == Scalar(0)) {  // exactly-zero block roots to zero
      rp = rq = Scalar(0);
      rc = Complex<Scalar>(0);
      return;
    }
    throw Error(Errc::DegenerateBlock, "t + 2 sqrt(d) = " + std::to_string(double(denom2)),
                double(denom2));
  }
  const Scalar denom = std::sqrt(denom2);
  rp = (p + std::sqrt(d)) / denom;
  rq = (q + std::sqrt(d)) / denom;
  rc = c / denom;
}

}  // namespace detail

// Analytic principal square root of a PSD X state; stays X-shaped.
template <class Scalar>
Matrix4c<Scalar> sqrt_x(const XState<Scalar>& x) {
  XState<Scalar> r;
  detail::sqrt_block(x.p11, x.p44, x.c14, r.p11, r.p44, r.c14);
  detail::sqrt_block(x.p22, x.p33, x.c23, r.p22, r.p33, r.c23);
  return r.to_matrix();
}

// Fano-Bloch coefficients R of sqrt(rho) for an X state with real
// non-negative coherences (apply remove_x_phases first). Equals
// fano_bloch_of(sqrt_x(x)) but costs a handful of flops.
template <class Scalar>
FanoBlochTensor<Scalar> sqrt_fano_bloch(const XState<Scalar>& x) {
  const auto s = x_spectrum(x);
  const Scalar s1sq = s.t1 + 2 * std::sqrt(std::max(s.d1, Scalar(0)));
  const Scalar s2sq = s.t2 + 2 * std::sqrt(std::max(s.d2, Scalar(0)));
  const Scalar s1 = std::sqrt(s1sq), s2 = std::sqrt(s2sq);
  // Terms divided by a numerically-zero block vanish with the block; anything
  // else in a degenerate block is out of the closed form's reach.
  auto over = [](Scalar num, Scalar den, Scalar blocksq) {
    if (blocksq < Scalar(1e-14)) {
      if (std::abs(num) < Scalar(1e-12)) return Scalar(0);
      throw Error(Errc::DegenerateBlock, "block weight " + std::to_string(double(blocksq)),
                  double(blocksq));
    }
    return num / den;
  };
  const Scalar T30 = 2 * (x.p11 + x.p22) - 1;
  const Scalar T03 = 2 * (x.p11 + x.p33) - 1;
  const Scalar T11 = 2 * (x.c23.real() + x.c14.real());
  const Scalar T22 = 2 * (x.c23.real() - x.c14.real());

  FanoBlochTensor<Scalar> R = FanoBlochTensor<Scalar>::Zero();
  R(0, 0) = s1 + s2;
  R(0, 3) = over((T30 + T03) / 2, s1, s1sq) - over((T30 - T03) / 2, s2, s2sq);
  R(3, 0) = over((T30 + T03) / 2, s1, s1sq) + over((T30 - T03) / 2, s2, s2sq);
  R(1, 1) = over((T11 + T22) / 2, s2, s2sq) + over((T11 - T22) / 2, s1, s1sq);
  R(2, 2) = over((T11 + T22) / 2, s2, s2sq) - over((T11 - T22) / 2, s1, s1sq);
  R(3, 3) = s1 - s2;
  return R;
}

}  // namespace dicke
