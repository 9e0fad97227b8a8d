// Collective spontaneous emission of two identical two-level atoms coupled to
// the vacuum: geometry-dependent rates, closed-form Dicke-basis evolution and
// a fixed-step RK4 integrator of the full master equation used as oracle.
//
// Time is measured in units of the single-atom lifetime, tau = Gamma t, with
// gamma = Gamma_12/Gamma and eta = Omega_12/Gamma. The free-evolution omega_0
// term is dropped (interaction frame); no observable below depends on it.
#pragma once

#include "dicke/density_matrix.hpp"
#include "dicke/types.hpp"
#include "dicke/x_state.hpp"

#include <array>
#include <cmath>

namespace dicke {

// Relative atom placement in units of the resonant wavelength lambda_0,
// plus the common dipole orientation (unit vector).
template <class Scalar>
struct AtomPairGeometry {
  Vector3r<Scalar> separation;        // r_2 - r_1, in lambda_0 units
  Vector3r<Scalar> dipole_direction;  // unit mu-hat

  static AtomPairGeometry validated(const Vector3r<Scalar>& separation,
                                    const Vector3r<Scalar>& dipole_direction) {
    const Scalar n = dipole_direction.norm();
    if (std::abs(n - Scalar(1)) > Scalar(1e-12))
      throw Error(Errc::ParamOutOfRange, "|dipole_direction| = " + std::to_string(double(n)),
                  double(n));
    return AtomPairGeometry{separation, dipole_direction};
  }
};

// gamma = Gamma_12/Gamma in [-1, 1]; eta = Omega_12/Gamma unbounded.
template <class Scalar>
struct CollectiveParams {
  Scalar gamma{};
  Scalar eta{};

  static CollectiveParams validated(Scalar gamma, Scalar eta) {
    if (std::abs(gamma) > Scalar(1) + Scalar(1e-12))
      throw Error(Errc::ParamOutOfRange, "|gamma| = " + std::to_string(double(gamma)),
                  double(gamma));
    return CollectiveParams{gamma, eta};
  }
};

namespace detail {

template <class Scalar>
void geometry_angles(const AtomPairGeometry<Scalar>& g, Scalar& xi, Scalar& mu_r_sq) {
  const Scalar r = g.separation.norm();
  if (r <= Scalar(0)) throw Error(Errc::ZeroSeparation, "separation is zero");
  xi = 2 * Scalar(EIGEN_PI) * r;
  const Scalar c = g.dipole_direction.dot(g.separation) / r;
  mu_r_sq = c * c;
}

}  // namespace detail

// Collective damping ratio gamma(xi) from photon exchange,
//   (3/2)[(1-(mu.r)^2) sin xi/xi + (1-3(mu.r)^2)(cos xi/xi^2 - sin xi/xi^3)].
// Tends to 1 as the atoms approach and stays in [-1, 1].
template <class Scalar>
Scalar collective_damping_ratio(const AtomPairGeometry<Scalar>& g) {
  Scalar xi, c2;
  detail::geometry_angles(g, xi, c2);
  const Scalar s = std::sin(xi), c = std::cos(xi);
  return Scalar(1.5) * ((1 - c2) * s / xi + (1 - 3 * c2) * (c / (xi * xi) - s / (xi * xi * xi)));
}

// Dipole-dipole shift eta(xi),
//   (3/4)[-(1-(mu.r)^2) cos xi/xi + (1-3(mu.r)^2)(sin xi/xi^2 + cos xi/xi^3)];
// diverges as xi^-3 for small separations. When |eta| > 1e3 the optional flag
// reports the divergence to the caller.
template <class Scalar>
Scalar dipole_dipole_shift(const AtomPairGeometry<Scalar>& g, bool* diverging = nullptr) {
  Scalar xi, c2;
  detail::geometry_angles(g, xi, c2);
  const Scalar s = std::sin(xi), c = std::cos(xi);
  const Scalar eta =
      Scalar(0.75) * (-(1 - c2) * c / xi + (1 - 3 * c2) * (s / (xi * xi) + c / (xi * xi * xi)));
  if (diverging) *diverging = std::abs(eta) > Scalar(1e3);
  return eta;
}

template <class Scalar>
CollectiveParams<Scalar> collective_params_from_geometry(const AtomPairGeometry<Scalar>& g,
                                                         bool* eta_diverging = nullptr) {
  return CollectiveParams<Scalar>::validated(collective_damping_ratio(g),
                                             dipole_dipole_shift(g, eta_diverging));
}

// State in the Dicke basis {|e>=|e1 e2>, |+>, |->, |g>=|g1 g2>} with
// |+-> = (|e1 g2> +- |g1 e2>)/sqrt(2). Only the coherences that the
// dissipative dynamics can populate are carried: c_pm = <+|rho|-> and
// c_eg = <e|rho|g>; the one-excitation coherences stay zero for every
// supported initial state (the RK4 oracle checks that).
template <class Scalar>
struct CollectiveState {
  Scalar p_ee{}, p_pp{}, p_mm{}, p_gg{};
  Complex<Scalar> c_pm{};  // <+|rho|->
  Complex<Scalar> c_eg{};  // <e|rho|g>

  static constexpr Scalar trace_tol = Scalar(1e-12);
  static constexpr Scalar psd_tol = Scalar(1e-10);

  static CollectiveState validated(Scalar p_ee, Scalar p_pp, Scalar p_mm, Scalar p_gg,
                                   Complex<Scalar> c_pm, Complex<Scalar> c_eg) {
    const Scalar tr_dev = std::abs(p_ee + p_pp + p_mm + p_gg - Scalar(1));
    if (tr_dev > trace_tol)
      throw Error(Errc::TraceNotOne, "|tr - 1| = " + std::to_string(double(tr_dev)),
                  double(tr_dev));
    for (Scalar p : {p_ee, p_pp, p_mm, p_gg})
      if (p < -psd_tol)
        throw Error(Errc::NotPositiveSemidefinite,
                    "negative population " + std::to_string(double(p)), double(p));
    return CollectiveState{p_ee, p_pp, p_mm, p_gg, c_pm, c_eg};
  }

  static CollectiveState pure_excited() { return {1, 0, 0, 0, {}, {}}; }
  static CollectiveState pure_symmetric() { return {0, 1, 0, 0, {}, {}}; }
  static CollectiveState pure_antisymmetric() { return {0, 0, 1, 0, {}, {}}; }
  static CollectiveState pure_ground() { return {0, 0, 0, 1, {}, {}}; }
};

// Closed-form solution of the master equation in the Dicke basis:
//   p_ee(tau)  = e^{-2 tau} p_ee(0)
//   p_pp(tau)  = e^{-(1+g)tau} p_pp(0) + (1+g)/(1-g) (e^{-(1+g)tau}-e^{-2tau}) p_ee(0)
//   p_mm(tau)  = e^{-(1-g)tau} p_mm(0) + (1-g)/(1+g) (e^{-(1-g)tau}-e^{-2tau}) p_ee(0)
//   c_pm(tau)  = e^{-(1+2i eta)tau} c_pm(0)      [c_pm = <+|rho|->]
//   c_eg(tau)  = e^{-tau} c_eg(0)
// with p_gg fixed by probability conservation. The feeding terms are written
// as (1+-g) tau e^{-(1+-g)tau} (1 - e^{-(1-+g)tau})/((1-+g)tau), the
// analytic-limit form that is finite at gamma = +-1 and for any tau.
template <class Scalar>
CollectiveState<Scalar> evolve_closed_form(const CollectiveState<Scalar>& s0,
                                           const CollectiveParams<Scalar>& p, Scalar tau) {
  if (tau < Scalar(0))
    throw Error(Errc::ParamOutOfRange, "tau = " + std::to_string(double(tau)), double(tau));
  const Scalar g = p.gamma;
  const Scalar e2 = std::exp(-2 * tau);
  const Scalar ep = std::exp(-(1 + g) * tau);
  const Scalar em = std::exp(-(1 - g) * tau);
  const Scalar feed_p = (1 + g) * tau * ep * detail::one_minus_exp_over((1 - g) * tau);
  const Scalar feed_m = (1 - g) * tau * em * detail::one_minus_exp_over((1 + g) * tau);

  CollectiveState<Scalar> s;
  s.p_ee = e2 * s0.p_ee;
  s.p_pp = ep * s0.p_pp + feed_p * s0.p_ee;
  s.p_mm = em * s0.p_mm + feed_m * s0.p_ee;
  s.c_pm = std::exp(-tau) * std::polar(Scalar(1), -2 * p.eta * tau) * s0.c_pm;
  s.c_eg = std::exp(-tau) * s0.c_eg;
  s.p_gg = 1 - s.p_ee - s.p_pp - s.p_mm;
  return s;
}

// Dicke basis -> product basis {|ee>, |eg>, |ge>, |gg>}.
template <class Scalar>
XState<Scalar> collective_to_product(const CollectiveState<Scalar>& s) {
  const Scalar half_sum = (s.p_pp + s.p_mm) / 2;
  const Scalar p22 = half_sum + s.c_pm.real();
  const Scalar p33 = half_sum - s.c_pm.real();
  const Complex<Scalar> c23{(s.p_pp - s.p_mm) / 2, -s.c_pm.imag()};
  const Scalar p44 = 1 - s.p_ee - p22 - p33;
  try {
    return XState<Scalar>::validated(s.p_ee, p22, p33, p44, s.c_eg, c23);
  } catch (const Error& e) {
    throw Error(Errc::ResultNotPSD, e.what(), e.magnitude());
  }
}

// Exact algebraic inverse of collective_to_product.
template <class Scalar>
CollectiveState<Scalar> product_to_collective(const XState<Scalar>& x) {
  CollectiveState<Scalar> s;
  s.p_ee = x.p11;
  s.p_pp = (x.p22 + x.p33) / 2 + x.c23.real();
  s.p_mm = (x.p22 + x.p33) / 2 - x.c23.real();
  s.p_gg = x.p44;
  s.c_pm = Complex<Scalar>{(x.p22 - x.p33) / 2, -x.c23.imag()};
  s.c_eg = x.c14;
  return s;
}

namespace detail {

template <class Scalar>
const Matrix4c<Scalar>& atomic_op(int which) {
  // 0: S1+, 1: S1-, 2: S2+, 3: S2-
  static const auto ops = [] {
    Matrix2c<Scalar> sp = Matrix2c<Scalar>::Zero();
    sp(0, 1) = Complex<Scalar>(1);
    Matrix2c<Scalar> sm = sp.adjoint();
    Matrix2c<Scalar> id = Matrix2c<Scalar>::Identity();
    return std::array<Matrix4c<Scalar>, 4>{kron<Scalar>(sp, id), kron<Scalar>(sm, id),
                                           kron<Scalar>(id, sp), kron<Scalar>(id, sm)};
  }();
  return ops[which];
}

// d rho/d tau for a raw (not necessarily unit-trace) Hermitian matrix.
// Grouped as -i eta [H, rho] - 1/2 {M + gamma H, rho} + jump terms, with
// H = S1+ S2- + S2+ S1- and M = S1+ S1- + S2+ S2- (both constant).
template <class Scalar>
Matrix4c<Scalar> lindblad_rhs_raw(const Matrix4c<Scalar>& rho, const CollectiveParams<Scalar>& p) {
  const auto& S1p = atomic_op<Scalar>(0);
  const auto& S1m = atomic_op<Scalar>(1);
  const auto& S2p = atomic_op<Scalar>(2);
  const auto& S2m = atomic_op<Scalar>(3);
  static const Matrix4c<Scalar> H = S1p * S2m + S2p * S1m;  // = P_+ - P_-
  static const Matrix4c<Scalar> M = S1p * S1m + S2p * S2m;  // excitation number

  const Matrix4c<Scalar> hr = H * rho;
  const Matrix4c<Scalar> rh = rho * H;
  const Matrix4c<Scalar> j1 = S1m * rho;  // rows of the jump operators
  const Matrix4c<Scalar> j2 = S2m * rho;

  Matrix4c<Scalar> out = Complex<Scalar>(0, -p.eta) * (hr - rh);
  out -= Scalar(0.5) * (rho * M + M * rho + p.gamma * (rh + hr));
  out += (j1 + p.gamma * j2) * S1p + (j2 + p.gamma * j1) * S2p;
  return out;
}

}  // namespace detail

// Master-equation right-hand side in units of Gamma: cross damping gamma,
// coherent dipole-dipole term with strength eta. Trace-free by construction.
template <class Scalar>
Matrix4c<Scalar> lindblad_rhs(const DensityMatrix<Scalar>& rho, const CollectiveParams<Scalar>& p) {
  return detail::lindblad_rhs_raw(rho.matrix(), p);
}

// Step count that resolves the fastest frequency (2 eta) comfortably.
inline long default_rk4_steps(double tau, double eta) {
  return static_cast<long>(std::ceil(2000.0 * std::max(1.0, tau) * std::max(1.0, std::abs(eta))));
}

// Classical fixed-step fourth-order Runge-Kutta over lindblad_rhs. Serves as
// the independent oracle for evolve_closed_form.
template <class Scalar>
DensityMatrix<Scalar> integrate_rk4(const DensityMatrix<Scalar>& rho0,
                                    const CollectiveParams<Scalar>& p, Scalar tau, long steps) {
  if (steps < 1)
    throw Error(Errc::ParamOutOfRange, "steps = " + std::to_string(steps), double(steps));
  Matrix4c<Scalar> rho = rho0.matrix();
  const Scalar h = tau / Scalar(steps);
  for (long i = 0; i < steps; ++i) {
    const Matrix4c<Scalar> k1 = detail::lindblad_rhs_raw(rho, p);
    const Matrix4c<Scalar> k2 = detail::lindblad_rhs_raw<Scalar>(rho + Scalar(0.5) * h * k1, p);
    const Matrix4c<Scalar> k3 = detail::lindblad_rhs_raw<Scalar>(rho + Scalar(0.5) * h * k2, p);
    const Matrix4c<Scalar> k4 = detail::lindblad_rhs_raw<Scalar>(rho + h * k3, p);
    rho += (h / Scalar(6)) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return validate_density(rho);
}

}  // namespace dicke
