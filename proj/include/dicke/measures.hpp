// The three correlation quantifiers: Wootters concurrence, trace-distance
// quantum discord (X-state closed form + variational brute force) and local
// quantum uncertainty (X-state closed form + sphere-scan brute force).
//
// The brute-force searches evaluate the defining minimization over the full
// parameter family, so whatever they return is an upper bound on the true
// value at any budget: one-sided oracles for the closed forms.
#pragma once

#include "dicke/density_matrix.hpp"
#include "dicke/types.hpp"
#include "dicke/x_state.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <vector>

namespace dicke {

// ---------------------------------------------------------------------------
// Concurrence
// ---------------------------------------------------------------------------

// Wootters concurrence from the eigenvalues theta_i of rho rho~ with
// rho~ = (sy (x) sy) rho* (sy (x) sy). The sqrt(theta_i) are computed
// directly as the singular values of A = sqrt(rho) (sy (x) sy) sqrt(rho)^T
// (A A^dag = sqrt(rho) rho~ sqrt(rho)), which keeps the near-zero ones at
// full absolute accuracy.
template <class Scalar>
Scalar concurrence(const DensityMatrix<Scalar>& rho) {
  const Matrix4c<Scalar>& yy = pauli_kron<Scalar>(2, 2);
  const Matrix4c<Scalar> root = detail::psd_sqrt(rho.matrix());
  const Matrix4c<Scalar> a = root * yy * root.transpose();
  Eigen::JacobiSVD<Matrix4c<Scalar>> svd(a);
  const auto& s = svd.singularValues();  // descending
  return detail::clamp01(std::max(Scalar(0), s(0) - s(1) - s(2) - s(3)));
}

// ---------------------------------------------------------------------------
// Trace-distance discord
// ---------------------------------------------------------------------------

namespace detail {

// Trace-distance discord from phase-removed Fano-Bloch components, with the
// measurement on qubit 1 (R30 is that qubit's z polarization). Callers must
// supply R11 >= |R22|, which phase removal guarantees. A vanishing
// denominator collapses the expression to its limit |R11|.
template <class Scalar>
Scalar tqd_from_components(Scalar R11, Scalar R22, Scalar R33, Scalar R30) {
  const Scalar rmin2 = std::min(R11 * R11, R33 * R33);
  const Scalar rmax2 = std::max(R33 * R33, R22 * R22 + R30 * R30);
  const Scalar den = rmax2 - rmin2 + R11 * R11 - R22 * R22;
  if (den < Scalar(1e-14)) return clamp01(std::abs(R11));
  const Scalar num = R11 * R11 * rmax2 - R22 * R22 * rmin2;
  return clamp01(std::sqrt(std::max(num, Scalar(0)) / den));
}

}  // namespace detail

// Closed-form trace-distance discord of an X state (measurement on qubit 1).
// Phases are removed internally; the discord is invariant under them.
template <class Scalar>
Scalar tqd_x(const XState<Scalar>& x) {
  const XState<Scalar> r = remove_x_phases(x);
  return detail::tqd_from_components(2 * (r.c23.real() + r.c14.real()),
                                     2 * (r.c23.real() - r.c14.real()),
                                     1 - 2 * (r.p22 + r.p33), 2 * (r.p11 + r.p22) - 1);
}

namespace detail {

template <class Scalar>
Scalar trace_norm(const Matrix4c<Scalar>& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c<Scalar>> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

template <class Scalar>
Vector3r<Scalar> sphere_point(Scalar theta, Scalar phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

template <class Scalar>
Matrix2c<Scalar> qubit_state(const Vector3r<Scalar>& bloch) {
  Matrix2c<Scalar> m = Scalar(0.5) * pauli<Scalar>(0);
  for (int i = 0; i < 3; ++i) m += Scalar(0.5) * bloch(i) * pauli<Scalar>(i + 1);
  return m;
}

// Deterministic Nelder-Mead; good enough to polish the coarse-grid seeds.
template <class Scalar, class F>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>, Scalar> nelder_mead(
    F&& f, Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x0, Scalar step, int max_iter) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int n = static_cast<int>(x0.size());
  std::vector<std::pair<Scalar, Vec>> simplex;
  simplex.reserve(n + 1);
  simplex.emplace_back(f(x0), x0);
  for (int i = 0; i < n; ++i) {
    Vec v = x0;
    v(i) += step;
    simplex.emplace_back(f(v), v);
  }
  auto by_value = [](const auto& a, const auto& b) { return a.first < b.first; };
  for (int it = 0; it < max_iter; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    if (simplex.back().first - simplex.front().first < Scalar(1e-13)) break;
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i].second;
    centroid /= Scalar(n);
    const Vec& worst = simplex.back().second;
    Vec refl = centroid + (centroid - worst);
    Scalar fr = f(refl);
    if (fr < simplex.front().first) {
      Vec exp_ = centroid + 2 * (centroid - worst);
      Scalar fe = f(exp_);
      simplex.back() = fe < fr ? std::pair{fe, exp_} : std::pair{fr, refl};
    } else if (fr < simplex[n - 1].first) {
      simplex.back() = {fr, refl};
    } else {
      Vec contr = centroid + Scalar(0.5) * (worst - centroid);
      Scalar fc = f(contr);
      if (fc < simplex.back().first) {
        simplex.back() = {fc, contr};
      } else {  // shrink
        for (int i = 1; i <= n; ++i) {
          simplex[i].second = simplex[0].second + Scalar(0.5) * (simplex[i].second - simplex[0].second);
          simplex[i].first = f(simplex[i].second);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  return {simplex.front().second, simplex.front().first};
}

}  // namespace detail

// Search budget for tqd_bruteforce. The sphere grid must stay above the
// documented floor (4 x 8); everything else trades time for polish.
struct TqdBudget {
  int sphere_theta = 20;
  int sphere_phi = 40;
  int top_seeds = 6;
  int polish_iters = 500;
};

// Variational trace-distance discord: minimizes ||rho - chi||_1 over the full
// classical-quantum family chi = p P(n) (x) rho_a + (1-p) P(-n) (x) rho_b
// with P(n) the qubit-1 projectors along n. Coarse projector-sphere grid,
// block-pinch seeding of the seven remaining parameters, Nelder-Mead polish.
// Always an upper bound on the true discord.
template <class Scalar>
Scalar tqd_bruteforce(const DensityMatrix<Scalar>& rho, const TqdBudget& budget = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (budget.sphere_theta < 4 || budget.sphere_phi < 8)
    throw Error(Errc::BudgetTooSmall, "sphere grid below 4 x 8 floor",
                double(budget.sphere_theta));
  const Matrix4c<Scalar>& m = rho.matrix();

  auto objective = [&m](const Vec& q) {
    const Vector3r<Scalar> n = detail::sphere_point(q(0), q(1));
    const Scalar p = std::clamp(q(2), Scalar(0), Scalar(1));
    Vector3r<Scalar> a = q.template segment<3>(3);
    Vector3r<Scalar> b = q.template segment<3>(6);
    if (a.norm() > Scalar(1)) a /= a.norm();
    if (b.norm() > Scalar(1)) b /= b.norm();
    const Matrix2c<Scalar> proj1 = detail::qubit_state<Scalar>(n);  // (I + n.sigma)/2
    const Matrix2c<Scalar> proj2 = Matrix2c<Scalar>::Identity() - proj1;
    const Matrix4c<Scalar> chi = p * kron<Scalar>(proj1, detail::qubit_state<Scalar>(a)) +
                                 (1 - p) * kron<Scalar>(proj2, detail::qubit_state<Scalar>(b));
    return detail::trace_norm<Scalar>(m - chi);
  };

  // Pinch seed: measure along n, keep the diagonal blocks.
  auto seed_for = [&m](Scalar theta, Scalar phi) {
    Vec q(9);
    q(0) = theta;
    q(1) = phi;
    const Matrix2c<Scalar> proj1 = detail::qubit_state<Scalar>(detail::sphere_point(theta, phi));
    const Matrix4c<Scalar> pe = kron<Scalar>(proj1, Matrix2c<Scalar>::Identity());
    const Matrix4c<Scalar> po = kron<Scalar>(Matrix2c<Scalar>::Identity() - proj1,
                                             Matrix2c<Scalar>::Identity());
    auto reduced_q2 = [](const Matrix4c<Scalar>& big) {
      Matrix2c<Scalar> r;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r(i, j) = big(i, j) + big(2 + i, 2 + j);
      return r;
    };
    const Matrix2c<Scalar> blk1 = reduced_q2(Matrix4c<Scalar>(pe * m * pe));
    const Matrix2c<Scalar> blk2 = reduced_q2(Matrix4c<Scalar>(po * m * po));
    const Scalar w1 = blk1.trace().real();
    q(2) = std::clamp(w1, Scalar(0), Scalar(1));
    for (int i = 0; i < 3; ++i) {
      const auto& s = pauli<Scalar>(i + 1);
      q(3 + i) = w1 > Scalar(1e-12) ? (blk1 * s).trace().real() / w1 : Scalar(0);
      q(6 + i) = (1 - w1) > Scalar(1e-12) ? (blk2 * s).trace().real() / (1 - w1) : Scalar(0);
    }
    return q;
  };

  std::vector<std::pair<Scalar, Vec>> seeds;
  const Scalar pi = Scalar(EIGEN_PI);
  for (int i = 0; i <= budget.sphere_theta; ++i) {
    const Scalar theta = pi * Scalar(i) / Scalar(budget.sphere_theta);
    const bool pole = (i == 0 || i == budget.sphere_theta);
    const int nphi = pole ? 1 : budget.sphere_phi;
    for (int j = 0; j < nphi; ++j) {
      const Vec q = seed_for(theta, 2 * pi * Scalar(j) / Scalar(budget.sphere_phi));
      seeds.emplace_back(objective(q), q);
    }
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Scalar best = seeds.front().first;
  const int k = std::min<int>(budget.top_seeds, static_cast<int>(seeds.size()));
  for (int i = 0; i < k; ++i) {
    auto [q, v] = detail::nelder_mead(objective, seeds[i].second, Scalar(0.08),
                                      budget.polish_iters);
    best = std::min(best, v);
  }
  return detail::clamp01(best);
}

// ---------------------------------------------------------------------------
// Skew information and local quantum uncertainty
// ---------------------------------------------------------------------------

// K_A = n . sigma acting on qubit 1.
template <class Scalar>
struct LocalObservable {
  Vector3r<Scalar> bloch;

  static LocalObservable validated(const Vector3r<Scalar>& n) {
    if (std::abs(n.norm() - Scalar(1)) > Scalar(1e-12))
      throw Error(Errc::ParamOutOfRange, "|n| = " + std::to_string(double(n.norm())),
                  double(n.norm()));
    return LocalObservable{n};
  }
};

// I(rho, K) = -1/2 Tr([sqrt(rho), K (x) I]^2) = Tr(rho K^2) - Tr(sqrt(rho) K sqrt(rho) K).
template <class Scalar>
Scalar skew_information(const DensityMatrix<Scalar>& rho, const LocalObservable<Scalar>& k) {
  Matrix4c<Scalar> kop = Matrix4c<Scalar>::Zero();
  for (int i = 0; i < 3; ++i) kop += k.bloch(i) * pauli_kron<Scalar>(i + 1, 0);
  const Matrix4c<Scalar> root = detail::psd_sqrt(rho.matrix());
  const Scalar quad = (rho.matrix() * kop * kop).trace().real();
  const Scalar cross = (root * kop * root * kop).trace().real();
  return std::max(Scalar(0), quad - cross);
}

// Symmetric 3x3 matrix whose largest eigenvalue determines the LQU.
template <class Scalar>
using WMatrix = Matrix3r<Scalar>;

// w_ij = Tr(sqrt(rho) (sigma_i (x) I) sqrt(rho) (sigma_j (x) I)).
template <class Scalar>
WMatrix<Scalar> w_matrix_generic(const DensityMatrix<Scalar>& rho) {
  const Matrix4c<Scalar> root = detail::psd_sqrt(rho.matrix());
  std::array<Matrix4c<Scalar>, 3> rk;
  for (int i = 0; i < 3; ++i) rk[i] = root * pauli_kron<Scalar>(i + 1, 0);
  WMatrix<Scalar> w;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      w(i, j) = (rk[i] * rk[j]).trace().real();
      w(j, i) = w(i, j);
    }
  return w;
}

// Closed-form W of an X state with real non-negative coherences. The T30/T03
// combination enters w11 and w22 with the same sign; only the coherence part
// flips between them. Throws DegenerateBlock when a 2x2 block weight
// vanishes (pure Bell-like states); callers fall back to the generic path.
template <class Scalar>
WMatrix<Scalar> w_matrix_x(const XState<Scalar>& x) {
  const XState<Scalar> r = remove_x_phases(x);
  const auto sp = x_spectrum(r);
  const Scalar s1sq = sp.t1 + 2 * std::sqrt(std::max(sp.d1, Scalar(0)));
  const Scalar s2sq = sp.t2 + 2 * std::sqrt(std::max(sp.d2, Scalar(0)));
  if (s1sq < Scalar(1e-14) || s2sq < Scalar(1e-14))
    throw Error(Errc::DegenerateBlock,
                "block weight " + std::to_string(double(std::min(s1sq, s2sq))),
                double(std::min(s1sq, s2sq)));
  const Scalar s1 = std::sqrt(s1sq), s2 = std::sqrt(s2sq);
  const Scalar R11 = 2 * (r.c23.real() + r.c14.real());
  const Scalar R22 = 2 * (r.c23.real() - r.c14.real());
  const Scalar T30 = 2 * (r.p11 + r.p22) - 1;
  const Scalar T03 = 2 * (r.p11 + r.p33) - 1;

  WMatrix<Scalar> w = WMatrix<Scalar>::Zero();
  const Scalar shared = (T03 * T03 - T30 * T30) / (4 * s1 * s2);
  w(0, 0) = s1 * s2 + shared + (R11 * R11 - R22 * R22) / (4 * s1 * s2);
  w(1, 1) = s1 * s2 + shared + (R22 * R22 - R11 * R11) / (4 * s1 * s2);
  w(2, 2) = (s1sq + s2sq) / 2 +
            ((T30 + T03) * (T30 + T03) - (R11 - R22) * (R11 - R22)) / (8 * s1sq) +
            ((T03 - T30) * (T03 - T30) - (R11 + R22) * (R11 + R22)) / (8 * s2sq);
  return w;
}

template <class Scalar>
Scalar lqu_generic(const DensityMatrix<Scalar>& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix3r<Scalar>> es(w_matrix_generic(rho),
                                                     Eigen::EigenvaluesOnly);
  return detail::clamp01(1 - es.eigenvalues().maxCoeff());
}

template <class Scalar>
Scalar lqu_x(const XState<Scalar>& x) {
  try {
    const Matrix3r<Scalar> w = w_matrix_x(x);
    return detail::clamp01(1 - std::max({w(0, 0), w(1, 1), w(2, 2)}));
  } catch (const Error& e) {
    if (e.code() != Errc::DegenerateBlock) throw;
    return lqu_generic(x.to_density());
  }
}

// LQU = 1 - max eigenvalue of W; X-shaped inputs take the closed-form path.
template <class Scalar>
Scalar lqu(const DensityMatrix<Scalar>& rho) {
  if (auto x = as_x_state(rho)) return lqu_x(*x);
  return lqu_generic(rho);
}

// Minimizes the skew information over a Fibonacci sphere of observables and
// polishes the best direction. Independent of the W-matrix closed form.
template <class Scalar>
Scalar lqu_bruteforce(const DensityMatrix<Scalar>& rho, int sphere_points = 10000) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Scalar golden_angle = Scalar(EIGEN_PI) * (3 - std::sqrt(Scalar(5)));
  Scalar best = std::numeric_limits<Scalar>::max();
  Scalar best_theta = 0, best_phi = 0;
  for (int k = 0; k < sphere_points; ++k) {
    const Scalar z = 1 - 2 * (Scalar(k) + Scalar(0.5)) / Scalar(sphere_points);
    const Scalar theta = std::acos(std::clamp(z, Scalar(-1), Scalar(1)));
    const Scalar phi = golden_angle * Scalar(k);
    const Scalar v = skew_information(
        rho, LocalObservable<Scalar>{detail::sphere_point(theta, phi)});
    if (v < best) {
      best = v;
      best_theta = theta;
      best_phi = phi;
    }
  }
  auto objective = [&rho](const Vec& q) {
    return skew_information(rho, LocalObservable<Scalar>{detail::sphere_point(q(0), q(1))});
  };
  Vec q0(2);
  q0 << best_theta, best_phi;
  auto [q, v] = detail::nelder_mead(objective, q0, Scalar(0.02), 200);
  return detail::clamp01(std::min(best, v));
}

}  // namespace dicke
