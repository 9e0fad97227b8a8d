// Closed-form states and correlation time series for the three canonical
// initial states, plus the zero-separation (gamma -> 1) limit family.
//
// Every function here is pure algebra in (gamma, eta, tau); the generic
// pipeline (evolve_closed_form -> measures) and the RK4 integrator serve as
// oracles for all of it. gamma within 1e-6 of +-1 is evaluated at the limit,
// mirroring the analytic-limit guard of the evolution closed form.
#pragma once

#include "dicke/dynamics.hpp"
#include "dicke/measures.hpp"
#include "dicke/types.hpp"
#include "dicke/x_state.hpp"

#include <cmath>

namespace dicke {

enum class ScenarioKind { BellZeroDouble, SingleExcitation, SymmetricBell };

struct Scenario {
  ScenarioKind kind = ScenarioKind::BellZeroDouble;
  bool near_zero_separation = false;
};

// One row of the emitted time series.
template <class Scalar>
struct CorrelationReport {
  Scalar tau{};
  Scalar concurrence{};
  Scalar tqd{};
  Scalar lqu{};
  Scalar p_plus{};   // population of |+>
  Scalar p_minus{};  // population of |->
};

namespace detail {

constexpr double gamma_snap_width = 1e-6;

template <class Scalar>
Scalar snap_gamma(Scalar g) {
  if (std::abs(1 - g) < Scalar(gamma_snap_width)) return Scalar(1);
  if (std::abs(1 + g) < Scalar(gamma_snap_width)) return Scalar(-1);
  return g;
}

// Symmetric/antisymmetric populations fed from a doubly excited fraction.
template <class Scalar>
std::pair<Scalar, Scalar> fed_populations(Scalar g, Scalar tau, Scalar p_ee0) {
  const Scalar fp =
      (1 + g) * tau * std::exp(-(1 + g) * tau) * one_minus_exp_over((1 - g) * tau);
  const Scalar fm =
      (1 - g) * tau * std::exp(-(1 - g) * tau) * one_minus_exp_over((1 + g) * tau);
  return {fp * p_ee0, fm * p_ee0};
}

// Wootters concurrence of the X family with p22 = p33 = b: the branch is
// picked by the largest spin-flip candidate among
//   {d + sqrt(ac), |d - sqrt(ac)|, b + |e|, |b - |e||}.
template <class Scalar>
Scalar x_concurrence_branches(Scalar a, Scalar b, Scalar c, Scalar d, Scalar e) {
  const Scalar root_ac = std::sqrt(std::max(a * c, Scalar(0)));
  const Scalar outer = d + root_ac;
  const Scalar inner = b + std::abs(e);
  const Scalar branch = outer >= inner ? 2 * (d - b) : 2 * (std::abs(e) - root_ac);
  return clamp01(std::max(Scalar(0), branch));
}

}  // namespace detail

template <class Scalar>
CollectiveState<Scalar> initial_collective_state(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::BellZeroDouble:  // (|e1 e2> + |g1 g2>)/sqrt(2)
      return {Scalar(0.5), 0, 0, Scalar(0.5), {}, Complex<Scalar>(Scalar(0.5))};
    case ScenarioKind::SingleExcitation:  // |e1 g2>
      return {0, Scalar(0.5), Scalar(0.5), 0, Complex<Scalar>(Scalar(0.5)), {}};
    case ScenarioKind::SymmetricBell:  // |+>
      return {0, Scalar(1), 0, 0, {}, {}};
  }
  throw Error(Errc::ConfigError, "unknown scenario kind");
}

// --------------------------------------------------------------------------
// Initially maximally entangled zero/double excitation, (|ee> + |gg>)/sqrt(2)
// --------------------------------------------------------------------------

template <class Scalar>
XState<Scalar> state_bell_zero_double(Scalar gamma, Scalar tau) {
  const Scalar g = detail::snap_gamma(gamma);
  const Scalar a = std::exp(-2 * tau) / 2;
  const Scalar d = std::exp(-tau) / 2;
  const auto [pp, pm] = detail::fed_populations<Scalar>(g, tau, Scalar(0.5));
  const Scalar b = (pp + pm) / 2;
  const Scalar e = (pp - pm) / 2;
  const Scalar c = 1 - a - 2 * b;
  return XState<Scalar>{a, b, b, c, Complex<Scalar>(d), Complex<Scalar>(e)};
}

template <class Scalar>
CorrelationReport<Scalar> correlations_bell_zero_double(Scalar gamma, Scalar tau) {
  const Scalar g = detail::snap_gamma(gamma);
  CorrelationReport<Scalar> rep;
  rep.tau = tau;
  const auto [pp, pm] = detail::fed_populations<Scalar>(g, tau, Scalar(0.5));
  rep.p_plus = pp;
  rep.p_minus = pm;
  if (tau == Scalar(0)) {  // pure Bell state
    rep.concurrence = rep.tqd = rep.lqu = Scalar(1);
    return rep;
  }
  const Scalar e2 = std::exp(-2 * tau);
  const Scalar a = e2 / 2, d = std::exp(-tau) / 2;
  const Scalar b = (pp + pm) / 2, e = (pp - pm) / 2;
  const Scalar c = 1 - a - 2 * b;

  rep.concurrence = detail::x_concurrence_branches(a, b, c, d, e);

  const Scalar R11 = 2 * (std::abs(e) + d);
  const Scalar R22 = 2 * (std::abs(e) - d);
  const Scalar R33 = 1 - 4 * b;
  const Scalar R30 = e2 - 1 + 2 * b;
  rep.tqd = detail::tqd_from_components(R11, R22, R33, R30);

  // W elements; the shared T30 = T03 kills the population asymmetry term.
  const Scalar d1 = (e2 / 4) * (1 - e2 - 4 * b);
  const Scalar s1sq = (1 - 2 * b) + 2 * std::sqrt(std::max(d1, Scalar(0)));
  const Scalar s2sq = 2 * b + 2 * std::sqrt(std::max(pp * pm, Scalar(0)));
  if (s2sq <= Scalar(0)) {  // excited sector fully decayed
    rep.lqu = 0;
    return rep;
  }
  const Scalar s1s2 = std::sqrt(s1sq * s2sq);
  const Scalar w11 = s1s2 + 4 * d * std::abs(e) / s1s2;
  const Scalar w22 = s1s2 - 4 * d * std::abs(e) / s1s2;
  const Scalar w33 =
      (s1sq + s2sq) / 2 + (R30 * R30 - 4 * d * d) / (2 * s1sq) - 2 * e * e / s2sq;
  rep.lqu = detail::clamp01(1 - std::max({w11, w22, w33}));
  return rep;
}

// --------------------------------------------------------------------------
// Single-atom excitation, |e1 g2>
// --------------------------------------------------------------------------

// e^-tau cosh(g tau) and e^-tau sinh(g tau), assembled from the decaying
// exponentials so large tau never meets an overflowing cosh.
template <class Scalar>
std::pair<Scalar, Scalar> decayed_cosh_sinh(Scalar g, Scalar tau) {
  const Scalar ep = std::exp(-(1 + g) * tau);
  const Scalar em = std::exp(-(1 - g) * tau);
  return {(em + ep) / 2, (em - ep) / 2};
}

template <class Scalar>
XState<Scalar> state_single_excitation(Scalar gamma, Scalar eta, Scalar tau) {
  const Scalar g = detail::snap_gamma(gamma);
  const Scalar et = std::exp(-tau);
  const auto [dch, dsh] = decayed_cosh_sinh(g, tau);
  const Scalar co = std::cos(2 * eta * tau);
  XState<Scalar> x;
  x.p11 = 0;
  x.p22 = (dch + et * co) / 2;
  x.p33 = (dch - et * co) / 2;
  x.p44 = 1 - dch;
  x.c14 = Complex<Scalar>(0);
  x.c23 = Complex<Scalar>(-dsh, et * std::sin(2 * eta * tau)) / Scalar(2);
  return x;
}

template <class Scalar>
CorrelationReport<Scalar> correlations_single_excitation(Scalar gamma, Scalar eta, Scalar tau) {
  const Scalar g = detail::snap_gamma(gamma);
  CorrelationReport<Scalar> rep;
  rep.tau = tau;
  rep.p_plus = std::exp(-(1 + g) * tau) / 2;
  rep.p_minus = std::exp(-(1 - g) * tau) / 2;
  if (tau == Scalar(0)) {  // product state
    rep.concurrence = rep.tqd = rep.lqu = Scalar(0);
    return rep;
  }
  const Scalar et = std::exp(-tau);
  const auto [dch, dsh] = decayed_cosh_sinh(g, tau);
  const Scalar si = std::sin(2 * eta * tau), co = std::cos(2 * eta * tau);
  const Scalar amplitude = std::sqrt(dsh * dsh + et * et * si * si);
  rep.concurrence = detail::clamp01(amplitude);
  rep.tqd = detail::clamp01(amplitude);  // R11 = R22 makes the discord collapse to R11

  if (dch <= Scalar(0)) {  // excited sector fully decayed
    rep.lqu = 0;
    return rep;
  }
  // Dephased W is isotropic in the xy plane: w11 = w22.
  const Scalar q44 = 1 - dch;
  const Scalar w11 = (dch + et * co) * q44 / std::sqrt(dch * q44);
  // e^-tau / (2 cosh(g tau)) without the overflowing cosh
  const Scalar half_sech = std::exp(-(1 + std::abs(g)) * tau) /
                           (1 + std::exp(-2 * std::abs(g) * tau));
  const Scalar w33 =
      1 - dsh * std::tanh(g * tau) - (1 - std::cos(4 * eta * tau)) * half_sech;
  rep.lqu = detail::clamp01(1 - std::max(w11, w33));
  return rep;
}

// --------------------------------------------------------------------------
// Maximally entangled symmetric state, |+>
// --------------------------------------------------------------------------

template <class Scalar>
XState<Scalar> state_symmetric(Scalar gamma, Scalar tau) {
  const Scalar u = std::exp(-(1 + detail::snap_gamma(gamma)) * tau);
  XState<Scalar> x;
  x.p22 = x.p33 = u / 2;
  x.c23 = Complex<Scalar>(u / 2);
  x.p44 = 1 - u;
  return x;
}

template <class Scalar>
CorrelationReport<Scalar> correlations_symmetric(Scalar gamma, Scalar tau) {
  const Scalar u = std::exp(-(1 + detail::snap_gamma(gamma)) * tau);
  CorrelationReport<Scalar> rep;
  rep.tau = tau;
  rep.p_plus = u;
  rep.p_minus = 0;
  rep.concurrence = rep.tqd = detail::clamp01(u);
  if (tau == Scalar(0)) {
    rep.lqu = Scalar(1);
    return rep;
  }
  const Scalar w11 = std::sqrt(u * (1 - u));
  const Scalar w33 = 1 - u;
  rep.lqu = detail::clamp01(1 - std::max(w11, w33));
  return rep;
}

// --------------------------------------------------------------------------
// Two very close atoms: the gamma -> 1 limits
// --------------------------------------------------------------------------

template <class Scalar>
CorrelationReport<Scalar> correlations_near_zero_separation(const Scenario& scenario, Scalar eta,
                                                            Scalar tau) {
  if (!scenario.near_zero_separation)
    throw Error(Errc::ConfigError, "scenario is not flagged near-zero-separation");
  switch (scenario.kind) {
    case ScenarioKind::BellZeroDouble: {
      CorrelationReport<Scalar> rep;
      rep.tau = tau;
      const Scalar et = std::exp(-tau), e2 = et * et;
      rep.p_plus = tau * e2;
      rep.p_minus = 0;
      if (tau == Scalar(0)) {
        rep.concurrence = rep.tqd = rep.lqu = Scalar(1);
        return rep;
      }
      // C1 branch never dies: subradiant protection of the |gg>/|ee> coherence.
      const Scalar c1 = et * (1 - tau * et);
      const Scalar c2 = et * (tau * et - std::sqrt(2 - (1 + 2 * tau) * e2));
      rep.concurrence = detail::clamp01(std::max({Scalar(0), c1, c2}));

      // phase-removed components: R11 = 2(|e| + d), R22 = 2(|e| - d)
      const Scalar R11 = et * (1 + tau * et);
      const Scalar R22 = et * (tau * et - 1);
      const Scalar T33 = 1 - 2 * tau * e2;
      const Scalar T30 = (1 + tau) * e2 - 1;
      rep.tqd = detail::tqd_from_components(R11, R22, T33, T30);

      const Scalar A = 1 - tau * e2;
      const Scalar B = 1 - (1 + 2 * tau) * e2;
      const Scalar s1sq = A + et * std::sqrt(std::max(B, Scalar(0)));
      const Scalar s2sq = tau * e2;
      if (s2sq <= Scalar(0)) {  // excited sector fully decayed
        rep.lqu = 0;
        return rep;
      }
      const Scalar s1s2 = std::sqrt(s1sq * s2sq);
      const Scalar w11 = s1s2 + tau * et * e2 / s1s2;
      const Scalar w22 = s1s2 - tau * et * e2 / s1s2;
      const Scalar w33 =
          (s1sq + s2sq) / 2 + (T30 * T30 - e2) / (2 * s1sq) - tau * e2 / 2;
      rep.lqu = detail::clamp01(1 - std::max({w11, w22, w33}));
      return rep;
    }
    case ScenarioKind::SingleExcitation: {
      CorrelationReport<Scalar> rep;
      rep.tau = tau;
      const Scalar e2 = std::exp(-2 * tau);
      rep.p_plus = e2 / 2;
      rep.p_minus = Scalar(0.5);
      if (tau == Scalar(0)) {
        rep.concurrence = rep.tqd = rep.lqu = Scalar(0);
        return rep;
      }
      const Scalar si = std::sin(2 * eta * tau);
      const Scalar amplitude =
          std::sqrt((1 - e2) * (1 - e2) + 4 * e2 * si * si) / 2;
      rep.concurrence = rep.tqd = detail::clamp01(amplitude);

      const Scalar et = std::exp(-tau);
      const Scalar p = (1 + e2) / 2, q = (1 - e2) / 2;
      const Scalar w11 = (p + et * std::cos(2 * eta * tau)) * q / std::sqrt(p * q);
      const Scalar w33 = 1 - et * (1 + 2 * std::sinh(tau) * std::sinh(tau) -
                                   std::cos(4 * eta * tau)) /
                                 (2 * std::cosh(tau));
      rep.lqu = detail::clamp01(1 - std::max(w11, w33));
      return rep;
    }
    case ScenarioKind::SymmetricBell: {
      CorrelationReport<Scalar> rep;
      rep.tau = tau;
      const Scalar u = std::exp(-2 * tau);
      rep.p_plus = u;
      rep.p_minus = 0;
      rep.concurrence = rep.tqd = detail::clamp01(u);
      if (tau == Scalar(0)) {
        rep.lqu = Scalar(1);
        return rep;
      }
      const Scalar w11 = std::exp(-tau) * std::sqrt(1 - u);
      rep.lqu = detail::clamp01(1 - std::max(w11, 1 - u));
      return rep;
    }
  }
  throw Error(Errc::ConfigError, "unknown scenario kind");
}

// --------------------------------------------------------------------------
// Dispatch helpers
// --------------------------------------------------------------------------

template <class Scalar>
XState<Scalar> scenario_state(const Scenario& scenario, const CollectiveParams<Scalar>& p,
                              Scalar tau) {
  const Scalar g = scenario.near_zero_separation ? Scalar(1) : p.gamma;
  switch (scenario.kind) {
    case ScenarioKind::BellZeroDouble: return state_bell_zero_double(g, tau);
    case ScenarioKind::SingleExcitation: return state_single_excitation(g, p.eta, tau);
    case ScenarioKind::SymmetricBell: return state_symmetric(g, tau);
  }
  throw Error(Errc::ConfigError, "unknown scenario kind");
}

template <class Scalar>
CorrelationReport<Scalar> scenario_correlations(const Scenario& scenario,
                                                const CollectiveParams<Scalar>& p, Scalar tau) {
  if (scenario.near_zero_separation)
    return correlations_near_zero_separation(scenario, p.eta, tau);
  switch (scenario.kind) {
    case ScenarioKind::BellZeroDouble: return correlations_bell_zero_double(p.gamma, tau);
    case ScenarioKind::SingleExcitation:
      return correlations_single_excitation(p.gamma, p.eta, tau);
    case ScenarioKind::SymmetricBell: return correlations_symmetric(p.gamma, tau);
  }
  throw Error(Errc::ConfigError, "unknown scenario kind");
}

}  // namespace dicke
