#include "dicke/scenarios.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

#include <cmath>

using namespace dicke;
using testutil::max_abs;

namespace {

constexpr double kGoldenTqdA = 0.617124885372;  // BF-confirmed, gamma=0.9 tau=0.5
constexpr double kNearZeroTqdTau1 = 0.503214724408;

XState<double> pipeline_state(ScenarioKind kind, double g, double eta, double tau) {
  return collective_to_product(
      evolve_closed_form(initial_collective_state<double>(kind), {g, eta}, tau));
}

}  // namespace

TEST_CASE("state_bell_zero_double: initial condition and worked entries") {
  auto x0 = state_bell_zero_double(0.9, 0.0);
  CHECK(x0.p11 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x0.p44 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x0.c14.real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(x0.p22 == doctest::Approx(0.0).epsilon(1e-14));

  auto x = state_bell_zero_double(0.9, 0.5);
  CHECK(x.p11 == doctest::Approx(0.1839).epsilon(1e-3));
  CHECK(x.p22 == doctest::Approx(0.0973).epsilon(1e-3));
  CHECK(x.p44 == doctest::Approx(0.6216).epsilon(1e-3));
  CHECK(x.c14.real() == doctest::Approx(0.3033).epsilon(1e-3));
  CHECK(x.c23.real() == doctest::Approx(0.0819).epsilon(1e-3));

  // literal b(tau), e(tau) written through Z and delta
  const double g = 0.9, tau = 0.5;
  const double Z = std::cosh(g * tau) - std::exp(-tau);
  const double delta = (1 + g * g) * Z - 2 * g * std::sinh(g * tau);
  CHECK(x.p22 == doctest::Approx(std::exp(-tau) * delta / (2 * (1 - g * g))).epsilon(1e-12));
  CHECK(x.c23.real() ==
        doctest::Approx(std::exp(-tau) / (2 * (1 - g * g)) *
                        (2 * g * Z - (1 + g * g) * std::sinh(g * tau)))
            .epsilon(1e-12));

  // gamma = 0 decouples the atoms: b = (e^-tau/2)(1 - e^-tau), e = 0
  for (double t : {0.3, 1.0, 2.5}) {
    auto xu = state_bell_zero_double(0.0, t);
    CHECK(xu.p22 ==
          doctest::Approx((std::exp(-t) / 2) * (1 - std::exp(-t))).epsilon(1e-13));
    CHECK(std::abs(xu.c23) < 1e-15);
  }
}

TEST_CASE("scenario states match the evolution pipeline to 1e-12") {
  for (double g : {-0.9, -0.3, 0.0, 0.5, 0.9})
    for (double eta : {0.0, 0.9})
      for (double tau : {0.0, 0.2, 0.7, 1.9, 5.0, 9.5}) {
        CHECK(max_abs(state_bell_zero_double(g, tau).to_matrix() -
                      pipeline_state(ScenarioKind::BellZeroDouble, g, eta, tau).to_matrix()) <
              1e-12);
        CHECK(max_abs(state_single_excitation(g, eta, tau).to_matrix() -
                      pipeline_state(ScenarioKind::SingleExcitation, g, eta, tau).to_matrix()) <
              1e-12);
        CHECK(max_abs(state_symmetric(g, tau).to_matrix() -
                      pipeline_state(ScenarioKind::SymmetricBell, g, eta, tau).to_matrix()) <
              1e-12);
      }
}

TEST_CASE("correlations_bell_zero_double: boundary, golden values and revival") {
  auto r0 = correlations_bell_zero_double(0.9, 0.0);
  CHECK(r0.concurrence == 1.0);
  CHECK(r0.tqd == 1.0);
  CHECK(r0.lqu == 1.0);

  auto r = correlations_bell_zero_double(0.9, 0.5);
  CHECK(r.concurrence == doctest::Approx(0.412).epsilon(1e-3));
  CHECK(r.tqd == doctest::Approx(kGoldenTqdA).epsilon(1e-10));

  // sudden death followed by revival at gamma = 0.9
  bool died = false, revived = false;
  double death_tau = 0;
  for (double tau = 0.0; tau <= 10.0; tau += 0.002) {
    const double c = correlations_bell_zero_double(0.9, tau).concurrence;
    if (!died && c == 0.0) {
      died = true;
      death_tau = tau;
    }
    if (died && c > 0.01) revived = true;
  }
  CHECK(died);
  CHECK(revived);
  CHECK(death_tau > 3.0);
}

TEST_CASE("scenario closed-form measures equal the generic pipeline") {
  for (double g : {-0.9, -0.3, 0.0, 0.6, 0.9})
    for (double eta : {0.0, 0.9})
      for (double tau : {0.0, 0.15, 0.5, 1.2, 3.0, 7.5}) {
        {
          auto rep = correlations_bell_zero_double(g, tau);
          auto x = pipeline_state(ScenarioKind::BellZeroDouble, g, eta, tau);
          CHECK(std::abs(rep.concurrence - concurrence(x.to_density())) < 1e-10);
          CHECK(std::abs(rep.tqd - tqd_x(x)) < 1e-10);
          CHECK(std::abs(rep.lqu - lqu(x.to_density())) < 1e-10);
        }
        {
          auto rep = correlations_single_excitation(g, eta, tau);
          auto x = pipeline_state(ScenarioKind::SingleExcitation, g, eta, tau);
          CHECK(std::abs(rep.concurrence - concurrence(x.to_density())) < 1e-10);
          CHECK(std::abs(rep.tqd - tqd_x(x)) < 1e-10);
          CHECK(std::abs(rep.lqu - lqu(x.to_density())) < 1e-10);
        }
        {
          auto rep = correlations_symmetric(g, tau);
          auto x = pipeline_state(ScenarioKind::SymmetricBell, g, eta, tau);
          CHECK(std::abs(rep.concurrence - concurrence(x.to_density())) < 1e-10);
          CHECK(std::abs(rep.tqd - tqd_x(x)) < 1e-10);
          CHECK(std::abs(rep.lqu - lqu(x.to_density())) < 1e-10);
        }
      }
}

TEST_CASE("pipeline equivalence survives fast dipole-dipole oscillation (eta = 5)") {
  for (double g : {-0.9, -0.3, 0.0, 0.6})
    for (double tau = 0.0; tau <= 10.0; tau += 0.5) {
      auto rep = correlations_single_excitation(g, 5.0, tau);
      auto x = pipeline_state(ScenarioKind::SingleExcitation, g, 5.0, tau);
      CHECK(max_abs(state_single_excitation(g, 5.0, tau).to_matrix() - x.to_matrix()) < 1e-12);
      CHECK(std::abs(rep.concurrence - concurrence(x.to_density())) < 1e-10);
      CHECK(std::abs(rep.tqd - tqd_x(x)) < 1e-10);
      CHECK(std::abs(rep.lqu - lqu(x.to_density())) < 1e-10);
    }
  // one RK4 trajectory resolving the 2 eta frequency
  const CollectiveParams<double> p{0.6, 5.0};
  auto rk = collective_to_product(initial_collective_state<double>(ScenarioKind::SingleExcitation))
                .to_density();
  const long seg = default_rk4_steps(0.5, 5.0);
  for (int i = 1; i <= 10; ++i) {
    rk = integrate_rk4(rk, p, 0.5, seg);
    CHECK(max_abs(rk.matrix() - state_single_excitation(0.6, 5.0, 0.5 * i).to_matrix()) < 1e-7);
  }
}

TEST_CASE("correlations_single_excitation: boundary, golden value, identities") {
  auto r0 = correlations_single_excitation(0.5, 0.9, 0.0);
  CHECK(r0.concurrence == 0.0);
  CHECK(r0.tqd == 0.0);
  CHECK(r0.lqu == 0.0);

  auto r = correlations_single_excitation(0.5, 0.9, 1.0);
  CHECK(r.concurrence == doctest::Approx(0.4063).epsilon(1e-4));
  CHECK(r.concurrence == doctest::Approx(0.406322722130).epsilon(1e-12));

  for (double g : {-0.7, 0.0, 0.5, 0.9})
    for (double eta : {0.0, 0.9, 5.0})
      for (double tau : {0.0, 0.3, 1.1, 4.0, 8.0}) {
        auto rep = correlations_single_excitation(g, eta, tau);
        CHECK(std::abs(rep.concurrence - rep.tqd) < 1e-12);  // C = D_T identically
        // superradiant/subradiant populations carry constant prefactor 1/2
        CHECK(rep.p_plus * std::exp((1 + g) * tau) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rep.p_minus * std::exp((1 - g) * tau) == doctest::Approx(0.5).epsilon(1e-12));
      }

  // gamma = eta = 0: the excitation decays with no correlation generation
  for (double tau : {0.2, 1.0, 3.3}) {
    CHECK(correlations_single_excitation(0.0, 0.0, tau).concurrence == 0.0);
    auto x = state_single_excitation(0.0, 0.0, tau);
    CHECK(x.p22 == doctest::Approx(std::exp(-tau)).epsilon(1e-14));
    CHECK(x.p33 == doctest::Approx(0.0).epsilon(1e-14));
  }

  // subradiant tail pins the concurrence to the |-> population
  for (double eta : {0.0, 0.9})
    for (double tau = 6.0; tau <= 10.0; tau += 0.25) {
      auto rep = correlations_single_excitation(0.9, eta, tau);
      CHECK(std::abs(rep.concurrence / rep.p_minus - 1.0) < 0.05);
    }
}

TEST_CASE("correlations_symmetric: boundary values, identities, monotonicity") {
  auto r0 = correlations_symmetric(0.5, 0.0);
  CHECK(r0.concurrence == 1.0);
  CHECK(r0.lqu == 1.0);

  auto r = correlations_symmetric(0.5, 1.0);
  CHECK(r.concurrence == doctest::Approx(std::exp(-1.5)).epsilon(1e-13));
  CHECK(r.tqd == doctest::Approx(0.2231).epsilon(1e-4));

  // gamma = 0, tau = ln 2: C = 1/2 and the two W branches tie at 1/2
  auto rh = correlations_symmetric(0.0, std::log(2.0));
  CHECK(rh.concurrence == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(rh.lqu == doctest::Approx(0.5).epsilon(1e-13));

  for (double g : {-0.9, 0.0, 0.5, 0.9})
    for (double tau : {0.0, 0.4, 1.3, 6.0})
      CHECK(std::abs(correlations_symmetric(g, tau).concurrence -
                     correlations_symmetric(g, tau).tqd) < 1e-12);

  // strictly decreasing in tau, and in gamma pointwise for tau > 0
  double prev = 2;
  for (double tau = 0; tau <= 10.0; tau += 0.1) {
    const double c = correlations_symmetric(0.5, tau).concurrence;
    CHECK(c < prev);
    prev = c;
  }
  for (double tau : {0.1, 1.0, 5.0}) {
    double prev_g = 2;
    for (double g = -0.9; g <= 0.91; g += 0.3) {
      const double c = correlations_symmetric(g, tau).concurrence;
      CHECK(c < prev_g);
      prev_g = c;
    }
  }
}

TEST_CASE("near-zero-separation formulas: worked values") {
  Scenario bell{ScenarioKind::BellZeroDouble, true};
  Scenario single{ScenarioKind::SingleExcitation, true};
  Scenario symmetric{ScenarioKind::SymmetricBell, true};

  auto rb = correlations_near_zero_separation(bell, 0.0, 1.0);
  CHECK(rb.tqd == doctest::Approx(std::exp(-1.0) * (1 + std::exp(-1.0))).epsilon(1e-13));
  CHECK(rb.tqd == doctest::Approx(kNearZeroTqdTau1).epsilon(1e-11));
  // the coherence branch of the concurrence stays alive at gamma -> 1
  CHECK(rb.concurrence ==
        doctest::Approx(std::exp(-1.0) * (1 - std::exp(-1.0))).epsilon(1e-13));

  auto rs0 = correlations_near_zero_separation(symmetric, 0.0, 0.0);
  CHECK(rs0.concurrence == 1.0);
  CHECK(rs0.tqd == 1.0);
  CHECK(rs0.lqu == 1.0);
  auto rs = correlations_near_zero_separation(symmetric, 0.0, 0.8);
  CHECK(rs.concurrence == doctest::Approx(std::exp(-1.6)).epsilon(1e-13));
  CHECK(rs.tqd == rs.concurrence);

  auto rx = correlations_near_zero_separation(single, 0.9, 1.0);
  const double e2 = std::exp(-2.0);
  CHECK(rx.concurrence ==
        doctest::Approx(0.5 * std::sqrt((1 - e2) * (1 - e2) +
                                        4 * e2 * std::pow(std::sin(1.8), 2)))
            .epsilon(1e-13));

  Scenario not_flagged{ScenarioKind::SymmetricBell, false};
  CHECK_THROWS_AS(correlations_near_zero_separation(not_flagged, 0.0, 1.0), Error);
}

TEST_CASE("near-zero formulas are the gamma -> 1 limits of the general ones") {
  const double g = 1.0 - 1e-7;  // inside the snap window
  Scenario bell{ScenarioKind::BellZeroDouble, true};
  Scenario single{ScenarioKind::SingleExcitation, true};
  Scenario symmetric{ScenarioKind::SymmetricBell, true};
  for (double eta : {0.0, 0.9})
    for (double tau = 0.0; tau <= 10.0; tau += 0.125) {
      auto nb = correlations_near_zero_separation(bell, eta, tau);
      auto gb = correlations_bell_zero_double(g, tau);
      CHECK(std::abs(nb.concurrence - gb.concurrence) < 1e-8);
      CHECK(std::abs(nb.tqd - gb.tqd) < 1e-8);
      CHECK(std::abs(nb.lqu - gb.lqu) < 1e-8);

      auto ns = correlations_near_zero_separation(single, eta, tau);
      auto gs = correlations_single_excitation(g, eta, tau);
      CHECK(std::abs(ns.concurrence - gs.concurrence) < 1e-8);
      CHECK(std::abs(ns.tqd - gs.tqd) < 1e-8);
      CHECK(std::abs(ns.lqu - gs.lqu) < 1e-8);

      auto ny = correlations_near_zero_separation(symmetric, eta, tau);
      auto gy = correlations_symmetric(g, tau);
      CHECK(std::abs(ny.concurrence - gy.concurrence) < 1e-8);
      CHECK(std::abs(ny.lqu - gy.lqu) < 1e-8);
    }
}

TEST_CASE("near-zero formulas match the generic pipeline at gamma = 1 exactly") {
  Scenario scenarios[] = {{ScenarioKind::BellZeroDouble, true},
                          {ScenarioKind::SingleExcitation, true},
                          {ScenarioKind::SymmetricBell, true}};
  for (const auto& sc : scenarios)
    for (double tau : {0.0, 0.3, 1.0, 2.4, 6.0}) {
      auto rep = correlations_near_zero_separation(sc, 0.9, tau);
      auto x = pipeline_state(sc.kind, 1.0, 0.9, tau);
      CHECK(std::abs(rep.concurrence - concurrence(x.to_density())) < 1e-10);
      CHECK(std::abs(rep.tqd - tqd_x(x)) < 1e-10);
      CHECK(std::abs(rep.lqu - lqu(x.to_density())) < 1e-10);
    }
}

TEST_CASE("gamma snap window evaluates at the limit") {
  for (double tau : {0.3, 1.7}) {
    CHECK(correlations_symmetric(1.0 - 1e-9, tau).concurrence ==
          correlations_symmetric(1.0, tau).concurrence);
    CHECK(max_abs(state_single_excitation(1.0 - 1e-8, 0.9, tau).to_matrix() -
                  state_single_excitation(1.0, 0.9, tau).to_matrix()) == 0.0);
  }
  // outside the window nothing is snapped
  CHECK(correlations_symmetric(1.0 - 1e-5, 1.0).concurrence !=
        correlations_symmetric(1.0, 1.0).concurrence);
}

TEST_CASE("closed forms stay finite far beyond the decay time") {
  Scenario nz_bell{ScenarioKind::BellZeroDouble, true};
  for (double tau : {50.0, 400.0, 2000.0})
    for (double g : {-0.999, -0.5, 0.0, 0.9, 1.0}) {
      for (auto kind : {ScenarioKind::BellZeroDouble, ScenarioKind::SingleExcitation,
                        ScenarioKind::SymmetricBell}) {
        auto r = scenario_correlations(Scenario{kind, false}, {g, 0.9}, tau);
        for (double v : {r.concurrence, r.tqd, r.lqu, r.p_plus, r.p_minus}) {
          CHECK(std::isfinite(v));
          CHECK(v >= 0.0);
        }
      }
      auto s = evolve_closed_form(initial_collective_state<double>(ScenarioKind::BellZeroDouble),
                                  {g, 0.9}, tau);
      CHECK(std::isfinite(s.p_gg));
    }
  auto r = correlations_near_zero_separation(nz_bell, 0.0, 500.0);
  CHECK(std::isfinite(r.lqu));
}

TEST_CASE("scenario dispatch helpers route near-zero and general runs") {
  CollectiveParams<double> p{0.6, 0.9};
  Scenario general{ScenarioKind::SingleExcitation, false};
  CHECK(scenario_correlations(general, p, 1.0).concurrence ==
        correlations_single_excitation(0.6, 0.9, 1.0).concurrence);
  Scenario nz{ScenarioKind::SingleExcitation, true};
  CHECK(scenario_correlations(nz, p, 1.0).concurrence ==
        correlations_near_zero_separation(nz, 0.9, 1.0).concurrence);
  CHECK(max_abs(scenario_state(nz, p, 1.0).to_matrix() -
                state_single_excitation(1.0, 0.9, 1.0).to_matrix()) == 0.0);
}
