#include <cmath>

#include "doctest.h"
#include "orchsim/energy.hpp"
#include "orchsim/rng.hpp"

using namespace orchsim;

TEST_CASE("constant power integrates as a rectangle") {
  EnergyLedger ledger;
  double added = ledger.account("bs0", 0, seconds(10), {{0, 100.0}});
  CHECK(added == doctest::Approx(1000.0));
  CHECK(ledger.joules("bs0") == doctest::Approx(1000.0));
}

TEST_CASE("piecewise-constant power integrates segment by segment") {
  EnergyLedger ledger;
  double added = ledger.account("bs0", 0, seconds(4),
                                {{0, 50.0}, {seconds(2), 150.0}});
  CHECK(added == doctest::Approx(400.0));

  // Fine-grained numeric cross-check: 1 ms rectangles.
  double numeric = 0.0;
  for (SimTime t = 0; t < seconds(4); t += kUsPerMs) {
    double w = t < seconds(2) ? 50.0 : 150.0;
    numeric += w * (double(kUsPerMs) / double(kUsPerSec));
  }
  CHECK(added == doctest::Approx(numeric).epsilon(1e-12));
}

TEST_CASE("readings before the interval clip to its start") {
  EnergyLedger ledger;
  double added =
      ledger.account("c", seconds(5), seconds(6), {{0, 10.0}, {seconds(3), 20.0}});
  CHECK(added == doctest::Approx(20.0));
}

TEST_CASE("reversed intervals are rejected") {
  EnergyLedger ledger;
  try {
    ledger.account("c", seconds(2), seconds(2), {{0, 1.0}});
    FAIL("expected NonMonotonicInterval");
  } catch (const SimError& e) {
    CHECK(e.code() == Errc::non_monotonic_interval);
  }
}

TEST_CASE("terabit-per-joule headline fixture") {
  EnergyLedger ledger;
  ledger.account("net", 0, seconds(1), {{0, 1.0}});  // exactly 1 J
  ledger.add_delivered_bits(1'000'000'000'000);
  CHECK(ledger.efficiency_bits_per_joule() == doctest::Approx(1e12));
}

TEST_CASE("ledger entries never decrease and totals add up") {
  EnergyLedger ledger;
  RngStream rng("energy", 3);
  double last_a = 0.0, last_b = 0.0;
  for (int i = 0; i < 100; ++i) {
    SimTime t0 = i * seconds(1);
    ledger.account("a", t0, t0 + seconds(1), {{t0, rng.uniform_real(0, 500)}});
    ledger.account("b", t0, t0 + seconds(1), {{t0, rng.uniform_real(0, 500)}});
    CHECK(ledger.joules("a") >= last_a);
    CHECK(ledger.joules("b") >= last_b);
    last_a = ledger.joules("a");
    last_b = ledger.joules("b");
    CHECK(ledger.total_joules() == doctest::Approx(last_a + last_b));
  }
}

TEST_CASE("streaming integrator matches batch accounting") {
  EnergyLedger batch;
  batch.account("c", 0, seconds(10),
                {{0, 100.0}, {seconds(3), 40.0}, {seconds(7), 250.0}});

  EnergyLedger streaming;
  PowerIntegrator integ(streaming);
  integ.set_power("c", 0, 100.0);
  integ.set_power("c", seconds(3), 40.0);
  integ.set_power("c", seconds(7), 250.0);
  integ.flush(seconds(10));

  CHECK(streaming.joules("c") == doctest::Approx(batch.joules("c")));
}

TEST_CASE("efficiency of an idle ledger is zero") {
  EnergyLedger ledger;
  CHECK(ledger.efficiency_bits_per_joule() == doctest::Approx(0.0));
}
