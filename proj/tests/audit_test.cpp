#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "covertsim/audit/kl.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/random.hpp"

using namespace covertsim;
using namespace covertsim::audit;

namespace {

smc::RateInterval interval(double lo, double hi) {
  smc::RateInterval r;
  r.lower = lo;
  r.upper = hi;
  r.successes = 0;
  r.trials = 100;
  r.coverage = 0.975;
  return r;
}

// Independent oracle for the rectangle minimisation: for fixed q the inner
// minimum over p is at the clamp of q into [fpr], because bern_kl is convex
// in p with its zero at p = q; the outer minimum is then scanned on a fine
// q-grid plus the interval endpoints.
double grid_lower_bound(double tl, double tu, double fl, double fu) {
  double best = std::numeric_limits<double>::infinity();
  auto eval = [&](double q) {
    const double p = std::clamp(q, fl, fu);
    best = std::min(best, bern_kl(q, p));
  };
  const int steps = 4000;
  for (int i = 0; i <= steps; ++i)
    eval(tl + (tu - tl) * static_cast<double>(i) / steps);
  eval(tl);
  eval(tu);
  return best;
}

}  // namespace

TEST_CASE("Bernoulli divergence oracle values") {
  for (double q : {0.0, 0.1, 0.5, 0.9, 1.0})
    CHECK(bern_kl(q, q) == 0.0);

  // 0.5 ln 2 + 0.5 ln(2/3)
  CHECK(bern_kl(0.5, 0.25) == doctest::Approx(0.14384103622589045).epsilon(1e-12));
  // ln 2
  CHECK(bern_kl(0.0, 0.5) == doctest::Approx(0.6931471805599453).epsilon(1e-12));
  CHECK(bern_kl(1.0, 0.5) == doctest::Approx(0.6931471805599453).epsilon(1e-12));
  // Mass where the reference has none: infinitely distinguishable.
  CHECK(std::isinf(bern_kl(0.3, 0.0)));
  CHECK(std::isinf(bern_kl(0.7, 1.0)));
  // Degenerate-on-degenerate is still zero.
  CHECK(bern_kl(0.0, 0.0) == 0.0);
  CHECK(bern_kl(1.0, 1.0) == 0.0);
  // One-sided degeneracies that remain finite.
  CHECK(bern_kl(0.0, 0.3) == doctest::Approx(-std::log1p(-0.3)).epsilon(1e-12));

  CHECK_THROWS_AS(bern_kl(-0.1, 0.5), ConfigurationError);
  CHECK_THROWS_AS(bern_kl(0.5, 1.1), ConfigurationError);

  CHECK(nats_to_bits(0.6931471805599453) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certified bound: the three rectangle cases") {
  SUBCASE("alarm rate certifiably higher in the covert world") {
    const KlBound b =
        certified_lower_bound(interval(0.6, 0.8), interval(0.1, 0.2));
    CHECK(b.which == BoundCase::tpr_above);
    // Facing corner: bern_kl(0.6, 0.2).
    CHECK(b.nats == doctest::Approx(0.38190850097688767).epsilon(1e-12));
    CHECK_FALSE(b.infinite);
  }
  SUBCASE("alarm rate certifiably lower in the covert world") {
    const KlBound b =
        certified_lower_bound(interval(0.0, 0.1), interval(0.3, 0.4));
    CHECK(b.which == BoundCase::tpr_below);
    // Facing corner: bern_kl(0.1, 0.3).
    CHECK(b.nats == doctest::Approx(0.11632175658600478).epsilon(1e-12));
  }
  SUBCASE("overlapping rectangles certify nothing") {
    const KlBound b =
        certified_lower_bound(interval(0.2, 0.5), interval(0.4, 0.7));
    CHECK(b.which == BoundCase::overlap);
    CHECK(b.nats == 0.0);
  }
  SUBCASE("touching at a point still counts as overlap") {
    const KlBound b =
        certified_lower_bound(interval(0.2, 0.5), interval(0.5, 0.7));
    CHECK(b.which == BoundCase::overlap);
    CHECK(b.nats == 0.0);
  }
  SUBCASE("nesting is overlap too") {
    const KlBound b =
        certified_lower_bound(interval(0.3, 0.4), interval(0.2, 0.6));
    CHECK(b.which == BoundCase::overlap);
    CHECK(b.nats == 0.0);
  }
  SUBCASE("a degenerate silent baseline drives the bound to infinity") {
    const KlBound b =
        certified_lower_bound(interval(0.5, 0.9), interval(0.0, 0.0));
    CHECK(b.which == BoundCase::tpr_above);
    CHECK(b.infinite);
    CHECK(std::isinf(b.nats));
  }
}

TEST_CASE("certified bound agrees with the clamp-and-grid oracle") {
  RandomStream rng(31337);
  int above = 0, below = 0, overlap = 0;
  for (int trial = 0; trial < 300; ++trial) {
    double t1 = rng.next_unit(), t2 = rng.next_unit();
    double f1 = rng.next_unit(), f2 = rng.next_unit();
    // Narrow some intervals so the disjoint cases actually occur.
    if (trial % 3 == 0) {
      t2 = std::min(1.0, t1 + 0.1 * rng.next_unit());
      f2 = std::min(1.0, f1 + 0.1 * rng.next_unit());
    }
    const double tl = std::min(t1, t2), tu = std::max(t1, t2);
    const double fl = std::min(f1, f2), fu = std::max(f1, f2);

    const KlBound fast = certified_lower_bound(interval(tl, tu),
                                               interval(fl, fu));
    const double slow = grid_lower_bound(tl, tu, fl, fu);
    if (std::isinf(slow)) {
      CHECK(fast.infinite);
    } else {
      CHECK(fast.nats == doctest::Approx(slow).epsilon(1e-9));
    }
    switch (fast.which) {
      case BoundCase::tpr_above: ++above; break;
      case BoundCase::tpr_below: ++below; break;
      case BoundCase::overlap: ++overlap; break;
    }
  }
  // All three geometries must have been exercised.
  CHECK(above > 10);
  CHECK(below > 10);
  CHECK(overlap > 10);
}

TEST_CASE("binary coarsening never beats the full divergence") {
  // Any detector is a coarsening of the world distribution, so the full
  // KL between two finite distributions must dominate the Bernoulli KL of
  // any event's probabilities. Random distributions, random events.
  RandomStream rng(271828);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = static_cast<int>(rng.next_int(2, 6));
    std::vector<double> p(static_cast<std::size_t>(m)),
        q(static_cast<std::size_t>(m));
    double ps = 0.0, qs = 0.0;
    for (int i = 0; i < m; ++i) {
      p[static_cast<std::size_t>(i)] = 0.05 + rng.next_unit();
      q[static_cast<std::size_t>(i)] = 0.05 + rng.next_unit();
      ps += p[static_cast<std::size_t>(i)];
      qs += q[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < m; ++i) {
      p[static_cast<std::size_t>(i)] /= ps;
      q[static_cast<std::size_t>(i)] /= qs;
    }
    double full = 0.0;
    for (int i = 0; i < m; ++i)
      full += q[static_cast<std::size_t>(i)] *
              std::log(q[static_cast<std::size_t>(i)] /
                       p[static_cast<std::size_t>(i)]);

    // Every nonempty proper subset as the alarm event for small m; a random
    // one otherwise.
    for (int mask = 1; mask < (1 << m) - 1; ++mask) {
      double qa = 0.0, pa = 0.0;
      for (int i = 0; i < m; ++i) {
        if (mask & (1 << i)) {
          qa += q[static_cast<std::size_t>(i)];
          pa += p[static_cast<std::size_t>(i)];
        }
      }
      qa = std::clamp(qa, 0.0, 1.0);
      pa = std::clamp(pa, 0.0, 1.0);
      CHECK(full + 1e-9 >= bern_kl(qa, pa));
    }
  }
}

TEST_CASE("claims are judged against the certified bound") {
  const auto tpr = interval(0.6, 0.8);
  const auto fpr = interval(0.1, 0.2);
  // Certified bound here is 0.3819 nats.

  SUBCASE("a tight claim is falsified") {
    const ClaimVerdict v =
        audit_claim(UndetectabilityClaim{0.2, 60'000.0}, tpr, fpr, 0.95);
    CHECK(v.outcome == ClaimOutcome::falsified);
    CHECK(v.bound.nats > v.epsilon_nats);
    CHECK(v.text.find("falsified") == 0);
    CHECK(v.text.find("0.95") != std::string::npos);
  }
  SUBCASE("a loose claim survives, with the caveat spelled out") {
    const ClaimVerdict v =
        audit_claim(UndetectabilityClaim{0.5, 60'000.0}, tpr, fpr, 0.95);
    CHECK(v.outcome == ClaimOutcome::not_falsified);
    CHECK(v.text.find("not falsified") == 0);
    CHECK(v.text.find("consistency is not proof") != std::string::npos);
  }
  SUBCASE("equality is not falsification; the inequality is strict") {
    const KlBound b = certified_lower_bound(tpr, fpr);
    const ClaimVerdict v =
        audit_claim(UndetectabilityClaim{b.nats, 0.0}, tpr, fpr, 0.95);
    CHECK(v.outcome == ClaimOutcome::not_falsified);
  }
  SUBCASE("an infinite bound is flagged as degenerate") {
    const ClaimVerdict v = audit_claim(UndetectabilityClaim{1.0, 0.0}, tpr,
                                       interval(0.0, 0.0), 0.95);
    CHECK(v.outcome == ClaimOutcome::falsified);
    CHECK(v.text.find("treat with caution") != std::string::npos);
  }
  SUBCASE("negative budgets are rejected") {
    CHECK_THROWS_AS(audit_claim(UndetectabilityClaim{-0.1, 0.0}, tpr, fpr,
                                0.95),
                    ConfigurationError);
  }
}

TEST_CASE("posterior odds under a divergence budget") {
  // A 1% prior and a 1-nat budget: odds rise by e, probability to ~2.7%.
  const PosteriorOdds po = posterior_odds(0.01, 1.0);
  CHECK(po.prior_odds == doctest::Approx(0.01 / 0.99).epsilon(1e-12));
  CHECK(po.factor == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(po.posterior_prob == doctest::Approx(0.0267236).epsilon(1e-4));

  // Zero budget leaves the prior untouched.
  const PosteriorOdds id = posterior_odds(0.25, 0.0);
  CHECK(id.posterior_prob == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(posterior_odds(0.0, 1.0), ConfigurationError);
  CHECK_THROWS_AS(posterior_odds(1.0, 1.0), ConfigurationError);
  CHECK_THROWS_AS(posterior_odds(0.5, -1.0), ConfigurationError);
}

TEST_CASE("names for reporting") {
  CHECK(std::string(bound_case_name(BoundCase::overlap)) == "overlap");
  CHECK(std::string(bound_case_name(BoundCase::tpr_above)) == "tpr_above");
  CHECK(std::string(bound_case_name(BoundCase::tpr_below)) == "tpr_below");
  CHECK(std::string(claim_outcome_name(ClaimOutcome::falsified)) ==
        "falsified");
  CHECK(std::string(claim_outcome_name(ClaimOutcome::not_falsified)) ==
        "not_falsified");
}
