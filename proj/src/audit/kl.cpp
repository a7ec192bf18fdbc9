#include "covertsim/audit/kl.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "covertsim/errors.hpp"

namespace covertsim::audit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// q * log(q / p) with the 0 log 0 convention.
double xlogx_ratio(double q, double p) {
  if (q == 0.0) return 0.0;
  if (p == 0.0) return kInf;
  return q * std::log(q / p);
}
}  // namespace

double bern_kl(double q, double p) {
  if (!(q >= 0.0 && q <= 1.0 && p >= 0.0 && p <= 1.0))
    throw ConfigurationError("bern_kl: arguments must be probabilities");
  const double a = xlogx_ratio(q, p);
  const double b = xlogx_ratio(1.0 - q, 1.0 - p);
  return a + b;
}

const char* bound_case_name(BoundCase c) {
  switch (c) {
    case BoundCase::overlap: return "overlap";
    case BoundCase::tpr_above: return "tpr_above";
    case BoundCase::tpr_below: return "tpr_below";
  }
  throw InternalError("unreachable bound case");
}

KlBound certified_lower_bound(const smc::RateInterval& tpr,
                              const smc::RateInterval& fpr) {
  KlBound out;
  if (tpr.lower > fpr.upper) {
    // Rectangle minimum sits at the facing corner: bern_kl is decreasing in
    // p below q and increasing in q above p.
    out.which = BoundCase::tpr_above;
    out.nats = bern_kl(tpr.lower, fpr.upper);
  } else if (tpr.upper < fpr.lower) {
    out.which = BoundCase::tpr_below;
    out.nats = bern_kl(tpr.upper, fpr.lower);
  } else {
    // Touching intervals count as overlap: some q = p is admissible.
    out.which = BoundCase::overlap;
    out.nats = 0.0;
  }
  out.infinite = std::isinf(out.nats);
  return out;
}

const char* claim_outcome_name(ClaimOutcome o) {
  return o == ClaimOutcome::falsified ? "falsified" : "not_falsified";
}

ClaimVerdict audit_claim(const UndetectabilityClaim& claim,
                         const smc::RateInterval& tpr,
                         const smc::RateInterval& fpr, double joint_coverage) {
  if (claim.epsilon_nats < 0.0)
    throw ConfigurationError("claim epsilon must be >= 0");
  ClaimVerdict v;
  v.bound = certified_lower_bound(tpr, fpr);
  v.epsilon_nats = claim.epsilon_nats;
  v.joint_coverage = joint_coverage;
  v.runs_per_world = tpr.trials;

  std::ostringstream os;
  if (v.bound.nats > claim.epsilon_nats) {
    v.outcome = ClaimOutcome::falsified;
    os << "falsified: certified divergence lower bound " << v.bound.nats
       << " nats exceeds the claimed budget " << claim.epsilon_nats
       << " nats (statement holds with probability >= " << joint_coverage
       << ")";
  } else {
    v.outcome = ClaimOutcome::not_falsified;
    os << "not falsified: the data are consistent with the claimed budget "
       << claim.epsilon_nats << " nats; consistency is not proof of "
       << "undetectability";
  }
  if (v.bound.infinite)
    os << " [degenerate alarm counts drove the bound to infinity at n = "
       << tpr.trials << "; treat with caution]";
  v.text = os.str();
  return v;
}

PosteriorOdds posterior_odds(double prior_prob, double epsilon_nats) {
  if (!(prior_prob > 0.0 && prior_prob < 1.0))
    throw ConfigurationError("prior probability must be in (0, 1)");
  if (epsilon_nats < 0.0)
    throw ConfigurationError("epsilon must be >= 0");
  PosteriorOdds out;
  out.prior_prob = prior_prob;
  out.prior_odds = prior_prob / (1.0 - prior_prob);
  out.factor = std::exp(epsilon_nats);
  out.posterior_odds = out.prior_odds * out.factor;
  out.posterior_prob = out.posterior_odds / (1.0 + out.posterior_odds);
  return out;
}

}  // namespace covertsim::audit
