#pragma once

#include <cstdint>
#include <string>

#include "covertsim/smc/binomial.hpp"

namespace covertsim::audit {

// Undetectability audit. Any detector is a channel from the full system
// behaviour to a one-bit alarm, so the KL divergence between its alarm
// rates in the two worlds lower-bounds the divergence between the worlds
// themselves (information processing can only lose distinguishability).
// Minimising that Bernoulli divergence over the confidence rectangle for
// (TPR, FPR) therefore gives a lower bound that holds whenever the
// intervals do.

// KL divergence between Bernoulli(q) and Bernoulli(p), in nats.
// Conventions: 0 * log(0/x) = 0; q > 0 with p = 0, or q < 1 with p = 1,
// gives +infinity. q, p in [0, 1].
double bern_kl(double q, double p);

inline double nats_to_bits(double nats) { return nats / 0.6931471805599453; }

enum class BoundCase {
  overlap,    // intervals share a point (touching counts): bound 0
  tpr_above,  // TPR interval entirely above FPR interval
  tpr_below,  // TPR interval entirely below FPR interval
};

const char* bound_case_name(BoundCase c);

struct KlBound {
  double nats = 0.0;  // may be +infinity when a closed interval endpoint
                      // pins p to 0 or 1 away from q
  BoundCase which = BoundCase::overlap;
  bool infinite = false;
};

// min over q in [tpr], p in [fpr] of bern_kl(q, p). Closed convex problem:
// overlap gives 0, otherwise the nearest endpoints realise the minimum.
KlBound certified_lower_bound(const smc::RateInterval& tpr,
                              const smc::RateInterval& fpr);

// A claim "the worlds are within epsilon nats at this horizon".
struct UndetectabilityClaim {
  double epsilon_nats = 0.0;
  double horizon = 0.0;  // time units; informational
};

enum class ClaimOutcome {
  falsified,       // certified bound strictly exceeds the claim
  not_falsified,   // consistent with the claim; NOT a proof of it
};

const char* claim_outcome_name(ClaimOutcome o);

struct ClaimVerdict {
  ClaimOutcome outcome = ClaimOutcome::not_falsified;
  KlBound bound;
  double epsilon_nats = 0.0;
  double joint_coverage = 0.0;
  std::uint64_t runs_per_world = 0;
  // One-line human reading; stresses that non-falsification is consistency,
  // not proof.
  std::string text;
};

ClaimVerdict audit_claim(const UndetectabilityClaim& claim,
                         const smc::RateInterval& tpr,
                         const smc::RateInterval& fpr, double joint_coverage);

// Bayesian reading of a divergence budget: with prior P(hidden system
// present) and a bound of epsilon nats on what any monitor can extract,
// posterior odds rise by at most a factor e^epsilon.
struct PosteriorOdds {
  double prior_prob = 0.0;
  double prior_odds = 0.0;
  double factor = 1.0;  // e^epsilon
  double posterior_odds = 0.0;
  double posterior_prob = 0.0;
};

PosteriorOdds posterior_odds(double prior_prob, double epsilon_nats);

}  // namespace covertsim::audit
