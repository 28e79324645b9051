#pragma once

#include <optional>
#include <vector>

#include "bn/propagation.hpp"

namespace bn {

// A full assignment w* with its unnormalized score. log_score is
// log P(w*, e) including virtual-finding weights; P(w*|e) is only available
// when a normalizer is supplied (oracle or conditioning layer).
struct Interpretation {
  std::vector<int> assignment;  // state index per variable
  double log_score = kNegInf;
  // Sum of the pivots' unnormalized BEL* maxima; agrees with log_score at
  // any true equilibrium.
  double log_pivot_score = kNegInf;
  std::optional<double> log_normalizer;

  double posterior() const;  // requires log_normalizer
};

// log of prod_i P(x_i | parents) times the virtual-finding weights; the
// assignment must be consistent with the observations.
double chain_rule_log_score(const Network& net, const Evidence& ev,
                            std::span<const int> assignment);

// Viterbi-style backtracking from each component pivot through the
// equilibrium store. Ties break toward the lowest state index. Also checks
// that the summed pivot BEL* maxima reproduce the chain-rule score.
Interpretation extract_mpe(const Network& net, const Evidence& ev,
                           const PropagationResult& run);

struct ReviseResult {
  PropagationResult run;
  Interpretation interpretation;
};

// Convenience: max-product propagation plus extraction in one call.
ReviseResult revise(const Network& net, const Evidence& ev,
                    bool want_trace = false);

}  // namespace bn
