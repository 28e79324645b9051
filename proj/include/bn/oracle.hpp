#pragma once

#include <functional>

#include "bn/revise.hpp"

namespace bn {

// Brute-force ground truth by joint enumeration. Intentionally naive so its
// correctness is self-evident; refuses state spaces above 2^24.
namespace oracle {

// Visits every assignment consistent with the observations, in lexicographic
// order (variable 0 most significant), with log weight = chain-rule product
// plus virtual-finding weights.
void enumerate_joint(
    const Network& net, const Evidence& ev,
    const std::function<void(std::span<const int>, double)>& visit);

// Posterior P(var | e); throws Error{Contradiction} when P(e) = 0.
std::vector<double> exact_bel(const Network& net, const Evidence& ev, int var);

struct MpeResult {
  Interpretation interpretation;   // log_normalizer = log P(e)
  double log_runner_up = kNegInf;  // best score among other assignments
};
MpeResult exact_mpe(const Network& net, const Evidence& ev);

// log P(e) (sum over all consistent assignments).
double exact_log_evidence(const Network& net, const Evidence& ev);

// Unnormalized max-marginal: per state of var, the max log weight over all
// consistent completions.
std::vector<double> exact_max_marginal(const Network& net, const Evidence& ev,
                                       int var);

}  // namespace oracle
}  // namespace bn
