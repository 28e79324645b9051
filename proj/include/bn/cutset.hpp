#pragma once

#include "bn/revise.hpp"

namespace bn {

// Cycle-cutset handling for multiply-connected networks: clamp a small set
// of variables, solve each instantiation by max-product propagation, and
// compare the candidates' chain-rule scores directly.

// Greedy heuristic: while cycles remain, clamp the highest-degree node whose
// clamping removes at least one independent cycle (ties by lower id).
// Observed variables are already clamped for free. Returns an empty cutset
// on singly-connected input; the result is always validated against the
// clamped topology.
std::vector<int> find_cutset(const Network& net, const Evidence& ev);

struct CutsetPlan {
  std::vector<int> cutset;  // variable ids, in clamping order
  struct Candidate {
    std::vector<int> cutset_states;  // one state per cutset variable
    Interpretation interpretation;   // empty assignment when contradictory
    bool contradictory = false;
  };
  std::vector<Candidate> candidates;  // lexicographic in cutset_states
  int winner = -1;

  const Interpretation& winning_interpretation() const {
    return candidates[winner].interpretation;
  }
};

// Enumerates every cutset instantiation, revises under each, and scores the
// completed assignment by the chain rule. A zero-probability instantiation
// scores -inf; ties go to the lexicographically smaller instantiation.
// Throws Error{Contradiction} only when every instantiation is impossible.
CutsetPlan condition_and_revise(const Network& net, const Evidence& ev,
                                std::span<const int> cutset);

// Winner-switch points of condition_and_revise as one binary root's prior
// of TRUE sweeps [lo, hi]: grid scan at `resolution`, then bisection of each
// bracket. `descending` reverses the scan direction (the points must agree).
std::vector<double> threshold_sweep(const Network& net, const Evidence& ev,
                                    int root_var, double lo, double hi,
                                    double resolution,
                                    bool descending = false);

}  // namespace bn
