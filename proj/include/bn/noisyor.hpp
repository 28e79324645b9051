#pragma once

#include <array>
#include <span>
#include <vector>

namespace bn::noisyor {

// Scalar causal support of parent k at a binary OR gate:
// pi_k = pi*(+u_k) / (pi*(+u_k) + pi*(-u_k)).
// All optimizers below work on these scalars plus the suppressors q_k; the
// constant factor (sum of each parent's pi* entries) cancels in ratios.

// P(+x | parents in true_set TRUE, rest FALSE) = 1 - prod q_i; empty set -> 0.
double or_probability(std::span<const int> true_set, std::span<const double> q);

struct SubsetChoice {
  std::vector<int> members;  // parent indices assumed TRUE, ascending
  double log_factor;         // log of the maximized variable factor
};

// Exact optimizer for the FALSE-gate factor
//   prod_{i in I} q_i pi_i * prod_{i not in I} (1 - pi_i):
// include exactly those k with q_k pi_k > 1 - pi_k (ties excluded).
SubsetChoice optimal_false_set(std::span<const double> pi,
                               std::span<const double> q);

// Gain from adding candidate k to the TRUE set:
// h_k = [pi_k/(1-pi_k)] * [(1 - q_k Q_I)/(1 - Q_I)].
// pi_k = 1 forces inclusion (+inf); Q_I = 1 signals an ineffective seed set
// and is resolved in favor of any candidate with q_k < 1.
double merit(double pi_k, double q_k, double Q_I);

// Greedy maximizer of the TRUE-gate factor
//   (1 - prod_{i in I} q_i) * prod_{i in I} pi_i * prod_{i not in I} (1-pi_i).
// Seeds with {k : pi_k >= 1/2}; when empty, the single element maximizing
// (1-q_k) pi_k/(1-pi_k). Then repeatedly adds the best candidate with
// merit > 1, dropping candidates whose merit fell to <= 1.
SubsetChoice greedy_true_set(std::span<const double> pi,
                             std::span<const double> q);

// Exact 2^n enumeration of the TRUE-gate factor (n <= 20).
SubsetChoice exhaustive_true_set(std::span<const double> pi,
                                 std::span<const double> q);

// Maximized gate factor for gate value x in {0,1} over all parent subsets,
// exact for x = 0 always and for x = 1 when n <= kExactParentLimit (greedy
// above that). Returns the optimizing TRUE set.
inline constexpr int kExactParentLimit = 10;
SubsetChoice or_max_term(std::span<const double> pi, std::span<const double> q,
                         int x);

// lambda* components for the message from a binary OR gate to parent
// `target`: out[t] = max over the gate value x and the remaining parents of
// log_lambda_gate[x] + log(optimized gate factor with u_target = t).
// log_lambda_gate is the gate's own evidence/child lambda product (log).
// pi and q cover the *other* parents, in their original order with the
// target removed. Returns log values, unnormalized.
struct OrLambda {
  std::array<double, 2> logv;
  // Per target value: optimizing gate state and TRUE set over the others.
  std::array<int, 2> best_x;
  std::array<std::vector<int>, 2> best_true_others;
};
OrLambda or_lambda_star(std::span<const double> pi_others,
                        std::span<const double> q_others, double q_target,
                        std::array<double, 2> log_lambda_gate);

}  // namespace bn::noisyor
