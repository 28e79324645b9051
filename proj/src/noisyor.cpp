#include "bn/noisyor.hpp"

#include <algorithm>
#include <cmath>

#include "bn/error.hpp"
#include "bn/logspace.hpp"

namespace bn::noisyor {

namespace {

double odds(double p) {
  if (p >= 1.0) return std::numeric_limits<double>::infinity();
  return p / (1.0 - p);
}

double subset_log_factor(std::span<const double> pi, std::span<const double> q,
                         const std::vector<int>& members, bool gate_true) {
  double q_prod = 1.0;
  for (int k : members) q_prod *= q[k];
  double log_gate = gate_true ? log_of(1.0 - q_prod)
                              : (members.empty() ? 0.0 : log_of(q_prod));
  double acc = log_gate;
  size_t m = 0;
  for (size_t k = 0; k < pi.size(); ++k) {
    bool in = m < members.size() && members[m] == static_cast<int>(k);
    if (in) {
      acc += log_of(pi[k]);
      ++m;
    } else {
      acc += log_of(1.0 - pi[k]);
    }
  }
  return acc;
}

}  // namespace

double or_probability(std::span<const int> true_set,
                      std::span<const double> q) {
  double q_prod = 1.0;
  for (int i : true_set) q_prod *= q[i];
  return true_set.empty() ? 0.0 : 1.0 - q_prod;
}

SubsetChoice optimal_false_set(std::span<const double> pi,
                               std::span<const double> q) {
  SubsetChoice out;
  for (size_t k = 0; k < pi.size(); ++k)
    if (q[k] * pi[k] > 1.0 - pi[k]) out.members.push_back(static_cast<int>(k));
  out.log_factor = subset_log_factor(pi, q, out.members, false);
  return out;
}

double merit(double pi_k, double q_k, double Q_I) {
  if (pi_k >= 1.0) return std::numeric_limits<double>::infinity();
  if (q_k >= 1.0) return odds(pi_k);
  if (Q_I >= 1.0)
    return pi_k > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return odds(pi_k) * (1.0 - q_k * Q_I) / (1.0 - Q_I);
}

SubsetChoice greedy_true_set(std::span<const double> pi,
                             std::span<const double> q) {
  int n = static_cast<int>(pi.size());
  std::vector<char> in_set(n, 0), dropped(n, 0);
  for (int k = 0; k < n; ++k)
    if (pi[k] >= 0.5) in_set[k] = 1;

  bool any = std::find(in_set.begin(), in_set.end(), 1) != in_set.end();
  if (!any) {
    // Fallback seed: the element with the highest (1-q) pi/(1-pi), the
    // merit limit as Q_I -> 1.
    int best = 0;
    double best_v = -1.0;
    for (int k = 0; k < n; ++k) {
      double v = (1.0 - q[k]) * odds(pi[k]);
      if (v > best_v) {
        best_v = v;
        best = k;
      }
    }
    in_set[best] = 1;
  }

  double Q = 1.0;
  for (int k = 0; k < n; ++k)
    if (in_set[k]) Q *= q[k];

  for (;;) {
    int best = -1;
    double best_h = 1.0;
    std::vector<int> to_drop;
    for (int k = 0; k < n; ++k) {
      if (in_set[k] || dropped[k]) continue;
      double h = merit(pi[k], q[k], Q);
      if (h <= 1.0)
        to_drop.push_back(k);
      else if (h > best_h) {
        best_h = h;
        best = k;
      }
    }
    for (int k : to_drop) dropped[k] = 1;
    if (best < 0) break;
    in_set[best] = 1;
    Q *= q[best];
  }

  SubsetChoice out;
  for (int k = 0; k < n; ++k)
    if (in_set[k]) out.members.push_back(k);
  out.log_factor = subset_log_factor(pi, q, out.members, true);
  return out;
}

SubsetChoice exhaustive_true_set(std::span<const double> pi,
                                 std::span<const double> q) {
  int n = static_cast<int>(pi.size());
  if (n > 20)
    throw Error(ErrorKind::SizeLimit,
                "exhaustive_true_set limited to 20 parents");
  std::vector<double> log_pi(n), log_npi(n);
  for (int k = 0; k < n; ++k) {
    log_pi[k] = log_of(pi[k]);
    log_npi[k] = log_of(1.0 - pi[k]);
  }
  unsigned best_mask = 0;
  double best_v = kNegInf;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double q_prod = 1.0, acc = 0.0;
    for (int k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        q_prod *= q[k];
        acc += log_pi[k];
      } else {
        acc += log_npi[k];
      }
    }
    double v = acc + log_of(mask == 0 ? 0.0 : 1.0 - q_prod);
    if (v > best_v) {
      best_v = v;
      best_mask = mask;
    }
  }
  SubsetChoice out;
  for (int k = 0; k < n; ++k)
    if (best_mask & (1u << k)) out.members.push_back(k);
  out.log_factor = best_v;
  return out;
}

SubsetChoice or_max_term(std::span<const double> pi, std::span<const double> q,
                         int x) {
  if (x == 0) return optimal_false_set(pi, q);
  if (static_cast<int>(pi.size()) <= kExactParentLimit)
    return exhaustive_true_set(pi, q);
  return greedy_true_set(pi, q);
}

OrLambda or_lambda_star(std::span<const double> pi_others,
                        std::span<const double> q_others, double q_target,
                        std::array<double, 2> log_lambda_gate) {
  OrLambda out;
  SubsetChoice false_best = optimal_false_set(pi_others, q_others);
  for (int t = 0; t < 2; ++t) {
    double val_false = log_lambda_gate[0] + false_best.log_factor +
                       (t == 1 ? log_of(q_target) : 0.0);
    SubsetChoice true_best;
    if (t == 0) {
      true_best = or_max_term(pi_others, q_others, 1);
    } else {
      // Force the target TRUE by adding a pseudo-parent with pi = 1.
      std::vector<double> pi_ext(pi_others.begin(), pi_others.end());
      std::vector<double> q_ext(q_others.begin(), q_others.end());
      pi_ext.push_back(1.0);
      q_ext.push_back(q_target);
      true_best = or_max_term(pi_ext, q_ext, 1);
      std::erase(true_best.members, static_cast<int>(pi_others.size()));
    }
    double val_true = log_lambda_gate[1] + true_best.log_factor;
    if (val_true > val_false) {
      out.logv[t] = val_true;
      out.best_x[t] = 1;
      out.best_true_others[t] = std::move(true_best.members);
    } else {
      out.logv[t] = val_false;
      out.best_x[t] = 0;
      out.best_true_others[t] = false_best.members;
    }
  }
  return out;
}

}  // namespace bn::noisyor
