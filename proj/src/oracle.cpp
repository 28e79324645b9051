#include "bn/oracle.hpp"

#include <cmath>

#include "bn/logspace.hpp"

namespace bn::oracle {

namespace {

void check_size(const Network& net) {
  double log2_states = 0.0;
  for (int id = 0; id < net.size(); ++id)
    log2_states += std::log2(static_cast<double>(net.var(id).cardinality));
  if (log2_states > 24.0)
    throw Error(ErrorKind::SizeLimit,
                "state space exceeds 2^24; the oracle refuses");
}

}  // namespace

void enumerate_joint(
    const Network& net, const Evidence& ev,
    const std::function<void(std::span<const int>, double)>& visit) {
  validate_evidence(net, ev);
  check_size(net);
  int n = net.size();
  std::vector<int> states(n, 0);
  for (auto [var, state] : ev.observations) states[var] = state;

  // Mixed-radix counter over unobserved variables, last one fastest, which
  // yields lexicographic order over the full assignment.
  std::vector<int> free_vars;
  for (int id = 0; id < n; ++id)
    if (!ev.observations.count(id)) free_vars.push_back(id);

  for (;;) {
    visit(states, chain_rule_log_score(net, ev, states));
    int i = static_cast<int>(free_vars.size()) - 1;
    for (; i >= 0; --i) {
      int v = free_vars[i];
      if (++states[v] < net.var(v).cardinality) break;
      states[v] = 0;
    }
    if (i < 0) break;
  }
}

std::vector<double> exact_bel(const Network& net, const Evidence& ev,
                              int var) {
  int card = net.var(var).cardinality;
  std::vector<double> acc(card, kNegInf);
  enumerate_joint(net, ev, [&](std::span<const int> states, double logp) {
    acc[states[var]] = log_add(acc[states[var]], logp);
  });
  double total = log_sum(acc);
  if (total == kNegInf)
    throw Error(ErrorKind::Contradiction, "evidence has probability zero");
  std::vector<double> out(card);
  for (int x = 0; x < card; ++x) out[x] = std::exp(acc[x] - total);
  return out;
}

MpeResult exact_mpe(const Network& net, const Evidence& ev) {
  MpeResult res;
  double total = kNegInf;
  bool have_best = false;
  enumerate_joint(net, ev, [&](std::span<const int> states, double logp) {
    total = log_add(total, logp);
    if (!have_best || logp > res.interpretation.log_score) {
      if (have_best)
        res.log_runner_up =
            std::max(res.log_runner_up, res.interpretation.log_score);
      res.interpretation.assignment.assign(states.begin(), states.end());
      res.interpretation.log_score = logp;
      have_best = true;
    } else {
      res.log_runner_up = std::max(res.log_runner_up, logp);
    }
  });
  if (total == kNegInf)
    throw Error(ErrorKind::Contradiction, "evidence has probability zero");
  res.interpretation.log_normalizer = total;
  res.interpretation.log_pivot_score = res.interpretation.log_score;
  return res;
}

double exact_log_evidence(const Network& net, const Evidence& ev) {
  double total = kNegInf;
  enumerate_joint(net, ev, [&](std::span<const int>, double logp) {
    total = log_add(total, logp);
  });
  return total;
}

std::vector<double> exact_max_marginal(const Network& net, const Evidence& ev,
                                       int var) {
  std::vector<double> acc(net.var(var).cardinality, kNegInf);
  enumerate_joint(net, ev, [&](std::span<const int> states, double logp) {
    acc[states[var]] = std::max(acc[states[var]], logp);
  });
  return acc;
}

}  // namespace bn::oracle
