#include "bn/revise.hpp"

#include <algorithm>
#include <cmath>

#include "bn/logspace.hpp"

namespace bn {

double Interpretation::posterior() const {
  return std::exp(log_score - *log_normalizer);
}

double chain_rule_log_score(const Network& net, const Evidence& ev,
                            std::span<const int> assignment) {
  double acc = 0.0;
  std::vector<int> parent_states;
  for (int id = 0; id < net.size(); ++id) {
    const auto& ps = net.parents(id);
    parent_states.resize(ps.size());
    for (size_t k = 0; k < ps.size(); ++k)
      parent_states[k] = assignment[ps[k]];
    acc += net.log_prob(id, assignment[id], parent_states);
  }
  for (const auto& [var, w] : ev.virtual_findings)
    acc += log_of(w[assignment[var]]);
  return acc;
}

Interpretation extract_mpe(const Network& net, const Evidence& ev,
                           const PropagationResult& run) {
  const MessageStore& store = run.store;
  const Schedule& sched = run.schedule;
  int n = net.size();
  Interpretation out;
  out.assignment.assign(n, -1);

  auto assign = [&](int var, int state) {
    if (out.assignment[var] < 0) out.assignment[var] = state;
  };
  for (auto [var, state] : ev.observations) out.assignment[var] = state;

  auto assign_config = [&](int node, const std::vector<int>& config) {
    const auto& ps = net.parents(node);
    for (size_t k = 0; k < ps.size(); ++k) assign(ps[k], config[k]);
  };

  double pivot_score = 0.0;
  for (int pivot : sched.pivots) {
    const Message& bel = store.nodes[pivot].belief;
    int best = 0;
    for (size_t x = 1; x < bel.logv.size(); ++x)
      if (bel.logv[x] > bel.logv[best]) best = static_cast<int>(x);
    assign(pivot, best);
    pivot_score += bel.raw(out.assignment[pivot]);
    assign_config(pivot,
                  detail::best_parent_config(net, store, pivot,
                                             out.assignment[pivot]));
  }

  // Walk outward in the distribute order; every node is reached after the
  // neighbor on its pivot side has a committed value.
  for (int node : sched.distribute_order) {
    int toward = sched.toward_pivot[node];
    if (toward < 0) continue;  // pivot, handled above
    bool toward_is_parent =
        std::find(net.parents(node).begin(), net.parents(node).end(),
                  toward) != net.parents(node).end();
    if (toward_is_parent) {
      // The node's lambda* maximization toward that parent fixes its own
      // state and its remaining parents.
      auto bp = detail::best_given_parent(
          net, store, node,
          static_cast<int>(std::find(net.parents(node).begin(),
                                     net.parents(node).end(), toward) -
                           net.parents(node).begin()),
          out.assignment[toward]);
      assign(node, bp.x);
      assign_config(node, bp.config);
    } else {
      // The node's value was fixed by the child's maximization; its own
      // parents come from its max parent configuration.
      assign_config(node,
                    detail::best_parent_config(net, store, node,
                                               out.assignment[node]));
    }
  }

  out.log_score = chain_rule_log_score(net, ev, out.assignment);
  out.log_pivot_score = pivot_score;
  return out;
}

ReviseResult revise(const Network& net, const Evidence& ev, bool want_trace) {
  ReviseResult res;
  res.run = run_to_equilibrium(net, ev, Kernel::Revise, want_trace);
  res.interpretation = extract_mpe(net, ev, res.run);
  return res;
}

}  // namespace bn
