#include "bn/cutset.hpp"

#include <algorithm>
#include <cmath>

#include "bn/logspace.hpp"

namespace bn {

std::vector<int> find_cutset(const Network& net, const Evidence& ev) {
  std::vector<int> cutset;
  for (;;) {
    EffectiveGraph g = absorb_evidence(net, ev, cutset);
    TopologyReport report = classify_topology(g);
    if (report.kind == Topology::SinglyConnected) break;

    int best = -1, best_degree = -1;
    for (int v = 0; v < net.size(); ++v) {
      if (g.clamped[v] || g.neighbors[v].empty()) continue;
      std::vector<int> trial = cutset;
      trial.push_back(v);
      TopologyReport after =
          classify_topology(absorb_evidence(net, ev, trial));
      if (after.independent_cycles >= report.independent_cycles) continue;
      int degree = static_cast<int>(g.neighbors[v].size());
      if (degree > best_degree) {
        best_degree = degree;
        best = v;
      }
    }
    // Every loop in a DAG has a node with both loop edges outgoing, so a
    // cycle-reducing candidate always exists.
    if (best < 0) fail_input("no cycle-reducing cutset candidate found");
    cutset.push_back(best);
  }
  return cutset;
}

CutsetPlan condition_and_revise(const Network& net, const Evidence& ev,
                                std::span<const int> cutset) {
  {
    EffectiveGraph g = absorb_evidence(net, ev, cutset);
    if (classify_topology(g).kind != Topology::SinglyConnected)
      fail_input("the given cutset does not render the network singly-connected");
  }
  CutsetPlan plan;
  plan.cutset.assign(cutset.begin(), cutset.end());

  std::vector<int> cards;
  for (int v : cutset) cards.push_back(net.var(v).cardinality);
  int count = config_product(cards);
  std::vector<int> states(cutset.size());
  double best = kNegInf;
  for (int idx = 0; idx < count; ++idx) {
    config_from_index(cards, idx, states);
    CutsetPlan::Candidate cand;
    cand.cutset_states = states;
    Evidence cond = ev;
    for (size_t i = 0; i < cutset.size(); ++i)
      cond.observe(cutset[i], states[i]);
    try {
      ReviseResult r = revise(net, cond);
      cand.interpretation = std::move(r.interpretation);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Contradiction) throw;
      cand.contradictory = true;
      cand.interpretation.log_score = kNegInf;
    }
    if (!cand.contradictory && cand.interpretation.log_score > best) {
      best = cand.interpretation.log_score;
      plan.winner = idx;
    }
    plan.candidates.push_back(std::move(cand));
  }
  if (plan.winner < 0)
    throw Error(ErrorKind::Contradiction, "evidence has probability zero");
  return plan;
}

namespace {

// Winning assignment as a comparable value; the cutset layer only needs to
// know when it changes.
std::vector<int> winner_at(const Network& net, const Evidence& ev,
                           std::span<const int> cutset, int root_var,
                           double p) {
  Network tuned = net.with_prior(root_var, p);
  return condition_and_revise(tuned, ev, cutset)
      .winning_interpretation()
      .assignment;
}

}  // namespace

std::vector<double> threshold_sweep(const Network& net, const Evidence& ev,
                                    int root_var, double lo, double hi,
                                    double resolution, bool descending) {
  if (!(lo < hi) || resolution <= 0.0) fail_input("bad sweep range");
  std::vector<int> cutset = find_cutset(net, ev);

  int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / resolution)));
  if (steps > 100000) fail_input("sweep resolution too fine");
  std::vector<double> grid(steps + 1);
  for (int i = 0; i <= steps; ++i)
    grid[i] = descending ? hi - (hi - lo) * i / steps
                         : lo + (hi - lo) * i / steps;

  std::vector<double> switches;
  auto prev = winner_at(net, ev, cutset, root_var, grid[0]);
  for (int i = 1; i <= steps; ++i) {
    auto cur = winner_at(net, ev, cutset, root_var, grid[i]);
    if (cur != prev) {
      double a = grid[i - 1], b = grid[i];
      auto wa = prev;
      while (std::abs(b - a) > resolution * 1e-4) {
        double mid = 0.5 * (a + b);
        if (winner_at(net, ev, cutset, root_var, mid) == wa)
          a = mid;
        else
          b = mid;
      }
      switches.push_back(0.5 * (a + b));
    }
    prev = std::move(cur);
  }
  if (descending) std::reverse(switches.begin(), switches.end());
  return switches;
}

}  // namespace bn
