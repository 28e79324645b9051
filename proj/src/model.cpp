#include "bn/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "bn/logspace.hpp"

namespace bn {

namespace {

std::string at_line(int line) {
  return line > 0 ? " (line " + std::to_string(line) + ")" : "";
}

std::vector<std::string> default_states(int cardinality) {
  if (cardinality == 2) return {"FALSE", "TRUE"};
  std::vector<std::string> s(cardinality);
  for (int i = 0; i < cardinality; ++i) s[i] = "s" + std::to_string(i);
  return s;
}

}  // namespace

int Network::var_id(const std::string& name) const {
  for (const auto& v : vars_)
    if (v.name == name) return v.id;
  return -1;
}

int Network::require_var(const std::string& name) const {
  int id = var_id(name);
  if (id < 0) fail_input("unknown variable '" + name + "'");
  return id;
}

bool Network::is_noisy_or(int id) const {
  return std::holds_alternative<NoisyOrCpd>(cpds_[id]);
}

std::vector<int> Network::parent_cards(int id) const {
  std::vector<int> cards;
  cards.reserve(parents_[id].size());
  for (int p : parents_[id]) cards.push_back(vars_[p].cardinality);
  return cards;
}

int Network::config_count(int id) const {
  int n = 1;
  for (int p : parents_[id]) n *= vars_[p].cardinality;
  return n;
}

double Network::prob(int id, int state,
                     std::span<const int> parent_states) const {
  if (const auto* t = std::get_if<TableCpd>(&cpds_[id])) {
    auto cards = parent_cards(id);
    int cfg = config_index(cards, parent_states);
    return t->probs[cfg * vars_[id].cardinality + state];
  }
  const auto& nor = std::get<NoisyOrCpd>(cpds_[id]);
  double q_prod = 1.0;
  for (size_t i = 0; i < nor.suppressors.size(); ++i)
    if (parent_states[i] == 1) q_prod *= nor.suppressors[i];
  return state == 1 ? 1.0 - q_prod : q_prod;
}

double Network::log_prob(int id, int state,
                         std::span<const int> parent_states) const {
  return log_of(prob(id, state, parent_states));
}

int Network::edge_count() const {
  int n = 0;
  for (const auto& p : parents_) n += static_cast<int>(p.size());
  return n;
}

Network Network::with_prior(int root, double p_true) const {
  if (!parents_[root].empty() || vars_[root].cardinality != 2)
    fail_input("'" + vars_[root].name + "' is not a binary root");
  if (p_true < 0.0 || p_true > 1.0) fail_input("prior out of [0,1]");
  Network out = *this;
  out.cpds_[root] = TableCpd{{1.0 - p_true, p_true}};
  return out;
}

Network build_network(const NetworkSpec& spec) {
  Network net;
  net.name_ = spec.name;

  for (const auto& decl : spec.vars) {
    if (net.var_id(decl.name) >= 0)
      fail_input("duplicate variable '" + decl.name + "'" + at_line(decl.line));
    if (decl.cardinality < 2)
      fail_input("variable '" + decl.name + "' needs cardinality >= 2" +
                 at_line(decl.line));
    Variable v;
    v.id = static_cast<int>(net.vars_.size());
    v.name = decl.name;
    v.cardinality = decl.cardinality;
    v.states = decl.states.empty() ? default_states(decl.cardinality)
                                   : decl.states;
    if (static_cast<int>(v.states.size()) != v.cardinality)
      fail_input("variable '" + decl.name + "' declares " +
                 std::to_string(v.states.size()) + " state labels for cardinality " +
                 std::to_string(v.cardinality) + at_line(decl.line));
    std::set<std::string> seen(v.states.begin(), v.states.end());
    if (static_cast<int>(seen.size()) != v.cardinality)
      fail_input("variable '" + decl.name + "' has duplicate state labels" +
                 at_line(decl.line));
    net.vars_.push_back(std::move(v));
  }

  int n = net.size();
  net.parents_.assign(n, {});
  net.children_.assign(n, {});
  net.cpds_.assign(n, TableCpd{});

  for (const auto& decl : spec.parents) {
    int child = net.var_id(decl.child);
    if (child < 0)
      fail_input("parents declared for unknown variable '" + decl.child + "'" +
                 at_line(decl.line));
    if (!net.parents_[child].empty())
      fail_input("duplicate parents directive for '" + decl.child + "'" +
                 at_line(decl.line));
    std::set<int> seen;
    for (const auto& pname : decl.parents) {
      int p = net.var_id(pname);
      if (p < 0)
        fail_input("unknown parent '" + pname + "' of '" + decl.child + "'" +
                   at_line(decl.line));
      if (p == child || !seen.insert(p).second)
        fail_input("parent '" + pname + "' repeated on '" + decl.child + "'" +
                   at_line(decl.line));
      net.parents_[child].push_back(p);
    }
  }

  std::vector<char> has_dist(n, 0);
  for (const auto& decl : spec.dists) {
    int id = net.var_id(decl.var);
    if (id < 0)
      fail_input("distribution for unknown variable '" + decl.var + "'" +
                 at_line(decl.line));
    if (has_dist[id])
      fail_input("variable '" + decl.var + "' has two distribution directives" +
                 at_line(decl.line));
    has_dist[id] = 1;
    int card = net.vars_[id].cardinality;
    int configs = net.config_count(id);

    switch (decl.kind) {
      case NetworkSpec::DistKind::Prior: {
        if (!net.parents_[id].empty() || card != 2)
          fail_input("prior shorthand requires a binary root ('" + decl.var +
                     "')" + at_line(decl.line));
        if (decl.values.size() != 1 || decl.values[0] < 0.0 ||
            decl.values[0] > 1.0)
          fail_input("prior for '" + decl.var + "' must be one probability" +
                     at_line(decl.line));
        net.cpds_[id] = TableCpd{{1.0 - decl.values[0], decl.values[0]}};
        break;
      }
      case NetworkSpec::DistKind::NoisyOr: {
        if (card != 2)
          fail_input("noisy-OR on non-binary variable '" + decl.var + "'" +
                     at_line(decl.line));
        for (int p : net.parents_[id])
          if (net.vars_[p].cardinality != 2)
            fail_input("noisy-OR '" + decl.var + "' has non-binary parent '" +
                       net.vars_[p].name + "'" + at_line(decl.line));
        if (net.parents_[id].empty())
          fail_input("noisy-OR '" + decl.var + "' has no parents" +
                     at_line(decl.line));
        if (decl.values.size() != net.parents_[id].size())
          fail_input("noisy-OR '" + decl.var + "' needs one strength per parent" +
                     at_line(decl.line));
        NoisyOrCpd nor;
        for (double c : decl.values) {
          if (c < 0.0 || c > 1.0)
            fail_input("noisy-OR strength out of [0,1] on '" + decl.var + "'" +
                       at_line(decl.line));
          nor.suppressors.push_back(1.0 - c);
        }
        net.cpds_[id] = std::move(nor);
        break;
      }
      case NetworkSpec::DistKind::Cpt: {
        if (static_cast<int>(decl.values.size()) != configs * card)
          fail_input("cpt for '" + decl.var + "' has " +
                     std::to_string(decl.values.size()) + " entries, expected " +
                     std::to_string(configs * card) + at_line(decl.line));
        TableCpd t;
        t.probs = decl.values;
        for (int cfg = 0; cfg < configs; ++cfg) {
          double sum = 0.0;
          for (int x = 0; x < card; ++x) {
            double p = t.probs[cfg * card + x];
            if (p < 0.0 || p > 1.0)
              fail_input("cpt entry out of [0,1] on '" + decl.var + "'" +
                         at_line(decl.line));
            sum += p;
          }
          // Values are kept exactly as given (no renormalization) so the
          // canonical print form round-trips byte for byte.
          if (std::abs(sum - 1.0) > 1e-12)
            fail_input("cpt row " + std::to_string(cfg) + " of '" + decl.var +
                       "' sums to " + std::to_string(sum) + at_line(decl.line));
        }
        net.cpds_[id] = std::move(t);
        break;
      }
    }
  }

  for (int id = 0; id < n; ++id)
    if (!has_dist[id])
      fail_input("variable '" + net.vars_[id].name + "' has no distribution");

  for (int id = 0; id < n; ++id)
    for (int p : net.parents_[id]) net.children_[p].push_back(id);

  // Acyclicity via Kahn; on failure report one cycle by walking back-links.
  {
    std::vector<int> indeg(n, 0);
    for (int id = 0; id < n; ++id)
      indeg[id] = static_cast<int>(net.parents_[id].size());
    std::vector<int> queue;
    for (int id = 0; id < n; ++id)
      if (indeg[id] == 0) queue.push_back(id);
    int done = 0;
    while (!queue.empty()) {
      int u = queue.back();
      queue.pop_back();
      ++done;
      for (int c : net.children_[u])
        if (--indeg[c] == 0) queue.push_back(c);
    }
    if (done != n) {
      int start = -1;
      for (int id = 0; id < n; ++id)
        if (indeg[id] > 0) { start = id; break; }
      std::vector<int> path;
      std::vector<char> on_path(n, 0);
      int cur = start;
      while (!on_path[cur]) {
        on_path[cur] = 1;
        path.push_back(cur);
        for (int p : net.parents_[cur])
          if (indeg[p] > 0) { cur = p; break; }
      }
      std::ostringstream msg;
      msg << "cycle detected:";
      auto it = std::find(path.begin(), path.end(), cur);
      for (; it != path.end(); ++it) msg << ' ' << net.vars_[*it].name;
      msg << ' ' << net.vars_[cur].name;
      fail_input(msg.str());
    }
  }

  return net;
}

TableCpd expand_noisy_or(const Network& net, int id) {
  const auto& nor = std::get<NoisyOrCpd>(net.cpd(id));
  int n = static_cast<int>(nor.suppressors.size());
  int configs = 1 << n;
  TableCpd t;
  t.probs.resize(configs * 2);
  std::vector<int> cards(n, 2), states(n);
  for (int cfg = 0; cfg < configs; ++cfg) {
    config_from_index(cards, cfg, states);
    double q_prod = 1.0;
    for (int i = 0; i < n; ++i)
      if (states[i] == 1) q_prod *= nor.suppressors[i];
    t.probs[cfg * 2 + 0] = q_prod;
    t.probs[cfg * 2 + 1] = 1.0 - q_prod;
  }
  return t;
}

void Evidence::observe(int var, int state) {
  if (observations.count(var) || virtual_findings.count(var))
    fail_input("variable id " + std::to_string(var) + " observed twice");
  observations[var] = state;
}

void Evidence::add_virtual(int var, std::vector<double> weights) {
  if (observations.count(var))
    fail_input("variable id " + std::to_string(var) +
               " has both an observation and a virtual finding");
  bool positive = false;
  for (double w : weights) {
    if (w < 0.0) fail_input("virtual finding weights must be nonnegative");
    positive = positive || w > 0.0;
  }
  if (!positive) fail_input("virtual finding needs a positive entry");
  auto it = virtual_findings.find(var);
  if (it == virtual_findings.end()) {
    virtual_findings.emplace(var, std::move(weights));
  } else {
    if (it->second.size() != weights.size())
      fail_input("virtual finding length mismatch");
    for (size_t i = 0; i < weights.size(); ++i) it->second[i] *= weights[i];
  }
}

void validate_evidence(const Network& net, const Evidence& ev) {
  for (auto [var, state] : ev.observations) {
    if (var < 0 || var >= net.size()) fail_input("observation on unknown id");
    if (state < 0 || state >= net.var(var).cardinality)
      fail_input("state index " + std::to_string(state) + " out of range for '" +
                 net.var(var).name + "'");
  }
  for (const auto& [var, w] : ev.virtual_findings) {
    if (var < 0 || var >= net.size()) fail_input("virtual finding on unknown id");
    if (static_cast<int>(w.size()) != net.var(var).cardinality)
      fail_input("virtual finding on '" + net.var(var).name +
                 "' has wrong length");
  }
}

bool EffectiveGraph::has_edge(int parent, int /*child*/) const {
  return !clamped[parent];
}

EffectiveGraph absorb_evidence(const Network& net, const Evidence& ev) {
  return absorb_evidence(net, ev, {});
}

EffectiveGraph absorb_evidence(const Network& net, const Evidence& ev,
                               std::span<const int> extra_clamped) {
  validate_evidence(net, ev);
  EffectiveGraph g;
  int n = net.size();
  g.clamped.assign(n, 0);
  for (auto [var, state] : ev.observations) g.clamped[var] = 1;
  for (int var : extra_clamped) {
    if (var < 0 || var >= n) fail_input("clamp on unknown id");
    g.clamped[var] = 1;
  }
  g.neighbors.assign(n, {});
  for (int child = 0; child < n; ++child)
    for (int parent : net.parents(child)) {
      if (g.clamped[parent]) continue;  // instantiated: outgoing links cut
      g.neighbors[parent].push_back(child);
      g.neighbors[child].push_back(parent);
    }
  return g;
}

namespace {

TopologyReport classify(const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  TopologyReport r;
  r.edges = 0;
  for (const auto& nb : adj) r.edges += static_cast<int>(nb.size());
  r.edges /= 2;
  std::vector<char> seen(n, 0);
  r.components = 0;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++r.components;
    stack.push_back(s);
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
  }
  r.independent_cycles = r.edges - n + r.components;
  r.kind = r.independent_cycles == 0 ? Topology::SinglyConnected
                                     : Topology::MultiplyConnected;
  return r;
}

}  // namespace

TopologyReport classify_topology(const Network& net) {
  std::vector<std::vector<int>> adj(net.size());
  for (int child = 0; child < net.size(); ++child)
    for (int parent : net.parents(child)) {
      adj[parent].push_back(child);
      adj[child].push_back(parent);
    }
  return classify(adj);
}

TopologyReport classify_topology(const EffectiveGraph& g) {
  return classify(g.neighbors);
}

int config_index(std::span<const int> cards, std::span<const int> states) {
  int idx = 0;
  for (size_t i = 0; i < cards.size(); ++i) idx = idx * cards[i] + states[i];
  return idx;
}

void config_from_index(std::span<const int> cards, int index,
                       std::span<int> states_out) {
  for (int i = static_cast<int>(cards.size()) - 1; i >= 0; --i) {
    states_out[i] = index % cards[i];
    index /= cards[i];
  }
}

int config_product(std::span<const int> cards) {
  int n = 1;
  for (int c : cards) n *= c;
  return n;
}

}  // namespace bn
