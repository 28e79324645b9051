#include "bn/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bn/logspace.hpp"
#include "bn/parser.hpp"

namespace bn {

namespace {

std::vector<int> bfs_depths(const EffectiveGraph& g, int start) {
  std::vector<int> depth(g.neighbors.size(), -1);
  std::vector<int> queue{start};
  depth[start] = 0;
  for (size_t h = 0; h < queue.size(); ++h) {
    int u = queue[h];
    for (int v : g.neighbors[u])
      if (depth[v] < 0) {
        depth[v] = depth[u] + 1;
        queue.push_back(v);
      }
  }
  return depth;
}

int parent_position(const Network& net, int child, int parent) {
  const auto& ps = net.parents(child);
  return static_cast<int>(std::find(ps.begin(), ps.end(), parent) -
                          ps.begin());
}

int child_position(const Network& net, int parent, int child) {
  const auto& cs = net.children(parent);
  return static_cast<int>(std::find(cs.begin(), cs.end(), child) -
                          cs.begin());
}

MessageStore init_store(const Network& net, const Evidence& ev,
                        Kernel kernel) {
  MessageStore store;
  store.kernel = kernel;
  store.nodes.resize(net.size());
  for (int id = 0; id < net.size(); ++id) {
    auto& slots = store.nodes[id];
    slots.pi_in.resize(net.parents(id).size());
    slots.lambda_in.resize(net.children(id).size());
    slots.lambda_self.assign(net.var(id).cardinality, 0.0);
  }
  for (auto [var, state] : ev.observations) {
    auto& self = store.nodes[var].lambda_self;
    for (size_t x = 0; x < self.size(); ++x)
      self[x] = static_cast<int>(x) == state ? 0.0 : kNegInf;
    // An instantiated node posts the same indicator to every child.
    for (int child : net.children(var)) {
      Message m;
      m.logv.assign(net.var(var).cardinality, kNegInf);
      m.logv[state] = 0.0;
      m.set = true;
      store.nodes[child].pi_in[parent_position(net, child, var)] = m;
    }
  }
  for (const auto& [var, w] : ev.virtual_findings) {
    auto& self = store.nodes[var].lambda_self;
    for (size_t x = 0; x < self.size(); ++x) self[x] += log_of(w[x]);
  }
  return store;
}

double binary_ratio(const Message& m, MsgDirection dir) {
  if (m.logv.size() != 2) return std::numeric_limits<double>::quiet_NaN();
  if (dir == MsgDirection::Diagnostic) {
    if (m.logv[0] == kNegInf)
      return m.logv[1] == kNegInf
                 ? std::numeric_limits<double>::quiet_NaN()
                 : std::numeric_limits<double>::infinity();
    return std::exp(m.logv[1] - m.logv[0]);
  }
  double s = log_add(m.logv[0], m.logv[1]);
  if (s == kNegInf) return std::numeric_limits<double>::quiet_NaN();
  return std::exp(m.logv[1] - s);
}

bool same_message(const std::vector<double>& a, const std::vector<double>& b,
                  double tol) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (std::abs(std::exp(a[i]) - std::exp(b[i])) > tol) return false;
  return true;
}

// Sends the message node -> target (either a lambda to a parent or a pi to
// a child), recording a trace event when asked.
void send_message(const Network& net, MessageStore& store, int node,
                  int target, Trace* trace) {
  bool to_parent =
      std::find(net.parents(node).begin(), net.parents(node).end(), target) !=
      net.parents(node).end();
  Message msg;
  Message* slot;
  MsgDirection dir;
  if (to_parent) {
    msg = detail::compute_lambda_message(net, store, node,
                                         parent_position(net, node, target));
    slot = &store.nodes[target].lambda_in[child_position(net, target, node)];
    dir = MsgDirection::Diagnostic;
  } else {
    msg = detail::compute_pi_message(net, store, node,
                                     child_position(net, node, target));
    slot = &store.nodes[target].pi_in[parent_position(net, target, node)];
    dir = MsgDirection::Causal;
  }
  if (trace) {
    TraceEvent e;
    e.step = static_cast<int>(trace->events.size()) + 1;
    e.from = node;
    e.to = target;
    e.direction = dir;
    if (slot->set) e.before = to_linear(slot->logv);
    e.after = to_linear(msg.logv);
    e.ratio = binary_ratio(msg, dir);
    e.reinforcing = slot->set && same_message(slot->logv, msg.logv, 1e-12);
    trace->events.push_back(std::move(e));
  }
  *slot = std::move(msg);
}

}  // namespace

Schedule make_schedule(const Network& net, const EffectiveGraph& g) {
  int n = net.size();
  Schedule s;
  s.component.assign(n, -1);
  s.toward_pivot.assign(n, -1);
  s.depth.assign(n, 0);

  for (int seed = 0; seed < n; ++seed) {
    if (s.component[seed] >= 0) continue;
    int comp = static_cast<int>(s.pivots.size());
    auto d0 = bfs_depths(g, seed);
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
      if (d0[v] >= 0) {
        s.component[v] = comp;
        members.push_back(v);
      }
    // Pivot: lowest id among nodes of maximal eccentricity.
    int pivot = seed, max_ecc = -1;
    for (int v : members) {
      auto dv = bfs_depths(g, v);
      int ecc = 0;
      for (int u : members) ecc = std::max(ecc, dv[u]);
      if (ecc > max_ecc || (ecc == max_ecc && v < pivot)) {
        max_ecc = ecc;
        pivot = v;
      }
    }
    s.pivots.push_back(pivot);
    auto depth = bfs_depths(g, pivot);
    for (int v : members) {
      s.depth[v] = depth[v];
      for (int nb : g.neighbors[v])
        if (depth[nb] == depth[v] - 1) s.toward_pivot[v] = nb;
    }
  }

  for (int v = 0; v < n; ++v) {
    if (s.toward_pivot[v] >= 0) s.collect_order.push_back(v);
    s.distribute_order.push_back(v);
  }
  std::sort(s.collect_order.begin(), s.collect_order.end(),
            [&](int a, int b) {
              return s.depth[a] != s.depth[b] ? s.depth[a] > s.depth[b] : a < b;
            });
  std::sort(s.distribute_order.begin(), s.distribute_order.end(),
            [&](int a, int b) {
              return s.depth[a] != s.depth[b] ? s.depth[a] < s.depth[b] : a < b;
            });
  return s;
}

PropagationResult run_to_equilibrium(const Network& net, const Evidence& ev,
                                     Kernel kernel, bool want_trace) {
  EffectiveGraph g = absorb_evidence(net, ev);
  TopologyReport report = classify_topology(g);
  if (report.kind != Topology::SinglyConnected)
    fail_input("effective topology is multiply-connected (" +
               std::to_string(report.independent_cycles) +
               " independent cycles); condition on a cutset first");

  PropagationResult res;
  res.schedule = make_schedule(net, g);
  res.store = init_store(net, ev, kernel);
  res.trace.kernel = kernel;
  Trace* trace = want_trace ? &res.trace : nullptr;

  for (int node : res.schedule.collect_order) {
    send_message(net, res.store, node, res.schedule.toward_pivot[node], trace);
    ++res.trace.activations;
  }
  for (int node : res.schedule.distribute_order) {
    res.store.nodes[node].belief = detail::compute_belief(net, res.store, node);
    for (int nb : g.neighbors[node])
      if (res.schedule.toward_pivot[nb] == node)
        send_message(net, res.store, node, nb, trace);
    ++res.trace.activations;
  }
  return res;
}

MessageStore run_async_sweeps(const Network& net, const Evidence& ev,
                              Kernel kernel, unsigned seed) {
  EffectiveGraph g = absorb_evidence(net, ev);
  if (classify_topology(g).kind != Topology::SinglyConnected)
    fail_input("effective topology is multiply-connected");
  MessageStore store = init_store(net, ev, kernel);

  // Uniform starting messages on every tree edge.
  for (int node = 0; node < net.size(); ++node)
    for (int nb : g.neighbors[node]) {
      bool nb_is_parent = std::find(net.parents(node).begin(),
                                    net.parents(node).end(),
                                    nb) != net.parents(node).end();
      Message m;
      int card = nb_is_parent ? net.var(nb).cardinality
                              : net.var(node).cardinality;
      double v = kernel == Kernel::Update ? -std::log(card) : 0.0;
      m.logv.assign(card, v);
      m.set = true;
      if (nb_is_parent)
        store.nodes[node].pi_in[parent_position(net, node, nb)] = m;
      else
        store.nodes[node].lambda_in[child_position(net, node, nb)] = m;
    }

  std::mt19937 rng(seed);
  std::vector<int> order(net.size());
  for (int i = 0; i < net.size(); ++i) order[i] = i;
  int max_sweeps = 10 * net.size() + 20;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    std::shuffle(order.begin(), order.end(), rng);
    double moved = 0.0;
    for (int node : order)
      for (int nb : g.neighbors[node]) {
        bool to_parent = std::find(net.parents(node).begin(),
                                   net.parents(node).end(),
                                   nb) != net.parents(node).end();
        Message msg;
        Message* slot;
        if (to_parent) {
          msg = detail::compute_lambda_message(
              net, store, node, parent_position(net, node, nb));
          slot = &store.nodes[nb].lambda_in[child_position(net, nb, node)];
        } else {
          msg = detail::compute_pi_message(net, store, node,
                                           child_position(net, node, nb));
          slot = &store.nodes[nb].pi_in[parent_position(net, nb, node)];
        }
        for (size_t i = 0; i < msg.logv.size(); ++i)
          moved = std::max(moved, std::abs(std::exp(msg.logv[i]) -
                                           std::exp(slot->logv[i])));
        *slot = std::move(msg);
      }
    if (moved <= 1e-12) break;
  }
  for (int node = 0; node < net.size(); ++node)
    store.nodes[node].belief = detail::compute_belief(net, store, node);
  return store;
}

namespace {

std::string kind_name(const TraceEvent& e, Kernel kernel) {
  std::string base = e.direction == MsgDirection::Causal ? "pi" : "lambda";
  if (kernel == Kernel::Revise) base += "*";
  return base;
}

std::string msg_list(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out + "]";
}

}  // namespace

std::string trace_to_text(const Trace& trace, const Network& net) {
  std::ostringstream out;
  for (const auto& e : trace.events) {
    out << "step=" << e.step << " edge=" << net.var(e.from).name << "->"
        << net.var(e.to).name << " kind=" << kind_name(e, trace.kernel)
        << " msg=" << msg_list(e.after);
    if (!std::isnan(e.ratio)) {
      out << " ratio=";
      if (std::isinf(e.ratio))
        out << "inf";
      else
        out << format_double(e.ratio);
    }
    if (e.reinforcing) out << " reinforcing=1";
    out << '\n';
  }
  return out.str();
}

std::string trace_to_json(const Trace& trace, const Network& net) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : trace.events) {
    nlohmann::ordered_json rec;
    rec["step"] = e.step;
    rec["from"] = net.var(e.from).name;
    rec["to"] = net.var(e.to).name;
    rec["kind"] = kind_name(e, trace.kernel);
    rec["msg"] = e.after;
    if (!std::isnan(e.ratio)) {
      if (std::isinf(e.ratio))
        rec["ratio"] = "inf";
      else
        rec["ratio"] = e.ratio;
    }
    rec["reinforcing"] = e.reinforcing;
    arr.push_back(std::move(rec));
  }
  return arr.dump(2);
}

}  // namespace bn
