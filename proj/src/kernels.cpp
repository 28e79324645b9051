// Message computations shared by the sum-product (update) and max-product
// (revise) engines. Everything runs in log space; exact zeros are -inf.
// Exclusive child products are recomputed with one child skipped rather
// than divided out, so zeros stay exact.

#include <cmath>

#include "bn/logspace.hpp"
#include "bn/noisyor.hpp"
#include "bn/propagation.hpp"

namespace bn::detail {

namespace {

void normalize(Message& m, Kernel kernel) {
  double norm = kernel == Kernel::Update ? log_sum(m.logv) : log_max(m.logv);
  m.log_scale = norm;
  if (norm == kNegInf) return;  // all-zero message; scale carries the zero
  for (double& v : m.logv) v -= norm;
}

double lambda_raw(const MessageStore& store, int node, int child_index,
                  int state) {
  const Message& m = store.nodes[node].lambda_in[child_index];
  return m.set ? m.raw(state) : 0.0;
}

bool use_or_path(const Network& net, Kernel kernel, int node) {
  return kernel == Kernel::Revise && net.is_noisy_or(node) &&
         !net.parents(node).empty();
}

// Scalar causal supports pi_k and the per-parent normalizers for a noisy-OR
// node; scale_sum accumulates the constants dropped by the scalar form.
struct OrInputs {
  std::vector<double> pi;
  double scale_sum = 0.0;
};

OrInputs or_inputs(const MessageStore& store, int node, int skip_parent = -1) {
  const auto& slots = store.nodes[node];
  OrInputs in;
  for (size_t k = 0; k < slots.pi_in.size(); ++k) {
    if (static_cast<int>(k) == skip_parent) continue;
    double lo0 = pi_raw(store, node, static_cast<int>(k), 0);
    double lo1 = pi_raw(store, node, static_cast<int>(k), 1);
    double s = log_add(lo0, lo1);
    in.pi.push_back(s == kNegInf ? 0.0 : std::exp(lo1 - s));
    in.scale_sum = in.scale_sum == kNegInf || s == kNegInf
                       ? kNegInf
                       : in.scale_sum + s;
  }
  return in;
}

std::array<double, 2> lambda_pair(const std::vector<double>& lam) {
  return {lam[0], lam[1]};
}

}  // namespace

double pi_raw(const MessageStore& store, int node, int parent_index,
              int state) {
  const Message& m = store.nodes[node].pi_in[parent_index];
  return m.set ? m.raw(state) : 0.0;
}

std::vector<double> lambda_product(const Network&,
                                   const MessageStore& store, int node,
                                   int skip_child_index) {
  const auto& slots = store.nodes[node];
  std::vector<double> out = slots.lambda_self;
  int m = static_cast<int>(slots.lambda_in.size());
  for (int j = 0; j < m; ++j) {
    if (j == skip_child_index) continue;
    for (size_t x = 0; x < out.size(); ++x)
      out[x] += lambda_raw(store, node, j, static_cast<int>(x));
  }
  return out;
}

Message compute_lambda_message(const Network& net, const MessageStore& store,
                               int node, int parent_index) {
  Kernel kernel = store.kernel;
  int target = net.parents(node)[parent_index];
  int cu = net.var(target).cardinality;
  Message out;
  out.logv.assign(cu, kNegInf);
  std::vector<double> lam = lambda_product(net, store, node);

  if (use_or_path(net, kernel, node)) {
    const auto& nor = std::get<NoisyOrCpd>(net.cpd(node));
    OrInputs in = or_inputs(store, node, parent_index);
    std::vector<double> q_others;
    for (size_t k = 0; k < nor.suppressors.size(); ++k)
      if (static_cast<int>(k) != parent_index)
        q_others.push_back(nor.suppressors[k]);
    auto ol = noisyor::or_lambda_star(in.pi, q_others,
                                      nor.suppressors[parent_index],
                                      lambda_pair(lam));
    for (int t = 0; t < 2; ++t)
      out.logv[t] = in.scale_sum == kNegInf || ol.logv[t] == kNegInf
                        ? kNegInf
                        : ol.logv[t] + in.scale_sum;
  } else {
    auto cards = net.parent_cards(node);
    int configs = config_product(cards);
    int card = net.var(node).cardinality;
    std::vector<int> states(cards.size());
    for (int cfg = 0; cfg < configs; ++cfg) {
      config_from_index(cards, cfg, states);
      double base = 0.0;
      for (size_t k = 0; k < cards.size(); ++k) {
        if (static_cast<int>(k) == parent_index) continue;
        base += pi_raw(store, node, static_cast<int>(k), states[k]);
        if (base == kNegInf) break;
      }
      for (int x = 0; x < card; ++x) {
        double term = lam[x] + net.log_prob(node, x, states);
        term = term == kNegInf || base == kNegInf ? kNegInf : term + base;
        double& slot = out.logv[states[parent_index]];
        slot = kernel == Kernel::Update ? log_add(slot, term)
                                        : std::max(slot, term);
      }
    }
  }
  normalize(out, kernel);
  out.set = true;
  return out;
}

namespace {

// reduce over parent configurations of P(x|cfg) * prod_k pi(cfg_k), raw.
std::vector<double> parent_term(const Network& net, const MessageStore& store,
                                int node) {
  Kernel kernel = store.kernel;
  int card = net.var(node).cardinality;
  std::vector<double> term(card, kNegInf);
  if (use_or_path(net, kernel, node)) {
    const auto& nor = std::get<NoisyOrCpd>(net.cpd(node));
    OrInputs in = or_inputs(store, node);
    for (int x = 0; x < 2; ++x) {
      double f = noisyor::or_max_term(in.pi, nor.suppressors, x).log_factor;
      term[x] = f == kNegInf || in.scale_sum == kNegInf ? kNegInf
                                                        : f + in.scale_sum;
    }
    return term;
  }
  auto cards = net.parent_cards(node);
  int configs = config_product(cards);
  std::vector<int> states(cards.size());
  for (int cfg = 0; cfg < configs; ++cfg) {
    config_from_index(cards, cfg, states);
    double base = 0.0;
    for (size_t k = 0; k < cards.size(); ++k) {
      base += pi_raw(store, node, static_cast<int>(k), states[k]);
      if (base == kNegInf) break;
    }
    if (base == kNegInf) continue;
    for (int x = 0; x < card; ++x) {
      double t = net.log_prob(node, x, states);
      t = t == kNegInf ? kNegInf : t + base;
      term[x] = kernel == Kernel::Update ? log_add(term[x], t)
                                         : std::max(term[x], t);
    }
  }
  return term;
}

}  // namespace

Message compute_pi_message(const Network& net, const MessageStore& store,
                           int node, int child_index) {
  std::vector<double> lam = lambda_product(net, store, node, child_index);
  std::vector<double> term = parent_term(net, store, node);
  Message out;
  out.logv.resize(lam.size());
  for (size_t x = 0; x < lam.size(); ++x)
    out.logv[x] = lam[x] == kNegInf || term[x] == kNegInf ? kNegInf
                                                          : lam[x] + term[x];
  normalize(out, store.kernel);
  out.set = true;
  return out;
}

Message compute_belief(const Network& net, const MessageStore& store,
                       int node) {
  std::vector<double> lam = lambda_product(net, store, node);
  std::vector<double> term = parent_term(net, store, node);
  Message out;
  out.logv.resize(lam.size());
  for (size_t x = 0; x < lam.size(); ++x)
    out.logv[x] = lam[x] == kNegInf || term[x] == kNegInf ? kNegInf
                                                          : lam[x] + term[x];
  normalize(out, store.kernel);
  out.set = true;
  if (out.log_scale == kNegInf)
    throw Error(ErrorKind::Contradiction,
                "conflicting evidence at node '" + net.var(node).name + "'");
  return out;
}

std::vector<int> best_parent_config(const Network& net,
                                    const MessageStore& store, int node,
                                    int x) {
  auto cards = net.parent_cards(node);
  std::vector<int> best(cards.size(), 0);
  if (cards.empty()) return best;
  if (use_or_path(net, Kernel::Revise, node)) {
    const auto& nor = std::get<NoisyOrCpd>(net.cpd(node));
    OrInputs in = or_inputs(store, node);
    auto choice = noisyor::or_max_term(in.pi, nor.suppressors, x);
    for (int k : choice.members) best[k] = 1;
    return best;
  }
  int configs = config_product(cards);
  std::vector<int> states(cards.size());
  double best_v = kNegInf;
  for (int cfg = 0; cfg < configs; ++cfg) {
    config_from_index(cards, cfg, states);
    double v = net.log_prob(node, x, states);
    for (size_t k = 0; k < cards.size() && v != kNegInf; ++k)
      v += pi_raw(store, node, static_cast<int>(k), states[k]);
    if (v > best_v) {
      best_v = v;
      best = states;
    }
  }
  return best;
}

BestGivenParent best_given_parent(const Network& net,
                                  const MessageStore& store, int node,
                                  int parent_index, int u) {
  BestGivenParent out;
  std::vector<double> lam = lambda_product(net, store, node);
  auto cards = net.parent_cards(node);
  if (use_or_path(net, Kernel::Revise, node)) {
    const auto& nor = std::get<NoisyOrCpd>(net.cpd(node));
    OrInputs in = or_inputs(store, node, parent_index);
    std::vector<double> q_others;
    std::vector<int> other_ids;
    for (size_t k = 0; k < nor.suppressors.size(); ++k)
      if (static_cast<int>(k) != parent_index) {
        q_others.push_back(nor.suppressors[k]);
        other_ids.push_back(static_cast<int>(k));
      }
    auto ol = noisyor::or_lambda_star(in.pi, q_others,
                                      nor.suppressors[parent_index],
                                      lambda_pair(lam));
    out.x = ol.best_x[u];
    out.config.assign(cards.size(), 0);
    out.config[parent_index] = u;
    for (int k : ol.best_true_others[u]) out.config[other_ids[k]] = 1;
    return out;
  }
  int configs = config_product(cards);
  int card = net.var(node).cardinality;
  std::vector<int> states(cards.size());
  double best_v = kNegInf;
  out.config.assign(cards.size(), 0);
  out.config[parent_index] = u;
  for (int x = 0; x < card; ++x) {
    for (int cfg = 0; cfg < configs; ++cfg) {
      config_from_index(cards, cfg, states);
      if (states[parent_index] != u) continue;
      double v = lam[x] + net.log_prob(node, x, states);
      for (size_t k = 0; k < cards.size() && v != kNegInf; ++k) {
        if (static_cast<int>(k) == parent_index) continue;
        v += pi_raw(store, node, static_cast<int>(k), states[k]);
      }
      if (v > best_v) {
        best_v = v;
        out.x = x;
        out.config = states;
      }
    }
  }
  return out;
}

}  // namespace bn::detail
