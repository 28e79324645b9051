#pragma once

// Shared fixtures for the test suites: inline networks, random polytree /
// loopy generators, and small comparison utilities.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bn/model.hpp"
#include "bn/parser.hpp"

namespace bntest {

inline bn::Network net_from_text(const std::string& text) {
  return bn::build_network(bn::parse_network_text(text));
}

inline const char* kDataDir = BN_DATA_DIR;

inline bn::Network load_data_net(const std::string& file) {
  return bn::load_network(std::string(kDataDir) + "/" + file);
}

inline bn::Evidence load_data_ev(const std::string& file,
                                 const bn::Network& net) {
  return bn::load_evidence(std::string(kDataDir) + "/" + file, net);
}

// Three-node chain where the most probable full assignment disagrees with
// the per-node posterior argmaxes: MPE (+a,-b,-c) has p = 0.27 while the
// marginal winners are (+a,+b,-c).
inline const char* kChainMpeVsMarginal = R"(net chain
var a 2 FALSE TRUE
var b 2 FALSE TRUE
var c 2 FALSE TRUE
prior a 0.6
parents b a
cpt b 0.0 1.0 0.5 0.5
parents c b
cpt c 0.9 0.1 0.5 0.5
)";

struct RandomNet {
  bn::Network net;
  bn::Evidence ev;
};

// Random connected polytree: attach node i under a uniformly chosen earlier
// node, then flip each edge's direction with probability 1/2 (any
// orientation of a tree is a polytree). Cardinalities 2-3, dense random
// CPTs, and up to `max_obs` random observations.
inline RandomNet random_polytree(std::mt19937& rng, int n, int max_obs,
                                 int extra_edges = 0) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::uniform_int_distribution<int> card_dist(2, 3);

  std::vector<std::vector<int>> parents(n);
  for (int i = 1; i < n; ++i) {
    int other = std::uniform_int_distribution<int>(0, i - 1)(rng);
    if (rng() & 1)
      parents[i].push_back(other);  // other -> i
    else
      parents[other].push_back(i);  // i -> other (still acyclic: i < cap)
  }
  // Coin-flip orientation of a tree is always acyclic but breaks the
  // id-is-topological-order property, so extra loop edges need an explicit
  // reachability check: a -> b is safe only when no directed path already
  // leads from b to a.
  auto reaches = [&](int from, int to) {
    std::vector<int> stack = {from};
    std::vector<char> seen(n, 0);
    seen[from] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (int v = 0; v < n; ++v)
        if (!seen[v])
          for (int p : parents[v])
            if (p == u) {
              seen[v] = 1;
              stack.push_back(v);
            }
    }
    return false;
  };
  if (extra_edges > 0) {
    for (int e = 0; e < extra_edges; ++e) {
      int a = std::uniform_int_distribution<int>(0, n - 2)(rng);
      int b = std::uniform_int_distribution<int>(a + 1, n - 1)(rng);
      bool dup = false;
      for (int p : parents[b]) dup |= (p == a);
      for (int p : parents[a]) dup |= (p == b);
      if (!dup && !reaches(b, a)) parents[b].push_back(a);
    }
  }

  bn::NetworkSpec spec;
  spec.name = "random";
  for (int i = 0; i < n; ++i) {
    bn::NetworkSpec::VarDecl v;
    v.name = "v" + std::to_string(i);
    v.cardinality = card_dist(rng);
    spec.vars.push_back(v);
  }
  for (int i = 0; i < n; ++i) {
    if (!parents[i].empty()) {
      bn::NetworkSpec::ParentsDecl p;
      p.child = spec.vars[i].name;
      for (int u : parents[i]) p.parents.push_back(spec.vars[u].name);
      spec.parents.push_back(p);
    }
    bn::NetworkSpec::DistDecl d;
    d.var = spec.vars[i].name;
    d.kind = bn::NetworkSpec::DistKind::Cpt;
    int configs = 1;
    for (int u : parents[i]) configs *= spec.vars[u].cardinality;
    int card = spec.vars[i].cardinality;
    for (int c = 0; c < configs; ++c) {
      std::vector<double> row(card);
      double total = 0.0;
      for (int x = 0; x < card; ++x) total += row[x] = unif(rng);
      for (int x = 0; x < card; ++x) d.values.push_back(row[x] / total);
    }
    spec.dists.push_back(d);
  }
  RandomNet out{bn::build_network(spec), {}};

  int obs_count = std::uniform_int_distribution<int>(0, max_obs)(rng);
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  for (int k = 0; k < obs_count; ++k) {
    int v = ids[k];
    int card = out.net.var(v).cardinality;
    out.ev.observe(v, std::uniform_int_distribution<int>(0, card - 1)(rng));
  }
  return out;
}

// Random multiply-connected network: polytree plus extra forward edges.
inline RandomNet random_loopy(std::mt19937& rng, int n, int max_obs,
                              int extra_edges) {
  return random_polytree(rng, n, max_obs, extra_edges);
}

inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace bntest
