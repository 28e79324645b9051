#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bn/error.hpp"

namespace bn {

// Binary variables use state index 0 = FALSE, 1 = TRUE, so printed vectors
// read (P(-x), P(+x)).
struct Variable {
  int id = -1;
  std::string name;
  int cardinality = 0;
  std::vector<std::string> states;  // length == cardinality
};

// Probabilities indexed probs[config * cardinality + state]; parent
// configurations are mixed-radix with the last declared parent varying
// fastest. A root carries a single configuration (the prior vector).
struct TableCpd {
  std::vector<double> probs;
};

// Per-parent suppressor q_i; the link strength is c_i = 1 - q_i. No leak
// term: P(+x | all parents FALSE) = 0. Child and parents must be binary.
struct NoisyOrCpd {
  std::vector<double> suppressors;
};

using Cpd = std::variant<TableCpd, NoisyOrCpd>;

// Raw parsed description handed to build_network. Line numbers are kept for
// error reporting; 0 means "not from a file".
struct NetworkSpec {
  struct VarDecl {
    std::string name;
    int cardinality = 2;
    std::vector<std::string> states;
    int line = 0;
  };
  struct ParentsDecl {
    std::string child;
    std::vector<std::string> parents;
    int line = 0;
  };
  enum class DistKind { Cpt, NoisyOr, Prior };
  struct DistDecl {
    std::string var;
    DistKind kind = DistKind::Cpt;
    std::vector<double> values;
    int line = 0;
  };

  std::string name = "net";
  std::vector<VarDecl> vars;
  std::vector<ParentsDecl> parents;
  std::vector<DistDecl> dists;
};

class Network {
 public:
  int size() const { return static_cast<int>(vars_.size()); }
  const std::string& name() const { return name_; }
  const Variable& var(int id) const { return vars_[id]; }
  int var_id(const std::string& name) const;  // -1 when absent
  int require_var(const std::string& name) const;
  const std::vector<int>& parents(int id) const { return parents_[id]; }
  const std::vector<int>& children(int id) const { return children_[id]; }
  const Cpd& cpd(int id) const { return cpds_[id]; }
  bool is_noisy_or(int id) const;

  // Number of joint parent configurations of node id.
  int config_count(int id) const;
  std::vector<int> parent_cards(int id) const;

  // P(state | parent_states) for any cpd kind.
  double prob(int id, int state, std::span<const int> parent_states) const;
  double log_prob(int id, int state, std::span<const int> parent_states) const;

  // Copy with one binary root's prior P(TRUE) replaced (used by sweeps).
  Network with_prior(int root, double p_true) const;

  int edge_count() const;

  friend Network build_network(const NetworkSpec& spec);

 private:
  std::string name_;
  std::vector<Variable> vars_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<Cpd> cpds_;
};

Network build_network(const NetworkSpec& spec);

// Expand a noisy-OR node into an equivalent full table (testing aid and the
// generic fallback path).
TableCpd expand_noisy_or(const Network& net, int id);

struct Evidence {
  std::map<int, int> observations;
  // Unnormalized nonnegative weight vectors; repeated findings on one
  // variable multiply elementwise.
  std::map<int, std::vector<double>> virtual_findings;

  void observe(int var, int state);
  void add_virtual(int var, std::vector<double> weights);
  bool empty() const { return observations.empty() && virtual_findings.empty(); }
};

// Checks states against the network and throws on out-of-range indices.
void validate_evidence(const Network& net, const Evidence& ev);

enum class Topology { SinglyConnected, MultiplyConnected };

struct TopologyReport {
  Topology kind = Topology::SinglyConnected;
  int independent_cycles = 0;  // edges - nodes + components
  int components = 1;
  int edges = 0;
};

// Undirected view after clamping: a clamped (observed) variable keeps its
// incoming links but its outgoing links are cut, since an instantiated node
// sends fixed indicator messages to its children while its parents remain
// coupled through it.
struct EffectiveGraph {
  std::vector<std::vector<int>> neighbors;
  std::vector<char> clamped;
  // True when the undirected edge parent->child survives clamping.
  bool has_edge(int parent, int child) const;
};

EffectiveGraph absorb_evidence(const Network& net, const Evidence& ev);
// Same view with additional variables clamped (cutset conditioning).
EffectiveGraph absorb_evidence(const Network& net, const Evidence& ev,
                               std::span<const int> extra_clamped);

TopologyReport classify_topology(const Network& net);
TopologyReport classify_topology(const EffectiveGraph& g);

// Mixed-radix helpers; last position varies fastest.
int config_index(std::span<const int> cards, std::span<const int> states);
void config_from_index(std::span<const int> cards, int index,
                       std::span<int> states_out);
int config_product(std::span<const int> cards);

}  // namespace bn
