#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bn/logspace.hpp"
#include "bn/model.hpp"

namespace bn {

enum class Kernel { Update, Revise };

// A stored message or belief. logv is normalized (Update: logsumexp 0,
// Revise: max 0) and log_scale holds the removed constant, so
// logv[i] + log_scale is the unnormalized fixed-point value computed with
// no normalization anywhere. -inf marks exact zeros.
struct Message {
  std::vector<double> logv;
  double log_scale = 0.0;
  bool set = false;

  double raw(int i) const {
    if (logv[i] == kNegInf || log_scale == kNegInf) return kNegInf;
    return logv[i] + log_scale;
  }
};

struct NodeSlots {
  std::vector<Message> pi_in;      // one per parent, pi_x(u_k)
  std::vector<Message> lambda_in;  // one per child, lambda_{y_j}(x)
  std::vector<double> lambda_self; // log evidence/virtual weights at the node
  Message belief;                  // BEL or BEL*
};

struct MessageStore {
  Kernel kernel = Kernel::Update;
  std::vector<NodeSlots> nodes;

  const Message& pi_in(int child, int parent_index) const {
    return nodes[child].pi_in[parent_index];
  }
  const Message& lambda_in(int parent, int child_index) const {
    return nodes[parent].lambda_in[child_index];
  }
};

enum class MsgDirection { Causal, Diagnostic };

struct TraceEvent {
  int step = 0;
  int from = -1;
  int to = -1;
  MsgDirection direction = MsgDirection::Causal;
  std::vector<double> before;  // normalized linear values; empty if unset
  std::vector<double> after;
  // Binary-variable display ratio: lambda(+)/lambda(-) for diagnostic,
  // pi(+)/(pi(+)+pi(-)) for causal. NaN when not applicable.
  double ratio = 0.0;
  // True when the message left the previous value unchanged (within 1e-12).
  bool reinforcing = false;
};

struct Trace {
  Kernel kernel = Kernel::Update;
  std::vector<TraceEvent> events;
  int activations = 0;
};

// Two-phase activation order on the effective forest: collect toward a
// pivot per component (deepest first), then distribute outward. The pivot
// is the lowest id among nodes of maximal eccentricity in its component.
struct Schedule {
  std::vector<int> component;       // node -> component index
  std::vector<int> pivots;          // per component
  std::vector<int> toward_pivot;    // tree neighbor toward the pivot, -1 at pivots
  std::vector<int> depth;           // distance from the pivot
  std::vector<int> collect_order;   // non-pivot nodes, depth descending
  std::vector<int> distribute_order;  // all nodes, depth ascending
};

Schedule make_schedule(const Network& net, const EffectiveGraph& g);

struct PropagationResult {
  MessageStore store;
  Schedule schedule;
  Trace trace;
};

// Runs the chosen kernel to its exact fixed point on a singly-connected
// effective view. Throws Error{Input} on a multiply-connected view and
// Error{Contradiction} when the evidence has probability zero.
PropagationResult run_to_equilibrium(const Network& net, const Evidence& ev,
                                     Kernel kernel, bool want_trace = false);

// Fair asynchronous sweeps in a random node order, stopping when a full
// sweep moves no message by more than 1e-12 in normalized space. Test aid
// for order independence; equals the two-phase result on trees.
MessageStore run_async_sweeps(const Network& net, const Evidence& ev,
                              Kernel kernel, unsigned seed);

// Trace serialization (one event per line / one record per element).
std::string trace_to_text(const Trace& trace, const Network& net);
std::string trace_to_json(const Trace& trace, const Network& net);

namespace detail {

// Kernel-generic message computations used by the scheduler, the async
// runner and MPE extraction. parent_index / child_index refer to positions
// in net.parents(node) / net.children(node).
Message compute_lambda_message(const Network& net, const MessageStore& store,
                               int node, int parent_index);
Message compute_pi_message(const Network& net, const MessageStore& store,
                           int node, int child_index);
Message compute_belief(const Network& net, const MessageStore& store,
                       int node);
// Log product of the node's own evidence weight and all child lambdas
// (raw values), optionally skipping one child.
std::vector<double> lambda_product(const Network& net,
                                   const MessageStore& store, int node,
                                   int skip_child_index = -1);
// Incoming causal support, raw; uniform (0) when the message is unset.
double pi_raw(const MessageStore& store, int node, int parent_index,
              int state);

// Revise-mode argmax helpers for backpointer extraction, tie-broken toward
// the lowest state index / lexicographically smallest configuration.
// Optimizing parent configuration of max_cfg P(x|cfg) prod pi*.
std::vector<int> best_parent_config(const Network& net,
                                    const MessageStore& store, int node,
                                    int x);
// Optimizing (x, full parent config) of the node's lambda* maximization
// toward parent parent_index, with that parent fixed to state u.
struct BestGivenParent {
  int x = 0;
  std::vector<int> config;
};
BestGivenParent best_given_parent(const Network& net,
                                  const MessageStore& store, int node,
                                  int parent_index, int u);

}  // namespace detail

}  // namespace bn
