// Command-line front end: update (sum-product beliefs), revise (max-product
// interpretation, optionally cutset-conditioned), oracle (brute force) and
// sweep (winner-switch thresholds over one root prior).
//
// Exit codes: 0 success, 1 usage/input error, 2 contradictory evidence,
// 3 size limit.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bn/cutset.hpp"
#include "bn/oracle.hpp"
#include "bn/parser.hpp"
#include "bn/revise.hpp"

namespace {

using nlohmann::ordered_json;

struct CommonArgs {
  std::string net_path;
  std::string evidence_path;
  bool json = false;
  std::string trace_path;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool evidence_required) {
  cmd->add_option("--net", args.net_path, "network file")->required();
  auto* ev = cmd->add_option("--evidence", args.evidence_path, "evidence file");
  if (evidence_required) ev->required();
  cmd->add_flag("--json", args.json, "machine-readable output");
  cmd->add_option("--trace", args.trace_path,
                  "write the message log here (.json for structured form)");
}

bn::Evidence load_optional_evidence(const CommonArgs& args,
                                    const bn::Network& net) {
  if (args.evidence_path.empty()) return {};
  return bn::load_evidence(args.evidence_path, net);
}

void write_trace(const CommonArgs& args, const bn::Trace& trace,
                 const bn::Network& net) {
  if (args.trace_path.empty()) return;
  std::ofstream out(args.trace_path);
  if (!out) bn::fail_input("cannot write '" + args.trace_path + "'");
  bool json = args.trace_path.size() >= 5 &&
              args.trace_path.rfind(".json") == args.trace_path.size() - 5;
  out << (json ? bn::trace_to_json(trace, net) : bn::trace_to_text(trace, net));
}

std::string format_prob(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_sci(double log_value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e (ln %.6f)", std::exp(log_value),
                log_value);
  return buf;
}

std::string assignment_text(const bn::Network& net,
                            std::span<const int> assignment) {
  std::ostringstream out;
  for (int id = 0; id < net.size(); ++id) {
    if (id) out << ' ';
    out << net.var(id).name << '=' << net.var(id).states[assignment[id]];
  }
  return out.str();
}

ordered_json assignment_json(const bn::Network& net,
                             std::span<const int> assignment) {
  ordered_json out;
  for (int id = 0; id < net.size(); ++id)
    out[net.var(id).name] = net.var(id).states[assignment[id]];
  return out;
}

// BEL*(+x)/BEL*(-x) for binary variables; nullopt otherwise.
std::optional<double> belief_ratio(const bn::Message& bel) {
  if (bel.logv.size() != 2) return std::nullopt;
  if (bel.logv[0] == bn::kNegInf)
    return std::numeric_limits<double>::infinity();
  return std::exp(bel.logv[1] - bel.logv[0]);
}

int run_update(const CommonArgs& args) {
  bn::Network net = bn::load_network(args.net_path);
  bn::Evidence ev = load_optional_evidence(args, net);
  if (bn::classify_topology(bn::absorb_evidence(net, ev)).kind !=
      bn::Topology::SinglyConnected)
    bn::fail_input("multiply-connected: use revise --condition or oracle");
  auto res = bn::run_to_equilibrium(net, ev, bn::Kernel::Update,
                                    !args.trace_path.empty());
  write_trace(args, res.trace, net);
  if (args.json) {
    ordered_json out;
    for (int id = 0; id < net.size(); ++id)
      out["beliefs"][net.var(id).name] =
          bn::to_linear(res.store.nodes[id].belief.logv);
    std::cout << out.dump(2) << '\n';
  } else {
    for (int id = 0; id < net.size(); ++id) {
      const auto& v = net.var(id);
      auto bel = bn::to_linear(res.store.nodes[id].belief.logv);
      std::cout << "BEL(" << v.name << "):";
      for (int x = 0; x < v.cardinality; ++x)
        std::cout << ' ' << v.states[x] << '=' << format_prob(bel[x]);
      std::cout << '\n';
    }
  }
  return 0;
}

int run_revise(const CommonArgs& args, const std::string& condition) {
  bn::Network net = bn::load_network(args.net_path);
  bn::Evidence ev = load_optional_evidence(args, net);

  std::vector<int> cutset;
  bool conditioned = !condition.empty();
  if (conditioned) {
    if (condition == "auto") {
      cutset = bn::find_cutset(net, ev);
    } else {
      std::istringstream in(condition);
      std::string name;
      while (std::getline(in, name, ','))
        cutset.push_back(net.require_var(name));
    }
  } else if (bn::classify_topology(bn::absorb_evidence(net, ev)).kind !=
             bn::Topology::SinglyConnected) {
    bn::fail_input("multiply-connected: pass --condition auto|v1,v2,...");
  }

  ordered_json out;
  const bn::Interpretation* winner = nullptr;
  bn::CutsetPlan plan;
  bn::ReviseResult plain;
  if (conditioned) {
    plan = bn::condition_and_revise(net, ev, cutset);
    winner = &plan.winning_interpretation();
    // Re-run the winning instantiation for beliefs and the trace.
    bn::Evidence cond = ev;
    for (size_t i = 0; i < plan.cutset.size(); ++i)
      cond.observe(plan.cutset[i],
                   plan.candidates[plan.winner].cutset_states[i]);
    plain = bn::revise(net, cond, !args.trace_path.empty());
  } else {
    plain = bn::revise(net, ev, !args.trace_path.empty());
    winner = &plain.interpretation;
  }
  write_trace(args, plain.run.trace, net);

  if (args.json) {
    out["assignment"] = assignment_json(net, winner->assignment);
    out["log_score"] = winner->log_score;
    if (conditioned) {
      out["cutset"] = ordered_json::array();
      for (int v : plan.cutset) out["cutset"].push_back(net.var(v).name);
      out["candidates"] = ordered_json::array();
      for (const auto& cand : plan.candidates) {
        ordered_json c;
        ordered_json states;
        for (size_t i = 0; i < plan.cutset.size(); ++i)
          states[net.var(plan.cutset[i]).name] =
              net.var(plan.cutset[i]).states[cand.cutset_states[i]];
        c["cutset_states"] = states;
        c["contradictory"] = cand.contradictory;
        if (!cand.contradictory)
          c["log_score"] = cand.interpretation.log_score;
        out["candidates"].push_back(std::move(c));
      }
    }
    ordered_json ratios;
    for (int id = 0; id < net.size(); ++id)
      if (auto r = belief_ratio(plain.run.store.nodes[id].belief)) {
        if (std::isinf(*r))
          ratios[net.var(id).name] = "inf";
        else
          ratios[net.var(id).name] = *r;
      }
    out["bel_star_ratios"] = std::move(ratios);
    std::cout << out.dump(2) << '\n';
  } else {
    if (conditioned) {
      for (const auto& cand : plan.candidates) {
        std::cout << "candidate";
        for (size_t i = 0; i < plan.cutset.size(); ++i)
          std::cout << ' ' << net.var(plan.cutset[i]).name << '='
                    << net.var(plan.cutset[i]).states[cand.cutset_states[i]];
        if (cand.contradictory)
          std::cout << ": contradictory\n";
        else
          std::cout << ": score " << format_sci(cand.interpretation.log_score)
                    << '\n';
      }
    }
    std::cout << "w*: " << assignment_text(net, winner->assignment) << '\n';
    std::cout << "score: " << format_sci(winner->log_score) << '\n';
    for (int id = 0; id < net.size(); ++id)
      if (auto r = belief_ratio(plain.run.store.nodes[id].belief))
        std::cout << "BEL*(+" << net.var(id).name << ")/BEL*(-"
                  << net.var(id).name << ") = "
                  << (std::isinf(*r) ? std::string("inf") : format_prob(*r))
                  << '\n';
  }
  return 0;
}

int run_oracle(const CommonArgs& args, const std::string& query) {
  bn::Network net = bn::load_network(args.net_path);
  bn::Evidence ev = load_optional_evidence(args, net);
  if (query == "mpe") {
    auto res = bn::oracle::exact_mpe(net, ev);
    if (args.json) {
      ordered_json out;
      out["assignment"] = assignment_json(net, res.interpretation.assignment);
      out["log_score"] = res.interpretation.log_score;
      out["posterior"] = res.interpretation.posterior();
      std::cout << out.dump(2) << '\n';
    } else {
      std::cout << "w*: " << assignment_text(net, res.interpretation.assignment)
                << '\n';
      std::cout << "score: " << format_sci(res.interpretation.log_score)
                << '\n';
      std::cout << "P(w*|e) = " << format_prob(res.interpretation.posterior())
                << '\n';
    }
    return 0;
  }
  if (query.rfind("bel:", 0) == 0) {
    int var = net.require_var(query.substr(4));
    auto bel = bn::oracle::exact_bel(net, ev, var);
    if (args.json) {
      ordered_json out;
      out["beliefs"][net.var(var).name] = bel;
      std::cout << out.dump(2) << '\n';
    } else {
      const auto& v = net.var(var);
      std::cout << "BEL(" << v.name << "):";
      for (int x = 0; x < v.cardinality; ++x)
        std::cout << ' ' << v.states[x] << '=' << format_prob(bel[x]);
      std::cout << '\n';
    }
    return 0;
  }
  bn::fail_input("query must be bel:<var> or mpe");
}

int run_sweep(const CommonArgs& args, const std::string& param,
              const std::string& range, double resolution, bool descending) {
  bn::Network net = bn::load_network(args.net_path);
  bn::Evidence ev = load_optional_evidence(args, net);
  if (param.rfind("prior:", 0) != 0)
    bn::fail_input("--param must be prior:<var>");
  int var = net.require_var(param.substr(6));
  double lo, hi;
  {
    std::istringstream in(range);
    char comma = 0;
    if (!(in >> lo >> comma >> hi) || comma != ',')
      bn::fail_input("--range must be a,b");
  }
  auto switches = bn::threshold_sweep(net, ev, var, lo, hi, resolution,
                                      descending);
  if (args.json) {
    ordered_json out;
    out["param"] = param;
    out["switches"] = switches;
    std::cout << out.dump(2) << '\n';
  } else if (switches.empty()) {
    std::cout << "no switch in [" << format_prob(lo) << ", " << format_prob(hi)
              << "]\n";
  } else {
    for (double s : switches)
      std::cout << "switch at " << param << " = " << format_prob(s) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian-network belief updating and revision"};
  app.require_subcommand(1);

  CommonArgs update_args, revise_args, oracle_args, sweep_args;
  std::string condition, query, param, range;
  double resolution = 0.001;
  bool descending = false;

  auto* update_cmd = app.add_subcommand("update", "posterior beliefs (sum-product)");
  add_common(update_cmd, update_args, false);

  auto* revise_cmd =
      app.add_subcommand("revise", "most likely interpretation (max-product)");
  add_common(revise_cmd, revise_args, false);
  revise_cmd->add_option("--condition", condition,
                         "auto or comma-separated cutset variables");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force ground truth");
  add_common(oracle_cmd, oracle_args, false);
  oracle_cmd->add_option("--query", query, "bel:<var> or mpe")->required();

  auto* sweep_cmd =
      app.add_subcommand("sweep", "winner-switch thresholds over a root prior");
  add_common(sweep_cmd, sweep_args, true);
  sweep_cmd->add_option("--param", param, "prior:<var>")->required();
  sweep_cmd->add_option("--range", range, "a,b")->required();
  sweep_cmd->add_option("--resolution", resolution, "grid step");
  sweep_cmd->add_flag("--descending", descending, "sweep from b down to a");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems map to exit 1
  }

  try {
    if (update_cmd->parsed()) return run_update(update_args);
    if (revise_cmd->parsed()) return run_revise(revise_args, condition);
    if (oracle_cmd->parsed()) return run_oracle(oracle_args, query);
    return run_sweep(sweep_args, param, range, resolution, descending);
  } catch (const bn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case bn::ErrorKind::Input:
        return 1;
      case bn::ErrorKind::Contradiction:
        return 2;
      case bn::ErrorKind::SizeLimit:
        return 3;
    }
    return 1;
  }
}
