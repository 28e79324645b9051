#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bn/parser.hpp"
#include "helpers.hpp"

using namespace bn;
using bntest::net_from_text;

static const char* kChainAB = R"(net chain
var a 2 FALSE TRUE
var b 2 FALSE TRUE
prior a 0.2
parents b a
cpt b 0.9 0.1 0.1 0.9
)";

TEST_CASE("basic parse and accessors") {
  Network net = net_from_text(kChainAB);
  CHECK(net.size() == 2);
  CHECK(net.var(0).name == "a");
  CHECK(net.var_id("b") == 1);
  CHECK(net.var_id("zz") == -1);
  CHECK_THROWS_AS(net.require_var("zz"), Error);
  CHECK(net.parents(1) == std::vector<int>{0});
  CHECK(net.children(0) == std::vector<int>{1});
  CHECK(net.edge_count() == 1);
  int a1[] = {1};
  CHECK(net.prob(1, 1, a1) == doctest::Approx(0.9));
  CHECK(net.prob(0, 1, {}) == doctest::Approx(0.2));
}

TEST_CASE("validation errors carry the input kind") {
  auto bad = [](const std::string& text) {
    try {
      net_from_text(text);
      return false;
    } catch (const Error& e) {
      return e.kind() == ErrorKind::Input;
    }
  };
  // duplicate variable
  CHECK(bad("net x\nvar a 2\nvar a 2\nprior a 0.5\n"));
  // unknown parent
  CHECK(bad("net x\nvar a 2\nparents a b\nprior a 0.5\n"));
  // missing distribution
  CHECK(bad("net x\nvar a 2\n"));
  // two distributions
  CHECK(bad("net x\nvar a 2\nprior a 0.5\nprior a 0.4\n"));
  // row does not normalize
  CHECK(bad("net x\nvar a 2\ncpt a 0.5 0.6\n"));
  // wrong row length
  CHECK(bad("net x\nvar a 3 s0 s1 s2\ncpt a 0.5 0.5\n"));
  // cardinality < 2
  CHECK(bad("net x\nvar a 1 only\ncpt a 1.0\n"));
  // noisy-OR on a non-binary child
  CHECK(bad("net x\nvar a 2\nvar b 3 s0 s1 s2\nprior a 0.5\n"
            "parents b a\nnoisyor b 0.5\n"));
  // prior shorthand on a non-root
  CHECK(bad("net x\nvar a 2\nvar b 2\nprior a 0.5\nparents b a\nprior b 0.5\n"));
  // probability out of range
  CHECK(bad("net x\nvar a 2\nprior a 1.5\n"));
}

TEST_CASE("cycles are rejected with a path") {
  try {
    net_from_text(
        "net x\nvar a 2\nvar b 2\n"
        "parents a b\ncpt a 0.5 0.5 0.5 0.5\n"
        "parents b a\ncpt b 0.5 0.5 0.5 0.5\n");
    FAIL("expected a cycle error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("cycle") != std::string::npos);
    CHECK(msg.find("a") != std::string::npos);
    CHECK(msg.find("b") != std::string::npos);
  }
}

TEST_CASE("mixed-radix config helpers, last position fastest") {
  std::vector<int> cards = {2, 3};
  CHECK(config_product(cards) == 6);
  std::vector<int> st(2);
  config_from_index(cards, 4, st);
  CHECK(st == std::vector<int>{1, 1});
  CHECK(config_index(cards, st) == 4);
  for (int i = 0; i < 6; ++i) {
    config_from_index(cards, i, st);
    CHECK(config_index(cards, st) == i);
  }
}

TEST_CASE("noisy-OR expansion equals the closed form") {
  Network net = bntest::load_data_net("fig3-sec4.bn");
  for (int id = 0; id < net.size(); ++id) {
    if (!net.is_noisy_or(id)) continue;
    TableCpd table = expand_noisy_or(net, id);
    auto cards = net.parent_cards(id);
    std::vector<int> cfg(cards.size());
    for (int c = 0; c < net.config_count(id); ++c) {
      config_from_index(cards, c, cfg);
      for (int x = 0; x < 2; ++x)
        CHECK(table.probs[c * 2 + x] == doctest::Approx(net.prob(id, x, cfg)));
    }
  }
}

TEST_CASE("evidence bookkeeping") {
  Network net = net_from_text(kChainAB);
  Evidence ev;
  ev.observe(0, 1);
  CHECK_THROWS_AS(ev.observe(0, 0), Error);
  ev.add_virtual(1, {0.5, 1.0});
  ev.add_virtual(1, {0.5, 1.0});
  CHECK(ev.virtual_findings.at(1)[0] == doctest::Approx(0.25));
  validate_evidence(net, ev);

  Evidence bad;
  bad.observe(0, 7);
  CHECK_THROWS_AS(validate_evidence(net, bad), Error);
  Evidence bad2;
  bad2.add_virtual(1, {0.5});
  CHECK_THROWS_AS(validate_evidence(net, bad2), Error);
}

TEST_CASE("evidence text round trip") {
  Network net = bntest::load_data_net("fig3-sec4.bn");
  Evidence ev = bntest::load_data_ev("symptoms.ev", net);
  CHECK(ev.observations.size() == 4);
  CHECK(ev.observations.at(net.require_var("m1")) == 1);
  CHECK(ev.observations.at(net.require_var("m2")) == 0);
  std::string text = print_evidence(ev, net);
  Evidence again = parse_evidence_text(text, net);
  CHECK(again.observations == ev.observations);

  Evidence by_index = parse_evidence_text("obs m1 1\nvirtual d2 0.5 1\n", net);
  CHECK(by_index.observations.at(net.require_var("m1")) == 1);
  CHECK(by_index.virtual_findings.at(net.require_var("d2"))[1] ==
        doctest::Approx(1.0));
}

TEST_CASE("print/parse is a fixed point") {
  Network net = bntest::load_data_net("fig3-sec4.bn");
  std::string once = print_network(net);
  std::string twice = print_network(build_network(parse_network_text(once)));
  CHECK(once == twice);

  std::mt19937 rng(7);
  for (int t = 0; t < 20; ++t) {
    auto rn = bntest::random_polytree(rng, 8, 0);
    std::string p1 = print_network(rn.net);
    std::string p2 = print_network(build_network(parse_network_text(p1)));
    CHECK(p1 == p2);
  }
}

TEST_CASE("topology classification and clamping semantics") {
  Network net = bntest::load_data_net("fig3-sec4.bn");
  TopologyReport plain = classify_topology(net);
  CHECK(plain.kind == Topology::MultiplyConnected);
  CHECK(plain.edges == 9);
  CHECK(plain.independent_cycles == 2);

  // Observing the symptom layer clamps only outgoing links (symptoms are
  // leaves), so the loops survive.
  Evidence ev = bntest::load_data_ev("symptoms.ev", net);
  TopologyReport observed = classify_topology(absorb_evidence(net, ev));
  CHECK(observed.kind == Topology::MultiplyConnected);
  CHECK(observed.independent_cycles == 2);

  // Clamping d1 cuts its three outgoing links and the rest is a tree.
  std::vector<int> extra = {net.require_var("d1")};
  EffectiveGraph g = absorb_evidence(net, ev, extra);
  TopologyReport cut = classify_topology(g);
  CHECK(cut.kind == Topology::SinglyConnected);
  CHECK(g.clamped[net.require_var("d1")]);
  CHECK_FALSE(g.has_edge(net.require_var("d1"), net.require_var("m1")));
  CHECK(g.has_edge(net.require_var("d2"), net.require_var("m1")));
}

TEST_CASE("with_prior replaces a binary root prior") {
  Network net = net_from_text(kChainAB);
  Network tuned = net.with_prior(0, 0.7);
  CHECK(tuned.prob(0, 1, {}) == doctest::Approx(0.7));
  int a1[] = {1};
  CHECK(tuned.prob(1, 1, a1) == doctest::Approx(0.9));
  CHECK_THROWS_AS(net.with_prior(1, 0.5), Error);  // not a root
}

TEST_CASE("relabeling declaration order keeps semantics") {
  // Same chain with b declared first: beliefs by name must agree.
  Network swapped = net_from_text(
      "net chain\nvar b 2 FALSE TRUE\nvar a 2 FALSE TRUE\n"
      "prior a 0.2\nparents b a\ncpt b 0.9 0.1 0.1 0.9\n");
  Network net = net_from_text(kChainAB);
  int sa[] = {1};
  CHECK(swapped.prob(swapped.require_var("b"), 1, sa) ==
        doctest::Approx(net.prob(net.require_var("b"), 1, sa)));
}
