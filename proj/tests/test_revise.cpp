#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bn/oracle.hpp"
#include "bn/revise.hpp"
#include "helpers.hpp"

using namespace bn;
using bntest::net_from_text;

static double bel_star_ratio(const PropagationResult& run, int node) {
  const Message& b = run.store.nodes[node].belief;
  if (b.logv[0] == kNegInf) return std::numeric_limits<double>::infinity();
  return std::exp(b.logv[1] - b.logv[0]);
}

TEST_CASE("chain MPE disagrees with marginal argmax") {
  Network net = net_from_text(bntest::kChainMpeVsMarginal);
  auto res = revise(net, {});
  CHECK(res.interpretation.assignment == std::vector<int>{1, 0, 0});
  CHECK(std::exp(res.interpretation.log_score) == doctest::Approx(0.27));
  // The sum-product winner at b is TRUE; the committed value is FALSE.
  auto upd = run_to_equilibrium(net, {}, Kernel::Update);
  auto bel_b = to_linear(upd.store.nodes[1].belief.logv);
  CHECK(bel_b[1] > bel_b[0]);
}

TEST_CASE("chain-rule score recomputation agrees") {
  Network net = net_from_text(bntest::kChainMpeVsMarginal);
  auto res = revise(net, {});
  CHECK(res.interpretation.log_score ==
        doctest::Approx(
            chain_rule_log_score(net, {}, res.interpretation.assignment)));
  CHECK(res.interpretation.log_pivot_score ==
        doctest::Approx(res.interpretation.log_score));
}

TEST_CASE("observations are respected in the extraction") {
  Network net = net_from_text(bntest::kChainMpeVsMarginal);
  Evidence ev;
  ev.observe(1, 1);  // force +b
  auto res = revise(net, ev);
  CHECK(res.interpretation.assignment[1] == 1);
  auto expect = oracle::exact_mpe(net, ev);
  CHECK(res.interpretation.assignment == expect.interpretation.assignment);
  CHECK(res.interpretation.log_score ==
        doctest::Approx(expect.interpretation.log_score));
}

TEST_CASE("diagnosis network, d1 clamped TRUE") {
  Network net = bntest::load_data_net("fig3-sec4.bn");
  Evidence ev = bntest::load_data_ev("symptoms-d1-true.ev", net);
  auto res = revise(net, ev);
  // All remaining diseases FALSE.
  CHECK(res.interpretation.assignment[net.require_var("d2")] == 0);
  CHECK(res.interpretation.assignment[net.require_var("d3")] == 0);
  CHECK(res.interpretation.assignment[net.require_var("d4")] == 0);
  CHECK(bel_star_ratio(res.run, net.require_var("d2")) ==
        doctest::Approx(0.108889).epsilon(1e-3));
  CHECK(bel_star_ratio(res.run, net.require_var("d3")) ==
        doctest::Approx(0.245).epsilon(1e-3));
  CHECK(bel_star_ratio(res.run, net.require_var("d4")) ==
        doctest::Approx(0.025).epsilon(1e-3));
  // Ratios equal the oracle's max-marginal ratios.
  for (const char* name : {"d2", "d3", "d4"}) {
    int v = net.require_var(name);
    auto mm = oracle::exact_max_marginal(net, ev, v);
    CHECK(bel_star_ratio(res.run, v) ==
          doctest::Approx(std::exp(mm[1] - mm[0])).epsilon(1e-9));
  }
}

TEST_CASE("diagnosis network, d1 clamped FALSE (retraction)") {
  Network net = bntest::load_data_net("fig3-sec4.bn");
  Evidence ev = bntest::load_data_ev("symptoms-d1-false.ev", net);
  auto res = revise(net, ev);
  CHECK(res.interpretation.assignment[net.require_var("d2")] == 1);
  CHECK(res.interpretation.assignment[net.require_var("d3")] == 1);
  CHECK(res.interpretation.assignment[net.require_var("d4")] == 0);
  CHECK(bel_star_ratio(res.run, net.require_var("d4")) ==
        doctest::Approx(0.025).epsilon(1e-3));
}

TEST_CASE("ties break toward the lowest state index") {
  // Two equally likely joint states; the committed one is lexicographically
  // first, matching the oracle's rule.
  Network net = net_from_text(
      "net t\nvar a 2\nvar b 2\nprior a 0.5\n"
      "parents b a\ncpt b 0.5 0.5 0.5 0.5\n");
  auto res = revise(net, {});
  CHECK(res.interpretation.assignment == std::vector<int>{0, 0});
  auto expect = oracle::exact_mpe(net, {});
  CHECK(res.interpretation.assignment == expect.interpretation.assignment);
}

TEST_CASE("anticipatory leaf changes the committed assignment") {
  // Under updating an unobserved leaf is transparent; under revision its
  // best-case factor max_y P(y|x) can flip the winner. The leaf here scores
  // 1.0 when a is FALSE but only 0.5 when a is TRUE.
  Network base = net_from_text("net f\nvar a 2\nprior a 0.6\n");
  Network extended = net_from_text(
      "net f\nvar a 2\nvar y 2\nprior a 0.6\n"
      "parents y a\ncpt y 0 1 0.5 0.5\n");
  auto before = revise(base, {});
  CHECK(before.interpretation.assignment[0] == 1);  // +a wins alone
  auto after = revise(extended, {});
  CHECK(after.interpretation.assignment[0] == 0);   // -a wins with the leaf
  auto expect = oracle::exact_mpe(extended, {});
  CHECK(after.interpretation.assignment == expect.interpretation.assignment);
}

TEST_CASE("random polytrees match the exhaustive MPE") {
  std::mt19937 rng(47);
  int done = 0;
  while (done < 60) {
    auto rn = bntest::random_polytree(rng, 9, 3);
    ReviseResult res;
    bool contra = false;
    try {
      res = revise(rn.net, rn.ev);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::Contradiction);
      contra = true;
    }
    oracle::MpeResult expect;
    bool contra_oracle = false;
    try {
      expect = oracle::exact_mpe(rn.net, rn.ev);
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::Contradiction);
      contra_oracle = true;
    }
    CHECK(contra == contra_oracle);
    if (!contra) {
      CHECK(res.interpretation.log_score ==
            doctest::Approx(expect.interpretation.log_score).epsilon(1e-12));
      if (expect.interpretation.log_score - expect.log_runner_up > 1e-9)
        CHECK(res.interpretation.assignment ==
              expect.interpretation.assignment);
    }
    ++done;
  }
}

TEST_CASE("revise belief scale carries the best joint score") {
  Network net = net_from_text(bntest::kChainMpeVsMarginal);
  auto res = revise(net, {});
  const Message& bel = res.run.store.nodes[0].belief;
  double best = bel.logv[res.interpretation.assignment[0]] + bel.log_scale;
  CHECK(best == doctest::Approx(std::log(0.27)));
}
