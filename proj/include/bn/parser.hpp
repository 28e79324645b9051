#pragma once

#include <string>

#include "bn/model.hpp"

namespace bn {

// Line-oriented network format. `#` starts a comment. Directives:
//   net <name>
//   var <name> <cardinality> [state labels]
//   parents <var> <p1> ...
//   cpt <var> <probabilities>   (child state fastest within each parent
//                                configuration; configurations mixed-radix,
//                                last parent fastest)
//   noisyor <var> <c1> ... <cn> (c_i = 1 - q_i, aligned with parents order)
//   prior <var> <p_true>        (binary roots)
NetworkSpec parse_network_text(const std::string& text);
Network load_network(const std::string& path);

// Canonical form: one net line, var lines in id order, then per variable its
// parents line (if any) followed by its distribution line. Parsing the
// output reproduces the network byte for byte.
std::string print_network(const Network& net);

// Evidence format: `obs <var> <state>` (state label or index) and
// `virtual <var> <w1> ... <wk>`.
Evidence parse_evidence_text(const std::string& text, const Network& net);
Evidence load_evidence(const std::string& path, const Network& net);
std::string print_evidence(const Evidence& ev, const Network& net);

// Shortest round-trip decimal form (deterministic output).
std::string format_double(double v);

}  // namespace bn
