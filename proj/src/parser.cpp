#include "bn/parser.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bn {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) {
    if (t[0] == '#') break;
    toks.push_back(t);
  }
  return toks;
}

double parse_prob(const std::string& tok, int line) {
  double v;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail_input("bad number '" + tok + "' (line " + std::to_string(line) + ")");
  return v;
}

int parse_int(const std::string& tok, int line) {
  int v;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    fail_input("bad integer '" + tok + "' (line " + std::to_string(line) + ")");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_input("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

NetworkSpec parse_network_text(const std::string& text) {
  NetworkSpec spec;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& d = toks[0];
    if (d == "net") {
      if (toks.size() != 2)
        fail_input("net directive takes one name (line " +
                   std::to_string(lineno) + ")");
      spec.name = toks[1];
    } else if (d == "var") {
      if (toks.size() < 3)
        fail_input("var needs a name and cardinality (line " +
                   std::to_string(lineno) + ")");
      NetworkSpec::VarDecl v;
      v.name = toks[1];
      v.cardinality = parse_int(toks[2], lineno);
      v.states.assign(toks.begin() + 3, toks.end());
      v.line = lineno;
      spec.vars.push_back(std::move(v));
    } else if (d == "parents") {
      if (toks.size() < 3)
        fail_input("parents needs a child and at least one parent (line " +
                   std::to_string(lineno) + ")");
      NetworkSpec::ParentsDecl p;
      p.child = toks[1];
      p.parents.assign(toks.begin() + 2, toks.end());
      p.line = lineno;
      spec.parents.push_back(std::move(p));
    } else if (d == "cpt" || d == "noisyor" || d == "prior") {
      if (toks.size() < 3)
        fail_input(d + " needs a variable and values (line " +
                   std::to_string(lineno) + ")");
      NetworkSpec::DistDecl dist;
      dist.var = toks[1];
      dist.kind = d == "cpt"      ? NetworkSpec::DistKind::Cpt
                  : d == "noisyor" ? NetworkSpec::DistKind::NoisyOr
                                   : NetworkSpec::DistKind::Prior;
      for (size_t i = 2; i < toks.size(); ++i)
        dist.values.push_back(parse_prob(toks[i], lineno));
      dist.line = lineno;
      spec.dists.push_back(std::move(dist));
    } else {
      fail_input("unknown directive '" + d + "' (line " +
                 std::to_string(lineno) + ")");
    }
  }
  return spec;
}

Network load_network(const std::string& path) {
  return build_network(parse_network_text(read_file(path)));
}

std::string print_network(const Network& net) {
  std::ostringstream out;
  out << "net " << net.name() << '\n';
  for (int id = 0; id < net.size(); ++id) {
    const auto& v = net.var(id);
    out << "var " << v.name << ' ' << v.cardinality;
    for (const auto& s : v.states) out << ' ' << s;
    out << '\n';
  }
  for (int id = 0; id < net.size(); ++id) {
    const auto& v = net.var(id);
    if (!net.parents(id).empty()) {
      out << "parents " << v.name;
      for (int p : net.parents(id)) out << ' ' << net.var(p).name;
      out << '\n';
    }
    if (const auto* nor = std::get_if<NoisyOrCpd>(&net.cpd(id))) {
      out << "noisyor " << v.name;
      for (double q : nor->suppressors) out << ' ' << format_double(1.0 - q);
      out << '\n';
    } else {
      const auto& t = std::get<TableCpd>(net.cpd(id));
      if (net.parents(id).empty() && v.cardinality == 2) {
        out << "prior " << v.name << ' ' << format_double(t.probs[1]) << '\n';
      } else {
        out << "cpt " << v.name;
        for (double p : t.probs) out << ' ' << format_double(p);
        out << '\n';
      }
    }
  }
  return out.str();
}

Evidence parse_evidence_text(const std::string& text, const Network& net) {
  Evidence ev;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& d = toks[0];
    if (d == "obs") {
      if (toks.size() != 3)
        fail_input("obs takes a variable and a state (line " +
                   std::to_string(lineno) + ")");
      int id = net.require_var(toks[1]);
      const auto& v = net.var(id);
      int state = -1;
      for (int s = 0; s < v.cardinality; ++s)
        if (v.states[s] == toks[2]) state = s;
      if (state < 0) {
        int parsed;
        auto [ptr, ec] =
            std::from_chars(toks[2].data(), toks[2].data() + toks[2].size(),
                            parsed);
        if (ec == std::errc() && ptr == toks[2].data() + toks[2].size())
          state = parsed;
      }
      if (state < 0 || state >= v.cardinality)
        fail_input("unknown state '" + toks[2] + "' of '" + v.name +
                   "' (line " + std::to_string(lineno) + ")");
      ev.observe(id, state);
    } else if (d == "virtual") {
      int id = net.require_var(toks[1]);
      std::vector<double> w;
      for (size_t i = 2; i < toks.size(); ++i)
        w.push_back(parse_prob(toks[i], lineno));
      if (static_cast<int>(w.size()) != net.var(id).cardinality)
        fail_input("virtual finding on '" + net.var(id).name +
                   "' needs " + std::to_string(net.var(id).cardinality) +
                   " weights (line " + std::to_string(lineno) + ")");
      ev.add_virtual(id, std::move(w));
    } else {
      fail_input("unknown evidence directive '" + d + "' (line " +
                 std::to_string(lineno) + ")");
    }
  }
  return ev;
}

Evidence load_evidence(const std::string& path, const Network& net) {
  return parse_evidence_text(read_file(path), net);
}

std::string print_evidence(const Evidence& ev, const Network& net) {
  std::ostringstream out;
  for (auto [var, state] : ev.observations)
    out << "obs " << net.var(var).name << ' ' << net.var(var).states[state]
        << '\n';
  for (const auto& [var, w] : ev.virtual_findings) {
    out << "virtual " << net.var(var).name;
    for (double x : w) out << ' ' << format_double(x);
    out << '\n';
  }
  return out.str();
}

}  // namespace bn
