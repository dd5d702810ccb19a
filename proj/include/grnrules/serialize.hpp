#pragma once

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grnrules/search.hpp"

namespace grnrules {

struct GenomeParseError : std::runtime_error {
  int line;
  GenomeParseError(int line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
};

// Shortest decimal that round-trips to the same double.
inline std::string format_real(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Canonical network genome text: logic, connectivity, cycle count, then one
// line per node with its connections, function id, and start state.
inline std::string format_genome(const NetworkGenome& g) {
  std::ostringstream out;
  out << "logic=" << (g.logic == Logic::boolean ? "boolean" : "fuzzy") << "\n";
  out << "b=" << g.connectivity << "\n";
  out << "t=" << g.cycles << "\n";
  for (int i = 0; i < g.size(); ++i) {
    const NodeGene& n = g.nodes[i];
    out << "node " << i << ":";
    for (int c : n.connections) out << " " << c;
    out << " " << n.function_id << " " << format_real(n.start_state) << "\n";
  }
  return out.str();
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline long parse_int(const std::string& s, int line) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw GenomeParseError(line, "bad integer '" + s + "'");
  return v;
}

inline double parse_real(const std::string& s, int line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw GenomeParseError(line, "bad real '" + s + "'");
  return v;
}

inline std::string expect_key(std::string_view text, const std::string& key,
                              int line) {
  const std::string prefix = key + "=";
  if (text.substr(0, prefix.size()) != prefix)
    throw GenomeParseError(line, "expected '" + key + "=...'");
  return std::string(text.substr(prefix.size()));
}

}  // namespace detail

inline NetworkGenome parse_genome(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };

  NetworkGenome g;
  if (!next_line()) throw GenomeParseError(1, "empty genome");
  const std::string logic = detail::expect_key(line, "logic", line_no);
  if (logic == "boolean") {
    g.logic = Logic::boolean;
    g.functions = FunctionSetKind::boolean_named;
  } else if (logic == "fuzzy") {
    g.logic = Logic::fuzzy;
    g.functions = FunctionSetKind::fuzzy;
  } else {
    throw GenomeParseError(line_no, "unknown logic '" + logic + "'");
  }
  if (!next_line()) throw GenomeParseError(line_no, "missing b=");
  g.connectivity =
      static_cast<int>(detail::parse_int(detail::expect_key(line, "b", line_no), line_no));
  if (g.connectivity < 1)
    throw GenomeParseError(line_no, "b must be >= 1");
  if (!next_line()) throw GenomeParseError(line_no, "missing t=");
  g.cycles =
      static_cast<int>(detail::parse_int(detail::expect_key(line, "t", line_no), line_no));
  if (g.cycles < kMinCycles || g.cycles > kMaxCycles)
    throw GenomeParseError(line_no, "t out of range [1,32]");

  while (next_line()) {
    auto colon = line.find(':');
    if (colon == std::string::npos || line.substr(0, 5) != "node ")
      throw GenomeParseError(line_no, "expected 'node <i>: ...'");
    const long idx = detail::parse_int(line.substr(5, colon - 5), line_no);
    if (idx != g.size())
      throw GenomeParseError(line_no, "node index out of order");
    auto toks = detail::split_ws(line.substr(colon + 1));
    if (static_cast<int>(toks.size()) != g.connectivity + 2)
      throw GenomeParseError(line_no, "wrong field count for node line");
    NodeGene n;
    n.connections.resize(g.connectivity);
    for (int k = 0; k < g.connectivity; ++k)
      n.connections[k] = static_cast<int>(detail::parse_int(toks[k], line_no));
    n.function_id =
        static_cast<int>(detail::parse_int(toks[g.connectivity], line_no));
    n.start_state = detail::parse_real(toks[g.connectivity + 1], line_no);
    g.nodes.push_back(std::move(n));
  }
  if (g.nodes.empty()) throw GenomeParseError(line_no, "genome has no nodes");

  // Whole-genome validation with line attribution per node.
  const int nfun = function_count(g.functions, g.connectivity);
  for (int i = 0; i < g.size(); ++i) {
    const NodeGene& n = g.nodes[i];
    const int node_line = 4 + i;
    for (int c : n.connections)
      if (c < 0 || c >= g.size())
        throw GenomeParseError(node_line, "connection index out of range");
    if (n.function_id < 0 || n.function_id >= nfun)
      throw GenomeParseError(node_line, "bad function id");
    if (g.logic == Logic::boolean) {
      if (n.start_state != 0.0 && n.start_state != 1.0)
        throw GenomeParseError(node_line, "boolean start state must be 0 or 1");
    } else if (!(n.start_state >= 0.0 && n.start_state <= 1.0)) {
      throw GenomeParseError(node_line, "fuzzy start state outside [0,1]");
    }
  }
  return g;
}

// Ruleset genome text, same spirit as the network format.
inline std::string format_ruleset(const TernaryRuleSetGenome& g) {
  std::ostringstream out;
  out << "kind=ternary\n";
  out << "inputs=" << g.inputs << "\n";
  out << "outputs=" << g.outputs << "\n";
  for (int i = 0; i < g.size(); ++i) {
    out << "rule " << i << ": ";
    for (Ternary s : g.rules[i].condition) out << ternary_char(s);
    out << " ";
    for (std::uint8_t a : g.rules[i].action) out << int(a);
    out << "\n";
  }
  return out.str();
}

inline std::string format_ruleset(const IntervalRuleSetGenome& g) {
  std::ostringstream out;
  out << "kind=interval\n";
  out << "inputs=" << g.inputs << "\n";
  out << "outputs=" << g.outputs << "\n";
  for (int i = 0; i < g.size(); ++i) {
    out << "rule " << i << ":";
    for (double b : g.rules[i].bounds) out << " " << format_real(b);
    out << " |";
    for (std::uint8_t a : g.rules[i].action) out << " " << int(a);
    out << "\n";
  }
  return out.str();
}

inline TernaryRuleSetGenome parse_ternary_ruleset(const std::string& text);
inline IntervalRuleSetGenome parse_interval_ruleset(const std::string& text);

inline std::string format_any_genome(const Genome& g) {
  if (const auto* net = std::get_if<NetworkGenome>(&g)) return format_genome(*net);
  if (const auto* rs = std::get_if<TernaryRuleSetGenome>(&g))
    return format_ruleset(*rs);
  return format_ruleset(std::get<IntervalRuleSetGenome>(g));
}

inline Genome parse_any_genome(const std::string& text) {
  std::istringstream in(text);
  std::string first;
  std::getline(in, first);
  if (first.rfind("logic=", 0) == 0) return parse_genome(text);
  if (first == "kind=ternary") return parse_ternary_ruleset(text);
  if (first == "kind=interval") return parse_interval_ruleset(text);
  throw GenomeParseError(1, "unrecognized genome header");
}

inline TernaryRuleSetGenome parse_ternary_ruleset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };
  TernaryRuleSetGenome g;
  if (!next_line() || line != "kind=ternary")
    throw GenomeParseError(line_no, "expected kind=ternary");
  if (!next_line()) throw GenomeParseError(line_no, "missing inputs=");
  g.inputs = static_cast<int>(
      detail::parse_int(detail::expect_key(line, "inputs", line_no), line_no));
  if (!next_line()) throw GenomeParseError(line_no, "missing outputs=");
  g.outputs = static_cast<int>(
      detail::parse_int(detail::expect_key(line, "outputs", line_no), line_no));
  while (next_line()) {
    auto colon = line.find(':');
    if (colon == std::string::npos || line.substr(0, 5) != "rule ")
      throw GenomeParseError(line_no, "expected 'rule <i>: ...'");
    auto toks = detail::split_ws(line.substr(colon + 1));
    if (toks.size() != 2 || static_cast<int>(toks[0].size()) != g.inputs ||
        static_cast<int>(toks[1].size()) != g.outputs)
      throw GenomeParseError(line_no, "bad rule line");
    TernaryRule r;
    for (char c : toks[0]) {
      switch (c) {
        case '0': r.condition.push_back(Ternary::zero); break;
        case '1': r.condition.push_back(Ternary::one); break;
        case '#': r.condition.push_back(Ternary::any); break;
        default: throw GenomeParseError(line_no, "bad condition symbol");
      }
    }
    for (char c : toks[1]) {
      if (c != '0' && c != '1')
        throw GenomeParseError(line_no, "bad action bit");
      r.action.push_back(c == '1' ? 1 : 0);
    }
    g.rules.push_back(std::move(r));
  }
  if (!ruleset_valid(g)) throw GenomeParseError(line_no, "invalid ruleset");
  return g;
}

inline IntervalRuleSetGenome parse_interval_ruleset(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty()) return true;
    }
    return false;
  };
  IntervalRuleSetGenome g;
  if (!next_line() || line != "kind=interval")
    throw GenomeParseError(line_no, "expected kind=interval");
  if (!next_line()) throw GenomeParseError(line_no, "missing inputs=");
  g.inputs = static_cast<int>(
      detail::parse_int(detail::expect_key(line, "inputs", line_no), line_no));
  if (!next_line()) throw GenomeParseError(line_no, "missing outputs=");
  g.outputs = static_cast<int>(
      detail::parse_int(detail::expect_key(line, "outputs", line_no), line_no));
  while (next_line()) {
    auto colon = line.find(':');
    if (colon == std::string::npos || line.substr(0, 5) != "rule ")
      throw GenomeParseError(line_no, "expected 'rule <i>: ...'");
    auto toks = detail::split_ws(line.substr(colon + 1));
    auto bar = std::find(toks.begin(), toks.end(), "|");
    if (bar == toks.end() ||
        static_cast<int>(bar - toks.begin()) != 2 * g.inputs ||
        static_cast<int>(toks.end() - bar - 1) != g.outputs)
      throw GenomeParseError(line_no, "bad rule line");
    IntervalRuleSetGenome::Rule r;
    for (auto it = toks.begin(); it != bar; ++it)
      r.bounds.push_back(detail::parse_real(*it, line_no));
    for (auto it = bar + 1; it != toks.end(); ++it)
      r.action.push_back(
          static_cast<std::uint8_t>(detail::parse_int(*it, line_no)));
    g.rules.push_back(std::move(r));
  }
  if (!ruleset_valid(g)) throw GenomeParseError(line_no, "invalid ruleset");
  return g;
}

}  // namespace grnrules
