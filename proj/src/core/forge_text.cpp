#include "core/forge.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace koman {

QbfFormula normalize_qbf(const QbfFormula& f) {
  std::set<unsigned> quantified;
  unsigned top = 0;
  QbfFormula out;
  out.clauses = f.clauses;
  for (const auto& b : f.blocks) {
    for (auto v : b.variables) {
      if (v == 0) throw Error(ErrorCode::BadParameter, "variables are numbered from 1");
      if (!quantified.insert(v).second) throw Error(ErrorCode::BadParameter, "variable " + std::to_string(v) + " is quantified twice");
      top = std::max(top, v);
    }
    if (b.variables.empty()) continue;
    if (!out.blocks.empty() && out.blocks.back().existential == b.existential)
      out.blocks.back().variables.insert(out.blocks.back().variables.end(), b.variables.begin(), b.variables.end());
    else
      out.blocks.push_back(b);
  }
  std::set<unsigned> free;
  for (const auto& c : f.clauses)
    for (const auto& l : c) {
      if (l.variable == 0) throw Error(ErrorCode::BadParameter, "variables are numbered from 1");
      top = std::max(top, l.variable);
      if (!quantified.count(l.variable)) free.insert(l.variable);
    }
  if (!free.empty()) {
    if (out.blocks.empty() || !out.blocks.front().existential) out.blocks.insert(out.blocks.begin(), QuantifierBlock{true, {}});
    auto& front = out.blocks.front().variables;
    front.insert(front.begin(), free.begin(), free.end());
  }
  if (out.blocks.empty() || !out.blocks.front().existential) out.blocks.insert(out.blocks.begin(), QuantifierBlock{true, {++top}});
  if (out.blocks.size() % 2 == 0) out.blocks.push_back(QuantifierBlock{false, {++top}});
  return out;
}

namespace {

bool satisfied(const std::vector<Clause3>& clauses, const std::vector<bool>& value) {
  for (const auto& c : clauses) {
    bool any = false;
    for (const auto& l : c)
      if (value[l.variable] != l.negated) any = true;
    if (!any) return false;
  }
  return true;
}

}  // namespace

bool eval_qbf(const QbfFormula& input) {
  std::set<unsigned> named;
  for (const auto& b : input.blocks) named.insert(b.variables.begin(), b.variables.end());
  for (const auto& c : input.clauses)
    for (const auto& l : c) named.insert(l.variable);
  if (named.size() > 20) throw Error(ErrorCode::SizeLimitExceeded, "exhaustive evaluation is limited to 20 variables");
  auto f = normalize_qbf(input);
  std::vector<std::pair<unsigned, bool>> order;  // variable, existential
  unsigned top = 0;
  for (const auto& b : f.blocks)
    for (auto v : b.variables) {
      order.emplace_back(v, b.existential);
      top = std::max(top, v);
    }
  std::vector<bool> value(top + 1, false);
  std::function<bool(std::size_t)> eval = [&](std::size_t i) -> bool {
    if (i == order.size()) return satisfied(f.clauses, value);
    auto [v, exists] = order[i];
    value[v] = false;
    bool a = eval(i + 1);
    if (exists && a) return true;
    if (!exists && !a) return false;
    value[v] = true;
    return eval(i + 1);
  };
  return eval(0);
}

bool eval_cnf(const CnfFormula& f) {
  QbfFormula q;
  QuantifierBlock b{true, {}};
  for (unsigned v = 1; v <= f.variables; ++v) b.variables.push_back(v);
  q.blocks.push_back(b);
  q.clauses = f.clauses;
  return eval_qbf(q);
}

bool find_multicolored_clique(const ColoredGraph& g) {
  if (g.vertices.size() > 20) throw Error(ErrorCode::SizeLimitExceeded, "exhaustive clique search is limited to 20 vertices");
  const std::size_t k = g.colors.size();
  std::vector<std::vector<std::size_t>> classes(k);
  for (std::size_t v = 0; v < g.vertices.size(); ++v) classes[g.color_of[v]].push_back(v);
  std::set<std::pair<std::size_t, std::size_t>> adj;
  for (auto [u, v] : g.edges) {
    adj.insert({u, v});
    adj.insert({v, u});
  }
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t)> pick = [&](std::size_t c) -> bool {
    if (c == k) return true;
    for (auto v : classes[c]) {
      bool ok = true;
      for (auto w : chosen)
        if (!adj.count({v, w})) ok = false;
      if (!ok) continue;
      chosen.push_back(v);
      if (pick(c + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  return pick(0);
}

// ------------------------------------------------------------------ text

namespace {

struct DimacsText {
  unsigned declared = 0;
  std::vector<QuantifierBlock> blocks;
  std::vector<Clause3> clauses;
};

long parse_int(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Syntax, "line " + std::to_string(line) + ": expected an integer, got '" + tok + "'");
  }
}

DimacsText parse_dimacs(const std::string& text, bool allow_quantifiers) {
  DimacsText out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<Literal> pending;
  auto close_clause = [&](std::size_t at) {
    if (pending.empty()) throw Error(ErrorCode::Syntax, "line " + std::to_string(at) + ": empty clause");
    if (pending.size() > 3) throw Error(ErrorCode::BadParameter, "line " + std::to_string(at) + ": clauses may have at most three literals");
    // shorter clauses repeat their last literal
    while (pending.size() < 3) pending.push_back(pending.back());
    out.clauses.push_back({pending[0], pending[1], pending[2]});
    pending.clear();
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head == "c" || head[0] == '%') continue;
    if (head == "p") {
      std::string kind, vars, count;
      if (!(ls >> kind >> vars >> count) || (kind != "cnf" && kind != "qbf"))
        throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": malformed problem line");
      long v = parse_int(vars, lineno);
      if (v < 0) throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": negative variable count");
      out.declared = static_cast<unsigned>(v);
      continue;
    }
    if (head == "e" || head == "a") {
      if (!allow_quantifiers) throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": quantifier line in a CNF file");
      QuantifierBlock b{head == "e", {}};
      std::string tok;
      bool closed = false;
      while (ls >> tok) {
        long v = parse_int(tok, lineno);
        if (v == 0) {
          closed = true;
          break;
        }
        if (v < 0) throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": negative quantified variable");
        b.variables.push_back(static_cast<unsigned>(v));
      }
      if (!closed) throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": quantifier line must end with 0");
      out.blocks.push_back(std::move(b));
      continue;
    }
    std::istringstream all(line);
    std::string tok;
    while (all >> tok) {
      long v = parse_int(tok, lineno);
      if (v == 0)
        close_clause(lineno);
      else
        pending.push_back({static_cast<unsigned>(v < 0 ? -v : v), v < 0});
    }
  }
  if (!pending.empty()) close_clause(lineno);
  return out;
}

}  // namespace

QbfFormula parse_qbf(const std::string& text) {
  auto d = parse_dimacs(text, true);
  QbfFormula f;
  f.blocks = std::move(d.blocks);
  f.clauses = std::move(d.clauses);
  // declared but unquantified variables are outermost existential
  std::set<unsigned> quantified;
  for (const auto& b : f.blocks) quantified.insert(b.variables.begin(), b.variables.end());
  QuantifierBlock outer{true, {}};
  for (unsigned v = 1; v <= d.declared; ++v)
    if (!quantified.count(v)) outer.variables.push_back(v);
  if (!outer.variables.empty()) f.blocks.insert(f.blocks.begin(), outer);
  return f;
}

CnfFormula parse_cnf(const std::string& text) {
  auto d = parse_dimacs(text, false);
  CnfFormula f;
  f.variables = d.declared;
  for (const auto& c : d.clauses)
    for (const auto& l : c) f.variables = std::max(f.variables, l.variable);
  f.clauses = std::move(d.clauses);
  return f;
}

ColoredGraph parse_colored_graph(const std::string& text) {
  ColoredGraph g;
  std::map<std::string, std::size_t> color_index, vertex_index;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::pair<std::string, std::string>> edge_names;
  std::vector<std::size_t> edge_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string head, a, b, extra;
    if (!(ls >> head) || head[0] == '#') continue;
    if ((head != "c" && head != "e") || !(ls >> a >> b) || (ls >> extra))
      throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": expected 'c <color> <vertex>' or 'e <u> <v>'");
    if (head == "c") {
      auto [it, added] = color_index.emplace(a, g.colors.size());
      if (added) g.colors.push_back(a);
      if (!vertex_index.emplace(b, g.vertices.size()).second)
        throw Error(ErrorCode::Syntax, "line " + std::to_string(lineno) + ": vertex '" + b + "' listed twice");
      g.vertices.push_back(b);
      g.color_of.push_back(it->second);
    } else {
      edge_names.emplace_back(a, b);
      edge_lines.push_back(lineno);
    }
  }
  for (std::size_t i = 0; i < edge_names.size(); ++i) {
    auto u = vertex_index.find(edge_names[i].first), v = vertex_index.find(edge_names[i].second);
    if (u == vertex_index.end() || v == vertex_index.end())
      throw Error(ErrorCode::Syntax, "line " + std::to_string(edge_lines[i]) + ": edge names an unknown vertex");
    if (g.color_of[u->second] == g.color_of[v->second])
      throw Error(ErrorCode::BadParameter, "line " + std::to_string(edge_lines[i]) + ": edge inside one color class");
    g.edges.emplace_back(u->second, v->second);
  }
  return g;
}

std::string format_qbf(const QbfFormula& f) {
  unsigned top = 0;
  for (const auto& b : f.blocks)
    for (auto v : b.variables) top = std::max(top, v);
  for (const auto& c : f.clauses)
    for (const auto& l : c) top = std::max(top, l.variable);
  std::ostringstream out;
  out << "p cnf " << top << ' ' << f.clauses.size() << '\n';
  for (const auto& b : f.blocks) {
    out << (b.existential ? 'e' : 'a');
    for (auto v : b.variables) out << ' ' << v;
    out << " 0\n";
  }
  for (const auto& c : f.clauses) {
    for (const auto& l : c) out << (l.negated ? "-" : "") << l.variable << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace koman
