#include "core/instance_json.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace koman {

using nlohmann::json;

namespace {

[[noreturn]] void syntax(const std::string& what) { throw Error(ErrorCode::Syntax, what); }

const json& member(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) syntax(std::string("missing field '") + key + "'");
  return *it;
}

const std::string& as_string(const json& v, const char* what) {
  if (!v.is_string()) syntax(std::string(what) + " must be a string");
  return v.get_ref<const std::string&>();
}

// Builds the tree from the node grammar without recursion; unknown names get
// the out-of-range label `unknown` so validation reports them.
TournamentTree tree_from_json(const json& root, const std::unordered_map<std::string, PlayerId>& ids, PlayerId unknown) {
  TreeBuilder b;
  struct Frame {
    const json* node;
    bool expanded;
  };
  std::vector<Frame> stack{{&root, false}};
  std::vector<NodeId> built;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const json& node = *f.node;
    if (node.is_string()) {
      auto it = ids.find(node.get_ref<const std::string&>());
      built.push_back(b.add_leaf(it == ids.end() ? unknown : it->second));
      continue;
    }
    if (!node.is_object()) syntax("tree node must be a name or an object with 'l' and 'r'");
    auto l = node.find("l"), r = node.find("r");
    if (l == node.end() && r == node.end()) syntax("tree node object needs 'l' or 'r'");
    if (!f.expanded) {
      stack.push_back({f.node, true});
      if (r != node.end()) stack.push_back({&*r, false});
      if (l != node.end()) stack.push_back({&*l, false});
      continue;
    }
    if (l != node.end() && r != node.end()) {
      NodeId right = built.back();
      built.pop_back();
      NodeId left = built.back();
      built.pop_back();
      built.push_back(b.add_internal(left, right));
    } else {
      NodeId only = built.back();
      built.pop_back();
      built.push_back(b.add_internal(only, kNone));
    }
  }
  return b.build(built.back());
}

}  // namespace

Instance parse_instance(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    syntax(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) syntax("instance document must be a JSON object");

  Instance inst;
  const json& players = member(doc, "players");
  if (!players.is_array() || players.empty()) syntax("'players' must be a non-empty array");
  std::unordered_map<std::string, PlayerId> ids;
  for (const auto& p : players) {
    inst.players.push_back(as_string(p, "player name"));
    ids.emplace(inst.players.back(), static_cast<PlayerId>(inst.players.size() - 1));
  }
  const std::size_t n = inst.players.size();
  const auto unknown = static_cast<PlayerId>(n);

  inst.tree = tree_from_json(member(doc, "tree"), ids, unknown);

  // Matrix entries are interned so large files stay compact before regrouping.
  const json& rows = member(doc, "matrix");
  if (!rows.is_array() || rows.size() != n) syntax("'matrix' must have one row per player");
  std::vector<Rational> values;
  std::unordered_map<std::string, std::uint16_t> intern;
  std::vector<std::uint16_t> cell(n * n, 0);
  auto intern_value = [&](const std::string& text) -> std::uint16_t {
    auto it = intern.find(text);
    if (it != intern.end()) return it->second;
    if (values.size() == 0xffff) throw Error(ErrorCode::SizeLimitExceeded, "too many distinct probabilities");
    values.push_back(parse_probability(text));
    // Map equal values to the same slot.
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
      if (values[k] == values.back()) {
        values.pop_back();
        return intern.emplace(text, static_cast<std::uint16_t>(k)).first->second;
      }
    return intern.emplace(text, static_cast<std::uint16_t>(values.size() - 1)).first->second;
  };
  const std::uint16_t half_slot = intern_value("1/2");
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n) syntax("matrix row " + std::to_string(i) + " must have one entry per player");
    for (std::size_t j = 0; j < n; ++j) {
      const std::string& text = as_string(row[j], "matrix entry");
      if (i == j) {
        if (text != "0") syntax("diagonal matrix entries must be \"0\"");
        cell[i * n + j] = half_slot;
        continue;
      }
      cell[i * n + j] = intern_value(text);
    }
  }

  ValidationReport pre;
  for (std::size_t i = 0; i < n && pre.empty(); ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (values[cell[i * n + j]] + values[cell[j * n + i]] != 1) {
        pre.push_back({Violation::Complementarity, "p(" + inst.players[i] + "," + inst.players[j] + ") = " +
                                                       to_string(values[cell[i * n + j]]) + " and p(" + inst.players[j] +
                                                       "," + inst.players[i] + ") = " + to_string(values[cell[j * n + i]])});
        break;
      }

  // Players with identical rows (self entry read as 1/2) share a group.
  std::vector<std::uint32_t> group_of(n, kNone);
  std::vector<std::size_t> reps;
  {
    std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t h = 1469598103934665603ull;
      for (std::size_t j = 0; j < n; ++j) h = (h ^ cell[i * n + j]) * 1099511628211ull;
      auto& bucket = buckets[h];
      for (auto r : bucket)
        if (std::equal(cell.begin() + i * n, cell.begin() + (i + 1) * n, cell.begin() + r * n)) {
          group_of[i] = group_of[r];
          break;
        }
      if (group_of[i] == kNone) {
        group_of[i] = static_cast<std::uint32_t>(reps.size());
        reps.push_back(i);
        bucket.push_back(i);
      }
    }
  }
  const std::size_t groups = reps.size();
  ProbabilityMatrix matrix(std::move(group_of), groups);
  if (pre.empty()) {
    for (std::size_t a = 0; a < groups; ++a)
      for (std::size_t b = a + 1; b < groups; ++b) matrix.set_group(a, b, values[cell[reps[a] * n + reps[b]]]);
  }
  inst.matrix = std::move(matrix);

  const json& coalition = member(doc, "coalition");
  if (!coalition.is_array()) syntax("'coalition' must be an array");
  for (const auto& c : coalition) {
    auto it = ids.find(as_string(c, "coalition member"));
    if (it == ids.end())
      pre.push_back({Violation::CoalitionMembership, "coalition member '" + c.get<std::string>() + "' is not a player"});
    else
      inst.coalition.push_back(it->second);
  }
  std::sort(inst.coalition.begin(), inst.coalition.end());
  if (std::adjacent_find(inst.coalition.begin(), inst.coalition.end()) != inst.coalition.end())
    pre.push_back({Violation::CoalitionMembership, "coalition lists a player twice"});
  inst.coalition.erase(std::unique(inst.coalition.begin(), inst.coalition.end()), inst.coalition.end());

  {
    auto it = ids.find(as_string(member(doc, "favorite"), "'favorite'"));
    if (it == ids.end())
      pre.push_back({Violation::FavoriteMembership, "favorite is not a player"});
    else
      inst.favorite = it->second;
  }
  inst.threshold = parse_nonnegative_rational(as_string(member(doc, "threshold"), "'threshold'"));

  if (auto roles = doc.find("roles"); roles != doc.end()) {
    if (!roles->is_array() || roles->size() != n) syntax("'roles' must list one role per player");
    for (const auto& r : *roles) {
      auto role = role_from_name(as_string(r, "role"));
      if (!role) syntax("unknown role '" + r.get<std::string>() + "'");
      inst.roles.push_back(*role);
    }
  }

  ValidationReport report = validate_instance(inst);
  // favorite kNone is already covered by the name check
  if (inst.favorite == kNone)
    report.erase(std::remove_if(report.begin(), report.end(), [](const ValidationIssue& v) { return v.code == Violation::FavoriteMembership; }),
                 report.end());
  pre.insert(pre.end(), report.begin(), report.end());
  if (!pre.empty()) throw ValidationError(std::move(pre));
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

json tree_to_json(const TournamentTree& tree, const std::vector<std::string>& names) {
  std::vector<json> built(tree.node_count());
  for (std::size_t i = tree.node_count(); i-- > 0;) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    if (n.player != kNone) {
      built[i] = n.player < names.size() ? json(names[n.player]) : json(nullptr);
    } else {
      json obj = json::object();
      obj["l"] = std::move(built[n.left]);
      if (n.right != kNone) obj["r"] = std::move(built[n.right]);
      built[i] = std::move(obj);
    }
  }
  return std::move(built[0]);
}

std::string serialize_instance(const Instance& inst, int indent) {
  const bool pretty = indent >= 0;
  const std::string nl = pretty ? "\n" : "";
  const std::string pad = pretty ? std::string(static_cast<std::size_t>(indent), ' ') : "";
  const std::string sep = pretty ? ", " : ",";
  auto quoted = [](const std::string& s) { return json(s).dump(); };

  std::string out = "{" + nl;
  out += pad + "\"players\":" + (pretty ? " " : "") + "[";
  for (std::size_t i = 0; i < inst.players.size(); ++i) out += (i ? sep : "") + quoted(inst.players[i]);
  out += "]," + nl;
  out += pad + "\"tree\":" + (pretty ? " " : "") + tree_to_json(inst.tree, inst.players).dump() + "," + nl;

  // Canonical strings per group pair, computed once.
  const auto& m = inst.matrix;
  const std::size_t g = m.group_count();
  std::vector<std::string> text(g * g);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = 0; b < g; ++b) text[a * g + b] = "\"" + to_string(a == b ? half() : m.group_p(a, b)) + "\"";
  out += pad + "\"matrix\":" + (pretty ? " " : "") + "[" + nl;
  const std::size_t n = inst.players.size();
  for (std::size_t i = 0; i < n; ++i) {
    out += pad + pad + "[";
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out += sep;
      out += i == j ? std::string("\"0\"") : text[std::size_t(m.group_of(i)) * g + m.group_of(j)];
    }
    out += std::string("]") + (i + 1 < n ? "," : "") + nl;
  }
  out += pad + "]," + nl;
  out += pad + "\"coalition\":" + (pretty ? " " : "") + "[";
  for (std::size_t i = 0; i < inst.coalition.size(); ++i) out += (i ? sep : "") + quoted(inst.players[inst.coalition[i]]);
  out += "]," + nl;
  out += pad + "\"favorite\":" + (pretty ? " " : "") + quoted(inst.players[inst.favorite]) + "," + nl;
  out += pad + "\"threshold\":" + (pretty ? " " : "") + quoted(to_string(inst.threshold));
  if (!inst.roles.empty()) {
    out += "," + nl + pad + "\"roles\":" + (pretty ? " " : "") + "[";
    for (std::size_t i = 0; i < inst.roles.size(); ++i) out += (i ? sep : "") + quoted(role_name(inst.roles[i]));
    out += "]";
  }
  out += nl + "}" + nl;
  return out;
}

json report_to_json(const ValidationReport& report) {
  json out = json::array();
  for (const auto& issue : report) out.push_back({{"code", violation_name(issue.code)}, {"detail", issue.detail}});
  return out;
}

}  // namespace koman
