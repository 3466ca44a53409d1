#include "core/advisor.hpp"

#include "core/instance_json.hpp"

#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <stdexcept>

namespace koman {

using nlohmann::json;

Session::Session(Instance inst) : inst_(std::move(inst)) {
  require_valid(inst_);
  mask_ = inst_.coalition_mask();
  state_.tree = inst_.tree;
}

Position Session::position() const { return Position{state_.tree, inst_.matrix, mask_, inst_.favorite}; }

const Rational& Session::value() {
  if (!value_) value_ = solve_position(position()).t_opt;
  return *value_;
}

const BestResponse& Session::best_response() {
  if (finished()) throw std::logic_error("tournament is finished");
  if (!best_) best_ = best_response_position(position());
  return *best_;
}

void Session::advance(const std::vector<PlayerId>& winners) {
  if (finished()) throw std::logic_error("tournament is finished");
  state_ = advance_state(state_, winners);
  history_.push_back(winners);
  value_.reset();
  best_.reset();
}

void Session::advance_by_name(const std::vector<std::string>& winners) {
  std::vector<PlayerId> ids;
  for (const auto& name : winners) {
    auto id = inst_.find(name);
    if (!id) throw Error(ErrorCode::UnknownWinner, "unknown player '" + name + "'");
    ids.push_back(*id);
  }
  advance(ids);
}

json Session::state_json() {
  json doc;
  doc["round"] = state_.round;
  doc["tree"] = tree_to_json(state_.tree, inst_.players);
  doc["favorite"] = inst_.players[inst_.favorite];
  json coalition = json::array();
  for (auto c : inst_.coalition) coalition.push_back(inst_.players[c]);
  doc["coalition"] = coalition;
  json pairs = json::array();
  for (const auto& g : pairings()) pairs.push_back({inst_.players[g.a], inst_.players[g.b]});
  doc["pairings"] = pairs;
  json out = json::array();
  for (auto p : state_.eliminated) out.push_back(inst_.players[p]);
  doc["eliminated"] = out;
  doc["t_opt"] = to_string(value());
  doc["finished"] = finished();
  if (finished())
    doc["winner"] = inst_.players[state_.tree.node(state_.tree.root()).player];
  else
    doc["winner"] = nullptr;
  return doc;
}

json Session::best_response_json() {
  const auto& br = best_response();
  json profile = json::object();
  for (const auto& [p, a] : br.profile) profile[inst_.players[p]] = action_name(a);
  return json{{"profile", profile}, {"value", to_string(br.value)}};
}

json Session::snapshot() const {
  json rounds = json::array();
  for (const auto& r : history_) {
    json names = json::array();
    for (auto p : r) names.push_back(inst_.players[p]);
    rounds.push_back(names);
  }
  return json{{"instance", json::parse(serialize_instance(inst_, -1))}, {"history", rounds}};
}

Session Session::restore(const json& snapshot) {
  if (!snapshot.is_object() || !snapshot.contains("instance"))
    throw Error(ErrorCode::Syntax, "snapshot needs an 'instance' member");
  Session s(parse_instance(snapshot["instance"].dump()));
  if (snapshot.contains("history")) {
    if (!snapshot["history"].is_array()) throw Error(ErrorCode::Syntax, "'history' must be an array");
    for (const auto& round : snapshot["history"])
      s.advance_by_name(round.get<std::vector<std::string>>());
  }
  return s;
}

// ------------------------------------------------------------------ service

namespace {

HttpResponse reply(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_reply(int status, const std::string& code, const std::string& message) {
  return reply(status, json{{"error", code}, {"message", message}});
}

HttpResponse from_error(const Error& e) {
  int status = 400;
  switch (e.code()) {
    case ErrorCode::UnknownWinner:
    case ErrorCode::IncompleteRound:
      status = 422;
      break;
    case ErrorCode::SizeLimitExceeded:
      status = 413;
      break;
    case ErrorCode::Io:
      status = 500;
      break;
    default:
      break;
  }
  json body{{"error", error_code_name(e.code())}, {"message", e.what()}};
  if (auto* v = dynamic_cast<const ValidationError*>(&e)) body["report"] = report_to_json(v->report());
  return reply(status, body);
}

}  // namespace

AdvisorService::AdvisorService(std::string snapshot_dir) : snapshot_dir_(std::move(snapshot_dir)) {}

std::shared_ptr<AdvisorService::Entry> AdvisorService::find(const std::string& id) {
  std::lock_guard<std::mutex> g(lock_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

HttpResponse AdvisorService::create(const std::string& body) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    return error_reply(400, "SyntaxError", e.what());
  }
  // a snapshot document restores a session with its history
  bool is_snapshot = doc.is_object() && doc.contains("instance") && doc.contains("history");
  auto entry = std::make_shared<Entry>(is_snapshot ? Session::restore(doc) : Session(parse_instance(body)));
  std::string id;
  {
    std::lock_guard<std::mutex> g(lock_);
    id = "s" + std::to_string(next_id_++);
    sessions_.emplace(id, entry);
  }
  return reply(201, json{{"id", id}});
}

HttpResponse AdvisorService::handle(const std::string& method, const std::string& path, const std::string& body) {
  static const std::regex collection(R"(^/api/instances/?$)");
  static const std::regex item(R"(^/api/instances/([A-Za-z0-9_-]+)(/(best-response|outcomes|snapshot))?/?$)");
  try {
    std::smatch m;
    if (std::regex_match(path, collection)) {
      if (method == "POST") return create(body);
      return error_reply(405, "MethodNotAllowed", method + " " + path);
    }
    if (!std::regex_match(path, m, item)) return error_reply(404, "NotFound", "no route for " + path);
    const std::string id = m[1], action = m[3];
    auto entry = find(id);
    if (!entry) return error_reply(404, "NotFound", "no session '" + id + "'");

    if (action.empty() && method == "DELETE") {
      std::lock_guard<std::mutex> g(lock_);
      sessions_.erase(id);
      return reply(200, json{{"deleted", id}});
    }
    std::lock_guard<std::mutex> g(entry->lock);
    Session& s = entry->session;
    if (action.empty() && method == "GET") {
      auto doc = s.state_json();
      doc["id"] = id;
      return reply(200, doc);
    }
    if (action == "best-response" && method == "GET") {
      if (s.finished()) return error_reply(409, "Finished", "tournament is finished");
      return reply(200, s.best_response_json());
    }
    if (action == "outcomes" && method == "POST") {
      if (s.finished()) return error_reply(409, "Finished", "tournament is finished");
      json doc;
      try {
        doc = json::parse(body);
      } catch (const json::exception& e) {
        return error_reply(400, "SyntaxError", e.what());
      }
      if (!doc.is_object() || !doc.contains("winners") || !doc["winners"].is_array())
        return error_reply(400, "SyntaxError", "expected {\"winners\": [names in pairing order]}");
      std::vector<std::string> names;
      for (const auto& w : doc["winners"]) {
        if (!w.is_string()) return error_reply(400, "SyntaxError", "winner names must be strings");
        names.push_back(w.get<std::string>());
      }
      s.advance_by_name(names);
      auto state = s.state_json();
      state["id"] = id;
      return reply(200, state);
    }
    if (action == "snapshot" && method == "GET") return reply(200, s.snapshot());
    if (action == "snapshot" && method == "POST") {
      if (snapshot_dir_.empty()) return error_reply(409, "SnapshotsDisabled", "service was started without a snapshot directory");
      auto file = std::filesystem::path(snapshot_dir_) / (id + ".json");
      std::ofstream out(file);
      out << s.snapshot().dump(2) << '\n';
      if (!out) throw Error(ErrorCode::Io, "cannot write " + file.string());
      return reply(200, json{{"path", file.string()}});
    }
    return error_reply(405, "MethodNotAllowed", method + " " + path);
  } catch (const Error& e) {
    return from_error(e);
  } catch (const json::exception& e) {
    return error_reply(400, "SyntaxError", e.what());
  } catch (const std::exception& e) {
    return error_reply(500, "Internal", e.what());
  }
}

bool AdvisorService::serve(const std::string& host, int port, std::function<void(int)> ready) {
  httplib::Server server;
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    auto r = handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  const std::string pattern = R"(/api/instances.*)";
  server.Get(pattern, forward);
  server.Post(pattern, forward);
  server.Delete(pattern, forward);
  server.Options(pattern, [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) return false;
  {
    std::lock_guard<std::mutex> g(lock_);
    server_ = &server;
  }
  if (ready) ready(bound);
  bool ok = server.listen_after_bind();
  std::lock_guard<std::mutex> g(lock_);
  server_ = nullptr;
  return ok;
}

void AdvisorService::stop() {
  std::lock_guard<std::mutex> g(lock_);
  if (server_) static_cast<httplib::Server*>(server_)->stop();
}

}  // namespace koman
