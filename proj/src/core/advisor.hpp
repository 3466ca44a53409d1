#pragma once

#include "core/knockout.hpp"
#include "core/model.hpp"
#include "core/solver.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace koman {

// One tournament being played out round by round.
class Session {
 public:
  explicit Session(Instance inst);

  const Instance& instance() const { return inst_; }
  const RoundState& state() const { return state_; }
  const std::vector<std::vector<PlayerId>>& history() const { return history_; }
  bool finished() const { return state_.tree.height() == 0; }

  std::vector<Game> pairings() const { return current_pairings(state_.tree); }
  // Optimal value of the remaining tournament.
  const Rational& value();
  // Throws std::logic_error when the tournament is over.
  const BestResponse& best_response();

  void advance(const std::vector<PlayerId>& winners);
  void advance_by_name(const std::vector<std::string>& winners);

  nlohmann::json state_json();
  nlohmann::json best_response_json();
  // Instance document plus the rounds played, enough to rebuild the session.
  nlohmann::json snapshot() const;
  static Session restore(const nlohmann::json& snapshot);

 private:
  Position position() const;

  Instance inst_;
  std::vector<bool> mask_;
  RoundState state_;
  std::vector<std::vector<PlayerId>> history_;
  std::optional<Rational> value_;
  std::optional<BestResponse> best_;
};

struct HttpResponse {
  int status = 200;
  std::string body;
};

class AdvisorService {
 public:
  // Snapshots are written below `snapshot_dir`; empty disables writing them.
  explicit AdvisorService(std::string snapshot_dir = {});

  HttpResponse handle(const std::string& method, const std::string& path, const std::string& body);

  // Blocks until stop(). Port 0 picks a free port; `ready` receives the bound
  // port before requests are accepted. Returns false if binding fails.
  bool serve(const std::string& host, int port, std::function<void(int)> ready = {});
  void stop();

 private:
  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::mutex lock;
    Session session;
  };
  std::shared_ptr<Entry> find(const std::string& id);
  HttpResponse create(const std::string& body);

  std::string snapshot_dir_;
  std::mutex lock_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t next_id_ = 1;
  void* server_ = nullptr;
};

}  // namespace koman
