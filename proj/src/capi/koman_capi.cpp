#include <koman/koman.h>

#include "core/advisor.hpp"
#include "core/cover.hpp"
#include "core/forge.hpp"
#include "core/instance_json.hpp"
#include "core/knockout.hpp"
#include "core/oracle.hpp"
#include "core/solver.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

using koman::Error;
using koman::ErrorCode;
using nlohmann::json;

struct koman_instance {
  koman::Instance inst;
};
struct koman_session {
  koman::Session session;
};
struct koman_service {
  koman::AdvisorService service;
};

namespace {

thread_local std::string last_error;

koman_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return KOMAN_ERR_SYNTAX;
    case ErrorCode::Validation: return KOMAN_ERR_VALIDATION;
    case ErrorCode::SizeLimitExceeded: return KOMAN_ERR_SIZE_LIMIT;
    case ErrorCode::BadParameter: return KOMAN_ERR_BAD_PARAMETER;
    case ErrorCode::UnknownWinner: return KOMAN_ERR_UNKNOWN_WINNER;
    case ErrorCode::IncompleteRound: return KOMAN_ERR_INCOMPLETE_ROUND;
    case ErrorCode::DoubleThrow: return KOMAN_ERR_DOUBLE_THROW;
    case ErrorCode::LevelMismatch: return KOMAN_ERR_LEVEL_MISMATCH;
    case ErrorCode::MissingRoleAnnotations: return KOMAN_ERR_MISSING_ROLES;
    case ErrorCode::Io: return KOMAN_ERR_IO;
  }
  return KOMAN_ERR_INTERNAL;
}

template <class F>
koman_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return KOMAN_OK;
  } catch (const koman::ValidationError& e) {
    last_error = koman::report_to_json(e.report()).dump();
    return KOMAN_ERR_VALIDATION;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const json::exception& e) {
    last_error = e.what();
    return KOMAN_ERR_SYNTAX;
  } catch (const std::logic_error& e) {
    last_error = e.what();
    return KOMAN_ERR_FINISHED;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KOMAN_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return KOMAN_ERR_INTERNAL;
  }
}

koman_status null_argument() {
  last_error = "required argument is null";
  return KOMAN_ERR_NULL_ARGUMENT;
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

koman::SolveMode mode_of(koman_mode m) {
  switch (m) {
    case KOMAN_MODE_FULL: return koman::SolveMode::Full;
    case KOMAN_MODE_REACHABLE: return koman::SolveMode::Reachable;
    case KOMAN_MODE_LOWMEM: return koman::SolveMode::LowMemory;
  }
  throw Error(ErrorCode::BadParameter, "unknown solve mode");
}

json profile_json(const koman::Instance& inst, const koman::StrategyProfile& profile) {
  json out = json::object();
  for (const auto& [p, a] : profile) out[inst.players[p]] = koman::action_name(a);
  return out;
}

koman_status emit_instance(koman::Instance inst, koman_instance** out) {
  *out = new koman_instance{std::move(inst)};
  return KOMAN_OK;
}

}  // namespace

extern "C" {

const char* koman_last_error(void) { return last_error.c_str(); }

const char* koman_status_name(koman_status status) {
  switch (status) {
    case KOMAN_OK: return "Ok";
    case KOMAN_ERR_SYNTAX: return "SyntaxError";
    case KOMAN_ERR_VALIDATION: return "ValidationError";
    case KOMAN_ERR_SIZE_LIMIT: return "SizeLimitExceeded";
    case KOMAN_ERR_BAD_PARAMETER: return "BadParameter";
    case KOMAN_ERR_UNKNOWN_WINNER: return "UnknownWinner";
    case KOMAN_ERR_INCOMPLETE_ROUND: return "IncompleteRound";
    case KOMAN_ERR_DOUBLE_THROW: return "DoubleThrow";
    case KOMAN_ERR_LEVEL_MISMATCH: return "LevelMismatch";
    case KOMAN_ERR_MISSING_ROLES: return "MissingRoleAnnotations";
    case KOMAN_ERR_IO: return "IoError";
    case KOMAN_ERR_FINISHED: return "Finished";
    case KOMAN_ERR_NULL_ARGUMENT: return "NullArgument";
    case KOMAN_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void koman_string_free(char* s) { std::free(s); }

koman_status koman_instance_parse(const char* text, koman_instance** out) {
  if (!text || !out) return null_argument();
  return guarded([&] { emit_instance(koman::parse_instance(text), out); });
}

koman_status koman_instance_load(const char* path, koman_instance** out) {
  if (!path || !out) return null_argument();
  return guarded([&] { emit_instance(koman::load_instance(path), out); });
}

void koman_instance_free(koman_instance* inst) { delete inst; }

size_t koman_instance_player_count(const koman_instance* inst) { return inst ? inst->inst.size() : 0; }

koman_status koman_instance_serialize(const koman_instance* inst, int indent, char** out) {
  if (!inst || !out) return null_argument();
  return guarded([&] { *out = copy_out(koman::serialize_instance(inst->inst, indent)); });
}

koman_status koman_validate_document(const char* text, char** report) {
  if (!text || !report) return null_argument();
  return guarded([&] {
    try {
      koman::parse_instance(text);
      *report = copy_out("[]");
    } catch (const koman::ValidationError& e) {
      *report = copy_out(koman::report_to_json(e.report()).dump());
    }
  });
}

koman_status koman_solve(const koman_instance* inst, koman_mode mode, char** result_json) {
  if (!inst || !result_json) return null_argument();
  return guarded([&] {
    auto r = koman::solve(inst->inst, mode_of(mode));
    json doc{{"t_opt", koman::to_string(r.t_opt)},
             {"mode", koman::mode_name(r.mode)},
             {"entries", r.entries},
             {"configurations", r.configurations},
             {"peak_live", r.peak_live}};
    *result_json = copy_out(doc.dump());
  });
}

koman_status koman_decide(const koman_instance* inst, int* answer) {
  if (!inst || !answer) return null_argument();
  return guarded([&] { *answer = koman::decide(inst->inst) ? 1 : 0; });
}

koman_status koman_best_response(const koman_instance* inst, char** result_json) {
  if (!inst || !result_json) return null_argument();
  return guarded([&] {
    auto br = koman::best_response(inst->inst);
    json doc{{"profile", profile_json(inst->inst, br.profile)}, {"value", koman::to_string(br.value)}};
    *result_json = copy_out(doc.dump());
  });
}

koman_status koman_cover(const koman_instance* inst, char** result_json) {
  if (!inst || !result_json) return null_argument();
  return guarded([&] {
    const auto& in = inst->inst;
    auto graph = koman::conflict_graph(in);
    auto cover = koman::minimum_vertex_cover(graph);
    json names = json::array(), edges = json::array();
    for (auto p : cover) names.push_back(in.players[p]);
    for (auto [a, b] : graph.edges) edges.push_back({in.players[a], in.players[b]});
    *result_json = copy_out(json{{"size", cover.size()}, {"cover", names}, {"edges", edges}}.dump());
  });
}

koman_status koman_oracle(const koman_instance* inst, int nonadaptive, char** value) {
  if (!inst || !value) return null_argument();
  return guarded([&] {
    auto v = nonadaptive ? koman::oracle_nonadaptive(inst->inst) : koman::oracle_adaptive(inst->inst);
    *value = copy_out(koman::to_string(v));
  });
}

koman_status koman_monte_carlo(const koman_instance* inst, uint64_t trials, uint64_t seed, double* estimate,
                               double* standard_error) {
  if (!inst || !estimate || !standard_error) return null_argument();
  return guarded([&] {
    auto r = koman::monte_carlo_win_estimate(inst->inst, trials, seed);
    *estimate = r.estimate;
    *standard_error = r.standard_error;
  });
}

koman_status koman_generate_qbf(const char* formula, int trim, koman_instance** out) {
  if (!formula || !out) return null_argument();
  return guarded([&] {
    auto inst = koman::qbf_to_instance(koman::parse_qbf(formula));
    emit_instance(trim ? koman::trim_to_generalized(inst) : std::move(inst), out);
  });
}

koman_status koman_generate_sat(const char* cnf, koman_instance** out) {
  if (!cnf || !out) return null_argument();
  return guarded([&] { emit_instance(koman::sat_to_first_round_instance(koman::parse_cnf(cnf)), out); });
}

koman_status koman_generate_mcc(const char* graph, koman_instance** out) {
  if (!graph || !out) return null_argument();
  return guarded([&] { emit_instance(koman::mcc_to_instance(koman::parse_colored_graph(graph)), out); });
}

koman_status koman_source_answer(const char* kind, const char* text, int* answer) {
  if (!kind || !text || !answer) return null_argument();
  return guarded([&] {
    const std::string k = kind;
    if (k == "qbf")
      *answer = koman::eval_qbf(koman::parse_qbf(text));
    else if (k == "sat")
      *answer = koman::eval_cnf(koman::parse_cnf(text));
    else if (k == "mcc")
      *answer = koman::find_multicolored_clique(koman::parse_colored_graph(text));
    else
      throw Error(ErrorCode::BadParameter, "unknown source kind '" + k + "'");
  });
}

koman_status koman_session_create(const koman_instance* inst, koman_session** out) {
  if (!inst || !out) return null_argument();
  return guarded([&] { *out = new koman_session{koman::Session(inst->inst)}; });
}

void koman_session_free(koman_session* session) { delete session; }

int koman_session_finished(const koman_session* session) { return session && session->session.finished() ? 1 : 0; }

koman_status koman_session_state(koman_session* session, char** state_json) {
  if (!session || !state_json) return null_argument();
  return guarded([&] { *state_json = copy_out(session->session.state_json().dump()); });
}

koman_status koman_session_best_response(koman_session* session, char** result_json) {
  if (!session || !result_json) return null_argument();
  return guarded([&] { *result_json = copy_out(session->session.best_response_json().dump()); });
}

koman_status koman_session_advance(koman_session* session, const char* const* winners, size_t count) {
  if (!session || (count > 0 && !winners)) return null_argument();
  return guarded([&] {
    std::vector<std::string> names;
    for (size_t i = 0; i < count; ++i) {
      if (!winners[i]) throw Error(ErrorCode::UnknownWinner, "null winner name");
      names.emplace_back(winners[i]);
    }
    session->session.advance_by_name(names);
  });
}

koman_status koman_service_create(const char* snapshot_dir, koman_service** out) {
  if (!out) return null_argument();
  return guarded([&] { *out = new koman_service{koman::AdvisorService(snapshot_dir ? snapshot_dir : "")}; });
}

void koman_service_free(koman_service* service) { delete service; }

koman_status koman_service_handle(koman_service* service, const char* method, const char* path, const char* body,
                                  int* http_status, char** response) {
  if (!service || !method || !path || !http_status || !response) return null_argument();
  return guarded([&] {
    auto r = service->service.handle(method, path, body ? body : "");
    *http_status = r.status;
    *response = copy_out(r.body);
  });
}

koman_status koman_service_serve(koman_service* service, const char* host, int port, void (*ready)(int port, void* user),
                                 void* user) {
  if (!service || !host) return null_argument();
  return guarded([&] {
    std::function<void(int)> cb;
    if (ready) cb = [ready, user](int p) { ready(p, user); };
    if (!service->service.serve(host, port, cb))
      throw Error(ErrorCode::Io, "cannot listen on " + std::string(host) + ":" + std::to_string(port));
  });
}

void koman_service_stop(koman_service* service) {
  if (service) service->service.stop();
}

}  // extern "C"
