#include "cli.hpp"

#include <koman/koman.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

// Serializing is quadratic in the player count; the generators can go far beyond this.
constexpr std::size_t kMaxSerializedPlayers = 8192;

int exit_code(koman_status s) {
  switch (s) {
    case KOMAN_OK: return 0;
    case KOMAN_ERR_SIZE_LIMIT: return 4;
    case KOMAN_ERR_IO:
    case KOMAN_ERR_NULL_ARGUMENT:
    case KOMAN_ERR_INTERNAL: return 2;
    default: return 3;
  }
}

struct Failure {
  koman_status status;
};

struct InstanceDeleter {
  void operator()(koman_instance* p) const { koman_instance_free(p); }
};
using InstancePtr = std::unique_ptr<koman_instance, InstanceDeleter>;

struct StringDeleter {
  void operator()(char* p) const { koman_string_free(p); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

class Runner {
 public:
  Runner(std::istream& in, std::ostream& out, std::ostream& err) : in_(in), out_(out), err_(err) {}

  void check(koman_status s) {
    if (s == KOMAN_OK) return;
    err_ << "error: " << koman_status_name(s);
    if (*koman_last_error()) err_ << ": " << koman_last_error();
    err_ << '\n';
    throw Failure{s};
  }

  InstancePtr load(const std::string& path) {
    koman_instance* raw = nullptr;
    check(koman_instance_load(path.c_str(), &raw));
    return InstancePtr(raw);
  }

  std::string text_of(const std::string& path) {
    if (path == "-") {
      std::ostringstream buf;
      buf << in_.rdbuf();
      return buf.str();
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) {
      err_ << "error: cannot open '" << path << "'\n";
      throw Failure{KOMAN_ERR_IO};
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
  }

  int solve(const std::string& path, const std::string& mode, bool stats) {
    auto inst = load(path);
    koman_mode m = mode == "full" ? KOMAN_MODE_FULL : mode == "lowmem" ? KOMAN_MODE_LOWMEM : KOMAN_MODE_REACHABLE;
    char* raw = nullptr;
    check(koman_solve(inst.get(), m, &raw));
    OwnedString result(raw);
    auto doc = json::parse(result.get());
    out_ << doc["t_opt"].get<std::string>() << '\n';
    if (stats)
      err_ << "mode " << doc["mode"].get<std::string>() << ", entries " << doc["entries"] << ", configurations "
           << doc["configurations"] << ", peak live " << doc["peak_live"] << '\n';
    return 0;
  }

  int decide(const std::string& path) {
    auto inst = load(path);
    int answer = 0;
    check(koman_decide(inst.get(), &answer));
    out_ << (answer ? "yes" : "no") << '\n';
    return answer ? 0 : 1;
  }

  void print_response(const json& doc) {
    for (const auto& [name, action] : doc["profile"].items()) out_ << name << '=' << action.get<std::string>() << '\n';
    out_ << "value " << doc["value"].get<std::string>() << '\n';
  }

  int respond(const std::string& path) {
    auto inst = load(path);
    char* raw = nullptr;
    check(koman_best_response(inst.get(), &raw));
    OwnedString result(raw);
    print_response(json::parse(result.get()));
    return 0;
  }

  int cover(const std::string& path) {
    auto inst = load(path);
    char* raw = nullptr;
    check(koman_cover(inst.get(), &raw));
    OwnedString result(raw);
    auto doc = json::parse(result.get());
    out_ << "size " << doc["size"] << '\n';
    for (const auto& p : doc["cover"]) out_ << p.get<std::string>() << '\n';
    return 0;
  }

  int oracle(const std::string& path, bool nonadaptive) {
    auto inst = load(path);
    char* raw = nullptr;
    check(koman_oracle(inst.get(), nonadaptive ? 1 : 0, &raw));
    OwnedString result(raw);
    out_ << result.get() << '\n';
    return 0;
  }

  int monte_carlo(const std::string& path, std::uint64_t trials, std::uint64_t seed) {
    auto inst = load(path);
    double estimate = 0, se = 0;
    check(koman_monte_carlo(inst.get(), trials, seed, &estimate, &se));
    out_ << "estimate " << estimate << '\n' << "stderr " << se << '\n';
    return 0;
  }

  // Writes the instance, or with `summary` only its size and the solved value.
  int emit(InstancePtr inst, const std::string& output, bool summary) {
    const std::size_t n = koman_instance_player_count(inst.get());
    if (summary) {
      char* raw = nullptr;
      check(koman_solve(inst.get(), KOMAN_MODE_REACHABLE, &raw));
      OwnedString result(raw);
      out_ << "players " << n << '\n' << "t_opt " << json::parse(result.get())["t_opt"].get<std::string>() << '\n';
      return 0;
    }
    if (n > kMaxSerializedPlayers) {
      err_ << "error: SizeLimitExceeded: instance has " << n << " players; files are limited to " << kMaxSerializedPlayers
           << " (use --summary)\n";
      return 4;
    }
    char* raw = nullptr;
    check(koman_instance_serialize(inst.get(), 2, &raw));
    OwnedString text(raw);
    if (output.empty() || output == "-") {
      out_ << text.get() << '\n';
      return 0;
    }
    std::ofstream f(output, std::ios::binary);
    f << text.get() << '\n';
    if (!f) {
      err_ << "error: cannot write '" << output << "'\n";
      return 2;
    }
    return 0;
  }

  int gen(const std::string& kind, const std::string& source, bool trim, const std::string& output, bool summary) {
    auto text = text_of(source);
    koman_instance* raw = nullptr;
    if (kind == "qbf")
      check(koman_generate_qbf(text.c_str(), trim ? 1 : 0, &raw));
    else if (kind == "sat")
      check(koman_generate_sat(text.c_str(), &raw));
    else
      check(koman_generate_mcc(text.c_str(), &raw));
    return emit(InstancePtr(raw), output, summary);
  }

  int advise(const std::string& path) {
    auto inst = load(path);
    koman_session* raw = nullptr;
    check(koman_session_create(inst.get(), &raw));
    std::unique_ptr<koman_session, void (*)(koman_session*)> session(raw, koman_session_free);
    while (true) {
      char* state_raw = nullptr;
      check(koman_session_state(session.get(), &state_raw));
      OwnedString state_text(state_raw);
      auto state = json::parse(state_text.get());
      if (state["finished"].get<bool>()) {
        out_ << "winner " << state["winner"].get<std::string>() << '\n';
        out_ << "value " << state["t_opt"].get<std::string>() << '\n';
        return 0;
      }
      out_ << "round " << state["round"] << '\n';
      for (const auto& g : state["pairings"]) out_ << "game " << g[0].get<std::string>() << ' ' << g[1].get<std::string>() << '\n';
      char* br_raw = nullptr;
      check(koman_session_best_response(session.get(), &br_raw));
      OwnedString br(br_raw);
      auto doc = json::parse(br.get());
      for (const auto& [name, action] : doc["profile"].items())
        out_ << "recommend " << name << '=' << action.get<std::string>() << '\n';
      out_ << "value " << doc["value"].get<std::string>() << '\n';
      out_.flush();

      while (true) {
        err_ << "winners> " << std::flush;
        std::string line;
        if (!std::getline(in_, line)) {
          err_ << "\ninput ended before the final\n";
          return 0;
        }
        std::vector<std::string> names;
        std::stringstream ls(line);
        std::string item;
        while (std::getline(ls, item, ',')) {
          auto b = item.find_first_not_of(" \t\r"), e = item.find_last_not_of(" \t\r");
          names.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
        }
        std::vector<const char*> ptrs;
        for (const auto& n : names) ptrs.push_back(n.c_str());
        koman_status s = koman_session_advance(session.get(), ptrs.data(), ptrs.size());
        if (s == KOMAN_OK) break;
        err_ << "rejected: " << koman_status_name(s) << ": " << koman_last_error() << '\n';
      }
    }
  }

  int serve(const std::string& host, int port, const std::string& snapshots) {
    koman_service* raw = nullptr;
    check(koman_service_create(snapshots.empty() ? nullptr : snapshots.c_str(), &raw));
    std::unique_ptr<koman_service, void (*)(koman_service*)> service(raw, koman_service_free);
    auto ready = [](int bound, void* user) {
      *static_cast<std::ostream*>(user) << "listening on port " << bound << std::endl;
    };
    check(koman_service_serve(service.get(), host.c_str(), port, ready, &out_));
    return 0;
  }

 private:
  std::istream& in_;
  std::ostream& out_;
  std::ostream& err_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coalition manipulation solver for knockout tournaments", "koman"};
  app.require_subcommand(1);

  std::string input, mode = "reachable", source, output, host = "127.0.0.1", snapshots;
  bool stats = false, nonadaptive = false, trim = false, summary = false;
  std::uint64_t trials = 10000, seed = 1;
  int port = 8080;

  auto* solve = app.add_subcommand("solve", "optimal winning probability of the favorite");
  solve->add_option("-i,--input", input, "instance file")->required();
  solve->add_option("--mode", mode, "table strategy")->check(CLI::IsMember({"full", "reachable", "lowmem"}));
  solve->add_flag("--stats", stats, "print table statistics on stderr");

  auto* decide = app.add_subcommand("decide", "does the optimum reach the threshold (exit 0 yes, 1 no)");
  decide->add_option("-i,--input", input, "instance file")->required();

  auto* respond = app.add_subcommand("respond", "best first-round profile for the coalition");
  respond->add_option("-i,--input", input, "instance file")->required();

  auto* cover = app.add_subcommand("cover", "minimum cover of the random games");
  cover->add_option("-i,--input", input, "instance file")->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force reference value (small instances)");
  oracle->add_option("-i,--input", input, "instance file")->required();
  oracle->add_flag("--nonadaptive", nonadaptive, "best fixed play/throw rules instead of adaptive play");

  auto* gen = app.add_subcommand("gen", "build reduction instances");
  gen->require_subcommand(1);
  auto* gen_qbf = gen->add_subcommand("qbf", "from a quantified 3-CNF formula");
  gen_qbf->add_option("-f,--formula", source, "formula file ('-' for stdin)")->required();
  gen_qbf->add_flag("--trim", trim, "cut the padding dummies (generalized tree)");
  auto* gen_sat = gen->add_subcommand("sat", "from a 3-CNF formula, first-round manipulation only");
  gen_sat->add_option("-f,--formula", source, "CNF file ('-' for stdin)")->required();
  auto* gen_mcc = gen->add_subcommand("mcc", "from a colored graph (multicolored clique)");
  gen_mcc->add_option("-g,--graph", source, "graph file ('-' for stdin)")->required();
  for (auto* g : {gen_qbf, gen_sat, gen_mcc}) {
    g->add_option("-o,--output", output, "write the instance here instead of stdout");
    g->add_flag("--summary", summary, "print the player count and solved value instead of the instance");
  }

  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the best-response win rate");
  mc->add_option("-i,--input", input, "instance file")->required();
  mc->add_option("--trials", trials, "number of simulated tournaments")->check(CLI::PositiveNumber);
  mc->add_option("--seed", seed, "random seed");

  auto* advise = app.add_subcommand("advise", "round-by-round advice; reads winners lines from stdin");
  advise->add_option("-i,--input", input, "instance file")->required();

  auto* serve = app.add_subcommand("serve", "HTTP advisor service");
  serve->add_option("--port", port, "TCP port (0 picks one)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", host, "bind address");
  serve->add_option("--snapshots", snapshots, "directory for session snapshots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Runner run(in, out, err);
  try {
    if (*solve) return run.solve(input, mode, stats);
    if (*decide) return run.decide(input);
    if (*respond) return run.respond(input);
    if (*cover) return run.cover(input);
    if (*oracle) return run.oracle(input, nonadaptive);
    if (*gen_qbf) return run.gen("qbf", source, trim, output, summary);
    if (*gen_sat) return run.gen("sat", source, false, output, summary);
    if (*gen_mcc) return run.gen("mcc", source, false, output, summary);
    if (*mc) return run.monte_carlo(input, trials, seed);
    if (*advise) return run.advise(input);
    if (*serve) return run.serve(host, port, snapshots);
  } catch (const Failure& f) {
    return exit_code(f.status);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
