#include "cli.hpp"
#include "core/advisor.hpp"
#include "core/instance_json.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace koman;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "koman");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

const std::string e1_path = testing::data_path("e1.json");

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve prints a canonical rational") {
  for (const char* mode : {"full", "reachable", "lowmem"}) {
    auto r = cli({"solve", "-i", e1_path, "--mode", mode});
    CHECK(r.code == 0);
    CHECK(r.out == "1/2\n");
    CHECK(to_string(parse_probability(r.out.substr(0, r.out.size() - 1))) == "1/2");
  }
  auto stats = cli({"solve", "-i", e1_path, "--stats"});
  CHECK(stats.err.find("entries") != std::string::npos);
}

TEST_CASE("decide reports through the exit code") {
  auto r = cli({"decide", "-i", e1_path});
  CHECK(r.code == 1);
  CHECK(r.out == "no\n");
  auto doc = nlohmann::json::parse(serialize_instance(testing::e1()));
  doc["threshold"] = "1/2";
  auto half = write_temp("koman_e1_half.json", doc.dump());
  CHECK(cli({"decide", "-i", half}).code == 0);
}

TEST_CASE("respond prints the profile and value") {
  auto r = cli({"respond", "-i", e1_path});
  CHECK(r.code == 0);
  CHECK(r.out == "c=PLAY\nvalue 1/2\n");
}

TEST_CASE("cover, oracle and Monte Carlo") {
  auto c = cli({"cover", "-i", e1_path});
  CHECK(c.out == "size 2\ne*\na\n");
  CHECK(cli({"oracle", "-i", e1_path}).out == "1/2\n");
  CHECK(cli({"oracle", "-i", e1_path, "--nonadaptive"}).out == "1/2\n");
  auto mc = cli({"mc", "-i", e1_path, "--trials", "2000", "--seed", "4"});
  CHECK(mc.code == 0);
  CHECK(mc.out.rfind("estimate ", 0) == 0);
}

TEST_CASE("errors map to exit codes") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"solve"}).code == 2);
  CHECK(cli({"solve", "-i", "/nonexistent/file.json"}).code == 2);
  CHECK(cli({"solve", "-i", e1_path, "--mode", "fast"}).code == 2);
  auto doc = nlohmann::json::parse(serialize_instance(testing::e1()));
  doc["matrix"][0][1] = "1/3";
  auto bad = cli({"solve", "-i", write_temp("koman_bad.json", doc.dump())});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("Complementarity") != std::string::npos);
  CHECK(cli({"solve", "-i", write_temp("koman_garbage.json", "[1,")}).code == 3);
  std::mt19937_64 rng(1);
  auto big = testing::random_instance(rng, 32, true, 3);
  CHECK(cli({"oracle", "-i", write_temp("koman_big.json", serialize_instance(big))}).code == 4);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("generators") {
  auto qbf = write_temp("koman_f.qdimacs", "p cnf 1 2\ne 1 0\n1 0\n-1 0\n");
  auto out = std::filesystem::temp_directory_path() / "koman_gen.json";
  auto r = cli({"gen", "qbf", "-f", qbf, "-o", out.string()});
  CHECK(r.code == 0);
  auto inst = load_instance(out.string());
  CHECK(inst.threshold == 1);
  CHECK(cli({"decide", "-i", out.string()}).code == 1);
  auto summary = cli({"gen", "qbf", "-f", qbf, "--trim", "--summary"});
  CHECK(summary.out.rfind("players ", 0) == 0);

  auto sat = write_temp("koman_f.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
  auto s = cli({"gen", "sat", "-f", sat, "--summary"});
  CHECK(s.code == 0);
  CHECK(s.out.find("t_opt 1") != std::string::npos);

  auto graph = write_temp("koman_g.txt", "c red u\nc red w\nc blue v\nc blue x\ne u v\n");
  auto m = cli({"gen", "mcc", "-g", graph, "--summary"});
  CHECK(m.out.find("t_opt 1") != std::string::npos);
  auto stdin_run = cli({"gen", "mcc", "-g", "-"}, "c red u\nc blue v\n");
  CHECK(stdin_run.code == 0);
  CHECK(stdin_run.out.find("\"players\"") != std::string::npos);

  CHECK(cli({"gen", "qbf", "-f", write_temp("koman_long.qdimacs", "1 2 3 4 0\n")}).code == 3);
  CHECK(cli({"gen", "qbf", "-f", "/nonexistent"}).code == 2);
}

TEST_CASE("advise loop on E1") {
  auto r = cli({"advise", "-i", e1_path}, "a, b\nzz\nb\n");
  CHECK(r.code == 0);
  CHECK(lines(r.out) == std::vector<std::string>{"round 1", "game e* a", "game c b", "recommend c=PLAY", "value 1/2",
                                                 "round 2", "game a b", "value 0", "winner b", "value 0"});
  CHECK(r.err.find("UnknownWinner") != std::string::npos);
}

TEST_CASE("advise transcript matches the service") {
  std::mt19937_64 rng(808);
  for (int i = 0; i < 3; ++i) {
    auto inst = testing::random_instance(rng, 8, i != 1, 3);
    auto path = write_temp("koman_advise_" + std::to_string(i) + ".json", serialize_instance(inst));
    AdvisorService service;
    auto created = nlohmann::json::parse(service.handle("POST", "/api/instances", serialize_instance(inst)).body);
    std::string id = created["id"];
    std::vector<std::string> expected;
    std::string input;
    while (true) {
      auto st = nlohmann::json::parse(service.handle("GET", "/api/instances/" + id, "").body);
      if (st["finished"].get<bool>()) {
        expected.push_back("winner " + st["winner"].get<std::string>());
        expected.push_back("value " + st["t_opt"].get<std::string>());
        break;
      }
      expected.push_back("round " + std::to_string(st["round"].get<int>()));
      for (const auto& g : st["pairings"]) expected.push_back("game " + g[0].get<std::string>() + " " + g[1].get<std::string>());
      auto br = nlohmann::json::parse(service.handle("GET", "/api/instances/" + id + "/best-response", "").body);
      for (const auto& [name, action] : br["profile"].items()) expected.push_back("recommend " + name + "=" + action.get<std::string>());
      expected.push_back("value " + br["value"].get<std::string>());
      nlohmann::json winners = nlohmann::json::array();
      std::string line;
      for (const auto& g : st["pairings"]) {
        std::string w = g[(st["round"].get<int>() + i) % 2].get<std::string>();
        winners.push_back(w);
        line += (line.empty() ? "" : ",") + w;
      }
      input += line + "\n";
      service.handle("POST", "/api/instances/" + id + "/outcomes", nlohmann::json{{"winners", winners}}.dump());
    }
    auto r = cli({"advise", "-i", path}, input);
    CHECK(r.code == 0);
    CHECK(lines(r.out) == expected);
  }
}

}  // TEST_SUITE
