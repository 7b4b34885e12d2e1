#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "cli.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  json report;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = ceei::cli::run(args, out, err);
  return {code, json::parse(out.str())};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / ("ceei_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) const {
    const auto path = dir_ / name;
    std::ofstream(path) << body;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

const char* kT3 = R"({"agents":2,"objects":4,"utilities":[[95,5,2,1],[1,2,5,95]]})";
const char* kB1 = R"({"agents":2,"objects":3,"utilities":[[1,1,0],[0,1,1]]})";

}  // namespace

TEST_CASE("cli solve") {
  Scratch s;
  const auto r = run({"solve", s.write("t3.json", kT3)});
  CHECK(r.code == 0);
  CHECK(r.report["command"] == "solve");
  const auto& res = r.report["result"];
  CHECK(res["certified_exact"] == true);
  CHECK(res["p_star"][0]["exact"] == "19/20");
  CHECK(res["u_star"][1]["exact"] == "100");
  CHECK(res["nash_welfare"]["exact"] == "10000");
  CHECK(r.report.contains("timing"));
}

TEST_CASE("cli check") {
  Scratch s;
  const auto inst = s.write("t3.json", kT3);
  const auto sep = s.write("sep.json", R"({"owner":[0,1,1,1]})");
  const auto eq = s.write("eq.json", R"({"owner":[0,0,1,1]})");

  auto r = run({"check", inst, sep, "--notion", "ceei-frac"});
  CHECK(r.code == 1);
  CHECK(r.report["result"]["holds"] == false);
  CHECK(r.report["result"]["certificate"]["type"] == "kkt_violation");
  CHECK(r.report["result"]["certificate"]["gap"]["exact"] == "32/969");
  CHECK(r.report["result"]["certificate_rechecks"] == true);

  CHECK(run({"check", inst, sep, "--notion", "ef"}).code == 0);
  CHECK(run({"check", inst, sep, "--notion", "po"}).code == 0);

  r = run({"check", inst, eq, "--notion", "ceei-frac"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["certificate"]["prices"][3]["exact"] == "19/20");

  r = run({"check", inst, sep, "--notion", "po", "--limit", "3"});
  CHECK(r.code == 4);
  CHECK(r.report["error"]["kind"] == "InstanceTooLarge");
}

TEST_CASE("cli search") {
  Scratch s;
  const auto b1 = s.write("b1.json", kB1);
  auto r = run({"search", b1, "--target", "ceei-frac"});
  CHECK(r.code == 1);
  CHECK(r.report["result"]["status"] == "none");
  CHECK(r.report["result"]["fractional_optimum"]["exact"] == "9/4");

  r = run({"search", b1, "--target", "binary-mnw"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["welfare"]["exact"] == "2");

  r = run({"search", s.write("t3.json", kT3), "--target", "mnw"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["assignment"]["owner"] == json::array({0, 0, 1, 1}));

  const auto big = s.write("big.json", R"({"agents":4,"objects":10,"utilities":)"
                                       R"([[9,1,4,7,3,8,2,6,5,1],[2,8,6,1,9,3,7,4,1,5],)"
                                       R"([5,5,5,5,5,5,5,5,5,5],[1,9,2,8,3,7,4,6,5,5]]})");
  r = run({"search", big, "--target", "ceei-frac", "--limit-nodes", "3"});
  CHECK(r.code == 5);

  r = run({"search", s.write("t3b.json", kT3), "--target", "binary-mnw"});
  CHECK(r.code == 2);
  CHECK(r.report["error"]["kind"] == "NotBinary");
}

TEST_CASE("cli gen") {
  Scratch s;
  auto r = run({"gen", "partition", "--set", "3,1,1,2,5", "-o", s.path("p.json")});
  CHECK(r.code == 0);
  r = run({"search", s.path("p.json"), "--target", "identical-ceei-disc"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["status"] == "found");

  r = run({"gen", "random", "-n", "3", "-m", "4", "--seed", "7"});
  CHECK(r.code == 0);
  CHECK(r.report["result"]["document"]["agents"] == 3);
  CHECK(run({"gen", "random", "-n", "3", "-m", "4", "--seed", "7"}).report["result"] == r.report["result"]);

  r = run({"gen", "3partition", "--weights", "25,33,42", "--bound", "100"});
  CHECK(r.code == 2);
}

TEST_CASE("cli input errors") {
  Scratch s;
  auto r = run({"solve", s.write("bad.json", "{\"agents\": 2,")});
  CHECK(r.code == 2);
  CHECK(r.report["error"]["kind"] == "SyntaxError");

  r = run({"solve", s.write("zero.json", R"({"agents":2,"objects":2,"utilities":[[1,0],[1,0]]})")});
  CHECK(r.code == 2);
  CHECK(r.report["error"]["kind"] == "InvariantError");

  r = run({"solve", s.path("missing.json")});
  CHECK(r.code == 2);

  r = run({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.report["error"]["kind"] == "usage");

  r = run({"check", s.write("t3.json", kT3), s.write("short.json", R"({"owner":[0]})"), "--notion", "ef"});
  CHECK(r.code == 2);
}
