#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "bentbook/io.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using bentbook::io::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "bentbook_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(BENTBOOK_CLI_PATH) + " " + args + " >" + (kWork / "stdout.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& rel) { return bentbook::io::read_file(kWork / rel); }

struct Fresh {
  Fresh() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fresh, "search writes the listings") {
  REQUIRE(run("search --n 4 --out " + (kWork / "s").string()) == 0);
  const auto is = json::parse(out("s/is_n4.json"));
  CHECK(is["is_size"] == 12);
  CHECK(is["members"][0] == json::array({3, 2, 4, 1}));
  const auto sets = json::parse(out("s/sets_n4.json"));
  CHECK(sets["count"] == 34);
  CHECK(run("search --n 4 --min-size 6 --out " + (kWork / "s6").string()) == 0);
  CHECK(json::parse(out("s6/sets_n4.json"))["count"] == 32);
  CHECK(fs::exists(kWork / "s/composition_n4.txt"));
  const auto man = json::parse(out("s/search_n4.manifest.json"));
  CHECK(man["command"] == "search");
  CHECK(man["outputs"].size() == 3);

  CHECK(run("search --n 2 --out " + (kWork / "s2").string()) == 0);
  CHECK(json::parse(out("s2/sets_n2.json"))["count"] == 0);
  CHECK(run("search --n 12 --out " + (kWork / "s12").string()) == 2);
}

TEST_CASE_FIXTURE(Fresh, "search output is deterministic") {
  REQUIRE(run("search --n 5 --out " + (kWork / "a").string()) == 0);
  REQUIRE(run("search --n 5 --out " + (kWork / "b").string()) == 0);
  CHECK(out("a/sets_n5.json") == out("b/sets_n5.json"));
  CHECK(out("a/is_n5.json") == out("b/is_n5.json"));
}

TEST_CASE_FIXTURE(Fresh, "extend and codebook") {
  const std::string base = oracle::fixture("set_n4_a.txt");
  REQUIRE(run("extend " + base + " --self --m 2 --out " + kWork.string()) == 0);
  const auto s = json::parse(out("self_m2.json"));
  CHECK(s["n"] == 8);
  CHECK(s["perms"].size() == 6);
  CHECK(json::parse(out("self_m2.report.json"))["r_min"] == 8);

  REQUIRE(run("codebook " + (kWork / "self_m2.json").string() + " --format bin --out " + kWork.string()) == 0);
  const auto m = json::parse(out("metrics.json"));
  CHECK(m["coherence"] == "1/16");
  CHECK(m["K"] == 1536);
  CHECK(m["papr_max_grid"].get<double>() <= 2.0 + 1e-9);
  const std::string digest = bentbook::io::sha256_hex(out("codebook.bin"));
  REQUIRE(run("codebook " + (kWork / "self_m2.json").string() + " --format bin --out " + (kWork / "again").string()) == 0);
  CHECK(bentbook::io::sha256_hex(out("again/codebook.bin")) == digest);
  CHECK(json::parse(out("codebook.manifest.json"))["outputs"][0]["sha256"].is_string());

  CHECK(run("verify codebook " + (kWork / "codebook.bin").string()) == 0);
  CHECK(run("verify set " + (kWork / "self_m2.json").string()) == 0);
  CHECK(run("verify golay " + base) == 0);
  CHECK(run("verify papr " + base) == 0);
}

TEST_CASE_FIXTURE(Fresh, "mixed extension") {
  const std::string a = oracle::fixture("set_n4_a.txt"), b = oracle::fixture("set_n4_b.txt");
  REQUIRE(run("extend " + a + " --mixed --partner " + b + " --min-size 6 --out " + kWork.string()) == 0);
  const auto j = json::parse(out("mixed.json"));
  CHECK(j["candidate_count"] == 36);
  CHECK(j["identity_compatible_count"] == 22);
  CHECK(j["count"] == 6);
  CHECK(j["provenance"]["status"] == "experimental");
}

TEST_CASE_FIXTURE(Fresh, "exit codes") {
  bentbook::io::write_file(kWork / "bad.txt", "[1,2,3,4]\n[1,2,4,3]\n");
  bentbook::io::write_file(kWork / "empty.txt", "# none\n");
  CHECK(run("verify set " + (kWork / "bad.txt").string()) == 3);
  CHECK(out("stdout.txt").find("set: FAIL") != std::string::npos);
  CHECK(run("verify set " + (kWork / "empty.txt").string()) == 1);
  CHECK(run("verify set " + (kWork / "missing.txt").string()) == 1);
  CHECK(run("codebook " + (kWork / "empty.txt").string()) == 1);
  CHECK(run("frobnicate") == 2);
  CHECK(run("extend " + oracle::fixture("set_n4_a.txt") + " --m 2") == 2);
  CHECK(run("--help") == 0);
}
