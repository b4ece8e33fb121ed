#include <doctest.h>

#include "tautweight/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tw;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const fs::path& dir) {
  args.push_back("--out");
  args.push_back(dir.string());
  std::ostringstream out, err;
  const int code = cli::parse_and_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("tautweight-test-" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fnv1a reference values") {
  CHECK(cli::fnv1a_hex("") == "cbf29ce484222325");
  CHECK(cli::fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("list parsing") {
  CHECK(cli::parse_list("").empty());
  CHECK(cli::parse_list("1,2.5,3") == std::vector<double>{1, 2.5, 3});
  const auto r = cli::parse_list("0.25:0.45:5");
  REQUIRE(r.size() == 5);
  CHECK(r[2] == doctest::Approx(0.35));
  CHECK_THROWS(cli::parse_list("1,x"));
}

TEST_CASE("radial at alpha 1/4 reports c near 0.34") {
  const fs::path d = fresh_dir("radial");
  const Result r = run({"radial", "--d", "3", "--alpha", "0.25", "--n", "1024"}, d);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["kind"] == "explicit");
  CHECK(std::abs(j["c"].get<double>() - 0.34) <= 5e-3);
  bool csv = false;
  for (const auto& e : fs::directory_iterator(d)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("radial-", 0) == 0 && name.size() == 7 + 16 + 4 && e.path().extension() == ".csv") {
      csv = true;
      CHECK(slurp(e.path()).rfind("r,u,f\n", 0) == 0);
    }
  }
  CHECK(csv);
}

TEST_CASE("alpha outside (0, 1/2) is a usage error") {
  const Result r = run({"radial", "--alpha", "0.6"}, fresh_dir("bad"));
  CHECK(r.code == 1);
  CHECK(json::parse(r.err.substr(0, r.err.find('\n')))["error"] == "parameter");
}

TEST_CASE("unknown flags print help") {
  const Result r = run({"denoise", "--bogus", "1"}, fresh_dir("flag"));
  CHECK(r.code == 1);
  CHECK(r.err.find("--alpha") != std::string::npos);
}

TEST_CASE("denoise step gives (0.8, 0.2)") {
  const fs::path d = fresh_dir("denoise");
  const Result r = run({"denoise", "--weight", "unit", "--alpha", "0.1", "--data", "builtin:step"}, d);
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["energy"].get<double>() == doctest::Approx(0.08));
  std::ifstream is(d / j["profile_csv"].get<std::string>());
  std::string line;
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.find(",0.8,") != std::string::npos);
}

TEST_CASE("reruns are byte identical") {
  const fs::path a = fresh_dir("det-a"), b = fresh_dir("det-b");
  const std::vector<std::string> args{"ictv", "--data", "builtin:step", "--n", "128"};
  REQUIRE(run(args, a).code == 0);
  REQUIRE(run(args, b).code == 0);
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files == 3);
}

TEST_CASE("manifest records the run") {
  const fs::path d = fresh_dir("manifest");
  REQUIRE(run({"classify", "--beta", "1.2", "--d", "3"}, d).code == 0);
  size_t manifests = 0;
  for (const auto& e : fs::directory_iterator(d)) {
    if (e.path().string().find(".manifest.json") == std::string::npos) continue;
    ++manifests;
    const json m = json::parse(slurp(e.path()));
    CHECK(m["schema_version"] == cli::kSchemaVersion);
    CHECK(m["command"] == "classify");
    CHECK(m["parameters"]["beta"] == "1.2");
    CHECK(m["exit_code"] == 0);
  }
  CHECK(manifests == 1);
}

TEST_CASE("diagnose reads a radial run") {
  const fs::path d = fresh_dir("diagnose");
  const Result r = run({"radial", "--alpha", "0.3", "--n", "1024"}, d);
  REQUIRE(r.code == 0);
  fs::path sol;
  for (const auto& e : fs::directory_iterator(d))
    if (e.path().extension() == ".json" && e.path().string().find("manifest") == std::string::npos) sol = e.path();
  const Result g = run({"diagnose", "--solution", sol.string(), "--count", "10"}, d);
  CHECK(g.code == 0);
  const json arr = json::parse(g.out);
  REQUIRE(arr.is_array());
  CHECK(arr.size() >= 10);
  for (const auto& e : arr) CHECK(e["identity_residual"].get<double>() <= 1e-6);
}

TEST_CASE("diagnose reads a sampled denoise run") {
  const fs::path d = fresh_dir("diagnose-sampled");
  const Result r = run({"denoise", "--data", "builtin:power:beta=1", "--weight", "power:d=3", "--alpha", "0.3",
                        "--n", "512"},
                       d);
  REQUIRE(r.code == 0);
  const std::string sol = (d / (json::parse(r.out)["profile_csv"].get<std::string>())).replace_extension(".json").string();
  const Result g = run({"diagnose", "--solution", sol}, d);
  CHECK(g.code == 0);
}

TEST_CASE("empty sweep is a no-op") {
  const fs::path d = fresh_dir("sweep");
  CHECK(run({"sweep", "--what", "alpha", "--alphas", ""}, d).code == 0);
  CHECK_FALSE(fs::exists(d));
}

TEST_CASE("alpha sweep is monotone and certified") {
  const Result r = run({"sweep", "--what", "alpha", "--alphas", "0.25:0.45:5"}, fresh_dir("sweep-a"));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["c_decreasing_in_alpha"] == true);
}

TEST_CASE("counterexample hat passes") {
  const Result r = run({"counterexample", "--profile", "hat", "--n-max", "5"}, fresh_dir("cex"));
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["steps"].size() == 6);
}

TEST_CASE("unwritable output directory is an error") {
  const fs::path blocker = fresh_dir("blocker");
  std::ofstream(blocker.string()) << "x";
  const Result r = run({"classify", "--beta", "0.5"}, blocker / "sub");
  CHECK(r.code == 1);
  fs::remove(blocker);
}

}
