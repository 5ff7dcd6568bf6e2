#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "fence/cli.hpp"
#include "fence/closure.hpp"

using namespace fence;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fencetool");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() / ("fence-cli-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("enumerate") {
  const auto r = run({"enumerate", "--n", "3"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["count"] == 18);
  CHECK(j["rank_histogram"] == std::vector<int>{1, 9, 6, 2});
  CHECK(j["mode"] == "exhaustive");

  const auto csv = run({"enumerate", "--n", "5", "--format", "csv"});
  CHECK(csv.out == "rank,count\n0,1\n1,25\n2,88\n3,52\n4,14\n5,2\n");

  const auto listed = run({"enumerate", "--n", "3", "--list"});
  CHECK(nlohmann::json::parse(listed.out)["elements"].size() == 18);
}

TEST_CASE("input validation") {
  auto r = run({"enumerate", "--n", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("n must be odd") != std::string::npos);

  r = run({"enumerate", "--n", "11"});
  CHECK(r.code == 2);
  CHECK(r.err.find("closure --n 11 --gens G") != std::string::npos);

  CHECK(run({"enumerate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"bogus", "--n", "3"}).code == 2);
  CHECK(run({"enumerate", "--n", "x"}).code == 2);
  CHECK(run({"verify", "--n", "3", "--format", "csv"}).code == 2);
  CHECK(run({"closure", "--n", "5", "--gens", "K"}).code == 2);
  CHECK(run({"closure", "--n", "5", "--gens", "file:/nonexistent/gens.json"}).code == 2);
  CHECK(run({"verify", "--n", "5", "--claims", "no-such"}).code == 2);
  CHECK(run({"verify", "--n", "1"}).code == 2);
  CHECK(run({"rank", "--n", "17"}).code == 2);
  CHECK(run({"factor", "--n", "5", "--map", "1,2"}).code == 2);
  CHECK(run({"factor", "--n", "5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("factor") {
  auto r = run({"factor", "--n", "5", "--map", "1,2,3,4,5", "--gens", "G"});
  CHECK(r.code == 0);
  CHECK(r.out == "gamma\xC2\xB7gamma\n");

  r = run({"factor", "--n", "5", "--map", "_,_,_,_,_", "--gens", "G", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["evaluates"] == true);
  CHECK(evaluate(Word::parse(j["word"].get<std::string>()), build_G(FenceSize(5))).rank() == 0);

  r = run({"factor", "--n", "5", "--map", "2,1,_,_,_"});
  CHECK(r.code == 2);
  CHECK(r.err.find("(1,2)") != std::string::npos);

  r = run({"factor", "--n", "5", "--map", "1,_,_,_,_", "--gens", "J"});
  CHECK(r.code == 0);
}

TEST_CASE("factor reports elements outside the closure") {
  TempDir dir("gens");
  GeneratorSet g(FenceSize(5));
  g.add("gamma", gamma(FenceSize(5)));
  const auto path = dir.path / "gens.json";
  std::ofstream(path) << generators_to_json(g).dump();
  const auto r = run({"factor", "--n", "5", "--map", "1,2,3,4,_", "--gens", "file:" + path.string()});
  CHECK(r.code == 1);
  CHECK(r.out == "not generated\n");

  const auto wrong_n = run({"closure", "--n", "7", "--gens", "file:" + path.string()});
  CHECK(wrong_n.code == 2);

  std::ofstream(dir.path / "bad.json") << "{\"n\": 5, \"entries\": [{\"label\": \"x\", \"map\": \"2,1,_,_,_\"}]}";
  CHECK(run({"closure", "--n", "5", "--gens", "file:" + (dir.path / "bad.json").string()}).code == 2);
}

TEST_CASE("generator files round trip") {
  const auto g = build_G(FenceSize(7));
  const auto back = generators_from_json(nlohmann::json::parse(generators_to_json(g).dump()));
  REQUIRE(back.size() == g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(back.entries()[k].label == g.entries()[k].label);
    CHECK(back.entries()[k].element == g.entries()[k].element);
  }
  CHECK_THROWS_AS(generators_from_json(nlohmann::json::parse("{\"n\": 5}")), FormatError);
}

TEST_CASE("rank") {
  const std::vector<std::pair<std::string, std::string>> expected = {
      {"1", "2"}, {"3", "5"}, {"5", "6"}, {"7", "10"}, {"9", "14"}, {"11", "19"}};
  for (const auto& [n, value] : expected) {
    const auto r = run({"rank", "--n", n, "--format", "json"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::to_string(j["rank"].get<long>()) == value);
  }
  CHECK(run({"rank", "--n", "9"}).out == "14  PAPER-FORMULA\n");
  CHECK(run({"rank", "--n", "3"}).out == "5  PAPER-PROVED\n");
}

TEST_CASE("verify exit status follows machine-verified failures") {
  const auto ok = run({"verify", "--n", "3"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("RESULT: OK") != std::string::npos);

  const auto some = run({"verify", "--n", "5", "--claims", "generates-Gn,lemma6", "--format", "json"});
  CHECK(some.code == 0);
  CHECK(nlohmann::json::parse(some.out)["checks"].size() == 2);

  const auto bad = run({"verify", "--n", "5", "--claims", "identity-table"});
  CHECK(bad.code == 1);
}

TEST_CASE("closure output and caching") {
  TempDir dir("cache");
  const auto wit_cold = dir.path / "cold.tsv";
  const auto wit_warm = dir.path / "warm.tsv";
  const std::string cache = (dir.path / "cache").string();

  const auto cold = run({"closure", "--n", "7", "--cache-dir", cache, "--witnesses", wit_cold.string()});
  CHECK(cold.code == 0);
  const auto j = nlohmann::json::parse(cold.out);
  CHECK(j["size"] == 2288);
  CHECK(j["generators"] == 10);
  CHECK(std::filesystem::exists(std::filesystem::path(cache) / closure_cache_key(build_G(FenceSize(7))) / "members.bin"));

  const auto warm = run({"closure", "--n", "7", "--cache-dir", cache, "--witnesses", wit_warm.string()});
  CHECK(warm.code == 0);
  CHECK(warm.err.find("loaded from cache") != std::string::npos);
  CHECK(warm.out == cold.out);
  CHECK(slurp(wit_warm) == slurp(wit_cold));

  for (const auto& cmd : std::vector<std::vector<std::string>>{
           {"enumerate", "--n", "7"},
           {"factor", "--n", "7", "--map", "1,_,_,_,_,_,_"},
           {"verify", "--n", "5", "--format", "json", "--claims", "generates-Gn,lemma-bf4"},
       }) {
    auto with_cache = cmd;
    with_cache.push_back("--cache-dir");
    with_cache.push_back(cache);
    const auto first = run(with_cache);
    const auto second = run(with_cache);
    CHECK(first.out == second.out);
    CHECK(first.code == second.code);
  }
  CHECK(std::filesystem::exists(std::filesystem::path(cache) / "fi-n7.bin"));

  SUBCASE("environment variable names the default cache") {
    const std::string env_cache = (dir.path / "env").string();
    ::setenv(kCacheEnv, env_cache.c_str(), 1);
    const auto r = run({"closure", "--n", "5"});
    ::unsetenv(kCacheEnv);
    CHECK(r.code == 0);
    CHECK(std::filesystem::exists(std::filesystem::path(env_cache) / closure_cache_key(build_G(FenceSize(5)))));
  }
}

TEST_CASE("worker count does not change output") {
  TempDir dir("workers");
  const auto a = dir.path / "w1.tsv";
  const auto b = dir.path / "w8.tsv";
  const auto one = run({"closure", "--n", "7", "--workers", "1", "--witnesses", a.string()});
  const auto eight = run({"closure", "--n", "7", "--workers", "8", "--witnesses", b.string()});
  CHECK(one.out == eight.out);
  CHECK(slurp(a) == slurp(b));
  CHECK(!slurp(a).empty());
}

TEST_CASE("the installed binary") {
  const std::string tool = FENCETOOL_PATH;
  CHECK(std::system((tool + " rank --n 5 > /dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((tool + " enumerate --n 4 2> /dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((tool + " verify --n 5 --claims identity-table > /dev/null").c_str())) == 1);
}
