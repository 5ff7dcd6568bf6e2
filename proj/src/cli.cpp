#include "fence/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fence/analysis.hpp"
#include "fence/closure.hpp"

namespace fence {

nlohmann::ordered_json generators_to_json(const GeneratorSet& gens) {
  nlohmann::ordered_json j;
  j["n"] = gens.n().value();
  auto arr = nlohmann::ordered_json::array();
  for (const Generator& g : gens.entries()) arr.push_back({{"label", g.label}, {"map", format_map(g.element)}});
  j["entries"] = arr;
  return j;
}

GeneratorSet generators_from_json(const nlohmann::json& j) {
  try {
    GeneratorSet gens(FenceSize(j.at("n").get<int>()));
    for (const auto& e : j.at("entries")) {
      gens.add(e.at("label").get<std::string>(), parse_map(gens.n(), e.at("map").get<std::string>()));
    }
    return gens;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad generator file: ") + e.what());
  }
}

namespace {

struct CliConfig {
  std::string command;
  int n = 0;
  std::string gens = "G";
  std::string map_text;
  std::string format;
  std::string cache_dir;
  std::string witnesses;
  std::string claims;
  unsigned workers = 0;
  bool list = false;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using clock = std::chrono::steady_clock;

double ms_since(clock::time_point t) { return std::chrono::duration<double, std::milli>(clock::now() - t).count(); }

class Session {
 public:
  Session(const CliConfig& cfg, std::ostream& out, std::ostream& err) : cfg_(cfg), out_(out), err_(err) {
    if (!cfg.cache_dir.empty()) {
      cache_ = cfg.cache_dir;
    } else if (const char* env = std::getenv(kCacheEnv); env != nullptr && *env != '\0') {
      cache_ = env;
    }
  }

  int run() {
    const FenceSize n(cfg_.n);
    if (cfg_.command == "enumerate") return enumerate(n);
    if (cfg_.command == "closure") return closure(n);
    if (cfg_.command == "factor") return factor(n);
    if (cfg_.command == "verify") return verify(n);
    return rank(n);
  }

 private:
  std::string format(const char* fallback, std::initializer_list<const char*> allowed) const {
    const std::string f = cfg_.format.empty() ? fallback : cfg_.format;
    for (const char* a : allowed)
      if (f == a) return f;
    throw UsageError("--format " + f + " is not available for " + cfg_.command);
  }

  ElementUniverse universe(FenceSize n) {
    if (n > kMaxExhaustive) {
      const ClosureResult c = closed(build_G(n));
      return universe_from_closure(c);
    }
    const auto path = cache_ ? std::optional(*cache_ / ("fi-n" + std::to_string(n.value()) + ".bin")) : std::nullopt;
    if (path && std::filesystem::exists(*path)) {
      try {
        return load_universe(*path);
      } catch (const FormatError& e) {
        err_ << "warning: ignoring cached universe: " << e.what() << '\n';
      }
    }
    const auto start = clock::now();
    ElementUniverse u = enumerate_FI(n, cfg_.workers);
    if (cfg_.verbose) err_ << "enumerated FI_" << n.value() << " in " << ms_since(start) << " ms\n";
    if (path) {
      std::filesystem::create_directories(*cache_);
      save_universe(u, *path);
    }
    return u;
  }

  GeneratorSet generators(FenceSize n) {
    if (cfg_.gens == "G") return build_G(n);
    if (cfg_.gens == "J") return build_J(universe(n));
    if (cfg_.gens.rfind("file:", 0) == 0) {
      const std::string path = cfg_.gens.substr(5);
      std::ifstream in(path);
      if (!in) throw UsageError("cannot open generator file " + path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad generator file " + path + ": " + e.what());
      }
      GeneratorSet gens = generators_from_json(j);
      if (gens.n() != n) throw UsageError("generator file is for n=" + std::to_string(gens.n().value()));
      if (gens.empty()) throw UsageError("generator file has no entries");
      return gens;
    }
    throw UsageError("--gens must be G, J or file:PATH, got '" + cfg_.gens + "'");
  }

  ClosureResult closed(const GeneratorSet& gens) {
    std::optional<std::filesystem::path> dir;
    if (cache_) dir = *cache_ / closure_cache_key(gens);
    const auto start = clock::now();
    if (dir && std::filesystem::exists(*dir / "witnesses.tsv")) {
      try {
        ClosureResult c = load_closure(gens, *dir);
        err_ << "closure: " << c.size() << " elements loaded from cache in " << ms_since(start) << " ms\n";
        return c;
      } catch (const std::exception& e) {
        err_ << "warning: ignoring cached closure: " << e.what() << '\n';
      }
    }
    ClosureResult c = close(gens, {cfg_.workers, 0});
    err_ << "closure: " << c.size() << " elements in " << std::fixed << std::setprecision(1) << c.stats().wall_ms
         << " ms\n";
    err_.unsetf(std::ios::fixed);
    if (dir) save_closure(c, *dir);
    return c;
  }

  int enumerate(FenceSize n) {
    const std::string f = format("json", {"json", "table", "csv"});
    const ElementUniverse u = universe_checked(n);
    const auto& hist = u.rank_histogram();
    if (f == "csv") {
      out_ << "rank,count\n";
      for (std::size_t r = 0; r < hist.size(); ++r) out_ << r << ',' << hist[r] << '\n';
    } else if (f == "table") {
      out_ << "FI_" << n.value() << ": " << u.size() << " elements (" << to_string(u.provenance()) << ")\n";
      for (std::size_t r = 0; r < hist.size(); ++r) out_ << "  rank " << std::setw(2) << r << "  " << hist[r] << '\n';
      if (cfg_.list)
        for (Code c : u.codes()) out_ << c << '\t' << format_map(decode(n, c)) << '\n';
    } else {
      nlohmann::ordered_json j;
      j["n"] = n.value();
      j["count"] = u.size();
      j["mode"] = to_string(u.provenance());
      j["rank_histogram"] = hist;
      if (cfg_.list) {
        auto arr = nlohmann::ordered_json::array();
        for (Code c : u.codes()) arr.push_back({{"code", c}, {"map", format_map(decode(n, c))}});
        j["elements"] = arr;
      }
      out_ << j.dump(2) << '\n';
    }
    return 0;
  }

  ElementUniverse universe_checked(FenceSize n) {
    if (n > kMaxExhaustive) {
      throw CapacityError("exhaustive enumeration stops at n=" + std::to_string(kMaxExhaustive) +
                          "; use `closure --n " + std::to_string(n.value()) + " --gens G` instead");
    }
    return universe(n);
  }

  int closure(FenceSize n) {
    const std::string f = format("json", {"json", "table", "csv"});
    const GeneratorSet gens = generators(n);
    const ClosureResult c = closed(gens);
    const auto& levels = c.stats().level_sizes;
    if (!cfg_.witnesses.empty()) {
      std::ofstream w(cfg_.witnesses, std::ios::trunc);
      if (!w) throw UsageError("cannot write " + cfg_.witnesses);
      write_witnesses(c, w);
    }
    if (f == "csv") {
      out_ << "length,count\n";
      for (std::size_t k = 0; k < levels.size(); ++k) out_ << k + 1 << ',' << levels[k] << '\n';
    } else if (f == "table") {
      out_ << "closure of " << gens.size() << " generators at n=" << n.value() << ": " << c.size() << " elements\n";
      out_ << "longest witness: " << c.max_word_length() << '\n';
      for (std::size_t k = 0; k < levels.size(); ++k) out_ << "  length " << std::setw(2) << k + 1 << "  " << levels[k] << '\n';
    } else {
      nlohmann::ordered_json j;
      j["n"] = n.value();
      j["generators"] = gens.size();
      j["size"] = c.size();
      j["max_word_length"] = c.max_word_length();
      j["level_sizes"] = levels;
      out_ << j.dump(2) << '\n';
    }
    return 0;
  }

  int factor(FenceSize n) {
    const std::string f = format("table", {"json", "table"});
    if (cfg_.map_text.empty()) throw UsageError("factor needs --map");
    const PartialInjection target = parse_map(n, cfg_.map_text);
    if (const auto bad = find_order_violation(target)) {
      throw UsageError("map " + cfg_.map_text + " is not a partial automorphism: order fails on the pair (" + std::to_string(bad->first) +
                       "," + std::to_string(bad->second) + ")");
    }
    const GeneratorSet gens = generators(n);
    const ClosureResult c = closed(gens);
    if (!c.contains(target)) {
      if (f == "json") {
        out_ << nlohmann::ordered_json{{"n", n.value()}, {"map", format_map(target)}, {"generated", false}}.dump(2) << '\n';
      } else {
        out_ << "not generated\n";
      }
      return 1;
    }
    const Word w = factorize(target, c);
    const bool sound = evaluate(w, c.generators()) == target;
    if (f == "json") {
      nlohmann::ordered_json j;
      j["n"] = n.value();
      j["map"] = format_map(target);
      j["generated"] = true;
      j["word"] = w.str();
      j["length"] = w.size();
      j["evaluates"] = sound;
      out_ << j.dump(2) << '\n';
    } else {
      out_ << w.str() << '\n';
    }
    return sound ? 0 : 1;
  }

  int verify(FenceSize n) {
    const std::string f = format("table", {"json", "table"});
    std::vector<std::string> only;
    std::stringstream ss(cfg_.claims);
    for (std::string id; std::getline(ss, id, ',');)
      if (!id.empty()) only.push_back(id);
    const VerificationReport report =
        run_verification(n, only, cfg_.workers, [this](FenceSize m) { return universe(m); });
    if (cfg_.verbose)
      for (const ClaimCheck& c : report.checks) err_ << c.id << ": " << c.wall_ms << " ms\n";
    if (f == "json") {
      out_ << report.to_json().dump(2) << '\n';
    } else {
      out_ << report.to_table();
    }
    return report.has_machine_failure() ? 1 : 0;
  }

  int rank(FenceSize n) {
    const std::string f = format("table", {"json", "table"});
    const long value = rank_formula(n);
    const Grade grade = n <= 3 ? Grade::PaperProved : Grade::PaperFormula;
    if (f == "json") {
      nlohmann::ordered_json j;
      j["n"] = n.value();
      j["rank"] = value;
      j["grade"] = to_string(grade);
      if (n >= 3) j["generating_set_size"] = build_G(n).size();
      out_ << j.dump(2) << '\n';
    } else {
      out_ << value << "  " << to_string(grade) << '\n';
    }
    return 0;
  }

  const CliConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<std::filesystem::path> cache_;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliConfig cfg;
  CLI::App app{"Partial automorphisms of the odd fence: enumeration, closure, factorization, claim checks",
               "fencetool"};
  app.require_subcommand(1);

  const auto common = [&cfg](CLI::App* sub, bool with_gens) {
    sub->add_option("--n", cfg.n, "fence size (odd)")->required();
    sub->add_option("--format", cfg.format, "json | table | csv");
    sub->add_option("--cache-dir", cfg.cache_dir, std::string("cache directory (default $") + kCacheEnv + ")");
    sub->add_option("--workers", cfg.workers, "worker threads, 0 = all cores");
    sub->add_flag("--verbose,-v", cfg.verbose, "timing notes on stderr");
    if (with_gens) sub->add_option("--gens", cfg.gens, "G | J | file:PATH");
  };

  CLI::App* enumerate = app.add_subcommand("enumerate", "list FI_n with its rank histogram");
  common(enumerate, false);
  enumerate->add_flag("--list", cfg.list, "include every element");

  CLI::App* closure = app.add_subcommand("closure", "closure of a generator set");
  common(closure, true);
  closure->add_option("--witnesses", cfg.witnesses, "write code<TAB>word lines here");

  CLI::App* factor = app.add_subcommand("factor", "witness word for one map");
  common(factor, true);
  factor->add_option("--map", cfg.map_text, "images of 1..n, _ for undefined: 2,_,_,4,5")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the claim checks");
  common(verify, false);
  verify->add_option("--claims", cfg.claims, "comma separated claim ids (default all)");

  CLI::App* rank = app.add_subcommand("rank", "rank of FI_n");
  common(rank, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    Session session(cfg, out, err);
    return session.run();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
  }
  return static_cast<int>(ExitCode::Usage);
}

}  // namespace fence
