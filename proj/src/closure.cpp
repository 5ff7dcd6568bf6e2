#include "fence/closure.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace fence {

std::string Word::str() const {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += kWordSeparator;
    out += labels[i];
  }
  return out;
}

Word Word::parse(std::string_view text) {
  Word w;
  std::size_t pos = 0;
  while (true) {
    const std::size_t sep = text.find(kWordSeparator, pos);
    const std::string_view tok = text.substr(pos, sep == std::string_view::npos ? std::string_view::npos : sep - pos);
    if (tok.empty()) throw FormatError("empty label in word '" + std::string(text) + "'");
    w.labels.emplace_back(tok);
    if (sep == std::string_view::npos) break;
    pos = sep + kWordSeparator.size();
  }
  return w;
}

PartialInjection evaluate(const Word& word, const GeneratorSet& gens) {
  if (word.labels.empty()) throw ArgumentError("cannot evaluate the empty word");
  PartialInjection acc = gens.at(word.labels.front());
  for (std::size_t i = 1; i < word.labels.size(); ++i) acc = compose(acc, gens.at(word.labels[i]));
  return acc;
}

ClosureResult::ClosureResult(GeneratorSet gens, std::size_t expected) : gens_(std::move(gens)), index_(expected) {
  codes_.reserve(expected);
  parent_.reserve(expected);
  last_gen_.reserve(expected);
  length_.reserve(expected);
}

std::uint32_t ClosureResult::append(Code code, std::int32_t parent, std::uint32_t gen, std::uint16_t length) {
  const auto idx = static_cast<std::uint32_t>(codes_.size());
  codes_.push_back(code);
  parent_.push_back(parent);
  last_gen_.push_back(gen);
  length_.push_back(length);
  index_.insert(code, idx);
  return idx;
}

void ClosureResult::finish_stats() {
  stats_.level_sizes.clear();
  for (std::uint16_t len : length_) {
    if (stats_.level_sizes.size() < len) stats_.level_sizes.resize(len, 0);
    ++stats_.level_sizes[len - 1u];
  }
}

Word ClosureResult::witness(Code code) const {
  const auto idx = index_.find(code);
  if (!idx) throw NotGeneratedError("element " + std::to_string(code) + " is not generated");
  Word w;
  for (std::int32_t i = static_cast<std::int32_t>(*idx); i >= 0; i = parent_[static_cast<std::size_t>(i)]) {
    w.labels.push_back(gens_.entries()[last_gen_[static_cast<std::size_t>(i)]].label);
  }
  std::reverse(w.labels.begin(), w.labels.end());
  return w;
}

std::size_t ClosureResult::witness_length(Code code) const {
  const auto idx = index_.find(code);
  if (!idx) throw NotGeneratedError("element " + std::to_string(code) + " is not generated");
  return length_[*idx];
}

std::vector<Code> ClosureResult::members() const {
  std::vector<Code> out = codes_;
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

GeneratorSet sorted_by_label(const GeneratorSet& gens) {
  std::vector<const Generator*> order;
  for (const Generator& g : gens.entries()) order.push_back(&g);
  std::sort(order.begin(), order.end(), [](const Generator* a, const Generator* b) { return a->label < b->label; });
  GeneratorSet out(gens.n());
  for (const Generator* g : order) out.add(g->label, g->element);
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct Candidate {
  Code code;
  std::uint32_t parent;
  std::uint32_t gen;
};

}  // namespace

ClosureResult close(const GeneratorSet& input, const ClosureOptions& options) {
  if (input.empty()) throw ArgumentError("cannot close an empty generator set");
  const auto start = std::chrono::steady_clock::now();
  ClosureResult r(sorted_by_label(input), options.expected_size);
  const FenceSize n = r.n();
  std::vector<PartialInjection> gel;
  for (const Generator& g : r.gens_.entries()) gel.push_back(g.element);
  const auto gen_count = static_cast<std::uint32_t>(gel.size());

  std::vector<std::uint32_t> frontier;
  for (std::uint32_t g = 0; g < gen_count; ++g) {
    const Code c = encode(gel[g]);
    if (!r.contains(c)) frontier.push_back(r.append(c, -1, g, 1));
  }

  const unsigned workers = resolve_workers(options.workers);
  std::uint16_t length = 1;
  while (!frontier.empty()) {
    ++length;
    // Slices are contiguous and merged in slice order, so candidates arrive
    // sorted by (frontier position, generator) whatever the worker count.
    const std::size_t slices = std::max<std::size_t>(1, std::min<std::size_t>(workers, frontier.size() / 256));
    std::vector<std::vector<Candidate>> local(slices);
    auto expand = [&](std::size_t s) {
      const std::size_t lo = frontier.size() * s / slices;
      const std::size_t hi = frontier.size() * (s + 1) / slices;
      auto& out = local[s];
      for (std::size_t pos = lo; pos < hi; ++pos) {
        const std::uint32_t idx = frontier[pos];
        const PartialInjection f = decode(n, r.codes_[idx]);
        for (std::uint32_t g = 0; g < gen_count; ++g) {
          const Code c = encode(compose(f, gel[g]));
          if (!r.index_.contains(c)) out.push_back({c, idx, g});
        }
      }
    };
    if (slices == 1) {
      expand(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t s = 0; s < slices; ++s) pool.emplace_back(expand, s);
    }
    r.stats_.products += static_cast<std::uint64_t>(frontier.size()) * gen_count;

    std::vector<std::uint32_t> next;
    for (const auto& part : local) {
      for (const Candidate& cand : part) {
        if (r.contains(cand.code)) continue;
        next.push_back(r.append(cand.code, static_cast<std::int32_t>(cand.parent), cand.gen, length));
      }
    }
    frontier = std::move(next);
  }
  r.finish_stats();
  r.stats_.wall_ms = elapsed_ms(start);
  return r;
}

ClosureResult close_excluding(const ElementUniverse& universe, const std::vector<Code>& excluded,
                              const ClosureOptions& /*options*/) {
  const auto start = std::chrono::steady_clock::now();
  const FenceSize n = universe.n();
  std::vector<Code> banned = excluded;
  std::sort(banned.begin(), banned.end());
  banned.erase(std::unique(banned.begin(), banned.end()), banned.end());
  for (Code c : banned) {
    if (!universe.contains(c)) throw ArgumentError("excluded element " + std::to_string(c) + " is not in the universe");
  }
  const auto is_banned = [&](Code c) { return std::binary_search(banned.begin(), banned.end(), c); };

  GeneratorSet raw(n);
  for (Code c : universe.codes())
    if (!is_banned(c)) raw.add(std::to_string(c), decode(n, c));
  if (raw.empty()) throw ArgumentError("nothing left to close after exclusion");
  ClosureResult r(sorted_by_label(raw), universe.size());

  const auto& entries = r.gens_.entries();
  const auto gen_count = static_cast<std::uint32_t>(entries.size());
  CodeIndex gen_of(gen_count);
  std::vector<int> gen_rank(gen_count);
  for (std::uint32_t g = 0; g < gen_count; ++g) {
    gen_of.insert(encode(entries[g].element), g);
    gen_rank[g] = entries[g].element.rank();
  }

  // A product whose rank is r has every prefix of rank >= r, and only factors
  // of rank >= r. Layers are therefore settled from rank n downwards: a layer
  // is reached from a strictly higher prefix times one generator, then grown
  // by right multiplication inside the layer.
  std::vector<std::vector<Code>> layer(static_cast<std::size_t>(n.value()) + 1);
  for (Code c : universe.codes()) layer[static_cast<std::size_t>(decode(n, c).rank())].push_back(c);

  for (int rank = n.value(); rank >= 0; --rank) {
    const auto& codes = layer[static_cast<std::size_t>(rank)];
    const auto higher = static_cast<std::uint32_t>(r.size());
    std::unordered_set<Code> pending;
    for (Code c : codes) {
      if (is_banned(c)) {
        pending.insert(c);
      } else {
        r.append(c, -1, *gen_of.find(c), 1);
      }
    }
    if (pending.empty()) continue;

    std::vector<std::uint32_t> usable;
    for (std::uint32_t g = 0; g < gen_count; ++g)
      if (gen_rank[g] >= rank) usable.push_back(g);

    auto try_reach = [&](std::uint32_t from) {
      const PartialInjection f = decode(n, r.codes_[from]);
      for (std::uint32_t g : usable) {
        ++r.stats_.products;
        const PartialInjection p = compose(f, entries[g].element);
        if (p.rank() != rank) continue;
        const Code c = encode(p);
        if (pending.erase(c) == 0) continue;
        r.append(c, static_cast<std::int32_t>(from), g, static_cast<std::uint16_t>(r.length_[from] + 1));
        if (pending.empty()) return;
      }
    };
    for (std::uint32_t h = 0; h < higher && !pending.empty(); ++h) try_reach(h);
    for (std::uint32_t m = higher; m < r.size() && !pending.empty(); ++m) try_reach(m);
  }
  r.finish_stats();
  r.stats_.wall_ms = elapsed_ms(start);
  return r;
}

Word factorize(const PartialInjection& target, const ClosureResult& closure) {
  if (target.n() != closure.n().value()) throw ArgumentError("target lives on a different fence");
  return closure.witness(encode(target));
}

GenerationReport verify_generates(const GeneratorSet& gens, const ElementUniverse& universe, const ClosureOptions& options) {
  if (gens.n() != universe.n()) throw ArgumentError("generator set and universe differ in n");
  ClosureOptions opts = options;
  if (opts.expected_size == 0) opts.expected_size = universe.size();
  const ClosureResult r = close(gens, opts);
  const std::vector<Code> got = r.members();
  GenerationReport rep;
  rep.closure_size = got.size();
  rep.universe_size = universe.size();
  std::set_difference(universe.codes().begin(), universe.codes().end(), got.begin(), got.end(),
                      std::back_inserter(rep.missing));
  std::set_difference(got.begin(), got.end(), universe.codes().begin(), universe.codes().end(),
                      std::back_inserter(rep.extra));
  rep.generates = rep.missing.empty() && rep.extra.empty();
  return rep;
}

ElementUniverse universe_from_closure(const ClosureResult& closure) {
  return ElementUniverse(closure.n(), closure.members(), Provenance::ClosureDerived);
}

ElementUniverse universe_for(FenceSize n, unsigned workers) {
  if (n <= kMaxExhaustive) return enumerate_FI(n, workers);
  return universe_from_closure(close(build_G(n), {workers, 0}));
}

void write_witnesses(const ClosureResult& closure, std::ostream& out) {
  for (Code c : closure.members()) out << c << '\t' << closure.witness(c).str() << '\n';
}

std::string closure_cache_key(const GeneratorSet& gens) {
  const GeneratorSet sorted = sorted_by_label(gens);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  auto feed = [&](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 0x100000001b3ULL;
    }
  };
  feed(std::to_string(gens.n().value()));
  feed("\n");
  for (const Generator& g : sorted.entries()) {
    feed(g.label);
    feed("\t");
    feed(format_map(g.element));
    feed("\n");
  }
  std::ostringstream key;
  key << "closure-n" << gens.n().value() << '-' << sorted.size() << "gens-" << std::hex << std::setw(16)
      << std::setfill('0') << h;
  return key.str();
}

void save_closure(const ClosureResult& closure, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_code_list(dir / "members.bin", closure.n(), closure.members());
  {
    std::ofstream out(dir / "witnesses.tsv", std::ios::trunc);
    write_witnesses(closure, out);
  }
  nlohmann::ordered_json stats;
  stats["n"] = closure.n().value();
  std::vector<std::string> labels;
  for (const Generator& g : closure.generators().entries()) labels.push_back(g.label);
  stats["generators"] = labels;
  stats["size"] = closure.size();
  stats["level_sizes"] = closure.stats().level_sizes;
  stats["products"] = closure.stats().products;
  stats["wall_ms"] = closure.stats().wall_ms;
  std::ofstream out(dir / "stats.json", std::ios::trunc);
  out << stats.dump(2) << '\n';
}

ClosureResult load_closure(const GeneratorSet& gens, const std::filesystem::path& dir) {
  ClosureResult r(sorted_by_label(gens), 0);
  const auto& entries = r.gens_.entries();

  std::ifstream stats_in(dir / "stats.json");
  if (!stats_in) throw FormatError("missing stats.json in " + dir.string());
  nlohmann::json stats;
  try {
    stats = nlohmann::json::parse(stats_in);
    std::vector<std::string> labels;
    for (const Generator& g : entries) labels.push_back(g.label);
    if (stats.at("n").get<int>() != gens.n().value() || stats.at("generators").get<std::vector<std::string>>() != labels) {
      throw FormatError("cached closure in " + dir.string() + " was built from different generators");
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("bad stats.json in " + dir.string() + ": " + e.what());
  }

  std::unordered_map<std::string, std::uint32_t> gen_index;
  for (std::uint32_t g = 0; g < entries.size(); ++g) gen_index.emplace(entries[g].label, g);

  struct Line {
    Code code;
    std::vector<std::uint32_t> word;
  };
  std::vector<Line> lines;
  std::ifstream in(dir / "witnesses.tsv");
  if (!in) throw FormatError("missing witnesses.tsv in " + dir.string());
  std::string text;
  while (std::getline(in, text)) {
    const std::size_t tab = text.find('\t');
    if (tab == std::string::npos) throw FormatError("malformed witness line '" + text + "'");
    Line line{std::stoull(text.substr(0, tab)), {}};
    for (const std::string& label : Word::parse(std::string_view(text).substr(tab + 1)).labels) {
      const auto it = gen_index.find(label);
      if (it == gen_index.end()) throw FormatError("unknown label '" + label + "' in cached witnesses");
      line.word.push_back(it->second);
    }
    lines.push_back(std::move(line));
  }
  // Breadth-first discovery order is (length, word) with labels ranked by index.
  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
    if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
    return a.word < b.word;
  });
  std::map<std::vector<std::uint32_t>, std::uint32_t> by_word;
  for (const Line& line : lines) {
    PartialInjection f = entries[line.word.back()].element;
    std::int32_t parent = -1;
    if (line.word.size() > 1) {
      const std::vector<std::uint32_t> prefix(line.word.begin(), line.word.end() - 1);
      const auto it = by_word.find(prefix);
      if (it == by_word.end()) throw FormatError("cached witness for " + std::to_string(line.code) + " has no cached prefix");
      parent = static_cast<std::int32_t>(it->second);
      f = compose(decode(r.n(), r.codes_[it->second]), f);
    }
    if (encode(f) != line.code) throw FormatError("cached witness for " + std::to_string(line.code) + " does not evaluate to it");
    if (r.contains(line.code)) throw FormatError("duplicate cached member " + std::to_string(line.code));
    by_word.emplace(line.word, r.append(line.code, parent, line.word.back(), static_cast<std::uint16_t>(line.word.size())));
  }
  r.finish_stats();
  const auto [members_n, members] = read_code_list(dir / "members.bin");
  if (members != r.members()) throw FormatError("members.bin disagrees with witnesses.tsv in " + dir.string());
  if (stats.at("level_sizes").get<std::vector<std::size_t>>() != r.stats_.level_sizes) {
    throw FormatError("stats.json level sizes disagree with witnesses in " + dir.string());
  }
  r.stats_.products = stats.at("products").get<std::uint64_t>();
  r.stats_.wall_ms = stats.at("wall_ms").get<double>();
  return r;
}

}  // namespace fence
