#include "fence/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace fence {

std::string to_string(Provenance p) { return p == Provenance::Exhaustive ? "exhaustive" : "closure-derived"; }

Provenance provenance_from_string(std::string_view s) {
  if (s == "exhaustive") return Provenance::Exhaustive;
  if (s == "closure-derived") return Provenance::ClosureDerived;
  throw FormatError("unknown universe mode '" + std::string(s) + "'");
}

ElementUniverse::ElementUniverse(FenceSize n, std::vector<Code> codes, Provenance provenance)
    : n_(n), codes_(std::move(codes)), histogram_(static_cast<std::size_t>(n.value()) + 1, 0), provenance_(provenance) {
  std::sort(codes_.begin(), codes_.end());
  codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
  for (Code c : codes_) ++histogram_[static_cast<std::size_t>(decode(n_, c).rank())];
}

bool ElementUniverse::contains(Code c) const { return std::binary_search(codes_.begin(), codes_.end(), c); }

std::vector<Code> ElementUniverse::layer(int rank) const {
  std::vector<Code> out;
  for (Code c : codes_)
    if (decode(n_, c).rank() == rank) out.push_back(c);
  return out;
}

namespace {

inline bool leq(int x, int y) noexcept { return x == y || ((x & 1) && !(y & 1) && (x - y == 1 || y - x == 1)); }
inline std::uint16_t bit(int v) noexcept { return static_cast<std::uint16_t>(1u << (v - 1)); }

}  // namespace

CandidateSearch::CandidateSearch(FenceSize n) : n_(n) { choice_[1] = -1; }

CandidateSearch::CandidateSearch(FenceSize n, int first_image) : n_(n), first_(first_image) {
  if (first_image < 0 || first_image > n.value()) throw ArgumentError("first image out of range");
  choice_[1] = -1;
}

bool CandidateSearch::consistent(int point, int image) const {
  if (image == 0) return true;
  for (int a = 1; a < point; ++a) {
    const int fa = choice_[static_cast<std::size_t>(a)];
    if (fa <= 0) continue;
    if (leq(a, point) != leq(fa, image) || leq(point, a) != leq(image, fa)) return false;
  }
  return true;
}

bool CandidateSearch::advance() {
  const int n = n_.value();
  while (depth_ > 0) {
    const int k = depth_;
    int& c = choice_[static_cast<std::size_t>(k)];
    if (c > 0) used_ &= static_cast<std::uint16_t>(~bit(c));
    int v = -1;
    if (k == 1 && first_) {
      if (c == -1) v = *first_;
    } else {
      for (int cand = c + 1; cand <= n; ++cand) {
        if (cand > 0 && (used_ & bit(cand))) continue;
        if (consistent(k, cand)) {
          v = cand;
          break;
        }
      }
    }
    if (v < 0) {
      c = -1;
      --depth_;
      continue;
    }
    c = v;
    if (v > 0) used_ |= bit(v);
    if (k == n) return true;
    ++depth_;
    choice_[static_cast<std::size_t>(depth_)] = -1;
  }
  return false;
}

std::optional<PartialInjection> CandidateSearch::next() {
  if (!advance()) return std::nullopt;
  PartialInjectionBuilder b(n_);
  for (int k = 1; k <= n_.value(); ++k) {
    const int y = choice_[static_cast<std::size_t>(k)];
    if (y > 0) b.map(k, y);
  }
  return b.build();
}

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

ElementUniverse enumerate_FI(FenceSize n, unsigned workers) {
  if (n > kMaxExhaustive) {
    throw CapacityError("exhaustive enumeration is limited to n <= " + std::to_string(kMaxExhaustive) +
                        "; obtain FI_" + std::to_string(n.value()) + " as a closure instead (closure --gens G)");
  }
  const int branches = n.value() + 1;
  std::vector<std::vector<Code>> parts(static_cast<std::size_t>(branches));
  std::atomic<int> next_branch{0};
  auto work = [&] {
    for (int b = next_branch++; b < branches; b = next_branch++) {
      CandidateSearch search(n, b);
      auto& out = parts[static_cast<std::size_t>(b)];
      while (auto f = search.next()) out.push_back(encode(*f));
    }
  };
  const unsigned threads = std::min<unsigned>(resolve_workers(workers), static_cast<unsigned>(branches));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  std::vector<Code> codes;
  for (auto& p : parts) codes.insert(codes.end(), p.begin(), p.end());
  return ElementUniverse(n, std::move(codes), Provenance::Exhaustive);
}

void for_each_partial_injection(FenceSize n, const std::function<void(const PartialInjection&)>& fn) {
  const int size = n.value();
  std::array<int, kMaxPoints + 1> img{};
  std::uint16_t used = 0;
  std::function<void(int)> rec = [&](int k) {
    if (k > size) {
      fn(PartialInjection::from_images(n, std::span<const int>(img.data() + 1, static_cast<std::size_t>(size))));
      return;
    }
    img[static_cast<std::size_t>(k)] = 0;
    rec(k + 1);
    for (int y = 1; y <= size; ++y) {
      if (used & bit(y)) continue;
      used |= bit(y);
      img[static_cast<std::size_t>(k)] = y;
      rec(k + 1);
      used &= static_cast<std::uint16_t>(~bit(y));
    }
    img[static_cast<std::size_t>(k)] = 0;
  };
  rec(1);
}

ElementUniverse enumerate_FI_filtered(FenceSize n) {
  if (n > kMaxExhaustive) throw CapacityError("filtered enumeration is limited to n <= " + std::to_string(kMaxExhaustive));
  std::vector<Code> codes;
  for_each_partial_injection(n, [&](const PartialInjection& f) {
    if (is_partial_automorphism(f)) codes.push_back(encode(f));
  });
  return ElementUniverse(n, std::move(codes), Provenance::Exhaustive);
}

std::vector<std::size_t> count_by_rank(const ElementUniverse& universe) {
  std::vector<std::size_t> hist(static_cast<std::size_t>(universe.n().value()) + 1, 0);
  for (Code c : universe.codes()) ++hist[static_cast<std::size_t>(decode(universe.n(), c).rank())];
  return hist;
}

namespace {

constexpr char kMagic[8] = {'F', 'N', 'C', 'O', 'D', 'E', 'S', '\0'};

template <typename T>
void put_le(std::ostream& out, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in, const std::filesystem::path& path) {
  unsigned char buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T))) throw FormatError("truncated code list " + path.string());
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

}  // namespace

void write_code_list(const std::filesystem::path& path, FenceSize n, const std::vector<Code>& sorted_codes) {
  if (!std::is_sorted(sorted_codes.begin(), sorted_codes.end())) throw ArgumentError("code list must be sorted");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kCodeListVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(n.value()));
  put_le<std::uint64_t>(out, sorted_codes.size());
  for (Code c : sorted_codes) put_le<std::uint64_t>(out, c);
  if (!out) throw FormatError("write failed for " + path.string());
}

std::pair<FenceSize, std::vector<Code>> read_code_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw FormatError("bad magic in " + path.string());
  }
  const auto version = get_le<std::uint32_t>(in, path);
  if (version != kCodeListVersion) throw FormatError("unsupported code list version " + std::to_string(version));
  const auto raw_n = get_le<std::uint32_t>(in, path);
  FenceSize n(static_cast<int>(raw_n));
  const auto count = get_le<std::uint64_t>(in, path);
  std::vector<Code> codes;
  codes.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    const Code c = get_le<std::uint64_t>(in, path);
    if (!codes.empty() && c <= codes.back()) throw FormatError("code list not strictly ascending in " + path.string());
    decode(n, c);
    codes.push_back(c);
  }
  return {n, std::move(codes)};
}

void save_universe(const ElementUniverse& universe, const std::filesystem::path& path) {
  write_code_list(path, universe.n(), universe.codes());
  nlohmann::ordered_json side;
  side["n"] = universe.n().value();
  side["count"] = universe.size();
  side["mode"] = to_string(universe.provenance());
  side["rank_histogram"] = universe.rank_histogram();
  std::ofstream out(path.string() + ".json", std::ios::trunc);
  out << side.dump(2) << '\n';
}

ElementUniverse load_universe(const std::filesystem::path& path) {
  auto [n, codes] = read_code_list(path);
  Provenance mode = Provenance::Exhaustive;
  std::ifstream side(path.string() + ".json");
  if (side) {
    try {
      const auto j = nlohmann::json::parse(side);
      mode = provenance_from_string(j.at("mode").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad universe sidecar for " + path.string() + ": " + e.what());
    }
  }
  return ElementUniverse(n, std::move(codes), mode);
}

}  // namespace fence
