#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "fence/generators.hpp"

namespace fence {

/// Environment variable naming the default cache directory.
inline constexpr const char* kCacheEnv = "FENCETOOL_CACHE_DIR";

enum class ExitCode : int { Ok = 0, Failure = 1, Usage = 2 };

/// Generator set as {"n": 5, "entries": [{"label": "...", "map": "2,_,..."}]}.
nlohmann::ordered_json generators_to_json(const GeneratorSet& gens);
GeneratorSet generators_from_json(const nlohmann::json& j);

/// `fencetool` with its own streams, for embedding and tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fence
