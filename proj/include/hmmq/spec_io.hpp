#pragma once

#include <cstddef>
#include <string>

#include <json.hpp>

#include "hmmq/generator.hpp"

namespace hmmq {

/// Default bound on accepted state counts; HMMQ_MAX_STATES overrides it.
inline constexpr std::size_t kDefaultMaxStates = 2000;

/// Reads HMMQ_MAX_STATES, falling back to kDefaultMaxStates.
std::size_t max_states_from_env();

/// {"states": [...], "alphabet": [...],
///  "transitions": [{"from", "to", "symbol", "p"}, ...]}
nlohmann::json spec_to_json(const GeneratorSpec& spec);

/// Throws SpecFormatError on schema violations and ResourceError when the
/// state count exceeds max_states.
GeneratorSpec spec_from_json(const nlohmann::json& doc,
                             std::size_t max_states = kDefaultMaxStates);

GeneratorSpec load_spec_file(const std::string& path,
                             std::size_t max_states = kDefaultMaxStates);
void save_spec_file(const GeneratorSpec& spec, const std::string& path);

}  // namespace hmmq
