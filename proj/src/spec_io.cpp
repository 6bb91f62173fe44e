#include "hmmq/spec_io.hpp"

#include <cstdlib>
#include <fstream>

#include "hmmq/errors.hpp"

namespace hmmq {

using nlohmann::json;

std::size_t max_states_from_env() {
  const char* raw = std::getenv("HMMQ_MAX_STATES");
  if (raw == nullptr || *raw == '\0') return kDefaultMaxStates;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) {
    throw SpecFormatError(std::string("HMMQ_MAX_STATES is not a positive integer: ") + raw);
  }
  return static_cast<std::size_t>(v);
}

json spec_to_json(const GeneratorSpec& spec) {
  json transitions = json::array();
  for (const auto& t : spec.transitions) {
    transitions.push_back(
        {{"from", t.from}, {"to", t.to}, {"symbol", t.symbol}, {"p", t.p}});
  }
  return {{"states", spec.states},
          {"alphabet", spec.alphabet},
          {"transitions", std::move(transitions)}};
}

GeneratorSpec spec_from_json(const json& doc, std::size_t max_states) {
  GeneratorSpec spec;
  try {
    if (!doc.is_object()) throw SpecFormatError("spec must be a JSON object");
    spec.states = doc.at("states").get<std::vector<std::string>>();
    spec.alphabet = doc.at("alphabet").get<std::vector<std::string>>();
    for (const auto& t : doc.at("transitions")) {
      spec.transitions.push_back(Transition{
          t.at("from").get<std::string>(), t.at("to").get<std::string>(),
          t.at("symbol").get<std::string>(), t.at("p").get<double>()});
    }
  } catch (const json::exception& e) {
    throw SpecFormatError(e.what());
  }
  if (spec.states.size() > max_states) {
    throw ResourceError(std::to_string(spec.states.size()) +
                        " states exceed the limit of " +
                        std::to_string(max_states) + " (HMMQ_MAX_STATES)");
  }
  return spec;
}

GeneratorSpec load_spec_file(const std::string& path, std::size_t max_states) {
  std::ifstream in(path);
  if (!in) throw SpecFormatError("cannot open spec file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecFormatError(path + ": " + e.what());
  }
  return spec_from_json(doc, max_states);
}

void save_spec_file(const GeneratorSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SpecFormatError("cannot write spec file '" + path + "'");
  out << spec_to_json(spec).dump(2) << '\n';
}

}  // namespace hmmq
