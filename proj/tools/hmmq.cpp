// hmmq: classical vs quantum implementations of HMM generators.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmmq/errors.hpp"
#include "hmmq/renewal.hpp"
#include "hmmq/spec_io.hpp"
#include "hmmq/workbench.hpp"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kInput = 1, kNumerical = 2, kRegression = 3 };

struct Common {
  std::string out;
  std::string format = "text";
};

struct ContextError : hmmq::Error {
  ContextError(const hmmq::Error& e, const std::string& context)
      : hmmq::Error(e.kind(), std::string(e.what()).find(context) == std::string::npos
                                  ? context + ": " + e.what()
                                  : std::string(e.what())) {}
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw hmmq::SpecFormatError("cannot write output file '" + c.out + "'");
  f << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

hmmq::Generator load_generator(const std::string& path) {
  try {
    return hmmq::validate_spec(hmmq::load_spec_file(path, hmmq::max_states_from_env()));
  } catch (const hmmq::Error& e) {
    throw ContextError(e, path);
  }
}

void require_format(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  throw hmmq::SpecFormatError("format '" + c.format + "' is not available here");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classical and quantum implementations of hidden Markov generators"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out, "Write the report to this path");
  app.add_option("--format", common.format, "json, csv or text")
      ->check(CLI::IsMember({"json", "csv", "text"}));

  std::string spec_path, encoding = "end-state", generator = "A",
                         generators = "ABC";
  double p = 0.5, p_min = 0.1, p_max = 0.95, step = 0.05;
  std::optional<std::size_t> truncation;
  std::optional<int> block_length;
  std::optional<double> temperature;
  int l_max = 6;
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  bool no_merge = false;

  auto* analyze = app.add_subcommand("analyze", "Full classical vs quantum analysis");
  analyze->add_option("--spec", spec_path, "Generator spec JSON")->required();
  analyze->add_option("--encoding", encoding, "end-state or phase");
  analyze->add_option("--L-max", block_length, "Block length for the entropy-rate estimate");
  analyze->add_option("--temperature", temperature, "Also report work in joules at T kelvin");
  analyze->add_flag("--no-merge", no_merge, "Skip merging equivalent states");

  auto* t1 = app.add_subcommand("table1", "Costs of the SNS generators A, B and C");
  t1->add_option("--p", p, "SNS parameter");
  t1->add_option("--N", truncation, "Truncation of the renewal generators");

  auto* sw = app.add_subcommand("sweep", "Costs of A, B and C over a grid of p");
  sw->add_option("--p-min", p_min);
  sw->add_option("--p-max", p_max);
  sw->add_option("--step", step);
  sw->add_option("--generators", generators, "Subset of ABC");
  sw->add_option("--jobs", jobs, "Points evaluated in parallel");

  auto* ver = app.add_subcommand("verify", "Check the quantum channel against word probabilities");
  ver->add_option("--spec", spec_path, "Generator spec JSON")->required();
  ver->add_option("--encoding", encoding, "end-state or phase");
  ver->add_option("--L-max", l_max, "Longest word compared exactly");
  ver->add_option("--samples", samples, "Sampled runs per implementation");
  ver->add_option("--seed", seed);

  auto* sns = app.add_subcommand("sns", "Emit an SNS generator spec");
  sns->add_option("--p", p, "SNS parameter")->required();
  sns->add_option("--generator", generator, "A, B or C")
      ->check(CLI::IsMember({"A", "B", "C"}));
  sns->add_option("--N", truncation, "Truncation of the renewal generators");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*analyze) {
      require_format(common, {"text", "json"});
      hmmq::AnalysisOptions opts;
      opts.encoding = hmmq::parse_encoding(encoding);
      opts.merge = !no_merge;
      opts.block_length = block_length;
      const hmmq::Generator gen = load_generator(spec_path);
      hmmq::AnalysisBundle bundle;
      try {
        bundle = hmmq::analyze(gen, opts, spec_path);
      } catch (const hmmq::Error& e) {
        throw ContextError(e, spec_path);
      }
      json doc = hmmq::bundle_to_json(bundle, temperature);
      doc["config"] = {{"command", "analyze"},
                       {"spec", spec_path},
                       {"encoding", encoding},
                       {"merge", opts.merge},
                       {"L_max", block_length ? json(*block_length) : json(nullptr)},
                       {"temperature", temperature ? json(*temperature) : json(nullptr)}};
      if (common.format == "json") {
        emit(common, dump(doc));
      } else {
        std::cout << hmmq::bundle_to_text(bundle);
        if (!common.out.empty()) emit(common, dump(doc));
      }
      return kOk;
    }

    if (*t1) {
      require_format(common, {"text", "json"});
      const auto t = hmmq::table1(p, truncation);
      json doc = hmmq::table1_to_json(t);
      doc["config"] = {{"command", "table1"}, {"p", p}, {"N", t.truncation}};
      emit(common, common.format == "json" ? dump(doc) : hmmq::table1_to_text(t));
      if (!t.ok()) {
        std::cerr << "hmmq: table1 regression: "
                  << (t.matches_reference ? "grid is inconsistent"
                                          : "entries deviate from the reference values")
                  << "\n";
        return kRegression;
      }
      return kOk;
    }

    if (*sw) {
      require_format(common, {"text", "csv", "json"});
      const auto rows = hmmq::sweep(hmmq::sweep_grid(p_min, p_max, step), generators, jobs);
      if (common.format == "json") {
        json doc = {{"config",
                     {{"command", "sweep"},
                      {"p_min", p_min},
                      {"p_max", p_max},
                      {"step", step},
                      {"generators", generators}}},
                    {"rows", json::array()}};
        const std::string csv = hmmq::sweep_to_csv(rows, generators);
        std::istringstream lines(csv);
        std::string header, line;
        std::getline(lines, header);
        std::vector<std::string> names;
        std::istringstream hs(header);
        for (std::string n; std::getline(hs, n, ',');) names.push_back(n);
        while (std::getline(lines, line)) {
          json row = json::object();
          std::istringstream ls(line);
          std::size_t i = 0;
          for (std::string v; std::getline(ls, v, ',') && i < names.size(); ++i)
            row[names[i]] = std::stod(v);
          doc["rows"].push_back(std::move(row));
        }
        emit(common, dump(doc));
      } else {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "# sweep p_min=%.12g p_max=%.12g step=%.12g generators=%s\n",
                      p_min, p_max, step, generators.c_str());
        emit(common, buf + hmmq::sweep_to_csv(rows, generators));
      }
      return kOk;
    }

    if (*ver) {
      require_format(common, {"text", "json"});
      hmmq::VerifyOptions opts;
      opts.max_length = l_max;
      opts.samples = samples;
      opts.seed = seed;
      opts.encoding = hmmq::parse_encoding(encoding);
      const hmmq::Generator gen = load_generator(spec_path);
      hmmq::VerifyReport r;
      try {
        r = hmmq::verify(gen, opts);
      } catch (const hmmq::Error& e) {
        throw ContextError(e, spec_path);
      }
      if (common.format == "json") {
        json doc = hmmq::verify_to_json(gen, r);
        doc["config"] = {{"command", "verify"}, {"spec", spec_path},
                         {"encoding", encoding}, {"L_max", l_max},
                         {"samples", samples},   {"seed", seed}};
        emit(common, dump(doc));
      } else {
        std::ostringstream head;
        head << "# verify spec=" << spec_path << " encoding=" << encoding
             << " L_max=" << l_max << " samples=" << samples << " seed=" << seed
             << "\n";
        emit(common, head.str() + hmmq::verify_to_text(gen, r));
      }
      return r.ok() ? kOk : kNumerical;
    }

    if (*sns) {
      require_format(common, {"text", "json"});
      hmmq::GeneratorSpec spec;
      if (generator == "A") {
        spec = hmmq::sns_A_spec(p);
      } else {
        const auto fam = hmmq::sns_family(p, truncation);
        spec = generator == "B" ? hmmq::renewal_B_spec(fam) : hmmq::renewal_C_spec(fam);
      }
      hmmq::validate_spec(spec);
      emit(common, dump(hmmq::spec_to_json(spec)));
      return kOk;
    }
  } catch (const hmmq::Error& e) {
    std::cerr << "hmmq: " << e.what() << "\n";
    return e.kind() == hmmq::ErrorKind::Input ? kInput : kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "hmmq: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
