#include "hmmq/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>

#include "hmmq/errors.hpp"
#include "hmmq/renewal.hpp"

namespace hmmq {

using nlohmann::json;

namespace {

std::string sig3(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string sig12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(round_sig12(x));
  return out;
}

}  // namespace

EncodingChoice parse_encoding(const std::string& name) {
  if (name == "end-state") return EncodingChoice::EndState;
  if (name == "phase") return EncodingChoice::Phase;
  throw SpecFormatError("unknown encoding '" + name +
                        "' (expected end-state or phase)");
}

std::string to_string(EncodingChoice choice) {
  return choice == EncodingChoice::EndState ? "end-state" : "phase";
}

EncodingScheme make_encoding(EncodingChoice choice) {
  return choice == EncodingChoice::EndState ? EncodingScheme::end_state_label()
                                            : EncodingScheme::phase_only();
}

double round_sig12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  return std::stod(sig12(v));
}

TheoremChecks evaluate_checks(const AnalysisBundle& b) {
  const auto& c = b.classical;
  const auto& q = b.quantum;
  TheoremChecks t;
  t.memory_bound = q.C <= c.C + kMemoryBoundTol && q.D <= c.D + kMemoryBoundTol;
  const bool memory_advantage = c.C - q.C > kAdvantageTol;
  t.advantage_iff_nonretro = b.retrodictive
                                 ? std::abs(c.C - q.C) <= kAdvantageTol
                                 : memory_advantage;
  const bool work_advantage = c.W - q.W > kAdvantageTol;
  t.sign_agreement = memory_advantage == work_advantage;
  const double slack = b.h_mu_exact ? kDissipationTol : kIpslEstimateSlack;
  t.ipsl_classical = b.classical_dissipation >= -slack;
  t.ipsl_quantum = b.quantum_dissipation >= -slack;
  return t;
}

AnalysisBundle analyze(const Generator& input, const AnalysisOptions& options,
                       std::string id) {
  const Generator gen = options.merge ? merge_equivalent_states(input) : input;
  AnalysisBundle b;
  b.id = std::move(id);
  b.input_states = input.num_states();
  b.num_states = gen.num_states();
  b.num_symbols = gen.num_symbols();
  b.unifilar = gen.unifilar();
  b.retrodictive = gen.retrodictive();
  b.encoding = options.encoding;
  b.classical = classical_report(gen);
  b.quantum = quantum_report(gen, make_encoding(options.encoding));
  if (gen.unifilar()) {
    b.h_mu = entropy_rate_unifilar(gen);
    b.h_mu_exact = true;
  } else {
    b.h_mu_block_length = options.block_length.value_or(
        affordable_block_length(gen, kAnalysisWordBudget));
    b.h_mu = entropy_rate_estimate(gen, b.h_mu_block_length,
                                   std::max(kAnalysisWordBudget, kDefaultWordBudget));
  }
  b.classical_dissipation = b.classical.W + b.h_mu;
  b.quantum_dissipation = b.quantum.W + b.h_mu;
  b.checks = evaluate_checks(b);
  return b;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({round_sig12(m(i, j).real()), round_sig12(m(i, j).imag())});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json bundle_to_json(const AnalysisBundle& b,
                    std::optional<double> temperature_kelvin) {
  json classical = {{"D", round_sig12(b.classical.D)},
                    {"C", round_sig12(b.classical.C)},
                    {"W", round_sig12(b.classical.W)},
                    {"dissipation", round_sig12(b.classical_dissipation)}};
  json quantum = {{"D", round_sig12(b.quantum.D)},
                  {"C", round_sig12(b.quantum.C)},
                  {"W", round_sig12(b.quantum.W)},
                  {"dissipation", round_sig12(b.quantum_dissipation)},
                  {"rank", b.quantum.rank},
                  {"gram", matrix_to_json(b.quantum.gram.entries)},
                  {"spectrum", vector_to_json(b.quantum.spectrum)}};
  if (temperature_kelvin) {
    classical["W_joules"] = work_in_joules(b.classical.W, *temperature_kelvin);
    quantum["W_joules"] = work_in_joules(b.quantum.W, *temperature_kelvin);
  }
  return {
      {"id", b.id},
      {"generator",
       {{"input_states", b.input_states},
        {"states", b.num_states},
        {"symbols", b.num_symbols},
        {"unifilar", b.unifilar},
        {"retrodictive", b.retrodictive}}},
      {"encoding", to_string(b.encoding)},
      {"h_mu",
       {{"value", round_sig12(b.h_mu)},
        {"exact", b.h_mu_exact},
        {"block_length", b.h_mu_block_length}}},
      {"classical", std::move(classical)},
      {"quantum", std::move(quantum)},
      {"checks",
       {{"memory_bound", b.checks.memory_bound},
        {"advantage_iff_nonretrodictive", b.checks.advantage_iff_nonretro},
        {"memory_work_sign_agreement", b.checks.sign_agreement},
        {"ipsl_classical", b.checks.ipsl_classical},
        {"ipsl_quantum", b.checks.ipsl_quantum},
        {"all", b.checks.all()}}}};
}

std::string bundle_to_text(const AnalysisBundle& b) {
  std::ostringstream os;
  os << "generator " << (b.id.empty() ? "<memory>" : b.id) << ": "
     << b.num_states << " states";
  if (b.input_states != b.num_states) os << " (merged from " << b.input_states << ")";
  os << ", " << b.num_symbols << " symbols, "
     << (b.unifilar ? "unifilar" : "non-unifilar") << ", "
     << (b.retrodictive ? "retrodictive" : "non-retrodictive") << "\n";
  os << "encoding " << to_string(b.encoding) << "; h_mu = " << sig3(b.h_mu)
     << (b.h_mu_exact ? " (exact)" : " (block estimate, L=" +
                                          std::to_string(b.h_mu_block_length) + ")")
     << "\n\n";
  os << "            D        C        W        dissipation\n";
  auto row = [&](const char* name, double d, double c, double w, double diss) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s  %-7s  %-7s  %-7s  %s\n", name,
                  sig3(d).c_str(), sig3(c).c_str(), sig3(w).c_str(),
                  sig3(diss).c_str());
    os << buf;
  };
  row("classical", b.classical.D, b.classical.C, b.classical.W,
      b.classical_dissipation);
  row("quantum", b.quantum.D, b.quantum.C, b.quantum.W, b.quantum_dissipation);
  auto flag = [](bool v) { return v ? "pass" : "FAIL"; };
  os << "\nchecks: memory bound " << flag(b.checks.memory_bound)
     << ", advantage iff non-retrodictive " << flag(b.checks.advantage_iff_nonretro)
     << ", memory/work sign " << flag(b.checks.sign_agreement) << ", IPSL "
     << flag(b.checks.ipsl_classical && b.checks.ipsl_quantum) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

double Table1Result::value(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.value;
  throw SpecFormatError("no table entry named " + name);
}

Table1Result table1(double p, std::optional<std::size_t> truncation) {
  const Generator a = build_sns_A(p);
  const auto fam = sns_family(p, truncation);
  const Generator b = validate_spec(renewal_B_spec(fam));
  const Generator c = validate_spec(renewal_C_spec(fam));

  const auto ca = classical_report(a), cb = classical_report(b),
             cc = classical_report(c);
  const auto qa = quantum_report(a, EncodingScheme::end_state_label());
  const auto qb = fam.truncation() <= kTable1FixedPointLimit
                      ? quantum_report(b, EncodingScheme::phase_only())
                      : quantum_report(b, renewal_gram(fam));
  const auto qc = quantum_report(c, EncodingScheme::end_state_label());

  Table1Result t;
  t.p = p;
  t.truncation = static_cast<std::size_t>(b.num_states() - 1);
  t.h_mu = entropy_rate_unifilar(b);

  const bool at_half = p == 0.5;
  auto ref = [&](double v) { return at_half ? std::optional<double>(v) : std::nullopt; };
  t.entries = {{"C_cA", ca.C, ref(1.0)},    {"C_qA", qa.C, ref(0.811)},
               {"W_cA", ca.W, ref(-0.5)},   {"W_qA", qa.W, ref(-0.558)},
               {"C_cB", cb.C, ref(2.71)},   {"C_qB", qb.C, ref(0.386)},
               {"W_cB", cb.W, ref(0.0)},    {"W_qB", qb.W, ref(-0.468)},
               {"C_cC", cc.C, ref(2.71)},   {"C_qC", qc.C, ref(2.71)},
               {"W_cC", cc.W, ref(-0.678)}, {"W_qC", qc.W, ref(-0.678)}};
  for (const auto& e : t.entries) {
    if (e.reference && std::abs(e.value - *e.reference) > kTable1Tol) {
      t.matches_reference = false;
    }
  }
  t.consistent = qa.C <= ca.C + kMemoryBoundTol && qb.C <= cb.C + kMemoryBoundTol &&
                 std::abs(qc.C - cc.C) <= kAdvantageTol &&
                 qa.W <= ca.W + kAdvantageTol && qb.W <= cb.W + kAdvantageTol &&
                 std::abs(qc.W - cc.W) <= kAdvantageTol &&
                 std::abs(cb.C - cc.C) <= kAdvantageTol &&
                 std::abs(cc.W + t.h_mu) <= kAdvantageTol;
  return t;
}

json table1_to_json(const Table1Result& t) {
  json entries = json::object();
  for (const auto& e : t.entries) {
    json item = {{"value", round_sig12(e.value)}};
    if (e.reference) {
      item["reference"] = *e.reference;
      item["deviation"] = round_sig12(e.value - *e.reference);
    }
    entries[e.name] = std::move(item);
  }
  return {{"config", {{"p", t.p}, {"N", t.truncation}}},
          {"h_mu", round_sig12(t.h_mu)},
          {"entries", std::move(entries)},
          {"matches_reference", t.matches_reference},
          {"consistent", t.consistent}};
}

std::string table1_to_text(const Table1Result& t) {
  std::ostringstream os;
  os << "SNS generators at p = " << t.p << " (truncation N = " << t.truncation
     << "), h_mu = " << sig3(t.h_mu) << "\n\n";
  os << "     classical              quantum\n";
  for (const char g : {'A', 'B', 'C'}) {
    const std::string s(1, g);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s    C=%-6s W=%-8s    C=%-6s W=%s\n",
                  s.c_str(), sig3(t.value("C_c" + s)).c_str(),
                  sig3(t.value("W_c" + s)).c_str(),
                  sig3(t.value("C_q" + s)).c_str(),
                  sig3(t.value("W_q" + s)).c_str());
    os << buf;
  }
  if (t.p == 0.5) {
    os << "\nreference comparison (tolerance " << kTable1Tol << "): "
       << (t.matches_reference ? "all entries match" : "MISMATCH") << "\n";
  }
  os << "internal consistency: " << (t.consistent ? "ok" : "FAILED") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<double> sweep_grid(double p_min, double p_max, double step) {
  if (!(step > 0.0)) throw DomainError("sweep step must be positive");
  if (!(p_min > 0.0 && p_max < 1.0 && p_min <= p_max)) {
    throw DomainError("sweep range must satisfy 0 < p_min <= p_max < 1");
  }
  const auto count =
      static_cast<std::size_t>(std::floor((p_max - p_min) / step + 0.5)) + 1;
  std::vector<double> ps;
  for (std::size_t i = 0; i < count; ++i) {
    ps.push_back(std::min(p_min + static_cast<double>(i) * step, p_max));
  }
  return ps;
}

namespace {

SweepRow sweep_point(double p, const std::string& generators) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SweepRow row;
  row.p = p;
  row.C_cA = row.C_qA = row.C_cB = row.C_qB = row.C_cC = row.C_qC = nan;
  row.W_cA = row.W_qA = row.W_cB = row.W_qB = row.W_cC = row.W_qC = nan;
  const auto fam = sns_family(p);
  const Generator b = validate_spec(renewal_B_spec(fam));
  row.h_mu = entropy_rate_unifilar(b);

  if (generators.find('A') != std::string::npos) {
    const Generator a = build_sns_A(p);
    const auto c = classical_report(a);
    const auto q = quantum_report(a, EncodingScheme::end_state_label());
    row.C_cA = c.C, row.W_cA = c.W, row.C_qA = q.C, row.W_qA = q.W;
  }
  if (generators.find('B') != std::string::npos) {
    const auto c = classical_report(b);
    const auto q = quantum_report(b, renewal_gram(fam));
    row.C_cB = c.C, row.W_cB = c.W, row.C_qB = q.C, row.W_qB = q.W;
  }
  if (generators.find('C') != std::string::npos) {
    const Generator cg = validate_spec(renewal_C_spec(fam));
    const auto c = classical_report(cg);
    const auto q = quantum_report(cg, EncodingScheme::end_state_label());
    row.C_cC = c.C, row.W_cC = c.W, row.C_qC = q.C, row.W_qC = q.W;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<double>& ps,
                            const std::string& generators, unsigned jobs) {
  for (char g : generators) {
    if (g != 'A' && g != 'B' && g != 'C') {
      throw SpecFormatError(std::string("unknown generator '") + g + "'");
    }
  }
  for (double p : ps) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  }
  std::vector<SweepRow> rows(ps.size());
  const std::size_t width = std::max(1u, jobs);
  for (std::size_t start = 0; start < ps.size(); start += width) {
    std::vector<std::future<SweepRow>> batch;
    for (std::size_t i = start; i < std::min(ps.size(), start + width); ++i) {
      batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async,
                                 sweep_point, ps[i], generators));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows,
                         const std::string& generators) {
  struct Column {
    const char* name;
    char gen;
    double SweepRow::*field;
  };
  static const Column columns[] = {
      {"C_cA", 'A', &SweepRow::C_cA}, {"C_qA", 'A', &SweepRow::C_qA},
      {"C_cB", 'B', &SweepRow::C_cB}, {"C_qB", 'B', &SweepRow::C_qB},
      {"C_cC", 'C', &SweepRow::C_cC}, {"C_qC", 'C', &SweepRow::C_qC},
      {"W_cA", 'A', &SweepRow::W_cA}, {"W_qA", 'A', &SweepRow::W_qA},
      {"W_cB", 'B', &SweepRow::W_cB}, {"W_qB", 'B', &SweepRow::W_qB},
      {"W_cC", 'C', &SweepRow::W_cC}, {"W_qC", 'C', &SweepRow::W_qC}};
  std::ostringstream os;
  os << "p";
  for (const auto& c : columns)
    if (generators.find(c.gen) != std::string::npos) os << ',' << c.name;
  os << ",h_mu\n";
  for (const auto& r : rows) {
    os << sig12(r.p);
    for (const auto& c : columns)
      if (generators.find(c.gen) != std::string::npos) os << ',' << sig12(r.*c.field);
    os << ',' << sig12(r.h_mu) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

void deviation_dfs(const Generator& gen, const Isometry& iso,
                   const Eigen::VectorXd& mass, const Eigen::MatrixXcd& rho,
                   int depth, int max_length, double& worst) {
  const double trace = rho.trace().real();
  const double classical = mass.sum();
  if (depth == max_length || (trace < 1e-12 && classical < 1e-12)) return;
  Eigen::MatrixXcd joint;
  if (trace > 0.0) joint = apply_channel(iso, rho / trace);
  for (int x = 0; x < gen.num_symbols(); ++x) {
    const Eigen::VectorXd next_mass = gen.transition(x) * mass;
    Eigen::MatrixXcd next_rho =
        trace > 0.0 ? Eigen::MatrixXcd(symbol_block(joint, x, iso.num_symbols) * trace)
                    : Eigen::MatrixXcd::Zero(rho.rows(), rho.cols());
    worst = std::max(worst, std::abs(next_rho.trace().real() - next_mass.sum()));
    deviation_dfs(gen, iso, next_mass, next_rho, depth + 1, max_length, worst);
  }
}

int word_index(const Word& w, int num_symbols) {
  int idx = 0;
  for (int x : w.symbols) idx = idx * num_symbols + x;
  return idx;
}

double z_score(double frequency, double exact, double se) {
  if (se > 0.0) return std::abs(frequency - exact) / se;
  return frequency == exact ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

double channel_word_deviation(const Generator& gen, const Embedding& emb,
                              const Isometry& iso, int max_length) {
  double worst = 0.0;
  deviation_dfs(gen, iso, gen.stationary(),
                stationary_memory_state(emb, gen.stationary()), 0, max_length,
                worst);
  return worst;
}

VerifyReport verify(const Generator& gen, const VerifyOptions& options) {
  if (options.max_length < 1) throw DomainError("L_max must be at least 1");
  if (std::pow(static_cast<double>(gen.num_symbols()), options.max_length) >
      kDefaultWordBudget) {
    throw ResourceError("|X|^L_max exceeds the word budget");
  }
  if (options.samples == 0) throw DomainError("samples must be positive");

  const EncodingScheme enc = make_encoding(options.encoding);
  const GramMatrix gram = solve_overlaps(gen, enc);
  const Embedding emb = embed_states(gram);
  const Isometry iso = build_isometry(gen, emb, enc);
  const Eigen::MatrixXcd rho0 = stationary_memory_state(emb, gen.stationary());

  VerifyReport r;
  r.num_states = gen.num_states();
  r.memory_dimension = emb.dimension();
  r.max_exact_deviation = channel_word_deviation(gen, emb, iso, options.max_length);
  r.channel_definition_error = channel_definition_error(gen, emb, iso);

  r.sampled_length = std::min(options.max_length, 3);
  const int m = gen.num_symbols();
  const int words = static_cast<int>(std::pow(m, r.sampled_length));
  std::vector<std::size_t> quantum_counts(static_cast<std::size_t>(words), 0),
      classical_counts(static_cast<std::size_t>(words), 0);
  std::mt19937_64 rng(options.seed);
  const auto len = static_cast<std::size_t>(r.sampled_length);
  for (std::size_t i = 0; i < options.samples; ++i) {
    ++quantum_counts[static_cast<std::size_t>(
        word_index(sample_channel_word(iso, rho0, len, rng), m))];
    ++classical_counts[static_cast<std::size_t>(
        word_index(sample_trajectory(gen, len, rng), m))];
  }
  const double n = static_cast<double>(options.samples);
  for_each_word(gen, r.sampled_length, [&](const Word& w, double p) {
    SampledWord s;
    s.word = w;
    s.exact = p;
    const auto idx = static_cast<std::size_t>(word_index(w, m));
    s.quantum_frequency = static_cast<double>(quantum_counts[idx]) / n;
    s.classical_frequency = static_cast<double>(classical_counts[idx]) / n;
    s.standard_error = std::sqrt(std::max(p * (1.0 - p), 0.0) / n);
    r.max_quantum_z = std::max(r.max_quantum_z,
                               z_score(s.quantum_frequency, p, s.standard_error));
    r.max_classical_z = std::max(
        r.max_classical_z, z_score(s.classical_frequency, p, s.standard_error));
    r.sampled.push_back(std::move(s));
  });
  return r;
}

namespace {

std::string word_text(const Generator& gen, const Word& w) {
  std::string out;
  for (int x : w.symbols) out += gen.spec().alphabet[static_cast<std::size_t>(x)];
  return out;
}

}  // namespace

json verify_to_json(const Generator& gen, const VerifyReport& r) {
  json sampled = json::array();
  for (const auto& s : r.sampled) {
    sampled.push_back({{"word", word_text(gen, s.word)},
                       {"exact", round_sig12(s.exact)},
                       {"quantum_frequency", round_sig12(s.quantum_frequency)},
                       {"classical_frequency", round_sig12(s.classical_frequency)},
                       {"ci95_halfwidth", round_sig12(1.96 * s.standard_error)}});
  }
  return {{"states", r.num_states},
          {"memory_dimension", r.memory_dimension},
          {"max_exact_deviation", round_sig12(r.max_exact_deviation)},
          {"channel_definition_error", round_sig12(r.channel_definition_error)},
          {"sampled_length", r.sampled_length},
          {"sampled", std::move(sampled)},
          {"max_quantum_z", round_sig12(r.max_quantum_z)},
          {"max_classical_z", round_sig12(r.max_classical_z)},
          {"ok", r.ok()}};
}

std::string verify_to_text(const Generator& gen, const VerifyReport& r) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "memory dimension %d for %d states\n"
                "max |P_channel(w) - P(w)| over exact words: %.3e\n"
                "channel definition error: %.3e\n",
                r.memory_dimension, r.num_states, r.max_exact_deviation,
                r.channel_definition_error);
  os << buf;
  os << "\nsampled words of length " << r.sampled_length
     << " (95% interval half-width in brackets):\n";
  for (const auto& s : r.sampled) {
    std::snprintf(buf, sizeof buf, "  %-6s exact %-9.4g quantum %-9.4g classical %-9.4g [%.2g]\n",
                  word_text(gen, s.word).c_str(), s.exact, s.quantum_frequency,
                  s.classical_frequency, 1.96 * s.standard_error);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "max z-score: quantum %.3g, classical %.3g\n%s\n",
                r.max_quantum_z, r.max_classical_z, r.ok() ? "verified" : "VERIFICATION FAILED");
  os << buf;
  return os.str();
}

}  // namespace hmmq
