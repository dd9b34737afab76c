#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcanml/complexity.hpp"
#include "pcanml/datasets.hpp"
#include "pcanml/grid_step.hpp"
#include "pcanml/random.hpp"

namespace pcanml {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct InputDescriptor {
  std::string kind;       // "csv" or "synthetic"
  std::string path;       // csv only
  std::string transform;  // "none" or "returns"
  bool centered = false;
  std::size_t rows_used = 0;
  std::optional<SyntheticSpec> synthetic;

  friend bool operator==(const InputDescriptor&, const InputDescriptor&) = default;
};

struct PerKRow {
  std::size_t k = 0;
  double tail_energy = 0.0;
  double tail_term = 0.0;
  double gram_term = 0.0;
  double ratio_term = 0.0;
  double count_term = 0.0;
  double lower_total = 0.0;
  double upper_total = 0.0;
  std::optional<double> gap_ratio;
  bool floored = false;

  friend bool operator==(const PerKRow&, const PerKRow&) = default;
};

struct SelectionTable {
  GramMode gram_mode = GramMode::full_gram;
  std::vector<PerKRow> per_k;
  std::size_t k_lower_opt = 0;
  std::size_t k_upper_opt = 0;
  KBracket k_bracket;

  friend bool operator==(const SelectionTable&, const SelectionTable&) = default;
};

struct BaselineResults {
  std::optional<std::size_t> kaiser;
  std::optional<std::size_t> kneedle;
  double kneedle_sensitivity = 1.0;

  friend bool operator==(const BaselineResults&, const BaselineResults&) = default;
};

struct GeneratorMetadata {
  std::string name{SeededGenerator::kName};
  int version = SeededGenerator::kVersion;
  std::string noise_sigma_note{kNoiseSigmaNote};
  std::string sources_note;

  friend bool operator==(const GeneratorMetadata&, const GeneratorMetadata&) = default;
};

/// Everything one rank-selection run produces.
struct RunReport {
  int schema_version = kReportSchemaVersion;
  std::string tool_version = kToolVersion;
  std::optional<std::string> timestamp;
  InputDescriptor input;
  std::size_t n = 0;
  std::size_t m = 0;
  GridStep epsilon{1};
  SelectionTable selection;
  std::optional<SelectionTable> secondary_selection;
  BaselineResults baselines;
  std::optional<GeneratorMetadata> generator;
  std::vector<std::string> notes;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

inline SelectionTable make_selection_table(const ComplexityReport& r) {
  SelectionTable t;
  t.gram_mode = r.gram_mode;
  t.k_lower_opt = r.k_lower_opt;
  t.k_upper_opt = r.k_upper_opt;
  t.k_bracket = r.k_bracket;
  const auto gaps = bound_gap_ratio(r);
  for (std::size_t i = 0; i < r.per_k.size(); ++i) {
    const auto& c = r.per_k[i];
    t.per_k.push_back(PerKRow{c.k, c.tail_energy, c.tail_term, c.gram_term, c.ratio_term, c.count_term, c.lower_total(),
                              c.upper_total(), gaps[i].ratio, c.floored});
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
Json optional_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

}  // namespace detail

inline Json to_json(const SyntheticSpec& s) {
  return Json{{"n", s.n},           {"m", s.m},           {"true_k", s.true_k}, {"noise_sigma", s.noise_sigma},
              {"mix_low", s.mix_low}, {"mix_high", s.mix_high}, {"seed", s.seed}};
}

inline SyntheticSpec synthetic_spec_from_json(const Json& j) {
  SyntheticSpec s;
  s.n = j.at("n").get<std::size_t>();
  s.m = j.at("m").get<std::size_t>();
  s.true_k = j.at("true_k").get<std::size_t>();
  s.noise_sigma = j.at("noise_sigma").get<double>();
  s.mix_low = j.at("mix_low").get<double>();
  s.mix_high = j.at("mix_high").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  return s;
}

inline Json to_json(const GeneratorMetadata& g) {
  return Json{{"name", g.name}, {"version", g.version}, {"noise_sigma_note", g.noise_sigma_note},
              {"sources_note", g.sources_note}};
}

inline GeneratorMetadata generator_metadata_from_json(const Json& j) {
  GeneratorMetadata g;
  g.name = j.at("name").get<std::string>();
  g.version = j.at("version").get<int>();
  g.noise_sigma_note = j.at("noise_sigma_note").get<std::string>();
  g.sources_note = j.at("sources_note").get<std::string>();
  return g;
}

inline Json to_json(const SelectionTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.per_k) {
    rows.push_back(Json{{"k", r.k},
                        {"tail_energy", r.tail_energy},
                        {"tail_term", r.tail_term},
                        {"gram_term", r.gram_term},
                        {"ratio_term", r.ratio_term},
                        {"count_term", r.count_term},
                        {"lower_total", r.lower_total},
                        {"upper_total", r.upper_total},
                        {"gap_ratio", detail::optional_to_json(r.gap_ratio)},
                        {"floored", r.floored}});
  }
  return Json{{"gram_mode", std::string(to_string(t.gram_mode))},
              {"per_k", std::move(rows)},
              {"k_lower_opt", t.k_lower_opt},
              {"k_upper_opt", t.k_upper_opt},
              {"k_bracket", Json::array({t.k_bracket.lo, t.k_bracket.hi})}};
}

inline SelectionTable selection_table_from_json(const Json& j) {
  SelectionTable t;
  t.gram_mode = gram_mode_from_string(j.at("gram_mode").get<std::string>());
  for (const auto& r : j.at("per_k")) {
    t.per_k.push_back(PerKRow{r.at("k").get<std::size_t>(), r.at("tail_energy").get<double>(),
                              r.at("tail_term").get<double>(), r.at("gram_term").get<double>(),
                              r.at("ratio_term").get<double>(), r.at("count_term").get<double>(),
                              r.at("lower_total").get<double>(), r.at("upper_total").get<double>(),
                              detail::optional_from_json<double>(r.at("gap_ratio")), r.at("floored").get<bool>()});
  }
  t.k_lower_opt = j.at("k_lower_opt").get<std::size_t>();
  t.k_upper_opt = j.at("k_upper_opt").get<std::size_t>();
  t.k_bracket = {j.at("k_bracket").at(0).get<std::size_t>(), j.at("k_bracket").at(1).get<std::size_t>()};
  return t;
}

/// Serializes to the versioned schema in schema/run_report.schema.json.
/// `timestamp` is omitted when unset.
inline Json to_json(const RunReport& r) {
  Json input{{"kind", r.input.kind},
             {"path", r.input.path},
             {"transform", r.input.transform},
             {"centered", r.input.centered},
             {"rows_used", r.input.rows_used},
             {"synthetic", r.input.synthetic ? to_json(*r.input.synthetic) : Json(nullptr)}};

  Json j{{"schema_version", r.schema_version}, {"tool_version", r.tool_version}};
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  j["input"] = std::move(input);
  j["n"] = r.n;
  j["m"] = r.m;
  j["epsilon"] = r.epsilon.value();
  j["epsilon_inverse"] = r.epsilon.inverse();
  j["selection"] = to_json(r.selection);
  j["secondary_selection"] = r.secondary_selection ? to_json(*r.secondary_selection) : Json(nullptr);
  j["baselines"] = Json{{"kaiser", detail::optional_to_json(r.baselines.kaiser)},
                        {"kneedle", detail::optional_to_json(r.baselines.kneedle)},
                        {"kneedle_sensitivity", r.baselines.kneedle_sensitivity}};
  j["generator"] = r.generator ? to_json(*r.generator) : Json(nullptr);
  j["notes"] = r.notes;
  return j;
}

inline RunReport run_report_from_json(const Json& j) {
  RunReport r;
  r.schema_version = j.at("schema_version").get<int>();
  r.tool_version = j.at("tool_version").get<std::string>();
  if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
  const Json& in = j.at("input");
  r.input.kind = in.at("kind").get<std::string>();
  r.input.path = in.at("path").get<std::string>();
  r.input.transform = in.at("transform").get<std::string>();
  r.input.centered = in.at("centered").get<bool>();
  r.input.rows_used = in.at("rows_used").get<std::size_t>();
  if (!in.at("synthetic").is_null()) r.input.synthetic = synthetic_spec_from_json(in.at("synthetic"));
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.epsilon = GridStep(j.at("epsilon_inverse").get<std::int64_t>());
  r.selection = selection_table_from_json(j.at("selection"));
  if (!j.at("secondary_selection").is_null()) r.secondary_selection = selection_table_from_json(j.at("secondary_selection"));
  const Json& b = j.at("baselines");
  r.baselines.kaiser = detail::optional_from_json<std::size_t>(b.at("kaiser"));
  r.baselines.kneedle = detail::optional_from_json<std::size_t>(b.at("kneedle"));
  r.baselines.kneedle_sensitivity = b.at("kneedle_sensitivity").get<double>();
  if (!j.at("generator").is_null()) r.generator = generator_metadata_from_json(j.at("generator"));
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

}  // namespace pcanml
