#pragma once

// pcanml command-line front end. Kept as a header so tests can drive the
// exact same code in-process; tools/pcanml.cpp is a thin main().

#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcanml/pcanml.hpp"

namespace pcanml::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumerical = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::string input;
  std::string synthetic;
  bool no_header = false;
  std::string transform = "none";
  bool center = false;
  SyntheticSpec spec;
};

struct SelectOptions {
  std::string epsilon = "auto";
  std::string gram_mode = "full_gram";
  bool both_gram_modes = false;
  double sensitivity = kKneedleDefaultSensitivity;
  std::string out;
  std::string table;
  bool reproducible = false;
};

struct ResolvedInput {
  RealMatrix x;
  InputDescriptor descriptor;
  std::optional<GeneratorMetadata> generator;
  std::vector<std::string> notes;
};

inline void add_spec_flags(CLI::App& cmd, SyntheticSpec& spec) {
  cmd.add_option("--n", spec.n, "Rows of the synthetic matrix")->capture_default_str();
  cmd.add_option("--m", spec.m, "Columns of the synthetic matrix")->capture_default_str();
  cmd.add_option("--true-k", spec.true_k, "Independent source columns")->capture_default_str();
  cmd.add_option("--noise", spec.noise_sigma, "Noise standard deviation")->capture_default_str();
  cmd.add_option("--mix-low", spec.mix_low, "Lower end of the mixing-coefficient range")->capture_default_str();
  cmd.add_option("--mix-high", spec.mix_high, "Upper end of the mixing-coefficient range")->capture_default_str();
  cmd.add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
}

inline void add_input_flags(CLI::App& cmd, InputOptions& in) {
  cmd.add_option("--input", in.input, "CSV file with one column per variable");
  cmd.add_option("--synthetic", in.synthetic, "Synthetic dataset kind")->check(CLI::IsMember({"lin"}));
  cmd.add_flag("--no-header", in.no_header, "The CSV has no header row");
  cmd.add_option("--transform", in.transform, "Row transform applied to CSV input")
      ->check(CLI::IsMember({"none", "returns"}))
      ->capture_default_str();
  cmd.add_flag("--center", in.center, "Subtract column means before analysis");
  add_spec_flags(cmd, in.spec);
}

inline void add_select_flags(CLI::App& cmd, SelectOptions& s) {
  cmd.add_option("--epsilon", s.epsilon, "Quantization step: auto, 1/N, or a decimal with integer reciprocal")
      ->capture_default_str();
  cmd.add_option("--gram-mode", s.gram_mode, "full_gram or per_row_sum")
      ->check(CLI::IsMember({"full_gram", "per_row_sum"}))
      ->capture_default_str();
  cmd.add_flag("--both-gram-modes", s.both_gram_modes, "Report both gram modes");
  cmd.add_option("--sensitivity", s.sensitivity, "Kneedle sensitivity")->capture_default_str();
  cmd.add_option("--out", s.out, "Write the JSON report here instead of standard output");
  cmd.add_flag("--reproducible", s.reproducible, "Omit the timestamp so output is byte-stable");
}

inline ResolvedInput resolve_input(const InputOptions& in) {
  if (in.input.empty() == in.synthetic.empty()) throw UsageError("exactly one of --input or --synthetic is required");

  if (!in.synthetic.empty()) {
    if (in.transform != "none") throw UsageError("--transform applies to --input only");
    try {
      in.spec.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    RealMatrix x = generate_lin(in.spec);
    InputDescriptor d{"synthetic", "", "none", in.center, x.rows(), in.spec};
    GeneratorMetadata g;
    g.sources_note = "source columns are seeded standard-normal draws, not original market data";
    ResolvedInput r{in.center ? center_columns(x) : x, d, g, {}};
    r.notes.push_back("synthetic Lin construction with generated sources stands in for the market-data variant");
    return r;
  }

  RealMatrix x = in.transform == "returns" ? returns_transform(load_csv(in.input, !in.no_header))
                                           : load_matrix_csv(in.input, !in.no_header).values;
  if (in.center) x = center_columns(x);
  InputDescriptor d{"csv", in.input, in.transform, in.center, x.rows(), std::nullopt};
  return ResolvedInput{x, d, std::nullopt, {}};
}

inline GridStep resolve_epsilon(const std::string& text, std::size_t m) {
  if (text == "auto") return GridStep::auto_for(m);
  try {
    GridStep eps = GridStep::parse(text);
    eps.require_valid_for(m);
    return eps;
  } catch (const DomainError& e) {
    throw UsageError(std::string("--epsilon: ") + e.what());
  }
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Scores, selects and runs the baselines on `x`.
inline RunReport build_report(const RealMatrix& x, const InputDescriptor& descriptor,
                              const std::optional<GeneratorMetadata>& generator, std::vector<std::string> notes,
                              const SelectOptions& opt) {
  const std::size_t m = x.cols();
  if (x.rows() < 2 || m < 2) throw DataError("need at least 2 rows and 2 columns to rank, got " +
                                             std::to_string(x.rows()) + "x" + std::to_string(m));
  RunReport r;
  if (!opt.reproducible) r.timestamp = utc_timestamp();
  r.input = descriptor;
  r.input.rows_used = x.rows();
  r.n = x.rows();
  r.m = m;
  r.epsilon = resolve_epsilon(opt.epsilon, m);
  r.generator = generator;

  const GramMode primary = gram_mode_from_string(opt.gram_mode);
  r.selection = make_selection_table(select_rank(x, r.epsilon, primary));
  if (opt.both_gram_modes) {
    const GramMode other = primary == GramMode::full_gram ? GramMode::per_row_sum : GramMode::full_gram;
    r.secondary_selection = make_selection_table(select_rank(x, r.epsilon, other));
  }

  r.baselines.kneedle_sensitivity = opt.sensitivity;
  try {
    const auto eig = correlation_eigenvalues(x);
    r.baselines.kaiser = kaiser(eig);
  } catch (const DegenerateInputError& e) {
    notes.push_back(std::string("kaiser skipped: ") + e.what());
  }
  if (m >= 3) {
    r.baselines.kneedle = kneedle(scree(svd(x), false), opt.sensitivity);
  } else {
    notes.push_back("kneedle skipped: fewer than 3 components");
  }
  r.notes = std::move(notes);
  return r;
}

inline void write_table_csv(std::ostream& out, const RunReport& r) {
  out << "gram_mode,k,tail_energy,tail_term,gram_term,ratio_term,count_term,lower_total,upper_total,gap_ratio,floored\n";
  const auto emit = [&](const SelectionTable& t) {
    for (const auto& row : t.per_k) {
      out << to_string(t.gram_mode) << ',' << row.k << ',' << format_real(row.tail_energy) << ','
          << format_real(row.tail_term) << ',' << format_real(row.gram_term) << ',' << format_real(row.ratio_term)
          << ',' << format_real(row.count_term) << ',' << format_real(row.lower_total) << ','
          << format_real(row.upper_total) << ',' << (row.gap_ratio ? format_real(*row.gap_ratio) : "") << ','
          << (row.floored ? 1 : 0) << '\n';
    }
  };
  emit(r.selection);
  if (r.secondary_selection) emit(*r.secondary_selection);
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

inline void cmd_select(const InputOptions& in, const SelectOptions& opt, std::ostream& out) {
  ResolvedInput data = resolve_input(in);
  const RunReport r = build_report(data.x, data.descriptor, data.generator, data.notes, opt);
  write_text(opt.out, to_json(r).dump(2) + "\n", out);
  if (!opt.table.empty()) {
    std::ostringstream table;
    write_table_csv(table, r);
    write_text(opt.table, table.str(), out);
  }
}

inline void cmd_scree(const InputOptions& in, bool normalized, const std::string& out_path, std::ostream& out) {
  ResolvedInput data = resolve_input(in);
  const ScreeCurve c = scree(svd(data.x), normalized);
  std::ostringstream s;
  s << "component,explained_variance\n";
  for (std::size_t i = 0; i < c.variances.size(); ++i) s << (i + 1) << ',' << format_real(c.variances[i]) << '\n';
  write_text(out_path, s.str(), out);
}

inline void cmd_compare(const InputOptions& in, const SelectOptions& opt, const std::vector<std::size_t>& lengths,
                        std::ostream& out) {
  ResolvedInput data = resolve_input(in);
  Json all = Json::array();
  for (std::size_t len : lengths) {
    if (len > data.x.rows()) {
      throw UsageError("--lengths: prefix " + std::to_string(len) + " exceeds the " + std::to_string(data.x.rows()) +
                       " available rows");
    }
    if (len < 2) throw UsageError("--lengths: prefixes need at least 2 rows");
  }
  for (std::size_t len : lengths) {
    all.push_back(to_json(build_report(data.x.top_rows(len), data.descriptor, data.generator, data.notes, opt)));
  }
  write_text(opt.out, all.dump(2) + "\n", out);
}

inline void cmd_generate(const SyntheticSpec& spec, const std::string& out_path, std::string meta_path) {
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const RealMatrix x = generate_lin(spec);
  std::vector<std::string> names;
  for (std::size_t j = 0; j < spec.m; ++j) names.push_back("col_" + std::to_string(j + 1));
  std::ostringstream csv;
  write_csv(csv, x, names);
  write_text(out_path, csv.str(), std::cout);

  GeneratorMetadata g;
  g.sources_note = "source columns are seeded standard-normal draws, not original market data";
  const Json meta{{"tool_version", kToolVersion}, {"kind", "lin"}, {"spec", to_json(spec)}, {"generator", to_json(g)}};
  if (meta_path.empty()) meta_path = out_path + ".meta.json";
  write_text(meta_path, meta.dump(2) + "\n", std::cout);
}

/// Runs one command line. Returns the process exit status; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"PCA rank selection by NML stochastic-complexity bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  InputOptions in;
  SelectOptions sel;
  bool normalized = false;
  std::string scree_out;
  std::vector<std::size_t> lengths;
  SyntheticSpec gen_spec;
  std::string gen_kind = "lin";
  std::string gen_out;
  std::string gen_meta;

  auto* select = app.add_subcommand("select", "Score every k and select the rank");
  add_input_flags(*select, in);
  add_select_flags(*select, sel);
  select->add_option("--table", sel.table, "Also write the per-k table as CSV");

  auto* scree_cmd = app.add_subcommand("scree", "Emit the scree curve as CSV");
  add_input_flags(*scree_cmd, in);
  scree_cmd->add_flag("--normalized", normalized, "Divide by total variance");
  scree_cmd->add_option("--out", scree_out, "Output CSV path");

  auto* compare = app.add_subcommand("compare", "NML bounds, Kaiser and Kneedle over row prefixes");
  add_input_flags(*compare, in);
  add_select_flags(*compare, sel);
  compare->add_option("--lengths", lengths, "Row-prefix lengths")->delimiter(',')->required();

  auto* generate = app.add_subcommand("generate", "Write a synthetic Lin matrix and its metadata sidecar");
  generate->add_option("--kind", gen_kind, "Dataset kind")->check(CLI::IsMember({"lin"}))->capture_default_str();
  add_spec_flags(*generate, gen_spec);
  generate->add_option("--out", gen_out, "Output CSV path")->required();
  generate->add_option("--meta", gen_meta, "Sidecar JSON path (default: <out>.meta.json)");

  std::vector<const char*> argv{"pcanml"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*select) cmd_select(in, sel, out);
    if (*scree_cmd) cmd_scree(in, normalized, scree_out, out);
    if (*compare) cmd_compare(in, sel, lengths, out);
    if (*generate) cmd_generate(gen_spec, gen_out, gen_meta);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}

}  // namespace pcanml::cli
