#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "pcanml/errors.hpp"
#include "pcanml/matrix.hpp"
#include "pcanml/random.hpp"

namespace pcanml {

/// A matrix with one name per column.
struct LabeledMatrix {
  std::vector<std::string> column_names;
  RealMatrix values;
};

/// Closing prices, one row per trading period in chronological order.
class PriceTable {
 public:
  PriceTable(std::vector<std::string> column_names, RealMatrix prices)
      : column_names_(std::move(column_names)), prices_(std::move(prices)) {
    if (column_names_.size() != prices_.cols()) throw DataError("PriceTable: one name per column required");
    if (prices_.rows() < 2) throw DataError("PriceTable: fewer than 2 data rows");
    for (std::size_t i = 0; i < prices_.rows(); ++i)
      for (std::size_t j = 0; j < prices_.cols(); ++j)
        if (!(prices_(i, j) > 0.0)) {
          throw DataError("PriceTable: nonpositive price at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
  }

  const std::vector<std::string>& column_names() const noexcept { return column_names_; }
  const RealMatrix& prices() const noexcept { return prices_; }

 private:
  std::vector<std::string> column_names_;
  RealMatrix prices_;
};

/// 100·(c_{i+1,j} − c_{i,j})/c_{i,j}: percentage change between consecutive rows.
inline RealMatrix returns_transform(const PriceTable& p) {
  const RealMatrix& c = p.prices();
  RealMatrix out(c.rows() - 1, c.cols());
  for (std::size_t i = 0; i + 1 < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) out.set(i, j, 100.0 * (c(i + 1, j) - c(i, j)) / c(i, j));
  return out;
}

/// Subtracts each column's mean. Not applied anywhere by default.
inline RealMatrix center_columns(const RealMatrix& x) {
  RealMatrix out = x;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
    mean /= static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out.set(i, j, x(i, j) - mean);
  }
  return out;
}

/// Zero mean and unit sample (n − 1) standard deviation per column.
inline RealMatrix standardize_columns(const RealMatrix& x) {
  if (x.rows() < 2) throw DegenerateInputError("standardize_columns: need at least 2 rows");
  RealMatrix out = x;
  const double n = static_cast<double>(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) mean += x(i, j);
    mean /= n;
    double ss = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double d = x(i, j) - mean;
      ss += d * d;
      scale = std::max(scale, std::abs(x(i, j)));
    }
    const double sd = std::sqrt(ss / (n - 1.0));
    if (sd == 0.0 || sd <= 1e-14 * scale) {
      throw DegenerateInputError("standardize_columns: column " + std::to_string(j + 1) + " is constant");
    }
    for (std::size_t i = 0; i < x.rows(); ++i) out.set(i, j, (x(i, j) - mean) / sd);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

// Splits one CSV record; double quotes delimit fields that may contain commas.
inline std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace detail

/// Comma-separated numeric table. Row and column numbers in errors are
/// 1-based and count data rows only.
inline LabeledMatrix parse_matrix_csv(std::istream& in, bool has_header) {
  std::vector<std::string> names;
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  bool header_pending = has_header;

  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    auto fields = detail::split_csv_record(line);
    if (header_pending) {
      header_pending = false;
      for (auto& f : fields) names.emplace_back(detail::trim(f));
      cols = names.size();
      continue;
    }
    ++rows;
    if (cols == 0) cols = fields.size();
    if (fields.size() != cols) {
      throw ParseError("ragged row: expected " + std::to_string(cols) + " fields, found " + std::to_string(fields.size()),
                       rows, std::min(fields.size(), cols) + 1);
    }
    for (std::size_t j = 0; j < cols; ++j) {
      const auto v = detail::parse_real(fields[j]);
      if (!v) throw ParseError("non-numeric cell '" + std::string(detail::trim(fields[j])) + "'", rows, j + 1);
      values.push_back(*v);
    }
  }
  if (rows == 0) throw DataError("csv: no data rows");
  if (names.empty())
    for (std::size_t j = 0; j < cols; ++j) names.push_back("col_" + std::to_string(j + 1));
  return LabeledMatrix{std::move(names), RealMatrix(rows, cols, std::move(values))};
}

inline LabeledMatrix load_matrix_csv(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_matrix_csv(in, has_header);
}

/// Loads closing prices; every value must be strictly positive.
inline PriceTable load_csv(const std::string& path, bool has_header) {
  LabeledMatrix t = load_matrix_csv(path, has_header);
  for (std::size_t i = 0; i < t.values.rows(); ++i)
    for (std::size_t j = 0; j < t.values.cols(); ++j)
      if (!(t.values(i, j) > 0.0)) throw ParseError("nonpositive price", i + 1, j + 1);
  if (t.values.rows() < 2) throw DataError("csv: fewer than 2 data rows");
  return PriceTable(std::move(t.column_names), std::move(t.values));
}

/// Shortest decimal text that reads back to the same double.
inline std::string format_real(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void write_csv(std::ostream& out, const RealMatrix& x, const std::vector<std::string>& names) {
  for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
  if (!names.empty()) out << '\n';
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out << (j ? "," : "") << format_real(x(i, j));
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Synthetic data
// ---------------------------------------------------------------------------

/// Lin-style construction: `true_k` source columns, the remaining m − true_k
/// columns random linear combinations of them plus Gaussian noise.
struct SyntheticSpec {
  std::size_t n = 500;
  std::size_t m = 30;
  std::size_t true_k = 10;
  double noise_sigma = 0.1;  // standard deviation, not variance
  double mix_low = -1.0;
  double mix_high = 1.0;
  std::uint64_t seed = 7;

  void validate() const {
    if (n < 1 || m < 1) throw DomainError("SyntheticSpec: n and m must be positive");
    if (true_k < 1 || true_k > m) throw DomainError("SyntheticSpec: need 1 <= true_k <= m");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw DomainError("SyntheticSpec: noise_sigma must be >= 0");
    if (!std::isfinite(mix_low) || !std::isfinite(mix_high) || mix_low > mix_high) {
      throw DomainError("SyntheticSpec: need finite mix_low <= mix_high");
    }
  }

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

inline constexpr std::string_view kNoiseSigmaNote =
    "noise_sigma is the standard deviation of the added Gaussian noise; the source construction's "
    "N(0, 0.1) is ambiguous between variance and standard deviation";

/// Draw order from one SeededGenerator(seed): sources (n×true_k, row-major,
/// only when `base` is absent), then mixing coefficients (true_k×(m−true_k),
/// row-major), then noise (n×(m−true_k), row-major).
inline RealMatrix generate_lin(const SyntheticSpec& spec, const std::optional<RealMatrix>& base = std::nullopt) {
  spec.validate();
  if (base && (base->rows() != spec.n || base->cols() != spec.true_k)) {
    throw DomainError("generate_lin: base must be n x true_k");
  }
  const std::size_t n = spec.n;
  const std::size_t k = spec.true_k;
  const std::size_t mixed = spec.m - k;
  SeededGenerator gen(spec.seed);

  std::vector<double> sources(n * k);
  if (base) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) sources[i * k + j] = (*base)(i, j);
  } else {
    for (double& s : sources) s = gen.standard_normal();
  }
  std::vector<double> coef(k * mixed);
  for (double& c : coef) c = gen.uniform(spec.mix_low, spec.mix_high);

  std::vector<double> out(n * spec.m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) out[i * spec.m + j] = sources[i * k + j];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < mixed; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) acc += coef[j * mixed + c] * sources[i * k + j];
      out[i * spec.m + k + c] = acc;
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < mixed; ++c) out[i * spec.m + k + c] += spec.noise_sigma * gen.standard_normal();
  return RealMatrix(n, spec.m, std::move(out));
}

}  // namespace pcanml
