#include "causalkit/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "causalkit/error.hpp"
#include "causalkit/format.hpp"

namespace causalkit {
namespace {

std::string ticked(std::string_view s) { return "'" + std::string(s) + "'"; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// RFC 4180 record splitter. Quoted fields may contain separators, doubled
// quotes and line breaks; CR before LF is discarded.
std::vector<std::vector<std::string>> split_records(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool any = false;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    any = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"': in_quotes = true; any = true; break;
      case ',': end_field(); any = true; break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field.push_back(c);
        any = true;
        break;
      case '\n': end_record(); break;
      default: field.push_back(c); any = true; break;
    }
  }
  if (any || !field.empty() || !record.empty()) end_record();
  return records;
}

bool is_blank(const std::vector<std::string>& record) {
  return record.size() == 1 && trim(record.front()).empty();
}

bool parse_number(std::string_view cell, double& out) {
  cell = trim(cell);
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && std::isfinite(out);
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

Table Table::from_columns(std::vector<Column> columns) {
  Table t;
  std::set<std::string, std::less<>> seen;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    auto& col = columns[c];
    if (col.name.empty()) fail(ErrorCode::InvalidHeader, "column " + std::to_string(c) + " has an empty name");
    if (!seen.insert(col.name).second) fail(ErrorCode::DuplicateHeader, "duplicate column " + ticked(col.name));
    if (c == 0) {
      t.n_rows_ = col.values.size();
    } else if (col.values.size() != t.n_rows_) {
      fail(ErrorCode::InvalidArgument, "column " + ticked(col.name) + " has " +
                                           std::to_string(col.values.size()) + " values, expected " +
                                           std::to_string(t.n_rows_));
    }
    if (!std::all_of(col.values.begin(), col.values.end(), [](double v) { return std::isfinite(v); })) {
      fail(ErrorCode::InvalidArgument, "column " + ticked(col.name) + " contains non-finite values");
    }
    t.names_.push_back(col.name);
    t.columns_.push_back(std::make_shared<const std::vector<double>>(std::move(col.values)));
  }
  return t;
}

std::size_t Table::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) fail(ErrorCode::UnknownColumn, "unknown column " + ticked(name));
  return static_cast<std::size_t>(it - names_.begin());
}

bool Table::has_column(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> Table::column(std::string_view name) const {
  return *columns_[index_of(name)];
}

Table Table::with_column(std::string name, std::vector<double> values) const {
  if (has_column(name)) fail(ErrorCode::NameCollision, "column " + ticked(name) + " already exists");
  if (name.empty()) fail(ErrorCode::InvalidHeader, "column name must not be empty");
  if (!names_.empty() && values.size() != n_rows_) {
    fail(ErrorCode::DimensionMismatch, "new column " + ticked(name) + " has " +
                                           std::to_string(values.size()) + " values, table has " +
                                           std::to_string(n_rows_) + " rows");
  }
  if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
    fail(ErrorCode::InvalidArgument, "column " + ticked(name) + " contains non-finite values");
  }
  Table t = *this;
  t.n_rows_ = values.size();
  t.names_.push_back(std::move(name));
  t.columns_.push_back(std::make_shared<const std::vector<double>>(std::move(values)));
  return t;
}

Table Table::with_replaced_column(std::string_view name, std::vector<double> values) const {
  const auto idx = index_of(name);
  if (values.size() != n_rows_) {
    fail(ErrorCode::DimensionMismatch, "replacement for " + ticked(name) + " has wrong length");
  }
  Table t = *this;
  t.columns_[idx] = std::make_shared<const std::vector<double>>(std::move(values));
  return t;
}

Table Table::take_rows(std::span<const std::size_t> rows) const {
  Table t;
  t.n_rows_ = rows.size();
  t.names_ = names_;
  t.columns_.reserve(columns_.size());
  for (const auto& col : columns_) {
    std::vector<double> picked;
    picked.reserve(rows.size());
    for (auto r : rows) picked.push_back(col->at(r));
    t.columns_.push_back(std::make_shared<const std::vector<double>>(std::move(picked)));
  }
  return t;
}

LoadResult parse_csv(std::string_view text) {
  auto records = split_records(text);
  records.erase(std::remove_if(records.begin(), records.end(), is_blank), records.end());
  if (records.empty()) fail(ErrorCode::EmptyFile, "CSV input has no header line");

  const auto& header = records.front();
  std::vector<Table::Column> columns;
  std::set<std::string, std::less<>> seen;
  for (const auto& raw : header) {
    std::string name(trim(raw));
    if (name.empty()) fail(ErrorCode::InvalidHeader, "CSV header contains an empty column name");
    if (!seen.insert(name).second) fail(ErrorCode::DuplicateHeader, "duplicate CSV column " + ticked(name));
    columns.push_back({std::move(name), {}});
  }

  LoadResult result;
  std::vector<double> row(columns.size());
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    bool ok = rec.size() == columns.size();
    for (std::size_t c = 0; ok && c < rec.size(); ++c) ok = parse_number(rec[c], row[c]);
    if (!ok) {
      ++result.dropped_rows;
      continue;
    }
    for (std::size_t c = 0; c < columns.size(); ++c) columns[c].values.push_back(row[c]);
  }
  if (columns.front().values.empty()) {
    fail(ErrorCode::AllRowsDropped, "no usable data rows (" + std::to_string(result.dropped_rows) + " dropped)");
  }
  result.table = Table::from_columns(std::move(columns));
  return result;
}

LoadResult load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + ticked(path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) fail(ErrorCode::Io, "error reading " + ticked(path.string()));
  try {
    return parse_csv(buffer.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_csv(const Table& table, std::ostream& out) {
  const auto& names = table.names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';
  std::vector<std::span<const double>> cols;
  for (const auto& name : names) cols.push_back(table.column(name));
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << format_double(cols[c][r]);
    out << '\n';
  }
}

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + ticked(path.string()));
  write_csv(table, out);
  if (!out) fail(ErrorCode::Io, "error writing " + ticked(path.string()));
}

Table binarize_above(const Table& t, std::string_view column, double threshold, std::string new_name) {
  const auto values = t.column(column);
  if (t.has_column(new_name)) fail(ErrorCode::NameCollision, "column " + ticked(new_name) + " already exists");
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [threshold](double v) { return v > threshold ? 1.0 : 0.0; });
  return t.with_column(std::move(new_name), std::move(out));
}

Table binarize_by_mean(const Table& t, std::string_view column, std::string new_name) {
  const auto values = t.column(column);
  if (values.empty()) fail(ErrorCode::EmptyColumn, "column " + ticked(column) + " is empty");
  return binarize_above(t, column, mean_of(values), std::move(new_name));
}

Table standardize_columns(const Table& t, std::span<const std::string> columns) {
  Table out = t;
  for (const auto& name : columns) {
    const auto values = t.column(name);
    std::vector<double> z(values.size(), 0.0);
    if (!values.empty()) {
      const double m = mean_of(values);
      double ss = 0.0;
      for (double v : values) ss += (v - m) * (v - m);
      const double sd = std::sqrt(ss / static_cast<double>(values.size()));
      if (sd > 0.0) {
        for (std::size_t i = 0; i < values.size(); ++i) z[i] = (values[i] - m) / sd;
      }
    }
    out = out.with_replaced_column(name, std::move(z));
  }
  return out;
}

std::vector<std::size_t> histogram_counts(std::span<const double> values, std::size_t bins) {
  if (bins == 0) fail(ErrorCode::InvalidArgument, "histogram needs at least one bin");
  std::vector<std::size_t> counts(bins, 0);
  if (values.empty()) return counts;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / static_cast<double>(bins);
  for (double v : values) {
    std::size_t b = 0;
    if (width > 0.0) {
      b = static_cast<std::size_t>(std::floor((v - lo) / width));
      b = std::min(b, bins - 1);
    }
    ++counts[b];
  }
  return counts;
}

std::string text_histogram(const Table& t, std::string_view column, std::size_t bins) {
  const auto values = t.column(column);
  if (values.empty()) fail(ErrorCode::EmptyColumn, "column " + ticked(column) + " is empty");
  const auto counts = histogram_counts(values, bins);
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / static_cast<double>(bins);
  const std::size_t max_count = *std::max_element(counts.begin(), counts.end());

  std::string out;
  for (std::size_t b = 0; b < bins; ++b) {
    const double left = lo + width * static_cast<double>(b);
    const double right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    const std::size_t bar = (counts[b] * 50 + max_count / 2) / max_count;
    out += "[" + format_double(left) + ", " + format_double(right) + (b + 1 == bins ? "]" : ")") +
           " : " + std::to_string(counts[b]) + " : " + std::string(bar, '#') + "\n";
  }
  return out;
}

bool is_binary(std::span<const double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::PropensityScoreMatching: return "propensity_score_matching";
    case EstimatorKind::DistanceMatching: return "distance_matching";
    case EstimatorKind::Stratification: return "propensity_score_stratification";
    case EstimatorKind::LinearRegression: return "linear_regression";
  }
  return "unknown";
}

EstimatorKind parse_estimator(std::string_view name) {
  if (name.starts_with("backdoor.")) name.remove_prefix(9);
  if (name == "propensity_score_matching") return EstimatorKind::PropensityScoreMatching;
  if (name == "distance_matching") return EstimatorKind::DistanceMatching;
  if (name == "stratification" || name == "propensity_score_stratification") {
    return EstimatorKind::Stratification;
  }
  if (name == "linear_regression") return EstimatorKind::LinearRegression;
  fail(ErrorCode::InvalidArgument, "unknown estimator " + ticked(name));
}

void validate(const AnalysisSpec& spec, const Table& table) {
  std::set<std::string, std::less<>> names{spec.treatment, spec.outcome};
  if (names.size() != 2) fail(ErrorCode::InvalidArgument, "treatment and outcome must be different columns");
  for (const auto& z : spec.confounders) {
    if (!names.insert(z).second) fail(ErrorCode::InvalidArgument, "column " + ticked(z) + " used twice in analysis");
  }
  for (const auto& name : names) (void)table.column(name);
  if (!is_binary(table.column(spec.treatment))) {
    fail(ErrorCode::NonBinaryVariable, "treatment column " + ticked(spec.treatment) + " is not 0/1");
  }
}

}  // namespace causalkit
