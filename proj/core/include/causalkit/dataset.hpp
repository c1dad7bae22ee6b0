#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace causalkit {

/// Immutable columnar table of finite doubles. Column storage is shared
/// between tables derived from one another, so adding a column or renaming is
/// cheap; every transform returns a new Table.
class Table {
 public:
  struct Column {
    std::string name;
    std::vector<double> values;
  };

  Table() = default;

  /// Throws InvalidArgument (ragged columns or non-finite values),
  /// InvalidHeader (empty name) or DuplicateHeader.
  static Table from_columns(std::vector<Column> columns);

  std::size_t n_rows() const noexcept { return n_rows_; }
  std::size_t n_cols() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool has_column(std::string_view name) const;
  /// Throws UnknownColumn.
  std::span<const double> column(std::string_view name) const;

  /// Throws NameCollision or DimensionMismatch.
  Table with_column(std::string name, std::vector<double> values) const;
  /// Throws UnknownColumn or DimensionMismatch.
  Table with_replaced_column(std::string_view name, std::vector<double> values) const;
  /// Rows picked by index, in the given order; duplicates allowed.
  Table take_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t index_of(std::string_view name) const;

  std::size_t n_rows_ = 0;
  std::vector<std::string> names_;
  std::vector<std::shared_ptr<const std::vector<double>>> columns_;
};

struct LoadResult {
  Table table;
  std::size_t dropped_rows = 0;
};

/// Reads a header-first comma-separated file. Rows with a missing, non-numeric
/// or non-finite cell (or the wrong number of fields) are dropped and counted.
/// Blank lines are ignored. Throws Io, EmptyFile, InvalidHeader,
/// DuplicateHeader, AllRowsDropped.
LoadResult load_csv(const std::filesystem::path& path);
LoadResult parse_csv(std::string_view text);

/// Writes header plus rows, numbers in shortest round-trip form.
void write_csv(const Table& table, std::ostream& out);
void write_csv(const Table& table, const std::filesystem::path& path);

/// Appends `new_name` holding 1 where the value is strictly greater than the
/// column mean, else 0.
Table binarize_by_mean(const Table& t, std::string_view column, std::string new_name);

/// Appends `new_name` holding 1 where the value is strictly greater than
/// `threshold`, else 0.
Table binarize_above(const Table& t, std::string_view column, double threshold,
                     std::string new_name);

/// Replaces each listed column with (x - mean) / sd using the population sd;
/// zero-variance columns become all zeros.
Table standardize_columns(const Table& t, std::span<const std::string> columns);

/// Equal-width histogram over [min, max]; one line per bin formatted
/// `[lo, hi) : count : ####`, the final bin closed. Bars scale to 50 chars.
std::string text_histogram(const Table& t, std::string_view column, std::size_t bins);

/// Counts per bin, as used by text_histogram.
std::vector<std::size_t> histogram_counts(std::span<const double> values, std::size_t bins);

bool is_binary(std::span<const double> values);

enum class EstimatorKind {
  PropensityScoreMatching,
  DistanceMatching,
  Stratification,
  LinearRegression,
};

std::string_view to_string(EstimatorKind kind) noexcept;
/// Accepts "propensity_score_matching" etc., optionally prefixed "backdoor.".
/// Throws InvalidArgument.
EstimatorKind parse_estimator(std::string_view name);

/// What to estimate on which table. Treatment must be binary at estimation
/// time; the outcome may be any real-valued column.
struct AnalysisSpec {
  std::string treatment;
  std::string outcome;
  std::vector<std::string> confounders;
  EstimatorKind estimator = EstimatorKind::PropensityScoreMatching;
  std::uint64_t seed = 42;
};

/// Throws UnknownColumn, InvalidArgument (names not distinct) or
/// NonBinaryVariable (treatment not 0/1).
void validate(const AnalysisSpec& spec, const Table& table);

}  // namespace causalkit
