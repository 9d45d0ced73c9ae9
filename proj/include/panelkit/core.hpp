#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace panelkit {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

/// Identifies one panel row: a (unit, period) pair such as ("CZE", 2009).
struct RowKey {
  std::string unit;
  int period = 0;

  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

using RowKeys = std::vector<RowKey>;

/// A dense value block whose rows are keyed by (unit, period).
/// Rows are kept sorted by key; columns are whatever the caller put there.
struct KeyedTable {
  RowKeys keys;
  Matrix values;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

enum class errc {
  // panel-store
  duplicate_key,
  non_finite_value,
  unknown_variable,
  // least-squares
  rank_deficient,
  insufficient_rows,
  zero_total_variation,
  // estimators
  empty_after_transforms,
  unit_too_short,
  degenerate_variance,
  // robust-vcov
  zero_df,
  single_cluster,
  misaligned_groups,
  // spec-tests
  too_few_groups,
  no_consecutive_pairs,
  // ingest
  missing_column,
  unparseable_value,
  empty_file,
  uncovered_variable,
  unknown_unit_code,
  missing_breakdown,
  // report-cli
  unknown_table_id,
  config_error,
  io_error,
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw Error(code, message);
}

/// Exit-code buckets for the CLI: 1 config, 2 data, 3 numerical.
int error_exit_code(errc code);

}  // namespace panelkit
