#include "panelkit/core.hpp"

namespace panelkit {

const char* errc_name(errc code) {
  switch (code) {
    case errc::duplicate_key: return "DuplicateKey";
    case errc::non_finite_value: return "NonFiniteValue";
    case errc::unknown_variable: return "UnknownVariable";
    case errc::rank_deficient: return "RankDeficient";
    case errc::insufficient_rows: return "InsufficientRows";
    case errc::zero_total_variation: return "ZeroTotalVariation";
    case errc::empty_after_transforms: return "EmptyAfterTransforms";
    case errc::unit_too_short: return "UnitTooShort";
    case errc::degenerate_variance: return "DegenerateVariance";
    case errc::zero_df: return "ZeroDf";
    case errc::single_cluster: return "SingleCluster";
    case errc::misaligned_groups: return "MisalignedGroups";
    case errc::too_few_groups: return "TooFewGroups";
    case errc::no_consecutive_pairs: return "NoConsecutivePairs";
    case errc::missing_column: return "MissingColumn";
    case errc::unparseable_value: return "UnparseableValue";
    case errc::empty_file: return "EmptyFile";
    case errc::uncovered_variable: return "UncoveredVariable";
    case errc::unknown_unit_code: return "UnknownUnitCode";
    case errc::missing_breakdown: return "MissingBreakdown";
    case errc::unknown_table_id: return "UnknownTableId";
    case errc::config_error: return "ConfigError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

int error_exit_code(errc code) {
  switch (code) {
    case errc::config_error:
    case errc::unknown_table_id:
      return 1;
    case errc::duplicate_key:
    case errc::non_finite_value:
    case errc::unknown_variable:
    case errc::missing_column:
    case errc::unparseable_value:
    case errc::empty_file:
    case errc::uncovered_variable:
    case errc::unknown_unit_code:
    case errc::missing_breakdown:
    case errc::io_error:
      return 2;
    default:
      return 3;
  }
}

}  // namespace panelkit
