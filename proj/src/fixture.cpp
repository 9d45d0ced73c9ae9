#include "panelkit/fixture.hpp"

#include <cmath>

#include "panelkit/ingest.hpp"
#include "panelkit/montecarlo.hpp"

namespace panelkit {

namespace {

constexpr int kFirstYear = 2003;
constexpr int kLastYear = 2017;

bool is_missing(const std::string& unit, int year, const std::string& var) {
  // Deliberate holes: value gaps in single variables plus one whole-year gap
  // in POL's grid, so every transform's gap handling sees real traffic.
  if (unit == "GRC" && var == kWageVariable && (year == 2009 || year == 2010)) return true;
  if (unit == "MEX" && year <= 2005 && var != kWageVariable && var != kOilVariable) return true;
  if (unit == "EST" && var == kOilVariable && year == 2016) return true;
  if (unit == "POL" && year == 2011) return true;
  return false;
}

// Zero-sum per-unit share tilt. MEX and POL have shorter breakdown coverage,
// so they carry no tilt; the remaining 27 units get a symmetric ladder whose
// sum cancels exactly, keeping the country-year average at the planted value.
double share_tilt(const std::string& unit, int rank_among_full) {
  if (unit == "MEX" || unit == "POL") return 0.0;
  return (static_cast<double>(rank_among_full) - 13.0) / 32.0;
}

// Absolute share perturbation, in percentage points. Orthogonal to the
// planted matrix so every country-year's interior still sums to exactly 100,
// and bounded by a third of each planted cell so shares stay positive.
const Eigen::Matrix<double, 4, 5>& tilt_matrix() {
  static const Eigen::Matrix<double, 4, 5> tilt = [] {
    Eigen::Matrix<double, 4, 5> raw;
    for (Index r = 0; r < 4; ++r)
      for (Index c = 0; c < 5; ++c)
        raw(r, c) = (static_cast<double>((3 * r + 2 * c) % 5) - 2.0) / 5.0;
    const auto& planted = fixture_share_percent();
    Eigen::Matrix<double, 4, 5> scaled = planted.cwiseProduct(raw);
    return (scaled - (scaled.sum() / planted.sum()) * planted).eval();
  }();
  return tilt;
}

}  // namespace

const Eigen::Matrix<double, 4, 5>& fixture_share_percent() {
  static const Eigen::Matrix<double, 4, 5> shares = [] {
    Eigen::Matrix<double, 4, 5> m;
    // Sector of performance (BES, GOV, HES, PNP) by source of funding
    // (BES, GOV, HES, PNP, ROW); interior sums to 100.
    m << 51.80, 4.50, 0.04, 0.13, 6.51,
         0.84, 10.57, 0.05, 0.14, 0.78,
         1.32, 17.20, 2.23, 0.83, 1.38,
         0.25, 0.70, 0.01, 0.53, 0.19;
    return m;
  }();
  return shares;
}

PanelDataset fixture_panel(const FixtureSpec& spec) {
  const StudyManifest manifest = StudyManifest::study_default();
  const auto& planted = fixture_share_percent();
  mc::Rng rng(spec.seed);

  std::vector<Record> records;
  std::map<std::string, std::string> tags;
  tags[kTotalVariable] = "USD PPP per capita";
  tags[kWageVariable] = "USD PPP per month";
  tags[kOilVariable] = "USD PPP per 1000 litres";

  int unit_index = 0;
  int full_coverage_rank = 0;
  for (const auto& unit : manifest.included_units) {
    const double u = static_cast<double>(unit_index++);
    const double tilt = share_tilt(unit, full_coverage_rank);
    if (unit != "MEX" && unit != "POL") ++full_coverage_rank;
    const int n_years = kLastYear - kFirstYear + 1;

    std::vector<double> wage(n_years), oil(n_years), total(n_years);
    for (int t = 0; t < n_years; ++t) {
      wage[t] = 1800.0 + 90.0 * u + (50.0 + 3.0 * u) * t + 40.0 * rng.normal();
      oil[t] = 900.0 + 25.0 * u + 60.0 * std::sin(2.0 * 3.14159265358979 * t / 7.0) +
               30.0 * rng.normal();
    }
    // Levels tied to the wage level with the same slope the differenced model
    // plants, plus a large unit effect: pooled residuals then carry strong
    // individual structure and no common year structure, like the study data.
    const double unit_effect = 40.0 * rng.normal();
    total[0] = spec.wage_coefficient * wage[0] + 150.0 + unit_effect + 20.0 * rng.normal();
    total[1] = total[0] + 4.0 * rng.normal();
    for (int t = 2; t < n_years; ++t) {
      total[t] = total[t - 1] + spec.intercept +
                 spec.wage_coefficient * (wage[t - 1] - wage[t - 2]) +
                 spec.oil_coefficient * (oil[t - 1] - oil[t - 2]) + spec.noise_sd * rng.normal();
    }

    for (int t = 0; t < n_years; ++t) {
      const int year = kFirstYear + t;
      auto add = [&](const std::string& var, double value) {
        if (!is_missing(unit, year, var)) records.push_back({unit, year, var, value});
      };
      add(kWageVariable, wage[t]);
      add(kOilVariable, oil[t]);
      add(kTotalVariable, total[t]);
      for (std::size_t r = 0; r < kPerformanceSectors.size(); ++r) {
        double row_sum = 0;
        for (std::size_t c = 0; c < kFundingSources.size(); ++c) {
          double percent = planted(static_cast<Index>(r), static_cast<Index>(c)) +
                           tilt * tilt_matrix()(static_cast<Index>(r), static_cast<Index>(c));
          double cell = percent / 100.0 * total[t];
          add(cross_variable(kPerformanceSectors[r], kFundingSources[c]), cell);
          row_sum += cell;
        }
        add(std::string("PERF-") + kPerformanceSectors[r], row_sum);
      }
      for (std::size_t c = 0; c < kFundingSources.size(); ++c) {
        double col_sum = 0;
        for (std::size_t r = 0; r < kPerformanceSectors.size(); ++r)
          col_sum += (planted(static_cast<Index>(r), static_cast<Index>(c)) +
                      tilt * tilt_matrix()(static_cast<Index>(r), static_cast<Index>(c))) /
                     100.0 * total[t];
        add(std::string("FUND-") + kFundingSources[c], col_sum);
      }
    }
  }
  return PanelDataset::build(records, std::move(tags));
}

}  // namespace panelkit
