#include "panelkit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace panelkit {

namespace {

// Minimal RFC-4180 field splitter: quoted fields, "" escapes, single-line rows.
std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

bool parse_int(const std::string& text, int& out) {
  std::string t = trimmed(text);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

bool parse_double(const std::string& text, double& out) {
  std::string t = trimmed(text);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size() && std::isfinite(out);
}

}  // namespace

void SourceSchema::validate() const {
  if (path.empty()) raise(errc::config_error, "source has no path");
  std::vector<std::string> mapped{unit_column, period_column, value_column};
  if (!variable_column.empty()) mapped.push_back(variable_column);
  if (!unit_tag_column.empty()) mapped.push_back(unit_tag_column);
  std::set<std::string> unique(mapped.begin(), mapped.end());
  if (unique.size() != mapped.size())
    raise(errc::config_error, "source " + path + " maps the same column twice");
  if (variable_column.empty() && fixed_variable.empty())
    raise(errc::config_error, "source " + path + " names neither a variable column nor a fixed variable");
}

CsvReadResult read_long_csv(const SourceSchema& schema) {
  schema.validate();
  std::ifstream in(schema.path);
  if (!in) raise(errc::io_error, "cannot open " + schema.path);

  std::string line;
  if (!std::getline(in, line)) raise(errc::empty_file, schema.path);
  std::vector<std::string> header = split_csv_row(line);

  auto column = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      raise(errc::missing_column, "column '" + name + "' not found in " + schema.path);
    return static_cast<std::size_t>(it - header.begin());
  };

  std::size_t unit_col = column(schema.unit_column);
  std::size_t period_col = column(schema.period_column);
  std::size_t value_col = column(schema.value_column);
  std::size_t variable_col = schema.variable_column.empty() ? 0 : column(schema.variable_column);
  std::size_t tag_col = schema.unit_tag_column.empty() ? 0 : column(schema.unit_tag_column);

  CsvReadResult result;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (trimmed(line).empty()) continue;
    std::vector<std::string> fields = split_csv_row(line);
    auto reject = [&](const std::string& reason) {
      result.rejects.push_back({row_number, reason, line});
    };

    std::size_t needed = std::max({unit_col, period_col, value_col,
                                   schema.variable_column.empty() ? std::size_t{0} : variable_col,
                                   schema.unit_tag_column.empty() ? std::size_t{0} : tag_col});
    if (fields.size() <= needed) {
      reject("too few fields");
      continue;
    }

    Record rec;
    rec.unit = trimmed(fields[unit_col]);
    if (rec.unit.empty()) {
      reject("empty unit");
      continue;
    }
    if (!parse_int(fields[period_col], rec.period)) {
      reject("unparseable period '" + fields[period_col] + "'");
      continue;
    }
    if (!parse_double(fields[value_col], rec.value)) {
      reject("unparseable value '" + fields[value_col] + "'");
      continue;
    }
    rec.variable = schema.variable_column.empty() ? schema.fixed_variable
                                                  : trimmed(fields[variable_col]);
    if (rec.variable.empty()) {
      reject("empty variable");
      continue;
    }
    if (!schema.unit_tag_column.empty() && !schema.expected_unit_tag.empty() &&
        trimmed(fields[tag_col]) != schema.expected_unit_tag) {
      reject("unit-of-measure '" + trimmed(fields[tag_col]) + "' != expected '" +
             schema.expected_unit_tag + "'");
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

const std::vector<std::string>& study_dependents() {
  static const std::vector<std::string> deps = {
      "TOTAL",    "FUND-BES", "FUND-GOV", "FUND-HES", "FUND-PNP",
      "FUND-ROW", "PERF-BES", "PERF-GOV", "PERF-HES", "PERF-PNP"};
  return deps;
}

StudyManifest StudyManifest::study_default() {
  StudyManifest m;
  m.included_units = {"AUT", "BEL", "CAN", "CHE", "CZE", "DEU", "DNK", "ESP", "EST", "FIN",
                      "FRA", "GBR", "GRC", "HUN", "IRL", "ITA", "JPN", "KOR", "LUX", "MEX",
                      "NLD", "NOR", "NZL", "POL", "PRT", "SVK", "SVN", "SWE", "USA"};
  m.excluded_units = {{"AUS", "missing oil prices"},   {"CHL", "missing oil prices"},
                      {"ISL", "missing oil prices"},   {"ISR", "missing oil prices"},
                      {"LVA", "missing oil prices"},   {"LTU", "missing oil prices"},
                      {"TUR", "missing average wages"}};
  m.period_begin = 2003;
  m.period_end = 2017;
  m.variables = study_dependents();
  m.variables.push_back(kWageVariable);
  m.variables.push_back(kOilVariable);
  m.oil_series_note = "IEA automotive diesel oil end-use price, USD PPP per 1000 litres";
  return m;
}

void StudyManifest::validate() const {
  if (included_units.empty()) raise(errc::config_error, "manifest includes no units");
  if (period_begin > period_end) raise(errc::config_error, "manifest period range is empty");
  if (variables.empty()) raise(errc::config_error, "manifest lists no variables");
  for (const auto& code : included_units)
    if (code.size() != 3 || !std::all_of(code.begin(), code.end(), [](unsigned char c) {
          return std::isupper(c);
        }))
      raise(errc::unknown_unit_code, "'" + code + "' is not a 3-letter country code");
}

std::string resolve_unit_code(const std::string& name) {
  static const std::map<std::string, std::string> aliases = {
      {"Australia", "AUS"},      {"Austria", "AUT"},
      {"Belgium", "BEL"},        {"Canada", "CAN"},
      {"Chile", "CHL"},          {"Czech Republic", "CZE"},
      {"Czechia", "CZE"},        {"Denmark", "DNK"},
      {"Estonia", "EST"},        {"Finland", "FIN"},
      {"France", "FRA"},         {"Germany", "DEU"},
      {"Greece", "GRC"},         {"Hungary", "HUN"},
      {"Iceland", "ISL"},        {"Ireland", "IRL"},
      {"Israel", "ISR"},         {"Italy", "ITA"},
      {"Japan", "JPN"},          {"Korea", "KOR"},
      {"South Korea", "KOR"},    {"Latvia", "LVA"},
      {"Lithuania", "LTU"},      {"Luxembourg", "LUX"},
      {"Mexico", "MEX"},         {"Netherlands", "NLD"},
      {"New Zealand", "NZL"},    {"Norway", "NOR"},
      {"Poland", "POL"},         {"Portugal", "PRT"},
      {"Slovak Republic", "SVK"},{"Slovakia", "SVK"},
      {"Slovenia", "SVN"},       {"Spain", "ESP"},
      {"Sweden", "SWE"},         {"Switzerland", "CHE"},
      {"Turkey", "TUR"},         {"United Kingdom", "GBR"},
      {"United States", "USA"},
  };
  if (name.size() == 3 && std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isupper(c);
      }))
    return name;
  auto it = aliases.find(name);
  if (it == aliases.end()) raise(errc::unknown_unit_code, "'" + name + "'");
  return it->second;
}

std::string cross_variable(const std::string& sector, const std::string& source) {
  return "CROSS-" + sector + "-" + source;
}

AssembledStudy assemble_study_dataset(const StudyManifest& manifest,
                                      const std::vector<SourceSchema>& sources) {
  manifest.validate();
  if (sources.empty())
    raise(errc::uncovered_variable, "no sources cover the manifest variables");

  std::set<std::string> included(manifest.included_units.begin(), manifest.included_units.end());
  std::set<std::string> wanted(manifest.variables.begin(), manifest.variables.end());
  for (const auto& sector : kPerformanceSectors)
    for (const auto& source : kFundingSources) wanted.insert(cross_variable(sector, source));

  std::vector<Record> records;
  std::vector<RejectedRow> rejects;
  std::map<std::string, std::string> unit_tags;
  for (const auto& schema : sources) {
    CsvReadResult read = read_long_csv(schema);
    for (auto& reject : read.rejects) {
      reject.reason = schema.path + ": " + reject.reason;
      rejects.push_back(std::move(reject));
    }
    for (auto& rec : read.records) {
      if (!wanted.count(rec.variable)) continue;
      if (rec.period < manifest.period_begin || rec.period > manifest.period_end) continue;
      std::string code;
      try {
        code = resolve_unit_code(rec.unit);
      } catch (const Error&) {
        rejects.push_back({0, schema.path + ": unknown unit spelling '" + rec.unit + "'", rec.unit});
        continue;
      }
      if (!included.count(code)) continue;
      rec.unit = code;
      if (!schema.expected_unit_tag.empty()) unit_tags.emplace(rec.variable, schema.expected_unit_tag);
      records.push_back(std::move(rec));
    }
  }

  AssembledStudy out;
  out.panel = PanelDataset::build(records, std::move(unit_tags));
  out.rejects = std::move(rejects);
  for (const auto& var : manifest.variables) {
    std::size_t count = out.panel.has_variable(var) ? out.panel.count(var) : 0;
    if (count == 0)
      raise(errc::uncovered_variable, var + " has no observations after assembly");
    out.coverage.present_counts[var] = count;
  }
  out.coverage.complete_all_models =
      out.panel.complete_keys({kTotalVariable, kWageVariable, kOilVariable}).size();
  out.coverage.reject_count = out.rejects.size();
  return out;
}

ShareMatrix share_matrix(const PanelDataset& ds) {
  if (!ds.has_variable(kTotalVariable)) raise(errc::missing_breakdown, "TOTAL is missing");
  for (const auto& sector : kPerformanceSectors) {
    if (!ds.has_variable(std::string("PERF-") + sector))
      raise(errc::missing_breakdown, std::string("PERF-") + sector + " is missing");
    for (const auto& source : kFundingSources)
      if (!ds.has_variable(cross_variable(sector, source)))
        raise(errc::missing_breakdown, cross_variable(sector, source) + " is missing");
  }
  for (const auto& source : kFundingSources)
    if (!ds.has_variable(std::string("FUND-") + source))
      raise(errc::missing_breakdown, std::string("FUND-") + source + " is missing");

  auto mean_share = [&](const std::string& var) {
    double sum = 0;
    std::size_t n = 0;
    SeriesView view = ds.series(var);
    for (Index i = 0; i < view.size(); ++i) {
      const RowKey& key = view.keys[static_cast<std::size_t>(i)];
      auto total = ds.value(key.unit, key.period, kTotalVariable);
      if (!total || *total == 0) continue;
      sum += 100.0 * view.values(i) / *total;
      ++n;
    }
    if (n == 0) raise(errc::missing_breakdown, var + " never overlaps TOTAL");
    return sum / static_cast<double>(n);
  };

  ShareMatrix out;
  for (std::size_t r = 0; r < kPerformanceSectors.size(); ++r)
    for (std::size_t c = 0; c < kFundingSources.size(); ++c)
      out.cells(static_cast<Index>(r), static_cast<Index>(c)) =
          mean_share(cross_variable(kPerformanceSectors[r], kFundingSources[c]));
  for (std::size_t r = 0; r < kPerformanceSectors.size(); ++r)
    out.row_totals(static_cast<Index>(r)) = mean_share(std::string("PERF-") + kPerformanceSectors[r]);
  for (std::size_t c = 0; c < kFundingSources.size(); ++c)
    out.col_totals(static_cast<Index>(c)) = mean_share(std::string("FUND-") + kFundingSources[c]);
  out.grand_total = out.col_totals.sum();
  return out;
}

AnnualAverages annual_averages(const PanelDataset& ds, const std::vector<std::string>& vars) {
  std::set<int> year_set;
  for (const auto& var : vars) {
    SeriesView view = ds.series(var);  // validates the variable
    for (const auto& key : view.keys) year_set.insert(key.period);
  }

  AnnualAverages out;
  out.years.assign(year_set.begin(), year_set.end());
  out.variables = vars;
  const Index ny = static_cast<Index>(out.years.size());
  const Index nv = static_cast<Index>(vars.size());
  out.means = Matrix::Constant(ny, nv, std::numeric_limits<double>::quiet_NaN());
  out.counts = Eigen::MatrixXi::Zero(ny, nv);

  std::map<int, Index> year_pos;
  for (Index i = 0; i < ny; ++i) year_pos[out.years[static_cast<std::size_t>(i)]] = i;

  for (Index j = 0; j < nv; ++j) {
    SeriesView view = ds.series(vars[static_cast<std::size_t>(j)]);
    Vector sums = Vector::Zero(ny);
    for (Index i = 0; i < view.size(); ++i) {
      Index y = year_pos[view.keys[static_cast<std::size_t>(i)].period];
      sums(y) += view.values(i);
      out.counts(y, j) += 1;
    }
    for (Index y = 0; y < ny; ++y)
      if (out.counts(y, j) > 0) out.means(y, j) = sums(y) / out.counts(y, j);
  }
  return out;
}

std::string write_canonical_csv(const PanelDataset& ds) {
  std::vector<Record> records = ds.records();
  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return std::tie(a.unit, a.period, a.variable) < std::tie(b.unit, b.period, b.variable);
  });
  std::string out = "country,year,variable,value\n";
  char buffer[64];
  for (const auto& rec : records) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", rec.value);
    out += rec.unit + "," + std::to_string(rec.period) + "," + rec.variable + "," + buffer + "\n";
  }
  return out;
}

SourceSchema canonical_schema(const std::string& path) {
  SourceSchema schema;
  schema.path = path;
  return schema;
}

}  // namespace panelkit
