#include "panelkit/report.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "panelkit/fixture.hpp"

namespace panelkit {

namespace fs = std::filesystem;

void ReplicationConfig::validate() const {
  if (lag < 0) raise(errc::config_error, "lag must be nonnegative");
  if (digits < 0 || digits > 10) raise(errc::config_error, "digits must be within 0..10");
  if (models.empty()) raise(errc::config_error, "model list is empty");
  if (!run_fd && !run_within) raise(errc::config_error, "no estimator selected");
  if (!use_fixture && data_dir.empty())
    raise(errc::config_error, "no data directory given and fixture not requested");
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(value);
  while (std::getline(stream, item, ',')) {
    item = trimmed(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  raise(errc::config_error, "expected a boolean, got '" + value + "'");
}

}  // namespace

void apply_config_entry(ReplicationConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "data") {
    config.data_dir = value;
  } else if (key == "fixture") {
    config.use_fixture = parse_bool(value);
  } else if (key == "models") {
    config.models = split_list(value);
  } else if (key == "estimator") {
    if (value == "fd") {
      config.run_fd = true;
      config.run_within = false;
    } else if (value == "within") {
      config.run_fd = false;
      config.run_within = true;
    } else if (value == "both") {
      config.run_fd = config.run_within = true;
    } else {
      raise(errc::config_error, "estimator must be fd, within or both, got '" + value + "'");
    }
  } else if (key == "vcov") {
    if (value == "classical")
      config.vcov = VcovKind::classical;
    else if (value == "arellano")
      config.vcov = VcovKind::arellano;
    else
      raise(errc::config_error, "vcov must be classical or arellano, got '" + value + "'");
  } else if (key == "lag") {
    try {
      config.lag = std::stoi(value);
    } catch (...) {
      raise(errc::config_error, "lag must be an integer, got '" + value + "'");
    }
  } else if (key == "out") {
    config.out_dir = value;
  } else if (key == "format") {
    if (value == "csv")
      config.format = TableFormat::csv;
    else if (value == "markdown")
      config.format = TableFormat::markdown;
    else
      raise(errc::config_error, "format must be csv or markdown, got '" + value + "'");
  } else if (key == "seed") {
    try {
      config.seed = std::stoull(value);
    } catch (...) {
      raise(errc::config_error, "seed must be an unsigned integer, got '" + value + "'");
    }
  } else if (key == "digits") {
    try {
      config.digits = std::stoi(value);
    } catch (...) {
      raise(errc::config_error, "digits must be an integer, got '" + value + "'");
    }
  } else {
    raise(errc::config_error, "unknown config key '" + key + "'");
  }
}

ReplicationConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::config_error, "cannot open config file " + path);
  ReplicationConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string text = line;
    std::size_t hash = text.find('#');
    if (hash != std::string::npos) text = text.substr(0, hash);
    text = trimmed(text);
    if (text.empty()) continue;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      raise(errc::config_error, path + ":" + std::to_string(line_no) + ": expected key = value");
    apply_config_entry(config, trimmed(text.substr(0, eq)), trimmed(text.substr(eq + 1)));
  }
  return config;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a(buffer.str());
}

LoadedData load_data(const ReplicationConfig& config) {
  LoadedData out;
  if (config.use_fixture) {
    out.panel = fixture_panel();
    out.input_digests.emplace_back("fixture (built-in)", fnv1a(write_canonical_csv(out.panel)));
    StudyManifest manifest = StudyManifest::study_default();
    for (const auto& var : manifest.variables)
      out.coverage.present_counts[var] = out.panel.count(var);
    out.coverage.complete_all_models =
        out.panel.complete_keys({kTotalVariable, kWageVariable, kOilVariable}).size();
    return out;
  }

  if (!fs::is_directory(config.data_dir))
    raise(errc::io_error, "data directory " + config.data_dir + " does not exist");
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(config.data_dir))
    if (entry.is_regular_file() && entry.path().extension() == ".csv")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) raise(errc::io_error, "no .csv files under " + config.data_dir);

  std::vector<SourceSchema> sources;
  sources.reserve(paths.size());
  for (const auto& path : paths) {
    sources.push_back(canonical_schema(path));
    out.input_digests.emplace_back(path, fnv1a_file(path));
  }
  AssembledStudy study = assemble_study_dataset(StudyManifest::study_default(), sources);
  out.panel = std::move(study.panel);
  out.coverage = std::move(study.coverage);
  out.rejects = std::move(study.rejects);
  return out;
}

namespace {

std::string hex64(std::uint64_t value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, value);
  return buf;
}

std::string provenance_block(const ReplicationConfig& config, const LoadedData& data) {
  std::ostringstream out;
  out << "panelkit " << kVersion << "\n";
  out << "config:\n";
  out << "  data = " << (config.use_fixture ? "(fixture)" : config.data_dir) << "\n";
  out << "  models = ";
  const auto& models = config.models;
  for (std::size_t i = 0; i < models.size(); ++i) out << (i ? "," : "") << models[i];
  out << "\n";
  out << "  estimator = " << (config.run_fd && config.run_within ? "both" : config.run_fd ? "fd" : "within")
      << "\n";
  out << "  vcov = " << vcov_kind_name(config.vcov) << "\n";
  out << "  lag = " << config.lag << "\n";
  out << "  digits = " << config.digits << "\n";
  out << "  format = " << (config.format == TableFormat::csv ? "csv" : "markdown") << "\n";
  out << "inputs:\n";
  for (const auto& [name, digest] : data.input_digests)
    out << "  " << name << " fnv1a=" << hex64(digest) << "\n";
  out << "coverage:\n";
  for (const auto& [var, count] : data.coverage.present_counts)
    out << "  " << var << " = " << count << "\n";
  out << "  complete(TOTAL,WAGE,OIL) = " << data.coverage.complete_all_models << "\n";
  if (!data.rejects.empty()) out << "  rejects = " << data.rejects.size() << "\n";
  return out.str();
}

ModelReport build_model_report(const PanelDataset& ds, const std::string& dependent,
                               const ReplicationConfig& config) {
  ModelSpec spec;
  spec.dependent = dependent;
  spec.regressors = {kWageVariable, kOilVariable};
  spec.lag = config.lag;
  spec.vcov = config.vcov;

  auto stage = [&](const char* name, auto&& fn) {
    try {
      return fn();
    } catch (const Error& err) {
      throw Error(err.code(), "model " + dependent + ", stage " + name + ": " + err.what());
    }
  };

  ModelReport report;
  report.model = dependent;

  ModelSpec pooled_spec = spec;
  pooled_spec.estimator = Estimator::pooled;
  RegressionResult pooled =
      stage("pooled", [&] { return fit_pooled(ds, pooled_spec); });
  report.effects_individual =
      stage("honda-individual", [&] { return honda_lm(pooled, EffectType::individual); });
  report.effects_time = stage("honda-time", [&] { return honda_lm(pooled, EffectType::time); });

  ModelSpec fd_spec = spec;
  fd_spec.estimator = Estimator::first_differences;
  report.fd = stage("first-differences", [&] { return fit_first_differences(ds, fd_spec); });

  ModelSpec within_spec = spec;
  within_spec.estimator = Estimator::within;
  report.within = stage("within", [&] { return fit_within(ds, within_spec); });

  report.serial_diff = stage("serial-fd-null", [&] {
    return wooldridge_fd_serial(report.fd, SerialNull::fd_errors_uncorrelated);
  });
  report.serial_within = stage("serial-levels-null", [&] {
    return wooldridge_fd_serial(report.fd, SerialNull::level_errors_uncorrelated);
  });
  report.het_diff = stage("het-fd", [&] { return breusch_pagan_het(report.fd); });
  report.het_within = stage("het-within", [&] { return breusch_pagan_het(report.within); });
  report.hausman = stage("hausman", [&] { return hausman_aux(ds, within_spec); });
  return report;
}

}  // namespace

ReportBundle run_replication(const ReplicationConfig& config) {
  config.validate();
  LoadedData data = load_data(config);

  ReportBundle bundle;
  bundle.regressors = {kWageVariable, kOilVariable};
  bundle.table2 = share_matrix(data.panel);
  bundle.figure1 = annual_averages(data.panel, {kTotalVariable, kWageVariable, kOilVariable});
  for (const auto& model : config.models)
    bundle.models.push_back(build_model_report(data.panel, model, config));
  bundle.provenance = provenance_block(config, data);
  return bundle;
}

std::string format_fixed(double value, int digits) {
  if (!std::isfinite(value)) return "nan";
  double scale = std::pow(10.0, digits);
  double scaled = value * scale;
  if (std::abs(scaled) >= 9.0e18) {  // out of llround range; fall back
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
  }
  long long rounded = std::llround(scaled);  // rounds half away from zero
  bool negative = rounded < 0;
  unsigned long long magnitude =
      negative ? -static_cast<unsigned long long>(rounded) : static_cast<unsigned long long>(rounded);
  std::string digits_text = std::to_string(magnitude);
  std::string out;
  if (digits == 0) {
    out = digits_text;
  } else {
    if (digits_text.size() <= static_cast<std::size_t>(digits))
      digits_text.insert(0, static_cast<std::size_t>(digits) + 1 - digits_text.size(), '0');
    out = digits_text.substr(0, digits_text.size() - static_cast<std::size_t>(digits)) + "." +
          digits_text.substr(digits_text.size() - static_cast<std::size_t>(digits));
  }
  if (negative && magnitude != 0) out.insert(out.begin(), '-');
  return out;
}

namespace {

struct TableData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render(const TableData& table, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::csv) {
    for (std::size_t i = 0; i < table.header.size(); ++i)
      out << (i ? "," : "") << table.header[i];
    out << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << "\n";
    }
  } else {
    out << "|";
    for (const auto& cell : table.header) out << " " << cell << " |";
    out << "\n|";
    for (std::size_t i = 0; i < table.header.size(); ++i) out << " --- |";
    out << "\n";
    for (const auto& row : table.rows) {
      out << "|";
      for (const auto& cell : row) out << " " << cell << " |";
      out << "\n";
    }
  }
  return out.str();
}

TableData table2_data(const ReportBundle& bundle, int digits) {
  TableData table;
  table.header = {"sector"};
  for (const auto& source : kFundingSources) table.header.push_back(source);
  table.header.push_back("total");
  for (std::size_t r = 0; r < kPerformanceSectors.size(); ++r) {
    std::vector<std::string> row{kPerformanceSectors[r]};
    for (std::size_t c = 0; c < kFundingSources.size(); ++c)
      row.push_back(format_fixed(bundle.table2.cells(static_cast<Index>(r), static_cast<Index>(c)), digits));
    row.push_back(format_fixed(bundle.table2.row_totals(static_cast<Index>(r)), digits));
    table.rows.push_back(std::move(row));
  }
  std::vector<std::string> totals{"total"};
  for (std::size_t c = 0; c < kFundingSources.size(); ++c)
    totals.push_back(format_fixed(bundle.table2.col_totals(static_cast<Index>(c)), digits));
  totals.push_back(format_fixed(bundle.table2.grand_total, digits));
  table.rows.push_back(std::move(totals));
  return table;
}

TableData table3_data(const ReportBundle& bundle, int digits) {
  TableData table;
  table.header = {"model",       "effects_ind",  "effects_time", "serial_diff", "serial_within",
                  "hetero_diff", "hetero_within", "r2_diff",      "r2_within"};
  for (const auto& model : bundle.models) {
    table.rows.push_back({model.model,
                          format_fixed(model.effects_individual.p_value, digits),
                          format_fixed(model.effects_time.p_value, digits),
                          format_fixed(model.serial_diff.p_value, digits),
                          format_fixed(model.serial_within.p_value, digits),
                          format_fixed(model.het_diff.p_value, digits),
                          format_fixed(model.het_within.p_value, digits),
                          format_fixed(model.fd.r2, digits),
                          format_fixed(model.within.r2, digits)});
  }
  return table;
}

TableData coefficient_table(const ReportBundle& bundle, bool first_differences, int digits) {
  TableData table;
  table.header = {"model"};
  std::vector<std::string> names;
  if (first_differences) names.push_back("intercept");
  names.insert(names.end(), bundle.regressors.begin(), bundle.regressors.end());
  for (const auto& name : names) {
    table.header.push_back(name);
    table.header.push_back(name + "_sd");
    table.header.push_back(name + "_p");
  }
  for (const auto& model : bundle.models) {
    const RegressionResult& fit = first_differences ? model.fd : model.within;
    std::vector<std::string> row{model.model};
    for (Index j = 0; j < fit.coef_count(); ++j) {
      row.push_back(format_fixed(fit.coefficients(j), digits));
      row.push_back(format_fixed(fit.std_errors(j), digits));
      row.push_back(format_fixed(fit.p_values(j), digits));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

TableData figure1_data(const ReportBundle& bundle, int digits) {
  TableData table;
  table.header = {"year", "variable", "mean", "count"};
  for (std::size_t j = 0; j < bundle.figure1.variables.size(); ++j) {
    for (std::size_t y = 0; y < bundle.figure1.years.size(); ++y) {
      int count = bundle.figure1.counts(static_cast<Index>(y), static_cast<Index>(j));
      if (count == 0) continue;
      table.rows.push_back({std::to_string(bundle.figure1.years[y]),
                            bundle.figure1.variables[j],
                            format_fixed(bundle.figure1.means(static_cast<Index>(y), static_cast<Index>(j)), digits),
                            std::to_string(count)});
    }
  }
  return table;
}

}  // namespace

std::string render_table(const ReportBundle& bundle, const std::string& which, TableFormat format,
                         int digits) {
  if (which == "table2") return render(table2_data(bundle, digits), format);
  if (which == "table3") return render(table3_data(bundle, digits), format);
  if (which == "table4") return render(coefficient_table(bundle, true, digits), format);
  if (which == "table5") return render(coefficient_table(bundle, false, digits), format);
  if (which == "figure1") return render(figure1_data(bundle, digits), format);
  raise(errc::unknown_table_id, which);
}

std::vector<std::string> write_report_files(const ReportBundle& bundle,
                                            const ReplicationConfig& config) {
  fs::create_directories(config.out_dir);
  const char* extension = config.format == TableFormat::csv ? ".csv" : ".md";
  std::vector<std::string> written;

  std::vector<std::string> tables{"table2", "table3", "table4", "table5", "figure1"};
  if (!config.run_fd) tables.erase(std::find(tables.begin(), tables.end(), "table4"));
  if (!config.run_within) tables.erase(std::find(tables.begin(), tables.end(), "table5"));

  for (const auto& which : tables) {
    fs::path path = fs::path(config.out_dir) / (which + extension);
    std::ofstream out(path);
    if (!out) raise(errc::io_error, "cannot write " + path.string());
    out << render_table(bundle, which, config.format, config.digits);
    written.push_back(path.string());
  }
  fs::path prov = fs::path(config.out_dir) / "provenance.txt";
  std::ofstream out(prov);
  if (!out) raise(errc::io_error, "cannot write " + prov.string());
  out << bundle.provenance;
  written.push_back(prov.string());
  return written;
}

}  // namespace panelkit
