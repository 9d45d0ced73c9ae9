// panelkit command-line runner: ingest/describe/test/fit/replicate/mc.
// Exit codes: 0 success, 1 config error, 2 data error, 3 numerical failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "panelkit/fixture.hpp"
#include "panelkit/montecarlo.hpp"
#include "panelkit/report.hpp"

namespace fs = std::filesystem;
using namespace panelkit;

namespace {

struct CliOverrides {
  std::optional<std::string> data;
  bool fixture = false;
  std::optional<std::string> config_path;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> estimator;
  std::optional<std::string> vcov;
  std::optional<int> lag;
  std::optional<int> digits;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> models;
};

void add_common_flags(CLI::App* cmd, CliOverrides& over) {
  cmd->add_option("--data", over.data, "Directory of canonical long CSVs");
  cmd->add_flag("--fixture", over.fixture, "Use the built-in synthetic panel");
  cmd->add_option("--config", over.config_path, "Config file (key = value lines)");
  cmd->add_option("--out", over.out, "Output directory");
  cmd->add_option("--format", over.format, "Table format: csv or markdown");
  cmd->add_option("--estimator", over.estimator, "fd, within or both");
  cmd->add_option("--vcov", over.vcov, "classical or arellano");
  cmd->add_option("--lag", over.lag, "Regressor lag in years");
  cmd->add_option("--digits", over.digits, "Fixed-point digits in tables");
  cmd->add_option("--seed", over.seed, "Monte Carlo seed");
  cmd->add_option("--models", over.models, "Comma-separated dependent variables");
}

// Flags win over config file entries; the config file wins over defaults.
ReplicationConfig resolve_config(const CliOverrides& over) {
  ReplicationConfig config;
  if (over.config_path) config = load_config_file(*over.config_path);
  if (const char* env = std::getenv("PANELKIT_DATA"); env && config.data_dir.empty())
    config.data_dir = env;
  if (over.data) apply_config_entry(config, "data", *over.data);
  if (over.fixture) apply_config_entry(config, "fixture", "true");
  if (over.out) apply_config_entry(config, "out", *over.out);
  if (over.format) apply_config_entry(config, "format", *over.format);
  if (over.estimator) apply_config_entry(config, "estimator", *over.estimator);
  if (over.vcov) apply_config_entry(config, "vcov", *over.vcov);
  if (over.lag) apply_config_entry(config, "lag", std::to_string(*over.lag));
  if (over.digits) apply_config_entry(config, "digits", std::to_string(*over.digits));
  if (over.seed) apply_config_entry(config, "seed", std::to_string(*over.seed));
  if (over.models) apply_config_entry(config, "models", *over.models);
  return config;
}

void write_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot write " + path.string());
  out << text;
}

int run_ingest(const ReplicationConfig& config) {
  LoadedData data = load_data(config);
  fs::path out_dir = config.out_dir;
  write_text(out_dir / "canonical.csv", write_canonical_csv(data.panel));

  std::ostringstream coverage;
  coverage << "variable,present\n";
  for (const auto& [var, count] : data.coverage.present_counts)
    coverage << var << "," << count << "\n";
  coverage << "complete(TOTAL;WAGE;OIL)," << data.coverage.complete_all_models << "\n";
  write_text(out_dir / "coverage.csv", coverage.str());

  std::ostringstream rejects;
  rejects << "row,reason\n";
  for (const auto& reject : data.rejects)
    rejects << reject.row_number << ",\"" << reject.reason << "\"\n";
  write_text(out_dir / "rejects.csv", rejects.str());

  std::cout << "ingested " << data.panel.cell_count() << " cells across "
            << data.panel.units().size() << " units; " << data.rejects.size() << " rejects\n"
            << "wrote " << (out_dir / "canonical.csv").string() << "\n";
  return 0;
}

int run_tables(const ReplicationConfig& config, const std::vector<std::string>& which) {
  ReportBundle bundle = run_replication(config);
  const char* extension = config.format == TableFormat::csv ? ".csv" : ".md";
  for (const auto& table : which) {
    fs::path path = fs::path(config.out_dir) / (table + extension);
    write_text(path, render_table(bundle, table, config.format, config.digits));
    std::cout << "wrote " << path.string() << "\n";
  }
  if (std::find(which.begin(), which.end(), "table3") != which.end()) {
    std::cout << "hausman (robust, chi-squared p-values):";
    for (const auto& model : bundle.models)
      std::cout << " " << model.model << "=" << format_fixed(model.hausman.p_value, config.digits);
    std::cout << "\n";
  }
  return 0;
}

int run_replicate(const ReplicationConfig& config) {
  ReportBundle bundle = run_replication(config);
  for (const auto& path : write_report_files(bundle, config))
    std::cout << "wrote " << path << "\n";
  return 0;
}

int run_mc(const ReplicationConfig& config, int size_reps, int power_reps) {
  using namespace panelkit::mc;
  struct Row {
    const char* name;
    RejectionRate rate;
  };
  std::vector<Row> rows;
  rows.push_back({"honda_individual_size", honda_individual_size(size_reps, config.seed)});
  rows.push_back({"breusch_pagan_size", breusch_pagan_size(size_reps, config.seed + 1)});
  rows.push_back({"wooldridge_levels_null_size",
                  wooldridge_levels_null_size(size_reps, config.seed + 2)});
  rows.push_back({"hausman_size", hausman_size(size_reps, config.seed + 3)});
  rows.push_back({"hausman_power_corr09", hausman_power(power_reps, config.seed + 4, 0.9)});
  rows.push_back({"wooldridge_fd_null_power",
                  wooldridge_fd_null_power(power_reps, config.seed + 5)});

  std::ostringstream csv;
  csv << "experiment,replications,rejections,rate\n";
  for (const auto& row : rows) {
    csv << row.name << "," << row.rate.replications << "," << row.rate.rejections << ","
        << format_fixed(row.rate.rate(), 4) << "\n";
    std::cout << row.name << ": " << format_fixed(row.rate.rate(), 4) << " (" << row.rate.rejections
              << "/" << row.rate.replications << ")\n";
  }
  write_text(fs::path(config.out_dir) / "mc_results.csv", csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panelkit: unbalanced panel estimators, robust covariance and specification tests"};
  app.require_subcommand(1);

  CliOverrides over;
  int size_reps = 1000;
  int power_reps = 500;

  CLI::App* ingest = app.add_subcommand("ingest", "Validate sources and write the canonical dump");
  CLI::App* describe = app.add_subcommand("describe", "Share matrix and per-year averages");
  CLI::App* test = app.add_subcommand("test", "Specification tests and R-squared (table3)");
  CLI::App* fit = app.add_subcommand("fit", "Coefficient tables (table4/table5)");
  CLI::App* replicate = app.add_subcommand("replicate", "Full pipeline: tables 2-5, figure 1, provenance");
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo size/power experiments");
  for (CLI::App* cmd : {ingest, describe, test, fit, replicate, mc}) add_common_flags(cmd, over);
  mc->add_option("--size-reps", size_reps, "Replications for size experiments");
  mc->add_option("--power-reps", power_reps, "Replications for power experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    ReplicationConfig config = resolve_config(over);
    if (mc->parsed()) {
      // Monte Carlo draws nothing from disk.
      if (!config.use_fixture && config.data_dir.empty()) config.use_fixture = true;
    }
    config.validate();
    if (ingest->parsed()) return run_ingest(config);
    if (describe->parsed()) return run_tables(config, {"table2", "figure1"});
    if (test->parsed()) return run_tables(config, {"table3"});
    if (fit->parsed()) {
      std::vector<std::string> tables;
      if (config.run_fd) tables.push_back("table4");
      if (config.run_within) tables.push_back("table5");
      return run_tables(config, tables);
    }
    if (replicate->parsed()) return run_replicate(config);
    if (mc->parsed()) return run_mc(config, size_reps, power_reps);
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return error_exit_code(err.code());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
