#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "panelkit/estimators.hpp"
#include "panelkit/ingest.hpp"
#include "panelkit/spec_tests.hpp"

// Configuration-driven pipeline runner: assembles the panel, fits the ten
// models with both estimators, runs the test battery and renders tables 2-5
// plus the figure-1 series, deterministically for a given config and inputs.

namespace panelkit {

inline constexpr const char* kVersion = "0.1.0";

enum class TableFormat { csv, markdown };

struct ReplicationConfig {
  std::string data_dir;        // directory of canonical long CSVs
  bool use_fixture = false;
  std::vector<std::string> models = study_dependents();
  bool run_fd = true;
  bool run_within = true;
  VcovKind vcov = VcovKind::arellano;
  int lag = 1;
  std::string out_dir = "out";
  TableFormat format = TableFormat::csv;
  std::uint64_t seed = 1;      // Monte Carlo commands only
  int digits = 4;

  void validate() const;
};

/// Plain `key = value` lines, '#' comments; unknown keys are config errors.
ReplicationConfig load_config_file(const std::string& path);
void apply_config_entry(ReplicationConfig& config, const std::string& key, const std::string& value);

struct ModelReport {
  std::string model;
  TestResult effects_individual;
  TestResult effects_time;
  TestResult serial_diff;      // fd-errors null on the FD fit
  TestResult serial_within;    // level-errors null on the FD fit
  TestResult het_diff;
  TestResult het_within;
  TestResult hausman;
  RegressionResult fd;
  RegressionResult within;
};

struct ReportBundle {
  ShareMatrix table2;
  std::vector<ModelReport> models;
  AnnualAverages figure1;
  std::vector<std::string> regressors;  // column order for tables 4-5
  std::string provenance;
};

struct LoadedData {
  PanelDataset panel;
  CoverageReport coverage;
  std::vector<RejectedRow> rejects;
  std::vector<std::pair<std::string, std::uint64_t>> input_digests;
};

/// Fixture panel or canonical CSVs under data_dir, with per-input digests.
LoadedData load_data(const ReplicationConfig& config);

ReportBundle run_replication(const ReplicationConfig& config);

/// Renders one table ("table2" ... "table5", "figure1") in the requested
/// format with fixed-point numbers at `digits` decimals.
std::string render_table(const ReportBundle& bundle, const std::string& which, TableFormat format,
                         int digits);

/// Writes table2..table5, figure1 and provenance.txt under config.out_dir.
/// Returns the paths written.
std::vector<std::string> write_report_files(const ReportBundle& bundle,
                                            const ReplicationConfig& config);

/// Fixed-point rendering, rounding half away from zero. digits == 0 prints
/// integers without a decimal point.
std::string format_fixed(double value, int digits);

/// FNV-1a 64-bit digest used for provenance blocks.
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace panelkit
