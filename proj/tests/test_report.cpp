#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "panelkit/fixture.hpp"
#include "panelkit/report.hpp"

using namespace panelkit;
namespace fs = std::filesystem;

TEST_CASE("fixed-point rendering rounds half away from zero") {
  CHECK(format_fixed(7.44585, 4) == "7.4459");  // stored as 7.4458500000000000795...
  CHECK(format_fixed(0.00005, 4) == "0.0001");
  CHECK(format_fixed(-0.00005, 4) == "-0.0001");
  CHECK(format_fixed(-0.00004, 4) == "0.0000");  // never prints -0
  CHECK(format_fixed(2.5, 0) == "3");
  CHECK(format_fixed(-2.5, 0) == "-3");
  CHECK(format_fixed(1.0, 2) == "1.00");
  CHECK(format_fixed(-12.3456, 2) == "-12.35");
  CHECK(format_fixed(0.0, 4) == "0.0000");
  CHECK(format_fixed(123456.0, 0) == "123456");
}

TEST_CASE("config file parsing honors comments and rejects unknown keys") {
  fs::path dir = fs::temp_directory_path() / "panelkit_report_tests";
  fs::create_directories(dir);
  fs::path path = dir / "run.conf";
  {
    std::ofstream out(path);
    out << "# replication run\n"
        << "fixture = true\n"
        << "lag = 1\n"
        << "digits = 4   # table rounding\n"
        << "models = TOTAL, FUND-BES\n"
        << "vcov = arellano\n";
  }
  ReplicationConfig config = load_config_file(path.string());
  CHECK(config.use_fixture);
  CHECK(config.models == std::vector<std::string>{"TOTAL", "FUND-BES"});
  CHECK(config.vcov == VcovKind::arellano);

  fs::path bad = dir / "bad.conf";
  {
    std::ofstream out(bad);
    out << "lags = 1\n";
  }
  CHECK_THROWS_WITH_AS(load_config_file(bad.string()), doctest::Contains("ConfigError"), Error);
}

TEST_CASE("config validation") {
  ReplicationConfig config;
  config.use_fixture = true;
  CHECK_NOTHROW(config.validate());

  ReplicationConfig empty_models = config;
  empty_models.models.clear();
  CHECK_THROWS_AS(empty_models.validate(), Error);

  ReplicationConfig bad_digits = config;
  bad_digits.digits = 11;
  CHECK_THROWS_AS(bad_digits.validate(), Error);

  ReplicationConfig no_data;
  CHECK_THROWS_AS(no_data.validate(), Error);

  ReplicationConfig no_estimator = config;
  no_estimator.run_fd = no_estimator.run_within = false;
  CHECK_THROWS_AS(no_estimator.validate(), Error);
}

namespace {

const ReportBundle& fixture_bundle() {
  static const ReportBundle bundle = [] {
    ReplicationConfig config;
    config.use_fixture = true;
    return run_replication(config);
  }();
  return bundle;
}

}  // namespace

TEST_CASE("fixture replication recovers the planted coefficients") {
  const ReportBundle& bundle = fixture_bundle();
  REQUIRE(bundle.models.size() == 10);
  const ModelReport& total = bundle.models.front();
  CHECK(total.model == "TOTAL");

  const RegressionResult& fd = total.fd;
  REQUIRE(fd.coef_count() == 3);
  FixtureSpec planted;
  CHECK(std::abs(fd.coefficients(1) - planted.wage_coefficient) < 2.0 * fd.std_errors(1));
  CHECK(std::abs(fd.coefficients(2) - planted.oil_coefficient) < 2.0 * fd.std_errors(2));
  CHECK(std::abs(fd.coefficients(0) - planted.intercept) < 3.0 * fd.std_errors(0));

  for (const auto& model : bundle.models) {
    for (const TestResult* test :
         {&model.effects_individual, &model.effects_time, &model.serial_diff,
          &model.serial_within, &model.het_diff, &model.het_within, &model.hausman}) {
      CHECK(test->p_value >= 0.0);
      CHECK(test->p_value <= 1.0);
    }
    CHECK(model.fd.r2 >= 0.0);
    CHECK(model.fd.r2 <= 1.0);
    CHECK(model.within.r2 >= 0.0);
    CHECK(model.within.r2 <= 1.0);
  }
}

TEST_CASE("the fixture panel carries strong individual effects and no time effects") {
  const ModelReport& total = fixture_bundle().models.front();
  CHECK(total.effects_individual.p_value < 0.01);
  CHECK(total.effects_time.p_value > 0.10);
}

TEST_CASE("rendered tables follow the published layout") {
  const ReportBundle& bundle = fixture_bundle();

  std::string table4 = render_table(bundle, "table4", TableFormat::csv, 4);
  std::istringstream lines(table4);
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "model,intercept,intercept_sd,intercept_p,WAGE,WAGE_sd,WAGE_p,OIL,OIL_sd,OIL_p");
  std::string row;
  std::getline(lines, row);
  CHECK(row.substr(0, 6) == "TOTAL,");
  // model name + nine fixed-point numbers
  CHECK(std::count(row.begin(), row.end(), ',') == 9);

  std::string table5 = render_table(bundle, "table5", TableFormat::csv, 4);
  std::istringstream lines5(table5);
  std::getline(lines5, header);
  CHECK(header == "model,WAGE,WAGE_sd,WAGE_p,OIL,OIL_sd,OIL_p");

  std::string table3 = render_table(bundle, "table3", TableFormat::csv, 4);
  CHECK(std::count(table3.begin(), table3.end(), '\n') == 11);  // header + ten models

  std::string markdown = render_table(bundle, "table3", TableFormat::markdown, 4);
  std::istringstream md(markdown);
  std::getline(md, header);
  CHECK(header.front() == '|');
  std::string separator;
  std::getline(md, separator);
  CHECK(separator.find("---") != std::string::npos);
  CHECK(std::count(markdown.begin(), markdown.end(), '\n') == 12);

  CHECK_THROWS_WITH_AS(render_table(bundle, "table9", TableFormat::csv, 4),
                       doctest::Contains("UnknownTableId"), Error);
}

TEST_CASE("every rendered number is the result field rounded half away from zero") {
  const ReportBundle& bundle = fixture_bundle();
  const RegressionResult& fd = bundle.models.front().fd;
  std::string table4 = render_table(bundle, "table4", TableFormat::csv, 4);
  std::istringstream lines(table4);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::istringstream cells(row);
  std::string cell;
  std::getline(cells, cell, ',');  // model name
  for (Index j = 0; j < fd.coef_count(); ++j) {
    std::getline(cells, cell, ',');
    CHECK(cell == format_fixed(fd.coefficients(j), 4));
    std::getline(cells, cell, ',');
    CHECK(cell == format_fixed(fd.std_errors(j), 4));
    std::getline(cells, cell, ',');
    CHECK(cell == format_fixed(fd.p_values(j), 4));
  }
}

TEST_CASE("figure1 renders one row per year and variable with counts") {
  const ReportBundle& bundle = fixture_bundle();
  std::string figure1 = render_table(bundle, "figure1", TableFormat::csv, 4);
  std::istringstream lines(figure1);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "year,variable,mean,count");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row)) ++rows;
  // 15 years x 3 variables, minus the POL-2011 gap never empties a year.
  CHECK(rows == 45);
}

TEST_CASE("two replications render byte-identical tables") {
  ReplicationConfig config;
  config.use_fixture = true;
  ReportBundle a = run_replication(config);
  ReportBundle b = run_replication(config);
  for (const char* which : {"table2", "table3", "table4", "table5", "figure1"})
    CHECK(render_table(a, which, TableFormat::csv, 4) == render_table(b, which, TableFormat::csv, 4));
  CHECK(a.provenance == b.provenance);
}

TEST_CASE("provenance digests change iff the input bytes change") {
  fs::path dir = fs::temp_directory_path() / "panelkit_digest_test";
  fs::create_directories(dir);
  fs::path file = dir / "panel.csv";
  {
    std::ofstream out(file);
    out << "country,year,variable,value\nCZE,2003,TOTAL,1.0\n";
  }
  std::uint64_t before = fnv1a_file(file.string());
  CHECK(before == fnv1a_file(file.string()));
  {
    std::ofstream out(file);
    out << "country,year,variable,value\nCZE,2003,TOTAL,1.5\n";
  }
  CHECK(before != fnv1a_file(file.string()));
}

TEST_CASE("model errors carry the model name and stage") {
  ReplicationConfig config;
  config.use_fixture = true;
  config.models = {"TOTAL", "NOT-A-VARIABLE"};
  try {
    run_replication(config);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("NOT-A-VARIABLE") != std::string::npos);
    CHECK(std::string(err.what()).find("stage") != std::string::npos);
  }
}
