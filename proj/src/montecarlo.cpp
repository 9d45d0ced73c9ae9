#include "panelkit/montecarlo.hpp"

#include <atomic>
#include <mutex>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "panelkit/estimators.hpp"
#include "panelkit/spec_tests.hpp"

namespace panelkit::mc {

namespace {

constexpr double kAlpha = 0.05;

std::string unit_name(int i) {
  // U00, U01, ... keeps unit ordering stable under string sort.
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U%02d", i);
  return buf;
}

struct DrawnPanel {
  std::vector<Record> records;

  void add(int unit, int year, const std::string& var, double value) {
    records.push_back({unit_name(unit), year, var, value});
  }
};

/// y = 1 + 0.5 x1 - 0.3 x2 + loading * u_i + e, with x_j = x_level * mu_{ij}
/// + noise. `effect_sd` scales u_i; `effect_correlation` ties u_i to the unit
/// level of x1; `x_level` controls how much unit structure the regressors
/// carry (0 keeps them i.i.d., matching a null with zero group structure).
PanelDataset effects_panel(Rng& rng, const StudyShape& shape, double effect_sd,
                           double effect_correlation, double x_level = 1.0) {
  DrawnPanel panel;
  for (int i = 0; i < shape.n_units; ++i) {
    double mu1 = rng.normal();
    double mu2 = rng.normal();
    double effect = 0.0;
    if (effect_sd > 0) {
      double independent = rng.normal();
      effect = effect_sd * (effect_correlation * mu1 +
                            std::sqrt(1.0 - effect_correlation * effect_correlation) * independent);
    }
    for (int t = 0; t < shape.n_periods; ++t) {
      int year = shape.first_year + t;
      double x1 = x_level * mu1 + rng.normal();
      double x2 = x_level * mu2 + rng.normal();
      double y = 1.0 + 0.5 * x1 - 0.3 * x2 + effect + rng.normal();
      panel.add(i, year, "y", y);
      panel.add(i, year, "x1", x1);
      panel.add(i, year, "x2", x2);
    }
  }
  return PanelDataset::build(panel.records);
}

ModelSpec level_spec(VcovKind vcov) {
  ModelSpec spec;
  spec.dependent = "y";
  spec.regressors = {"x1", "x2"};
  spec.lag = 0;
  spec.vcov = vcov;
  return spec;
}

}  // namespace

RejectionRate run_experiment(int replications, std::uint64_t seed,
                             const std::function<bool(Rng&)>& one_rep) {
  std::atomic<int> rejections{0};
  unsigned n_threads = std::max(1u, std::min(4u, std::thread::hardware_concurrency()));
  std::vector<std::thread> workers;
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < n_threads; ++w) {
    workers.emplace_back([&] {
      try {
        for (int rep = next.fetch_add(1); rep < replications; rep = next.fetch_add(1)) {
          Rng rng(splitmix64(seed + static_cast<std::uint64_t>(rep)));
          if (one_rep(rng)) rejections.fetch_add(1);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(replications);  // drain remaining work
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
  return {rejections.load(), replications};
}

RejectionRate honda_individual_size(int replications, std::uint64_t seed, StudyShape shape) {
  return run_experiment(replications, seed, [shape](Rng& rng) {
    PanelDataset ds = effects_panel(rng, shape, /*effect_sd=*/0.0, 0.0, /*x_level=*/0.0);
    ModelSpec spec = level_spec(VcovKind::classical);
    spec.estimator = Estimator::pooled;
    RegressionResult pooled = fit_pooled(ds, spec);
    return honda_lm(pooled, EffectType::individual).p_value < kAlpha;
  });
}

RejectionRate breusch_pagan_size(int replications, std::uint64_t seed, StudyShape shape) {
  return run_experiment(replications, seed, [shape](Rng& rng) {
    PanelDataset ds = effects_panel(rng, shape, /*effect_sd=*/0.0, 0.0, /*x_level=*/0.0);
    ModelSpec spec = level_spec(VcovKind::classical);
    spec.estimator = Estimator::pooled;
    RegressionResult pooled = fit_pooled(ds, spec);
    return breusch_pagan_het(pooled).p_value < kAlpha;
  });
}

RejectionRate wooldridge_levels_null_size(int replications, std::uint64_t seed, StudyShape shape) {
  return run_experiment(replications, seed, [shape](Rng& rng) {
    // i.i.d. level errors with genuine unit effects; differences kill the
    // effects and leave rho = -0.5 in the differenced errors.
    PanelDataset ds = effects_panel(rng, shape, /*effect_sd=*/1.0, 0.0);
    ModelSpec spec = level_spec(VcovKind::arellano);
    RegressionResult fd = fit_first_differences(ds, spec);
    return wooldridge_fd_serial(fd, SerialNull::level_errors_uncorrelated).p_value < kAlpha;
  });
}

RejectionRate wooldridge_fd_null_power(int replications, std::uint64_t seed, StudyShape shape) {
  return run_experiment(replications, seed, [shape](Rng& rng) {
    PanelDataset ds = effects_panel(rng, shape, /*effect_sd=*/1.0, 0.0);
    ModelSpec spec = level_spec(VcovKind::arellano);
    RegressionResult fd = fit_first_differences(ds, spec);
    return wooldridge_fd_serial(fd, SerialNull::fd_errors_uncorrelated).p_value < kAlpha;
  });
}

RejectionRate hausman_size(int replications, std::uint64_t seed, StudyShape shape) {
  return run_experiment(replications, seed, [shape](Rng& rng) {
    PanelDataset ds = effects_panel(rng, shape, /*effect_sd=*/1.0, /*effect_correlation=*/0.0);
    return hausman_aux(ds, level_spec(VcovKind::arellano)).p_value < kAlpha;
  });
}

RejectionRate hausman_power(int replications, std::uint64_t seed, double effect_correlation,
                            StudyShape shape) {
  return run_experiment(replications, seed, [shape, effect_correlation](Rng& rng) {
    PanelDataset ds = effects_panel(rng, shape, /*effect_sd=*/1.0, effect_correlation);
    return hausman_aux(ds, level_spec(VcovKind::arellano)).p_value < kAlpha;
  });
}

}  // namespace panelkit::mc
