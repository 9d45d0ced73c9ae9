#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include "panelkit/panel.hpp"

// Monte Carlo size and power experiments for the specification tests, at the
// study's panel shape by default. Every replication draws its own seed from
// the experiment seed, so results do not depend on thread count.

namespace panelkit::mc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with an explicit Box-Muller normal so draws are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0) u1 = uniform();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct StudyShape {
  int n_units = 29;
  int n_periods = 15;
  int first_year = 2003;
};

struct RejectionRate {
  int rejections = 0;
  int replications = 0;

  double rate() const { return replications == 0 ? 0.0 : static_cast<double>(rejections) / replications; }
};

/// Runs `one_rep` for each replication with a derived Rng; counts rejections.
RejectionRate run_experiment(int replications, std::uint64_t seed,
                             const std::function<bool(Rng&)>& one_rep);

// Size experiments (rejection rate at the 5% level under the null).
RejectionRate honda_individual_size(int replications, std::uint64_t seed, StudyShape shape = {});
RejectionRate breusch_pagan_size(int replications, std::uint64_t seed, StudyShape shape = {});
RejectionRate wooldridge_levels_null_size(int replications, std::uint64_t seed, StudyShape shape = {});
RejectionRate hausman_size(int replications, std::uint64_t seed, StudyShape shape = {});

// Power experiments.
RejectionRate hausman_power(int replications, std::uint64_t seed, double effect_correlation = 0.9,
                            StudyShape shape = {});
RejectionRate wooldridge_fd_null_power(int replications, std::uint64_t seed, StudyShape shape = {});

}  // namespace panelkit::mc
