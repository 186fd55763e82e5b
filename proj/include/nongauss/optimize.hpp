#pragma once

// Maximizing the teleportation fidelity over the ancillary squeezing, and
// sweeps of the scheme over one parameter.

#include "nongauss/family.hpp"
#include "nongauss/scheme_config.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nongauss {

struct OptOptions {
  int grid_points{41};
  double bracket_tol{1e-4};
  double plateau_tol{1e-12};
};

struct OptResult {
  double s_star{0.0};  // maximizer (s, or delta for optimize_delta)
  double f_star{0.0};
  std::vector<std::pair<double, double>> trace;  // every evaluation, in order
  std::pair<double, double> bracket{0.0, 0.0};
  bool plateau{false};     // coarse grid flat to plateau_tol
  bool multi_peak{false};  // more than one interior local maximum on the grid
};

// Coarse grid on [lo, hi], then golden section between the neighbours of the
// best grid point.
OptResult maximize_1d(const std::function<double(double)>& f, double lo, double hi, const OptOptions& opts = {});

double scheme_fidelity(const SchemeConfig& cfg, Detector detector);

// max over s in [0, r] of the scheme fidelity at fixed phases and T.
OptResult optimize_s(const SchemeConfig& cfg, Detector detector, const OptOptions& opts = {});

// max over delta in [0, pi/2] of the theoretical squeezed Bell fidelity.
OptResult optimize_delta(double r, const OptOptions& opts = {});

enum class Axis { s, r, loss, T, eta };

std::string to_string(Axis a);
std::optional<Axis> parse_axis(std::string_view name);

struct SweepSpec {
  SchemeConfig base;
  Axis axis{Axis::s};
  std::vector<double> grid;
  Detector detector{Detector::ideal};
  bool nested{false};  // re-optimize s at every grid point (axis != s)
  int jobs{1};
  OptOptions opt;
};

struct SweepRow {
  double value{0.0};
  std::optional<double> fidelity;
  std::optional<double> success_prob;
  std::optional<double> s_star;
  std::string error;  // empty on success
};

// The configuration used at one grid point; loss sets T_loss = 1 - value,
// T sets T1 = T2, eta sets both detectors.
SchemeConfig apply_axis(const SchemeConfig& base, Axis axis, double value);

// Throws InvalidArgument for an empty, unordered or out-of-range grid.
void validate(const SweepSpec& spec);

// One row per grid point in grid order; per-point failures land in the row.
std::vector<SweepRow> sweep(const SweepSpec& spec);

// Runs fn(i) for i in [0, n) on up to jobs threads.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace nongauss
