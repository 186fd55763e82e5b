#include "nongauss/optimize.hpp"

#include "nongauss/errors.hpp"
#include "nongauss/resources.hpp"
#include "nongauss/teleport.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

namespace nongauss {

OptResult maximize_1d(const std::function<double(double)>& f, double lo, double hi, const OptOptions& opts) {
  if (!(hi >= lo)) throw InvalidArgument(fmt::format("maximize_1d: empty interval [{}, {}]", lo, hi));
  if (opts.grid_points < 3) throw InvalidArgument("maximize_1d: need at least 3 grid points");
  OptResult res;
  auto eval = [&](double x) {
    const double v = f(x);
    res.trace.emplace_back(x, v);
    return v;
  };

  const int n = opts.grid_points;
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> fs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    fs[static_cast<std::size_t>(i)] = eval(xs[static_cast<std::size_t>(i)]);
  }
  const auto best_it = std::max_element(fs.begin(), fs.end());
  const auto best = static_cast<std::size_t>(best_it - fs.begin());
  const auto [min_it, max_it] = std::minmax_element(fs.begin(), fs.end());
  res.plateau = *max_it - *min_it <= opts.plateau_tol * std::max(1.0, std::abs(*max_it));

  // Rising ends are boundary maxima, not peaks; only interior maxima count.
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < fs.size(); ++i) {
    if (fs[i] > fs[i - 1] + opts.plateau_tol && fs[i] > fs[i + 1] + opts.plateau_tol) ++peaks;
  }
  res.multi_peak = peaks > 1;

  if (res.plateau || hi == lo) {
    res.s_star = xs[best];
    res.f_star = fs[best];
    res.bracket = {xs[best], xs[best]};
    return res;
  }

  double a = xs[best == 0 ? 0 : best - 1];
  double b = xs[std::min(best + 1, xs.size() - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c);
  double fd = eval(d);
  while (b - a > opts.bracket_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  res.bracket = {a, b};
  // Leftmost maximizer over every evaluation.
  const auto top = std::max_element(res.trace.begin(), res.trace.end(), [](const auto& p, const auto& q) {
    return p.second < q.second || (p.second == q.second && p.first > q.first);
  });
  res.s_star = top->first;
  res.f_star = top->second;
  return res;
}

double scheme_fidelity(const SchemeConfig& cfg, Detector detector) {
  return fidelity(scheme_state(cfg, detector)).fidelity;
}

OptResult optimize_s(const SchemeConfig& cfg, Detector detector, const OptOptions& opts) {
  cfg.validate();
  return maximize_1d(
      [&](double s) {
        SchemeConfig c = cfg;
        c.s = s;
        return scheme_fidelity(c, detector);
      },
      0.0, cfg.r, opts);
}

OptResult optimize_delta(double r, const OptOptions& opts) {
  return maximize_1d(
      [r](double d) { return fidelity(theoretical_state(Family::squeezed_bell, r, d)).fidelity; }, 0.0,
      std::numbers::pi / 2, opts);
}

std::string to_string(Axis a) {
  switch (a) {
    case Axis::s:
      return "s";
    case Axis::r:
      return "r";
    case Axis::loss:
      return "loss";
    case Axis::T:
      return "T";
    case Axis::eta:
      return "eta";
  }
  return "unknown";
}

std::optional<Axis> parse_axis(std::string_view name) {
  for (Axis a : {Axis::s, Axis::r, Axis::loss, Axis::T, Axis::eta}) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

SchemeConfig apply_axis(const SchemeConfig& base, Axis axis, double value) {
  SchemeConfig c = base;
  switch (axis) {
    case Axis::s:
      c.s = value;
      break;
    case Axis::r:
      c.r = value;
      break;
    case Axis::loss:
      c.T_loss = 1.0 - value;
      break;
    case Axis::T:
      c.T1 = c.T2 = value;
      break;
    case Axis::eta:
      c.eta3 = c.eta4 = value;
      break;
  }
  return c;
}

void validate(const SweepSpec& spec) {
  if (spec.grid.empty()) throw InvalidArgument("sweep: grid is empty");
  for (std::size_t i = 1; i < spec.grid.size(); ++i) {
    if (!(spec.grid[i] > spec.grid[i - 1])) throw InvalidArgument("sweep: grid must be strictly increasing");
  }
  const double lo = spec.grid.front();
  const double hi = spec.grid.back();
  auto range = [&](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(fmt::format("sweep: {} grid [{}, {}] outside {}", to_string(spec.axis), lo, hi, what));
  };
  switch (spec.axis) {
    case Axis::s:
    case Axis::r:
      range(lo >= 0.0 && std::isfinite(hi), "[0, inf)");
      break;
    case Axis::loss:
      range(lo >= 0.0 && hi < 1.0, "[0, 1)");
      break;
    case Axis::T:
    case Axis::eta:
      range(lo > 0.0 && hi <= 1.0, "(0, 1]");
      break;
  }
  if (spec.jobs < 1) throw InvalidArgument("sweep: jobs must be >= 1");
  spec.base.validate();
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  validate(spec);
  std::vector<SweepRow> rows(spec.grid.size());
  parallel_for(rows.size(), spec.jobs, [&](std::size_t i) {
    SweepRow& row = rows[i];
    row.value = spec.grid[i];
    try {
      SchemeConfig cfg = apply_axis(spec.base, spec.axis, row.value);
      if (spec.nested && spec.axis != Axis::s) {
        const OptResult opt = optimize_s(cfg, spec.detector, spec.opt);
        cfg.s = opt.s_star;
        row.s_star = opt.s_star;
      }
      const ResourceState st = scheme_state(cfg, spec.detector);
      row.fidelity = fidelity(st).fidelity;
      row.success_prob = st.success_prob;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace nongauss
