#include "nongauss/cli.hpp"

#include "nongauss/errors.hpp"
#include "nongauss/family.hpp"
#include "nongauss/optimize.hpp"
#include "nongauss/resources.hpp"
#include "nongauss/teleport.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>

#ifndef NONGAUSS_VERSION
#define NONGAUSS_VERSION "0.0.0"
#endif

namespace nongauss::cli {

namespace {

using json = nlohmann::json;

json tolerances() {
  return {{"fidelity_eval", 1e-9}, {"s_bracket", 1e-4},  {"coarse_grid_points", 41},
          {"quadrature", 1e-9},    {"lambda_max", 6.0},  {"csv_significant_digits", 6}};
}

struct Invocation {
  SchemeConfig cfg;
  std::string family;
  std::string detector;
  std::optional<double> delta;
  std::string axis{"s"};
  std::string grid;
  int jobs{1};
  bool quadrature{false};
  bool s_given{false};
  bool eta_given{false};
};

json invocation_to_json(const Invocation& inv) {
  json j = config_to_json(inv.cfg);
  if (!inv.s_given) j.erase("s");
  if (!inv.family.empty()) j["family"] = inv.family;
  if (!inv.detector.empty()) j["detector"] = inv.detector;
  if (inv.delta) j["delta"] = *inv.delta;
  if (!inv.grid.empty()) {
    j["axis"] = inv.axis;
    j["grid"] = inv.grid;
  }
  j["jobs"] = inv.jobs;
  if (inv.quadrature) j["quadrature"] = true;
  return j;
}

// Every flag is reachable from the command line and from a JSON config file
// under the same key; command-line values win.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  template <class T>
  void add(const std::string& key, const std::string& flag, const std::string& help,
           std::function<void(Invocation&, const T&)> set) {
    auto holder = std::make_shared<T>();
    CLI::Option* opt = app_->add_option(flag, *holder, help);
    entries_.push_back({key, opt, [holder, set](Invocation& inv) { set(inv, *holder); },
                        [set](Invocation& inv, const json& j) { set(inv, j.get<T>()); }});
  }

  void add_flag(const std::string& key, const std::string& flag, const std::string& help,
                std::function<void(Invocation&, bool)> set) {
    auto holder = std::make_shared<bool>(false);
    CLI::Option* opt = app_->add_flag(flag, *holder, help);
    entries_.push_back({key, opt, [holder, set](Invocation& inv) { set(inv, *holder); },
                        [set](Invocation& inv, const json& j) { set(inv, j.get<bool>()); }});
  }

  void resolve(Invocation& inv, const json* file) const {
    if (file != nullptr) {
      for (const auto& [key, value] : file->items()) {
        const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
        if (it == entries_.end()) throw InvalidArgument(fmt::format("unknown config key '{}'", key));
        try {
          it->from_json(inv, value);
        } catch (const json::exception&) {
          throw InvalidArgument(fmt::format("config key '{}' has the wrong type", key));
        }
      }
    }
    for (const auto& e : entries_) {
      if (e.opt->count() > 0) e.from_cli(inv);
    }
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    std::function<void(Invocation&)> from_cli;
    std::function<void(Invocation&, const json&)> from_json;
  };
  CLI::App* app_;
  std::vector<Entry> entries_;
};

void add_scheme_flags(FlagSet& f) {
  using D = const double&;
  f.add<double>("r", "--r", "principal squeezing amplitude", [](Invocation& i, D v) { i.cfg.r = v; });
  f.add<double>("s", "--s", "ancillary squeezing amplitude", [](Invocation& i, D v) {
    i.cfg.s = v;
    i.s_given = true;
  });
  f.add<double>("phi_zeta", "--phi-zeta", "principal squeezing phase", [](Invocation& i, D v) { i.cfg.phi_zeta = v; });
  f.add<double>("phi_xi", "--phi-xi", "ancillary squeezing phase", [](Invocation& i, D v) { i.cfg.phi_xi = v; });
  f.add<double>("T", "--T", "transmissivity of both mixing beam splitters", [](Invocation& i, D v) {
    i.cfg.T1 = v;
    i.cfg.T2 = v;
  });
  f.add<double>("T1", "--T1", "mixing transmissivity, modes 1,3", [](Invocation& i, D v) { i.cfg.T1 = v; });
  f.add<double>("T2", "--T2", "mixing transmissivity, modes 2,4", [](Invocation& i, D v) { i.cfg.T2 = v; });
  f.add<double>("loss", "--loss", "loss level l = 1 - T_loss", [](Invocation& i, D v) { i.cfg.T_loss = 1.0 - v; });
  f.add<double>("T_loss", "--T-loss", "per-mode loss transmissivity", [](Invocation& i, D v) { i.cfg.T_loss = v; });
  f.add<double>("T_thermal", "--T-thermal", "thermal beam splitter transmissivity",
                [](Invocation& i, D v) { i.cfg.T_thermal = v; });
  f.add<double>("n_thermal", "--n-thermal", "thermal environment occupation",
                [](Invocation& i, D v) { i.cfg.n_thermal = v; });
  f.add<double>("eta", "--eta", "efficiency of both on/off detectors", [](Invocation& i, D v) {
    i.cfg.eta3 = v;
    i.cfg.eta4 = v;
    i.eta_given = true;
  });
  f.add<double>("eta3", "--eta3", "efficiency of detector 3", [](Invocation& i, D v) {
    i.cfg.eta3 = v;
    i.eta_given = true;
  });
  f.add<double>("eta4", "--eta4", "efficiency of detector 4", [](Invocation& i, D v) {
    i.cfg.eta4 = v;
    i.eta_given = true;
  });
  f.add_flag("loss_on_ancilla", "--ancilla-loss,!--no-ancilla-loss", "apply the loss channel to modes 3,4 too",
             [](Invocation& i, bool v) { i.cfg.loss_on_ancilla = v; });
  f.add<int>("cutoff", "--cutoff", "Fock truncation for oracle checks", [](Invocation& i, const int& v) {
    i.cfg.cutoff = v;
  });
  f.add<int>("jobs", "--jobs,-j", "worker threads", [](Invocation& i, const int& v) { i.jobs = v; });
}

void add_family_flags(FlagSet& f) {
  f.add<std::string>("family", "--family", "resource family",
                     [](Invocation& i, const std::string& v) { i.family = v; });
  f.add<double>("delta", "--delta", "squeezed Bell angle", [](Invocation& i, const double& v) { i.delta = v; });
}

void add_detector_flag(FlagSet& f) {
  f.add<std::string>("detector", "--detector", "ideal | on-off",
                     [](Invocation& i, const std::string& v) { i.detector = v; });
}

Family require_family(const Invocation& inv) {
  if (inv.family.empty()) throw InvalidArgument("--family is required");
  const auto f = parse_family(inv.family);
  if (!f) throw InvalidArgument(fmt::format("unknown family '{}'", inv.family));
  return *f;
}

Detector resolve_detector(const Invocation& inv) {
  if (!inv.detector.empty()) {
    const auto d = parse_detector(inv.detector);
    if (!d) throw InvalidArgument(fmt::format("unknown detector '{}'", inv.detector));
    return *d;
  }
  if (!inv.family.empty()) {
    if (inv.family == "scheme-realistic") return Detector::on_off;
    if (inv.family == "scheme-ideal") return Detector::ideal;
  }
  return inv.eta_given ? Detector::on_off : Detector::ideal;
}

ResourceState build_resource(const Invocation& inv, Family family) {
  if (is_scheme(family)) {
    return scheme_state(inv.cfg, family == Family::scheme_ideal ? Detector::ideal : Detector::on_off);
  }
  if (family == Family::squeezed_bell && !inv.delta) throw InvalidArgument("squeezed-bell needs --delta");
  return theoretical_state(family, inv.cfg.r, inv.delta);
}

// The squeezed Bell angle a theoretical family corresponds to.
std::optional<double> family_delta(const ResourceState& st) {
  switch (st.family) {
    case Family::twin_beam:
      return 0.0;
    case Family::photon_subtracted:
      return delta_photon_subtracted(st.r);
    case Family::photon_added:
      return delta_photon_added(st.r);
    case Family::squeezed_number:
    case Family::squeezed_bell:
      return st.delta;
    default:
      return std::nullopt;
  }
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

std::string join_notes(const std::vector<std::string>& notes) {
  std::string s;
  for (const auto& n : notes) s += (s.empty() ? "" : "; ") + n;
  return s;
}

Dataset cmd_state(const Invocation& inv) {
  const Family family = require_family(inv);
  const ResourceState st = build_resource(inv, family);
  const bool scheme = is_scheme(family);
  const double t_eff = scheme && family == Family::scheme_realistic ? inv.cfg.T_loss * inv.cfg.T_thermal : 1.0;
  const double r_eff = effective_squeezing(inv.cfg.r, t_eff);
  Dataset d;
  d.name = "state";
  d.table.columns = {"family", "r", "s", "delta", "delta_equivalent", "r_eff", "r_db", "r_eff_db", "success_prob",
                     "kappa", "chi_terms", "notes"};
  d.table.rows.push_back({to_string(family), inv.cfg.r, scheme ? Cell{inv.cfg.s} : Cell{}, opt_cell(family_delta(st)),
                          scheme ? Cell{delta_equivalent(inv.cfg)} : Cell{}, r_eff, squeezing_db(inv.cfg.r),
                          squeezing_db(r_eff), opt_cell(st.success_prob),
                          scheme ? Cell{mixing_angle(inv.cfg.T1)} : Cell{},
                          static_cast<double>(st.chi.terms().size()), join_notes(st.notes)});
  return d;
}

Dataset cmd_fidelity(const Invocation& inv) {
  const Family family = require_family(inv);
  const ResourceState st = build_resource(inv, family);
  const FidelityResult f = fidelity(st, inv.quadrature ? FidelityMethod::both : FidelityMethod::closed_form);
  Dataset d;
  d.name = "fidelity";
  d.table.columns = {"family", "r", "s", "delta", "fidelity", "success_prob", "method", "residual"};
  d.table.rows.push_back({to_string(family), inv.cfg.r, is_scheme(family) ? Cell{inv.cfg.s} : Cell{},
                          opt_cell(family_delta(st)), f.fidelity, opt_cell(st.success_prob), to_string(f.method),
                          f.residual});
  return d;
}

Dataset cmd_optimize(const Invocation& inv) {
  Dataset d;
  d.name = "optimize";
  d.table.columns = {"family", "r", "parameter", "argmax", "f_star", "bracket_lo", "bracket_hi", "evaluations",
                     "plateau", "multi_peak", "success_prob"};
  auto flag = [](bool b) { return Cell{std::string(b ? "true" : "false")}; };
  if (inv.family == "squeezed-bell") {
    const OptResult o = optimize_delta(inv.cfg.r);
    d.table.rows.push_back({std::string("squeezed-bell"), inv.cfg.r, std::string("delta"), o.s_star, o.f_star,
                            o.bracket.first, o.bracket.second, static_cast<double>(o.trace.size()), flag(o.plateau),
                            flag(o.multi_peak), Cell{}});
    return d;
  }
  if (!inv.family.empty() && !is_scheme(require_family(inv))) {
    throw InvalidArgument("optimize supports the scheme families and squeezed-bell");
  }
  const Detector det = resolve_detector(inv);
  const OptResult o = optimize_s(inv.cfg, det);
  SchemeConfig best = inv.cfg;
  best.s = o.s_star;
  const ResourceState st = scheme_state(best, det);
  d.table.rows.push_back({to_string(st.family), inv.cfg.r, std::string("s"), o.s_star, o.f_star, o.bracket.first,
                          o.bracket.second, static_cast<double>(o.trace.size()), flag(o.plateau), flag(o.multi_peak),
                          opt_cell(st.success_prob)});
  return d;
}

Dataset cmd_sweep(const Invocation& inv) {
  const auto axis = parse_axis(inv.axis);
  if (!axis) throw InvalidArgument(fmt::format("unknown axis '{}'", inv.axis));
  if (inv.grid.empty()) throw InvalidArgument("--grid is required");
  SweepSpec spec;
  spec.base = inv.cfg;
  spec.axis = *axis;
  spec.grid = parse_grid(inv.grid);
  spec.detector = resolve_detector(inv);
  spec.nested = *axis != Axis::s && !inv.s_given;
  spec.jobs = inv.jobs;
  const std::vector<SweepRow> rows = sweep(spec);
  Dataset d;
  d.name = "sweep";
  d.table.columns = {to_string(*axis), "fidelity", "success_prob", "s_star", "error"};
  for (const auto& row : rows) {
    d.table.rows.push_back({row.value, opt_cell(row.fidelity), opt_cell(row.success_prob), opt_cell(row.s_star),
                            row.error});
  }
  d.meta["detector"] = to_string(spec.detector);
  d.meta["nested_optimization"] = spec.nested;
  return d;
}

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) {
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return "";
}

json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return std::get<double>(c);
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

json sidecar(const Dataset& d, const std::string& command, const json& invocation) {
  json j = d.meta;
  j["command"] = command;
  j["version"] = NONGAUSS_VERSION;
  j["columns"] = d.table.columns;
  j["tolerances"] = tolerances();
  if (!invocation.is_null()) j["invocation"] = invocation;
  return j;
}

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument(fmt::format("cannot write '{}'", path));
  f << content;
  if (!f) throw InvalidArgument(fmt::format("failed writing '{}'", path));
}

void emit(const Dataset& d, const std::string& format, const std::string& out_path, const json& meta,
          std::ostream& out) {
  if (!out_path.empty()) {
    write_file(out_path, to_csv(d.table));
    write_file(sidecar_path(out_path), meta.dump(2) + "\n");
  }
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : d.table.rows) {
      json r = json::object();
      for (std::size_t k = 0; k < row.size(); ++k) r[d.table.columns[k]] = cell_json(row[k]);
      rows.push_back(r);
    }
    json j = meta;
    j["rows"] = rows;
    out << j.dump(2) << "\n";
  } else if (format == "text" && d.table.rows.size() == 1) {
    std::string line;
    for (std::size_t k = 0; k < d.table.columns.size(); ++k) {
      const std::string v = cell_text(d.table.rows[0][k]);
      if (v.empty()) continue;
      line += (line.empty() ? "" : " ") + d.table.columns[k] + "=" + v;
    }
    out << line << "\n";
  } else {
    out << to_csv(d.table);
  }
}

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InvalidArgument(fmt::format("cannot read config '{}'", path));
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw InvalidArgument(fmt::format("config '{}' is not valid JSON: {}", path, e.what()));
  }
  if (j.contains("invocation")) j = j["invocation"];
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  return j;
}

bool use_color() { return std::getenv("NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) == 1; }

int report(std::ostream& err, int code, const std::string& what) {
  err << (use_color() ? "\033[31merror\033[0m: " : "error: ") << what << "\n";
  return code;
}

// ---- reproduction datasets ----

constexpr double kTable2R[8] = {0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};
constexpr double kTable2S[8] = {0.00057, 0.0046, 0.011, 0.022, 0.036, 0.056, 0.082, 0.12};
constexpr double kFigR[8] = {0.6, 0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};

SchemeConfig realistic_config(double r) {
  SchemeConfig c;
  c.r = r;
  c.T_loss = 0.85;
  c.eta3 = c.eta4 = 0.15;
  return c;
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  const auto n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(lo + step * i);
  return v;
}

// 41 uniform points on [0, r] plus a finer comb near s = 0, where the optimum sits.
std::vector<double> s_grid(double r) {
  std::set<double> pts;
  for (int i = 0; i <= 40; ++i) pts.insert(r * i / 40.0);
  for (double s : range(0.0, std::min(r, 0.2), 0.005)) pts.insert(s);
  return {pts.begin(), pts.end()};
}

Dataset reproduce_table2(int jobs) {
  Dataset d;
  d.name = "table2";
  d.table.columns = {"r", "s_star", "f_star", "s_reference", "f_at_reference", "f_difference", "success_prob"};
  d.table.rows.resize(8);
  parallel_for(8, jobs, [&](std::size_t i) {
    SchemeConfig c;
    c.r = kTable2R[i];
    const OptResult o = optimize_s(c, Detector::ideal);
    SchemeConfig ref = c;
    ref.s = kTable2S[i];
    const double f_ref = scheme_fidelity(ref, Detector::ideal);
    c.s = o.s_star;
    const ResourceState st = scheme_state(c, Detector::ideal);
    d.table.rows[i] = {kTable2R[i], o.s_star, o.f_star, kTable2S[i], f_ref, o.f_star - f_ref, *st.success_prob};
  });
  d.meta["detector"] = "ideal";
  d.meta["config"] = config_to_json(SchemeConfig{});
  return d;
}

Dataset reproduce_s_curves(const std::string& name, bool realistic, int jobs) {
  Dataset d;
  d.name = name;
  d.table.columns = {"series", "s", "fidelity", "success_prob"};
  std::vector<std::vector<std::vector<Cell>>> blocks(8);
  parallel_for(8, jobs, [&](std::size_t i) {
    const double r = kFigR[i];
    SchemeConfig c = realistic ? realistic_config(r) : SchemeConfig{};
    c.r = r;
    const Detector det = realistic ? Detector::on_off : Detector::ideal;
    for (double s : s_grid(r)) {
      c.s = s;
      const ResourceState st = scheme_state(c, det);
      blocks[i].push_back({fmt::format("r={}", format_number(r)), s, fidelity(st).fidelity, *st.success_prob});
    }
  });
  for (auto& b : blocks) d.table.rows.insert(d.table.rows.end(), b.begin(), b.end());
  d.meta["detector"] = realistic ? "on-off" : "ideal";
  d.meta["config"] = config_to_json(realistic ? realistic_config(1.0) : SchemeConfig{});
  d.meta["series_r"] = std::vector<double>(std::begin(kFigR), std::end(kFigR));
  return d;
}

Dataset reproduce_r_curves(const std::string& name, double r_lo, double r_hi, int jobs) {
  Dataset d;
  d.name = name;
  d.table.columns = {"series", "r", "fidelity", "parameter"};
  const std::vector<double> rs = range(r_lo, r_hi, 0.05);
  std::vector<std::vector<std::vector<Cell>>> blocks(rs.size());
  parallel_for(rs.size(), jobs, [&](std::size_t i) {
    const double r = rs[i];
    SchemeConfig c;
    c.r = r;
    const OptResult scheme = optimize_s(c, Detector::ideal);
    c.s = 0.0;
    const double scheme_ps = scheme_fidelity(c, Detector::ideal);
    const OptResult bell = optimize_delta(r);
    const double ps = fidelity(theoretical_state(Family::photon_subtracted, r)).fidelity;
    const double tb = fidelity(theoretical_state(Family::twin_beam, r)).fidelity;
    blocks[i] = {{std::string("scheme-optimized"), r, scheme.f_star, scheme.s_star},
                 {std::string("scheme-photon-subtracted"), r, scheme_ps, 0.0},
                 {std::string("squeezed-bell-optimized"), r, bell.f_star, bell.s_star},
                 {std::string("photon-subtracted"), r, ps, delta_photon_subtracted(r)},
                 {std::string("twin-beam"), r, tb, 0.0}};
  });
  // One series after another.
  for (std::size_t series = 0; series < 5; ++series) {
    for (const auto& b : blocks) d.table.rows.push_back(b[series]);
  }
  d.meta["detector"] = "ideal";
  d.meta["config"] = config_to_json(SchemeConfig{});
  d.meta["notes"] = {"parameter is s* for scheme series and the squeezed Bell angle for theoretical series",
                     "theoretical series are computed here from the family constructions"};
  return d;
}

Dataset reproduce_fig7(int jobs) {
  Dataset d;
  d.name = "fig7";
  d.table.columns = {"series", "loss", "fidelity", "s", "success_prob"};
  const std::vector<double> losses = range(0.0, 0.3, 0.02);
  std::vector<std::vector<std::vector<Cell>>> blocks(losses.size());
  parallel_for(losses.size(), jobs, [&](std::size_t i) {
    SchemeConfig c = realistic_config(1.6);
    c.T_loss = 1.0 - losses[i];
    const OptResult o = optimize_s(c, Detector::on_off);
    auto row = [&](const std::string& label, double s) {
      SchemeConfig ci = c;
      ci.s = s;
      const ResourceState st = scheme_state(ci, Detector::on_off);
      return std::vector<Cell>{label, losses[i], fidelity(st).fidelity, s, *st.success_prob};
    };
    blocks[i] = {row("optimized", o.s_star), row("s=0", 0.0), row("s=r", c.r)};
  });
  for (std::size_t series = 0; series < 3; ++series) {
    for (const auto& b : blocks) d.table.rows.push_back(b[series]);
  }
  d.meta["detector"] = "on-off";
  d.meta["config"] = config_to_json(realistic_config(1.6));
  return d;
}

}  // namespace

json config_to_json(const SchemeConfig& c) {
  return {{"r", c.r},
          {"s", c.s},
          {"phi_zeta", c.phi_zeta},
          {"phi_xi", c.phi_xi},
          {"T1", c.T1},
          {"T2", c.T2},
          {"T_loss", c.T_loss},
          {"T_thermal", c.T_thermal},
          {"n_thermal", c.n_thermal},
          {"eta3", c.eta3},
          {"eta4", c.eta4},
          {"loss_on_ancilla", c.loss_on_ancilla},
          {"cutoff", c.cutoff}};
}

SchemeConfig config_from_json(const json& j, SchemeConfig c) {
  if (!j.is_object()) throw InvalidArgument("scheme config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "r") c.r = v.get<double>();
      else if (key == "s") c.s = v.get<double>();
      else if (key == "phi_zeta") c.phi_zeta = v.get<double>();
      else if (key == "phi_xi") c.phi_xi = v.get<double>();
      else if (key == "T1") c.T1 = v.get<double>();
      else if (key == "T2") c.T2 = v.get<double>();
      else if (key == "T_loss") c.T_loss = v.get<double>();
      else if (key == "T_thermal") c.T_thermal = v.get<double>();
      else if (key == "n_thermal") c.n_thermal = v.get<double>();
      else if (key == "eta3") c.eta3 = v.get<double>();
      else if (key == "eta4") c.eta4 = v.get<double>();
      else if (key == "loss_on_ancilla") c.loss_on_ancilla = v.get<bool>();
      else if (key == "cutoff") c.cutoff = v.get<int>();
      else throw InvalidArgument(fmt::format("unknown scheme config key '{}'", key));
    } catch (const json::exception&) {
      throw InvalidArgument(fmt::format("scheme config key '{}' has the wrong type", key));
    }
  }
  return c;
}

std::vector<double> parse_grid(std::string_view text) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) {
      throw InvalidArgument(fmt::format("bad number '{}' in grid '{}'", s, text));
    }
    return v;
  };
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto p1 = text.find(':');
    const auto p2 = text.find(':', p1 + 1);
    if (p2 == std::string_view::npos || text.find(':', p2 + 1) != std::string_view::npos) {
      throw InvalidArgument(fmt::format("grid '{}' must read start:stop:step", text));
    }
    const double lo = number(text.substr(0, p1));
    const double hi = number(text.substr(p1 + 1, p2 - p1 - 1));
    const double step = number(text.substr(p2 + 1));
    if (!(step > 0.0) || !(hi >= lo)) throw InvalidArgument(fmt::format("grid '{}' is empty", text));
    grid = range(lo, hi, step);
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      const auto comma = text.find(',', start);
      const auto end = comma == std::string_view::npos ? text.size() : comma;
      grid.push_back(number(text.substr(start, end - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return grid;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";
  return fmt::format("{:.6g}", v);
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t k = 0; k < t.columns.size(); ++k) s += (k ? "," : "") + t.columns[k];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) s += (k ? "," : "") + cell_text(row[k]);
    s += "\n";
  }
  return s;
}

std::vector<std::string> reproduce_targets() { return {"table2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

Dataset reproduce(std::string_view target, int jobs) {
  if (target == "table2") return reproduce_table2(jobs);
  if (target == "fig3") return reproduce_s_curves("fig3", false, jobs);
  if (target == "fig4") return reproduce_r_curves("fig4", 0.1, 2.0, jobs);
  if (target == "fig5") return reproduce_r_curves("fig5", 1.0, 2.0, jobs);
  if (target == "fig6") return reproduce_s_curves("fig6", true, jobs);
  if (target == "fig7") return reproduce_fig7(jobs);
  throw InvalidArgument(fmt::format("unknown reproduction target '{}'", target));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tunable non-Gaussian two-mode resources for coherent-state teleportation", "nongauss"};
  app.set_version_flag("--version", NONGAUSS_VERSION);
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::unique_ptr<FlagSet> flags;
    std::string config;
    std::string format;
    std::string out_path;
  };
  std::deque<Command> commands;
  auto make = [&](const char* name, const char* help, const char* default_format) {
    Command c{app.add_subcommand(name, help), nullptr, "", default_format, ""};
    c.flags = std::make_unique<FlagSet>(c.app);
    commands.push_back(std::move(c));
    Command& cmd = commands.back();
    cmd.app->add_option("--config", cmd.config, "JSON file supplying any flag");
    cmd.app->add_option("--format", cmd.format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
    cmd.app->add_option("--out,-o", cmd.out_path, "write CSV here and a .json sidecar next to it");
    add_scheme_flags(*cmd.flags);
    return &cmd;
  };
  Command* state = make("state", "describe a resource state", "text");
  add_family_flags(*state->flags);
  Command* fid = make("fidelity", "teleportation fidelity of a resource", "text");
  add_family_flags(*fid->flags);
  fid->flags->add_flag("quadrature", "--quadrature", "cross-check by numerical quadrature",
                       [](Invocation& i, bool v) { i.quadrature = v; });
  Command* opt = make("optimize", "maximize the fidelity over s (or delta)", "text");
  add_family_flags(*opt->flags);
  add_detector_flag(*opt->flags);
  Command* sw = make("sweep", "fidelity along one parameter axis", "csv");
  add_detector_flag(*sw->flags);
  sw->flags->add<std::string>("axis", "--axis", "s | r | loss | T | eta",
                              [](Invocation& i, const std::string& v) { i.axis = v; });
  sw->flags->add<std::string>("grid", "--grid", "start:stop:step or a comma list",
                              [](Invocation& i, const std::string& v) { i.grid = v; });

  CLI::App* rep = app.add_subcommand("reproduce", "write a reproduction dataset");
  std::string target;
  std::string out_dir = ".";
  int rep_jobs = 1;
  rep->add_option("target", target, "table2 | fig3 | fig4 | fig5 | fig6 | fig7")
      ->required()
      ->check(CLI::IsMember(reproduce_targets()));
  rep->add_option("--out-dir", out_dir, "directory for <target>.csv and <target>.json");
  rep->add_option("--jobs,-j", rep_jobs, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report(err, kExitUsage, e.what());
    return kExitUsage;
  }

  try {
    if (rep->parsed()) {
      const Dataset d = reproduce(target, rep_jobs);
      const std::string base = out_dir + "/" + d.name + ".csv";
      const json meta = sidecar(d, "reproduce " + target, nullptr);
      write_file(base, to_csv(d.table));
      write_file(sidecar_path(base), meta.dump(2) + "\n");
      out << "wrote " << base << " (" << d.table.rows.size() << " rows)\n";
      return kExitOk;
    }
    for (auto& cmd : commands) {
      if (!cmd.app->parsed()) continue;
      Invocation inv;
      json file;
      if (!cmd.config.empty()) file = load_config(cmd.config);
      cmd.flags->resolve(inv, cmd.config.empty() ? nullptr : &file);
      inv.cfg.validate();
      if (inv.jobs < 1) throw InvalidArgument("--jobs must be >= 1");
      const std::string name = cmd.app->get_name();
      if (name == "optimize" || name == "sweep") inv.detector = to_string(resolve_detector(inv));
      Dataset d;
      if (name == "state") d = cmd_state(inv);
      else if (name == "fidelity") d = cmd_fidelity(inv);
      else if (name == "optimize") d = cmd_optimize(inv);
      else d = cmd_sweep(inv);
      emit(d, cmd.format, cmd.out_path, sidecar(d, name, invocation_to_json(inv)), out);
      return kExitOk;
    }
  } catch (const InvalidArgument& e) {
    return report(err, kExitUsage, e.what());
  } catch (const DegeneratePostselection& e) {
    return report(err, kExitDegenerate, e.what());
  } catch (const Error& e) {
    return report(err, kExitNumerical, e.what());
  } catch (const std::exception& e) {
    return report(err, kExitNumerical, e.what());
  }
  return kExitUsage;
}

}  // namespace nongauss::cli
