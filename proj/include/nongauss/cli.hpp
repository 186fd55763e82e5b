#pragma once

// Command-line front end. run() is the whole program; main() only forwards to it.

#include "nongauss/scheme_config.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nongauss::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDegenerate = 4;

using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Dataset {
  std::string name;
  Table table;
  nlohmann::json meta;  // written to the sidecar next to the CSV
};

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json config_to_json(const SchemeConfig& cfg);
// Keys absent from j keep their value in base. Unknown keys are rejected.
SchemeConfig config_from_json(const nlohmann::json& j, SchemeConfig base = {});

// "a:b:step" (inclusive) or a comma-separated list.
std::vector<double> parse_grid(std::string_view text);

// Six significant digits, '.' decimal point, no locale.
std::string format_number(double v);
std::string to_csv(const Table& t);

// Reproduction datasets: table2, fig3 ... fig7.
std::vector<std::string> reproduce_targets();
Dataset reproduce(std::string_view target, int jobs = 1);

}  // namespace nongauss::cli
