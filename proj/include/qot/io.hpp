#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qot/couplings.hpp"
#include "qot/marginals.hpp"

namespace qot {

inline constexpr const char* kVersion = "0.1.0";

/// "U(a,b)", "N(m,s)", "Exp(rate)", "Bern(p)" or "discrete:<path.csv>".
/// Parse errors carry the column (and line, for CSV files) of the problem.
Marginal parse_marginal(const std::string& text);

/// Discrete CSV with header `point,prob`, rows sorted by point, probabilities
/// summing to 1 within 1e-9.
Marginal read_discrete_csv(const std::string& path);
Marginal parse_discrete_csv(std::istream& in, const std::string& source);

/// Accepts plain integers and scientific notation ("1e6"); the value must be a
/// nonnegative whole number.
std::size_t parse_count(const std::string& text);

/// Shortest round-trip decimal form.
std::string format_double(double v);

using HeaderLines = std::vector<std::pair<std::string, std::string>>;

/// `# key=value` lines.
void write_header(std::ostream& out, const HeaderLines& header);

/// Header `x,y,mass`, one row per nonzero entry.
void write_plan_csv(std::ostream& out, const TransportPlan& plan, const HeaderLines& header = {});
/// Header `x,y`.
void write_samples_csv(std::ostream& out, const std::vector<std::pair<double, double>>& xy,
                       const HeaderLines& header = {});

/// Reads a plan CSV written by write_plan_csv ('#' lines skipped).
TransportPlan read_plan_csv(std::istream& in);

/// Writes to `path` via a temporary sibling and a rename, so a failed run never
/// leaves a partial file behind.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace qot
