#pragma once

#include <iosfwd>
#include <string>

#include "dmf/sim.hpp"

namespace dmf {

/// 6 significant digits, locale-independent, "nan" for missing values.
std::string format_number(double v);

/// measurements_per_node,stress,mae,ree_p50,ree_p90 with one row per
/// snapshot. LF line endings; byte-identical for identical results.
void write_run_csv(const SimResult& result, std::ostream& out);

/// Side-by-side stress/MAE columns for the three methods, aligned by
/// snapshot. All three results must come from configs with equal measurement
/// budgets.
void write_compare_csv(const SimResult& dmfsgd, const SimResult& vivaldi,
                       const SimResult& landmark, std::ostream& out);

}  // namespace dmf
