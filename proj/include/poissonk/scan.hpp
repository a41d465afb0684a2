#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "poissonk/structure.hpp"

namespace poissonk {

enum class Spacing { kLinear, kGeometric };

// How lambda is chosen at each k of a scan.
enum class LambdaRule {
  kGrid,       // an explicit (start, stop, count, spacing) grid
  kEmpirical,  // 2 / (k+1)
  kMonotone,   // min{t_k, k!/(2k)^k}
  kShoulder,   // first root of p_{k+1} = p_{k+2}
};

struct LambdaGrid {
  Real start = 0.01L;
  Real stop = 10.0L;
  std::size_t count = 20;
  Spacing spacing = Spacing::kGeometric;
};

// count points from start to stop inclusive; the last point is exactly stop.
[[nodiscard]] std::vector<Real> make_lambda_grid(const LambdaGrid& grid);

struct ScanPoint {
  int k;
  Real lambda;
};

// Grid points in (k ascending, lambda ascending) order. For rule-based
// lambdas there is one point per k; k = 1 is skipped for rules that need
// k >= 2.
[[nodiscard]] std::vector<ScanPoint> make_scan_points(int k_min, int k_max, LambdaRule rule,
                                                      const LambdaGrid& grid = {});

struct ScanRow {
  ScanPoint point;
  std::optional<StructureReport> report;
  std::string error;  // set iff report is empty
};

struct ScanSummary {
  std::size_t points = 0;
  std::size_t failures = 0;
  std::size_t thm21_violations = 0;
  std::size_t conj_lower_violations = 0;
  std::size_t conj_strict_violations = 0;
  std::size_t min_mode_violations = 0;  // nonzero mode below k
  std::size_t initial_increase_violations = 0;
  std::size_t monotone_tail_failures = 0;
  std::size_t gap_flags = 0;
  std::size_t triple_ties = 0;
  std::size_t multimodal = 0;
};

// Reference implementation: one point after another.
[[nodiscard]] std::vector<ScanRow> scan_serial(const std::vector<ScanPoint>& points,
                                               const AnalysisOptions& options = {});

// OpenMP over grid points. Rows come back in input order and are identical
// to scan_serial's.
[[nodiscard]] std::vector<ScanRow> scan_parallel(const std::vector<ScanPoint>& points,
                                                 const AnalysisOptions& options = {});

[[nodiscard]] ScanSummary summarize(const std::vector<ScanRow>& rows);

}  // namespace poissonk
