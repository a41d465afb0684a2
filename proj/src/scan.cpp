#include "poissonk/scan.hpp"

#include <cmath>
#include <exception>

#include <fmt/format.h>
#include <omp.h>

#include "poissonk/error.hpp"
#include "poissonk/roots.hpp"

namespace poissonk {
namespace {

ScanRow evaluate_point(const ScanPoint& point, const AnalysisOptions& options) {
  ScanRow row{point, std::nullopt, {}};
  try {
    row.report = analyze(Params(point.k, point.lambda), options);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<Real> make_lambda_grid(const LambdaGrid& grid) {
  if (grid.count == 0) throw InvalidArgument("lambda grid needs count >= 1");
  if (!(grid.start > 0) || !(grid.stop >= grid.start) || !std::isfinite(grid.stop)) {
    throw InvalidArgument(fmt::format("lambda grid needs 0 < start <= stop, got [{}, {}]", grid.start, grid.stop));
  }
  std::vector<Real> out(grid.count);
  if (grid.count == 1) {
    out[0] = grid.start;
    return out;
  }
  const auto steps = static_cast<Real>(grid.count - 1);
  for (std::size_t i = 0; i < grid.count; ++i) {
    const auto t = static_cast<Real>(i) / steps;
    out[i] = grid.spacing == Spacing::kLinear
                 ? grid.start + t * (grid.stop - grid.start)
                 : grid.start * std::pow(grid.stop / grid.start, t);
  }
  out.front() = grid.start;
  out.back() = grid.stop;
  return out;
}

std::vector<ScanPoint> make_scan_points(int k_min, int k_max, LambdaRule rule, const LambdaGrid& grid) {
  if (k_min < 1 || k_max < k_min) {
    throw InvalidArgument(fmt::format("k range needs 1 <= k_min <= k_max, got [{}, {}]", k_min, k_max));
  }
  std::vector<ScanPoint> points;
  if (rule == LambdaRule::kGrid) {
    const auto lambdas = make_lambda_grid(grid);
    for (int k = k_min; k <= k_max; ++k) {
      for (Real lambda : lambdas) points.push_back({k, lambda});
    }
    return points;
  }
  for (int k = std::max(k_min, 2); k <= k_max; ++k) {
    switch (rule) {
      case LambdaRule::kEmpirical: points.push_back({k, lambda_empirical_bound(k)}); break;
      case LambdaRule::kMonotone: points.push_back({k, lambda_monotone_bound(k)}); break;
      case LambdaRule::kShoulder: points.push_back({k, shoulder_lambda(k)}); break;
      case LambdaRule::kGrid: break;
    }
  }
  return points;
}

std::vector<ScanRow> scan_serial(const std::vector<ScanPoint>& points, const AnalysisOptions& options) {
  std::vector<ScanRow> rows;
  rows.reserve(points.size());
  for (const auto& point : points) rows.push_back(evaluate_point(point, options));
  return rows;
}

std::vector<ScanRow> scan_parallel(const std::vector<ScanPoint>& points, const AnalysisOptions& options) {
  std::vector<ScanRow> rows(points.size());
  const auto count = static_cast<std::ptrdiff_t>(points.size());
  // Cost grows with k*lambda, so hand out points dynamically.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    rows[static_cast<std::size_t>(i)] = evaluate_point(points[static_cast<std::size_t>(i)], options);
  }
  return rows;
}

ScanSummary summarize(const std::vector<ScanRow>& rows) {
  ScanSummary s;
  s.points = rows.size();
  for (const auto& row : rows) {
    if (!row.report) {
      ++s.failures;
      continue;
    }
    const auto& r = *row.report;
    const auto k = static_cast<std::size_t>(r.params.k());
    if (!r.thm21_ok) ++s.thm21_violations;
    if (!r.conj_lower_ok) ++s.conj_lower_violations;
    if (!r.mode_bounds.conj_strict_ok) ++s.conj_strict_violations;
    if (!r.mode_set.contains(0) && r.mode_set.lowest() < k) ++s.min_mode_violations;
    if (!r.initial_increase_ok) ++s.initial_increase_violations;
    if (!r.monotone_tail_from_k) ++s.monotone_tail_failures;
    if (r.gap_flag) ++s.gap_flags;
    if (r.triple_tie_found) ++s.triple_ties;
    if (!r.mode_set.unique()) ++s.multimodal;
  }
  return s;
}

}  // namespace poissonk
