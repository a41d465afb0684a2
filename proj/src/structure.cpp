#include "poissonk/structure.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "poissonk/error.hpp"

namespace poissonk {
namespace {

bool nearly_equal(Real a, Real b, Real tie_tol) {
  return std::fabs(a - b) <= tie_tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace

bool ModeSet::contains(std::size_t n) const {
  return std::binary_search(indices.begin(), indices.end(), n);
}

std::int64_t tolerant_floor(Real x) {
  const Real f = std::floor(x);
  const Real slack = 1e-15L * std::max<Real>(1, std::fabs(x));
  return static_cast<std::int64_t>(x - f >= 1 - slack ? f + 1 : f);
}

std::int64_t floor_mean(const Params& params) { return tolerant_floor(params.mean()); }

ModeSet find_modes(const PmfTable& table, Real tie_tol) {
  if (!table.tail_settled()) {
    throw InvalidArgument(fmt::format(
        "table (k = {}, lambda = {}, n_max = {}) does not end in a strictly decreasing run of "
        "k+1 values past n = 2k; the mode may lie beyond n_max",
        table.k(), table.lambda(), table.n_max()));
  }
  const auto values = table.values();
  const Real peak = *std::max_element(values.begin(), values.end());
  ModeSet modes{{}, tie_tol};
  for (std::size_t n = 0; n < values.size(); ++n) {
    if (values[n] >= (1 - tie_tol) * peak) modes.indices.push_back(n);
  }
  return modes;
}

std::vector<std::size_t> local_maxima(const PmfTable& table, Real tie_tol) {
  const auto p = table.values();
  std::vector<std::size_t> peaks;
  std::size_t start = 0;
  while (start < p.size()) {
    std::size_t end = start;
    while (end + 1 < p.size() && nearly_equal(p[end + 1], p[end], tie_tol)) ++end;
    const bool left_lower = start == 0 || p[start - 1] < p[start];
    const bool right_lower = end + 1 == p.size() || p[end + 1] < p[end];
    if (left_lower && right_lower) peaks.push_back(start);
    start = end + 1;
  }
  return peaks;
}

bool check_initial_increase(const PmfTable& table) {
  const auto k = static_cast<std::size_t>(table.k());
  if (k == 1) return true;
  if (table.n_max() < k) {
    throw InvalidArgument(fmt::format("table needs n_max >= k = {} to check p_1 < ... < p_k", k));
  }
  const Real lambda = table.lambda();
  if (std::fabs(table[1] - lambda) > 1e-14L * lambda) return false;
  for (std::size_t n = 2; n <= k; ++n) {
    if (!(table[n - 1] < table[n])) return false;
  }
  return true;
}

MonotoneTail check_monotone_tail(const PmfTable& table, Real tol) {
  const auto k = static_cast<std::size_t>(table.k());
  MonotoneTail out{true, true, std::nullopt};
  for (std::size_t n = k; n < table.n_max(); ++n) {
    if (!(table[n + 1] < table[n])) out.strict = false;
    if (table[n + 1] > table[n] * (1 + tol)) {
      out.nonincreasing = false;
      if (!out.first_violation) out.first_violation = n + 1;
    }
  }
  return out;
}

ModeBoundAudit audit_mode_bounds(const Params& params, const ModeSet& modes) {
  const std::int64_t floor_km = floor_mean(params);
  const std::int64_t k = params.k();
  ModeBoundAudit audit{};
  audit.floor_mean = floor_km;
  audit.thm_upper = floor_km;
  audit.thm_lower = floor_km - params.kappa() + 1 - (k == 1 ? 1 : 0);
  audit.conj_lower = floor_km - k;
  audit.thm21_ok = std::all_of(modes.indices.begin(), modes.indices.end(), [&](std::size_t m) {
    const auto mi = static_cast<std::int64_t>(m);
    return mi >= audit.thm_lower && mi <= audit.thm_upper;
  });

  audit.conj_lower_ok = true;
  audit.conj_strict_ok = true;
  audit.equality_attained = false;
  if (modes.contains(0)) return audit;

  for (std::size_t m : modes.indices) {
    const auto mi = static_cast<std::int64_t>(m);
    if (mi < audit.conj_lower) audit.conj_lower_ok = false;
    if (mi == audit.conj_lower) audit.equality_attained = true;
  }
  // Which members must clear the bound strictly.
  const auto& idx = modes.indices;
  const bool consecutive = idx.back() - idx.front() + 1 == idx.size();
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const bool may_attain = !consecutive && i == 0;
    if (!may_attain && static_cast<std::int64_t>(idx[i]) <= audit.conj_lower) {
      audit.conj_strict_ok = false;
    }
  }
  return audit;
}

BlockAssumption check_block_assumption(const PmfTable& table, std::size_t mode_index) {
  const auto k = static_cast<std::size_t>(table.k());
  if (mode_index < k) {
    throw InvalidArgument(fmt::format("block assumption needs a mode index >= k = {}, got {}", k, mode_index));
  }
  if (mode_index + k > table.n_max()) {
    throw InvalidArgument(fmt::format("block assumption at {} needs n_max >= {}, table has {}", mode_index,
                                      mode_index + k, table.n_max()));
  }
  BlockAssumption out{mode_index, true, true};
  const std::size_t last = mode_index + k;
  for (std::size_t n = mode_index; n < last; ++n) {
    if (table[n + 1] > table[n]) out.nonincreasing = false;
    if (table[last] > table[n]) out.min_condition = false;
  }
  return out;
}

Real mean_mode_gap(const Params& params, const ModeSet& modes) {
  return params.mean() - static_cast<Real>(modes.highest());
}

std::vector<TieRun> find_triple_ties(const PmfTable& table, Real tie_tol) {
  const auto p = table.values();
  std::vector<TieRun> runs;
  std::size_t start = 0;
  while (start < p.size()) {
    std::size_t end = start;
    // Extend while the new value ties with every member of the run.
    while (end + 1 < p.size()) {
      const Real next = p[end + 1];
      bool ties_all = true;
      for (std::size_t i = start; i <= end && ties_all; ++i) ties_all = nearly_equal(p[i], next, tie_tol);
      if (!ties_all) break;
      ++end;
    }
    if (end - start + 1 >= 3) runs.push_back({start, end});
    start = end + 1;
  }
  return runs;
}

StructureReport analyze_table(const PmfTable& table, const AnalysisOptions& options) {
  const Params& params = table.params();
  const ModeSet modes = find_modes(table, options.tie_tol);
  const MonotoneTail tail = check_monotone_tail(table, options.tail_tol);
  const ModeBoundAudit bounds = audit_mode_bounds(params, modes);
  const auto k = static_cast<std::size_t>(params.k());

  std::optional<BlockAssumption> block;
  if (!modes.contains(0) && modes.highest() >= k && modes.highest() + k <= table.n_max()) {
    block = check_block_assumption(table, modes.highest());
  }
  const Real gap = mean_mode_gap(params, modes);
  auto ties = find_triple_ties(table, options.tie_tol);

  StructureReport report{
      .params = params,
      .n_max = table.n_max(),
      .mass_captured = table.mass_captured(),
      .mode_set = modes,
      .local_maxima = local_maxima(table, options.tie_tol),
      .initial_increase_ok = check_initial_increase(table),
      .monotone_tail_from_k = tail.nonincreasing,
      .tail_strict = tail.strict,
      .first_tail_violation = tail.first_violation,
      .mean = params.mean(),
      .mean_mode_gap = gap,
      .mode_bounds = bounds,
      .thm21_ok = bounds.thm21_ok,
      .conj_lower_ok = bounds.conj_lower_ok,
      .block_assumption = block,
      .block_assumption_ok = block.has_value() && block->nonincreasing,
      .gap_flag = block.has_value() && block->nonincreasing && gap > static_cast<Real>(k),
      .triple_ties = ties,
      .triple_tie_found = !ties.empty(),
  };
  return report;
}

StructureReport analyze(const Params& params, const AnalysisOptions& options) {
  return analyze_table(build_adaptive_table(params, options.epsilon), options);
}

}  // namespace poissonk
