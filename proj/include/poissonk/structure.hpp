#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "poissonk/params.hpp"
#include "poissonk/pmf.hpp"

namespace poissonk {

inline constexpr Real kDefaultTieTol = 1e-9L;
inline constexpr Real kFigureTieTol = 1e-4L;
inline constexpr Real kDefaultTailTol = 1e-12L;
inline constexpr Real kDefaultEpsilon = 1e-12L;

// Indices attaining the global maximum of the pmf, up to a relative tie
// tolerance: every member m has p_m >= (1 - tie_tol) * max_n p_n.
struct ModeSet {
  std::vector<std::size_t> indices;  // sorted, nonempty
  Real tie_tol;

  [[nodiscard]] std::size_t lowest() const { return indices.front(); }
  [[nodiscard]] std::size_t highest() const { return indices.back(); }
  [[nodiscard]] bool contains(std::size_t n) const;
  [[nodiscard]] bool unique() const { return indices.size() == 1; }
};

// floor(x), except that x within a relative 1e-15 below an integer is taken
// as that integer. kappa*lambda is often an exact integer in intent
// (lambda = 4/3, k = 2) but lands one rounding below it.
[[nodiscard]] std::int64_t tolerant_floor(Real x);

// floor(kappa * lambda) via tolerant_floor.
[[nodiscard]] std::int64_t floor_mean(const Params& params);

// Refuses (InvalidArgument) unless table.tail_settled(), since otherwise the
// true mode could lie past n_max.
[[nodiscard]] ModeSet find_modes(const PmfTable& table, Real tie_tol = kDefaultTieTol);

// Peaks of the histogram. Consecutive values within tie_tol of each other
// form one plateau; a plateau is a peak when both neighbours are lower (n = 0
// only needs the right neighbour) and is reported at its left endpoint.
[[nodiscard]] std::vector<std::size_t> local_maxima(const PmfTable& table,
                                                    Real tie_tol = kDefaultTieTol);

// p_1 = lambda and p_1 < p_2 < ... < p_k. Vacuously true for k = 1.
[[nodiscard]] bool check_initial_increase(const PmfTable& table);

struct MonotoneTail {
  bool nonincreasing;  // p_{n+1} <= p_n (1 + tol) for all k <= n < n_max
  bool strict;         // p_{n+1} < p_n for all k <= n < n_max
  std::optional<std::size_t> first_violation;  // first n+1 with p_{n+1} > p_n (1 + tol)
};

[[nodiscard]] MonotoneTail check_monotone_tail(const PmfTable& table,
                                               Real tol = kDefaultTailTol);

// Mode bounds. With F = floor(kappa lambda):
//   established:  F - kappa + 1 - [k == 1] <= m <= F for every mode m;
//   conjectured:  m >= F - k whenever 0 is not a mode;
//   strict form:  a unique nonzero mode, both members of a consecutive pair,
//                 and the upper of a nonconsecutive pair satisfy m > F - k.
struct ModeBoundAudit {
  std::int64_t floor_mean;
  std::int64_t thm_lower;
  std::int64_t thm_upper;
  std::int64_t conj_lower;
  bool thm21_ok;
  bool conj_lower_ok;   // vacuously true when 0 is a mode
  bool conj_strict_ok;  // vacuously true when 0 is a mode
  bool equality_attained;  // some nonzero mode equals F - k
};

[[nodiscard]] ModeBoundAudit audit_mode_bounds(const Params& params, const ModeSet& modes);

// Hypothesis behind the mean - mode <= k argument, at mode index m:
// p_m >= p_{m+1} >= ... >= p_{m+k}. The weaker sufficient form only asks
// p_{m+k} <= min(p_m, ..., p_{m+k-1}).
struct BlockAssumption {
  std::size_t mode_index;
  bool nonincreasing;
  bool min_condition;
};

// Requires mode_index >= k and mode_index + k <= n_max.
[[nodiscard]] BlockAssumption check_block_assumption(const PmfTable& table,
                                                     std::size_t mode_index);

// kappa * lambda - (highest mode).
[[nodiscard]] Real mean_mode_gap(const Params& params, const ModeSet& modes);

// Maximal run [first, last] of consecutive indices whose values are pairwise
// within tie_tol.
struct TieRun {
  std::size_t first;
  std::size_t last;
  friend bool operator==(const TieRun&, const TieRun&) = default;
};

// Runs of three or more equal bins.
[[nodiscard]] std::vector<TieRun> find_triple_ties(const PmfTable& table,
                                                   Real tie_tol = kDefaultTieTol);

struct AnalysisOptions {
  Real epsilon = kDefaultEpsilon;
  Real tie_tol = kDefaultTieTol;
  Real tail_tol = kDefaultTailTol;
};

struct StructureReport {
  Params params;
  std::size_t n_max;
  Real mass_captured;
  ModeSet mode_set;
  std::vector<std::size_t> local_maxima;
  bool initial_increase_ok;
  bool monotone_tail_from_k;
  bool tail_strict;
  std::optional<std::size_t> first_tail_violation;
  Real mean;
  Real mean_mode_gap;
  ModeBoundAudit mode_bounds;
  bool thm21_ok;
  bool conj_lower_ok;
  // Evaluated at the highest mode when 0 is not a mode; absent otherwise or
  // when the table does not reach mode + k.
  std::optional<BlockAssumption> block_assumption;
  bool block_assumption_ok;
  // mean - mode > k although the block assumption holds at a nonzero mode.
  // Would contradict the derivation; expected never to be set.
  bool gap_flag;
  std::vector<TieRun> triple_ties;
  bool triple_tie_found;
};

// Builds an adaptive table and runs every check on it.
[[nodiscard]] StructureReport analyze(const Params& params, const AnalysisOptions& options = {});
[[nodiscard]] StructureReport analyze_table(const PmfTable& table,
                                            const AnalysisOptions& options = {});

}  // namespace poissonk
