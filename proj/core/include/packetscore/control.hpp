#pragma once

#include <cstdint>
#include <vector>

#include "packetscore/scoring.hpp"

namespace packetscore {

inline constexpr std::size_t kDefaultCdfBins = 1024;

/// Largest magnitude a score can take under `epsilon`: one |ln eps| per
/// attribute plus one for the prior. Used to size the CDF range.
double score_bound(double epsilon);

/// Fixed-bin score histogram for one period, queried as a CDF. O(1) insert,
/// O(bins) threshold scan. Interior bin k (1-based in counts) covers
/// [edge(k-1), edge(k)); counts front/back are the below/above-range
/// overflow bins, so counts.size() == bins + 2.
struct ScoreCdf {
  std::int64_t period_id = 0;
  double score_min = 0.0;
  double score_max = 0.0;
  std::size_t bins = kDefaultCdfBins;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  ScoreCdf() : ScoreCdf(0, -score_bound(kDefaultEpsilon), score_bound(kDefaultEpsilon)) {}
  ScoreCdf(std::int64_t period, double min, double max,
           std::size_t bin_count = kDefaultCdfBins);

  /// Equal-width edges; edge(k) for k in 0..bins.
  double edge(std::size_t k) const;
  /// Index into counts; total map, overflow bins catch out-of-range.
  std::size_t bin_index(Score s) const;
};

/// CDF sized to hold every reachable score under `epsilon`.
ScoreCdf make_score_cdf(std::int64_t period_id, double epsilon = kDefaultEpsilon,
                        std::size_t bins = kDefaultCdfBins);

void cdf_insert(ScoreCdf& cdf, Score s);

/// Discard rule for one period. Value-free sentinels cover the endpoints:
/// None passes everything, All drops everything.
enum class Cutoff : std::uint8_t { None, All, Value };

struct ThresholdState {
  Cutoff kind = Cutoff::None;
  double thd = 0.0;  // meaningful only when kind == Value
  double phi = 0.0;  // requested discard fraction
  std::int64_t source_period = -1;
};

/// Smallest bin upper-edge whose cumulative fraction reaches phi, so the
/// realized discard fraction lands within one bin's mass above phi.
/// phi=0 never discards and phi=1 discards everything regardless of the
/// CDF. An empty CDF fails open (None) for any phi < 1. When the phi
/// quantile sits past the last edge, in the above-range overflow bin, no
/// finite edge suffices and the state degrades to All.
/// Throws InvalidFractionError for phi outside [0, 1].
ThresholdState compute_threshold(const ScoreCdf& cdf, double phi);

/// Strictly-below rule: a score equal to the threshold passes.
bool should_discard(const ThresholdState& threshold, Score s);

/// Inputs observed over one finished period, feeding the discard fraction
/// for the next one.
struct LoadShedInput {
  double arrival_rate = 0.0;        // packets/second arriving
  double target_capacity = 1.0;     // packets/second the victim should receive
  double current_utilization = 0.0; // victim load / capacity; kept for
                                    // feedback controllers, unused by the
                                    // proportional one below
  double max_utilization = 1.0;     // utilization ceiling in (0, 1]
};

/// Proportional one-shot shedder: pass at most capacity*max_utilization,
/// drop the excess fraction. clamp(1 - cap*maxu/arrival, 0, 1); zero
/// arrival sheds nothing.
double load_shed(const LoadShedInput& input);

}  // namespace packetscore
