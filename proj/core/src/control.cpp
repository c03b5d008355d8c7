#include "packetscore/control.hpp"

#include <algorithm>
#include <cmath>

#include "packetscore/errors.hpp"

namespace packetscore {

double score_bound(double epsilon) {
  return (static_cast<double>(kAttributeCount) + 1.0) * std::abs(std::log(epsilon));
}

ScoreCdf::ScoreCdf(std::int64_t period, double min, double max, std::size_t bin_count)
    : period_id(period), score_min(min), score_max(max), bins(bin_count) {
  counts.assign(bins + 2, 0);
}

double ScoreCdf::edge(std::size_t k) const {
  return score_min + (score_max - score_min) *
                         (static_cast<double>(k) / static_cast<double>(bins));
}

std::size_t ScoreCdf::bin_index(Score s) const {
  if (s.value < score_min) return 0;
  if (s.value >= score_max) return bins + 1;
  double width = (score_max - score_min) / static_cast<double>(bins);
  auto k = static_cast<std::size_t>((s.value - score_min) / width);
  // Rounding at the seam can push k to bins; clamp into the interior.
  return std::min(k, bins - 1) + 1;
}

ScoreCdf make_score_cdf(std::int64_t period_id, double epsilon, std::size_t bins) {
  double bound = score_bound(epsilon);
  return ScoreCdf(period_id, -bound, bound, bins);
}

void cdf_insert(ScoreCdf& cdf, Score s) {
  ++cdf.counts[cdf.bin_index(s)];
  ++cdf.total;
}

ThresholdState compute_threshold(const ScoreCdf& cdf, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) {
    throw InvalidFractionError("discard fraction must lie in [0, 1]");
  }
  ThresholdState state;
  state.phi = phi;
  state.source_period = cdf.period_id;
  if (phi == 0.0) {
    state.kind = Cutoff::None;
    return state;
  }
  if (phi == 1.0) {
    state.kind = Cutoff::All;
    return state;
  }
  if (cdf.total == 0) {
    state.kind = Cutoff::None;  // fail open: no history, no discarding
    return state;
  }
  std::uint64_t cumulative = 0;
  for (std::size_t bin = 0; bin <= cdf.bins; ++bin) {
    cumulative += cdf.counts[bin];
    double fraction = static_cast<double>(cumulative) / static_cast<double>(cdf.total);
    if (fraction >= phi) {
      state.kind = Cutoff::Value;
      state.thd = cdf.edge(bin);  // upper edge of counts[bin] (bin 0 has none below it)
      return state;
    }
  }
  state.kind = Cutoff::All;  // quantile sits in the above-range overflow bin
  return state;
}

bool should_discard(const ThresholdState& threshold, Score s) {
  switch (threshold.kind) {
    case Cutoff::None: return false;
    case Cutoff::All: return true;
    case Cutoff::Value: return s.value < threshold.thd;
  }
  return false;
}

double load_shed(const LoadShedInput& input) {
  if (input.arrival_rate <= 0.0) return 0.0;
  double phi = 1.0 - (input.target_capacity * input.max_utilization) / input.arrival_rate;
  return std::clamp(phi, 0.0, 1.0);
}

}  // namespace packetscore
