#pragma once

#include <cstdint>

#include "packetscore/control.hpp"
#include "packetscore/profiling.hpp"
#include "packetscore/scoring.hpp"

namespace packetscore {

/// When a period ends. Count-based is the default: it makes desk-scale
/// runs deterministic regardless of timestamp jitter.
struct PeriodConfig {
  enum class Mode : std::uint8_t { CountBased, TimeBased };
  Mode mode = Mode::CountBased;
  std::uint64_t packet_count = 10000;  // CountBased
  double duration_seconds = 1.0;       // TimeBased
};

struct PipelineConfig {
  BucketConfig buckets;
  double epsilon = kDefaultEpsilon;
  std::size_t cdf_bins = kDefaultCdfBins;
};

struct PacketVerdict {
  std::uint64_t packet_id = 0;
  double score = 0.0;
  bool discarded = false;
  std::int64_t period = 0;
};

/// The filter engine: three stages per packet against frozen snapshots.
///
/// Packets of period i update period i's profile and CDF but are scored
/// and discarded using the scorebook and threshold built from period i-1,
/// so there is no same-period feedback. Period 0 is warm-up: identity
/// scorebook, threshold None, nothing discarded. The caller decides when
/// a period ends (see PeriodConfig) and calls rotate_period.
///
/// Single-threaded by design; the stages touch disjoint state, so a
/// stage-parallel variant could run them on separate workers and swap
/// snapshots atomically at rotation without changing observable behavior.
class Pipeline {
public:
  Pipeline(NominalProfile nominal, PipelineConfig cfg);

  /// Profile, score, judge. Returns the verdict for this packet.
  PacketVerdict process_packet(const PacketRecord& packet);

  /// Freezes the in-progress period: its profile becomes the next
  /// scorebook, its CDF plus load_shed(shed_input) become the next
  /// threshold, and a fresh period begins.
  void rotate_period(const LoadShedInput& shed_input);

  std::int64_t current_period() const { return period_; }
  const Scorebook& active_scorebook() const { return book_; }
  const ThresholdState& active_threshold() const { return threshold_; }
  const MeasuredProfile& in_progress_profile() const { return profile_; }
  const ScoreCdf& in_progress_cdf() const { return cdf_; }
  const NominalProfile& nominal() const { return nominal_; }
  const PipelineConfig& config() const { return cfg_; }

private:
  NominalProfile nominal_;
  PipelineConfig cfg_;
  std::int64_t period_ = 0;
  std::uint64_t next_packet_id_ = 0;
  Scorebook book_;            // frozen snapshot from period_-1
  ThresholdState threshold_;  // frozen snapshot from period_-1
  MeasuredProfile profile_;   // in progress for period_
  ScoreCdf cdf_;              // in progress for period_
};

}  // namespace packetscore
