#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "packetscore/config.hpp"
#include "packetscore/pipeline.hpp"

namespace packetscore {

/// Counters for one period plus the threshold that was in force during it.
/// Ground-truth counters stay zero on unlabeled traffic, in which case the
/// rate accessors return nullopt and reports omit them.
struct PeriodStats {
  std::int64_t period_id = 0;
  std::uint64_t packets = 0;  // N_m
  std::uint64_t discarded = 0;
  double phi = 0.0;
  Cutoff cutoff = Cutoff::None;
  double thd = 0.0;  // meaningful only when cutoff == Value
  double duration_seconds = 0.0;
  std::uint64_t legit_total = 0;
  std::uint64_t legit_discarded = 0;
  std::uint64_t attack_total = 0;
  std::uint64_t attack_passed = 0;

  double realized_discard() const;
  /// legit_discarded / legit_total; nullopt without labeled legit packets.
  std::optional<double> false_positive_rate() const;
  /// attack_passed / attack_total; nullopt without labeled attack packets.
  std::optional<double> false_negative_rate() const;
  double passed_pps() const;
};

/// Feeds one verdict into the counters. Unknown ground truth counts only
/// toward the discard totals.
void metrics_update(PeriodStats& stats, GroundTruth truth, bool discarded);

struct RunReport {
  std::vector<PeriodStats> periods;
  std::uint64_t seed = 0;
  double wall_clock_seconds = 0.0;

  std::uint64_t total_packets() const;
  std::uint64_t total_discarded() const;
  double total_duration_seconds() const;
  double overall_discard() const;
  std::optional<double> overall_false_positive_rate() const;
  std::optional<double> overall_false_negative_rate() const;
  double overall_passed_pps() const;
};

/// Called once per processed packet, in trace order.
using VerdictSink =
    std::function<void(const PacketRecord& packet, const PacketVerdict& verdict)>;

/// Pulls packets until nullopt.
using PacketSource = std::function<std::optional<PacketRecord>()>;

/// Drives a Pipeline over a packet stream: detects period boundaries per
/// settings.period, feeds each boundary's observed arrival rate into the
/// load shedder, and accumulates per-period stats. The pipeline runs under
/// the nominal profile's bucket configuration, which must match
/// settings.pipeline.buckets.
RunReport run_pipeline(const NominalProfile& nominal, const RunSettings& settings,
                       const PacketSource& source, const VerdictSink& sink = {});

/// Training entry point: splits a packet stream into periods per
/// settings.period, builds one MeasuredProfile each, and applies the
/// periodic-max rule. A trailing partial period is dropped unless it is
/// the only period. Ground-truth labels are ignored for the math;
/// *saw_attack_labels (when non-null) reports whether any were "A" so
/// callers can warn. Throws EmptyTrainingSetError on an empty stream.
NominalProfile profile_packet_stream(const PacketSource& source,
                                     const RunSettings& settings,
                                     bool* saw_attack_labels = nullptr);

std::string report_to_json(const RunReport& report, const RunSettings& settings);
std::string periods_to_csv(const RunReport& report);

/// Sibling path for the per-period CSV: out.json -> out.periods.csv.
std::string periods_csv_path(const std::string& report_path);

/// Writes the JSON report to report_path and the period CSV next to it.
void write_report_files(const RunReport& report, const RunSettings& settings,
                        const std::string& report_path);

}  // namespace packetscore
