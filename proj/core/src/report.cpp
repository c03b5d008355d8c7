#include "packetscore/report.hpp"

#include <chrono>

#include "packetscore/errors.hpp"
#include "packetscore/trace.hpp"
#include "serial_common.hpp"

namespace packetscore {

double PeriodStats::realized_discard() const {
  return packets == 0 ? 0.0
                      : static_cast<double>(discarded) / static_cast<double>(packets);
}

std::optional<double> PeriodStats::false_positive_rate() const {
  if (legit_total == 0) return std::nullopt;
  return static_cast<double>(legit_discarded) / static_cast<double>(legit_total);
}

std::optional<double> PeriodStats::false_negative_rate() const {
  if (attack_total == 0) return std::nullopt;
  return static_cast<double>(attack_passed) / static_cast<double>(attack_total);
}

double PeriodStats::passed_pps() const {
  if (duration_seconds <= 0.0) return 0.0;
  return static_cast<double>(packets - discarded) / duration_seconds;
}

void metrics_update(PeriodStats& stats, GroundTruth truth, bool discarded) {
  ++stats.packets;
  if (discarded) ++stats.discarded;
  if (truth == GroundTruth::Legitimate) {
    ++stats.legit_total;
    if (discarded) ++stats.legit_discarded;
  } else if (truth == GroundTruth::Attack) {
    ++stats.attack_total;
    if (!discarded) ++stats.attack_passed;
  }
}

std::uint64_t RunReport::total_packets() const {
  std::uint64_t sum = 0;
  for (const auto& p : periods) sum += p.packets;
  return sum;
}

std::uint64_t RunReport::total_discarded() const {
  std::uint64_t sum = 0;
  for (const auto& p : periods) sum += p.discarded;
  return sum;
}

double RunReport::total_duration_seconds() const {
  double sum = 0.0;
  for (const auto& p : periods) sum += p.duration_seconds;
  return sum;
}

double RunReport::overall_discard() const {
  std::uint64_t packets = total_packets();
  return packets == 0 ? 0.0
                      : static_cast<double>(total_discarded()) /
                            static_cast<double>(packets);
}

std::optional<double> RunReport::overall_false_positive_rate() const {
  std::uint64_t legit = 0, discarded = 0;
  for (const auto& p : periods) {
    legit += p.legit_total;
    discarded += p.legit_discarded;
  }
  if (legit == 0) return std::nullopt;
  return static_cast<double>(discarded) / static_cast<double>(legit);
}

std::optional<double> RunReport::overall_false_negative_rate() const {
  std::uint64_t attack = 0, passed = 0;
  for (const auto& p : periods) {
    attack += p.attack_total;
    passed += p.attack_passed;
  }
  if (attack == 0) return std::nullopt;
  return static_cast<double>(passed) / static_cast<double>(attack);
}

double RunReport::overall_passed_pps() const {
  double duration = total_duration_seconds();
  if (duration <= 0.0) return 0.0;
  return static_cast<double>(total_packets() - total_discarded()) / duration;
}

RunReport run_pipeline(const NominalProfile& nominal, const RunSettings& settings,
                       const PacketSource& source, const VerdictSink& sink) {
  if (nominal.config != settings.pipeline.buckets) {
    throw ProfileConfigMismatchError(
        "profile bucket configuration disagrees with the run settings");
  }
  auto started = std::chrono::steady_clock::now();

  Pipeline pipeline(nominal, settings.pipeline);
  RunReport report;
  report.seed = settings.seed;

  PeriodStats current;
  const bool time_mode = settings.period.mode == PeriodConfig::Mode::TimeBased;
  const double period_len = settings.period.duration_seconds;
  double period_start = 0.0;
  bool have_start = false;

  // The threshold in force during a period is read back just before
  // rotation; it is constant between rotations.
  auto finalize = [&](double duration) {
    const ThresholdState& threshold = pipeline.active_threshold();
    current.phi = threshold.phi;
    current.cutoff = threshold.kind;
    current.thd = threshold.thd;
    current.duration_seconds = duration;
    report.periods.push_back(current);
  };

  auto rotate = [&](double duration) {
    finalize(duration);
    const PeriodStats& done = report.periods.back();
    LoadShedInput shed;
    shed.arrival_rate =
        duration > 0.0 ? static_cast<double>(done.packets) / duration : 0.0;
    shed.target_capacity = settings.target_capacity_pps;
    shed.current_utilization = done.passed_pps() / settings.target_capacity_pps;
    shed.max_utilization = settings.max_utilization;
    pipeline.rotate_period(shed);
    current = PeriodStats{};
    current.period_id = pipeline.current_period();
  };

  while (auto packet = source()) {
    if (time_mode) {
      if (!have_start) {
        period_start = packet->timestamp;
        have_start = true;
      }
      // A long gap can span several boundaries; empty periods still rotate.
      while (packet->timestamp >= period_start + period_len) {
        rotate(period_len);
        period_start += period_len;
      }
    }
    PacketVerdict verdict = pipeline.process_packet(*packet);
    metrics_update(current, packet->ground_truth, verdict.discarded);
    if (sink) sink(*packet, verdict);
    if (!time_mode && current.packets == settings.period.packet_count) {
      rotate(pipeline.in_progress_profile().duration_seconds());
    }
  }
  if (current.packets > 0) {  // trailing partial period
    finalize(pipeline.in_progress_profile().duration_seconds());
  }

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

NominalProfile profile_packet_stream(const PacketSource& source,
                                     const RunSettings& settings,
                                     bool* saw_attack_labels) {
  const BucketConfig& buckets = settings.pipeline.buckets;
  const bool time_mode = settings.period.mode == PeriodConfig::Mode::TimeBased;
  const double period_len = settings.period.duration_seconds;
  if (saw_attack_labels) *saw_attack_labels = false;

  std::vector<MeasuredProfile> finished;
  MeasuredProfile current = make_measured_profile(0, buckets);
  double period_start = 0.0;
  bool have_start = false;

  auto rotate = [&] {
    finished.push_back(std::move(current));
    current = make_measured_profile(static_cast<std::int64_t>(finished.size()), buckets);
  };

  while (auto packet = source()) {
    if (time_mode) {
      if (!have_start) {
        period_start = packet->timestamp;
        have_start = true;
      }
      while (packet->timestamp >= period_start + period_len) {
        rotate();
        period_start += period_len;
      }
    }
    if (saw_attack_labels && packet->ground_truth == GroundTruth::Attack) {
      *saw_attack_labels = true;
    }
    profile_update(current, *packet);
    if (!time_mode && current.packet_count == settings.period.packet_count) {
      rotate();
    }
  }
  // The trailing partial period would bias nominal_rate low, so it only
  // counts when it is all the training data there is.
  if (current.packet_count > 0 && finished.empty()) {
    finished.push_back(std::move(current));
  }
  return build_nominal(finished, buckets);
}

namespace {

constexpr const char* kReportTag = "packetscore-report";

nlohmann::json settings_to_json(const RunSettings& settings) {
  nlohmann::json j;
  j["buckets"] = detail::config_to_json(settings.pipeline.buckets);
  j["epsilon"] = settings.pipeline.epsilon;
  j["cdf_bins"] = settings.pipeline.cdf_bins;
  nlohmann::json period;
  if (settings.period.mode == PeriodConfig::Mode::CountBased) {
    period["mode"] = "count";
    period["packets"] = settings.period.packet_count;
  } else {
    period["mode"] = "time";
    period["seconds"] = settings.period.duration_seconds;
  }
  j["period"] = std::move(period);
  j["target_capacity_pps"] = settings.target_capacity_pps;
  j["max_utilization"] = settings.max_utilization;
  return j;
}

std::string thd_cell(const PeriodStats& p) {
  switch (p.cutoff) {
    case Cutoff::None: return "none";
    case Cutoff::All: return "all";
    case Cutoff::Value: return format_double(p.thd);
  }
  return "none";
}

}  // namespace

std::string report_to_json(const RunReport& report, const RunSettings& settings) {
  nlohmann::json j;
  j["format"] = kReportTag;
  j["version"] = 1;
  j["seed"] = report.seed;
  j["config"] = settings_to_json(settings);
  nlohmann::json totals;
  totals["packets"] = report.total_packets();
  totals["discarded"] = report.total_discarded();
  totals["discard_fraction"] = report.overall_discard();
  totals["passed_pps"] = report.overall_passed_pps();
  totals["duration_seconds"] = report.total_duration_seconds();
  totals["periods"] = report.periods.size();
  if (auto fpr = report.overall_false_positive_rate()) {
    totals["false_positive_rate"] = *fpr;
  }
  if (auto fnr = report.overall_false_negative_rate()) {
    totals["false_negative_rate"] = *fnr;
  }
  j["totals"] = std::move(totals);
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j.dump(2) + "\n";
}

std::string periods_to_csv(const RunReport& report) {
  std::string csv =
      "period,packets,discarded,phi,thd,realized_discard,false_positive_rate,"
      "false_negative_rate,passed_pps,duration_seconds\n";
  for (const auto& p : report.periods) {
    csv += std::to_string(p.period_id);
    csv += ',';
    csv += std::to_string(p.packets);
    csv += ',';
    csv += std::to_string(p.discarded);
    csv += ',';
    csv += format_double(p.phi);
    csv += ',';
    csv += thd_cell(p);
    csv += ',';
    csv += format_double(p.realized_discard());
    csv += ',';
    if (auto fpr = p.false_positive_rate()) csv += format_double(*fpr);
    csv += ',';
    if (auto fnr = p.false_negative_rate()) csv += format_double(*fnr);
    csv += ',';
    csv += format_double(p.passed_pps());
    csv += ',';
    csv += format_double(p.duration_seconds);
    csv += '\n';
  }
  return csv;
}

std::string periods_csv_path(const std::string& report_path) {
  std::string base = report_path;
  constexpr std::string_view kJson = ".json";
  if (base.size() > kJson.size() &&
      base.compare(base.size() - kJson.size(), kJson.size(), kJson) == 0) {
    base.resize(base.size() - kJson.size());
  }
  return base + ".periods.csv";
}

void write_report_files(const RunReport& report, const RunSettings& settings,
                        const std::string& report_path) {
  detail::write_text_file(report_path, report_to_json(report, settings));
  detail::write_text_file(periods_csv_path(report_path), periods_to_csv(report));
}

}  // namespace packetscore
