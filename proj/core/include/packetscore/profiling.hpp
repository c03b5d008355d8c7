#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "packetscore/packet.hpp"

namespace packetscore {

/// Bucket-value counts of one attribute over one observation period.
struct AttributeHistogram {
  AttributeKind kind = AttributeKind::PacketSize;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  /// counts[bucket]/total; 0 when the histogram is empty.
  double ratio(std::size_t bucket) const {
    return total == 0 ? 0.0
                      : static_cast<double>(counts[bucket]) / static_cast<double>(total);
  }
};

AttributeHistogram make_histogram(AttributeKind kind, const BucketConfig& cfg);
void histogram_update(AttributeHistogram& hist, const PacketRecord& packet,
                      const BucketConfig& cfg);

/// Attribute distributions of all arriving traffic in one period: the
/// measured profile P_m, plus the packet count N_m.
struct MeasuredProfile {
  std::int64_t period_id = 0;
  std::array<AttributeHistogram, kAttributeCount> histograms;
  std::vector<std::uint64_t> joint_counts;  // sized iff config.joint_pair
  std::uint64_t packet_count = 0;           // N_m
  double first_timestamp = 0.0;             // of the packets absorbed
  double last_timestamp = 0.0;
  BucketConfig config;

  /// Wall-clock span of the absorbed packets; 0 until two timestamps exist.
  double duration_seconds() const {
    return packet_count < 2 ? 0.0 : last_timestamp - first_timestamp;
  }
};

MeasuredProfile make_measured_profile(std::int64_t period_id, const BucketConfig& cfg);

/// Feeds one packet into every per-attribute histogram (and the joint
/// histogram when configured): each packet contributes exactly one
/// increment per table.
void profile_update(MeasuredProfile& profile, const PacketRecord& packet);

/// Legitimate-traffic ratios P'_n with the periodic-maximum safety margin.
/// Maximization is deliberately not renormalized, so per attribute the
/// ratios may sum to more than 1; downstream treats scores as ordinal.
struct NominalProfile {
  std::array<std::vector<double>, kAttributeCount> ratios;
  std::vector<double> joint_ratios;  // sized iff config.joint_pair
  double nominal_rate = 0.0;         // expected packets per period (N_n estimate)
  double mean_period_seconds = 0.0;  // mean span of the training periods; 0 = unknown
  std::uint64_t source_period_count = 0;
  BucketConfig config;
};

/// Periodic-max rule: per bucket, the highest ratio seen across training
/// periods; nominal_rate is the mean period packet count.
/// Throws EmptyTrainingSetError on an empty list and
/// ProfileConfigMismatchError when the profiles disagree with cfg.
NominalProfile build_nominal(const std::vector<MeasuredProfile>& profiles,
                             const BucketConfig& cfg);

double profile_ratio(const MeasuredProfile& profile, AttributeKind kind,
                     std::size_t bucket);
double profile_ratio(const NominalProfile& profile, AttributeKind kind,
                     std::size_t bucket);
double joint_profile_ratio(const MeasuredProfile& profile, std::size_t bucket);
double joint_profile_ratio(const NominalProfile& profile, std::size_t bucket);

/// JSON round-trip so a profile learned on one trace can filter another.
/// Ratio arrays are stored sparsely (bucket index → ratio) because the
/// prefix and port domains are wide and mostly zero.
std::string nominal_to_json(const NominalProfile& profile);
NominalProfile nominal_from_json(const std::string& text);
void save_nominal(const NominalProfile& profile, const std::string& path);
NominalProfile load_nominal(const std::string& path);

}  // namespace packetscore
