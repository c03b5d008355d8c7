#include "packetscore/profiling.hpp"

#include <algorithm>
#include <stdexcept>

#include "packetscore/errors.hpp"
#include "serial_common.hpp"

namespace packetscore {

AttributeHistogram make_histogram(AttributeKind kind, const BucketConfig& cfg) {
  AttributeHistogram hist;
  hist.kind = kind;
  hist.counts.assign(bucket_count(kind, cfg), 0);
  return hist;
}

void histogram_update(AttributeHistogram& hist, const PacketRecord& packet,
                      const BucketConfig& cfg) {
  ++hist.counts[bucketize(packet, hist.kind, cfg)];
  ++hist.total;
}

MeasuredProfile make_measured_profile(std::int64_t period_id, const BucketConfig& cfg) {
  MeasuredProfile profile;
  profile.period_id = period_id;
  profile.config = cfg;
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    profile.histograms[k] = make_histogram(kAllAttributes[k], cfg);
  }
  if (cfg.joint_pair) profile.joint_counts.assign(joint_bucket_count(cfg), 0);
  return profile;
}

void profile_update(MeasuredProfile& profile, const PacketRecord& packet) {
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    histogram_update(profile.histograms[k], packet, profile.config);
  }
  if (profile.config.joint_pair) {
    ++profile.joint_counts[joint_bucketize(packet, profile.config)];
  }
  if (profile.packet_count == 0) profile.first_timestamp = packet.timestamp;
  profile.last_timestamp = packet.timestamp;
  ++profile.packet_count;
}

NominalProfile build_nominal(const std::vector<MeasuredProfile>& profiles,
                             const BucketConfig& cfg) {
  if (profiles.empty()) {
    throw EmptyTrainingSetError("no training periods to build a nominal profile from");
  }
  NominalProfile out;
  out.config = cfg;
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    out.ratios[k].assign(bucket_count(kAllAttributes[k], cfg), 0.0);
  }
  if (cfg.joint_pair) out.joint_ratios.assign(joint_bucket_count(cfg), 0.0);

  double rate_sum = 0.0;
  double span_sum = 0.0;
  for (const auto& profile : profiles) {
    if (profile.config != cfg) {
      throw ProfileConfigMismatchError(
          "training profiles disagree on bucket configuration");
    }
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
      auto& ratios = out.ratios[k];
      const auto& hist = profile.histograms[k];
      for (std::size_t i = 0; i < ratios.size(); ++i) {
        ratios[i] = std::max(ratios[i], hist.ratio(i));
      }
    }
    if (cfg.joint_pair) {
      for (std::size_t i = 0; i < out.joint_ratios.size(); ++i) {
        out.joint_ratios[i] = std::max(out.joint_ratios[i], joint_profile_ratio(profile, i));
      }
    }
    rate_sum += static_cast<double>(profile.packet_count);
    span_sum += profile.duration_seconds();
  }
  out.nominal_rate = rate_sum / static_cast<double>(profiles.size());
  out.mean_period_seconds = span_sum / static_cast<double>(profiles.size());
  out.source_period_count = profiles.size();
  return out;
}

double profile_ratio(const MeasuredProfile& profile, AttributeKind kind,
                     std::size_t bucket) {
  return profile.histograms[static_cast<std::size_t>(kind)].ratio(bucket);
}

double profile_ratio(const NominalProfile& profile, AttributeKind kind,
                     std::size_t bucket) {
  return profile.ratios[static_cast<std::size_t>(kind)][bucket];
}

double joint_profile_ratio(const MeasuredProfile& profile, std::size_t bucket) {
  return profile.packet_count == 0
             ? 0.0
             : static_cast<double>(profile.joint_counts[bucket]) /
                   static_cast<double>(profile.packet_count);
}

double joint_profile_ratio(const NominalProfile& profile, std::size_t bucket) {
  return profile.joint_ratios[bucket];
}

namespace {
constexpr const char* kProfileTag = "packetscore-profile";
}

std::string nominal_to_json(const NominalProfile& profile) {
  nlohmann::json j;
  j["format"] = kProfileTag;
  j["version"] = 1;
  j["config"] = detail::config_to_json(profile.config);
  j["nominal_rate"] = profile.nominal_rate;
  j["mean_period_seconds"] = profile.mean_period_seconds;
  j["source_period_count"] = profile.source_period_count;
  nlohmann::json ratios = nlohmann::json::object();
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    ratios[attribute_name(kAllAttributes[k])] =
        detail::sparse_from_dense(profile.ratios[k], 0.0);
  }
  j["ratios"] = std::move(ratios);
  if (profile.config.joint_pair) {
    j["joint_ratios"] = detail::sparse_from_dense(profile.joint_ratios, 0.0);
  }
  return j.dump(2) + "\n";
}

NominalProfile nominal_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  detail::expect_format(j, kProfileTag, "profile");
  NominalProfile profile;
  profile.config = detail::config_from_json(j.at("config"));
  profile.nominal_rate = j.at("nominal_rate").get<double>();
  profile.mean_period_seconds = j.at("mean_period_seconds").get<double>();
  profile.source_period_count = j.at("source_period_count").get<std::uint64_t>();
  const auto& ratios = j.at("ratios");
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    AttributeKind kind = kAllAttributes[k];
    profile.ratios[k] = detail::dense_from_sparse(
        ratios.at(attribute_name(kind)), bucket_count(kind, profile.config), 0.0);
  }
  if (profile.config.joint_pair) {
    profile.joint_ratios = detail::dense_from_sparse(
        j.at("joint_ratios"), joint_bucket_count(profile.config), 0.0);
  }
  return profile;
}

void save_nominal(const NominalProfile& profile, const std::string& path) {
  detail::write_text_file(path, nominal_to_json(profile));
}

NominalProfile load_nominal(const std::string& path) {
  return nominal_from_json(detail::read_text_file(path));
}

}  // namespace packetscore
