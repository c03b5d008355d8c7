#include "packetscore/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "packetscore/errors.hpp"
#include "serial_common.hpp"

namespace packetscore {

namespace {

constexpr const char* kScorebookTag = "packetscore-scorebook";

void check_buildable(const NominalProfile& nominal, const MeasuredProfile& measured,
                     const BucketConfig& cfg, double epsilon) {
  if (nominal.config != cfg || measured.config != cfg) {
    throw ProfileConfigMismatchError(
        "nominal and measured profiles must share the bucket configuration");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
}

bool in_joint_pair(AttributeKind kind, const BucketConfig& cfg) {
  return cfg.joint_pair &&
         (cfg.joint_pair->first == kind || cfg.joint_pair->second == kind);
}

double resolve_n_n(const NominalProfile& nominal, std::optional<double> override_value) {
  return override_value.value_or(nominal.nominal_rate);
}

}  // namespace

Scorebook build_scorebook(const NominalProfile& nominal,
                          const MeasuredProfile& measured, const BucketConfig& cfg,
                          double epsilon, std::optional<double> n_n_estimate) {
  check_buildable(nominal, measured, cfg, epsilon);
  Scorebook book;
  book.period_id = measured.period_id;
  book.epsilon = epsilon;
  book.config = cfg;
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    AttributeKind kind = kAllAttributes[k];
    if (in_joint_pair(kind, cfg)) continue;  // the joint table stands in
    auto& entries = book.entries[k];
    entries.resize(bucket_count(kind, cfg));
    for (std::size_t i = 0; i < entries.size(); ++i) {
      entries[i] = std::log(std::max(profile_ratio(nominal, kind, i), epsilon) /
                            std::max(profile_ratio(measured, kind, i), epsilon));
    }
  }
  if (cfg.joint_pair) {
    book.joint_entries.resize(joint_bucket_count(cfg));
    for (std::size_t i = 0; i < book.joint_entries.size(); ++i) {
      book.joint_entries[i] =
          std::log(std::max(joint_profile_ratio(nominal, i), epsilon) /
                   std::max(joint_profile_ratio(measured, i), epsilon));
    }
  }
  double n_n = std::max(resolve_n_n(nominal, n_n_estimate), 1.0);
  double n_m = std::max(static_cast<double>(measured.packet_count), 1.0);
  book.log_prior = std::log(n_n / n_m);
  return book;
}

Scorebook identity_scorebook(const BucketConfig& cfg, double epsilon) {
  Scorebook book;
  book.period_id = -1;
  book.epsilon = epsilon;
  book.config = cfg;
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    AttributeKind kind = kAllAttributes[k];
    if (in_joint_pair(kind, cfg)) continue;
    book.entries[k].assign(bucket_count(kind, cfg), 0.0);
  }
  if (cfg.joint_pair) book.joint_entries.assign(joint_bucket_count(cfg), 0.0);
  return book;
}

Score score_packet(const Scorebook& book, const PacketRecord& packet,
                   const BucketConfig& cfg) {
  double sum = book.log_prior;
  if (cfg.joint_pair) {
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
      AttributeKind kind = kAllAttributes[k];
      if (in_joint_pair(kind, cfg)) continue;
      sum += book.entries[k][bucketize(packet, kind, cfg)];
    }
    sum += book.joint_entries[joint_bucketize(packet, cfg)];
  } else {
    for (std::size_t k = 0; k < kAttributeCount; ++k) {
      sum += book.entries[k][bucketize(packet, kAllAttributes[k], cfg)];
    }
  }
  return Score{sum};
}

double clp_direct(const PacketRecord& packet, const NominalProfile& nominal,
                  const MeasuredProfile& measured, const BucketConfig& cfg,
                  double epsilon, std::optional<double> n_n_estimate) {
  check_buildable(nominal, measured, cfg, epsilon);
  double n_n = std::max(resolve_n_n(nominal, n_n_estimate), 1.0);
  double n_m = std::max(static_cast<double>(measured.packet_count), 1.0);
  double clp = n_n / n_m;
  for (AttributeKind kind : kAllAttributes) {
    if (in_joint_pair(kind, cfg)) continue;
    std::size_t bucket = bucketize(packet, kind, cfg);
    clp *= std::max(profile_ratio(nominal, kind, bucket), epsilon) /
           std::max(profile_ratio(measured, kind, bucket), epsilon);
  }
  if (cfg.joint_pair) {
    std::size_t bucket = joint_bucketize(packet, cfg);
    clp *= std::max(joint_profile_ratio(nominal, bucket), epsilon) /
           std::max(joint_profile_ratio(measured, bucket), epsilon);
  }
  return clp;
}

std::string scorebook_to_json(const Scorebook& book) {
  nlohmann::json j;
  j["format"] = kScorebookTag;
  j["version"] = 1;
  j["period_id"] = book.period_id;
  j["epsilon"] = book.epsilon;
  j["log_prior"] = book.log_prior;
  j["config"] = detail::config_to_json(book.config);
  nlohmann::json entries = nlohmann::json::object();
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    AttributeKind kind = kAllAttributes[k];
    if (in_joint_pair(kind, book.config)) continue;
    entries[attribute_name(kind)] = detail::sparse_from_dense(book.entries[k], 0.0);
  }
  j["entries"] = std::move(entries);
  if (book.config.joint_pair) {
    j["joint_entries"] = detail::sparse_from_dense(book.joint_entries, 0.0);
  }
  return j.dump(2) + "\n";
}

Scorebook scorebook_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  detail::expect_format(j, kScorebookTag, "scorebook");
  Scorebook book;
  book.config = detail::config_from_json(j.at("config"));
  book.period_id = j.at("period_id").get<std::int64_t>();
  book.epsilon = j.at("epsilon").get<double>();
  book.log_prior = j.at("log_prior").get<double>();
  const auto& entries = j.at("entries");
  for (std::size_t k = 0; k < kAttributeCount; ++k) {
    AttributeKind kind = kAllAttributes[k];
    if (in_joint_pair(kind, book.config)) continue;
    book.entries[k] = detail::dense_from_sparse(
        entries.at(attribute_name(kind)), bucket_count(kind, book.config), 0.0);
  }
  if (book.config.joint_pair) {
    book.joint_entries = detail::dense_from_sparse(
        j.at("joint_entries"), joint_bucket_count(book.config), 0.0);
  }
  return book;
}

void save_scorebook(const Scorebook& book, const std::string& path) {
  detail::write_text_file(path, scorebook_to_json(book));
}

Scorebook load_scorebook(const std::string& path) {
  return scorebook_from_json(detail::read_text_file(path));
}

}  // namespace packetscore
