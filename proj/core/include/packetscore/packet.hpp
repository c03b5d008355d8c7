#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace packetscore {

/// Simulator-side label. The filter path never reads it; it exists so a
/// trace run can be graded after the fact.
enum class GroundTruth : std::uint8_t { Legitimate, Attack, Unknown };

/// Sentinel for tcp_flags on non-TCP packets. Real flag bytes occupy 0..255.
inline constexpr std::uint16_t kNoTcpFlags = 0x100;

/// Sentinel for dst_port on packets that carry no L4 port. Real ports
/// occupy 0..65535.
inline constexpr std::uint32_t kNoPort = 0x10000;

inline constexpr std::uint8_t kProtoIcmp = 1;
inline constexpr std::uint8_t kProtoTcp = 6;
inline constexpr std::uint8_t kProtoUdp = 17;

/// One packet reduced to the header fields the filter scores.
/// Invariants: tcp_flags == kNoTcpFlags iff protocol != TCP, and
/// dst_port == kNoPort iff protocol is neither TCP nor UDP.
struct PacketRecord {
  double timestamp = 0.0;  // seconds since trace start, non-decreasing
  std::uint32_t src_ip = 0;  // IPv4, host byte order
  std::uint8_t protocol = kProtoTcp;
  std::uint16_t packet_size = 40;  // IP length in bytes, 20..65535
  std::uint8_t ttl = 64;
  std::uint16_t tcp_flags = 0;
  std::uint32_t dst_port = 0;
  GroundTruth ground_truth = GroundTruth::Unknown;
};

/// The six scored header attributes. Declaration order is canonical: it
/// fixes scorebook layout and the summation order of a score, so results
/// are bitwise reproducible.
enum class AttributeKind : std::uint8_t {
  PacketSize = 0,
  Ttl,
  Protocol,
  SrcPrefix,
  TcpFlags,
  ServerPort,
};

inline constexpr std::size_t kAttributeCount = 6;

inline constexpr std::array<AttributeKind, kAttributeCount> kAllAttributes = {
    AttributeKind::PacketSize, AttributeKind::Ttl,      AttributeKind::Protocol,
    AttributeKind::SrcPrefix,  AttributeKind::TcpFlags, AttributeKind::ServerPort,
};

const char* attribute_name(AttributeKind kind);
std::optional<AttributeKind> attribute_from_name(std::string_view name);

/// How raw header fields map onto discrete buckets. Packets with equal
/// bucketings are indistinguishable to the filter, so these knobs set the
/// granularity/memory trade-off.
struct BucketConfig {
  /// Ascending size boundaries; bucket i holds sizes in [edges[i-1], edges[i]),
  /// with an extra bucket for sizes at or above the last edge.
  std::vector<std::uint16_t> size_bucket_edges = {64, 128, 256, 512, 1024, 1514};
  std::uint32_t ttl_bucket_width = 8;  // 1..256
  std::uint32_t src_prefix_len = 16;   // 0..32
  /// When set, this attribute pair is profiled jointly and its two
  /// single-attribute tables drop out of scoring.
  std::optional<std::pair<AttributeKind, AttributeKind>> joint_pair;

  bool operator==(const BucketConfig&) const = default;
};

/// Returns a complaint when the config is unusable, nullopt when fine.
std::optional<std::string> validate(const BucketConfig& cfg);

/// Domain size of `kind` under `cfg`, counting the reserved NOT_APPLICABLE
/// bucket where the attribute has one (tcp_flags, server_port).
std::size_t bucket_count(AttributeKind kind, const BucketConfig& cfg);

/// Total map from a packet's field to a bucket in [0, bucket_count(kind, cfg)).
/// NOT_APPLICABLE fields land in the last bucket of their attribute. Pure in
/// the packet's header fields; never reads ground_truth.
std::size_t bucketize(const PacketRecord& packet, AttributeKind kind,
                      const BucketConfig& cfg);

/// Flattened domain size and index for the configured joint pair.
/// Precondition: cfg.joint_pair is set.
std::size_t joint_bucket_count(const BucketConfig& cfg);
std::size_t joint_bucketize(const PacketRecord& packet, const BucketConfig& cfg);

}  // namespace packetscore
