#include "packetscore/packet.hpp"

#include <algorithm>

namespace packetscore {

const char* attribute_name(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::PacketSize: return "packet_size";
    case AttributeKind::Ttl: return "ttl";
    case AttributeKind::Protocol: return "protocol";
    case AttributeKind::SrcPrefix: return "src_prefix";
    case AttributeKind::TcpFlags: return "tcp_flags";
    case AttributeKind::ServerPort: return "server_port";
  }
  return "unknown";
}

std::optional<AttributeKind> attribute_from_name(std::string_view name) {
  for (AttributeKind kind : kAllAttributes) {
    if (name == attribute_name(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<std::string> validate(const BucketConfig& cfg) {
  if (cfg.size_bucket_edges.empty()) {
    return "size_bucket_edges must not be empty";
  }
  for (std::size_t i = 1; i < cfg.size_bucket_edges.size(); ++i) {
    if (cfg.size_bucket_edges[i] <= cfg.size_bucket_edges[i - 1]) {
      return "size_bucket_edges must be strictly ascending";
    }
  }
  if (cfg.ttl_bucket_width < 1 || cfg.ttl_bucket_width > 256) {
    return "ttl_bucket_width must be in 1..256";
  }
  if (cfg.src_prefix_len > 32) {
    return "src_prefix_len must be in 0..32";
  }
  if (cfg.joint_pair && cfg.joint_pair->first == cfg.joint_pair->second) {
    return "joint_pair must name two distinct attributes";
  }
  return std::nullopt;
}

std::size_t bucket_count(AttributeKind kind, const BucketConfig& cfg) {
  switch (kind) {
    case AttributeKind::PacketSize:
      return cfg.size_bucket_edges.size() + 1;
    case AttributeKind::Ttl:
      return (256 + cfg.ttl_bucket_width - 1) / cfg.ttl_bucket_width;
    case AttributeKind::Protocol:
      return 256;
    case AttributeKind::SrcPrefix:
      return std::size_t{1} << cfg.src_prefix_len;
    case AttributeKind::TcpFlags:
      return 256 + 1;  // +1: NOT_APPLICABLE for non-TCP
    case AttributeKind::ServerPort:
      return 65536 + 1;  // +1: NOT_APPLICABLE for non-TCP/UDP
  }
  return 0;
}

std::size_t bucketize(const PacketRecord& packet, AttributeKind kind,
                      const BucketConfig& cfg) {
  switch (kind) {
    case AttributeKind::PacketSize: {
      const auto& edges = cfg.size_bucket_edges;
      // Half-open ranges: bucket i covers [edges[i-1], edges[i]).
      auto it = std::upper_bound(edges.begin(), edges.end(), packet.packet_size);
      return static_cast<std::size_t>(it - edges.begin());
    }
    case AttributeKind::Ttl:
      return packet.ttl / cfg.ttl_bucket_width;
    case AttributeKind::Protocol:
      return packet.protocol;
    case AttributeKind::SrcPrefix:
      // Shift by 32 is undefined, so the no-prefix case short-circuits.
      if (cfg.src_prefix_len == 0) return 0;
      return packet.src_ip >> (32 - cfg.src_prefix_len);
    case AttributeKind::TcpFlags:
      if (packet.tcp_flags > 255) return 256;  // NOT_APPLICABLE
      return packet.tcp_flags;
    case AttributeKind::ServerPort:
      if (packet.dst_port > 65535) return 65536;  // NOT_APPLICABLE
      return packet.dst_port;
  }
  return 0;
}

std::size_t joint_bucket_count(const BucketConfig& cfg) {
  const auto& [a, b] = *cfg.joint_pair;
  return bucket_count(a, cfg) * bucket_count(b, cfg);
}

std::size_t joint_bucketize(const PacketRecord& packet, const BucketConfig& cfg) {
  const auto& [a, b] = *cfg.joint_pair;
  return bucketize(packet, a, cfg) * bucket_count(b, cfg) +
         bucketize(packet, b, cfg);
}

}  // namespace packetscore
