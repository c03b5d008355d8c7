#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "packetscore/packet.hpp"

namespace packetscore {

/// Discrete distribution over raw attribute values (raw, not buckets: a
/// generated packet needs concrete header fields). Weights are
/// normalized; items must be non-empty with a positive weight sum.
struct Categorical {
  std::vector<std::pair<std::uint32_t, double>> items;
};

/// Stationary legitimate-traffic model: i.i.d. attribute draws, Poisson
/// arrivals. tcp_flags is consulted only for TCP draws and dst_port only
/// for TCP/UDP draws, so the NOT_APPLICABLE invariants hold by
/// construction.
struct LegitModel {
  Categorical packet_size;
  Categorical ttl;
  Categorical protocol;
  Categorical src_ip;
  Categorical tcp_flags;
  Categorical dst_port;
  double rate_pps = 1000.0;
  std::uint64_t seed = 1;
};

/// One attack stream, active in [start_seconds, stop_seconds).
///
/// FixedAttribute draws a legitimate-looking packet and overwrites the
/// pinned attributes. RandomSpoof additionally redraws one attribute
/// uniformly over its raw domain per packet. MimicBlend emits, per packet,
/// a pure legitimate draw with probability lambda and a pinned packet
/// otherwise; lambda = 0 degenerates to FixedAttribute and lambda near 1
/// probes how far mimicry erodes the filter.
struct AttackModel {
  enum class Type : std::uint8_t { FixedAttribute, RandomSpoof, MimicBlend };
  Type type = Type::FixedAttribute;
  std::map<AttributeKind, std::uint32_t> pinned;  // raw values
  std::optional<AttributeKind> spoof_attribute;   // RandomSpoof only
  double lambda = 0.0;                            // MimicBlend only, in [0,1]
  double rate_pps = 1000.0;
  double start_seconds = 0.0;
  double stop_seconds = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 2;
};

/// Generates duration_seconds of labeled traffic: one Poisson legitimate
/// stream plus one Poisson stream per attack model, merged by timestamp.
/// Deterministic for fixed seeds; each stream has its own generator, so
/// adding an attack never perturbs the legitimate stream.
std::vector<PacketRecord> generate(const LegitModel& legit,
                                   const std::vector<AttackModel>& attacks,
                                   double duration_seconds);

}  // namespace packetscore
