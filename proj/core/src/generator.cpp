#include "packetscore/generator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace packetscore {

namespace {

// All randomness below consumes engine output through these two helpers,
// one engine call per draw, so a stream's packet sequence is a pure
// function of its seed.

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

std::uint32_t uniform_in(std::mt19937_64& rng, std::uint32_t lo, std::uint32_t hi) {
  std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  return lo + static_cast<std::uint32_t>(rng() % span);
}

double exponential_gap(std::mt19937_64& rng, double rate) {
  return -std::log1p(-uniform01(rng)) / rate;
}

// CDF-inversion sampler over normalized weights.
class Sampler {
public:
  Sampler(const Categorical& dist, const char* what, std::uint32_t min_value,
          std::uint32_t max_value) {
    if (dist.items.empty()) {
      throw std::invalid_argument(std::string(what) + ": empty distribution");
    }
    double sum = 0.0;
    for (const auto& [value, weight] : dist.items) {
      if (value < min_value || value > max_value) {
        throw std::invalid_argument(std::string(what) + ": value " +
                                    std::to_string(value) + " out of range");
      }
      if (!(weight >= 0.0)) {
        throw std::invalid_argument(std::string(what) + ": negative weight");
      }
      sum += weight;
    }
    if (!(sum > 0.0)) {
      throw std::invalid_argument(std::string(what) + ": weights sum to zero");
    }
    double acc = 0.0;
    for (const auto& [value, weight] : dist.items) {
      acc += weight / sum;
      values_.push_back(value);
      cdf_.push_back(acc);
    }
    cdf_.back() = 1.0;  // close the top against rounding drift
  }

  std::uint32_t draw(std::mt19937_64& rng) const {
    double u = uniform01(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return values_[static_cast<std::size_t>(it - cdf_.begin())];
  }

private:
  std::vector<std::uint32_t> values_;
  std::vector<double> cdf_;
};

// Draw order is fixed (protocol, size, ttl, src, flags, port) so a stream's
// content depends only on its seed. Flags/port presence follows the final
// protocol, which keeps the NOT_APPLICABLE invariants true by construction.
class PacketSampler {
public:
  explicit PacketSampler(const LegitModel& model)
      : size_(model.packet_size, "legit packet_size", 20, 65535),
        ttl_(model.ttl, "legit ttl", 0, 255),
        protocol_(model.protocol, "legit protocol", 0, 255),
        src_(model.src_ip, "legit src_ip", 0, 0xffffffffu),
        flags_(model.tcp_flags, "legit tcp_flags", 0, 255),
        port_(model.dst_port, "legit dst_port", 0, 65535) {}

  PacketRecord draw(std::mt19937_64& rng) const {
    PacketRecord p;
    p.protocol = static_cast<std::uint8_t>(protocol_.draw(rng));
    p.packet_size = static_cast<std::uint16_t>(size_.draw(rng));
    p.ttl = static_cast<std::uint8_t>(ttl_.draw(rng));
    p.src_ip = src_.draw(rng);
    p.tcp_flags = p.protocol == kProtoTcp
                      ? static_cast<std::uint16_t>(flags_.draw(rng))
                      : kNoTcpFlags;
    p.dst_port = (p.protocol == kProtoTcp || p.protocol == kProtoUdp)
                     ? port_.draw(rng)
                     : kNoPort;
    return p;
  }

  // Like draw(), but pins override and the spoofed attribute is redrawn
  // uniformly over its raw domain. Pins on fields the final protocol does
  // not carry are ignored; NOT_APPLICABLE wins.
  PacketRecord draw_shaped(std::mt19937_64& rng, const AttackModel& attack) const {
    PacketRecord p;
    p.protocol = static_cast<std::uint8_t>(
        shaped_value(rng, attack, AttributeKind::Protocol, 0, 255,
                     [&] { return protocol_.draw(rng); }));
    p.packet_size = static_cast<std::uint16_t>(
        shaped_value(rng, attack, AttributeKind::PacketSize, 20, 65535,
                     [&] { return size_.draw(rng); }));
    p.ttl = static_cast<std::uint8_t>(
        shaped_value(rng, attack, AttributeKind::Ttl, 0, 255,
                     [&] { return ttl_.draw(rng); }));
    p.src_ip = shaped_value(rng, attack, AttributeKind::SrcPrefix, 0, 0xffffffffu,
                            [&] { return src_.draw(rng); });
    p.tcp_flags = p.protocol == kProtoTcp
                      ? static_cast<std::uint16_t>(
                            shaped_value(rng, attack, AttributeKind::TcpFlags, 0, 255,
                                         [&] { return flags_.draw(rng); }))
                      : kNoTcpFlags;
    p.dst_port = (p.protocol == kProtoTcp || p.protocol == kProtoUdp)
                     ? shaped_value(rng, attack, AttributeKind::ServerPort, 0, 65535,
                                    [&] { return port_.draw(rng); })
                     : kNoPort;
    return p;
  }

private:
  template <typename LegitDraw>
  static std::uint32_t shaped_value(std::mt19937_64& rng, const AttackModel& attack,
                                    AttributeKind kind, std::uint32_t lo,
                                    std::uint32_t hi, LegitDraw legit_draw) {
    if (auto it = attack.pinned.find(kind); it != attack.pinned.end()) {
      if (it->second < lo || it->second > hi) {
        throw std::invalid_argument(std::string("attack pin on ") +
                                    attribute_name(kind) + ": value out of range");
      }
      return it->second;
    }
    if (attack.type == AttackModel::Type::RandomSpoof &&
        attack.spoof_attribute == kind) {
      return uniform_in(rng, lo, hi);
    }
    return legit_draw();
  }

  Sampler size_, ttl_, protocol_, src_, flags_, port_;
};

}  // namespace

std::vector<PacketRecord> generate(const LegitModel& legit,
                                   const std::vector<AttackModel>& attacks,
                                   double duration_seconds) {
  if (!(duration_seconds > 0.0)) {
    throw std::invalid_argument("trace duration must be positive");
  }
  if (!(legit.rate_pps > 0.0)) {
    throw std::invalid_argument("legit rate_pps must be positive");
  }
  PacketSampler sampler(legit);
  std::vector<PacketRecord> out;
  out.reserve(static_cast<std::size_t>(legit.rate_pps * duration_seconds * 1.1) + 16);

  std::mt19937_64 legit_rng(legit.seed);
  for (double t = exponential_gap(legit_rng, legit.rate_pps); t < duration_seconds;
       t += exponential_gap(legit_rng, legit.rate_pps)) {
    PacketRecord p = sampler.draw(legit_rng);
    p.timestamp = t;
    p.ground_truth = GroundTruth::Legitimate;
    out.push_back(p);
  }

  for (const auto& attack : attacks) {
    if (!(attack.rate_pps > 0.0)) {
      throw std::invalid_argument("attack rate_pps must be positive");
    }
    if (!(attack.lambda >= 0.0 && attack.lambda <= 1.0)) {
      throw std::invalid_argument("attack lambda must lie in [0, 1]");
    }
    if (attack.type == AttackModel::Type::RandomSpoof && !attack.spoof_attribute) {
      throw std::invalid_argument("RandomSpoof attack needs a spoof_attribute");
    }
    double begin = std::max(attack.start_seconds, 0.0);
    double end = std::min(attack.stop_seconds, duration_seconds);
    std::mt19937_64 attack_rng(attack.seed);
    for (double t = begin + exponential_gap(attack_rng, attack.rate_pps); t < end;
         t += exponential_gap(attack_rng, attack.rate_pps)) {
      bool mimic = attack.type == AttackModel::Type::MimicBlend &&
                   uniform01(attack_rng) < attack.lambda;
      PacketRecord p = mimic ? sampler.draw(attack_rng)
                             : sampler.draw_shaped(attack_rng, attack);
      p.timestamp = t;
      p.ground_truth = GroundTruth::Attack;
      out.push_back(p);
    }
  }

  // Streams were generated independently; ties resolve to stream order
  // (legitimate first), keeping the merge deterministic.
  std::stable_sort(out.begin(), out.end(),
                   [](const PacketRecord& a, const PacketRecord& b) {
                     return a.timestamp < b.timestamp;
                   });
  return out;
}

}  // namespace packetscore
