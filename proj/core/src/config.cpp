#include "packetscore/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <stdexcept>

#include "packetscore/trace.hpp"
#include "serial_common.hpp"

namespace packetscore {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::runtime_error("config key " + key + ": " + why);
}

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    bad_key(key, "expected a number, got \"" + text + "\"");
  }
  return value;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    bad_key(key, "expected a non-negative integer, got \"" + text + "\"");
  }
  return value;
}

enum class FieldSyntax { Number, Ipv4, Flags };

std::uint32_t parse_field_value(const std::string& key, std::string_view text,
                                FieldSyntax syntax) {
  switch (syntax) {
    case FieldSyntax::Ipv4: {
      auto ip = parse_ipv4(text);
      if (!ip) bad_key(key, "expected a dotted quad, got \"" + std::string(text) + "\"");
      return *ip;
    }
    case FieldSyntax::Flags:
      if (text.size() > 2 && text.substr(0, 2) == "0x") {
        std::uint32_t value = 0;
        auto* begin = text.data() + 2;
        auto* end = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(begin, end, value, 16);
        if (ec != std::errc{} || ptr != end) {
          bad_key(key, "expected hex flags, got \"" + std::string(text) + "\"");
        }
        return value;
      }
      [[fallthrough]];
    case FieldSyntax::Number: {
      std::uint32_t value = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        bad_key(key, "expected an integer, got \"" + std::string(text) + "\"");
      }
      return value;
    }
  }
  bad_key(key, "unreachable");
}

// "value:weight,value:weight,..."
Categorical parse_categorical(const KeyValueConfig& cfg, const std::string& key,
                              FieldSyntax syntax) {
  std::string text = cfg.require_string(key);
  Categorical dist;
  std::string_view rest = text;
  while (true) {
    std::size_t comma = rest.find(',');
    std::string_view item = trim(rest.substr(0, comma));
    std::size_t colon = item.rfind(':');
    if (colon == std::string_view::npos) {
      bad_key(key, "expected value:weight items separated by commas");
    }
    std::uint32_t value = parse_field_value(key, trim(item.substr(0, colon)), syntax);
    std::string weight_text(trim(item.substr(colon + 1)));
    double weight = to_double(key, weight_text);
    if (!(weight >= 0.0)) bad_key(key, "weights must be non-negative");
    dist.items.emplace_back(value, weight);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return dist;
}

// Pin and spoof keys use header-field names; src_prefix/server_port are
// accepted as aliases for their fields.
std::optional<AttributeKind> field_kind(std::string_view name) {
  if (name == "packet_size") return AttributeKind::PacketSize;
  if (name == "ttl") return AttributeKind::Ttl;
  if (name == "protocol") return AttributeKind::Protocol;
  if (name == "src_ip" || name == "src_prefix") return AttributeKind::SrcPrefix;
  if (name == "tcp_flags") return AttributeKind::TcpFlags;
  if (name == "dst_port" || name == "server_port") return AttributeKind::ServerPort;
  return std::nullopt;
}

FieldSyntax syntax_for(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::SrcPrefix: return FieldSyntax::Ipv4;
    case AttributeKind::TcpFlags: return FieldSyntax::Flags;
    default: return FieldSyntax::Number;
  }
}

AttackModel parse_attack(const KeyValueConfig& cfg, const std::string& prefix,
                         std::uint64_t default_seed) {
  AttackModel attack;
  std::string type = cfg.require_string(prefix + "type");
  if (type == "fixed") {
    attack.type = AttackModel::Type::FixedAttribute;
  } else if (type == "spoof") {
    attack.type = AttackModel::Type::RandomSpoof;
  } else if (type == "mimic") {
    attack.type = AttackModel::Type::MimicBlend;
  } else {
    bad_key(prefix + "type", "expected fixed, spoof or mimic");
  }
  attack.rate_pps = cfg.require_double(prefix + "rate_pps");
  attack.start_seconds = cfg.get_double(prefix + "start_seconds", 0.0);
  attack.stop_seconds = cfg.get_double(prefix + "stop_seconds",
                                       std::numeric_limits<double>::infinity());
  attack.seed = cfg.get_uint(prefix + "seed", default_seed);
  attack.lambda = cfg.get_double(prefix + "lambda", 0.0);
  if (auto spoof = cfg.raw(prefix + "spoof")) {
    auto kind = field_kind(*spoof);
    if (!kind) bad_key(prefix + "spoof", "unknown field \"" + *spoof + "\"");
    attack.spoof_attribute = kind;
  }
  for (const auto& key : cfg.keys_with_prefix(prefix + "pin.")) {
    std::string field = key.substr((prefix + "pin.").size());
    auto kind = field_kind(field);
    if (!kind) bad_key(key, "unknown field \"" + field + "\"");
    attack.pinned[*kind] =
        parse_field_value(key, cfg.require_string(key), syntax_for(*kind));
  }
  return attack;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  return parse_text(detail::read_text_file(path), path);
}

KeyValueConfig KeyValueConfig::parse_text(const std::string& text,
                                          const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::size_t line_no = 0;
  std::string_view rest = text;
  while (!rest.empty()) {
    std::size_t newline = rest.find('\n');
    std::string_view line = rest.substr(0, newline);
    rest = newline == std::string_view::npos ? std::string_view{}
                                             : rest.substr(newline + 1);
    ++line_no;
    if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw std::runtime_error(origin + ":" + std::to_string(line_no) +
                               ": duplicate key " + key);
    }
  }
  return cfg;
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::optional<std::string> KeyValueConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  auto value = raw(key);
  return value ? *value : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  auto value = raw(key);
  return value ? to_double(key, *value) : fallback;
}

std::uint64_t KeyValueConfig::get_uint(const std::string& key,
                                       std::uint64_t fallback) const {
  auto value = raw(key);
  return value ? to_uint(key, *value) : fallback;
}

std::string KeyValueConfig::require_string(const std::string& key) const {
  auto value = raw(key);
  if (!value) bad_key(key, "missing (required)");
  return *value;
}

double KeyValueConfig::require_double(const std::string& key) const {
  return to_double(key, require_string(key));
}

std::vector<std::string> KeyValueConfig::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> keys;
  for (auto it = values_.lower_bound(prefix);
       it != values_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    keys.push_back(it->first);
  }
  return keys;
}

RunSettings parse_run_settings(const KeyValueConfig& cfg) {
  RunSettings settings;
  BucketConfig& buckets = settings.pipeline.buckets;
  if (auto edges = cfg.raw("size_bucket_edges")) {
    buckets.size_bucket_edges.clear();
    std::string_view rest = *edges;
    while (true) {
      std::size_t comma = rest.find(',');
      std::string item(trim(rest.substr(0, comma)));
      buckets.size_bucket_edges.push_back(static_cast<std::uint16_t>(
          to_uint("size_bucket_edges", item)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  buckets.ttl_bucket_width = static_cast<std::uint32_t>(
      cfg.get_uint("ttl_bucket_width", buckets.ttl_bucket_width));
  buckets.src_prefix_len = static_cast<std::uint32_t>(
      cfg.get_uint("src_prefix_len", buckets.src_prefix_len));
  if (auto joint = cfg.raw("joint_pair"); joint && *joint != "none") {
    std::size_t comma = joint->find(',');
    if (comma == std::string::npos) {
      bad_key("joint_pair", "expected two attribute names or \"none\"");
    }
    auto first = attribute_from_name(trim(std::string_view(*joint).substr(0, comma)));
    auto second = attribute_from_name(trim(std::string_view(*joint).substr(comma + 1)));
    if (!first || !second) bad_key("joint_pair", "unknown attribute name");
    buckets.joint_pair = {*first, *second};
  }
  if (auto complaint = validate(buckets)) bad_key("buckets", *complaint);

  settings.pipeline.epsilon = cfg.get_double("epsilon", kDefaultEpsilon);
  if (!(settings.pipeline.epsilon > 0.0)) bad_key("epsilon", "must be positive");
  settings.pipeline.cdf_bins = cfg.get_uint("cdf_bins", kDefaultCdfBins);
  if (settings.pipeline.cdf_bins == 0) bad_key("cdf_bins", "must be positive");

  std::string mode = cfg.get_string("period_mode", "count");
  if (mode == "count") {
    settings.period.mode = PeriodConfig::Mode::CountBased;
    settings.period.packet_count = cfg.get_uint("period_packets", 10000);
    if (settings.period.packet_count == 0) bad_key("period_packets", "must be positive");
  } else if (mode == "time") {
    settings.period.mode = PeriodConfig::Mode::TimeBased;
    settings.period.duration_seconds = cfg.get_double("period_seconds", 1.0);
    if (!(settings.period.duration_seconds > 0.0)) {
      bad_key("period_seconds", "must be positive");
    }
  } else {
    bad_key("period_mode", "expected count or time");
  }

  settings.target_capacity_pps = cfg.get_double("target_capacity_pps", 1000.0);
  if (!(settings.target_capacity_pps > 0.0)) {
    bad_key("target_capacity_pps", "must be positive");
  }
  settings.max_utilization = cfg.get_double("max_utilization", 1.0);
  if (!(settings.max_utilization > 0.0 && settings.max_utilization <= 1.0)) {
    bad_key("max_utilization", "must lie in (0, 1]");
  }
  settings.seed = cfg.get_uint("seed", 1);
  return settings;
}

Scenario parse_scenario(const KeyValueConfig& cfg, std::uint64_t master_seed) {
  Scenario scenario;
  scenario.duration_seconds = cfg.require_double("duration_seconds");
  if (!(scenario.duration_seconds > 0.0)) {
    bad_key("duration_seconds", "must be positive");
  }
  scenario.legit.rate_pps = cfg.require_double("legit.rate_pps");
  scenario.legit.seed = cfg.get_uint("legit.seed", master_seed);
  scenario.legit.packet_size =
      parse_categorical(cfg, "legit.packet_size", FieldSyntax::Number);
  scenario.legit.ttl = parse_categorical(cfg, "legit.ttl", FieldSyntax::Number);
  scenario.legit.protocol = parse_categorical(cfg, "legit.protocol", FieldSyntax::Number);
  scenario.legit.src_ip = parse_categorical(cfg, "legit.src_ip", FieldSyntax::Ipv4);
  scenario.legit.tcp_flags =
      parse_categorical(cfg, "legit.tcp_flags", FieldSyntax::Flags);
  scenario.legit.dst_port = parse_categorical(cfg, "legit.dst_port", FieldSyntax::Number);

  // attack.<n>.* blocks, in numeric order
  std::set<std::uint64_t> indices;
  for (const auto& key : cfg.keys_with_prefix("attack.")) {
    std::string_view rest = std::string_view(key).substr(7);
    std::size_t dot = rest.find('.');
    if (dot == std::string_view::npos || dot == 0) {
      bad_key(key, "expected attack.<n>.<field>");
    }
    indices.insert(to_uint(key, std::string(rest.substr(0, dot))));
  }
  for (std::uint64_t index : indices) {
    std::string prefix = "attack." + std::to_string(index) + ".";
    scenario.attacks.push_back(
        parse_attack(cfg, prefix, master_seed + index + 1));
  }
  return scenario;
}

}  // namespace packetscore
