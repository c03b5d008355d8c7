#include "packetscore/trace.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "packetscore/errors.hpp"

namespace packetscore {

namespace {

// Parses the whole of `text` as an unsigned integer ≤ max.
std::optional<std::uint64_t> parse_uint(std::string_view text, std::uint64_t max) {
  if (text.empty()) return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value > max) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

[[noreturn]] void fail(std::size_t line, const std::string& field,
                       const std::string& why) {
  throw TraceParseError(line, "field " + field + ": " + why);
}

}  // namespace

std::optional<std::uint32_t> parse_ipv4(std::string_view text) {
  std::uint32_t ip = 0;
  for (int octet = 0; octet < 4; ++octet) {
    std::size_t dot = text.find('.');
    std::string_view part = octet < 3 ? text.substr(0, dot) : text;
    if (octet < 3) {
      if (dot == std::string_view::npos) return std::nullopt;
      text.remove_prefix(dot + 1);
    }
    auto value = parse_uint(part, 255);
    if (!value) return std::nullopt;
    ip = (ip << 8) | static_cast<std::uint32_t>(*value);
  }
  return ip;
}

std::string format_ipv4(std::uint32_t ip) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%u.%u.%u.%u", ip >> 24, (ip >> 16) & 0xff,
                (ip >> 8) & 0xff, ip & 0xff);
  return buf;
}

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;  // 32 chars always fit the shortest form
  return std::string(buf, ptr);
}

std::string format_trace_row(const PacketRecord& packet) {
  std::string row = format_double(packet.timestamp);
  row += ',';
  row += format_ipv4(packet.src_ip);
  row += ',';
  row += std::to_string(packet.protocol);
  row += ',';
  row += std::to_string(packet.packet_size);
  row += ',';
  row += std::to_string(packet.ttl);
  row += ',';
  if (packet.tcp_flags > 255) {
    row += '-';
  } else {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02x", packet.tcp_flags);
    row += buf;
  }
  row += ',';
  if (packet.dst_port > 65535) {
    row += '-';
  } else {
    row += std::to_string(packet.dst_port);
  }
  row += ',';
  switch (packet.ground_truth) {
    case GroundTruth::Legitimate: row += 'L'; break;
    case GroundTruth::Attack: row += 'A'; break;
    case GroundTruth::Unknown: row += '?'; break;
  }
  return row;
}

PacketRecord parse_trace_row(std::string_view row, std::size_t line) {
  std::array<std::string_view, 8> fields;
  std::size_t count = 0;
  while (true) {
    std::size_t comma = row.find(',');
    std::string_view part = row.substr(0, comma);
    if (count == fields.size()) {
      throw TraceParseError(line, "expected 8 fields");
    }
    fields[count++] = part;
    if (comma == std::string_view::npos) break;
    row.remove_prefix(comma + 1);
  }
  if (count != fields.size()) {
    throw TraceParseError(line, "expected 8 fields");
  }

  PacketRecord packet;
  auto ts = parse_double(fields[0]);
  if (!ts || *ts < 0.0) fail(line, "timestamp", "not a non-negative real");
  packet.timestamp = *ts;

  auto ip = parse_ipv4(fields[1]);
  if (!ip) fail(line, "src_ip", "not a dotted quad");
  packet.src_ip = *ip;

  auto protocol = parse_uint(fields[2], 255);
  if (!protocol) fail(line, "protocol", "not an integer in 0..255");
  packet.protocol = static_cast<std::uint8_t>(*protocol);

  auto size = parse_uint(fields[3], 65535);
  if (!size || *size < 20) fail(line, "packet_size", "not an integer in 20..65535");
  packet.packet_size = static_cast<std::uint16_t>(*size);

  auto ttl = parse_uint(fields[4], 255);
  if (!ttl) fail(line, "ttl", "not an integer in 0..255");
  packet.ttl = static_cast<std::uint8_t>(*ttl);

  if (fields[5] == "-") {
    if (packet.protocol == kProtoTcp) {
      fail(line, "tcp_flags", "required for TCP packets");
    }
    packet.tcp_flags = kNoTcpFlags;
  } else {
    if (packet.protocol != kProtoTcp) {
      fail(line, "tcp_flags", "must be \"-\" on non-TCP packets");
    }
    std::string_view hex = fields[5];
    if (hex.size() < 3 || hex.substr(0, 2) != "0x") {
      fail(line, "tcp_flags", "expected 0x-prefixed hex or \"-\"");
    }
    std::uint32_t flags = 0;
    auto* begin = hex.data() + 2;
    auto* end = hex.data() + hex.size();
    auto [ptr, ec] = std::from_chars(begin, end, flags, 16);
    if (ec != std::errc{} || ptr != end || flags > 255) {
      fail(line, "tcp_flags", "expected 0x-prefixed hex in 0x00..0xff");
    }
    packet.tcp_flags = static_cast<std::uint16_t>(flags);
  }

  if (fields[6] == "-") {
    if (packet.protocol == kProtoTcp || packet.protocol == kProtoUdp) {
      fail(line, "dst_port", "required for TCP/UDP packets");
    }
    packet.dst_port = kNoPort;
  } else {
    if (packet.protocol != kProtoTcp && packet.protocol != kProtoUdp) {
      fail(line, "dst_port", "must be \"-\" on non-TCP/UDP packets");
    }
    auto port = parse_uint(fields[6], 65535);
    if (!port) fail(line, "dst_port", "not an integer in 0..65535");
    packet.dst_port = static_cast<std::uint32_t>(*port);
  }

  if (fields[7] == "L") {
    packet.ground_truth = GroundTruth::Legitimate;
  } else if (fields[7] == "A") {
    packet.ground_truth = GroundTruth::Attack;
  } else if (fields[7] == "?") {
    packet.ground_truth = GroundTruth::Unknown;
  } else {
    fail(line, "ground_truth", "expected L, A or ?");
  }
  return packet;
}

TraceReader::TraceReader(const std::string& path) : in_(path), path_(path) {
  if (!in_) throw TraceParseError(0, "cannot open trace " + path);
}

std::optional<PacketRecord> TraceReader::next() {
  std::string row;
  if (!header_checked_) {
    header_checked_ = true;
    if (!std::getline(in_, row)) return std::nullopt;  // empty file, empty stream
    ++line_;
    if (row != kTraceHeader) {
      throw TraceParseError(line_, "missing or malformed header row");
    }
  }
  if (!std::getline(in_, row)) return std::nullopt;
  ++line_;
  PacketRecord packet = parse_trace_row(row, line_);
  if (has_previous_ && packet.timestamp < previous_timestamp_) {
    throw NonMonotoneTraceError(line_, "timestamp went backwards");
  }
  has_previous_ = true;
  previous_timestamp_ = packet.timestamp;
  return packet;
}

TraceWriter::TraceWriter(const std::string& path) : out_(path), path_(path) {
  if (!out_) throw TraceParseError(0, "cannot write trace " + path);
  out_ << kTraceHeader << '\n';
}

void TraceWriter::write(const PacketRecord& packet) {
  out_ << format_trace_row(packet) << '\n';
}

void TraceWriter::close() {
  if (!out_.is_open()) return;
  out_.close();
  if (out_.fail()) throw TraceParseError(0, "short write to trace " + path_);
}

TraceWriter::~TraceWriter() {
  if (out_.is_open()) out_.close();
}

std::vector<PacketRecord> read_trace_file(const std::string& path) {
  TraceReader reader(path);
  std::vector<PacketRecord> records;
  while (auto packet = reader.next()) records.push_back(*packet);
  return records;
}

void write_trace_file(const std::string& path, const std::vector<PacketRecord>& records) {
  TraceWriter writer(path);
  for (const auto& packet : records) writer.write(packet);
  writer.close();
}

}  // namespace packetscore
