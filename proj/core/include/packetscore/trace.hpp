#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "packetscore/packet.hpp"

namespace packetscore {

/// Column order of the trace CSV. Header row is mandatory in non-empty
/// files; "-" marks NOT_APPLICABLE tcp_flags/dst_port; ground_truth is
/// "L", "A" or "?".
inline constexpr std::string_view kTraceHeader =
    "timestamp,src_ip,protocol,packet_size,ttl,tcp_flags,dst_port,ground_truth";

std::optional<std::uint32_t> parse_ipv4(std::string_view text);
std::string format_ipv4(std::uint32_t ip);

/// Shortest decimal form that parses back to exactly the same double, so
/// trace and report round-trips are lossless.
std::string format_double(double value);

/// One CSV row, without trailing newline. Inverse of parse_trace_row.
std::string format_trace_row(const PacketRecord& packet);

/// Throws TraceParseError naming the offending field and `line` on any
/// malformed or out-of-range field, including sentinel/protocol
/// disagreement (tcp_flags present iff TCP, dst_port present iff TCP/UDP).
PacketRecord parse_trace_row(std::string_view row, std::size_t line);

/// Streaming reader with validation. Timestamps must be non-decreasing
/// (NonMonotoneTraceError otherwise). An empty file is an empty stream; a
/// non-empty file must start with the header row.
class TraceReader {
public:
  explicit TraceReader(const std::string& path);

  /// Next record, or nullopt at end of file.
  std::optional<PacketRecord> next();

  std::size_t line() const { return line_; }

private:
  std::ifstream in_;
  std::string path_;
  std::size_t line_ = 0;
  bool header_checked_ = false;
  bool has_previous_ = false;
  double previous_timestamp_ = 0.0;
};

class TraceWriter {
public:
  explicit TraceWriter(const std::string& path);
  void write(const PacketRecord& packet);
  /// Flushes and closes; throws on a short write. The destructor closes
  /// silently for the exception-unwind path.
  void close();
  ~TraceWriter();

private:
  std::ofstream out_;
  std::string path_;
};

std::vector<PacketRecord> read_trace_file(const std::string& path);
void write_trace_file(const std::string& path, const std::vector<PacketRecord>& records);

}  // namespace packetscore
