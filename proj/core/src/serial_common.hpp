#pragma once

// Shared helpers for the JSON file formats. Internal to the library; public
// headers stay free of the vendored json dependency.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "packetscore/packet.hpp"

namespace packetscore::detail {

nlohmann::json config_to_json(const BucketConfig& cfg);
BucketConfig config_from_json(const nlohmann::json& j);

// Ratio/entry arrays are wide and mostly at a fill value (0 for ratios,
// the floor entry for scorebooks), so they serialize as {index: value}
// objects holding only the exceptions.
nlohmann::json sparse_from_dense(const std::vector<double>& dense, double fill);
std::vector<double> dense_from_sparse(const nlohmann::json& j, std::size_t size,
                                      double fill);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Throws std::runtime_error naming `what` when the document does not carry
// the expected format tag.
void expect_format(const nlohmann::json& j, const std::string& tag,
                   const std::string& what);

}  // namespace packetscore::detail
