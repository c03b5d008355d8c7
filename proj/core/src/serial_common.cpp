#include "serial_common.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace packetscore::detail {

nlohmann::json config_to_json(const BucketConfig& cfg) {
  nlohmann::json j;
  j["size_bucket_edges"] = cfg.size_bucket_edges;
  j["ttl_bucket_width"] = cfg.ttl_bucket_width;
  j["src_prefix_len"] = cfg.src_prefix_len;
  if (cfg.joint_pair) {
    j["joint_pair"] = {attribute_name(cfg.joint_pair->first),
                       attribute_name(cfg.joint_pair->second)};
  } else {
    j["joint_pair"] = nullptr;
  }
  return j;
}

BucketConfig config_from_json(const nlohmann::json& j) {
  BucketConfig cfg;
  cfg.size_bucket_edges = j.at("size_bucket_edges").get<std::vector<std::uint16_t>>();
  cfg.ttl_bucket_width = j.at("ttl_bucket_width").get<std::uint32_t>();
  cfg.src_prefix_len = j.at("src_prefix_len").get<std::uint32_t>();
  if (j.contains("joint_pair") && !j.at("joint_pair").is_null()) {
    const auto& pair = j.at("joint_pair");
    auto first = attribute_from_name(pair.at(0).get<std::string>());
    auto second = attribute_from_name(pair.at(1).get<std::string>());
    if (!first || !second) {
      throw std::runtime_error("config: unknown attribute name in joint_pair");
    }
    cfg.joint_pair = {*first, *second};
  }
  if (auto complaint = validate(cfg)) {
    throw std::runtime_error("config: " + *complaint);
  }
  return cfg;
}

nlohmann::json sparse_from_dense(const std::vector<double>& dense, double fill) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != fill) j[std::to_string(i)] = dense[i];
  }
  return j;
}

std::vector<double> dense_from_sparse(const nlohmann::json& j, std::size_t size,
                                      double fill) {
  std::vector<double> dense(size, fill);
  for (const auto& [key, value] : j.items()) {
    std::size_t index = std::stoull(key);
    if (index >= size) {
      throw std::runtime_error("sparse array index " + key + " out of range");
    }
    dense[index] = value.get<double>();
  }
  return dense;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("short write to " + path);
}

void expect_format(const nlohmann::json& j, const std::string& tag,
                   const std::string& what) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != tag) {
    throw std::runtime_error(what + ": not a \"" + tag + "\" document");
  }
}

}  // namespace packetscore::detail
