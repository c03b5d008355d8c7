#include "packetscore/packet.hpp"

#include <doctest.h>

#include <random>

#include "test_support.hpp"

using namespace packetscore;
using namespace testsupport;

TEST_CASE("size buckets use half-open byte ranges") {
  BucketConfig cfg;
  PacketRecord p;
  p.packet_size = 100;
  CHECK(bucketize(p, AttributeKind::PacketSize, cfg) == 1);  // [64, 128)
  p.packet_size = 63;
  CHECK(bucketize(p, AttributeKind::PacketSize, cfg) == 0);
  p.packet_size = 64;
  CHECK(bucketize(p, AttributeKind::PacketSize, cfg) == 1);
  p.packet_size = 1513;
  CHECK(bucketize(p, AttributeKind::PacketSize, cfg) == 5);
  p.packet_size = 1514;
  CHECK(bucketize(p, AttributeKind::PacketSize, cfg) == 6);
  p.packet_size = 65535;
  CHECK(bucketize(p, AttributeKind::PacketSize, cfg) == 6);
}

TEST_CASE("bucket counts cover every attribute domain") {
  BucketConfig cfg;
  CHECK(bucket_count(AttributeKind::PacketSize, cfg) == 7);  // 6 edges, 7 ranges
  CHECK(bucket_count(AttributeKind::Ttl, cfg) == 32);
  CHECK(bucket_count(AttributeKind::Protocol, cfg) == 256);
  CHECK(bucket_count(AttributeKind::SrcPrefix, cfg) == 65536);
  CHECK(bucket_count(AttributeKind::TcpFlags, cfg) == 257);
  CHECK(bucket_count(AttributeKind::ServerPort, cfg) == 65537);

  cfg.ttl_bucket_width = 7;  // 256/7 rounds up
  CHECK(bucket_count(AttributeKind::Ttl, cfg) == 37);
  cfg.ttl_bucket_width = 256;
  CHECK(bucket_count(AttributeKind::Ttl, cfg) == 1);
  cfg.src_prefix_len = 0;
  CHECK(bucket_count(AttributeKind::SrcPrefix, cfg) == 1);
}

TEST_CASE("ttl and protocol and prefix bucketing") {
  BucketConfig cfg;
  PacketRecord p;
  p.ttl = 64;
  CHECK(bucketize(p, AttributeKind::Ttl, cfg) == 8);
  p.ttl = 255;
  CHECK(bucketize(p, AttributeKind::Ttl, cfg) == 31);
  p.ttl = 0;
  CHECK(bucketize(p, AttributeKind::Ttl, cfg) == 0);

  p.protocol = 17;
  CHECK(bucketize(p, AttributeKind::Protocol, cfg) == 17);

  p.src_ip = 0x0a010203;  // 10.1.2.3
  CHECK(bucketize(p, AttributeKind::SrcPrefix, cfg) == 0x0a01);
  cfg.src_prefix_len = 0;
  CHECK(bucketize(p, AttributeKind::SrcPrefix, cfg) == 0);
  cfg.src_prefix_len = 32;
  CHECK(bucketize(p, AttributeKind::SrcPrefix, cfg) == 0x0a010203);
}

TEST_CASE("not-applicable fields land in their reserved buckets") {
  BucketConfig cfg;
  PacketRecord p;
  p.protocol = kProtoIcmp;
  p.tcp_flags = kNoTcpFlags;
  p.dst_port = kNoPort;
  CHECK(bucketize(p, AttributeKind::TcpFlags, cfg) == 256);
  CHECK(bucketize(p, AttributeKind::ServerPort, cfg) == 65536);

  p.protocol = kProtoTcp;
  p.tcp_flags = 0x18;
  p.dst_port = 443;
  CHECK(bucketize(p, AttributeKind::TcpFlags, cfg) == 0x18);
  CHECK(bucketize(p, AttributeKind::ServerPort, cfg) == 443);
}

TEST_CASE("bucketize is total over random packets and configs") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 300; ++i) {
    BucketConfig cfg = random_bucket_config(rng);
    REQUIRE(!validate(cfg));
    PacketRecord p = random_packet(rng);
    for (AttributeKind kind : kAllAttributes) {
      std::size_t bucket = bucketize(p, kind, cfg);
      CHECK(bucket < bucket_count(kind, cfg));
    }
    if (cfg.joint_pair) {
      CHECK(joint_bucketize(p, cfg) < joint_bucket_count(cfg));
    }
  }
}

TEST_CASE("bucketize preserves order on size and ttl") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    BucketConfig cfg = random_bucket_config(rng);
    PacketRecord a = random_packet(rng);
    PacketRecord b = a;
    a.packet_size = static_cast<std::uint16_t>(pick(rng, 20, 65535));
    b.packet_size = static_cast<std::uint16_t>(pick(rng, 20, 65535));
    if (a.packet_size > b.packet_size) std::swap(a.packet_size, b.packet_size);
    CHECK(bucketize(a, AttributeKind::PacketSize, cfg) <=
          bucketize(b, AttributeKind::PacketSize, cfg));
    a.ttl = static_cast<std::uint8_t>(rng() % 256);
    b.ttl = static_cast<std::uint8_t>(rng() % 256);
    if (a.ttl > b.ttl) std::swap(a.ttl, b.ttl);
    CHECK(bucketize(a, AttributeKind::Ttl, cfg) <= bucketize(b, AttributeKind::Ttl, cfg));
  }
}

TEST_CASE("ground truth never affects bucketing") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 150; ++i) {
    BucketConfig cfg = random_bucket_config(rng);
    PacketRecord p = random_packet(rng);
    PacketRecord q = p;
    q.ground_truth = p.ground_truth == GroundTruth::Attack ? GroundTruth::Legitimate
                                                           : GroundTruth::Attack;
    for (AttributeKind kind : kAllAttributes) {
      CHECK(bucketize(p, kind, cfg) == bucketize(q, kind, cfg));
    }
  }
}

TEST_CASE("joint index flattens the pair lexicographically") {
  BucketConfig cfg;
  cfg.joint_pair = {AttributeKind::Ttl, AttributeKind::Protocol};
  CHECK(joint_bucket_count(cfg) == 32 * 256);
  PacketRecord p;
  p.ttl = 64;
  p.protocol = 17;
  CHECK(joint_bucketize(p, cfg) == 8 * 256 + 17);
}

TEST_CASE("config validation rejects malformed settings") {
  BucketConfig cfg;
  CHECK(!validate(cfg));

  BucketConfig bad = cfg;
  bad.size_bucket_edges = {64, 64};
  CHECK(validate(bad));
  bad.size_bucket_edges = {128, 64};
  CHECK(validate(bad));
  bad.size_bucket_edges = {};
  CHECK(validate(bad));

  bad = cfg;
  bad.ttl_bucket_width = 0;
  CHECK(validate(bad));
  bad.ttl_bucket_width = 257;
  CHECK(validate(bad));

  bad = cfg;
  bad.src_prefix_len = 33;
  CHECK(validate(bad));

  bad = cfg;
  bad.joint_pair = {AttributeKind::Ttl, AttributeKind::Ttl};
  CHECK(validate(bad));
}

TEST_CASE("attribute names round-trip") {
  for (AttributeKind kind : kAllAttributes) {
    auto back = attribute_from_name(attribute_name(kind));
    REQUIRE(back.has_value());
    CHECK(*back == kind);
  }
  CHECK(!attribute_from_name("no_such_attribute"));
}
