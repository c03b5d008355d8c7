#include "packetscore/report.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "packetscore/errors.hpp"
#include "test_support.hpp"

using namespace packetscore;
using namespace testsupport;

namespace {

PacketRecord icmp_at(double t, GroundTruth truth = GroundTruth::Unknown) {
  PacketRecord p;
  p.protocol = kProtoIcmp;
  p.tcp_flags = kNoTcpFlags;
  p.dst_port = kNoPort;
  p.timestamp = t;
  p.ground_truth = truth;
  return p;
}

PacketSource source_of(std::vector<PacketRecord> packets) {
  return [packets = std::move(packets), i = std::size_t{0}]() mutable
         -> std::optional<PacketRecord> {
    if (i >= packets.size()) return std::nullopt;
    return packets[i++];
  };
}

NominalProfile nominal_of(const std::vector<PacketRecord>& packets,
                          const BucketConfig& cfg) {
  MeasuredProfile profile = make_measured_profile(0, cfg);
  for (const auto& p : packets) profile_update(profile, p);
  return build_nominal({profile}, cfg);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

TEST_CASE("metrics counters split by ground truth") {
  PeriodStats stats;
  metrics_update(stats, GroundTruth::Legitimate, false);
  metrics_update(stats, GroundTruth::Legitimate, true);
  metrics_update(stats, GroundTruth::Attack, false);
  metrics_update(stats, GroundTruth::Attack, true);
  metrics_update(stats, GroundTruth::Attack, true);
  metrics_update(stats, GroundTruth::Unknown, true);

  CHECK(stats.packets == 6);
  CHECK(stats.discarded == 4);
  CHECK(stats.legit_total == 2);
  CHECK(stats.legit_discarded == 1);
  CHECK(stats.attack_total == 3);
  CHECK(stats.attack_passed == 1);
  CHECK(stats.realized_discard() == doctest::Approx(4.0 / 6.0));
  CHECK(*stats.false_positive_rate() == doctest::Approx(0.5));
  CHECK(*stats.false_negative_rate() == doctest::Approx(1.0 / 3.0));

  stats.duration_seconds = 2.0;
  CHECK(stats.passed_pps() == doctest::Approx(1.0));
}

TEST_CASE("rates are absent without labeled traffic") {
  PeriodStats stats;
  metrics_update(stats, GroundTruth::Unknown, true);
  metrics_update(stats, GroundTruth::Unknown, false);
  CHECK_FALSE(stats.false_positive_rate().has_value());
  CHECK_FALSE(stats.false_negative_rate().has_value());
  CHECK(stats.realized_discard() == 0.5);
  CHECK(stats.passed_pps() == 0.0);  // no duration recorded
}

TEST_CASE("counter identities hold for any verdict stream") {
  std::mt19937_64 rng(64);
  for (int run = 0; run < 120; ++run) {
    PeriodStats stats;
    std::uint64_t unknown_total = 0, unknown_discarded = 0;
    std::size_t n = 1 + rng() % 200;
    for (std::size_t i = 0; i < n; ++i) {
      auto truth = static_cast<GroundTruth>(rng() % 3);
      bool discarded = rng() % 2 == 0;
      metrics_update(stats, truth, discarded);
      if (truth == GroundTruth::Unknown) {
        ++unknown_total;
        if (discarded) ++unknown_discarded;
      }
    }
    CHECK(stats.packets == stats.legit_total + stats.attack_total + unknown_total);
    std::uint64_t attack_discarded = stats.attack_total - stats.attack_passed;
    CHECK(stats.discarded ==
          stats.legit_discarded + attack_discarded + unknown_discarded);
  }
}

TEST_CASE("count-based periods close after exactly N packets") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 250; ++i) packets.push_back(icmp_at(0.01 * i));
  RunSettings settings;
  settings.period.packet_count = 100;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);

  RunReport report = run_pipeline(nominal, settings, source_of(packets));
  REQUIRE(report.periods.size() == 3);
  CHECK(report.periods[0].packets == 100);
  CHECK(report.periods[1].packets == 100);
  CHECK(report.periods[2].packets == 50);  // trailing partial period
  CHECK(report.periods[0].period_id == 0);
  CHECK(report.periods[1].period_id == 1);
  CHECK(report.periods[2].period_id == 2);
  CHECK(report.periods[0].duration_seconds == doctest::Approx(0.99));
  CHECK(report.total_packets() == 250);
}

TEST_CASE("an exact multiple of the period size leaves no empty tail") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 200; ++i) packets.push_back(icmp_at(0.01 * i));
  RunSettings settings;
  settings.period.packet_count = 100;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);
  RunReport report = run_pipeline(nominal, settings, source_of(packets));
  CHECK(report.periods.size() == 2);
}

TEST_CASE("time-based periods rotate across gaps, emitting empty periods") {
  std::vector<PacketRecord> packets = {icmp_at(0.1), icmp_at(0.2), icmp_at(2.5),
                                       icmp_at(2.6)};
  RunSettings settings;
  settings.period.mode = PeriodConfig::Mode::TimeBased;
  settings.period.duration_seconds = 1.0;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);

  RunReport report = run_pipeline(nominal, settings, source_of(packets));
  REQUIRE(report.periods.size() == 3);
  CHECK(report.periods[0].packets == 2);  // [0.1, 1.1)
  CHECK(report.periods[1].packets == 0);  // [1.1, 2.1) spanned by the gap
  CHECK(report.periods[2].packets == 2);  // trailing partial
  CHECK(report.periods[0].duration_seconds == 1.0);
  CHECK(report.periods[1].duration_seconds == 1.0);
  CHECK(report.periods[2].duration_seconds == doctest::Approx(0.1));
}

TEST_CASE("observed arrival rate feeds the next period's discard fraction") {
  // 10000 identical packets at a strict 10000 pps.
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 10000; ++i) packets.push_back(icmp_at(1e-4 * i));
  RunSettings settings;
  settings.period.packet_count = 2000;
  settings.target_capacity_pps = 1000.0;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);

  RunReport report = run_pipeline(nominal, settings, source_of(packets));
  REQUIRE(report.periods.size() == 5);
  CHECK(report.periods[0].phi == 0.0);  // warm-up threshold
  CHECK(report.periods[0].cutoff == Cutoff::None);
  for (std::size_t i = 1; i < report.periods.size(); ++i) {
    const PeriodStats& prev = report.periods[i - 1];
    LoadShedInput shed;
    shed.arrival_rate =
        static_cast<double>(prev.packets) / prev.duration_seconds;
    shed.target_capacity = settings.target_capacity_pps;
    shed.max_utilization = settings.max_utilization;
    CHECK(report.periods[i].phi == doctest::Approx(load_shed(shed)));
    CHECK(report.periods[i].phi > 0.85);
  }

  // Identical packets mean identical scores: one occupied bin, so the
  // cutoff sits at that bin's upper edge and the whole period is shed.
  for (std::size_t i = 1; i < report.periods.size(); ++i) {
    CHECK(report.periods[i].discarded == report.periods[i].packets);
  }
  CHECK(report.total_discarded() == 8000);
  CHECK(report.overall_discard() == doctest::Approx(0.8));
}

TEST_CASE("run totals aggregate the period stats") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 300; ++i) {
    packets.push_back(
        icmp_at(0.01 * i, i % 3 == 0 ? GroundTruth::Attack : GroundTruth::Legitimate));
  }
  RunSettings settings;
  settings.period.packet_count = 100;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);
  RunReport report = run_pipeline(nominal, settings, source_of(packets));

  std::uint64_t packets_sum = 0, discarded_sum = 0;
  for (const auto& p : report.periods) {
    packets_sum += p.packets;
    discarded_sum += p.discarded;
  }
  CHECK(report.total_packets() == packets_sum);
  CHECK(report.total_discarded() == discarded_sum);
  CHECK(report.total_duration_seconds() == doctest::Approx(3 * 0.99));
  CHECK(report.overall_false_positive_rate().has_value());
  CHECK(report.overall_false_negative_rate().has_value());
  CHECK(report.seed == settings.seed);
}

TEST_CASE("verdict sink sees every packet once, in order") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 120; ++i) packets.push_back(icmp_at(0.01 * i));
  RunSettings settings;
  settings.period.packet_count = 50;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);

  std::vector<std::uint64_t> ids;
  std::uint64_t discarded = 0;
  RunReport report = run_pipeline(
      nominal, settings, source_of(packets),
      [&](const PacketRecord& packet, const PacketVerdict& verdict) {
        CHECK(packet.timestamp == 0.01 * static_cast<double>(verdict.packet_id));
        ids.push_back(verdict.packet_id);
        if (verdict.discarded) ++discarded;
      });
  REQUIRE(ids.size() == packets.size());
  for (std::size_t i = 0; i < ids.size(); ++i) CHECK(ids[i] == i);
  CHECK(discarded == report.total_discarded());
}

TEST_CASE("run rejects a nominal profile with foreign bucketing") {
  std::vector<PacketRecord> packets = {icmp_at(0.0)};
  BucketConfig other;
  other.ttl_bucket_width = 2;
  auto nominal = nominal_of(packets, other);
  RunSettings settings;  // default buckets disagree
  CHECK_THROWS_AS(run_pipeline(nominal, settings, source_of(packets)),
                  ProfileConfigMismatchError);
}

TEST_CASE("training drops a trailing partial period unless it is alone") {
  RunSettings settings;
  settings.period.packet_count = 100;

  std::vector<PacketRecord> packets;
  for (int i = 0; i < 250; ++i) packets.push_back(icmp_at(0.01 * i));
  auto nominal = profile_packet_stream(source_of(packets), settings);
  CHECK(nominal.source_period_count == 2);
  CHECK(nominal.nominal_rate == 100.0);

  std::vector<PacketRecord> few;
  for (int i = 0; i < 50; ++i) few.push_back(icmp_at(0.01 * i));
  auto only = profile_packet_stream(source_of(few), settings);
  CHECK(only.source_period_count == 1);
  CHECK(only.nominal_rate == 50.0);

  CHECK_THROWS_AS(profile_packet_stream(source_of({}), settings),
                  EmptyTrainingSetError);
}

TEST_CASE("training splits time-based periods on the clock") {
  RunSettings settings;
  settings.period.mode = PeriodConfig::Mode::TimeBased;
  settings.period.duration_seconds = 1.0;

  std::vector<PacketRecord> packets;
  for (int i = 0; i < 10; ++i) packets.push_back(icmp_at(0.0 + 0.1 * i));
  for (int i = 0; i < 20; ++i) packets.push_back(icmp_at(1.0 + 0.045 * i));
  for (int i = 0; i < 5; ++i) packets.push_back(icmp_at(2.0 + 0.1 * i));  // partial

  auto nominal = profile_packet_stream(source_of(packets), settings);
  CHECK(nominal.source_period_count == 2);
  CHECK(nominal.nominal_rate == doctest::Approx(15.0));
  // Mean of the in-period spans: (0.9 + 19 * 0.045) / 2.
  CHECK(nominal.mean_period_seconds == doctest::Approx(0.8775).epsilon(1e-9));
}

TEST_CASE("training flags attack labels without using them") {
  RunSettings settings;
  settings.period.packet_count = 10;
  std::vector<PacketRecord> clean;
  for (int i = 0; i < 30; ++i) clean.push_back(icmp_at(0.01 * i, GroundTruth::Legitimate));
  bool saw = true;
  profile_packet_stream(source_of(clean), settings, &saw);
  CHECK_FALSE(saw);

  std::vector<PacketRecord> tainted = clean;
  tainted[7].ground_truth = GroundTruth::Attack;
  profile_packet_stream(source_of(tainted), settings, &saw);
  CHECK(saw);

  // The labels change nothing about the profile itself.
  auto a = profile_packet_stream(source_of(clean), settings);
  auto b = profile_packet_stream(source_of(tainted), settings);
  CHECK(a.ratios == b.ratios);
  CHECK(a.nominal_rate == b.nominal_rate);
}

TEST_CASE("report json is deterministic apart from the wall clock") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 150; ++i) {
    packets.push_back(
        icmp_at(0.01 * i, i % 4 == 0 ? GroundTruth::Attack : GroundTruth::Legitimate));
  }
  RunSettings settings;
  settings.period.packet_count = 60;
  settings.seed = 31;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);

  auto render = [&] {
    RunReport report = run_pipeline(nominal, settings, source_of(packets));
    return nlohmann::json::parse(report_to_json(report, settings));
  };
  auto a = render();
  auto b = render();
  CHECK(a.at("wall_clock_seconds").get<double>() >= 0.0);
  a.erase("wall_clock_seconds");
  b.erase("wall_clock_seconds");
  CHECK(a == b);

  CHECK(a.at("format") == "packetscore-report");
  CHECK(a.at("seed") == 31);
  CHECK(a.at("totals").at("packets") == 150);
  CHECK(a.at("totals").contains("false_positive_rate"));
  CHECK(a.at("totals").contains("false_negative_rate"));
  CHECK(a.at("config").at("period").at("mode") == "count");
}

TEST_CASE("unlabeled runs omit the error rates") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 80; ++i) packets.push_back(icmp_at(0.01 * i));
  RunSettings settings;
  settings.period.packet_count = 40;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);
  RunReport report = run_pipeline(nominal, settings, source_of(packets));

  auto j = nlohmann::json::parse(report_to_json(report, settings));
  CHECK_FALSE(j.at("totals").contains("false_positive_rate"));
  CHECK_FALSE(j.at("totals").contains("false_negative_rate"));

  // CSV keeps the columns but leaves the cells empty.
  auto rows = split(periods_to_csv(report), '\n');
  REQUIRE(rows.size() == report.periods.size() + 1);
  auto cells = split(rows[1], ',');
  REQUIRE(cells.size() == 10);
  CHECK(cells[6].empty());
  CHECK(cells[7].empty());
}

TEST_CASE("period csv carries one row per period with sentinel cutoffs") {
  RunReport report;
  PeriodStats warm;
  warm.period_id = 0;
  warm.packets = 10;
  warm.cutoff = Cutoff::None;
  warm.duration_seconds = 1.0;
  PeriodStats cut;
  cut.period_id = 1;
  cut.packets = 10;
  cut.discarded = 4;
  cut.phi = 0.4;
  cut.cutoff = Cutoff::Value;
  cut.thd = -2.5;
  cut.duration_seconds = 1.0;
  PeriodStats dead;
  dead.period_id = 2;
  dead.packets = 10;
  dead.discarded = 10;
  dead.phi = 1.0;
  dead.cutoff = Cutoff::All;
  dead.duration_seconds = 1.0;
  report.periods = {warm, cut, dead};

  auto rows = split(periods_to_csv(report), '\n');
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] ==
        "period,packets,discarded,phi,thd,realized_discard,false_positive_rate,"
        "false_negative_rate,passed_pps,duration_seconds");
  CHECK(split(rows[1], ',')[4] == "none");
  CHECK(split(rows[2], ',')[4] == "-2.5");
  CHECK(split(rows[3], ',')[4] == "all");
  CHECK(split(rows[2], ',')[5] == "0.4");
}

TEST_CASE("csv path derives from the report path") {
  CHECK(periods_csv_path("out.json") == "out.periods.csv");
  CHECK(periods_csv_path("runs/report.json") == "runs/report.periods.csv");
  CHECK(periods_csv_path("plain") == "plain.periods.csv");
}

TEST_CASE("write_report_files drops both artifacts on disk") {
  std::vector<PacketRecord> packets;
  for (int i = 0; i < 50; ++i) packets.push_back(icmp_at(0.01 * i));
  RunSettings settings;
  settings.period.packet_count = 25;
  auto nominal = nominal_of(packets, settings.pipeline.buckets);
  RunReport report = run_pipeline(nominal, settings, source_of(packets));

  std::string dir = scratch_dir();
  write_report_files(report, settings, dir + "/report.json");
  std::ifstream json_in(dir + "/report.json");
  CHECK(json_in.good());
  std::ifstream csv_in(dir + "/report.periods.csv");
  CHECK(csv_in.good());
}
