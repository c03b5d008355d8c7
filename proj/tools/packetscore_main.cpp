// Command-line front end: learn profiles, run synthetic-attack
// simulations, replay recorded traces. Exit codes: 0 success, 1 usage
// error, 2 data error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "packetscore/config.hpp"
#include "packetscore/errors.hpp"
#include "packetscore/generator.hpp"
#include "packetscore/profiling.hpp"
#include "packetscore/report.hpp"
#include "packetscore/trace.hpp"

namespace {

using namespace packetscore;

KeyValueConfig load_config(const std::string& path) {
  if (path.empty()) return KeyValueConfig::parse_text("", "<defaults>");
  return KeyValueConfig::parse_file(path);
}

// Simulate/replay runs adopt the profile's bucket configuration; bucket
// keys in the config file are only cross-checked against it.
void reconcile_buckets(RunSettings& settings, const KeyValueConfig& cfg,
                       const NominalProfile& nominal) {
  bool explicit_buckets = cfg.has("size_bucket_edges") || cfg.has("ttl_bucket_width") ||
                          cfg.has("src_prefix_len") || cfg.has("joint_pair");
  if (explicit_buckets && settings.pipeline.buckets != nominal.config) {
    throw ProfileConfigMismatchError(
        "config bucket settings disagree with the profile file; drop them or "
        "rebuild the profile");
  }
  settings.pipeline.buckets = nominal.config;
}

class VerdictCsvWriter {
public:
  explicit VerdictCsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot write verdicts " + path);
    out_ << "packet_id,period,score,discarded,ground_truth\n";
  }

  void write(const PacketRecord& packet, const PacketVerdict& verdict) {
    out_ << verdict.packet_id << ',' << verdict.period << ','
         << format_double(verdict.score) << ',' << (verdict.discarded ? 1 : 0) << ',';
    switch (packet.ground_truth) {
      case GroundTruth::Legitimate: out_ << 'L'; break;
      case GroundTruth::Attack: out_ << 'A'; break;
      case GroundTruth::Unknown: out_ << '?'; break;
    }
    out_ << '\n';
  }

  void close(const std::string& path) {
    out_.close();
    if (out_.fail()) throw std::runtime_error("short write to verdicts " + path);
  }

private:
  std::ofstream out_;
};

int cmd_profile(const std::string& config_path, const std::string& trace_path,
                const std::string& out_path) {
  RunSettings settings = parse_run_settings(load_config(config_path));
  TraceReader reader(trace_path);
  bool saw_attack = false;
  NominalProfile nominal = profile_packet_stream(
      [&] { return reader.next(); }, settings, &saw_attack);
  if (saw_attack) {
    std::fprintf(stderr,
                 "warning: trace contains attack-labeled packets; labels are "
                 "ignored for profiling\n");
  }
  save_nominal(nominal, out_path);
  std::printf("profile: %llu period(s), %.1f packets/period -> %s\n",
              static_cast<unsigned long long>(nominal.source_period_count),
              nominal.nominal_rate, out_path.c_str());
  return 0;
}

int run_and_report(const NominalProfile& nominal, const RunSettings& settings,
                   const PacketSource& source, const std::string& out_path,
                   const std::string& verdicts_path) {
  std::optional<VerdictCsvWriter> verdicts;
  VerdictSink sink;
  if (!verdicts_path.empty()) {
    verdicts.emplace(verdicts_path);
    sink = [&](const PacketRecord& packet, const PacketVerdict& verdict) {
      verdicts->write(packet, verdict);
    };
  }
  RunReport report = run_pipeline(nominal, settings, source, sink);
  if (verdicts) verdicts->close(verdicts_path);
  write_report_files(report, settings, out_path);
  std::printf("run: %llu packets, %llu discarded (%.1f%%), %zu period(s) -> %s\n",
              static_cast<unsigned long long>(report.total_packets()),
              static_cast<unsigned long long>(report.total_discarded()),
              100.0 * report.overall_discard(), report.periods.size(),
              out_path.c_str());
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& profile_path,
                 const std::string& out_path, const std::string& verdicts_path,
                 const std::string& trace_out_path,
                 std::optional<std::uint64_t> seed_override) {
  KeyValueConfig cfg = load_config(config_path);
  RunSettings settings = parse_run_settings(cfg);
  if (seed_override) settings.seed = *seed_override;
  NominalProfile nominal = load_nominal(profile_path);
  reconcile_buckets(settings, cfg, nominal);
  Scenario scenario = parse_scenario(cfg, settings.seed);
  auto records = generate(scenario.legit, scenario.attacks, scenario.duration_seconds);
  if (!trace_out_path.empty()) write_trace_file(trace_out_path, records);
  std::size_t next = 0;
  PacketSource source = [&]() -> std::optional<PacketRecord> {
    if (next == records.size()) return std::nullopt;
    return records[next++];
  };
  return run_and_report(nominal, settings, source, out_path, verdicts_path);
}

int cmd_replay(const std::string& config_path, const std::string& profile_path,
               const std::string& trace_path, const std::string& out_path,
               const std::string& verdicts_path) {
  KeyValueConfig cfg = load_config(config_path);
  RunSettings settings = parse_run_settings(cfg);
  NominalProfile nominal = load_nominal(profile_path);
  reconcile_buckets(settings, cfg, nominal);
  TraceReader reader(trace_path);
  return run_and_report(nominal, settings, [&] { return reader.next(); }, out_path,
                        verdicts_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PacketScore: statistical packet-scoring DDoS filter and simulator"};
  app.require_subcommand(1);

  std::string config_path, trace_path, profile_path, out_path, verdicts_path;
  std::optional<std::uint64_t> seed_override;

  auto* profile = app.add_subcommand(
      "profile", "Learn a nominal traffic profile from a legitimate trace");
  profile->add_option("--config", config_path, "Engine config file");
  profile->add_option("--trace", trace_path, "Input trace CSV")->required();
  profile->add_option("--out", out_path, "Output profile JSON")->required();

  auto* simulate = app.add_subcommand(
      "simulate", "Generate scenario traffic and run it through the filter");
  simulate->add_option("--config", config_path, "Engine + scenario config file")
      ->required();
  simulate->add_option("--profile", profile_path, "Nominal profile JSON")->required();
  simulate->add_option("--out", out_path, "Output report JSON")->required();
  simulate->add_option("--verdicts", verdicts_path, "Optional per-packet verdict CSV");
  simulate->add_option("--trace", trace_path,
                       "Optional path to save the generated trace CSV");
  simulate->add_option("--seed", seed_override, "Master seed override");

  auto* replay = app.add_subcommand("replay", "Run a recorded trace through the filter");
  replay->add_option("--config", config_path, "Engine config file");
  replay->add_option("--profile", profile_path, "Nominal profile JSON")->required();
  replay->add_option("--trace", trace_path, "Input trace CSV")->required();
  replay->add_option("--out", out_path, "Output report JSON")->required();
  replay->add_option("--verdicts", verdicts_path, "Optional per-packet verdict CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(profile)) {
      return cmd_profile(config_path, trace_path, out_path);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(config_path, profile_path, out_path, verdicts_path,
                          trace_path, seed_override);
    }
    return cmd_replay(config_path, profile_path, trace_path, out_path, verdicts_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
