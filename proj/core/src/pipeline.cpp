#include "packetscore/pipeline.hpp"

#include <utility>

namespace packetscore {

Pipeline::Pipeline(NominalProfile nominal, PipelineConfig cfg)
    : nominal_(std::move(nominal)),
      cfg_(std::move(cfg)),
      book_(identity_scorebook(cfg_.buckets, cfg_.epsilon)),
      profile_(make_measured_profile(0, cfg_.buckets)),
      cdf_(make_score_cdf(0, cfg_.epsilon, cfg_.cdf_bins)) {
  threshold_.kind = Cutoff::None;  // warm-up: nothing discarded
  threshold_.source_period = -1;
}

PacketVerdict Pipeline::process_packet(const PacketRecord& packet) {
  // Stage 1: the in-progress period absorbs the packet.
  profile_update(profile_, packet);
  // Stage 2: score against the frozen book; the score feeds this period's CDF.
  Score score = score_packet(book_, packet, cfg_.buckets);
  cdf_insert(cdf_, score);
  // Stage 3: judge against the frozen threshold.
  PacketVerdict verdict;
  verdict.packet_id = next_packet_id_++;
  verdict.score = score.value;
  verdict.discarded = should_discard(threshold_, score);
  verdict.period = period_;
  return verdict;
}

void Pipeline::rotate_period(const LoadShedInput& shed_input) {
  // Scale the nominal packet count to the finished period's actual length
  // when both spans are known; otherwise use the training rate as-is.
  std::optional<double> n_n_estimate;
  double span = profile_.duration_seconds();
  if (span > 0.0 && nominal_.mean_period_seconds > 0.0) {
    n_n_estimate = nominal_.nominal_rate * (span / nominal_.mean_period_seconds);
  }
  book_ = build_scorebook(nominal_, profile_, cfg_.buckets, cfg_.epsilon, n_n_estimate);
  threshold_ = compute_threshold(cdf_, load_shed(shed_input));
  ++period_;
  profile_ = make_measured_profile(period_, cfg_.buckets);
  cdf_ = make_score_cdf(period_, cfg_.epsilon, cfg_.cdf_bins);
}

}  // namespace packetscore
