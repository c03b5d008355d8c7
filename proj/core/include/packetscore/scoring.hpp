#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "packetscore/packet.hpp"
#include "packetscore/profiling.hpp"

namespace packetscore {

/// Probability floor applied to both sides of the nominal/measured ratio.
/// Keeps every scorebook entry finite and bounds any single attribute's
/// contribution to |ln(epsilon)|.
inline constexpr double kDefaultEpsilon = 1e-6;

/// Log-domain lookup tables: entry = ln(max(P'_n, eps) / max(P_m, eps)) per
/// bucket. A packet's score is log_prior plus one entry per attribute, so
/// higher means more legitimate-looking. When a joint pair is configured its
/// two single-attribute tables are left empty and the joint table stands in
/// for both.
struct Scorebook {
  std::int64_t period_id = 0;  // the measured period this book was built from
  std::array<std::vector<double>, kAttributeCount> entries;
  std::vector<double> joint_entries;
  double log_prior = 0.0;  // ln(N_n_estimate / N_m), floored at 1 packet each
  double epsilon = kDefaultEpsilon;
  BucketConfig config;
};

/// Log-domain legitimacy score. Ordinal: only comparisons against the
/// threshold matter, not the absolute value.
struct Score {
  double value = 0.0;
};

/// Builds the book for the period `measured` covers. `n_n_estimate`
/// overrides the nominal packet count when the caller has a better guess
/// (e.g. nominal_rate scaled to the period's actual length).
/// Throws ProfileConfigMismatchError when the profiles disagree with cfg.
Scorebook build_scorebook(const NominalProfile& nominal,
                          const MeasuredProfile& measured, const BucketConfig& cfg,
                          double epsilon = kDefaultEpsilon,
                          std::optional<double> n_n_estimate = std::nullopt);

/// All-zero book: every packet scores exactly 0. Stands in during warm-up
/// when no finished period exists yet; period_id is -1.
Scorebook identity_scorebook(const BucketConfig& cfg,
                             double epsilon = kDefaultEpsilon);

/// Canonical-order sum of matching entries. Hot path: bucket lookups and
/// adds only, no allocation.
Score score_packet(const Scorebook& book, const PacketRecord& packet,
                   const BucketConfig& cfg);

/// The same quantity in product form, computed straight from the profiles
/// without building a book: (N_n/N_m) * prod(floored ratio quotients).
/// Kept as an independent code path so the two routes can cross-check each
/// other: exp(score_packet(...)) must equal this within relative 1e-9.
double clp_direct(const PacketRecord& packet, const NominalProfile& nominal,
                  const MeasuredProfile& measured, const BucketConfig& cfg,
                  double epsilon = kDefaultEpsilon,
                  std::optional<double> n_n_estimate = std::nullopt);

std::string scorebook_to_json(const Scorebook& book);
Scorebook scorebook_from_json(const std::string& text);
void save_scorebook(const Scorebook& book, const std::string& path);
Scorebook load_scorebook(const std::string& path);

}  // namespace packetscore
