#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tableguard/gazetteer.hpp"
#include "tableguard/model.hpp"

namespace tableguard {

inline constexpr double kPatternConfidence = 1.0;
inline constexpr double kFullNameConfidence = 0.9;
inline constexpr double kGivenNameConfidence = 0.6;

/// Phone, credit card, email, configured ids, dates, weekdays, street
/// addresses, "City, ST" locations and policy-defined custom patterns.
/// Overlapping candidates are all returned; see resolve_overlaps.
std::vector<EntitySpan> detect_pattern_entities(std::string_view text,
                                                const RecognizerConfig& config);

/// Capitalized tokens that hit the first-name table, extended by one
/// following capitalized token when it is a known last name or not in the
/// gazetteer at all.
std::vector<EntitySpan> detect_name_entities(std::string_view text, const Gazetteer& gazetteer,
                                             const RecognizerConfig& config);

/// Non-overlapping, sorted. Longer span wins, then confidence, then kind
/// priority, then the leftmost.
std::vector<EntitySpan> resolve_overlaps(std::vector<EntitySpan> spans);

/// Rule-based clustering over finalized spans; clusters come back in order
/// of first occurrence.
std::vector<EntityCluster> link_coreferences(std::string_view text,
                                             std::span<const EntitySpan> spans);

struct Recognition {
  std::vector<EntitySpan> spans;
  std::vector<EntityCluster> clusters;
};

/// Pluggable detection stage. Implementations only propose spans; threshold
/// filtering, overlap resolution and linking are shared.
class Recognizer {
 public:
  virtual ~Recognizer() = default;
  virtual std::vector<EntitySpan> detect(std::string_view text,
                                         const RecognizerConfig& config) const = 0;
};

class BuiltinRecognizer final : public Recognizer {
 public:
  explicit BuiltinRecognizer(const Gazetteer& gazetteer) : gazetteer_(gazetteer) {}
  std::vector<EntitySpan> detect(std::string_view text,
                                 const RecognizerConfig& config) const override;

 private:
  const Gazetteer& gazetteer_;
};

/// Runs `command` through /bin/sh once per call. The request
/// `{"text": ..., "config": {...}}` is written to its stdin; it must print a
/// JSON array of spans (or `{"spans": [...]}`) on stdout.
class ExternalRecognizer final : public Recognizer {
 public:
  explicit ExternalRecognizer(std::string command) : command_(std::move(command)) {}
  std::vector<EntitySpan> detect(std::string_view text,
                                 const RecognizerConfig& config) const override;

 private:
  std::string command_;
};

/// From the policy's `recognizer` field: "builtin" or "external:<command>".
std::unique_ptr<Recognizer> make_recognizer(const Policy& policy, const Gazetteer& gazetteer);

Recognition recognize(std::string_view text, const Recognizer& recognizer,
                      const RecognizerConfig& config);
Recognition recognize(std::string_view text, const Gazetteer& gazetteer,
                      const RecognizerConfig& config);

/// Canonical normalized form for a surface of the given kind.
std::string normalize_surface(const EntityKind& kind, std::string_view surface);

}  // namespace tableguard
