#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tableguard/gazetteer.hpp"
#include "tableguard/ledger.hpp"
#include "tableguard/model.hpp"
#include "tableguard/recognize.hpp"

namespace tableguard {

/// Document pipeline: recognize, cluster, assign through the ledger, and
/// rewrite right-to-left over the original offsets. Policy and gazetteer are
/// borrowed and must outlive the engine.
class Engine {
 public:
  Engine(const Policy& policy, const Gazetteer& gazetteer);

  /// `prior` carries surrogates over from an earlier run (import).
  ObfuscationResult obfuscate(std::string_view text, Ledger prior = {}) const;

  /// Independent documents, each with its own ledger. Output order matches
  /// input order whatever the thread count.
  std::vector<ObfuscationResult> obfuscate_all(std::span<const std::string> documents,
                                               unsigned threads = 1) const;

  const Recognizer& recognizer() const { return *recognizer_; }
  const Policy& policy() const { return policy_; }

 private:
  const Policy& policy_;
  const Gazetteer& gazetteer_;
  std::unique_ptr<Recognizer> recognizer_;
};

ObfuscationResult obfuscate_document(std::string_view text, const Policy& policy,
                                     const Gazetteer& gazetteer);

/// Detections in `output` of policy-covered kinds that are not the
/// surrogate replacements themselves. Masked output must not be detectable
/// at all; a surrogate is only reported if it reproduces the original value.
std::vector<EntitySpan> residual_scan(std::string_view output,
                                      std::span<const Replacement> replacements,
                                      const Policy& policy, const Recognizer& recognizer);

}  // namespace tableguard
