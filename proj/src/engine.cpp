#include "tableguard/engine.hpp"

#include <algorithm>

#include "tableguard/error.hpp"
#include "tableguard/parallel.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

namespace {

std::vector<std::string> original_names(std::span<const EntityCluster> clusters) {
  std::vector<std::string> names;
  for (const auto& c : clusters) {
    if (c.kind().is_name()) names.push_back(c.rep().surface);
  }
  return names;
}

std::string rewrite(std::string_view text, std::span<const Replacement> replacements) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (const auto& r : replacements) {
    out.append(text.substr(pos, r.original.start - pos));
    out += r.replacement;
    pos = r.original.end;
  }
  out.append(text.substr(pos));
  return out;
}

}  // namespace

Engine::Engine(const Policy& policy, const Gazetteer& gazetteer)
    : policy_(policy), gazetteer_(gazetteer), recognizer_(make_recognizer(policy, gazetteer)) {
  policy_.validate();
}

ObfuscationResult Engine::obfuscate(std::string_view text, Ledger prior) const {
  const Recognition rec = recognize(text, *recognizer_, policy_.recognizer_config);

  auto ledger = std::make_shared<Ledger>(std::move(prior));
  const auto reserved = original_names(rec.clusters);
  ledger->reserve_names(reserved);

  ObfuscationResult result;
  for (const auto& cluster : rec.clusters) {
    const LedgerEntry* entry = nullptr;
    try {
      entry = ledger->assign(cluster, policy_, gazetteer_);
    } catch (const Error& e) {
      const EntitySpan& rep = cluster.rep();
      throw Error(e.code(), "span [" + std::to_string(rep.start) + "," + std::to_string(rep.end) + ") " +
                                to_string(rep.kind) + ": " + e.what());
    }
    if (!entry) continue;
    for (const auto& span : cluster.members) {
      result.replacements.push_back({span, render(*entry, span), entry->strategy});
    }
  }
  std::sort(result.replacements.begin(), result.replacements.end(),
            [](const Replacement& a, const Replacement& b) { return span_less(a.original, b.original); });
  for (std::size_t i = 1; i < result.replacements.size(); ++i) {
    if (result.replacements[i].original.start < result.replacements[i - 1].original.end) {
      fail(ErrorCode::Internal, "overlapping replacements after resolution");
    }
  }

  result.text = rewrite(text, result.replacements);
  result.residual_scan = residual_scan(result.text, result.replacements, policy_, *recognizer_);
  result.warnings = ledger->warnings();
  for (const auto& span : result.residual_scan) {
    result.warnings.push_back("residual " + to_string(span.kind) + " at [" + std::to_string(span.start) +
                              "," + std::to_string(span.end) + ")");
  }
  result.ledger = std::move(ledger);
  return result;
}

std::vector<ObfuscationResult> Engine::obfuscate_all(std::span<const std::string> documents,
                                                     unsigned threads) const {
  std::vector<ObfuscationResult> out(documents.size());
  parallel_chunks(documents.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = obfuscate(documents[i]);
  });
  return out;
}

ObfuscationResult obfuscate_document(std::string_view text, const Policy& policy,
                                     const Gazetteer& gazetteer) {
  return Engine(policy, gazetteer).obfuscate(text);
}

std::vector<EntitySpan> residual_scan(std::string_view output,
                                      std::span<const Replacement> replacements,
                                      const Policy& policy, const Recognizer& recognizer) {
  struct Range {
    std::size_t start, end;
    const Replacement* source;
  };
  std::vector<Range> ranges;
  std::ptrdiff_t shift = 0;
  for (const auto& r : replacements) {
    const auto start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(r.original.start) + shift);
    ranges.push_back({start, start + r.replacement.size(), &r});
    shift += static_cast<std::ptrdiff_t>(r.replacement.size()) -
             static_cast<std::ptrdiff_t>(r.original.length());
  }

  const Recognition rec = recognize(output, recognizer, policy.recognizer_config);
  std::vector<EntitySpan> residual;
  for (const auto& span : rec.spans) {
    if (!policy.covers(span.kind)) continue;
    const auto it = std::find_if(ranges.begin(), ranges.end(), [&](const Range& r) {
      return r.start <= span.start && span.end <= r.end;
    });
    if (it != ranges.end() && it->source->strategy != StrategyKind::Mask &&
        span.normalized != it->source->original.normalized) {
      continue;
    }
    residual.push_back(span);
  }
  return residual;
}

}  // namespace tableguard
