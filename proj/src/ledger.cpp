#include "tableguard/ledger.hpp"

#include <fstream>

#include "tableguard/error.hpp"
#include "tableguard/serialize.hpp"
#include "tableguard/strategies.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

const LedgerEntry* Ledger::find(std::string_view cluster_key) const {
  const auto it = index_.find(std::string(cluster_key));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

void Ledger::reserve_names(std::span<const std::string> names) {
  for (const auto& n : names) taken_names_.insert(text::fold(text::collapse_whitespace(n)));
}

void Ledger::store(LedgerEntry entry) {
  if (const auto* name = std::get_if<SurrogateRecord>(&entry.surrogate)) {
    taken_names_.insert(text::fold(name->full));
  }
  index_.emplace(entry.cluster_key, entries_.size());
  entries_.push_back(std::move(entry));
}

const LedgerEntry* Ledger::assign(const EntityCluster& cluster, const Policy& policy,
                                  const Gazetteer& gazetteer, const AssignContext& context) {
  if (const auto* existing = find(cluster.cluster_key)) return existing;
  if (cluster.members.empty()) fail(ErrorCode::Internal, "assign called with an empty cluster");

  const EntityKind& kind = cluster.kind();
  const PolicyRule* rule = policy.resolve(kind, context.column);
  if (!rule) {
    if (policy.default_action == DefaultAction::Reject) {
      fail(ErrorCode::PolicyGap, "no policy rule for kind " + to_string(kind) +
                                     (context.column.empty() ? std::string{}
                                                             : " in column '" + std::string(context.column) + "'"));
    }
    return nullptr;
  }
  if (rule->strategy == StrategyKind::PassThrough) return nullptr;

  const EntitySpan& rep = cluster.rep();
  DeterministicStream stream(policy.seed, cluster.cluster_key);
  LedgerEntry entry;
  entry.cluster_key = cluster.cluster_key;
  entry.kind = kind;
  entry.original_representative = rep.surface;
  entry.strategy = rule->strategy;

  switch (rule->strategy) {
    case StrategyKind::Mask:
      entry.surrogate = apply_mask(kind, rep.surface, std::get<MaskParams>(rule->params));
      break;
    case StrategyKind::Gaussian: {
      const auto& p = std::get<GaussianParams>(rule->params);
      entry.surrogate = format_like(perturb_gaussian(parse_number(rep.surface), p.sigma, stream), rep.surface);
      break;
    }
    case StrategyKind::Laplace: {
      const auto& p = std::get<LaplaceParams>(rule->params);
      entry.surrogate = format_like(
          dp_laplace(parse_number(rep.surface), p.epsilon, p.sensitivity, stream), rep.surface);
      break;
    }
    case StrategyKind::Surrogate: {
      const auto& p = std::get<SurrogateParams>(rule->params);
      if (kind.is_name()) {
        EntityCluster scoped = cluster;
        if (context.era) scoped.attributes["era"] = *context.era;
        SurrogateRecord record;
        for (int redraw = 0;; ++redraw) {
          record = surrogate_person_name(scoped, gazetteer, p, stream);
          if (!taken_names_.contains(text::fold(record.full))) break;
          if (redraw == kMaxSurrogateRedraws) {
            warnings_.push_back("surrogate collision kept for cluster '" + cluster.cluster_key +
                                "' after " + std::to_string(kMaxSurrogateRedraws) + " redraws");
            break;
          }
        }
        entry.surrogate = std::move(record);
      } else if (kind.tag == KindTag::WeekdayName) {
        entry.surrogate = surrogate_weekday(rep.surface, stream);
      } else {
        fail(ErrorCode::InvalidParams, "surrogate strategy is not available for " + to_string(kind));
      }
      break;
    }
    case StrategyKind::PassThrough:
      return nullptr;
  }
  entry.draw_count = stream.draws();
  store(std::move(entry));
  return &entries_.back();
}

std::string render(const LedgerEntry& entry, const EntitySpan& span) {
  if (const auto* name = std::get_if<SurrogateRecord>(&entry.surrogate)) {
    if (!span.kind.is_name()) {
      fail(ErrorCode::Internal, "span of kind " + to_string(span.kind) +
                                    " rendered from name entry '" + entry.cluster_key + "'");
    }
    const auto tokens = text::split_tokens(span.surface);
    const std::string& chosen = tokens.size() >= 2 ? name->full : name->given;
    switch (text::case_shape(span.surface)) {
      case text::CaseShape::Upper: return text::upper(chosen);
      case text::CaseShape::Lower: return text::fold(chosen);
      default: return chosen;
    }
  }
  if (!kinds_compatible(entry.kind, span.kind)) {
    fail(ErrorCode::Internal, "span of kind " + to_string(span.kind) + " rendered from entry '" +
                                  entry.cluster_key + "'");
  }
  return std::get<std::string>(entry.surrogate);
}

nlohmann::json entry_to_json(const LedgerEntry& e) {
  nlohmann::json j{{"cluster_key", e.cluster_key},
                   {"kind", e.kind},
                   {"original_representative", e.original_representative},
                   {"strategy", e.strategy},
                   {"draw_count", e.draw_count}};
  if (const auto* name = std::get_if<SurrogateRecord>(&e.surrogate)) {
    j["surrogate"] = *name;
  } else {
    j["surrogate"] = std::get<std::string>(e.surrogate);
  }
  return j;
}

LedgerEntry entry_from_json(const nlohmann::json& j) {
  LedgerEntry e;
  e.cluster_key = j.at("cluster_key").get<std::string>();
  e.kind = j.at("kind").get<EntityKind>();
  e.original_representative = j.at("original_representative").get<std::string>();
  e.strategy = j.at("strategy").get<StrategyKind>();
  e.draw_count = j.at("draw_count").get<std::uint64_t>();
  const auto& s = j.at("surrogate");
  if (s.is_object()) {
    e.surrogate = s.get<SurrogateRecord>();
  } else {
    e.surrogate = s.get<std::string>();
  }
  return e;
}

void Ledger::write_jsonl(std::ostream& out) const {
  for (const auto& e : entries_) out << entry_to_json(e).dump() << '\n';
}

std::size_t Ledger::export_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open ledger export " + path.string());
  write_jsonl(out);
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing ledger export " + path.string());
  return entries_.size();
}

Ledger Ledger::read_jsonl(std::istream& in) {
  Ledger ledger;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      auto entry = entry_from_json(nlohmann::json::parse(line));
      if (ledger.find(entry.cluster_key)) {
        fail(ErrorCode::Parse, "duplicate cluster_key '" + entry.cluster_key + "'");
      }
      ledger.store(std::move(entry));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::Parse, "ledger line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.code(), "ledger line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return ledger;
}

Ledger Ledger::import_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open ledger " + path.string());
  return read_jsonl(in);
}

}  // namespace tableguard
