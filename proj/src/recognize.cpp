#include "tableguard/recognize.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <unordered_map>

#include <unistd.h>

#include "tableguard/error.hpp"
#include "tableguard/patterns.hpp"
#include "tableguard/serialize.hpp"
#include "tableguard/text.hpp"

namespace tableguard {

namespace {

EntitySpan make_span(std::string_view text, std::size_t start, std::size_t end, EntityKind kind,
                     double confidence) {
  EntitySpan s;
  s.start = start;
  s.end = end;
  s.surface = std::string(text.substr(start, end - start));
  s.normalized = normalize_surface(kind, s.surface);
  s.kind = std::move(kind);
  s.confidence = confidence;
  return s;
}

/// Local-part and every non-TLD label made only of 'x'/'X': the output of
/// mask_email, which carries nothing to detect.
bool is_masked_email(std::string_view s) {
  const auto at = s.find('@');
  const auto last_dot = s.rfind('.');
  for (std::size_t i = 0; i < last_dot; ++i) {
    if (i == at || s[i] == '.') continue;
    if (s[i] != 'x' && s[i] != 'X') return false;
  }
  return true;
}

const std::regex& compiled(const std::string& pattern) {
  static std::mutex mutex;
  static std::unordered_map<std::string, std::regex> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(pattern);
  if (it == cache.end()) {
    try {
      it = cache.emplace(pattern, std::regex(pattern, std::regex::ECMAScript)).first;
    } catch (const std::regex_error& e) {
      fail(ErrorCode::InvalidParams, "bad custom pattern '" + pattern + "': " + e.what());
    }
  }
  return it->second;
}

}  // namespace

std::string normalize_surface(const EntityKind& kind, std::string_view surface) {
  switch (kind.tag) {
    case KindTag::PhoneNumber:
    case KindTag::CreditCardNumber:
      return text::digits_only(surface);
    case KindTag::AlphanumericId:
      return text::upper(text::collapse_whitespace(surface));
    case KindTag::NumericValue:
      return text::collapse_whitespace(surface);
    default:
      return text::fold(text::collapse_whitespace(surface));
  }
}

std::vector<EntitySpan> detect_pattern_entities(std::string_view text,
                                                const RecognizerConfig& config) {
  std::vector<EntitySpan> out;
  const auto add = [&](std::size_t start, std::size_t len, EntityKind kind) {
    if (len > 0) out.push_back(make_span(text, start, start + len, std::move(kind), kPatternConfidence));
  };

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c == '@' && config.enabled(KindTag::EmailAddress)) {
      const auto [start, end] = patterns::match_email_around(text, pos);
      if (end > start && !is_masked_email(text.substr(start, end - start))) {
        add(start, end - start, EntityKind(KindTag::EmailAddress));
      }
      continue;
    }
    if (!(text::is_alnum(c) || c == '(') || !patterns::is_word_start(text, pos)) continue;

    if (config.enabled(KindTag::PhoneNumber)) {
      add(pos, patterns::match_phone(text, pos), EntityKind(KindTag::PhoneNumber));
    }
    if (!text::is_alnum(c)) continue;
    if (config.enabled(KindTag::CreditCardNumber)) {
      add(pos, patterns::match_credit_card(text, pos), EntityKind(KindTag::CreditCardNumber));
    }
    if (config.enabled(KindTag::AlphanumericId)) {
      for (const auto& p : config.id_patterns) {
        if (const auto len = patterns::match_id(text, pos, p)) {
          add(pos, len, EntityKind(KindTag::AlphanumericId, p.subtype));
          break;
        }
      }
    }
    if (config.enabled(KindTag::WeekdayName)) {
      add(pos, patterns::match_weekday(text, pos), EntityKind(KindTag::WeekdayName));
    }
    if (config.enabled(KindTag::DateExpression)) {
      add(pos, patterns::match_date(text, pos), EntityKind(KindTag::DateExpression));
    }
    if (config.enabled(KindTag::StreetAddress)) {
      add(pos, patterns::match_street_address(text, pos), EntityKind(KindTag::StreetAddress));
    }
    if (config.enabled(KindTag::Location)) {
      add(pos, patterns::match_location(text, pos), EntityKind(KindTag::Location));
    }
  }

  if (config.enabled(KindTag::Custom)) {
    const std::string owned(text);
    for (const auto& custom : config.custom_patterns) {
      const auto& re = compiled(custom.regex);
      for (auto it = std::sregex_iterator(owned.begin(), owned.end(), re);
           it != std::sregex_iterator(); ++it) {
        const auto start = static_cast<std::size_t>(it->position());
        add(start, static_cast<std::size_t>(it->length()), EntityKind(KindTag::Custom, custom.label));
      }
    }
  }
  return out;
}

std::vector<EntitySpan> detect_name_entities(std::string_view text, const Gazetteer& gazetteer,
                                             const RecognizerConfig& config) {
  struct Word {
    std::size_t start, end;
  };
  std::vector<Word> words;
  for (std::size_t i = 0; i < text.size();) {
    if (!text::is_alpha(text[i]) || !patterns::is_word_start(text, i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() &&
           (text::is_alpha(text[j]) ||
            ((text[j] == '\'' || text[j] == '-') && j + 1 < text.size() && text::is_alpha(text[j + 1])))) {
      ++j;
    }
    if (patterns::is_word_end(text, j)) words.push_back({i, j});
    i = j == i ? i + 1 : j;
  }

  const auto word = [&](const Word& w) { return text.substr(w.start, w.end - w.start); };
  const auto capitalized = [&](const Word& w) { return text::is_upper(text[w.start]); };

  std::vector<EntitySpan> out;
  const bool want_full = config.enabled(KindTag::PersonName);
  const bool want_given = config.enabled(KindTag::GivenNameOnly);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (!capitalized(w) || !gazetteer.find(word(w), NamePart::First)) continue;
    if (i + 1 < words.size()) {
      const auto& next = words[i + 1];
      const bool adjacent = next.start == w.end + 1 && text[w.end] == ' ';
      if (adjacent && capitalized(next) &&
          (gazetteer.find(word(next), NamePart::Last) || !gazetteer.lookup(word(next)))) {
        if (want_full) {
          out.push_back(make_span(text, w.start, next.end, EntityKind(KindTag::PersonName),
                                  kFullNameConfidence));
        }
        ++i;
        continue;
      }
    }
    if (want_given) {
      out.push_back(make_span(text, w.start, w.end, EntityKind(KindTag::GivenNameOnly),
                              kGivenNameConfidence));
    }
  }
  return out;
}

std::vector<EntitySpan> resolve_overlaps(std::vector<EntitySpan> spans) {
  std::sort(spans.begin(), spans.end(), [](const EntitySpan& a, const EntitySpan& b) {
    if (a.length() != b.length()) return a.length() > b.length();
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    const int pa = kind_priority(a.kind.tag), pb = kind_priority(b.kind.tag);
    if (pa != pb) return pa < pb;
    return span_less(a, b);
  });
  std::map<std::size_t, std::size_t> taken;  // start -> end
  std::vector<EntitySpan> kept;
  for (auto& s : spans) {
    auto it = taken.lower_bound(s.end);  // first interval starting at/after s.end
    if (it != taken.begin() && std::prev(it)->second > s.start) continue;
    taken.emplace(s.start, s.end);
    kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(), span_less);
  return kept;
}

std::vector<EntityCluster> link_coreferences(std::string_view /*text*/,
                                             std::span<const EntitySpan> spans) {
  std::vector<EntityCluster> clusters;
  std::unordered_map<std::string, std::size_t> by_key;
  // (folded first token, cluster) for every full-name mention seen so far.
  std::vector<std::pair<std::string, std::size_t>> full_mentions;

  const auto join = [&](const std::string& key, const EntitySpan& span) {
    auto [it, inserted] = by_key.emplace(key, clusters.size());
    if (inserted) {
      EntityCluster c;
      c.cluster_key = key;
      clusters.push_back(std::move(c));
    }
    clusters[it->second].members.push_back(span);
    return it->second;
  };

  for (const auto& span : spans) {
    if (span.kind.tag == KindTag::PersonName) {
      const auto idx = join(make_cluster_key(span.kind, span.normalized), span);
      const auto tokens = text::split_tokens(span.normalized);
      full_mentions.emplace_back(tokens.empty() ? std::string{} : std::string(tokens.front()), idx);
    } else if (span.kind.tag == KindTag::GivenNameOnly) {
      const auto match = std::find_if(full_mentions.rbegin(), full_mentions.rend(),
                                      [&](const auto& m) { return m.first == span.normalized; });
      if (match != full_mentions.rend()) {
        clusters[match->second].members.push_back(span);
      } else {
        join(make_cluster_key(span.kind, span.normalized), span);
      }
    } else {
      join(make_cluster_key(span.kind, span.normalized), span);
    }
  }

  for (auto& c : clusters) {
    c.representative = pick_representative(c.members);
    c.cluster_key = make_cluster_key(c.rep().kind, c.rep().normalized);
  }
  return clusters;
}

std::vector<EntitySpan> BuiltinRecognizer::detect(std::string_view text,
                                                  const RecognizerConfig& config) const {
  auto spans = detect_pattern_entities(text, config);
  auto names = detect_name_entities(text, gazetteer_, config);
  spans.insert(spans.end(), std::make_move_iterator(names.begin()),
               std::make_move_iterator(names.end()));
  return spans;
}

namespace {

class TempFile {
 public:
  explicit TempFile(std::string_view contents) {
    std::string templ = (std::filesystem::temp_directory_path() / "tableguard-XXXXXX").string();
    const int fd = ::mkstemp(templ.data());
    if (fd < 0) fail(ErrorCode::Io, "cannot create temporary file");
    ::close(fd);
    path_ = templ;
    std::ofstream out(path_, std::ios::binary);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) fail(ErrorCode::Io, "cannot write " + path_.string());
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace

std::vector<EntitySpan> ExternalRecognizer::detect(std::string_view text,
                                                   const RecognizerConfig& config) const {
  const nlohmann::json request{{"text", text}, {"config", config}};
  TempFile input(request.dump());
  const std::string cmd = "{ " + command_ + "\n} < '" + input.path().string() + "'";

  std::string output;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) fail(ErrorCode::Io, "cannot start external recognizer: " + command_);
  char buffer[4096];
  std::size_t n;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  const int status = ::pclose(pipe);
  if (status != 0) {
    fail(ErrorCode::Internal, "external recognizer '" + command_ + "' exited with status " +
                                  std::to_string(status));
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(output);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("external recognizer reply: ") + e.what());
  }
  const auto& list = reply.is_object() ? reply.at("spans") : reply;
  std::vector<EntitySpan> spans;
  for (const auto& item : list) {
    auto span = item.get<EntitySpan>();
    if (span.end > text.size() || span.start >= span.end) {
      fail(ErrorCode::InvalidInput, "external recognizer returned an out-of-range span");
    }
    if (span.surface.empty()) span.surface = std::string(text.substr(span.start, span.length()));
    if (span.normalized.empty()) span.normalized = normalize_surface(span.kind, span.surface);
    validate_span(span, text);
    spans.push_back(std::move(span));
  }
  return spans;
}

std::unique_ptr<Recognizer> make_recognizer(const Policy& policy, const Gazetteer& gazetteer) {
  constexpr std::string_view kExternal = "external:";
  if (policy.recognizer.starts_with(kExternal)) {
    return std::make_unique<ExternalRecognizer>(policy.recognizer.substr(kExternal.size()));
  }
  return std::make_unique<BuiltinRecognizer>(gazetteer);
}

Recognition recognize(std::string_view text, const Recognizer& recognizer,
                      const RecognizerConfig& config) {
  auto candidates = recognizer.detect(text, config);
  std::erase_if(candidates, [&](const EntitySpan& s) {
    return s.confidence < config.confidence_threshold || !config.enabled(s.kind.tag);
  });
  Recognition r;
  r.spans = resolve_overlaps(std::move(candidates));
  r.clusters = link_coreferences(text, r.spans);
  return r;
}

Recognition recognize(std::string_view text, const Gazetteer& gazetteer,
                      const RecognizerConfig& config) {
  return recognize(text, BuiltinRecognizer(gazetteer), config);
}

}  // namespace tableguard
