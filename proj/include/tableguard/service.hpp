#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "tableguard/gazetteer.hpp"
#include "tableguard/model.hpp"
#include "tableguard/table.hpp"

namespace httplib {
class Server;
}

namespace tableguard {

inline constexpr std::size_t kDefaultPageSize = 100;
inline constexpr std::size_t kMaxPageSize = 1000;

struct HttpResponse {
  int status = 200;
  std::string body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Read-only view over one table. The raw table is obfuscated once in
/// materialize() and then dropped; every endpoint serves the obfuscated copy
/// and answers 503 until it exists.
class QueryService {
 public:
  QueryService(TableData raw, Policy policy, std::shared_ptr<const Gazetteer> gazetteer);

  /// Loads and validates all inputs without obfuscating.
  static std::unique_ptr<QueryService> prepare(const std::filesystem::path& table,
                                               const std::filesystem::path& dictionary,
                                               const std::filesystem::path& policy,
                                               const std::filesystem::path& gazetteer);

  void materialize(unsigned threads = 1);
  bool ready() const { return ready_.load(std::memory_order_acquire); }

  HttpResponse handle(std::string_view path, const QueryParams& query) const;

  /// Only meaningful once ready().
  const TableData& view() const { return view_; }
  const Ledger& ledger() const { return ledger_; }
  const Policy& policy() const { return policy_; }

 private:
  HttpResponse rows(const QueryParams& query) const;

  std::optional<TableData> raw_;
  Policy policy_;
  std::shared_ptr<const Gazetteer> gazetteer_;
  TableData view_;
  Ledger ledger_;
  std::string metrics_body_;
  std::atomic<bool> ready_{false};
};

/// Registers the /v1 routes on an httplib server.
void bind_routes(httplib::Server& server, const QueryService& service);

/// Splits "host:port" (host optional, default 127.0.0.1).
std::pair<std::string, int> parse_bind_address(std::string_view bind);

/// Binds, materializes in the background and serves until the server stops.
int serve(std::unique_ptr<QueryService> service, std::string_view bind, unsigned threads = 1);

}  // namespace tableguard
