#include "tableguard/service.hpp"

#include <charconv>
#include <csignal>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "tableguard/error.hpp"
#include "tableguard/metrics.hpp"
#include "tableguard/serialize.hpp"

namespace tableguard {

using nlohmann::json;

namespace {

HttpResponse json_response(int status, const json& body) { return {status, body.dump()}; }

HttpResponse error_response(int status, std::string_view message) {
  return json_response(status, json{{"error", message}});
}

// Non-negative decimal integer, or nullopt.
std::optional<std::size_t> parse_count(std::string_view s) {
  if (s.empty() || s.size() > 12) return std::nullopt;
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

httplib::Server* g_server = nullptr;

extern "C" void stop_on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

QueryService::QueryService(TableData raw, Policy policy, std::shared_ptr<const Gazetteer> gazetteer)
    : raw_(std::move(raw)), policy_(std::move(policy)), gazetteer_(std::move(gazetteer)) {
  policy_.validate();
  if (!gazetteer_) fail(ErrorCode::InvalidInput, "service needs a gazetteer");
}

std::unique_ptr<QueryService> QueryService::prepare(const std::filesystem::path& table,
                                                    const std::filesystem::path& dictionary,
                                                    const std::filesystem::path& policy,
                                                    const std::filesystem::path& gazetteer) {
  const auto dict = DataDictionary::load(dictionary);
  auto loaded_policy = load_policy(policy);
  auto g = std::make_shared<const Gazetteer>(Gazetteer::load(gazetteer));
  auto data = load_table(table, &dict);
  return std::make_unique<QueryService>(std::move(data), std::move(loaded_policy), std::move(g));
}

void QueryService::materialize(unsigned threads) {
  if (ready()) return;
  auto result = obfuscate_table(*raw_, policy_, *gazetteer_, threads);
  view_ = std::move(result.table);
  ledger_ = std::move(result.ledger);
  raw_.reset();
  metrics_body_ = privacy_report(view_).dump();
  ready_.store(true, std::memory_order_release);
}

HttpResponse QueryService::rows(const QueryParams& query) const {
  std::size_t offset = 0;
  std::size_t limit = kDefaultPageSize;
  for (const auto& [name, target] :
       {std::pair<std::string_view, std::size_t*>{"offset", &offset}, {"limit", &limit}}) {
    const auto n = query.count(std::string(name));
    if (n == 0) continue;
    if (n > 1) return error_response(400, std::string(name) + " given more than once");
    const auto v = parse_count(query.find(std::string(name))->second);
    if (!v) return error_response(400, std::string(name) + " must be a non-negative integer");
    *target = *v;
  }
  if (limit == 0 || limit > kMaxPageSize) {
    return error_response(400, "limit must lie in [1, " + std::to_string(kMaxPageSize) + "]");
  }
  json out = json::array();
  const std::size_t n = view_.rows.size();
  for (std::size_t r = std::min(offset, n); r < std::min(n, offset + limit); ++r) {
    out.push_back(row_to_json(view_, r));
  }
  return json_response(200, out);
}

HttpResponse QueryService::handle(std::string_view path, const QueryParams& query) const {
  const bool is_known = path == "/v1/health" || path == "/v1/rows" || path == "/v1/metrics" || path == "/v1/policy";
  if (!is_known) return error_response(404, "not found");
  if (!ready()) {
    if (path == "/v1/health") return json_response(503, json{{"status", "loading"}});
    return error_response(503, "table is still loading");
  }
  if (path == "/v1/health") return json_response(200, json{{"status", "ok"}});
  if (path == "/v1/rows") return rows(query);
  if (path == "/v1/metrics") return {200, metrics_body_};
  return json_response(200, sanitized_policy_json(policy_));
}

void bind_routes(httplib::Server& server, const QueryService& service) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    HttpResponse out;
    try {
      QueryParams query(req.params.begin(), req.params.end());
      out = service.handle(req.path, query);
    } catch (...) {
      out = error_response(500, "internal error");  // never echo the exception text
    }
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server.Get(R"(/v1/.*)", handler);
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content(json{{"error", "not found"}}.dump(), "application/json");
  });
}

std::pair<std::string, int> parse_bind_address(std::string_view bind) {
  std::string host = "127.0.0.1";
  std::string_view port = bind;
  if (const auto colon = bind.rfind(':'); colon != std::string_view::npos) {
    if (colon > 0) host = std::string(bind.substr(0, colon));
    port = bind.substr(colon + 1);
  }
  const auto p = parse_count(port);
  if (!p || *p > 65535) fail(ErrorCode::InvalidInput, "bad bind address '" + std::string(bind) + "'");
  return {host, static_cast<int>(*p)};
}

int serve(std::unique_ptr<QueryService> service, std::string_view bind, unsigned threads) {
  const auto [host, port] = parse_bind_address(bind);
  httplib::Server server;
  bind_routes(server, *service);
  if (!server.bind_to_port(host, port)) fail(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  std::cerr << "listening on " << host << ':' << port << '\n';

  g_server = &server;
  std::signal(SIGINT, stop_on_signal);
  std::signal(SIGTERM, stop_on_signal);

  std::exception_ptr load_error;
  std::jthread loader([&] {
    try {
      service->materialize(threads);
      std::cerr << "ready: " << service->view().rows.size() << " rows\n";
    } catch (...) {
      load_error = std::current_exception();
      server.wait_until_ready();
      server.stop();
    }
  });
  server.listen_after_bind();
  loader.join();
  g_server = nullptr;
  if (load_error) std::rethrow_exception(load_error);
  return 0;
}

}  // namespace tableguard
