#include "ideofactor/server.hpp"

#include "ideofactor/error.hpp"

#include <httplib.h>

#include <charconv>

namespace ideofactor {

namespace {

double number_param(const httplib::Request& req, const char* key, double fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InputError(std::string("bad ") + key + ": " + v);
  return out;
}

std::uint64_t uint_param(const httplib::Request& req, const char* key, std::uint64_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw InputError(std::string("bad ") + key + ": " + v);
  return out;
}

bool bool_param(const httplib::Request& req, const char* key, bool fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw InputError(std::string("bad ") + key + ": " + v);
}

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_header("Access-Control-Allow-Origin", "*");
  res.set_content(dump(body), "application/json");
}

}  // namespace

struct SpaceServer::Impl {
  std::shared_ptr<const Explorer> explorer;
  std::string space;
  httplib::Server http;
};

SpaceServer::SpaceServer(std::shared_ptr<const Explorer> explorer) : impl_(std::make_unique<Impl>()) {
  impl_->explorer = std::move(explorer);
  impl_->space = dump(impl_->explorer->space_json());

  impl_->http.Get("/space", [this](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(impl_->space, "application/json");
  });

  impl_->http.Get("/recommend", [this](const httplib::Request& req, httplib::Response& res) {
    try {
      if (!req.has_param("user")) throw InputError("missing user");
      ToleranceBox box{number_param(req, "theta", 0.1), number_param(req, "delta", 0.1)};
      RecommendOptions options;
      const double count = number_param(req, "count", 10);
      if (count != static_cast<int>(count)) throw InputError("count must be an integer");
      options.count = static_cast<int>(count);
      options.seed = uint_param(req, "seed", 0);
      options.exclude_consumed = bool_param(req, "exclude_consumed", true);
      reply(res, 200, impl_->explorer->recommend_json(req.get_param_value("user"), box, options));
    } catch (const InputError& e) {
      reply(res, 400, Json{{"error", e.what()}});
    }
  });
}

SpaceServer::~SpaceServer() { stop(); }

int SpaceServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->http.bind_to_any_port(host);
  return impl_->http.bind_to_port(host, port) ? port : -1;
}

void SpaceServer::serve() { impl_->http.listen_after_bind(); }

void SpaceServer::stop() { impl_->http.stop(); }

}  // namespace ideofactor
