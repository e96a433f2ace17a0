#include "lguess/chat_client.hpp"

#include <cstdlib>

#include "httplib.h"
#include "json.hpp"
#include "lguess/errors.hpp"

namespace lguess {

namespace {

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;    // /...
};

ParsedUrl split_url(const std::string& url) {
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("oracle endpoint must be a full URL: " + url);
  std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpChatConfig config) : config_(std::move(config)) {
    ParsedUrl parsed = split_url(config_.endpoint);
    origin_ = parsed.origin;
    path_ = parsed.path;
#ifndef LGUESS_HAVE_OPENSSL
    if (origin_.rfind("https://", 0) == 0)
      throw ConfigError("oracle endpoint uses https but TLS support is not built in");
#endif
  }

  std::string complete(const std::vector<ChatMessage>& messages) override {
    nlohmann::json body;
    body["model"] = config_.model;
    body["temperature"] = config_.temperature;
    auto& msgs = body["messages"] = nlohmann::json::array();
    for (const ChatMessage& m : messages)
      msgs.push_back({{"role", m.role}, {"content", m.content}});

    httplib::Client client(origin_);
    client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_s));
    client.set_read_timeout(std::chrono::duration<double>(config_.timeout_s));
    httplib::Headers headers;
    if (!config_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + config_.api_key);

    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res)
      throw OracleError("chat client: network error talking to " + origin_ + ": " +
                        httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403)
      throw OracleError("chat client: authentication failed (HTTP " +
                        std::to_string(res->status) + ")");
    if (res->status != 200)
      throw OracleError("chat client: HTTP " + std::to_string(res->status) + ": " +
                        res->body.substr(0, 200));

    nlohmann::json parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded())
      throw OracleError("chat client: response is not JSON");
    try {
      const auto& choice = parsed.at("choices").at(0);
      if (choice.contains("message"))
        return choice.at("message").at("content").get<std::string>();
      return choice.at("text").get<std::string>();
    } catch (const nlohmann::json::exception&) {
      throw OracleError("chat client: response lacks choices[0].message.content");
    }
  }

 private:
  HttpChatConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace

std::shared_ptr<ChatClient> make_http_chat_client(const HttpChatConfig& config) {
  return std::make_shared<HttpChatClient>(config);
}

HttpChatConfig http_chat_config_from_env() {
  HttpChatConfig config;
  const char* endpoint = std::getenv("ORACLE_ENDPOINT");
  const char* model = std::getenv("ORACLE_MODEL");
  const char* key = std::getenv("ORACLE_API_KEY");
  const char* timeout = std::getenv("ORACLE_TIMEOUT_S");
  if (!endpoint || !*endpoint)
    throw ConfigError("ORACLE_ENDPOINT is not set");
  if (!model || !*model) throw ConfigError("ORACLE_MODEL is not set");
  config.endpoint = endpoint;
  config.model = model;
  if (key) config.api_key = key;
  if (timeout) config.timeout_s = std::stod(timeout);
  return config;
}

}  // namespace lguess
