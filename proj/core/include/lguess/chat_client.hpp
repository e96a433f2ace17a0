#pragma once

#include <memory>
#include <string>

#include "lguess/oracle.hpp"

namespace lguess {

/// Generic chat-completion wire client. `endpoint` is a full URL
/// (http[s]://host[:port]/path); the request body is the standard chat shape
/// {"model": ..., "temperature": 0, "messages": [...]} and the first choice's
/// message content is returned. Network and HTTP errors throw OracleError
/// with distinct messages.
struct HttpChatConfig {
  std::string endpoint;
  std::string model;
  std::string api_key;
  double timeout_s = 60.0;
  double temperature = 0.0;
};

std::shared_ptr<ChatClient> make_http_chat_client(const HttpChatConfig& config);

/// Reads ORACLE_ENDPOINT, ORACLE_MODEL, ORACLE_API_KEY and ORACLE_TIMEOUT_S.
/// Throws ConfigError if the endpoint or model is missing.
HttpChatConfig http_chat_config_from_env();

}  // namespace lguess
