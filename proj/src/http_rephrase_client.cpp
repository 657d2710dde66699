// Copyright 2026 The seldqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>
#include <json.hpp>

#include "seldqa/captioner.hpp"

namespace seldqa {

namespace {

// Splits "https://host:port/v1/chat/completions" into the scheme-host-port
// part httplib wants and the request path.
std::pair<std::string, std::string> SplitEndpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw RephraseTransportError("endpoint must include a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpRephraseClient::HttpRephraseClient(std::string endpoint, std::string model,
                                       std::string api_key,
                                       std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      api_key_(std::move(api_key)),
      timeout_(timeout) {}

std::string HttpRephraseClient::Complete(const std::string& prompt) {
  const auto [host, path] = SplitEndpoint(endpoint_);
  // A client per call keeps this safe to use from several threads.
  httplib::Client cli(host);
  if (!cli.is_valid())
    throw RephraseTransportError("unsupported endpoint " + endpoint_);
  cli.set_connection_timeout(timeout_);
  cli.set_read_timeout(timeout_);
  cli.set_write_timeout(timeout_);

  httplib::Headers headers;
  if (!api_key_.empty())
    headers.emplace("Authorization", "Bearer " + api_key_);

  const nlohmann::json body = {
      {"model", model_},
      {"messages", nlohmann::json::array(
                       {{{"role", "user"}, {"content", prompt}}})}};

  auto res = cli.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw RephraseTransportError("request to " + endpoint_ + " failed: " +
                                 httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300)
    throw RephraseTransportError("HTTP " + std::to_string(res->status) +
                                 " from " + endpoint_);
  try {
    const auto reply = nlohmann::json::parse(res->body);
    return reply.at("choices").at(0).at("message").at("content")
        .get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw RephraseTransportError(std::string("malformed completion reply: ") +
                                 e.what());
  }
}

}  // namespace seldqa
