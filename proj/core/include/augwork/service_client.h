//
// Copyright 2026 The augwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef AUGWORK_SERVICE_CLIENT_H_
#define AUGWORK_SERVICE_CLIENT_H_

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

// JSON-over-HTTP plumbing for the external generation, mask-fill and
// translation services.
namespace augwork::service {

struct Endpoint {
  std::string scheme = "http";
  std::string host;
  int port = 80;
  std::string base_path;  // no trailing slash

  // Accepts http://host[:port][/path]. Throws Error(kInvalidInput).
  static Endpoint parse(std::string_view url);
  std::string origin() const;
};

struct HttpResponse {
  int status = 0;  // 0 means the request never got a response
  std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse post(const std::string& path, const std::string& body,
                            const Headers& headers) = 0;
};

// cpp-httplib backed transport with a per-request timeout.
std::shared_ptr<Transport> make_http_transport(
    const Endpoint& endpoint,
    std::chrono::milliseconds timeout = std::chrono::seconds(60));

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
};

// Posts JSON with retries on transport failures, 5xx and 429.
class JsonClient {
 public:
  JsonClient(std::shared_ptr<Transport> transport, std::string base_path,
             RetryPolicy retry = {},
             std::optional<std::string> bearer_token = std::nullopt);

  // Throws Error(kBackendUnavailable) once retries are exhausted or on a
  // non-retryable HTTP status, Error(kProtocol) on a non-JSON body.
  nlohmann::json post(const std::string& path, const nlohmann::json& body);

  std::size_t requests_sent() const { return requests_sent_; }

 private:
  std::shared_ptr<Transport> transport_;
  std::string base_path_;
  RetryPolicy retry_;
  std::optional<std::string> bearer_token_;
  std::size_t requests_sent_ = 0;
};

// Response cache keyed by the canonical request body. Optionally mirrored
// to a directory so repeated experiment runs replay identical responses.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::string directory);

  std::optional<nlohmann::json> get(std::string_view scope,
                                    const nlohmann::json& request);
  void put(std::string_view scope, const nlohmann::json& request,
           const nlohmann::json& response);
  std::size_t size() const;

 private:
  std::string key(std::string_view scope, const nlohmann::json& request) const;

  mutable std::mutex mu_;
  std::string directory_;
  std::map<std::string, nlohmann::json> entries_;
};

}  // namespace augwork::service

#endif  // AUGWORK_SERVICE_CLIENT_H_
