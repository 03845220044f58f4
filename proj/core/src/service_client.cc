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

#include "augwork/service_client.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "augwork/error.h"
#include "augwork/rng.h"

namespace augwork::service {

Endpoint Endpoint::parse(std::string_view url) {
  Endpoint ep;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidInput,
                "endpoint must look like http://host[:port][/path]: " +
                    std::string(url));
  }
  ep.scheme = std::string(url.substr(0, scheme_end));
  if (ep.scheme != "http") {
    throw Error(ErrorCode::kInvalidInput,
                "only http:// endpoints are supported: " + std::string(url));
  }
  std::string_view rest = url.substr(scheme_end + 3);
  const auto slash = rest.find('/');
  std::string_view authority = rest.substr(0, slash);
  if (slash != std::string_view::npos) {
    ep.base_path = std::string(rest.substr(slash));
    while (!ep.base_path.empty() && ep.base_path.back() == '/') {
      ep.base_path.pop_back();
    }
  }
  const auto colon = authority.rfind(':');
  if (colon != std::string_view::npos) {
    ep.host = std::string(authority.substr(0, colon));
    const std::string port(authority.substr(colon + 1));
    try {
      std::size_t used = 0;
      ep.port = std::stoi(port, &used);
      if (used != port.size() || ep.port <= 0 || ep.port > 65535) throw 0;
    } catch (...) {
      throw Error(ErrorCode::kInvalidInput, "bad port in " + std::string(url));
    }
  } else {
    ep.host = std::string(authority);
  }
  if (ep.host.empty()) {
    throw Error(ErrorCode::kInvalidInput, "missing host in " + std::string(url));
  }
  return ep;
}

std::string Endpoint::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

namespace {

class HttplibTransport : public Transport {
 public:
  HttplibTransport(const Endpoint& ep, std::chrono::milliseconds timeout)
      : client_(ep.host, ep.port) {
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
        timeout - secs);
    client_.set_connection_timeout(secs.count(), usecs.count());
    client_.set_read_timeout(secs.count(), usecs.count());
    client_.set_write_timeout(secs.count(), usecs.count());
  }

  HttpResponse post(const std::string& path, const std::string& body,
                    const Headers& headers) override {
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    std::lock_guard<std::mutex> lock(mu_);
    auto res = client_.Post(path, h, body, "application/json");
    if (!res) return {0, httplib::to_string(res.error())};
    return {res->status, res->body};
  }

 private:
  std::mutex mu_;
  httplib::Client client_;
};

bool retryable(int status) { return status == 0 || status == 429 || status >= 500; }

}  // namespace

std::shared_ptr<Transport> make_http_transport(
    const Endpoint& endpoint, std::chrono::milliseconds timeout) {
  return std::make_shared<HttplibTransport>(endpoint, timeout);
}

JsonClient::JsonClient(std::shared_ptr<Transport> transport,
                       std::string base_path, RetryPolicy retry,
                       std::optional<std::string> bearer_token)
    : transport_(std::move(transport)),
      base_path_(std::move(base_path)),
      retry_(retry),
      bearer_token_(std::move(bearer_token)) {}

nlohmann::json JsonClient::post(const std::string& path,
                                const nlohmann::json& body) {
  Headers headers;
  if (bearer_token_) headers.emplace_back("Authorization", "Bearer " + *bearer_token_);
  const std::string payload = body.dump();
  auto backoff = retry_.initial_backoff;
  HttpResponse last;
  for (int attempt = 1; attempt <= retry_.attempts; ++attempt) {
    ++requests_sent_;
    last = transport_->post(base_path_ + path, payload, headers);
    if (last.status >= 200 && last.status < 300) {
      try {
        return nlohmann::json::parse(last.body);
      } catch (const nlohmann::json::parse_error&) {
        throw Error(ErrorCode::kProtocol,
                    "POST " + path + ": response is not JSON");
      }
    }
    if (!retryable(last.status)) break;
    if (attempt < retry_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff = std::chrono::milliseconds(
          static_cast<long long>(backoff.count() * retry_.multiplier));
    }
  }
  throw Error(ErrorCode::kBackendUnavailable,
              "POST " + path + " failed" +
                  (last.status ? " with HTTP " + std::to_string(last.status)
                               : ": " + last.body));
}

ResponseCache::ResponseCache(std::string directory)
    : directory_(std::move(directory)) {
  if (!directory_.empty()) std::filesystem::create_directories(directory_);
}

std::string ResponseCache::key(std::string_view scope,
                               const nlohmann::json& request) const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(std::string(scope) + "\n" + request.dump())));
  return buf;
}

std::optional<nlohmann::json> ResponseCache::get(std::string_view scope,
                                                 const nlohmann::json& request) {
  const std::string k = key(scope, request);
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = entries_.find(k); it != entries_.end()) {
    if (it->second.at("request") == request) return it->second.at("response");
    return std::nullopt;
  }
  if (directory_.empty()) return std::nullopt;
  std::ifstream in(std::filesystem::path(directory_) / (k + ".json"));
  if (!in) return std::nullopt;
  try {
    nlohmann::json entry = nlohmann::json::parse(in);
    if (entry.at("request") != request) return std::nullopt;
    entries_[k] = entry;
    return entry.at("response");
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

void ResponseCache::put(std::string_view scope, const nlohmann::json& request,
                        const nlohmann::json& response) {
  const std::string k = key(scope, request);
  nlohmann::json entry = {{"request", request}, {"response", response}};
  std::lock_guard<std::mutex> lock(mu_);
  if (!directory_.empty()) {
    const auto path = std::filesystem::path(directory_) / (k + ".json");
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << entry.dump();
    }
    std::filesystem::rename(tmp, path);
  }
  entries_[k] = std::move(entry);
}

std::size_t ResponseCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return entries_.size();
}

}  // namespace augwork::service
