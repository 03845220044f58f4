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

#include <chrono>
#include <string>

#include <gtest/gtest.h>

#include "augwork/error.h"
#include "stub_transport.h"
#include "test_util.h"

namespace augwork::service {
namespace {

using augwork::testing::json_response;
using augwork::testing::StubTransport;

RetryPolicy fast_retry() {
  RetryPolicy r;
  r.initial_backoff = std::chrono::milliseconds(1);
  return r;
}

TEST(Endpoint, Parse) {
  const auto e = Endpoint::parse("http://localhost:8081/api/");
  EXPECT_EQ(e.host, "localhost");
  EXPECT_EQ(e.port, 8081);
  EXPECT_EQ(e.base_path, "/api");
  EXPECT_EQ(e.origin(), "http://localhost:8081");
  const auto d = Endpoint::parse("http://example.org");
  EXPECT_EQ(d.port, 80);
  EXPECT_EQ(d.base_path, "");
  EXPECT_THROW(Endpoint::parse("https://example.org"), Error);
  EXPECT_THROW(Endpoint::parse("example.org"), Error);
  EXPECT_THROW(Endpoint::parse("http://:80"), Error);
  EXPECT_THROW(Endpoint::parse("http://h:99999"), Error);
}

TEST(JsonClient, RetriesTransientFailures) {
  auto t = std::make_shared<StubTransport>();
  int calls = 0;
  t->on("/x", [&](const nlohmann::json&) {
    ++calls;
    if (calls == 1) return HttpResponse{503, ""};
    if (calls == 2) return HttpResponse{429, ""};
    return json_response({{"ok", true}});
  });
  JsonClient client(t, "", fast_retry());
  EXPECT_EQ(client.post("/x", {{"a", 1}}).at("ok"), true);
  EXPECT_EQ(client.requests_sent(), 3u);
}

TEST(JsonClient, ClientErrorIsNotRetried) {
  auto t = std::make_shared<StubTransport>();
  t->on("/x", [](const nlohmann::json&) { return HttpResponse{400, "{}"}; });
  JsonClient client(t, "", fast_retry());
  try {
    client.post("/x", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(t->count("/x"), 1u);
}

TEST(JsonClient, NonJsonBodyIsProtocolError) {
  auto t = std::make_shared<StubTransport>();
  t->on("/x", [](const nlohmann::json&) { return HttpResponse{200, "<html>"}; });
  JsonClient client(t, "", fast_retry());
  try {
    client.post("/x", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
  }
}

TEST(JsonClient, BearerTokenAndBasePath) {
  auto t = std::make_shared<StubTransport>();
  t->on("/base/x", [](const nlohmann::json&) { return json_response({}); });
  JsonClient client(t, "/base", fast_retry(), std::string("secret"));
  client.post("/x", {});
  ASSERT_EQ(t->calls.size(), 1u);
  ASSERT_EQ(t->calls[0].headers.size(), 1u);
  EXPECT_EQ(t->calls[0].headers[0].second, "Bearer secret");
}

TEST(HttpTransport, UnreachableHostIsUnavailable) {
  auto transport = make_http_transport(Endpoint::parse("http://127.0.0.1:1"), std::chrono::milliseconds(200));
  JsonClient client(transport, "", fast_retry());
  try {
    client.post("/generate", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBackendUnavailable);
  }
  EXPECT_EQ(client.requests_sent(), 3u);
}

TEST(Cache, MemoryAndDirectory) {
  augwork::testing::TempDir dir;
  const nlohmann::json req = {{"prompt", "p"}, {"seed", 1}};
  {
    ResponseCache cache(dir.path().string());
    EXPECT_FALSE(cache.get("s", req).has_value());
    cache.put("s", req, {{"text", "t"}});
    EXPECT_EQ(cache.get("s", req)->at("text"), "t");
    EXPECT_FALSE(cache.get("other", req).has_value());
    EXPECT_EQ(cache.size(), 1u);
  }
  ResponseCache reopened(dir.path().string());
  EXPECT_EQ(reopened.get("s", req)->at("text"), "t");
  ResponseCache memory_only;
  EXPECT_FALSE(memory_only.get("s", req).has_value());
}

}  // namespace
}  // namespace augwork::service
