// Copyright 2026 The SecureMail Authors.
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

#include <gtest/gtest.h>

#include <json.hpp>

#include "securemail/kernel/kernel.hpp"
#include "securemail/keys/key_service_http.hpp"
#include "support/local_server.hpp"

namespace securemail::keys {
namespace {

using nlohmann::json;

class KeyServiceHttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    install_routes(server_.server(), service_);
    server_.start();
  }

  json register_message(const std::string& id, const kernel::MessageKey& key,
                        std::vector<std::string> recipients) {
    auto cli = server_.client();
    json body = {{"message_id", id},
                 {"key_id", key.key_id()},
                 {"key_b64", base64::encode_url(key.material())},
                 {"sender_id", "alice"},
                 {"recipients", recipients}};
    auto res = cli.Post("/keys", body.dump(), "application/json");
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    return json::parse(res->body);
  }

  httplib::Result get(const std::string& path, const std::string& token) {
    auto cli = server_.client();
    return cli.Get(path, {{"Authorization", "Bearer " + token}});
  }

  InMemoryKeyStore store_;
  KeyService service_{store_};
  testing::LocalServer server_;
};

TEST_F(KeyServiceHttpTest, RegisterFetchAudit) {
  auto key = kernel::generate_key();
  auto reg = register_message("m1", key, {"bob", "carol", "dave"});
  ASSERT_EQ(reg["credentials"].size(), 3u);

  auto token = reg["credentials"][0]["token"].get<std::string>();
  auto res = get("/keys/m1", token);
  ASSERT_EQ(res->status, 200);
  auto body = json::parse(res->body);
  EXPECT_EQ(base64::decode_url(body["key_b64"].get<std::string>()).value(),
            Bytes(key.material().begin(), key.material().end()));
  EXPECT_EQ(body["key_id"], key.key_id());

  auto audit = get("/keys/m1/audit", reg["sender_token"]);
  ASSERT_EQ(audit->status, 200);
  EXPECT_EQ(json::parse(audit->body)["fetches"].size(), 1u);
  EXPECT_EQ(json::parse(audit->body)["fetches"][0]["recipient_id"],
            reg["credentials"][0]["recipient_id"]);
}

TEST_F(KeyServiceHttpTest, NotFoundAndAccessDeniedAreIndistinguishable) {
  auto a = register_message("a", kernel::generate_key(), {"bob"});
  register_message("b", kernel::generate_key(), {"bob"});
  auto token = a["credentials"][0]["token"].get<std::string>();

  auto denied = get("/keys/b", token);
  auto missing = get("/keys/does-not-exist", token);
  ASSERT_TRUE(denied && missing);
  EXPECT_EQ(denied->status, missing->status);
  EXPECT_EQ(denied->body, missing->body);

  auto cli = server_.client();
  auto no_auth = cli.Get("/keys/a");
  EXPECT_EQ(no_auth->body, missing->body);
}

TEST_F(KeyServiceHttpTest, RegistrationErrors) {
  auto key = kernel::generate_key();
  register_message("m", key, {"bob"});
  auto cli = server_.client();
  json dup = {{"message_id", "m"},
              {"key_b64", base64::encode_url(key.material())},
              {"sender_id", "alice"},
              {"recipients", {"bob"}}};
  EXPECT_EQ(cli.Post("/keys", dup.dump(), "application/json")->status, 409);

  json empty = dup;
  empty["message_id"] = "n";
  empty["recipients"] = json::array();
  EXPECT_EQ(cli.Post("/keys", empty.dump(), "application/json")->status, 400);

  json short_key = dup;
  short_key["message_id"] = "o";
  short_key["key_b64"] = base64::encode_url(Bytes(15));
  EXPECT_EQ(cli.Post("/keys", short_key.dump(), "application/json")->status, 400);

  EXPECT_EQ(cli.Post("/keys", "{not json", "application/json")->status, 400);
  EXPECT_EQ(store_.size(), 1u);
}

TEST_F(KeyServiceHttpTest, RequestLogNeverContainsKeyMaterialOrTokens) {
  testing::TempDir dir;
  auto log_path = dir.path() / "access.log";
  RequestLog log(log_path);
  testing::LocalServer logged;
  InMemoryKeyStore store;
  KeyService svc(store);
  install_routes(logged.server(), svc);
  http::attach_request_log(logged.server(), log);
  logged.start();

  auto key = kernel::generate_key();
  auto cli = logged.client();
  json body = {{"message_id", "m"},
               {"key_b64", base64::encode_url(key.material())},
               {"sender_id", "alice"},
               {"recipients", {"bob"}}};
  auto reg = json::parse(cli.Post("/keys", body.dump(), "application/json")->body);
  auto token = reg["credentials"][0]["token"].get<std::string>();
  cli.Get("/keys/m", {{"Authorization", "Bearer " + token}});
  logged.stop();

  std::ifstream in(log_path);
  std::string contents((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(contents.find("POST /keys 201"), std::string::npos);
  EXPECT_NE(contents.find("GET /keys/m 200"), std::string::npos);
  EXPECT_EQ(contents.find(base64::encode_url(key.material())), std::string::npos);
  EXPECT_EQ(contents.find(token), std::string::npos);
}

}  // namespace
}  // namespace securemail::keys
