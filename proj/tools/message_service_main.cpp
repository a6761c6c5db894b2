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

#include <CLI11.hpp>

#include "securemail/mail/message_service_http.hpp"
#include "server_runtime.hpp"

int main(int argc, char** argv) {
  CLI::App app{"SecureMail message service"};
  std::string listen = "127.0.0.1:8080";
  std::string outbox = "outbox";
  std::string store_dir;
  std::string static_dir;
  std::string log_path;
  securemail::mail::MessageServiceConfig config{"http://127.0.0.1:8080", "http://127.0.0.1:8081"};
  app.add_option("--listen", listen, "host:port to bind");
  app.add_option("--outbox", outbox, "directory receiving notification .eml files");
  app.add_option("--store-dir", store_dir, "message store directory (in-memory when omitted)");
  app.add_option("--public-url", config.public_base_url, "externally visible base URL");
  app.add_option("--key-service-url", config.key_service_url, "key service base URL");
  app.add_option("--static-dir", static_dir, "directory served under /static");
  app.add_option("--log", log_path, "request log file (stderr when omitted)");
  CLI11_PARSE(app, argc, argv);

  using namespace securemail;
  try {
    std::unique_ptr<mail::MessageStore> store;
    if (store_dir.empty()) {
      store = std::make_unique<mail::InMemoryMessageStore>();
    } else {
      store = std::make_unique<mail::DirectoryMessageStore>(store_dir);
    }
    mail::OutboxTransport transport(outbox);
    mail::MessageService service(*store, transport, config);
    auto log = tools::open_log(log_path);
    httplib::Server server;
    mail::install_routes(server, service, static_dir);
    http::attach_request_log(server, *log);
    return tools::serve(server, listen, "message-service");
  } catch (const Error& e) {
    std::cerr << "message-service: " << e.what() << "\n";
    return 1;
  }
}
