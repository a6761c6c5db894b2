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

#include "securemail/keys/key_service_http.hpp"
#include "server_runtime.hpp"

int main(int argc, char** argv) {
  CLI::App app{"SecureMail key service"};
  std::string listen = "127.0.0.1:8081";
  std::string storage;
  std::string log_path;
  app.add_option("--listen", listen, "host:port to bind");
  app.add_option("--storage", storage, "key journal file (in-memory when omitted)");
  app.add_option("--log", log_path, "request log file (stderr when omitted)");
  CLI11_PARSE(app, argc, argv);

  using namespace securemail;
  try {
    std::unique_ptr<keys::KeyStore> store;
    if (storage.empty()) {
      store = std::make_unique<keys::InMemoryKeyStore>();
    } else {
      store = std::make_unique<keys::FileKeyStore>(storage);
    }
    keys::KeyService service(*store);
    auto log = tools::open_log(log_path);
    httplib::Server server;
    keys::install_routes(server, service);
    http::attach_request_log(server, *log);
    return tools::serve(server, listen, "key-service");
  } catch (const Error& e) {
    std::cerr << "key-service: " << e.what() << "\n";
    return 1;
  }
}
