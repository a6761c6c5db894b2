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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "securemail/client/client.hpp"
#include "securemail/mail/notification.hpp"

namespace {

using namespace securemail;

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SecureMail command-line client"};
  app.require_subcommand(1);

  std::string key_url = "http://127.0.0.1:8081", mail_url = "http://127.0.0.1:8080";
  std::string sender, subject, body;
  std::vector<std::string> recipients, attachments;
  auto* send = app.add_subcommand("send", "encrypt and send a message");
  send->add_option("--key-service-url", key_url);
  send->add_option("--message-service-url", mail_url);
  send->add_option("--from", sender)->required();
  send->add_option("--to", recipients)->required();
  send->add_option("--subject", subject);
  send->add_option("--body", body)->required();
  send->add_option("--attach", attachments, "files to attach");

  std::string eml, credential, save_dir;
  auto* read = app.add_subcommand("read", "open a received notification");
  read->add_option("--eml", eml, "notification .eml file")->required();
  read->add_option("--credential", credential, "bearer credential (taken from the link if omitted)");
  read->add_option("--save-attachments", save_dir, "directory for decrypted attachments");
  CLI11_PARSE(app, argc, argv);

  try {
    if (*send) {
      kernel::SecureMessage msg{subject, body, {}};
      for (const auto& path : attachments) {
        std::string data = read_text(path);
        msg.attachments.push_back(
            {std::filesystem::path(path).filename().string(), to_bytes(data)});
      }
      auto r = client::send_flow(key_url, mail_url, msg, sender, recipients);
      std::cout << "message_id: " << r.message_id << "\nnotified: " << r.dispatched << "\n";
      for (const auto& f : r.failed_recipients) std::cout << "failed: " << f << "\n";
      return r.failed_recipients.empty() ? 0 : 1;
    }
    std::string text = read_text(eml);
    if (credential.empty()) credential = client::credential_from_text(text).value_or("");
    auto view = client::read_flow(mail::extract_attachment_html(text), credential);
    std::cout << "Subject: " << view.message.subject << "\n\n" << view.message.body << "\n";
    for (const auto& a : view.message.attachments) {
      std::cout << "attachment: " << a.filename << " (" << a.data.size() << " bytes)\n";
      if (save_dir.empty()) continue;
      std::ofstream out(std::filesystem::path(save_dir) / std::filesystem::path(a.filename).filename(),
                        std::ios::binary);
      out.write(reinterpret_cast<const char*>(a.data.data()),
                static_cast<std::streamsize>(a.data.size()));
    }
    return 0;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::authentication_failed) {
      std::cerr << "WARNING: this message has been tampered with. Nothing was displayed.\n";
      return 4;
    }
    if (e.code() == ErrorCode::access_denied) {
      std::cerr << "You are not a recipient of this message.\n";
      return 5;
    }
    std::cerr << "securemail-client: " << e.what() << "\n";
    return 1;
  }
}
