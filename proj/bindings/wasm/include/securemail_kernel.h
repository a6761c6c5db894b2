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

/* C ABI of the message kernel, shared by the WebAssembly module loaded in the
 * browser and the native shared library.
 *
 * Every buffer argument is a (pointer, length) pair. Results are returned
 * through `out`/`out_len` in a buffer allocated by the library, which the
 * caller releases with sm_free. Functions return SM_OK or 1 + the ordinal of
 * the failing error kind (see SM_ERR_*); on failure nothing is allocated.
 *
 * Key blob: 16 bytes of key material followed by the UTF-8 key id.
 * Envelope: the binary envelope layout (not base64).
 * Message JSON (encrypt input / decrypt output):
 *   {"message_id", "sender_id", "subject", "body",
 *    "attachments": [{"filename", "data_b64"}]}
 * Encrypted JSON (encrypt output / decrypt input):
 *   {"message_id", "body", "attachments": [...]} with base64url envelopes,
 *   the same shape as the message submission body. */

#ifndef SECUREMAIL_KERNEL_EXPORTS_H_
#define SECUREMAIL_KERNEL_EXPORTS_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__EMSCRIPTEN__)
#include <emscripten/emscripten.h>
#define SM_EXPORT EMSCRIPTEN_KEEPALIVE
#else
#define SM_EXPORT __attribute__((visibility("default")))
#endif

enum {
  SM_OK = 0,
  SM_ERR_ENTROPY_UNAVAILABLE = 1,
  SM_ERR_INVALID_KEY = 2,
  SM_ERR_AUTHENTICATION_FAILED = 3,
  SM_ERR_MALFORMED_ENVELOPE = 4,
  SM_ERR_UNSUPPORTED_VERSION = 5,
  SM_ERR_ATTACHMENT_TOO_LARGE = 6,
  SM_ERR_INVALID_REQUEST = 16,
};

SM_EXPORT uint8_t* sm_alloc(size_t size);
/* Wipes then releases a buffer from sm_alloc or from any `out` result. */
SM_EXPORT void sm_free(uint8_t* data, size_t size);

SM_EXPORT int32_t sm_generate_key(uint8_t** out, size_t* out_len);

/* `ad` is the canonical associated-data encoding. */
SM_EXPORT int32_t sm_seal(const uint8_t* key, size_t key_len, const uint8_t* plaintext,
                          size_t plaintext_len, const uint8_t* ad, size_t ad_len, uint8_t** out,
                          size_t* out_len);

SM_EXPORT int32_t sm_open(const uint8_t* key, size_t key_len, const uint8_t* envelope,
                          size_t envelope_len, uint8_t** out, size_t* out_len);

SM_EXPORT int32_t sm_encrypt_message(const uint8_t* key, size_t key_len, const uint8_t* message_json,
                                     size_t message_json_len, uint8_t** out, size_t* out_len);

SM_EXPORT int32_t sm_decrypt_message(const uint8_t* key, size_t key_len,
                                     const uint8_t* encrypted_json, size_t encrypted_json_len,
                                     uint8_t** out, size_t* out_len);

#ifdef __cplusplus
}
#endif

#endif /* SECUREMAIL_KERNEL_EXPORTS_H_ */
