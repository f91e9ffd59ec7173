// Copyright 2026 The vprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef VP_TESTING_FAKE_SERVER_H_
#define VP_TESTING_FAKE_SERVER_H_

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "vp/lm/model.h"

namespace httplib {
class Server;
}

namespace vp::testing {

struct RecordedRequest {
  std::string method;
  std::string path;
  std::string body;
  std::string authorization;
};

struct CannedResponse {
  int status = 200;
  std::string body;
  int delay_ms = 0;  // sleep before answering, to provoke client timeouts
};

// In-process /v1 server for client tests. Routes are answered, in order of
// precedence, by queued one-shot responses, fixed responses, and finally the
// backing model (when one is given). Every request is recorded.
class FakeServer {
 public:
  explicit FakeServer(std::shared_ptr<const LanguageModel> model = nullptr);
  ~FakeServer();
  FakeServer(const FakeServer&) = delete;
  FakeServer& operator=(const FakeServer&) = delete;

  std::string endpoint() const;

  void Enqueue(const std::string& path, CannedResponse response);
  void SetFixed(const std::string& path, CannedResponse response);
  // Requests without "Bearer <token>" get a 401.
  void RequireToken(std::string token);

  std::vector<RecordedRequest> requests() const;
  std::size_t request_count(const std::string& path) const;

 private:
  CannedResponse Handle(const RecordedRequest& request);
  CannedResponse FromModel(const std::string& path, const std::string& body);

  std::shared_ptr<const LanguageModel> model_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  std::map<std::string, std::deque<CannedResponse>> queued_;
  std::map<std::string, CannedResponse> fixed_;
  std::optional<std::string> token_;
  std::vector<RecordedRequest> requests_;
};

// Error payload in the protocol's shape.
std::string ErrorBody(const std::string& code, const std::string& message,
                      bool retriable);

}  // namespace vp::testing

#endif  // VP_TESTING_FAKE_SERVER_H_
