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
#include "testing/fake_server.h"

#include <chrono>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "vp/core/json_io.h"
#include "vp/core/rng.h"
#include "vp/generation/generator.h"
#include "vp/generation/transforms.h"

namespace vp::testing {
namespace {

using nlohmann::json;

json TracesJson(const TraceSeq& traces) {
  json out = json::array();
  for (const TokenTrace& t : traces) out.push_back(TraceToJson(t));
  return out;
}

GenerationConfig ConfigFromJson(const json& body) {
  GenerationConfig c;
  const json& cfg = body.at("config");
  if (cfg.contains("top_k")) c.top_k = cfg["top_k"].get<int>();
  if (cfg.contains("top_p")) c.top_p = cfg["top_p"].get<double>();
  if (cfg.contains("typical_p")) c.typical_p = cfg["typical_p"].get<double>();
  if (cfg.contains("temperature")) c.temperature = cfg["temperature"].get<double>();
  if (cfg.contains("repetition_penalty")) {
    c.repetition_penalty = cfg["repetition_penalty"].get<double>();
  }
  c.seed = cfg.value("seed", std::uint64_t{0});
  c.num_candidates = body.at("n").get<int>();
  c.max_new_tokens = body.at("max_new_tokens").get<int>();
  return c;
}

}  // namespace

std::string ErrorBody(const std::string& code, const std::string& message,
                      bool retriable) {
  return json{{"error", {{"code", code}, {"message", message}, {"retriable", retriable}}}}
      .dump();
}

FakeServer::FakeServer(std::shared_ptr<const LanguageModel> model)
    : model_(std::move(model)), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    RecordedRequest r{req.method, req.path, req.body,
                      req.get_header_value("Authorization")};
    const CannedResponse out = Handle(r);
    if (out.delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(out.delay_ms));
    }
    res.status = out.status;
    res.set_content(out.body, "application/json");
  };
  server_->Get(R"(/v1/.*)", handler);
  server_->Post(R"(/v1/.*)", handler);
  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("fake server: cannot bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

FakeServer::~FakeServer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string FakeServer::endpoint() const {
  return "http://127.0.0.1:" + std::to_string(port_);
}

void FakeServer::Enqueue(const std::string& path, CannedResponse response) {
  std::lock_guard lock(mu_);
  queued_[path].push_back(std::move(response));
}

void FakeServer::SetFixed(const std::string& path, CannedResponse response) {
  std::lock_guard lock(mu_);
  fixed_[path] = std::move(response);
}

void FakeServer::RequireToken(std::string token) {
  std::lock_guard lock(mu_);
  token_ = std::move(token);
}

std::vector<RecordedRequest> FakeServer::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::size_t FakeServer::request_count(const std::string& path) const {
  std::lock_guard lock(mu_);
  std::size_t n = 0;
  for (const RecordedRequest& r : requests_) n += r.path == path ? 1 : 0;
  return n;
}

CannedResponse FakeServer::Handle(const RecordedRequest& request) {
  {
    std::lock_guard lock(mu_);
    requests_.push_back(request);
    if (token_ && request.authorization != "Bearer " + *token_) {
      return {401, ErrorBody("unauthorized", "missing or wrong token", false)};
    }
    auto q = queued_.find(request.path);
    if (q != queued_.end() && !q->second.empty()) {
      CannedResponse out = std::move(q->second.front());
      q->second.pop_front();
      return out;
    }
    auto f = fixed_.find(request.path);
    if (f != fixed_.end()) return f->second;
  }
  if (!model_) return {404, ErrorBody("not_found", request.path, false)};
  try {
    return FromModel(request.path, request.body);
  } catch (const std::exception& e) {
    return {422, ErrorBody("invalid_request", e.what(), false)};
  }
}

CannedResponse FakeServer::FromModel(const std::string& path,
                                     const std::string& body_text) {
  const LanguageModel& m = *model_;
  if (path == "/v1/model") {
    const LmInfo& info = m.Info();
    return {200, json{{"name", info.name},
                      {"vocab_size", info.vocab_size},
                      {"max_context", info.max_context}}
                     .dump()};
  }
  const json body = json::parse(body_text);
  if (path == "/v1/tokenize") {
    return {200, json{{"tokens", m.Tokenize(body.at("text").get<std::string>())}}.dump()};
  }
  if (path == "/v1/detokenize") {
    const TokenSeq tokens = TokensFromJson(body, "tokens");
    return {200, json{{"text", m.Detokenize(tokens)}}.dump()};
  }
  if (path == "/v1/trace") {
    const TokenSeq context = TokensFromJson(body, "context");
    const TokenSeq continuation = TokensFromJson(body, "continuation");
    return {200, json{{"traces", TracesJson(m.Trace(context, continuation))}}.dump()};
  }
  if (path == "/v1/trace_text") {
    const TextTrace t = m.TraceText(body.at("context_text").get<std::string>(),
                                    body.at("continuation_text").get<std::string>(),
                                    body.at("lowercase").get<bool>());
    return {200, json{{"tokens", t.tokens}, {"traces", TracesJson(t.traces)}}.dump()};
  }
  if (path == "/v1/generate") {
    const TokenSeq prefix = TokensFromJson(body, "prefix");
    const GenerationConfig config = ConfigFromJson(body);
    json candidates = json::array();
    for (int c = 0; c < config.num_candidates; ++c) {
      Rng rng = SeededRng(config.seed, "server/" + std::to_string(c));
      TokenSeq window = prefix;
      TokenSeq tokens;
      TraceSeq traces;
      for (int step = 0; step < config.max_new_tokens; ++step) {
        const std::vector<double> probs = m.NextDistribution(window);
        const Token next =
            SampleFromDistribution(TransformDistribution(probs, config, window), rng);
        traces.push_back(MakeTrace(probs, next));
        tokens.push_back(next);
        window.push_back(next);
      }
      candidates.push_back(json{{"tokens", tokens}, {"traces", TracesJson(traces)}});
    }
    return {200, json{{"candidates", candidates}}.dump()};
  }
  return {404, ErrorBody("not_found", path, false)};
}

}  // namespace vp::testing
