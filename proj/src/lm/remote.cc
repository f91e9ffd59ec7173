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
#include "vp/lm/remote.h"

#include <algorithm>
#include <thread>

#include <fmt/core.h>
#include <httplib.h>

#include "vp/core/error.h"
#include "vp/core/json_io.h"

namespace vp {
namespace {

using nlohmann::json;

struct SemaphoreGuard {
  explicit SemaphoreGuard(std::counting_semaphore<1024>& s) : sem(s) {
    sem.acquire();
  }
  ~SemaphoreGuard() { sem.release(); }
  std::counting_semaphore<1024>& sem;
};

std::string DescribeErrorPayload(int status, const std::string& body) {
  try {
    json j = json::parse(body);
    const json& e = j.at("error");
    return fmt::format("HTTP {} {}: {}", status,
                       e.value("code", std::string("?")),
                       e.value("message", std::string("")));
  } catch (const json::exception&) {
    return fmt::format("HTTP {}: {}", status, body);
  }
}

bool PayloadRetriable(const std::string& body, bool fallback) {
  try {
    json j = json::parse(body);
    return j.at("error").value("retriable", fallback);
  } catch (const json::exception&) {
    return fallback;
  }
}

}  // namespace

RemoteModel::RemoteModel(RemoteOptions options)
    : options_(std::move(options)),
      inflight_(std::clamp(options_.max_inflight, 1, 1024)),
      cache_(std::max<std::size_t>(options_.cache_capacity, 1)) {
  if (options_.endpoint.empty()) {
    Fail(ErrorKind::kConfig, "remote model needs an endpoint");
  }
  if (options_.max_inflight < 1) {
    Fail(ErrorKind::kConfig, "model.max_inflight must be >= 1");
  }
}

RemoteModel::~RemoteModel() = default;

json RemoteModel::Call(const std::string& method, const std::string& path,
                       const json* body) const {
  const std::string payload = body ? body->dump() : std::string();
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      auto delay = options_.backoff_initial * (1LL << std::min(attempt - 1, 20));
      std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(
          delay, options_.backoff_cap));
    }
    httplib::Result result{nullptr, httplib::Error::Unknown};
    {
      SemaphoreGuard guard(inflight_);
      httplib::Client client(options_.endpoint);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(
          options_.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      if (options_.auth_token) {
        client.set_bearer_token_auth(*options_.auth_token);
      }
      ++requests_;
      if (method == "GET") {
        result = client.Get(path);
      } else {
        result = client.Post(path, payload, "application/json");
      }
    }
    if (!result) {
      last_failure = fmt::format("{} {}: {}", method, path,
                                 httplib::to_string(result.error()));
      continue;
    }
    const int status = result->status;
    if (status == 200) {
      try {
        return json::parse(result->body);
      } catch (const json::parse_error& e) {
        Fail(ErrorKind::kWire,
             fmt::format("{} {}: malformed response ({}): {}", method, path,
                         e.what(), result->body));
      }
    }
    const std::string described = DescribeErrorPayload(status, result->body);
    if (status == 503 && PayloadRetriable(result->body, true)) {
      last_failure = described;
      continue;
    }
    Fail(ErrorKind::kWire, fmt::format("{} {}: {}", method, path, described));
  }
  Fail(ErrorKind::kUnavailable,
       fmt::format("{} unreachable after {} attempts: {}", options_.endpoint,
                   options_.max_retries + 1, last_failure));
}

const LmInfo& RemoteModel::Info() const {
  std::call_once(info_once_, [this] {
    json j = Call("GET", "/v1/model", nullptr);
    try {
      info_.name = j.at("name").get<std::string>();
      info_.vocab_size = j.at("vocab_size").get<std::size_t>();
      info_.max_context = j.at("max_context").get<std::size_t>();
    } catch (const json::exception& e) {
      Fail(ErrorKind::kWire, std::string("/v1/model: ") + e.what());
    }
    if (info_.vocab_size < 2 || info_.max_context < 1) {
      Fail(ErrorKind::kServerFault, "/v1/model reports an invalid model");
    }
  });
  return info_;
}

std::vector<double> RemoteModel::NextDistribution(TokenSpan) const {
  Fail(ErrorKind::kUnsupported,
       "remote models serve traces, not full next-token distributions");
}

TraceSeq RemoteModel::ValidatedTraces(const json& response,
                                      TokenSpan expected_tokens) const {
  auto it = response.find("traces");
  if (it == response.end() || !it->is_array()) {
    Fail(ErrorKind::kWire, "response lacks a 'traces' array: " + response.dump());
  }
  TraceSeq traces;
  for (const json& record : *it) traces.push_back(TraceFromJson(record));
  if (traces.size() != expected_tokens.size()) {
    Fail(ErrorKind::kServerFault,
         fmt::format("server returned {} traces for {} tokens", traces.size(),
                     expected_tokens.size()));
  }
  const std::size_t vocab = Info().vocab_size;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const TokenTrace& t = traces[i];
    if (t.token != expected_tokens[i]) {
      Fail(ErrorKind::kServerFault,
           fmt::format("trace {} describes token {}, expected {}", i, t.token,
                       expected_tokens[i]));
    }
    if (t.token >= vocab || t.argmax_token >= vocab) {
      Fail(ErrorKind::kServerFault,
           fmt::format("trace {} token outside vocabulary", i));
    }
    if (auto violation = CheckTrace(t, options_.trace_tolerance)) {
      Fail(ErrorKind::kServerFault,
           fmt::format("trace {} violates invariants: {}", i, *violation));
    }
  }
  return traces;
}

TraceSeq RemoteModel::Trace(TokenSpan context, TokenSpan continuation) const {
  if (continuation.empty()) {
    Fail(ErrorKind::kInput, "trace requires a nonempty continuation");
  }
  const std::string& name = Info().name;
  if (auto hit = cache_.Get(name, context, continuation)) return *hit;
  json body{{"context", TokenSeq(context.begin(), context.end())},
            {"continuation", TokenSeq(continuation.begin(), continuation.end())}};
  TraceSeq traces = ValidatedTraces(Call("POST", "/v1/trace", &body), continuation);
  cache_.Put(name, context, continuation, traces);
  return traces;
}

TokenSeq RemoteModel::Tokenize(std::string_view text) const {
  json body{{"text", std::string(text)}};
  return TokensFromJson(Call("POST", "/v1/tokenize", &body), "tokens");
}

std::string RemoteModel::Detokenize(TokenSpan tokens) const {
  json body{{"tokens", TokenSeq(tokens.begin(), tokens.end())}};
  json j = Call("POST", "/v1/detokenize", &body);
  auto it = j.find("text");
  if (it == j.end() || !it->is_string()) {
    Fail(ErrorKind::kWire, "/v1/detokenize: missing 'text'");
  }
  return it->get<std::string>();
}

TextTrace RemoteModel::TraceText(std::string_view context_text,
                                 std::string_view continuation_text,
                                 bool lowercase) const {
  json body{{"context_text", std::string(context_text)},
            {"continuation_text", std::string(continuation_text)},
            {"lowercase", lowercase}};
  json j = Call("POST", "/v1/trace_text", &body);
  TextTrace out;
  out.tokens = TokensFromJson(j, "tokens");
  out.traces = ValidatedTraces(j, out.tokens);
  return out;
}

std::optional<std::vector<GeneratedSequence>> RemoteModel::GenerateNative(
    TokenSpan prefix, const GenerationConfig& config) const {
  json cfg = json::object();
  if (config.top_k) cfg["top_k"] = *config.top_k;
  if (config.top_p) cfg["top_p"] = *config.top_p;
  if (config.typical_p) cfg["typical_p"] = *config.typical_p;
  if (config.temperature) cfg["temperature"] = *config.temperature;
  if (config.repetition_penalty) {
    cfg["repetition_penalty"] = *config.repetition_penalty;
  }
  cfg["seed"] = config.seed;
  json body{{"prefix", TokenSeq(prefix.begin(), prefix.end())},
            {"n", config.num_candidates},
            {"max_new_tokens", config.max_new_tokens},
            {"config", std::move(cfg)}};
  json j = Call("POST", "/v1/generate", &body);
  auto it = j.find("candidates");
  if (it == j.end() || !it->is_array()) {
    Fail(ErrorKind::kWire, "/v1/generate: missing 'candidates' array");
  }
  std::vector<GeneratedSequence> out;
  for (const json& c : *it) {
    GeneratedSequence seq;
    seq.tokens = TokensFromJson(c, "tokens");
    if (seq.tokens.size() > static_cast<std::size_t>(config.max_new_tokens)) {
      Fail(ErrorKind::kServerFault, "/v1/generate: candidate exceeds max_new_tokens");
    }
    if (!seq.tokens.empty()) seq.traces = ValidatedTraces(c, seq.tokens);
    out.push_back(std::move(seq));
  }
  return out;
}

}  // namespace vp
