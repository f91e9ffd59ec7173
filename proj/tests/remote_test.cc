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
#include <chrono>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "testing/fake_server.h"
#include "vp/core/error.h"
#include "vp/core/json_io.h"
#include "vp/lm/ngram.h"
#include "vp/lm/remote.h"

namespace vp {
namespace {

using nlohmann::json;
using testing::CannedResponse;
using testing::FakeServer;

json LoadFixture(const std::string& name) {
  std::ifstream in(std::filesystem::path(VP_FIXTURE_DIR) / "protocol" / (name + ".json"));
  if (!in) throw std::runtime_error("missing fixture " + name);
  return json::parse(in);
}

CannedResponse Canned(const json& fixture) {
  return {fixture["response"]["status"].get<int>(), fixture["response"]["body"].dump()};
}

RemoteOptions FastOptions(const FakeServer& server) {
  RemoteOptions o;
  o.endpoint = server.endpoint();
  o.timeout = std::chrono::milliseconds(2000);
  o.max_retries = 2;
  o.backoff_initial = std::chrono::milliseconds(1);
  o.backoff_cap = std::chrono::milliseconds(4);
  return o;
}

// A fake serving only golden fixtures (no backing model).
struct GoldenServer {
  GoldenServer() { server.SetFixed("/v1/model", Canned(LoadFixture("model"))); }

  json LastBody(const std::string& path) const {
    const auto requests = server.requests();
    for (auto it = requests.rbegin(); it != requests.rend(); ++it) {
      if (it->path == path) return json::parse(it->body);
    }
    return nullptr;
  }

  FakeServer server;
};

TokenSeq Tokens(const json& j) { return j.get<TokenSeq>(); }

// Runs the client call matching a fixture's path with the fixture's request.
void Invoke(const RemoteModel& model, const json& fixture) {
  const std::string path = fixture["path"];
  const json& req = fixture["request"];
  if (path == "/v1/trace") {
    model.Trace(Tokens(req["context"]), Tokens(req["continuation"]));
  } else if (path == "/v1/trace_text") {
    model.TraceText(req["context_text"].get<std::string>(),
                    req["continuation_text"].get<std::string>(),
                    req["lowercase"].get<bool>());
  } else if (path == "/v1/tokenize") {
    model.Tokenize(req["text"].get<std::string>());
  } else if (path == "/v1/detokenize") {
    model.Detokenize(Tokens(req["tokens"]));
  } else if (path == "/v1/generate") {
    GenerationConfig c;
    const json& cfg = req["config"];
    c.top_k = cfg["top_k"].get<int>();
    c.top_p = cfg["top_p"].get<double>();
    c.typical_p = cfg["typical_p"].get<double>();
    c.temperature = cfg["temperature"].get<double>();
    c.repetition_penalty = cfg["repetition_penalty"].get<double>();
    c.seed = cfg["seed"].get<std::uint64_t>();
    c.num_candidates = req["n"].get<int>();
    c.max_new_tokens = req["max_new_tokens"].get<int>();
    model.GenerateNative(Tokens(req["prefix"]), c);
  } else if (path == "/v1/model") {
    model.Info();
  } else {
    throw std::runtime_error("no client call for " + path);
  }
}

class GoldenExchangeTest : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenExchangeTest, ClientRequestMatchesAndResponseParses) {
  const json fixture = LoadFixture(GetParam());
  GoldenServer golden;
  golden.server.SetFixed(fixture["path"], Canned(fixture));
  RemoteModel model(FastOptions(golden.server));
  EXPECT_NO_THROW(Invoke(model, fixture));
  if (!fixture["request"].is_null()) {
    EXPECT_EQ(golden.LastBody(fixture["path"]), fixture["request"]);
  }
}

INSTANTIATE_TEST_SUITE_P(Protocol, GoldenExchangeTest,
                         ::testing::Values("model", "tokenize", "detokenize", "trace",
                                           "trace_text", "generate"));

class GoldenErrorTest : public ::testing::TestWithParam<std::string> {};

TEST_P(GoldenErrorTest, ClientRaisesTheDocumentedKind) {
  const json fixture = LoadFixture(GetParam());
  GoldenServer golden;
  golden.server.SetFixed(fixture["path"], Canned(fixture));
  RemoteModel model(FastOptions(golden.server));
  try {
    Invoke(model, fixture);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string expected = fixture["expect_error"];
    const ErrorKind kind = expected == "wire"          ? ErrorKind::kWire
                           : expected == "unavailable" ? ErrorKind::kUnavailable
                                                       : ErrorKind::kServerFault;
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(Protocol, GoldenErrorTest,
                         ::testing::Values("error_invalid", "error_overloaded",
                                           "fault_sigma", "fault_entropy", "fault_count"));

TEST(RemoteModelTest, TraceValuesMatchGolden) {
  const json fixture = LoadFixture("trace");
  GoldenServer golden;
  golden.server.SetFixed("/v1/trace", Canned(fixture));
  RemoteModel model(FastOptions(golden.server));
  const TraceSeq traces = model.Trace(TokenSeq{72, 105}, TokenSeq{32, 66, 111});
  ASSERT_EQ(traces.size(), 3u);
  const json& served = fixture["response"]["body"]["traces"];
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(traces[i], TraceFromJson(served[i]));
}

TEST(RemoteModelTest, WireErrorCarriesServerPayload) {
  GoldenServer golden;
  golden.server.SetFixed("/v1/trace", Canned(LoadFixture("error_invalid")));
  RemoteModel model(FastOptions(golden.server));
  try {
    model.Trace(TokenSeq{1}, TokenSeq{2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("token 999 outside vocabulary"), std::string::npos);
  }
}

TEST(RemoteModelTest, SecondIdenticalTraceServedFromCache) {
  GoldenServer golden;
  golden.server.SetFixed("/v1/trace", Canned(LoadFixture("trace")));
  RemoteModel model(FastOptions(golden.server));
  const TokenSeq ctx = {72, 105}, cont = {32, 66, 111};
  const auto first = model.Trace(ctx, cont);
  const auto requests = model.request_count();
  EXPECT_EQ(model.Trace(ctx, cont), first);
  EXPECT_EQ(model.request_count(), requests);
  EXPECT_EQ(golden.server.request_count("/v1/trace"), 1u);
}

TEST(RemoteModelTest, RetriesAfterOverloadThenSucceeds) {
  GoldenServer golden;
  golden.server.Enqueue("/v1/trace", Canned(LoadFixture("error_overloaded")));
  golden.server.SetFixed("/v1/trace", Canned(LoadFixture("trace")));
  RemoteModel model(FastOptions(golden.server));
  EXPECT_EQ(model.Trace(TokenSeq{72, 105}, TokenSeq{32, 66, 111}).size(), 3u);
  EXPECT_EQ(model.retry_count(), 1u);
}

TEST(RemoteModelTest, RetriesAfterTimeoutThenSucceeds) {
  GoldenServer golden;
  CannedResponse slow = Canned(LoadFixture("trace"));
  slow.delay_ms = 600;
  golden.server.Enqueue("/v1/trace", slow);
  golden.server.SetFixed("/v1/trace", Canned(LoadFixture("trace")));
  RemoteOptions o = FastOptions(golden.server);
  o.timeout = std::chrono::milliseconds(200);
  RemoteModel model(o);
  model.Info();
  EXPECT_EQ(model.Trace(TokenSeq{72, 105}, TokenSeq{32, 66, 111}).size(), 3u);
  EXPECT_EQ(model.retry_count(), 1u);
}

TEST(RemoteModelTest, UnreachableEndpointIsUnavailable) {
  RemoteOptions o;
  o.endpoint = "http://127.0.0.1:1";
  o.max_retries = 1;
  o.backoff_initial = std::chrono::milliseconds(1);
  o.timeout = std::chrono::milliseconds(200);
  RemoteModel model(o);
  try {
    model.Info();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnavailable);
  }
}

TEST(RemoteModelTest, SendsBearerToken) {
  GoldenServer golden;
  golden.server.RequireToken("s3cret");
  RemoteOptions o = FastOptions(golden.server);
  EXPECT_THROW(RemoteModel(o).Info(), Error);
  o.auth_token = "s3cret";
  EXPECT_EQ(RemoteModel(o).Info().vocab_size, 256u);
}

TEST(RemoteModelTest, NextDistributionUnsupported) {
  GoldenServer golden;
  RemoteModel model(FastOptions(golden.server));
  try {
    model.NextDistribution(TokenSeq{1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupported);
  }
}

// Against a served byte n-gram model.
class ServedModelTest : public ::testing::Test {
 protected:
  ServedModelTest()
      : local_(TrainByteNGram({"Hi Bo, call me at 555 0142.", "Hi Al, see you soon."}, 4)),
        server_(local_),
        remote_(FastOptions(server_)) {}

  std::shared_ptr<const NGramModel> local_;
  FakeServer server_;
  RemoteModel remote_;
};

TEST_F(ServedModelTest, ThreeTokenTraceMatchesLocal) {
  const TokenSeq ctx = local_->Tokenize("Hi "), cont = local_->Tokenize("Bo,");
  const TraceSeq traces = remote_.Trace(ctx, cont);
  ASSERT_EQ(traces.size(), 3u);
  EXPECT_EQ(traces, local_->Trace(ctx, cont));
}

TEST_F(ServedModelTest, TokenizeRoundTrip) {
  const TokenSeq tokens = remote_.Tokenize("call me");
  EXPECT_EQ(tokens, local_->Tokenize("call me"));
  EXPECT_EQ(remote_.Detokenize(tokens), "call me");
}

TEST_F(ServedModelTest, SeededGenerationIsDeterministic) {
  GenerationConfig c;
  c.top_k = 1;
  c.num_candidates = 3;
  c.max_new_tokens = 5;
  c.seed = 4;
  const TokenSeq prefix = local_->Tokenize("Hi ");
  const auto a = remote_.GenerateNative(prefix, c);
  const auto b = remote_.GenerateNative(prefix, c);
  ASSERT_TRUE(a && b);
  ASSERT_EQ(a->size(), 3u);
  for (std::size_t i = 0; i < a->size(); ++i) {
    EXPECT_EQ((*a)[i].tokens, (*b)[i].tokens);
    EXPECT_EQ((*a)[i].tokens, (*a)[0].tokens);
  }
}

}  // namespace
}  // namespace vp
