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
#include "vp/core/json_io.h"

#include <string>

#include "vp/core/error.h"

namespace vp {
namespace {

using nlohmann::json;

double NumberField(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number()) {
    Fail(ErrorKind::kWire,
         std::string("trace field '") + field + "' missing or not a number");
  }
  return it->get<double>();
}

Token TokenField(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number_unsigned()) {
    Fail(ErrorKind::kWire, std::string("field '") + field +
                               "' missing or not an unsigned integer");
  }
  return it->get<Token>();
}

}  // namespace

json TraceToJson(const TokenTrace& t) {
  return json{{"token", t.token},
              {"logprob", t.logprob},
              {"mu", t.mu},
              {"sigma", t.sigma},
              {"entropy", t.entropy},
              {"argmax_token", t.argmax_token},
              {"argmax_logprob", t.argmax_logprob}};
}

TokenTrace TraceFromJson(const json& j) {
  if (!j.is_object()) Fail(ErrorKind::kWire, "trace record is not an object");
  TokenTrace t;
  t.token = TokenField(j, "token");
  t.logprob = NumberField(j, "logprob");
  t.mu = NumberField(j, "mu");
  t.sigma = NumberField(j, "sigma");
  t.entropy = NumberField(j, "entropy");
  t.argmax_token = TokenField(j, "argmax_token");
  t.argmax_logprob = NumberField(j, "argmax_logprob");
  return t;
}

TokenSeq TokensFromJson(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_array()) {
    Fail(ErrorKind::kWire,
         std::string("field '") + field + "' missing or not an array");
  }
  TokenSeq out;
  out.reserve(it->size());
  for (const json& v : *it) {
    if (!v.is_number_unsigned()) {
      Fail(ErrorKind::kWire,
           std::string("field '") + field + "' holds a non-token value");
    }
    out.push_back(v.get<Token>());
  }
  return out;
}

json CandidateToJson(const ScoredCandidate& c) {
  json traces = json::array();
  for (const TokenTrace& t : c.traces) traces.push_back(TraceToJson(t));
  json scores = json::object();
  for (const auto& [name, value] : c.scores) scores[name] = value;
  return json{{"example_id", c.example_id},
              {"gen_index", c.gen_index},
              {"tokens", c.tokens},
              {"traces", std::move(traces)},
              {"scores", std::move(scores)}};
}

ScoredCandidate CandidateFromJson(const json& j) {
  ScoredCandidate c;
  try {
    c.example_id = j.at("example_id").get<std::string>();
    c.gen_index = j.at("gen_index").get<std::size_t>();
    c.tokens = TokensFromJson(j, "tokens");
    for (const json& t : j.at("traces")) c.traces.push_back(TraceFromJson(t));
    for (const auto& [name, value] : j.at("scores").items()) {
      c.scores[name] = value.get<double>();
    }
  } catch (const json::exception& e) {
    Fail(ErrorKind::kParse, std::string("bad candidate record: ") + e.what());
  }
  if (!c.traces.empty() && c.tokens.size() != c.traces.size()) {
    Fail(ErrorKind::kSchema, "candidate record: tokens and traces differ in length");
  }
  return c;
}

}  // namespace vp
