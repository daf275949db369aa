#include "sdg/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sdg/util.hpp"

namespace sdg::backend {

using json = nlohmann::json;

double aggregate_reward(const AttributeScores& scores, const RewardWeights& weights) {
  double total = 0.0;
  for (size_t i = 0; i < kNumAttributes; ++i) {
    total += scores.values[i] * weights.values[i];
  }
  return total;
}

GenerationResult generate(Backend& backend, const std::vector<ChatMessage>& messages,
                          const GenParams& params) {
  if (messages.empty()) {
    throw BackendError(ErrorKind::precondition, "messages must be non-empty");
  }
  if (messages.back().role != Role::user) {
    throw BackendError(ErrorKind::precondition, "last message must be a user turn");
  }
  GenerationResult result = backend.generate(messages, params);
  result.text = rtrim(result.text);
  return result;
}

AttributeScores score_clamped(Backend& backend, const Dialogue& dialogue,
                              size_t* clamp_warnings) {
  if (dialogue.turns.empty() || dialogue.turns.back().role != Role::assistant) {
    throw BackendError(ErrorKind::precondition, "dialogue must end with an assistant turn");
  }
  AttributeScores scores = backend.score(dialogue);
  for (double& v : scores.values) {
    if (v < 0.0 || v > 5.0) {
      v = std::min(5.0, std::max(0.0, v));
      if (clamp_warnings) ++*clamp_warnings;
    }
  }
  return scores;
}

ScriptedBackend::ScriptedBackend(std::vector<ScriptEntry> script)
    : script_(script.begin(), script.end()) {
  if (script_.empty()) {
    throw BackendError(ErrorKind::precondition, "script must be non-empty");
  }
}

ScriptEntry ScriptedBackend::text_entry(std::string text) {
  ScriptEntry e;
  e.text = std::move(text);
  return e;
}

ScriptEntry ScriptedBackend::score_entry(const AttributeScores& scores) {
  ScriptEntry e;
  e.scores = scores;
  return e;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_texts(std::vector<std::string> texts) {
  std::vector<ScriptEntry> entries;
  entries.reserve(texts.size());
  for (auto& t : texts) entries.push_back(text_entry(std::move(t)));
  return std::make_shared<ScriptedBackend>(std::move(entries));
}

ScriptEntry ScriptedBackend::take(const char* want) {
  if (script_.empty()) {
    throw BackendError(ErrorKind::script_exhausted,
                       std::string("script exhausted (wanted ") + want + ")");
  }
  ScriptEntry entry = std::move(script_.front());
  script_.pop_front();
  return entry;
}

GenerationResult ScriptedBackend::generate(const std::vector<ChatMessage>& messages,
                                           const GenParams& params) {
  std::lock_guard<std::mutex> lock(mu_);
  transcript_.push_back({RecordedRequest::Kind::generate, messages, params});
  ScriptEntry entry = take("text");
  if (!entry.text) {
    throw BackendError(ErrorKind::malformed_response, "script entry is a score, not text");
  }
  return GenerationResult{*entry.text, FinishReason::stop, 0, 0};
}

AttributeScores ScriptedBackend::score(const Dialogue& dialogue) {
  std::lock_guard<std::mutex> lock(mu_);
  transcript_.push_back({RecordedRequest::Kind::score, dialogue.turns, GenParams{}});
  ScriptEntry entry = take("scores");
  if (!entry.scores) {
    throw BackendError(ErrorKind::missing_attribute, "script entry is text, not scores");
  }
  return *entry.scores;
}

std::vector<RecordedRequest> ScriptedBackend::transcript() const {
  std::lock_guard<std::mutex> lock(mu_);
  return transcript_;
}

size_t ScriptedBackend::remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  return script_.size();
}

namespace {

json messages_to_json(const std::vector<ChatMessage>& messages) {
  json out = json::array();
  for (const auto& m : messages) {
    out.push_back({{"role", role_name(m.role)}, {"content", m.content}});
  }
  return out;
}

}  // namespace

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}
HttpBackend::~HttpBackend() = default;

std::string HttpBackend::post_with_retry(const std::string& body) {
  std::string last_error;
  // Jitter draws come from a per-call generator; backoff timing never
  // affects output bytes.
  std::mt19937_64 jitter_rng(std::random_device{}());
  for (int attempt = 0; attempt < config_.retry.max_attempts; ++attempt) {
    if (attempt > 0) {
      double base = config_.retry.backoff_base_ms * (1 << (attempt - 1));
      double jitter = 1.0 + config_.retry.jitter_fraction *
                                (std::uniform_real_distribution<double>(-1, 1)(jitter_rng));
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long>(base * jitter)));
    }
    httplib::Client client(config_.host, config_.port);
    client.set_read_timeout(60, 0);
    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
      const char* key = std::getenv(config_.api_key_env.c_str());
      if (key) headers.emplace("Authorization", std::string("Bearer ") + key);
    }
    auto res = client.Post(config_.path, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "server error: status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError(ErrorKind::malformed_response,
                         "unexpected status " + std::to_string(res->status));
    }
    return res->body;
  }
  throw BackendError(ErrorKind::transport, "retry budget exhausted: " + last_error);
}

GenerationResult HttpBackend::generate(const std::vector<ChatMessage>& messages,
                                       const GenParams& params) {
  json req = {
      {"model", config_.model},
      {"messages", messages_to_json(messages)},
      {"temperature", params.greedy ? 0.0 : params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", params.max_tokens},
  };
  if (params.seed) req["seed"] = *params.seed;

  std::string body = post_with_retry(req.dump());
  json res = json::parse(body, nullptr, false);
  if (res.is_discarded() || !res.contains("choices") || res["choices"].empty()) {
    throw BackendError(ErrorKind::malformed_response, "missing choices in response");
  }
  const json& choice = res["choices"][0];
  if (!choice.contains("message") || !choice["message"].contains("content")) {
    throw BackendError(ErrorKind::malformed_response, "missing message content");
  }
  GenerationResult result;
  result.text = choice["message"]["content"].get<std::string>();
  std::string reason = choice.value("finish_reason", "stop");
  result.finish_reason = reason == "length" ? FinishReason::length
                         : reason == "stop" ? FinishReason::stop
                                            : FinishReason::error;
  if (res.contains("usage")) {
    result.prompt_tokens = res["usage"].value("prompt_tokens", 0);
    result.completion_tokens = res["usage"].value("completion_tokens", 0);
  }
  return result;
}

AttributeScores HttpBackend::score(const Dialogue& dialogue) {
  json req = {
      {"model", config_.model},
      {"messages", messages_to_json(dialogue.turns)},
  };
  std::string body = post_with_retry(req.dump());
  json res = json::parse(body, nullptr, false);
  if (res.is_discarded() || !res.contains("scores")) {
    throw BackendError(ErrorKind::malformed_response, "missing scores object");
  }
  AttributeScores scores;
  for (size_t i = 0; i < kNumAttributes; ++i) {
    const char* name = kAttributeNames[i];
    if (!res["scores"].contains(name)) {
      throw BackendError(ErrorKind::missing_attribute,
                         std::string("missing attribute: ") + name);
    }
    scores.values[i] = res["scores"][name].get<double>();
  }
  return scores;
}

void BackendRegistry::add(const std::string& id, std::shared_ptr<Backend> backend) {
  backends_[id] = std::move(backend);
}

bool BackendRegistry::has(const std::string& id) const { return backends_.count(id) > 0; }

Backend& BackendRegistry::get(const std::string& id) const {
  auto it = backends_.find(id);
  if (it == backends_.end()) {
    throw BackendError(ErrorKind::unknown_backend, "unknown backend: " + id);
  }
  return *it->second;
}

std::shared_ptr<Backend> BackendRegistry::get_shared(const std::string& id) const {
  auto it = backends_.find(id);
  if (it == backends_.end()) {
    throw BackendError(ErrorKind::unknown_backend, "unknown backend: " + id);
  }
  return it->second;
}

}  // namespace sdg::backend
