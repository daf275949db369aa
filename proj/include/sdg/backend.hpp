#pragma once

#include <array>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdg/chat.hpp"

namespace sdg::backend {

struct GenParams {
  double temperature = 1.0;
  double top_p = 1.0;
  int max_tokens = 1024;
  bool greedy = false;  // greedy implies temperature is ignored by the backend
  std::optional<int64_t> seed;
};

inline GenParams greedy_params() {
  GenParams p;
  p.greedy = true;
  p.temperature = 0.0;
  return p;
}

enum class FinishReason { stop, length, error };

struct GenerationResult {
  std::string text;
  FinishReason finish_reason = FinishReason::stop;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

constexpr size_t kNumAttributes = 5;
constexpr std::array<const char*, kNumAttributes> kAttributeNames = {
    "helpfulness", "correctness", "coherence", "complexity", "verbosity"};

// Five HelpSteer attributes, each clamped to [0, 5], fixed order.
struct AttributeScores {
  std::array<double, kNumAttributes> values{};

  double helpfulness() const { return values[0]; }
  double correctness() const { return values[1]; }
  double coherence() const { return values[2]; }
  double complexity() const { return values[3]; }
  double verbosity() const { return values[4]; }
};

struct RewardWeights {
  std::array<double, kNumAttributes> values{};

  // Default: helpfulness only. The concrete weights used at 340B scale are
  // not published; they are a config override.
  static RewardWeights helpfulness_only() { return RewardWeights{{1, 0, 0, 0, 0}}; }
};

double aggregate_reward(const AttributeScores& scores, const RewardWeights& weights);

enum class ErrorKind {
  unknown_backend,
  transport,            // retriable
  malformed_response,
  script_exhausted,
  missing_attribute,
  precondition,
};

class BackendError : public std::runtime_error {
 public:
  BackendError(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  bool retriable() const { return kind_ == ErrorKind::transport; }

 private:
  ErrorKind kind_;
};

// Synchronous request/response backend. Implementations must be safe to
// call from many pipeline workers at once.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual GenerationResult generate(const std::vector<ChatMessage>& messages,
                                    const GenParams& params) = 0;
  virtual AttributeScores score(const Dialogue& dialogue) = 0;
};

// generate() with the module preconditions applied: non-empty messages
// ending in a user turn, output right-trimmed.
GenerationResult generate(Backend& backend, const std::vector<ChatMessage>& messages,
                          const GenParams& params);

// score() with clamping to [0,5]; each clamp bumps the warning counter.
AttributeScores score_clamped(Backend& backend, const Dialogue& dialogue,
                              size_t* clamp_warnings = nullptr);

struct ScriptEntry {
  std::optional<std::string> text;
  std::optional<AttributeScores> scores;
};

struct RecordedRequest {
  enum class Kind { generate, score } kind;
  std::vector<ChatMessage> messages;  // generate: request; score: dialogue turns
  GenParams params;
};

// Deterministic test double. Responses are consumed strictly in global
// submission order behind one mutex; every request is recorded.
class ScriptedBackend : public Backend {
 public:
  explicit ScriptedBackend(std::vector<ScriptEntry> script);

  static ScriptEntry text_entry(std::string text);
  static ScriptEntry score_entry(const AttributeScores& scores);

  // Convenience: all entries are generation texts.
  static std::shared_ptr<ScriptedBackend> from_texts(std::vector<std::string> texts);

  GenerationResult generate(const std::vector<ChatMessage>& messages,
                            const GenParams& params) override;
  AttributeScores score(const Dialogue& dialogue) override;

  std::vector<RecordedRequest> transcript() const;
  size_t remaining() const;

 private:
  ScriptEntry take(const char* want);

  mutable std::mutex mu_;
  std::deque<ScriptEntry> script_;
  std::vector<RecordedRequest> transcript_;
};

// A backend whose responses are computed from the request, for property
// tests and content-keyed judges.
class FunctionBackend : public Backend {
 public:
  using GenFn = std::function<std::string(const std::vector<ChatMessage>&)>;
  using ScoreFn = std::function<AttributeScores(const Dialogue&)>;

  explicit FunctionBackend(GenFn gen, ScoreFn score = nullptr)
      : gen_(std::move(gen)), score_(std::move(score)) {}

  GenerationResult generate(const std::vector<ChatMessage>& messages,
                            const GenParams&) override {
    return GenerationResult{gen_(messages), FinishReason::stop, 0, 0};
  }
  AttributeScores score(const Dialogue& dialogue) override {
    if (!score_) throw BackendError(ErrorKind::precondition, "no score function");
    return score_(dialogue);
  }

 private:
  GenFn gen_;
  ScoreFn score_;
};

struct RetryPolicy {
  int max_attempts = 3;
  int backoff_base_ms = 500;  // exponential, with jitter
  double jitter_fraction = 0.1;
};

struct HttpBackendConfig {
  std::string host;       // e.g. "localhost"
  int port = 80;
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env;  // env var holding the key; empty = no auth header
  RetryPolicy retry;
};

// Chat-completions-style HTTP backend. Only transport failures and 5xx
// are retried; 4xx and malformed envelopes are fatal.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ~HttpBackend() override;

  GenerationResult generate(const std::vector<ChatMessage>& messages,
                            const GenParams& params) override;
  AttributeScores score(const Dialogue& dialogue) override;

 private:
  std::string post_with_retry(const std::string& body);

  HttpBackendConfig config_;
};

class BackendRegistry {
 public:
  void add(const std::string& id, std::shared_ptr<Backend> backend);
  bool has(const std::string& id) const;
  Backend& get(const std::string& id) const;
  std::shared_ptr<Backend> get_shared(const std::string& id) const;

 private:
  std::map<std::string, std::shared_ptr<Backend>> backends_;
};

}  // namespace sdg::backend
