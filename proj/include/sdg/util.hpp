#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sdg {

// Deterministic splitmix64-based generator. We avoid the std <random>
// distributions: their output is implementation-defined, and run outputs
// must be byte-identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n). Rejection-sampled so the result is unbiased.
  uint64_t next_below(uint64_t n) {
    if (n == 0) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Independent child stream; used to give each work item its own
  // generator so fan-out order cannot affect draws.
  Rng fork(uint64_t salt) const {
    uint64_t mixed = state_ ^ (salt * 0xff51afd7ed558ccdULL + 0x2545f4914f6cdd1dULL);
    return Rng(mixed);
  }

 private:
  uint64_t state_;
};

// FNV-1a, 64 bit. Content ids and manifest checksums only.
inline uint64_t fnv1a(std::string_view data, uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(uint64_t v);
std::string content_hash(std::string_view data);

std::string trim(std::string_view s);
std::string rtrim(std::string_view s);
std::string to_lower(std::string_view s);
bool starts_with_ci(std::string_view text, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);

// Lowercase + trim + collapse internal whitespace runs to one space.
std::string normalize_keyword(std::string_view s);

std::vector<std::string> split_lines(std::string_view text);

}  // namespace sdg
