#pragma once

// Binary words and small candidate codes.  Words are stored as the low n
// bits of a uint32_t (bit i = coordinate i), which caps n at 31 -- far
// beyond the range where these programs are solvable anyway.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace codebound {

struct Word {
  uint32_t bits = 0;
  int n = 0;

  Word() = default;
  Word(uint32_t b, int len) : bits(b), n(len) {
    if (len < 1 || len > 31) throw std::invalid_argument("Word: length out of range");
    if (b >> len) throw std::invalid_argument("Word: bits beyond length");
  }

  int weight() const { return std::popcount(bits); }
  bool operator==(const Word& o) const { return bits == o.bits && n == o.n; }
};

inline int hamming_distance(const Word& v, const Word& w) {
  if (v.n != w.n) throw std::invalid_argument("hamming_distance: length mismatch");
  return std::popcount(v.bits ^ w.bits);
}

inline int hamming_distance(uint32_t v, uint32_t w) { return std::popcount(v ^ w); }

// An unordered set of at most four distinct equal-length words.
struct CodeSet {
  int n = 0;
  std::vector<uint32_t> words;  // sorted, distinct

  CodeSet() = default;
  CodeSet(int len, std::vector<uint32_t> ws) : n(len), words(std::move(ws)) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    for (uint32_t w : words)
      if (w >> n) throw std::invalid_argument("CodeSet: word beyond length");
  }

  int size() const { return (int)words.size(); }

  int min_distance() const {
    int best = n + 1;
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = i + 1; j < words.size(); ++j)
        best = std::min(best, hamming_distance(words[i], words[j]));
    return best;  // n+1 when |S| <= 1
  }

  bool distances_at_least(int d) const { return size() <= 1 || min_distance() >= d; }

  bool distances_all_even() const {
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = i + 1; j < words.size(); ++j)
        if (hamming_distance(words[i], words[j]) & 1) return false;
    return true;
  }
};

}  // namespace codebound
