#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace implang {

/// 64-bit FNV-1a. Stable across platforms; used for labels and config hashes.
std::uint64_t fnv1a64(std::string_view bytes);

/// Counter-based generator: draw i is a pure function of (key, i).
///
/// Sub-streams are derived by label with split(), which depends only on the
/// key and never on how many draws have been taken. All distributions here
/// are implemented locally so the sequence is identical on every platform
/// (the std:: distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  std::uint32_t next_u32() { return static_cast<std::uint32_t>(next_u64() >> 32); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n);
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }
  /// Standard normal via Box-Muller.
  double normal();

  Rng split(std::string_view label) const;
  Rng split(std::string_view label, std::uint64_t index) const;

 private:
  Rng(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

/// Seed for the index-th member of a labeled family, e.g. ("order", 2).
std::uint64_t derive_seed(std::uint64_t base, std::string_view label, std::uint64_t index);

template <class T>
void shuffle_in_place(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_below(i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

template <class T>
std::vector<T> shuffle(std::vector<T> items, Rng& rng) {
  shuffle_in_place(items, rng);
  return items;
}

template <class T>
const T& pick(const std::vector<T>& items, Rng& rng) {
  return items[static_cast<std::size_t>(rng.uniform_below(items.size()))];
}

}  // namespace implang
