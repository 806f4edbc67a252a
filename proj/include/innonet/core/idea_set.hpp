#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace innonet {

/// Fixed-capacity bitset sized at construction. Capacity mismatches between
/// operands are a programming error and are not checked in release builds.
class IdeaSet {
 public:
  using word = std::uint64_t;

  IdeaSet() = default;
  explicit IdeaSet(std::size_t capacity)
      : bits_(capacity), words_((capacity + 63) / 64, 0) {}

  std::size_t capacity() const noexcept { return bits_; }
  std::size_t word_count() const noexcept { return words_.size(); }
  std::span<const word> words() const noexcept { return words_; }
  std::span<word> words() noexcept { return words_; }

  void set(std::size_t i) noexcept { words_[i >> 6] |= word{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(word{1} << (i & 63)); }
  bool test(std::size_t i) const noexcept {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool empty() const noexcept {
    for (word w : words_)
      if (w) return false;
    return true;
  }

  IdeaSet& operator|=(const IdeaSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  IdeaSet& operator&=(const IdeaSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  /// this := this \ o
  IdeaSet& subtract(const IdeaSet& o) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  /// this := a & b, reusing storage.
  void assign_and(const IdeaSet& a, const IdeaSet& b) noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] = a.words_[i] & b.words_[i];
  }

  std::size_t and_count(const IdeaSet& o) const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
    return c;
  }
  bool subset_of(const IdeaSet& o) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      word bits = words_[w];
      while (bits) {
        const int b = std::countr_zero(bits);
        f(w * 64 + static_cast<std::size_t>(b));
        bits &= bits - 1;
      }
    }
  }

  std::vector<std::size_t> to_vector() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::uint64_t hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (word w : words_) {
      h ^= w;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return h;
  }

  friend bool operator==(const IdeaSet& a, const IdeaSet& b) noexcept {
    return a.bits_ == b.bits_ && a.words_ == b.words_;
  }

 private:
  std::size_t bits_ = 0;
  std::vector<word> words_;
};

}  // namespace innonet
