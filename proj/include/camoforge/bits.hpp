// Copyright 2026 The camoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace camoforge {

// Fixed-width bit vector used for input patterns, output patterns and keys.
// Bit i is printed as character i of the binary form, so "00100" has bit 2 set.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size, bool value = false)
      : size_(size), words_((size + 63) / 64, value ? ~uint64_t{0} : 0) {
    trim();
  }

  static BitString from_binary(std::string_view text) {
    BitString b(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1') {
        b.set(i, true);
      } else if (text[i] != '0') {
        throw std::invalid_argument("not a binary string: " + std::string(text));
      }
    }
    return b;
  }

  // Bit i of the result is bit i of `value`.
  static BitString from_uint(uint64_t value, std::size_t size) {
    BitString b(size);
    if (!b.words_.empty()) b.words_[0] = value;
    b.trim();
    return b;
  }

  // Inverse of to_hex(); the hex digits are read as a little-endian number.
  static BitString from_hex(std::string_view text, std::size_t size) {
    if (text.starts_with("0x") || text.starts_with("0X")) text.remove_prefix(2);
    BitString b(size);
    std::size_t bit = 0;
    for (auto it = text.rbegin(); it != text.rend(); ++it, bit += 4) {
      int v;
      char c = *it;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw std::invalid_argument("not a hex string: " + std::string(text));
      for (int j = 0; j < 4; ++j) {
        if ((v >> j) & 1) {
          if (bit + j >= size) throw std::invalid_argument("hex value wider than " + std::to_string(size) + " bits");
          b.set(bit + j, true);
        }
      }
    }
    return b;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  bool operator[](std::size_t i) const { return get(i); }
  void set(std::size_t i, bool v) {
    uint64_t m = uint64_t{1} << (i & 63);
    if (v) words_[i >> 6] |= m; else words_[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }
  void push_back(bool v) {
    if ((size_ & 63) == 0) words_.push_back(0);
    ++size_;
    set(size_ - 1, v);
  }

  const std::vector<uint64_t>& words() const { return words_; }

  uint64_t to_uint() const {
    if (size_ > 64) throw std::out_of_range("bit string wider than 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  std::size_t popcount() const {
    std::size_t n = 0;
    for (uint64_t w : words_) n += std::popcount(w);
    return n;
  }

  std::size_t hamming_distance(const BitString& other) const {
    if (other.size_ != size_) throw std::invalid_argument("hamming distance of unequal widths");
    std::size_t n = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) n += std::popcount(words_[i] ^ other.words_[i]);
    return n;
  }

  BitString slice(std::size_t offset, std::size_t count) const {
    BitString b(count);
    for (std::size_t i = 0; i < count; ++i) b.set(i, get(offset + i));
    return b;
  }

  std::string to_binary() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) if (get(i)) s[i] = '1';
    return s;
  }

  // Little-endian hex: bit 0 is the least significant bit of the last digit.
  std::string to_hex() const {
    if (size_ == 0) return "0";
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string s;
    for (std::size_t nib = 0; nib * 4 < size_; ++nib) {
      unsigned v = 0;
      for (unsigned j = 0; j < 4 && nib * 4 + j < size_; ++j) v |= unsigned(get(nib * 4 + j)) << j;
      s.push_back(kDigits[v]);
    }
    std::reverse(s.begin(), s.end());
    return s;
  }

  bool operator==(const BitString& o) const = default;

  // Orders like the binary strings do: shorter first, then lexicographic.
  std::strong_ordering operator<=>(const BitString& o) const {
    if (size_ != o.size_) return size_ <=> o.size_;
    for (std::size_t i = 0; i < size_; ++i) {
      bool a = get(i), b = o.get(i);
      if (a != b) return a ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ size_;
    for (uint64_t w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (uint64_t{1} << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<uint64_t> words_;
};

struct BitStringHash {
  std::size_t operator()(const BitString& b) const { return b.hash(); }
};

}  // namespace camoforge
