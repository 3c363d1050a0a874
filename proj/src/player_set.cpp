/*
 * Copyright 2026 The itree Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "itree/player_set.hpp"

#include <bit>
#include <stdexcept>

#include "itree/errors.hpp"

namespace itree {
namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t n) { return (n + kWordBits - 1) / kWordBits; }

}  // namespace

PlayerSet::PlayerSet(std::size_t n) : n_(n), words_(word_count(n), 0) {}

PlayerSet PlayerSet::full(std::size_t n) {
  PlayerSet s(n);
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (n % kWordBits != 0) {
    s.words_.back() = (std::uint64_t{1} << (n % kWordBits)) - 1;
  }
  return s;
}

PlayerSet PlayerSet::of(std::size_t n,
                        std::initializer_list<std::size_t> members) {
  PlayerSet s(n);
  for (std::size_t i : members) s.insert(i);
  return s;
}

PlayerSet PlayerSet::from_indices(std::size_t n,
                                  const std::vector<std::size_t>& members) {
  PlayerSet s(n);
  for (std::size_t i : members) s.insert(i);
  return s;
}

PlayerSet PlayerSet::from_bits(std::size_t n, std::uint64_t bits) {
  if (n > kWordBits) {
    throw ConfigError("PlayerSet::from_bits needs a universe of at most 64");
  }
  if (n < kWordBits && (bits >> n) != 0) {
    throw ConfigError("PlayerSet::from_bits: bits beyond the universe");
  }
  PlayerSet s(n);
  if (n > 0) s.words_[0] = bits;
  return s;
}

PlayerSet PlayerSet::range(std::size_t n, std::size_t first, std::size_t last) {
  PlayerSet s(n);
  for (std::size_t i = first; i <= last; ++i) s.insert(i);
  return s;
}

PlayerSet PlayerSet::parse(std::string_view text) {
  PlayerSet s(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      s.insert(i);
    } else if (text[i] != '0') {
      throw ConfigError("mask string may only contain 0 and 1");
    }
  }
  return s;
}

void PlayerSet::check_index(std::size_t i) const {
  if (i >= n_) {
    throw std::out_of_range("player index " + std::to_string(i) +
                            " outside universe of " + std::to_string(n_));
  }
}

void PlayerSet::check_same_universe(const PlayerSet& other) const {
  if (n_ != other.n_) {
    throw std::invalid_argument("PlayerSet universes differ");
  }
}

bool PlayerSet::contains(std::size_t i) const {
  if (i >= n_) return false;
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1;
}

void PlayerSet::insert(std::size_t i) {
  check_index(i);
  words_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
}

void PlayerSet::erase(std::size_t i) {
  check_index(i);
  words_[i / kWordBits] &= ~(std::uint64_t{1} << (i % kWordBits));
}

std::size_t PlayerSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

bool PlayerSet::empty() const {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

bool PlayerSet::is_subset_of(const PlayerSet& other) const {
  check_same_universe(other);
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] & ~other.words_[k]) return false;
  }
  return true;
}

bool PlayerSet::intersects(const PlayerSet& other) const {
  check_same_universe(other);
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] & other.words_[k]) return true;
  }
  return false;
}

std::size_t PlayerSet::first() const {
  for (std::size_t k = 0; k < words_.size(); ++k) {
    if (words_[k] != 0) return k * kWordBits + std::countr_zero(words_[k]);
  }
  return n_;
}

std::vector<std::size_t> PlayerSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < words_.size(); ++k) {
    for (std::uint64_t w = words_[k]; w != 0; w &= w - 1) {
      out.push_back(k * kWordBits + std::countr_zero(w));
    }
  }
  return out;
}

std::uint64_t PlayerSet::bits() const {
  if (n_ > kWordBits) {
    throw ConfigError("PlayerSet::bits needs a universe of at most 64");
  }
  return words_.empty() ? 0 : words_[0];
}

PlayerSet PlayerSet::compress(const PlayerSet& keep) const {
  check_same_universe(keep);
  if (!is_subset_of(keep)) {
    throw std::invalid_argument("PlayerSet::compress: not a subset");
  }
  PlayerSet out(keep.count());
  std::size_t rank = 0;
  for (std::size_t i : keep.members()) {
    if (contains(i)) out.insert(rank);
    ++rank;
  }
  return out;
}

std::string PlayerSet::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i : members()) s[i] = '1';
  return s;
}

PlayerSet& PlayerSet::operator|=(const PlayerSet& other) {
  check_same_universe(other);
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  return *this;
}

PlayerSet& PlayerSet::operator&=(const PlayerSet& other) {
  check_same_universe(other);
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  return *this;
}

PlayerSet& PlayerSet::operator-=(const PlayerSet& other) {
  check_same_universe(other);
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~other.words_[k];
  return *this;
}

PlayerSet PlayerSet::complement() const { return full(n_) - *this; }

bool operator<(const PlayerSet& a, const PlayerSet& b) {
  const std::size_t fa = a.first();
  const std::size_t fb = b.first();
  if (fa != fb) return fa < fb;
  return a.members() < b.members();
}

std::size_t PlayerSet::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ n_;
  for (auto w : words_) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

}  // namespace itree
