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

#ifndef ITREE_PLAYER_SET_HPP_
#define ITREE_PLAYER_SET_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace itree {

// Fixed-universe bit set over player indices 0..n-1. Bits at positions >= n
// are always zero. Exact engines work on universes of at most 64 players and
// use `bits()` directly; sampling paths accept any n.
class PlayerSet {
 public:
  PlayerSet() = default;
  explicit PlayerSet(std::size_t n);

  static PlayerSet full(std::size_t n);
  static PlayerSet of(std::size_t n, std::initializer_list<std::size_t> members);
  static PlayerSet from_indices(std::size_t n,
                                const std::vector<std::size_t>& members);
  static PlayerSet from_bits(std::size_t n, std::uint64_t bits);
  // Inclusive range [first, last].
  static PlayerSet range(std::size_t n, std::size_t first, std::size_t last);
  // Parses a 0/1 string in position order ("1011" -> {0, 2, 3}).
  static PlayerSet parse(std::string_view text);

  std::size_t universe_size() const { return n_; }
  bool contains(std::size_t i) const;
  void insert(std::size_t i);
  void erase(std::size_t i);

  std::size_t count() const;
  bool empty() const;
  bool is_subset_of(const PlayerSet& other) const;
  bool intersects(const PlayerSet& other) const;
  // Smallest member, or universe_size() when empty.
  std::size_t first() const;
  std::vector<std::size_t> members() const;

  // Only valid when universe_size() <= 64.
  std::uint64_t bits() const;

  // Maps this set (a subset of `keep`) into the index space of `keep`, where
  // the i-th smallest member of `keep` becomes index i.
  PlayerSet compress(const PlayerSet& keep) const;

  std::string to_string() const;

  PlayerSet& operator|=(const PlayerSet& other);
  PlayerSet& operator&=(const PlayerSet& other);
  PlayerSet& operator-=(const PlayerSet& other);
  friend PlayerSet operator|(PlayerSet a, const PlayerSet& b) { return a |= b; }
  friend PlayerSet operator&(PlayerSet a, const PlayerSet& b) { return a &= b; }
  friend PlayerSet operator-(PlayerSet a, const PlayerSet& b) { return a -= b; }
  PlayerSet complement() const;

  friend bool operator==(const PlayerSet&, const PlayerSet&) = default;
  // Orders by leftmost member first, then lexicographically by members.
  friend bool operator<(const PlayerSet& a, const PlayerSet& b);

  std::size_t hash() const;
  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void check_index(std::size_t i) const;
  void check_same_universe(const PlayerSet& other) const;

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

struct PlayerSetHash {
  std::size_t operator()(const PlayerSet& s) const { return s.hash(); }
};

}  // namespace itree

#endif  // ITREE_PLAYER_SET_HPP_
