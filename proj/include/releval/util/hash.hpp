// Copyright 2026 the releval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace releval {

struct Hash128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  bool operator==(const Hash128&) const = default;

  /// 32 lowercase hex chars, hi word first. Stable across platforms.
  std::string hex() const;
};

/// MurmurHash3 x64 128-bit over an explicit byte string. The input must be a
/// canonical encoding (fixed-width little-endian ints, length-prefixed
/// strings) for the result to be platform independent.
Hash128 murmur3_128(std::string_view bytes, std::uint64_t seed = 0);

std::uint64_t hash64(std::string_view bytes, std::uint64_t seed = 0);

/// splitmix64 finalizer; used to derive independent sub-seeds from a base
/// seed and a tag so parallel and serial execution draw identical streams.
std::uint64_t mix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  return mix64(base + 0x9e3779b97f4a7c15ULL * (tag + 1));
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag1, std::uint64_t tag2) {
  return derive_seed(derive_seed(base, tag1), tag2);
}

/// Canonical byte encoder feeding murmur3_128. Appends length-prefixed
/// strings and fixed-width little-endian integers so distinct field tuples
/// encode to distinct byte strings.
class CanonicalEncoder {
 public:
  void put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  void put_i64(std::int64_t v) { put_u64(static_cast<std::uint64_t>(v)); }

  void put_f64(double v);

  void put_str(std::string_view s) {
    put_u64(s.size());
    bytes_.append(s);
  }

  const std::string& bytes() const { return bytes_; }
  Hash128 hash(std::uint64_t seed = 0) const { return murmur3_128(bytes_, seed); }

 private:
  std::string bytes_;
};

}  // namespace releval
