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

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace releval {

/// Arbitrary-precision unsigned integer, just large enough for exact
/// perturbation-space cardinalities (products of counts, factorials and
/// binomials). Limbs are base 1e9 so decimal printing is direct.
class BigUint {
 public:
  BigUint() : limbs_{0} {}
  explicit BigUint(std::uint64_t v);

  static BigUint factorial(std::uint64_t n);
  static BigUint falling_factorial(std::uint64_t n, std::uint64_t k);  // n*(n-1)*...*(n-k+1)
  static BigUint binomial(std::uint64_t n, std::uint64_t k);

  BigUint& mul(std::uint64_t m);
  BigUint& mul(const BigUint& other);
  BigUint& div(std::uint32_t d);  // exact or truncating division by a small divisor

  bool is_zero() const { return limbs_.size() == 1 && limbs_[0] == 0; }
  bool fits_u64() const;
  std::uint64_t as_u64() const;  // valid only when fits_u64()

  std::strong_ordering operator<=>(const BigUint& other) const;
  bool operator==(const BigUint& other) const = default;

  std::string str() const;

 private:
  void trim();
  // little-endian limbs, base 1e9
  std::vector<std::uint32_t> limbs_;
};

}  // namespace releval
