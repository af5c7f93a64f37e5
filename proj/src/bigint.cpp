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

#include "releval/util/bigint.hpp"

#include <stdexcept>

namespace releval {

namespace {
constexpr std::uint32_t kBase = 1000000000u;
using u128 = unsigned __int128;
}  // namespace

BigUint::BigUint(std::uint64_t v) {
  limbs_.clear();
  do {
    limbs_.push_back(static_cast<std::uint32_t>(v % kBase));
    v /= kBase;
  } while (v != 0);
}

BigUint& BigUint::mul(std::uint64_t m) {
  if (m == 0) {
    limbs_.assign(1, 0);
    return *this;
  }
  u128 carry = 0;
  for (auto& limb : limbs_) {
    u128 cur = static_cast<u128>(limb) * m + carry;
    limb = static_cast<std::uint32_t>(cur % kBase);
    carry = cur / kBase;
  }
  while (carry != 0) {
    limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
    carry /= kBase;
  }
  return *this;
}

BigUint& BigUint::mul(const BigUint& other) {
  if (is_zero() || other.is_zero()) {
    limbs_.assign(1, 0);
    return *this;
  }
  std::vector<std::uint32_t> result(limbs_.size() + other.limbs_.size(), 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    u128 carry = 0;
    for (std::size_t j = 0; j < other.limbs_.size(); ++j) {
      u128 cur = static_cast<u128>(limbs_[i]) * other.limbs_[j] + result[i + j] + carry;
      result[i + j] = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
    }
    std::size_t k = i + other.limbs_.size();
    while (carry != 0) {
      u128 cur = result[k] + carry;
      result[k] = static_cast<std::uint32_t>(cur % kBase);
      carry = cur / kBase;
      ++k;
    }
  }
  limbs_ = std::move(result);
  trim();
  return *this;
}

BigUint& BigUint::div(std::uint32_t d) {
  if (d == 0) throw std::domain_error("BigUint::div by zero");
  std::uint64_t rem = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    std::uint64_t cur = rem * kBase + limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(cur / d);
    rem = cur % d;
  }
  trim();
  return *this;
}

BigUint BigUint::factorial(std::uint64_t n) {
  BigUint out(1);
  for (std::uint64_t i = 2; i <= n; ++i) out.mul(i);
  return out;
}

BigUint BigUint::falling_factorial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigUint(0);
  BigUint out(1);
  for (std::uint64_t i = 0; i < k; ++i) out.mul(n - i);
  return out;
}

BigUint BigUint::binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return BigUint(0);
  if (k > n - k) k = n - k;
  BigUint out(1);
  // multiply/divide interleaved keeps every intermediate integral
  for (std::uint64_t i = 0; i < k; ++i) {
    out.mul(n - i);
    out.div(static_cast<std::uint32_t>(i + 1));
  }
  return out;
}

bool BigUint::fits_u64() const {
  if (limbs_.size() > 3) return false;
  u128 v = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
  return v <= static_cast<u128>(UINT64_MAX);
}

std::uint64_t BigUint::as_u64() const {
  std::uint64_t v = 0;
  for (std::size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
  return v;
}

std::strong_ordering BigUint::operator<=>(const BigUint& other) const {
  if (limbs_.size() != other.limbs_.size())
    return limbs_.size() <=> other.limbs_.size();
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    if (limbs_[i] != other.limbs_[i]) return limbs_[i] <=> other.limbs_[i];
  }
  return std::strong_ordering::equal;
}

std::string BigUint::str() const {
  std::string out = std::to_string(limbs_.back());
  for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
    std::string part = std::to_string(limbs_[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

void BigUint::trim() {
  while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
}

}  // namespace releval
