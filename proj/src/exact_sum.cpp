#include "logsol/exact_sum.hpp"

#include <bit>
#include <cmath>

namespace logsol {

namespace {
__extension__ typedef unsigned __int128 u128;
constexpr std::uint32_t kNormalizeEvery = 1u << 30;
constexpr int kMinExponent = -1074; // weight of bit 0
} // namespace

void ExactSum::add(double x) {
  if (x == 0.0)
    return;
  if (!std::isfinite(x)) {
    special_ += x;
    return;
  }
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const bool negative = (bits >> 63) != 0;
  const auto biased = static_cast<int>((bits >> 52) & 0x7ff);
  std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  int offset = 0; // position of the mantissa's bit 0 above 2^-1074
  if (biased == 0) {
    offset = 0;
  } else {
    mantissa |= std::uint64_t{1} << 52;
    offset = biased - 1;
  }

  const int limb = offset / kDigitBits;
  const int shift = offset % kDigitBits;
  const u128 wide = static_cast<u128>(mantissa) << shift;
  const auto d0 = static_cast<std::int64_t>(static_cast<std::uint32_t>(wide));
  const auto d1 = static_cast<std::int64_t>(static_cast<std::uint32_t>(wide >> 32));
  const auto d2 = static_cast<std::int64_t>(static_cast<std::uint32_t>(wide >> 64));
  if (negative) {
    limbs_[limb] -= d0;
    limbs_[limb + 1] -= d1;
    limbs_[limb + 2] -= d2;
  } else {
    limbs_[limb] += d0;
    limbs_[limb + 1] += d1;
    limbs_[limb + 2] += d2;
  }
  if (++pending_ >= kNormalizeEvery)
    normalize();
}

void ExactSum::normalize() {
  for (int i = 0; i + 1 < kLimbs; ++i) {
    const std::int64_t carry = limbs_[i] >> kDigitBits; // floor division
    limbs_[i] -= carry * (std::int64_t{1} << kDigitBits);
    limbs_[i + 1] += carry;
  }
  pending_ = 0;
}

void ExactSum::merge(const ExactSum &other) {
  ExactSum rhs = other;
  rhs.normalize();
  normalize();
  for (int i = 0; i < kLimbs; ++i)
    limbs_[i] += rhs.limbs_[i];
  special_ += rhs.special_;
  normalize();
}

double ExactSum::value() const {
  if (special_ != 0.0 || std::isnan(special_))
    return special_;

  ExactSum acc = *this;
  acc.normalize();
  bool negative = acc.limbs_[kLimbs - 1] < 0;
  if (negative) {
    for (auto &l : acc.limbs_)
      l = -l;
    acc.normalize();
  }

  int top = kLimbs - 1;
  while (top >= 0 && acc.limbs_[top] == 0)
    --top;
  if (top < 0)
    return 0.0;

  // Gather three digits (96 bits) below and including the top one; any
  // nonzero digit further down becomes a sticky bit so the int->double
  // conversion rounds correctly.
  u128 head = 0;
  int lowest = top - 2;
  for (int i = top; i >= lowest; --i) {
    head <<= 32;
    if (i >= 0)
      head |= static_cast<std::uint32_t>(acc.limbs_[i]);
  }
  for (int i = lowest - 1; i >= 0; --i) {
    if (acc.limbs_[i] != 0) {
      head |= 1;
      break;
    }
  }
  const double magnitude =
      std::ldexp(static_cast<double>(head), lowest * kDigitBits + kMinExponent);
  return negative ? -magnitude : magnitude;
}

} // namespace logsol
