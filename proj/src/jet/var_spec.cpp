#include "kmzi/jet/var_spec.hpp"

#include <bit>
#include <limits>
#include <set>

#include "kmzi/jet/series.hpp"

namespace kmzi::jet {

VarSpec::VarSpec(std::vector<std::string> names, std::vector<unsigned> caps)
    : names_(std::move(names)), caps_(std::move(caps)) {
  if (names_.size() != caps_.size()) {
    throw IndexError("VarSpec: names and caps differ in length");
  }
  std::set<std::string> seen(names_.begin(), names_.end());
  if (seen.size() != names_.size()) {
    throw IndexError("VarSpec: duplicate variable name");
  }

  unsigned offset = 0;
  std::uint64_t stride = 1;
  bool dense_overflow = false;
  for (std::size_t i = 0; i < caps_.size(); ++i) {
    const unsigned bits = static_cast<unsigned>(std::bit_width(caps_[i]));
    const unsigned width = bits + 1;
    if (offset + width > 64) {
      throw IndexError("VarSpec: caps do not fit a 64-bit monomial key");
    }
    offsets_.push_back(offset);
    widths_.push_back(width);
    bias_ |= ((std::uint64_t{1} << bits) - 1 - caps_[i]) << offset;
    guard_ |= std::uint64_t{1} << (offset + bits);
    offset += width;
    total_cap_ += caps_[i];

    strides_.push_back(stride);
    const std::uint64_t radix = std::uint64_t{caps_[i]} + 1;
    if (stride > std::numeric_limits<std::uint64_t>::max() / radix) {
      dense_overflow = true;
    } else {
      stride *= radix;
    }
  }
  dense_size_ = dense_overflow ? 0 : stride;
}

std::size_t VarSpec::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw IndexError("VarSpec: unknown variable '" + std::string(name) + "'");
}

bool VarSpec::fits(std::span<const unsigned> exps) const {
  if (exps.size() != caps_.size()) return false;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] > caps_[i]) return false;
  }
  return true;
}

std::uint64_t VarSpec::pack(std::span<const unsigned> exps) const {
  if (exps.size() != caps_.size()) {
    throw IndexError("VarSpec: multi-index has wrong length");
  }
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] > caps_[i]) {
      throw IndexError("VarSpec: exponent of '" + names_[i] + "' exceeds its cap");
    }
    key |= std::uint64_t{exps[i]} << offsets_[i];
  }
  return key;
}

unsigned VarSpec::exponent(std::uint64_t key, std::size_t var) const {
  const std::uint64_t mask = (std::uint64_t{1} << widths_[var]) - 1;
  return static_cast<unsigned>((key >> offsets_[var]) & mask);
}

MultiIndex VarSpec::unpack(std::uint64_t key) const {
  MultiIndex out(caps_.size());
  for (std::size_t i = 0; i < caps_.size(); ++i) out[i] = exponent(key, i);
  return out;
}

std::uint64_t VarSpec::dense_slot(std::uint64_t key) const {
  std::uint64_t slot = 0;
  for (std::size_t i = 0; i < caps_.size(); ++i) slot += exponent(key, i) * strides_[i];
  return slot;
}

SpecPtr make_spec(std::vector<std::string> names, std::vector<unsigned> caps) {
  return std::make_shared<const VarSpec>(std::move(names), std::move(caps));
}

}  // namespace kmzi::jet
