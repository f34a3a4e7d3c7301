#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace grbb {

using Count = std::uint32_t;

/// Ball counts of L bins.
class OccupancyVector {
 public:
  OccupancyVector() = default;
  explicit OccupancyVector(std::size_t bins) : counts_(bins, 0) {}
  explicit OccupancyVector(std::vector<Count> counts) : counts_(std::move(counts)) {}

  std::size_t bins() const noexcept { return counts_.size(); }
  Count& operator[](std::size_t i) noexcept { return counts_[i]; }
  Count operator[](std::size_t i) const noexcept { return counts_[i]; }

  std::span<Count> counts() noexcept { return counts_; }
  std::span<const Count> counts() const noexcept { return counts_; }
  const std::vector<Count>& vector() const noexcept { return counts_; }

  std::uint64_t total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }
  /// Number of bins holding at least one ball.
  std::size_t occupied() const noexcept {
    std::size_t n = 0;
    for (Count c : counts_) n += c > 0 ? 1 : 0;
    return n;
  }

  friend bool operator==(const OccupancyVector&, const OccupancyVector&) = default;
  friend auto operator<=>(const OccupancyVector&, const OccupancyVector&) = default;

 private:
  std::vector<Count> counts_;
};

}  // namespace grbb
