#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <stdexcept>
#include <vector>

namespace marsim {

// Rolling multiset of the last `capacity` observations, kept sorted for
// percentile queries. Eviction is by arrival order (oldest out first).
// Stored as a sequence of sorted blocks so insert/erase/rank are all
// O(sqrt(n)) instead of the O(n) of one flat sorted vector; agents hold
// several of these with capacities in the thousands.
class RollingPercentileWindow {
 public:
  explicit RollingPercentileWindow(std::size_t capacity)
      : capacity_(capacity == 0 ? 1 : capacity) {}

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t capacity() const { return capacity_; }

  void insert(double x) {
    if (count_ == capacity_) {
      erase_one(arrivals_.front());
      arrivals_.pop_front();
    }
    arrivals_.push_back(x);
    insert_sorted(x);
  }

  // Fraction of stored entries strictly less than x (strict-rank convention),
  // in [0, 1).
  double percentile_of(double x) const {
    if (count_ == 0)
      throw std::logic_error("percentile_of: no history in window");
    return static_cast<double>(rank_less(x)) / static_cast<double>(count_);
  }

  std::size_t rank_less(double x) const {
    std::size_t rank = 0;
    for (const auto& block : blocks_) {
      if (block.back() < x) {
        rank += block.size();
        continue;
      }
      rank += static_cast<std::size_t>(
          std::lower_bound(block.begin(), block.end(), x) - block.begin());
      break;
    }
    return rank;
  }

  // Ascending copy, for tests and debugging.
  std::vector<double> sorted_values() const {
    std::vector<double> out;
    out.reserve(count_);
    for (const auto& block : blocks_)
      out.insert(out.end(), block.begin(), block.end());
    return out;
  }

 private:
  static constexpr std::size_t kBlock = 64;

  void insert_sorted(double x) {
    ++count_;
    if (blocks_.empty()) {
      blocks_.push_back({x});
      return;
    }
    std::size_t i = 0;
    while (i + 1 < blocks_.size() && blocks_[i].back() < x) ++i;
    auto& block = blocks_[i];
    block.insert(std::lower_bound(block.begin(), block.end(), x), x);
    if (block.size() > 2 * kBlock) split_block(i);
  }

  void erase_one(double x) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
      auto& block = blocks_[i];
      if (block.back() < x) continue;
      auto it = std::lower_bound(block.begin(), block.end(), x);
      if (it == block.end() || *it != x) break;  // not present; unreachable
      block.erase(it);
      --count_;
      if (block.empty()) blocks_.erase(blocks_.begin() + i);
      maybe_rebuild();
      return;
    }
  }

  void split_block(std::size_t i) {
    auto& block = blocks_[i];
    std::vector<double> upper(block.begin() + block.size() / 2, block.end());
    block.resize(block.size() / 2);
    blocks_.insert(blocks_.begin() + i + 1, std::move(upper));
  }

  void maybe_rebuild() {
    if (blocks_.size() <= 4 + 4 * (count_ / kBlock)) return;
    std::vector<double> all = sorted_values();
    blocks_.clear();
    for (std::size_t at = 0; at < all.size(); at += kBlock)
      blocks_.emplace_back(all.begin() + at,
                           all.begin() + std::min(at + kBlock, all.size()));
  }

  std::size_t capacity_;
  std::size_t count_ = 0;
  std::deque<double> arrivals_;
  std::vector<std::vector<double>> blocks_;
};

}  // namespace marsim
