// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <tsnip/error.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tsnip {

/// Minimum of every length-`window` run of `in`, written to `out`
/// (out.size() == in.size() - window + 1).
///
/// Monotonic double-ended queue of candidate indices held in a fixed ring, so
/// each input is pushed and popped at most once: O(in.size()) total.
class SlidingMinimum {
 public:
  explicit SlidingMinimum(std::size_t window) : window_(window), ring_(window + 2) {
    detail::require(window >= 1, "sliding window must be at least 1");
  }

  void operator()(std::span<const double> in, std::span<double> out) {
    if (window_ > in.size())
      throw invalid_argument("sliding window " + std::to_string(window_) +
                             " larger than input of length " + std::to_string(in.size()));
    detail::require(out.size() == in.size() - window_ + 1, "sliding minimum output has wrong length");
    const std::size_t cap = ring_.size();
    std::size_t head = 0, tail = 0;  // live indices occupy [head, tail) modulo cap
    for (std::size_t i = 0; i < in.size(); ++i) {
      while (tail != head && in[ring_[(tail + cap - 1) % cap]] >= in[i]) tail = (tail + cap - 1) % cap;
      ring_[tail] = i;
      tail = (tail + 1) % cap;
      if (ring_[head] + window_ <= i) head = (head + 1) % cap;
      if (i + 1 >= window_) out[i + 1 - window_] = in[ring_[head]];
    }
  }

 private:
  std::size_t window_;
  std::vector<std::size_t> ring_;
};

inline std::vector<double> sliding_minima(std::span<const double> in, std::size_t window) {
  SlidingMinimum op(window);
  std::vector<double> out(in.size() >= window ? in.size() - window + 1 : 0);
  op(in, out);
  return out;
}

}  // namespace tsnip
