#pragma once

#include <string>
#include <utility>

#include "cotorra/types.hpp"

namespace cotorra {

// Base measurements of a link plus the emulation shaping factors. The
// effective values are what traffic actually experiences.
struct LinkMetrics {
  double d_ms = 0.0;
  double lambda_mbps = 0.0;
  double psi = 1.0;    // delay multiplier, >= 1
  double delta = 1.0;  // throughput divisor, >= 1

  double effective_delay_ms() const { return psi * d_ms; }
  double effective_throughput_mbps() const { return lambda_mbps / delta; }
  bool shaped() const { return psi != 1.0 || delta != 1.0; }
};

// Unordered endpoint pair, stored with the smaller id first.
class LinkKey {
 public:
  LinkKey(NodeId a, NodeId b) {
    if (b < a) std::swap(a, b);
    first_ = std::move(a);
    second_ = std::move(b);
  }

  const NodeId& first() const noexcept { return first_; }
  const NodeId& second() const noexcept { return second_; }
  bool touches(const NodeId& n) const { return first_ == n || second_ == n; }
  const NodeId& other(const NodeId& n) const { return first_ == n ? second_ : first_; }

  std::string str() const { return first_.str() + "--" + second_.str(); }

  friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
  friend bool operator==(const LinkKey&, const LinkKey&) = default;

 private:
  NodeId first_;
  NodeId second_;
};

}  // namespace cotorra
