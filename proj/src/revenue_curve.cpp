// Copyright 2026 The budgetmech Authors
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

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "budgetmech/distribution.hpp"

namespace budgetmech {

RevenueCurve::RevenueCurve(Distribution d) : dist_(std::move(d)) {
  std::vector<double> prices = evaluation_grid(dist_);
  if (!dist_.is_discrete()) {
    prices.push_back(dist_.support_min());
    if (std::isfinite(dist_.support_max())) prices.push_back(dist_.support_max());
    std::sort(prices.begin(), prices.end());
    prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
  }

  // Origin first, then prices from the top down so sale probability ascends.
  points_.push_back({kInfinity, 0.0, 0.0});
  for (auto it = prices.rbegin(); it != prices.rend(); ++it) {
    const double s = dist_.tail_ge(*it);
    const Point p{*it, s, *it * s};
    if (s <= points_.back().sale_prob) {
      if (p.revenue > points_.back().revenue) points_.back() = p;
      continue;
    }
    points_.push_back(p);
  }

  // Upper concave hull, monotone chain.
  for (std::size_t i = 0; i < points_.size(); ++i) {
    while (hull_.size() >= 2) {
      const Point& a = points_[hull_[hull_.size() - 2]];
      const Point& b = points_[hull_.back()];
      const Point& c = points_[i];
      const double cross = (b.sale_prob - a.sale_prob) * (c.revenue - a.revenue) -
                           (b.revenue - a.revenue) * (c.sale_prob - a.sale_prob);
      if (cross < 0.0) break;
      hull_.pop_back();
    }
    hull_.push_back(i);
  }

  if (dist_.is_discrete()) {
    const auto& v = dist_.support();
    const auto& pmf = dist_.pmf();
    const std::size_t n = v.size();
    discrete_phi_.resize(n);
    discrete_ironed_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double upper = k + 1 < n ? dist_.tail_ge(v[k + 1]) : 0.0;
      const double gap = k + 1 < n ? v[k + 1] - v[k] : 0.0;
      discrete_phi_[k] = v[k] - upper * gap / pmf[k];
      discrete_ironed_[k] = (hull_at(dist_.tail_ge(v[k])) - hull_at(upper)) / pmf[k];
    }
  }
}

double RevenueCurve::hull_at(double s) const {
  const std::size_t i = hull_segment(s);
  const Point& a = points_[hull_[i]];
  const Point& b = points_[hull_[i + 1]];
  if (b.sale_prob <= a.sale_prob) return a.revenue;
  const double t = std::clamp((s - a.sale_prob) / (b.sale_prob - a.sale_prob), 0.0, 1.0);
  return a.revenue + t * (b.revenue - a.revenue);
}

std::size_t RevenueCurve::hull_segment(double s) const {
  if (hull_.size() < 2) throw std::logic_error("revenue curve: degenerate hull");
  // first hull vertex with sale_prob > s, minus one
  auto it = std::upper_bound(hull_.begin(), hull_.end(), s,
                             [&](double x, std::size_t idx) { return x < points_[idx].sale_prob; });
  std::size_t i = it == hull_.begin() ? 0 : static_cast<std::size_t>(it - hull_.begin()) - 1;
  return std::min(i, hull_.size() - 2);
}

std::size_t RevenueCurve::support_index(double v) const {
  const auto& support = dist_.support();
  auto it = std::lower_bound(support.begin(), support.end(), v - 1e-12 * std::max(1.0, std::fabs(v)));
  if (it == support.end() || std::fabs(*it - v) > 1e-12 * std::max(1.0, std::fabs(v))) {
    throw std::domain_error("virtual value: point outside the support");
  }
  return static_cast<std::size_t>(it - support.begin());
}

void RevenueCurve::check_in_support(double v) const {
  const double tol = 1e-12 * std::max(1.0, std::fabs(v));
  if (!(v >= dist_.support_min() - tol && v <= dist_.support_max() + tol) ||
      (dist_.atom_mass(v) <= 0.0 && dist_.pdf(v) <= 0.0 && v != dist_.support_min())) {
    throw std::domain_error("virtual value: point outside the support");
  }
}

double RevenueCurve::virtual_value(double v) const {
  if (dist_.is_discrete()) return discrete_phi_[support_index(v)];
  check_in_support(v);
  if (dist_.atom_mass(v) > 0.0) return v;
  const double f = dist_.pdf(v);
  if (!(f > 0.0)) throw std::domain_error("virtual value: zero density");
  return v - dist_.tail_gt(v) / f;
}

double RevenueCurve::ironed_virtual_value(double v) const {
  if (dist_.is_discrete()) return discrete_ironed_[support_index(v)];
  check_in_support(v);
  const double mass = dist_.atom_mass(v);
  if (mass > 0.0) {
    const double hi = dist_.tail_ge(v);
    const double lo = dist_.tail_gt(v);
    return (hull_at(hi) - hull_at(lo)) / (hi - lo);
  }
  const double s = dist_.tail_ge(v);
  const std::size_t i = hull_segment(s);
  const std::size_t a = hull_[i];
  const std::size_t b = hull_[i + 1];
  if (b == a + 1 && dist_.pdf(v) > 0.0) return virtual_value(v);
  return (points_[b].revenue - points_[a].revenue) / (points_[b].sale_prob - points_[a].sale_prob);
}

}  // namespace budgetmech
