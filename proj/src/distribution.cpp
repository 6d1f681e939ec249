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

#include "budgetmech/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace budgetmech {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kSumTol = 1e-12;

bool same_point(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a));
}

// Linear interpolation of the cdf on the piecewise segment [k[i], k[i+1]].
double interpolate(const CdfKnot& a, const CdfKnot& b, double v) {
  if (b.x <= a.x) return b.cdf;
  return a.cdf + (b.cdf - a.cdf) * (v - a.x) / (b.x - a.x);
}

}  // namespace

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::kDiscrete:
      return "discrete";
    case DistributionKind::kUniform:
      return "uniform";
    case DistributionKind::kExponential:
      return "exponential";
    case DistributionKind::kPiecewiseLinearCdf:
      return "piecewise-linear-cdf";
  }
  return "unknown";
}

Distribution Distribution::discrete(std::vector<double> support, std::vector<double> pmf) {
  if (support.empty() || support.size() != pmf.size()) {
    throw std::invalid_argument("discrete distribution: support and pmf must be nonempty and of equal length");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (!std::isfinite(support[k]) || support[k] < 0.0) {
      throw std::invalid_argument("discrete distribution: support points must be finite and nonnegative");
    }
    if (k > 0 && !(support[k] > support[k - 1])) {
      throw std::invalid_argument("discrete distribution: support must be strictly ascending");
    }
    if (!(pmf[k] > 0.0)) {
      throw std::invalid_argument("discrete distribution: pmf entries must be positive");
    }
    total += pmf[k];
  }
  if (std::fabs(total - 1.0) > kSumTol) {
    throw std::invalid_argument("discrete distribution: pmf must sum to 1");
  }
  for (double& p : pmf) p /= total;

  Discrete rep{std::move(support), std::move(pmf), {}, {}};
  const std::size_t n = rep.pmf.size();
  rep.cum.resize(n);
  rep.tail.resize(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += rep.pmf[k];
    rep.cum[k] = acc;
  }
  rep.cum.back() = 1.0;
  acc = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    acc += rep.pmf[k];
    rep.tail[k] = acc;
  }
  rep.tail.front() = 1.0;
  return Distribution(std::move(rep));
}

Distribution Distribution::atom(double v) { return discrete({v}, {1.0}); }

Distribution Distribution::uniform(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("uniform distribution: need 0 <= lo < hi");
  }
  return Distribution(Uniform{lo, hi});
}

Distribution Distribution::exponential(double rate, double cap) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("exponential distribution: rate must be positive");
  }
  if (!(cap > 0.0)) {
    throw std::invalid_argument("exponential distribution: cap must be positive");
  }
  return Distribution(Exponential{rate, cap});
}

Distribution Distribution::piecewise_linear(std::vector<CdfKnot> knots) {
  if (knots.empty()) {
    throw std::invalid_argument("piecewise-linear cdf: need at least one knot");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const auto& k = knots[i];
    if (!std::isfinite(k.x) || k.x < 0.0) {
      throw std::invalid_argument("piecewise-linear cdf: knot positions must be finite and nonnegative");
    }
    if (k.cdf < 0.0 || k.cdf > 1.0 + kSumTol) {
      throw std::invalid_argument("piecewise-linear cdf: knot cdf values must lie in [0, 1]");
    }
    if (i > 0 && (k.x < knots[i - 1].x || k.cdf < knots[i - 1].cdf)) {
      throw std::invalid_argument("piecewise-linear cdf: knots must be nondecreasing in x and cdf");
    }
  }
  if (std::fabs(knots.back().cdf - 1.0) > kSumTol) {
    throw std::invalid_argument("piecewise-linear cdf: last knot must have cdf 1");
  }
  knots.back().cdf = 1.0;
  return Distribution(Piecewise{std::move(knots)});
}

DistributionKind Distribution::kind() const {
  return std::visit(Overloaded{
                        [](const Discrete&) { return DistributionKind::kDiscrete; },
                        [](const Uniform&) { return DistributionKind::kUniform; },
                        [](const Exponential&) { return DistributionKind::kExponential; },
                        [](const Piecewise&) { return DistributionKind::kPiecewiseLinearCdf; },
                    },
                    rep_);
}

double Distribution::cdf(double v) const {
  return std::visit(Overloaded{
                        [&](const Discrete& d) {
                          auto it = std::upper_bound(d.support.begin(), d.support.end(), v);
                          if (it == d.support.begin()) return 0.0;
                          return d.cum[static_cast<std::size_t>(it - d.support.begin()) - 1];
                        },
                        [&](const Uniform& u) {
                          if (v <= u.lo) return 0.0;
                          if (v >= u.hi) return 1.0;
                          return (v - u.lo) / (u.hi - u.lo);
                        },
                        [&](const Exponential& e) {
                          if (v <= 0.0) return 0.0;
                          if (v >= e.cap) return 1.0;
                          return -std::expm1(-e.rate * v);
                        },
                        [&](const Piecewise& p) {
                          const auto& k = p.knots;
                          auto it = std::upper_bound(k.begin(), k.end(), v,
                                                     [](double x, const CdfKnot& knot) { return x < knot.x; });
                          if (it == k.begin()) return 0.0;
                          const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
                          if (i + 1 == k.size()) return k[i].cdf;
                          return interpolate(k[i], k[i + 1], v);
                        },
                    },
                    rep_);
}

double Distribution::cdf_left(double v) const {
  return std::visit(Overloaded{
                        [&](const Discrete& d) {
                          auto it = std::lower_bound(d.support.begin(), d.support.end(), v);
                          if (it == d.support.begin()) return 0.0;
                          return d.cum[static_cast<std::size_t>(it - d.support.begin()) - 1];
                        },
                        [&](const Uniform&) { return cdf(v); },
                        [&](const Exponential& e) {
                          if (v <= 0.0) return 0.0;
                          if (v > e.cap) return 1.0;
                          return -std::expm1(-e.rate * v);
                        },
                        [&](const Piecewise& p) {
                          const auto& k = p.knots;
                          auto it = std::lower_bound(k.begin(), k.end(), v,
                                                     [](const CdfKnot& knot, double x) { return knot.x < x; });
                          if (it == k.begin()) return 0.0;
                          if (it == k.end()) return 1.0;
                          const std::size_t j = static_cast<std::size_t>(it - k.begin());
                          return interpolate(k[j - 1], k[j], v);
                        },
                    },
                    rep_);
}

double Distribution::tail_gt(double v) const {
  if (const auto* e = std::get_if<Exponential>(&rep_)) {
    if (v < 0.0) return 1.0;
    if (v >= e->cap) return 0.0;
    return std::exp(-e->rate * v);
  }
  if (const auto* d = std::get_if<Discrete>(&rep_)) {
    auto it = std::upper_bound(d->support.begin(), d->support.end(), v);
    if (it == d->support.end()) return 0.0;
    return d->tail[static_cast<std::size_t>(it - d->support.begin())];
  }
  return 1.0 - cdf(v);
}

double Distribution::tail_ge(double v) const {
  if (const auto* e = std::get_if<Exponential>(&rep_)) {
    if (v <= 0.0) return 1.0;
    if (v > e->cap) return 0.0;
    return std::exp(-e->rate * v);
  }
  if (const auto* d = std::get_if<Discrete>(&rep_)) {
    auto it = std::lower_bound(d->support.begin(), d->support.end(), v);
    if (it == d->support.end()) return 0.0;
    return d->tail[static_cast<std::size_t>(it - d->support.begin())];
  }
  return 1.0 - cdf_left(v);
}

double Distribution::atom_mass(double v) const {
  return std::visit(Overloaded{
                        [&](const Discrete& d) {
                          auto it = std::lower_bound(d.support.begin(), d.support.end(), v);
                          if (it == d.support.end() || *it != v) return 0.0;
                          return d.pmf[static_cast<std::size_t>(it - d.support.begin())];
                        },
                        [&](const Uniform&) { return 0.0; },
                        [&](const Exponential& e) {
                          if (std::isfinite(e.cap) && v == e.cap) return std::exp(-e.rate * e.cap);
                          return 0.0;
                        },
                        [&](const Piecewise&) { return std::max(0.0, cdf(v) - cdf_left(v)); },
                    },
                    rep_);
}

double Distribution::pdf(double v) const {
  return std::visit(Overloaded{
                        [&](const Discrete&) { return 0.0; },
                        [&](const Uniform& u) { return (v >= u.lo && v < u.hi) ? 1.0 / (u.hi - u.lo) : 0.0; },
                        [&](const Exponential& e) {
                          return (v >= 0.0 && v < e.cap) ? e.rate * std::exp(-e.rate * v) : 0.0;
                        },
                        [&](const Piecewise& p) {
                          const auto& k = p.knots;
                          // right-hand segment at knots
                          for (std::size_t i = 0; i + 1 < k.size(); ++i) {
                            if (k[i + 1].x > k[i].x && v >= k[i].x && v < k[i + 1].x) {
                              return (k[i + 1].cdf - k[i].cdf) / (k[i + 1].x - k[i].x);
                            }
                          }
                          return 0.0;
                        },
                    },
                    rep_);
}

double Distribution::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("quantile: probability must lie in [0, 1]");
  }
  return std::visit(Overloaded{
                        [&](const Discrete& d) {
                          auto it = std::lower_bound(d.cum.begin(), d.cum.end(), p - kSumTol);
                          if (it == d.cum.end()) return d.support.back();
                          return d.support[static_cast<std::size_t>(it - d.cum.begin())];
                        },
                        [&](const Uniform& u) { return u.lo + p * (u.hi - u.lo); },
                        [&](const Exponential& e) {
                          if (p >= 1.0) return e.cap;
                          return std::min(-std::log1p(-p) / e.rate, e.cap);
                        },
                        [&](const Piecewise& pw) {
                          const auto& k = pw.knots;
                          auto it = std::lower_bound(k.begin(), k.end(), p,
                                                     [](const CdfKnot& knot, double q) { return knot.cdf < q; });
                          if (it == k.end()) return k.back().x;
                          const std::size_t j = static_cast<std::size_t>(it - k.begin());
                          if (j == 0 || k[j].x == k[j - 1].x) return k[j].x;
                          const double span = k[j].cdf - k[j - 1].cdf;
                          return k[j - 1].x + (p - k[j - 1].cdf) / span * (k[j].x - k[j - 1].x);
                        },
                    },
                    rep_);
}

double Distribution::sample(Rng& rng) const { return quantile(uniform01(rng)); }

double Distribution::mean() const {
  return std::visit(Overloaded{
                        [](const Discrete& d) {
                          double m = 0.0;
                          for (std::size_t k = 0; k < d.support.size(); ++k) m += d.support[k] * d.pmf[k];
                          return m;
                        },
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                        [](const Exponential& e) {
                          if (!std::isfinite(e.cap)) return 1.0 / e.rate;
                          return -std::expm1(-e.rate * e.cap) / e.rate;
                        },
                        [](const Piecewise& p) {
                          const auto& k = p.knots;
                          double m = k.front().cdf * k.front().x;
                          for (std::size_t i = 0; i + 1 < k.size(); ++i) {
                            m += (k[i + 1].cdf - k[i].cdf) * 0.5 * (k[i].x + k[i + 1].x);
                          }
                          return m;
                        },
                    },
                    rep_);
}

double Distribution::support_min() const {
  return std::visit(Overloaded{
                        [](const Discrete& d) { return d.support.front(); },
                        [](const Uniform& u) { return u.lo; },
                        [](const Exponential&) { return 0.0; },
                        [](const Piecewise& p) {
                          for (std::size_t i = 0; i < p.knots.size(); ++i) {
                            if (p.knots[i].cdf > 0.0) return i == 0 ? p.knots[0].x : p.knots[i - 1].x;
                          }
                          return p.knots.back().x;
                        },
                    },
                    rep_);
}

double Distribution::support_max() const {
  return std::visit(Overloaded{
                        [](const Discrete& d) { return d.support.back(); },
                        [](const Uniform& u) { return u.hi; },
                        [](const Exponential& e) { return e.cap; },
                        [](const Piecewise& p) {
                          for (std::size_t i = 0; i < p.knots.size(); ++i) {
                            if (p.knots[i].cdf >= 1.0) return p.knots[i].x;
                          }
                          return p.knots.back().x;
                        },
                    },
                    rep_);
}

const std::vector<double>& Distribution::support() const {
  static const std::vector<double> kEmpty;
  if (const auto* d = std::get_if<Discrete>(&rep_)) return d->support;
  return kEmpty;
}

const std::vector<double>& Distribution::pmf() const {
  static const std::vector<double> kEmpty;
  if (const auto* d = std::get_if<Discrete>(&rep_)) return d->pmf;
  return kEmpty;
}

double Distribution::uniform_lo() const {
  if (const auto* u = std::get_if<Uniform>(&rep_)) return u->lo;
  throw std::logic_error("uniform_lo: not a uniform distribution");
}

double Distribution::uniform_hi() const {
  if (const auto* u = std::get_if<Uniform>(&rep_)) return u->hi;
  throw std::logic_error("uniform_hi: not a uniform distribution");
}

double Distribution::exponential_rate() const {
  if (const auto* e = std::get_if<Exponential>(&rep_)) return e->rate;
  throw std::logic_error("exponential_rate: not an exponential distribution");
}

double Distribution::exponential_cap() const {
  if (const auto* e = std::get_if<Exponential>(&rep_)) return e->cap;
  throw std::logic_error("exponential_cap: not an exponential distribution");
}

const std::vector<CdfKnot>& Distribution::knots() const {
  if (const auto* p = std::get_if<Piecewise>(&rep_)) return p->knots;
  throw std::logic_error("knots: not a piecewise-linear distribution");
}

bool Distribution::operator==(const Distribution& other) const {
  if (kind() != other.kind()) return false;
  return std::visit(Overloaded{
                        [&](const Discrete& d) {
                          const auto& o = std::get<Discrete>(other.rep_);
                          return d.support == o.support && d.pmf == o.pmf;
                        },
                        [&](const Uniform& u) {
                          const auto& o = std::get<Uniform>(other.rep_);
                          return u.lo == o.lo && u.hi == o.hi;
                        },
                        [&](const Exponential& e) {
                          const auto& o = std::get<Exponential>(other.rep_);
                          return e.rate == o.rate && e.cap == o.cap;
                        },
                        [&](const Piecewise& p) { return p.knots == std::get<Piecewise>(other.rep_).knots; },
                    },
                    rep_);
}

std::string describe(const Distribution& d) {
  std::ostringstream os;
  os.precision(6);
  switch (d.kind()) {
    case DistributionKind::kDiscrete:
      os << "discrete{";
      for (std::size_t k = 0; k < d.support().size(); ++k) {
        if (k) os << ", ";
        os << d.support()[k] << ":" << d.pmf()[k];
      }
      os << "}";
      break;
    case DistributionKind::kUniform:
      os << "uniform(" << d.uniform_lo() << ", " << d.uniform_hi() << ")";
      break;
    case DistributionKind::kExponential:
      os << "exponential(" << d.exponential_rate() << ")";
      if (std::isfinite(d.exponential_cap())) os << " capped at " << d.exponential_cap();
      break;
    case DistributionKind::kPiecewiseLinearCdf:
      os << "piecewise-linear-cdf[" << d.knots().size() << " knots]";
      break;
  }
  return os.str();
}

double hazard_rate(const Distribution& d, double v) {
  const double at_or_above = d.tail_ge(v);
  if (!(at_or_above > 0.0)) {
    throw std::domain_error("hazard_rate: no probability mass at or above v");
  }
  const double mass = d.atom_mass(v);
  if (mass > 0.0) return mass / at_or_above;
  return d.pdf(v) / at_or_above;
}

std::vector<double> evaluation_grid(const Distribution& d) {
  if (d.is_discrete()) return d.support();
  constexpr double kEdge = 1e-6;
  std::vector<double> grid;
  grid.reserve(kContinuousGridSize);
  for (int j = 0; j < kContinuousGridSize; ++j) {
    const double p = kEdge + (1.0 - 2.0 * kEdge) * j / (kContinuousGridSize - 1);
    const double x = d.quantile(p);
    if (grid.empty() || x > grid.back()) grid.push_back(x);
  }
  return grid;
}

bool is_mhr(const Distribution& d) {
  double prev = -kInfinity;
  for (double v : evaluation_grid(d)) {
    if (!d.is_discrete() && d.atom_mass(v) > 0.0) continue;
    const double h = hazard_rate(d, v);
    if (h < prev - 1e-9 * std::max(1.0, std::fabs(prev))) return false;
    prev = std::max(prev, h);
  }
  return true;
}

double tail_expectation(const Distribution& d, double b) {
  const double above = d.tail_gt(b);
  if (!(above > 0.0)) {
    throw std::domain_error("tail_expectation: P(V > b) = 0");
  }
  switch (d.kind()) {
    case DistributionKind::kDiscrete: {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t k = 0; k < d.support().size(); ++k) {
        if (d.support()[k] > b) {
          num += d.support()[k] * d.pmf()[k];
          den += d.pmf()[k];
        }
      }
      return num / den;
    }
    case DistributionKind::kUniform:
      if (b < d.uniform_lo()) return d.mean();
      return 0.5 * (b + d.uniform_hi());
    case DistributionKind::kExponential: {
      if (b < 0.0) return d.mean();
      const double rate = d.exponential_rate();
      const double cap = d.exponential_cap();
      if (!std::isfinite(cap)) return b + 1.0 / rate;
      return b - std::expm1(-rate * (cap - b)) / rate;
    }
    case DistributionKind::kPiecewiseLinearCdf: {
      const auto& k = d.knots();
      double num = k.front().x > b ? k.front().cdf * k.front().x : 0.0;
      for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        if (k[i + 1].x <= b) continue;
        const double from = std::max(b, k[i].x);
        const double f_from = k[i].x >= b ? k[i].cdf : interpolate(k[i], k[i + 1], from);
        num += (k[i + 1].cdf - f_from) * 0.5 * (from + k[i + 1].x);
      }
      return num / above;
    }
  }
  throw std::logic_error("tail_expectation: unknown distribution kind");
}

double monopoly_price(const Distribution& d) {
  double best_price = 0.0;
  double best_revenue = -1.0;
  for (double p : evaluation_grid(d)) {
    const double revenue = p * d.tail_ge(p);
    if (revenue > best_revenue + 1e-12) {
      best_revenue = revenue;
      best_price = p;
    }
  }
  return best_price;
}

Distribution cap_at(const Distribution& d, double b) {
  if (!(b >= 0.0)) throw std::invalid_argument("cap_at: cap must be nonnegative");
  if (b >= d.support_max()) return d;
  if (b <= d.support_min() && d.cdf_left(b) <= 0.0) return Distribution::atom(b);

  switch (d.kind()) {
    case DistributionKind::kDiscrete: {
      std::vector<double> support;
      std::vector<double> pmf;
      double moved = 0.0;
      for (std::size_t k = 0; k < d.support().size(); ++k) {
        if (d.support()[k] < b) {
          support.push_back(d.support()[k]);
          pmf.push_back(d.pmf()[k]);
        } else {
          moved += d.pmf()[k];
        }
      }
      support.push_back(b);
      pmf.push_back(moved);
      return Distribution::discrete(std::move(support), std::move(pmf));
    }
    case DistributionKind::kUniform: {
      const double lo = d.uniform_lo();
      return Distribution::piecewise_linear({{lo, 0.0}, {b, d.cdf(b)}, {b, 1.0}});
    }
    case DistributionKind::kExponential:
      return Distribution::exponential(d.exponential_rate(), b);
    case DistributionKind::kPiecewiseLinearCdf: {
      std::vector<CdfKnot> knots;
      for (const auto& k : d.knots()) {
        if (k.x < b) knots.push_back(k);
      }
      knots.push_back({b, d.cdf_left(b)});
      knots.push_back({b, 1.0});
      return Distribution::piecewise_linear(std::move(knots));
    }
  }
  throw std::logic_error("cap_at: unknown distribution kind");
}

Distribution discretize(const Distribution& d, int grid_size) {
  if (d.is_discrete()) return d;
  if (grid_size < 1) throw std::invalid_argument("discretize: grid size must be positive");
  std::vector<double> support;
  std::vector<double> pmf;
  const double mass = 1.0 / grid_size;
  for (int k = 0; k < grid_size; ++k) {
    const double x = d.quantile((k + 0.5) / grid_size);
    if (!support.empty() && same_point(x, support.back())) {
      pmf.back() += mass;
    } else {
      support.push_back(x);
      pmf.push_back(mass);
    }
  }
  return Distribution::discrete(std::move(support), std::move(pmf));
}

double virtual_value(const Distribution& d, double v) { return RevenueCurve(d).virtual_value(v); }

double ironed_virtual_value(const Distribution& d, double v) {
  return RevenueCurve(d).ironed_virtual_value(v);
}

}  // namespace budgetmech
