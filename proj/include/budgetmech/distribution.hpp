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

#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "budgetmech/rng.hpp"

namespace budgetmech {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute tolerance for probability comparisons.
inline constexpr double kProbTol = 1e-9;

// Number of points in the evaluation grid used for continuous distributions
// (MHR checks, monopoly price, ironing).
inline constexpr int kContinuousGridSize = 1024;

enum class DistributionKind { kDiscrete, kUniform, kExponential, kPiecewiseLinearCdf };

std::string to_string(DistributionKind kind);

// One knot of a piecewise-linear CDF. Two consecutive knots with the same x
// encode a jump (an atom) at x.
struct CdfKnot {
  double x = 0.0;
  double cdf = 0.0;
  bool operator==(const CdfKnot&) const = default;
};

// One-dimensional value or budget distribution over nonnegative reals.
//
// Immutable after construction. Exponential distributions may carry a cap c,
// meaning the law of min(V, c); this is how cap_at() represents a capped
// exponential exactly.
class Distribution {
 public:
  static Distribution discrete(std::vector<double> support, std::vector<double> pmf);
  static Distribution atom(double v);
  static Distribution uniform(double lo, double hi);
  static Distribution exponential(double rate, double cap = kInfinity);
  static Distribution piecewise_linear(std::vector<CdfKnot> knots);

  DistributionKind kind() const;
  bool is_discrete() const { return kind() == DistributionKind::kDiscrete; }

  // P(V <= v), right-continuous.
  double cdf(double v) const;
  // P(V < v).
  double cdf_left(double v) const;
  // P(V > v) and P(V >= v), evaluated without cancellation where possible.
  double tail_gt(double v) const;
  double tail_ge(double v) const;
  // Mass of the atom at v (0 when there is none).
  double atom_mass(double v) const;
  // Density of the absolutely continuous part; 0 for discrete laws.
  double pdf(double v) const;

  // Generalized inverse: inf{v : cdf(v) >= p}. Throws for p outside [0, 1].
  double quantile(double p) const;
  double sample(Rng& rng) const;
  double mean() const;

  double support_min() const;
  double support_max() const;

  // Discrete accessors (empty for other kinds).
  const std::vector<double>& support() const;
  const std::vector<double>& pmf() const;

  // Parameters of the continuous kinds (throw std::logic_error for a
  // different kind).
  double uniform_lo() const;
  double uniform_hi() const;
  double exponential_rate() const;
  double exponential_cap() const;
  const std::vector<CdfKnot>& knots() const;

  bool operator==(const Distribution& other) const;

 private:
  struct Discrete {
    std::vector<double> support;
    std::vector<double> pmf;
    std::vector<double> cum;   // cum[k] = P(V <= support[k])
    std::vector<double> tail;  // tail[k] = P(V >= support[k])
  };
  struct Uniform {
    double lo;
    double hi;
  };
  struct Exponential {
    double rate;
    double cap;
  };
  struct Piecewise {
    std::vector<CdfKnot> knots;
  };

  using Rep = std::variant<Discrete, Uniform, Exponential, Piecewise>;
  explicit Distribution(Rep rep) : rep_(std::move(rep)) {}

  Rep rep_;
};

std::string describe(const Distribution& d);

// Hazard rate: f(v)/(1-F(v)) for continuous laws, pmf_k/(1-F(v_k^-)) at atoms.
// Throws std::domain_error when P(V >= v) = 0.
double hazard_rate(const Distribution& d, double v);

// Points at which continuous laws are evaluated: kContinuousGridSize
// quantile-equispaced points over [quantile(1e-6), quantile(1-1e-6)],
// deduplicated. Discrete laws use their support.
std::vector<double> evaluation_grid(const Distribution& d);

// Hazard rate nondecreasing over the evaluation grid. For non-discrete laws
// only points without an atom are checked.
bool is_mhr(const Distribution& d);

// E[V | V > b]. Throws std::domain_error when P(V > b) = 0.
double tail_expectation(const Distribution& d, double b);

// argmax over the evaluation grid of p * P(V >= p); smallest maximizer wins.
double monopoly_price(const Distribution& d);

// Law of min(V, b). Mass above b moves to an atom at b.
Distribution cap_at(const Distribution& d, double b);

// Quantile-equispaced discretization: grid_size atoms of mass 1/grid_size at
// quantile((k + 1/2) / grid_size), coincident atoms merged. Discrete laws are
// returned unchanged.
Distribution discretize(const Distribution& d, int grid_size);

// Standard and ironed virtual values. Both rebuild the revenue curve; use
// RevenueCurve directly for repeated queries.
double virtual_value(const Distribution& d, double v);
double ironed_virtual_value(const Distribution& d, double v);

// Revenue curve of a distribution in sale-probability space, with its upper
// concave hull. Ironed virtual values are hull slopes.
//
// Discrete laws are handled exactly. For other laws the curve is sampled on the
// evaluation grid; inside segments the hull does not bridge, the analytic
// virtual value v - (1-F(v))/f(v) is returned.
class RevenueCurve {
 public:
  explicit RevenueCurve(Distribution d);

  const Distribution& distribution() const { return dist_; }

  double virtual_value(double v) const;
  double ironed_virtual_value(double v) const;

 private:
  struct Point {
    double price;
    double sale_prob;  // P(V >= price)
    double revenue;
  };

  double hull_at(double s) const;
  // Index of the hull segment [hull_[i], hull_[i+1]] containing s.
  std::size_t hull_segment(double s) const;
  std::size_t support_index(double v) const;
  void check_in_support(double v) const;

  Distribution dist_;
  std::vector<Point> points_;     // ascending sale probability
  std::vector<std::size_t> hull_; // indices into points_
  // Discrete laws: per support point (ascending value).
  std::vector<double> discrete_phi_;
  std::vector<double> discrete_ironed_;
};

}  // namespace budgetmech
