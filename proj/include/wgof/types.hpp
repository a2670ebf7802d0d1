#pragma once

#include <Eigen/Core>

#include "wgof/errors.hpp"

namespace wgof {

using Index = Eigen::Index;
using Vector = Eigen::ArrayXd;
/// Event indicators: 1 for an observed lifetime, 0 for a censored one.
using Indicators = Eigen::ArrayXi;

/// Weibull law with distribution function 1 - exp(-(x/lambda)^theta).
struct WeibullParams {
  double lambda = 1.0;  ///< scale, same units as the data
  double theta = 1.0;   ///< shape

  bool operator==(const WeibullParams&) const = default;
};

/// Throws DomainError unless both parameters are finite and positive.
void validate(const WeibullParams& params);

/// Observed pairs (T_j, delta_j) with T_j = min(X_j, C_j).
struct CensoredSample {
  Vector times;
  Indicators deltas;

  Index size() const { return times.size(); }
  Index events() const { return deltas.sum(); }
  double censored_fraction() const {
    return size() == 0 ? 0.0 : 1.0 - static_cast<double>(events()) / static_cast<double>(size());
  }
};

/// Full sample: every delta is 1.
CensoredSample full_sample(const Vector& times);

/// Throws DomainError on length mismatch, nonpositive or non-finite times,
/// or indicators outside {0, 1}.
void validate(const CensoredSample& sample);

}  // namespace wgof
