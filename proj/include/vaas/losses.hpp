/*
 * Copyright 2026 The VAAS Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Segmentation and alignment losses with analytic gradients.
//
//   L_seg   = w_bce * BCE + w_dice * Dice + w_focal * Focal
//   L_total = L_seg + w_fx * (1 - cos(f_px, f_fx))
//
// Predictions are flattened probability vectors. BCE and focal clamp
// predictions to [1e-7, 1 - 1e-7] before taking logs; gradients are those of
// the unclamped formulas evaluated at the clamped point.

#ifndef VAAS_LOSSES_HPP_
#define VAAS_LOSSES_HPP_

#include <algorithm>
#include <cmath>

#include "vaas/core.hpp"

namespace vaas {

inline constexpr double kProbabilityClamp = 1e-7;

template <typename Scalar>
struct LossValue {
  Scalar value = 0;
  Vector<Scalar> gradient;
};

struct LossWeights {
  double bce = 1.0;
  double dice = 0.7;
  double focal = 1.0;
  double fx = 0.1;
  double gamma = 2.0;
  double dice_smoothing = 1.0;

  void validate() const {
    if (bce < 0 || dice < 0 || focal < 0 || fx < 0 || gamma < 0) {
      throw ValidationError("loss weights must be non-negative");
    }
    if (!(dice_smoothing > 0)) throw ValidationError("dice smoothing must be > 0");
  }
};

template <typename Scalar>
struct AlignmentFeatures {
  Vector<Scalar> f_px;
  Vector<Scalar> f_fx;
};

namespace detail {

template <typename DerivedP, typename DerivedT>
void check_pair(const Eigen::MatrixBase<DerivedP>& pred, const Eigen::MatrixBase<DerivedT>& target) {
  if (pred.size() != target.size()) throw ValidationError("loss: prediction/target shape mismatch");
  if (pred.size() == 0) throw ValidationError("loss: empty input");
}

template <typename Scalar>
Scalar clamp_probability(Scalar p) {
  return std::clamp(p, static_cast<Scalar>(kProbabilityClamp), static_cast<Scalar>(1 - kProbabilityClamp));
}

}  // namespace detail

template <typename DerivedP, typename DerivedT>
LossValue<typename DerivedP::Scalar> bce_loss(const Eigen::MatrixBase<DerivedP>& pred,
                                              const Eigen::MatrixBase<DerivedT>& target) {
  using Scalar = typename DerivedP::Scalar;
  detail::check_pair(pred, target);
  const Index n = pred.size();
  LossValue<Scalar> out;
  out.gradient.resize(n);
  Scalar total = 0;
  for (Index i = 0; i < n; ++i) {
    const Scalar p = detail::clamp_probability(pred(i));
    const auto y = static_cast<Scalar>(target(i));
    total -= y * std::log(p) + (1 - y) * std::log(1 - p);
    out.gradient(i) = (p - y) / (p * (1 - p)) / static_cast<Scalar>(n);
  }
  out.value = total / static_cast<Scalar>(n);
  return out;
}

// 1 - (2 sum(p y) + eps) / (sum p + sum y + eps)
template <typename DerivedP, typename DerivedT>
LossValue<typename DerivedP::Scalar> dice_loss(const Eigen::MatrixBase<DerivedP>& pred,
                                               const Eigen::MatrixBase<DerivedT>& target,
                                               typename DerivedP::Scalar smoothing = 1) {
  using Scalar = typename DerivedP::Scalar;
  detail::check_pair(pred, target);
  if (!(smoothing > 0)) throw ValidationError("dice smoothing must be > 0");
  const Vector<Scalar> p = pred.reshaped();
  const Vector<Scalar> y = target.template cast<Scalar>().reshaped();
  const Scalar inter = p.dot(y);
  const Scalar denom = p.sum() + y.sum() + smoothing;
  const Scalar numer = 2 * inter + smoothing;
  LossValue<Scalar> out;
  out.value = 1 - numer / denom;
  out.gradient = ((numer - 2 * denom * y.array()) / (denom * denom)).matrix();
  return out;
}

// mean of -(1 - p_t)^gamma * ln(p_t), p_t = p for y = 1 and 1 - p otherwise.
template <typename DerivedP, typename DerivedT>
LossValue<typename DerivedP::Scalar> focal_loss(const Eigen::MatrixBase<DerivedP>& pred,
                                                const Eigen::MatrixBase<DerivedT>& target,
                                                typename DerivedP::Scalar gamma = 2) {
  using Scalar = typename DerivedP::Scalar;
  detail::check_pair(pred, target);
  if (!(gamma >= 0)) throw ValidationError("focal gamma must be >= 0");
  const Index n = pred.size();
  LossValue<Scalar> out;
  out.gradient.resize(n);
  Scalar total = 0;
  for (Index i = 0; i < n; ++i) {
    const Scalar p = detail::clamp_probability(pred(i));
    const bool positive = static_cast<Scalar>(target(i)) > Scalar(0.5);
    const Scalar pt = positive ? p : 1 - p;
    const Scalar log_pt = std::log(pt);
    const Scalar modulator = gamma == 0 ? Scalar(1) : std::pow(1 - pt, gamma);
    total -= modulator * log_pt;
    // d/dp_t of -(1-p_t)^g ln p_t = g (1-p_t)^(g-1) ln p_t - (1-p_t)^g / p_t
    const Scalar slope = gamma == 0 ? Scalar(0) : gamma * std::pow(1 - pt, gamma - 1) * log_pt;
    const Scalar d_pt = slope - modulator / pt;
    out.gradient(i) = (positive ? d_pt : -d_pt) / static_cast<Scalar>(n);
  }
  out.value = total / static_cast<Scalar>(n);
  return out;
}

// 1 - cos(f_px, f_fx); gradient with respect to f_px.
template <typename Scalar>
LossValue<Scalar> alignment_loss(const AlignmentFeatures<Scalar>& a) {
  if (a.f_px.size() != a.f_fx.size() || a.f_px.size() == 0) {
    throw ValidationError("alignment features must have equal, non-zero length");
  }
  const Scalar na = a.f_px.norm();
  const Scalar nb = a.f_fx.norm();
  if (!(na > 0) || !(nb > 0)) throw DataError("zero-norm alignment feature");
  const Scalar cos = std::clamp(a.f_px.dot(a.f_fx) / (na * nb), Scalar(-1), Scalar(1));
  LossValue<Scalar> out;
  out.value = 1 - cos;
  out.gradient = -(a.f_fx / (na * nb) - cos * a.f_px / (na * na));
  return out;
}

// Column mean of a [positions, channels] feature map, the pooled form fed
// to alignment_loss.
template <typename Derived>
Vector<typename Derived::Scalar> global_average_pool(const Eigen::MatrixBase<Derived>& features) {
  return features.colwise().mean().transpose();
}

template <typename Scalar>
struct LossBreakdown {
  Scalar bce = 0;
  Scalar dice = 0;
  Scalar focal = 0;
  Scalar alignment = 0;
  Scalar segmentation = 0;
  Scalar total = 0;
};

template <typename DerivedP, typename DerivedT>
LossBreakdown<typename DerivedP::Scalar> total_loss(const Eigen::MatrixBase<DerivedP>& pred,
                                                    const Eigen::MatrixBase<DerivedT>& target,
                                                    const AlignmentFeatures<typename DerivedP::Scalar>& a,
                                                    const LossWeights& w) {
  using Scalar = typename DerivedP::Scalar;
  w.validate();
  LossBreakdown<Scalar> b;
  b.bce = bce_loss(pred, target).value;
  b.dice = dice_loss(pred, target, static_cast<Scalar>(w.dice_smoothing)).value;
  b.focal = focal_loss(pred, target, static_cast<Scalar>(w.gamma)).value;
  b.alignment = alignment_loss(a).value;
  b.segmentation = static_cast<Scalar>(w.bce) * b.bce + static_cast<Scalar>(w.dice) * b.dice +
                   static_cast<Scalar>(w.focal) * b.focal;
  b.total = b.segmentation + static_cast<Scalar>(w.fx) * b.alignment;
  return b;
}

}  // namespace vaas

#endif  // VAAS_LOSSES_HPP_
