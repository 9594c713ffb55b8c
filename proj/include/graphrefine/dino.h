// include/graphrefine/dino.h

// Copyright 2026  GraphRefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHREFINE_DINO_H_
#define GRAPHREFINE_DINO_H_

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "graphrefine/common.h"

namespace graphrefine {

/// Softmax of logits / tau, computed with max subtraction. tau > 0;
/// larger tau smooths the distribution, smaller tau sharpens it.
Eigen::VectorXd temperature_softmax(const Eigen::VectorXd& logits, double tau);

/// -sum_k p_t[k] * log(p_s[k]) with p_s clamped below at 1e-12 before the
/// log. Both arguments must sum to 1 within 1e-6. Always >= entropy(p_t),
/// with equality iff the distributions match.
double cross_entropy(const Eigen::VectorXd& p_t, const Eigen::VectorXd& p_s);

double entropy(const Eigen::VectorXd& p);

/// Self-distillation loss: cross entropy summed over every (teacher
/// global crop t, student crop s) pair with s != t. Student distributions
/// are indexed so that the first teacher_probs.size() entries correspond
/// to the same crops the teacher saw. Normalized by the pair count by
/// default; pass false for the bare double sum.
double dino_loss(const std::vector<Eigen::VectorXd>& teacher_probs,
                 const std::vector<Eigen::VectorXd>& student_probs,
                 bool normalize_by_pairs = true);

/// teacher <- momentum * teacher + (1 - momentum) * student, elementwise.
Eigen::VectorXd ema_update(const Eigen::VectorXd& teacher_params,
                           const Eigen::VectorXd& student_params,
                           double momentum);

/// Linear projection head g(x) = W x used by the toy training loop.
struct ProjectionHead {
  Eigen::MatrixXd weight;  // K x D

  Eigen::VectorXd logits(const Eigen::VectorXd& x) const { return weight * x; }
  static ProjectionHead random_init(int outputs, int dim, std::uint64_t seed);
};

/// Toy two-cluster training loop: a fixed batch of anchors with
/// precomputed global/local crops, a student head trained by gradient
/// descent against an EMA teacher. One loss evaluation per step over the
/// whole fixed batch, so a zero learning rate yields a flat trace.
struct DinoDemoConfig {
  int num_anchors = 32;  // split evenly over the two clusters
  int num_globals = 2;
  int num_locals = 2;
  int dim = 16;
  int num_outputs = 8;
  double anchor_noise = 0.1;
  double global_noise = 0.05;
  double local_noise = 0.25;
  double teacher_tau = 0.04;
  double student_tau = 0.1;
  double learning_rate = 0.5;
  double momentum = 0.99;
  int steps = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Returns the loss trace: initial loss followed by one entry per step
/// (length steps + 1). Throws kNonFiniteLoss on divergence.
std::vector<double> run_dino_demo(const DinoDemoConfig& cfg);

}  // namespace graphrefine

#endif  // GRAPHREFINE_DINO_H_
