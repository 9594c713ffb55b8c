// src/dino.cc

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

#include "graphrefine/dino.h"

#include <cmath>
#include <random>

namespace graphrefine {

namespace {
constexpr double kLogFloor = 1e-12;
}

Eigen::VectorXd temperature_softmax(const Eigen::VectorXd& logits,
                                    double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "temperature must be positive, got " + std::to_string(tau));
  }
  if (!logits.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "logits contain non-finite values");
  }
  if (logits.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty logit vector");
  }
  const Eigen::VectorXd scaled = logits / tau;
  const double max = scaled.maxCoeff();
  Eigen::VectorXd p = (scaled.array() - max).exp();
  return p / p.sum();
}

double entropy(const Eigen::VectorXd& p) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) h -= p[k] * std::log(p[k]);
  }
  return h;
}

double cross_entropy(const Eigen::VectorXd& p_t, const Eigen::VectorXd& p_s) {
  if (p_t.size() != p_s.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "distributions have sizes " + std::to_string(p_t.size()) +
                    " vs " + std::to_string(p_s.size()));
  }
  for (const auto& p : {p_t, p_s}) {
    if (std::abs(p.sum() - 1.0) > 1e-6) {
      throw Error(ErrorCode::kInvalidArgument,
                  "distribution sums to " + std::to_string(p.sum()));
    }
  }
  double loss = 0.0;
  for (Eigen::Index k = 0; k < p_t.size(); ++k) {
    loss -= p_t[k] * std::log(std::max(p_s[k], kLogFloor));
  }
  return loss;
}

double dino_loss(const std::vector<Eigen::VectorXd>& teacher_probs,
                 const std::vector<Eigen::VectorXd>& student_probs,
                 bool normalize_by_pairs) {
  if (teacher_probs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "teacher crop set is empty");
  }
  if (student_probs.size() < teacher_probs.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "student must cover every crop the teacher sees");
  }
  double loss = 0.0;
  std::int64_t pairs = 0;
  for (std::size_t t = 0; t < teacher_probs.size(); ++t) {
    for (std::size_t s = 0; s < student_probs.size(); ++s) {
      if (s == t) continue;  // x' ranges over the other crops
      loss += cross_entropy(teacher_probs[t], student_probs[s]);
      ++pairs;
    }
  }
  if (pairs == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "no (teacher, student) pair with distinct crops");
  }
  return normalize_by_pairs ? loss / static_cast<double>(pairs) : loss;
}

Eigen::VectorXd ema_update(const Eigen::VectorXd& teacher_params,
                           const Eigen::VectorXd& student_params,
                           double momentum) {
  if (teacher_params.size() != student_params.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "teacher and student parameter shapes differ");
  }
  if (!(momentum >= 0.0 && momentum <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "momentum must lie in [0, 1], got " + std::to_string(momentum));
  }
  return momentum * teacher_params + (1.0 - momentum) * student_params;
}

ProjectionHead ProjectionHead::random_init(int outputs, int dim,
                                           std::uint64_t seed) {
  if (outputs < 2 || dim < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "projection head needs outputs >= 2 and dim >= 1");
  }
  std::mt19937_64 rng(mix_seed(seed, 0x64696e6fULL));
  const double s = std::sqrt(6.0 / static_cast<double>(outputs + dim));
  std::uniform_real_distribution<double> dist(-s, s);
  ProjectionHead head;
  head.weight.resize(outputs, dim);
  for (int r = 0; r < outputs; ++r) {
    for (int c = 0; c < dim; ++c) head.weight(r, c) = dist(rng);
  }
  return head;
}

void DinoDemoConfig::validate() const {
  if (num_anchors < 2 || num_globals < 1 || num_locals < 0 || dim < 1 ||
      num_outputs < 2) {
    throw Error(ErrorCode::kInvalidArgument, "demo sizes out of range");
  }
  if (num_globals + num_locals < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "need at least two crops per anchor");
  }
  if (!(teacher_tau > 0.0) || !(student_tau > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "temperatures must be positive");
  }
  if (!(learning_rate >= 0.0) || !(momentum >= 0.0 && momentum <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "learning_rate must be >= 0 and momentum in [0, 1]");
  }
  if (steps < 0) {
    throw Error(ErrorCode::kInvalidArgument, "steps must be >= 0");
  }
}

std::vector<double> run_dino_demo(const DinoDemoConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(mix_seed(cfg.seed, 0x64656d6fULL));
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto unit = [&](Eigen::VectorXd v) {
    const double norm = v.norm();
    return norm > 0.0 ? Eigen::VectorXd(v / norm) : v;
  };
  auto noisy = [&](const Eigen::VectorXd& base, double sigma) {
    Eigen::VectorXd v = base;
    for (Eigen::Index t = 0; t < v.size(); ++t) v[t] += sigma * gauss(rng);
    return unit(std::move(v));
  };

  // Two cluster centers plus a fixed batch of anchors with their crops;
  // the whole dataset is frozen before training starts.
  Eigen::VectorXd centers[2];
  for (auto& c : centers) {
    c.resize(cfg.dim);
    for (Eigen::Index t = 0; t < c.size(); ++t) c[t] = gauss(rng);
    c = unit(std::move(c));
  }
  struct Anchor {
    std::vector<Eigen::VectorXd> crops;  // globals first, then locals
  };
  std::vector<Anchor> anchors(cfg.num_anchors);
  for (int a = 0; a < cfg.num_anchors; ++a) {
    const Eigen::VectorXd base = noisy(centers[a % 2], cfg.anchor_noise);
    for (int t = 0; t < cfg.num_globals; ++t) {
      anchors[a].crops.push_back(noisy(base, cfg.global_noise));
    }
    for (int t = 0; t < cfg.num_locals; ++t) {
      anchors[a].crops.push_back(noisy(base, cfg.local_noise));
    }
  }

  ProjectionHead student =
      ProjectionHead::random_init(cfg.num_outputs, cfg.dim, cfg.seed);
  ProjectionHead teacher = student;

  // Loss over the fixed batch; optionally accumulates the student-head
  // gradient (teacher output is a constant target, as in self-distillation).
  auto batch_pass = [&](Eigen::MatrixXd* grad) {
    double loss = 0.0;
    if (grad != nullptr) grad->setZero();
    std::int64_t pairs = 0;
    for (const Anchor& anchor : anchors) {
      std::vector<Eigen::VectorXd> teacher_probs(cfg.num_globals);
      for (int t = 0; t < cfg.num_globals; ++t) {
        teacher_probs[t] =
            temperature_softmax(teacher.logits(anchor.crops[t]),
                                cfg.teacher_tau);
      }
      std::vector<Eigen::VectorXd> student_probs(anchor.crops.size());
      for (std::size_t s = 0; s < anchor.crops.size(); ++s) {
        student_probs[s] =
            temperature_softmax(student.logits(anchor.crops[s]),
                                cfg.student_tau);
      }
      for (int t = 0; t < cfg.num_globals; ++t) {
        for (std::size_t s = 0; s < anchor.crops.size(); ++s) {
          if (s == static_cast<std::size_t>(t)) continue;
          loss += cross_entropy(teacher_probs[t], student_probs[s]);
          ++pairs;
          if (grad != nullptr) {
            // d CE(p_s || p_t) / d z_s = (p_s - p_t) / tau_s
            const Eigen::VectorXd dz =
                (student_probs[s] - teacher_probs[t]) / cfg.student_tau;
            *grad += dz * anchor.crops[s].transpose();
          }
        }
      }
    }
    loss /= static_cast<double>(pairs);
    if (grad != nullptr) *grad /= static_cast<double>(pairs);
    return loss;
  };

  std::vector<double> trace;
  trace.reserve(cfg.steps + 1);
  trace.push_back(batch_pass(nullptr));
  Eigen::MatrixXd grad(cfg.num_outputs, cfg.dim);
  for (int step = 0; step < cfg.steps; ++step) {
    batch_pass(&grad);
    student.weight -= cfg.learning_rate * grad;
    const Eigen::VectorXd blended = ema_update(
        Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
            teacher.weight.data(), teacher.weight.size())),
        Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(
            student.weight.data(), student.weight.size())),
        cfg.momentum);
    teacher.weight = Eigen::Map<const Eigen::MatrixXd>(
        blended.data(), teacher.weight.rows(), teacher.weight.cols());
    const double loss = batch_pass(nullptr);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "demo loss diverged at step " + std::to_string(step));
    }
    trace.push_back(loss);
  }
  return trace;
}

}  // namespace graphrefine
