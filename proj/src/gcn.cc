// src/gcn.cc

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

#include "graphrefine/gcn.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>

namespace graphrefine {

namespace {

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow; -log sigmoid(x) = softplus(-x).
double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

// A_hat * M for the sparse symmetric normalized adjacency.
Eigen::MatrixXd spmm(const NormalizedAdjacency& a_hat,
                     const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (std::int64_t i = 0; i < a_hat.num_nodes(); ++i) {
    for (const Neighbor& entry : a_hat.row(i)) {
      out.row(i) += entry.similarity * m.row(entry.id);
    }
  }
  return out;
}

struct ForwardCache {
  std::vector<Eigen::MatrixXd> h;  // H^(0) .. H^(L)
  std::vector<Eigen::MatrixXd> p;  // P^(l) = A_hat * H^(l), l = 0 .. L-1
};

ForwardCache forward_cached(const GcnModel& model,
                            const NormalizedAdjacency& a_hat,
                            const Eigen::MatrixXd& x) {
  if (x.cols() != model.input_dim()) {
    throw Error(ErrorCode::kLengthMismatch,
                "feature dim " + std::to_string(x.cols()) +
                    " does not match model input dim " +
                    std::to_string(model.input_dim()));
  }
  if (a_hat.num_nodes() != x.rows()) {
    throw Error(ErrorCode::kLengthMismatch,
                "adjacency covers " + std::to_string(a_hat.num_nodes()) +
                    " nodes but features cover " + std::to_string(x.rows()));
  }
  ForwardCache cache;
  cache.h.reserve(model.num_layers() + 1);
  cache.p.reserve(model.num_layers());
  cache.h.push_back(x);
  for (int l = 0; l < model.num_layers(); ++l) {
    cache.p.push_back(spmm(a_hat, cache.h.back()));
    Eigen::MatrixXd z =
        cache.p.back() * model.weights[l] + x * model.input_weights[l];
    cache.h.push_back(z.cwiseMax(0.0));
  }
  return cache;
}

double resolve_neg_weight(const Subgraph& sg,
                          std::optional<double> neg_weight) {
  if (neg_weight.has_value()) {
    if (!(*neg_weight > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "neg_weight must be > 0");
    }
    return *neg_weight;
  }
  const std::int64_t pos = sg.positive_edges();
  const std::int64_t neg = sg.negative_edges();
  if (pos == 0 || neg == 0) return 1.0;
  return static_cast<double>(pos) / static_cast<double>(neg);
}

// Loss and, optionally, gradients for one subgraph. Every edge enters the
// loss in both concatenation orders so the head is order-robust; the loss
// is the weight-normalized mean of the per-term cross entropies.
double loss_impl(const GcnModel& model, const Subgraph& sg,
                 const NormalizedAdjacency& a_hat, double lambda,
                 GcnGradients* grads) {
  model.validate();
  if (sg.edge_list.size() != sg.edge_labels.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "edge list and edge labels differ in length");
  }
  if (sg.edge_list.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "subgraph has no edges");
  }
  const ForwardCache cache = forward_cached(model, a_hat, sg.features);
  const Eigen::MatrixXd& h = cache.h.back();
  const int dl = model.output_dim();
  const auto u = model.edge_head.segment(0, dl);
  const auto v = model.edge_head.segment(dl, dl);

  double total_weight = 0.0;
  for (char y : sg.edge_labels) total_weight += y ? 2.0 : 2.0 * lambda;

  double loss = 0.0;
  Eigen::MatrixXd g_h;
  if (grads != nullptr) g_h = Eigen::MatrixXd::Zero(h.rows(), h.cols());
  Eigen::VectorXd d_head;
  double d_bias = 0.0;
  if (grads != nullptr) d_head = Eigen::VectorXd::Zero(2 * dl);

  for (std::size_t e = 0; e < sg.edge_list.size(); ++e) {
    const auto [a, b] = sg.edge_list[e];
    const double y = sg.edge_labels[e] ? 1.0 : 0.0;
    const double weight = sg.edge_labels[e] ? 1.0 : lambda;
    const std::int64_t order[2][2] = {{a, b}, {b, a}};
    for (const auto& pair : order) {
      const std::int64_t first = pair[0], second = pair[1];
      const double logit =
          u.dot(h.row(first)) + v.dot(h.row(second)) + model.edge_bias;
      loss += weight * (y > 0.5 ? softplus(-logit) : softplus(logit));
      if (grads != nullptr) {
        const double g = weight * (stable_sigmoid(logit) - y) / total_weight;
        d_bias += g;
        d_head.segment(0, dl) += g * h.row(first).transpose();
        d_head.segment(dl, dl) += g * h.row(second).transpose();
        g_h.row(first) += g * u.transpose();
        g_h.row(second) += g * v.transpose();
      }
    }
  }
  loss /= total_weight;

  if (grads != nullptr) {
    grads->weights.resize(model.num_layers());
    grads->input_weights.resize(model.num_layers());
    grads->edge_head = d_head;
    grads->edge_bias = d_bias;
    for (int l = model.num_layers() - 1; l >= 0; --l) {
      // relu gate: H^(l+1) entries that stayed at zero pass no gradient.
      const Eigen::MatrixXd delta =
          ((cache.h[l + 1].array() > 0.0).cast<double>() * g_h.array())
              .matrix();
      // dL/dW^(l)       = (A_hat H^(l))^T Delta
      // dL/dW_input^(l) = X^T Delta
      // dL/dH^(l)       = A_hat Delta W^(l)^T   (A_hat symmetric)
      grads->weights[l] = cache.p[l].transpose() * delta;
      grads->input_weights[l] = sg.features.transpose() * delta;
      if (l > 0) {
        g_h = spmm(a_hat, delta) * model.weights[l].transpose();
      }
    }
  }
  return loss;
}

}  // namespace

std::int64_t Subgraph::positive_edges() const {
  std::int64_t count = 0;
  for (char y : edge_labels) count += (y != 0);
  return count;
}

std::int64_t Subgraph::negative_edges() const {
  return static_cast<std::int64_t>(edge_labels.size()) - positive_edges();
}

GcnModel GcnModel::random_init(const std::vector<int>& dims,
                               std::uint64_t seed) {
  if (dims.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "dims must list the input dim and at least one layer");
  }
  for (int d : dims) {
    if (d < 1) {
      throw Error(ErrorCode::kInvalidArgument, "layer dims must be positive");
    }
  }
  GcnModel model;
  model.dims = dims;
  std::mt19937_64 rng(mix_seed(seed, 0x67636eULL));
  auto uniform_matrix = [&rng](int rows, int cols) {
    const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    std::uniform_real_distribution<double> dist(-s, s);
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
    }
    return m;
  };
  const int input = dims.front();
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    model.weights.push_back(uniform_matrix(dims[l], dims[l + 1]));
    model.input_weights.push_back(uniform_matrix(input, dims[l + 1]));
  }
  const int dl = dims.back();
  const double s = std::sqrt(6.0 / static_cast<double>(2 * dl + 1));
  std::uniform_real_distribution<double> dist(-s, s);
  model.edge_head.resize(2 * dl);
  for (int t = 0; t < 2 * dl; ++t) model.edge_head[t] = dist(rng);
  model.edge_bias = 0.0;
  return model;
}

void GcnModel::validate() const {
  if (dims.size() < 2 || weights.size() != dims.size() - 1 ||
      input_weights.size() != weights.size()) {
    throw Error(ErrorCode::kInvalidArgument, "inconsistent model structure");
  }
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != dims[l] || weights[l].cols() != dims[l + 1] ||
        input_weights[l].rows() != dims.front() ||
        input_weights[l].cols() != dims[l + 1]) {
      throw Error(ErrorCode::kLengthMismatch,
                  "layer " + std::to_string(l) + " weight shapes break the "
                  "dimension chain");
    }
    if (!weights[l].allFinite() || !input_weights[l].allFinite()) {
      throw Error(ErrorCode::kNonFinite,
                  "layer " + std::to_string(l) + " has non-finite weights");
    }
  }
  if (edge_head.size() != 2 * static_cast<std::int64_t>(dims.back())) {
    throw Error(ErrorCode::kLengthMismatch,
                "edge head must cover the concatenated pair representation");
  }
  if (!edge_head.allFinite() || !std::isfinite(edge_bias)) {
    throw Error(ErrorCode::kNonFinite, "edge head has non-finite parameters");
  }
}

std::int64_t GcnModel::parameter_count() const {
  std::int64_t count = edge_head.size() + 1;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    count += weights[l].size() + input_weights[l].size();
  }
  return count;
}

Eigen::VectorXd GcnModel::flatten() const {
  Eigen::VectorXd out(parameter_count());
  std::int64_t at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
        out[at++] = weights[l](r, c);
      }
    }
    for (Eigen::Index r = 0; r < input_weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < input_weights[l].cols(); ++c) {
        out[at++] = input_weights[l](r, c);
      }
    }
  }
  for (Eigen::Index t = 0; t < edge_head.size(); ++t) {
    out[at++] = edge_head[t];
  }
  out[at++] = edge_bias;
  return out;
}

void GcnModel::unflatten(const Eigen::VectorXd& params) {
  if (params.size() != parameter_count()) {
    throw Error(ErrorCode::kLengthMismatch,
                "parameter vector length " + std::to_string(params.size()) +
                    " does not match model size " +
                    std::to_string(parameter_count()));
  }
  std::int64_t at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
        weights[l](r, c) = params[at++];
      }
    }
    for (Eigen::Index r = 0; r < input_weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < input_weights[l].cols(); ++c) {
        input_weights[l](r, c) = params[at++];
      }
    }
  }
  for (Eigen::Index t = 0; t < edge_head.size(); ++t) {
    edge_head[t] = params[at++];
  }
  edge_bias = params[at++];
}

Eigen::VectorXd GcnGradients::flatten() const {
  std::int64_t count = edge_head.size() + 1;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    count += weights[l].size() + input_weights[l].size();
  }
  Eigen::VectorXd out(count);
  std::int64_t at = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (Eigen::Index r = 0; r < weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights[l].cols(); ++c) {
        out[at++] = weights[l](r, c);
      }
    }
    for (Eigen::Index r = 0; r < input_weights[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < input_weights[l].cols(); ++c) {
        out[at++] = input_weights[l](r, c);
      }
    }
  }
  for (Eigen::Index t = 0; t < edge_head.size(); ++t) {
    out[at++] = edge_head[t];
  }
  out[at++] = edge_bias;
  return out;
}

void save_model(const GcnModel& model, const std::string& path) {
  model.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out.write("GCN1", 4);
  const std::uint32_t layers = static_cast<std::uint32_t>(model.num_layers());
  out.write(reinterpret_cast<const char*>(&layers), sizeof(layers));
  for (int d : model.dims) {
    const std::uint32_t dim = static_cast<std::uint32_t>(d);
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
  }
  const Eigen::VectorXd params = model.flatten();
  for (Eigen::Index t = 0; t < params.size(); ++t) {
    const float value = static_cast<float>(params[t]);
    out.write(reinterpret_cast<const char*>(&value), sizeof(value));
  }
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

GcnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, "GCN1", 4) != 0) {
    throw Error(ErrorCode::kBadMagic, path + " is not a GCN1 checkpoint");
  }
  std::uint32_t layers = 0;
  in.read(reinterpret_cast<char*>(&layers), sizeof(layers));
  if (in.gcount() != sizeof(layers) || layers < 1 || layers > 64) {
    throw Error(ErrorCode::kTruncated, path + ": bad layer count");
  }
  std::vector<int> dims(layers + 1);
  for (auto& d : dims) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (in.gcount() != sizeof(v) || v < 1) {
      throw Error(ErrorCode::kTruncated, path + ": bad dimension list");
    }
    d = static_cast<int>(v);
  }
  GcnModel model;
  model.dims = dims;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    model.weights.emplace_back(dims[l], dims[l + 1]);
    model.input_weights.emplace_back(dims.front(), dims[l + 1]);
  }
  model.edge_head.resize(2 * dims.back());
  Eigen::VectorXd params(model.parameter_count());
  for (Eigen::Index t = 0; t < params.size(); ++t) {
    float value = 0.0f;
    in.read(reinterpret_cast<char*>(&value), sizeof(value));
    if (in.gcount() != sizeof(value)) {
      throw Error(ErrorCode::kTruncated, path + ": parameter payload short");
    }
    params[t] = static_cast<double>(value);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kTrailingBytes,
                path + " has bytes past the declared parameters");
  }
  model.unflatten(params);
  model.validate();
  return model;
}

void TrainConfig::validate() const {
  if (n1 < 1 || n2 < 1 || k_sub < 1 || epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "n1, n2, k_sub, epochs must be positive");
  }
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument,
                "learning_rate must be finite and >= 0");
  }
  if (neg_weight.has_value() && !(*neg_weight > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "neg_weight must be > 0");
  }
}

Subgraph sample_subgraph(const EmbeddingSet& e, const LabelAssignment& labels,
                         const TrainConfig& cfg, std::int64_t anchor,
                         std::uint64_t round) {
  cfg.validate();
  if (labels.size() != e.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "labels and embeddings cover different sample counts");
  }
  // Members per retained class.
  std::map<std::int64_t, std::vector<std::int64_t>> members;
  for (std::int64_t i = 0; i < labels.size(); ++i) {
    if (labels.is_assigned(i)) members[labels.label(i)].push_back(i);
  }
  auto anchor_it = members.find(anchor);
  if (anchor_it == members.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "anchor class " + std::to_string(anchor) +
                    " has no assigned samples");
  }
  if (cfg.n1 > static_cast<int>(members.size())) {
    throw Error(ErrorCode::kInvalidArgument,
                "n1 = " + std::to_string(cfg.n1) + " exceeds the " +
                    std::to_string(members.size()) + " retained classes");
  }

  // Unit centroids per class, anchored ranking by centroid cosine.
  std::map<std::int64_t, Eigen::VectorXd> centroids;
  for (const auto& [cls, ids] : members) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(e.dim());
    for (std::int64_t id : ids) c += e.row(id).cast<double>();
    const double norm = c.norm();
    if (norm > 0.0) c /= norm;
    centroids.emplace(cls, std::move(c));
  }
  struct Scored {
    std::int64_t cls;
    double cosine;
  };
  std::vector<Scored> others;
  for (const auto& [cls, centroid] : centroids) {
    if (cls == anchor) continue;
    others.push_back({cls, centroids.at(anchor).dot(centroid)});
  }
  std::sort(others.begin(), others.end(), [](const Scored& a, const Scored& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.cls < b.cls;
  });
  std::vector<std::int64_t> selected = {anchor};
  for (int t = 0; t + 1 < cfg.n1; ++t) selected.push_back(others[t].cls);

  // Seeded draw of min(n2, size) members per selected class.
  std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(anchor),
                               round));
  Subgraph sg;
  for (std::int64_t cls : selected) {
    const auto& pool = members.at(cls);
    const std::size_t take =
        std::min<std::size_t>(pool.size(), static_cast<std::size_t>(cfg.n2));
    std::vector<std::int64_t> draw;
    draw.reserve(take);
    std::sample(pool.begin(), pool.end(), std::back_inserter(draw), take, rng);
    sg.node_ids.insert(sg.node_ids.end(), draw.begin(), draw.end());
  }
  const std::int64_t m = static_cast<std::int64_t>(sg.node_ids.size());
  if (m < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "subgraph needs at least 2 nodes, drew " + std::to_string(m));
  }

  RowMatrixF rows(m, e.dim());
  for (std::int64_t t = 0; t < m; ++t) {
    rows.row(t) = e.row(sg.node_ids[static_cast<std::size_t>(t)]);
  }
  EmbeddingSet sub_embeddings(rows);
  const int k = std::min<int>(cfg.k_sub, static_cast<int>(m - 1));
  sg.graph = build_graph(sub_embeddings, k, /*prune_threshold=*/-1.0);
  sg.features = rows.cast<double>();
  sg.edge_list = sg.graph.edges();
  sg.edge_labels.reserve(sg.edge_list.size());
  for (const Edge& edge : sg.edge_list) {
    const std::int64_t ga = sg.node_ids[static_cast<std::size_t>(edge.a)];
    const std::int64_t gb = sg.node_ids[static_cast<std::size_t>(edge.b)];
    sg.edge_labels.push_back(labels.label(ga) == labels.label(gb) ? 1 : 0);
  }
  return sg;
}

std::vector<Eigen::MatrixXd> gcn_forward(const GcnModel& model,
                                         const NormalizedAdjacency& a_hat,
                                         const Eigen::MatrixXd& x) {
  model.validate();
  return forward_cached(model, a_hat, x).h;
}

double edge_probability(const GcnModel& model, const Eigen::MatrixXd& h,
                        std::int64_t i, std::int64_t j) {
  if (i == j) {
    throw Error(ErrorCode::kInvalidArgument,
                "edge probability needs two distinct nodes");
  }
  const std::int64_t first = std::min(i, j), second = std::max(i, j);
  const int dl = model.output_dim();
  const double logit = model.edge_head.segment(0, dl).dot(h.row(first)) +
                       model.edge_head.segment(dl, dl).dot(h.row(second)) +
                       model.edge_bias;
  return stable_sigmoid(logit);
}

double edge_loss(const GcnModel& model, const Subgraph& sg,
                 std::optional<double> neg_weight) {
  const NormalizedAdjacency a_hat = normalized_adjacency(sg.graph);
  return loss_impl(model, sg, a_hat, resolve_neg_weight(sg, neg_weight),
                   nullptr);
}

std::pair<double, GcnGradients> edge_loss_and_gradients(
    const GcnModel& model, const Subgraph& sg,
    std::optional<double> neg_weight) {
  const NormalizedAdjacency a_hat = normalized_adjacency(sg.graph);
  GcnGradients grads;
  const double loss = loss_impl(model, sg, a_hat,
                                resolve_neg_weight(sg, neg_weight), &grads);
  return {loss, std::move(grads)};
}

TrainResult train(GcnModel model, const std::vector<Subgraph>& subgraphs,
                  const TrainConfig& cfg) {
  cfg.validate();
  model.validate();
  if (subgraphs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "train needs >= 1 subgraph");
  }
  struct Prepared {
    const Subgraph* sg;
    NormalizedAdjacency a_hat;
    double lambda;
  };
  std::vector<Prepared> usable;
  std::int64_t skipped = 0;
  for (std::size_t s = 0; s < subgraphs.size(); ++s) {
    const Subgraph& sg = subgraphs[s];
    if (sg.positive_edges() == 0 || sg.negative_edges() == 0) {
      std::cerr << "warning: subgraph " << s
                << " lacks both edge polarities, skipping ("
                << sg.positive_edges() << " positive, "
                << sg.negative_edges() << " negative)\n";
      ++skipped;
      continue;
    }
    usable.push_back({&sg, normalized_adjacency(sg.graph),
                      resolve_neg_weight(sg, cfg.neg_weight)});
  }
  if (usable.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "every subgraph lacks an edge polarity; nothing to train on");
  }

  TrainResult result;
  result.used_subgraphs = static_cast<std::int64_t>(usable.size());
  result.skipped_subgraphs = skipped;
  result.loss_trace.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (const Prepared& prep : usable) {
      GcnGradients grads;
      const double loss =
          loss_impl(model, *prep.sg, prep.a_hat, prep.lambda, &grads);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNonFiniteLoss,
                    "loss diverged at epoch " + std::to_string(epoch) +
                        " (learning_rate " + std::to_string(cfg.learning_rate) +
                        ")");
      }
      epoch_loss += loss;
      for (int l = 0; l < model.num_layers(); ++l) {
        model.weights[l] -= cfg.learning_rate * grads.weights[l];
        model.input_weights[l] -= cfg.learning_rate * grads.input_weights[l];
      }
      model.edge_head -= cfg.learning_rate * grads.edge_head;
      model.edge_bias -= cfg.learning_rate * grads.edge_bias;
    }
    result.loss_trace.push_back(epoch_loss /
                                static_cast<double>(usable.size()));
  }
  result.model = std::move(model);
  return result;
}

double gradient_check(const GcnModel& model, const Subgraph& sg,
                      double epsilon, std::optional<double> neg_weight) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be positive");
  }
  const double lambda = resolve_neg_weight(sg, neg_weight);
  const NormalizedAdjacency a_hat = normalized_adjacency(sg.graph);
  GcnGradients grads;
  loss_impl(model, sg, a_hat, lambda, &grads);
  const Eigen::VectorXd analytic = grads.flatten();

  GcnModel probe = model;
  Eigen::VectorXd params = model.flatten();
  double max_rel = 0.0;
  for (Eigen::Index t = 0; t < params.size(); ++t) {
    const double saved = params[t];
    params[t] = saved + epsilon;
    probe.unflatten(params);
    const double up = loss_impl(probe, sg, a_hat, lambda, nullptr);
    params[t] = saved - epsilon;
    probe.unflatten(params);
    const double down = loss_impl(probe, sg, a_hat, lambda, nullptr);
    params[t] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double denom =
        std::max(std::abs(analytic[t]) + std::abs(numeric), 1e-3);
    max_rel = std::max(max_rel, std::abs(analytic[t] - numeric) / denom);
  }
  return max_rel;
}

InferResult infer_prune(const GcnModel& model, const SimilarityGraph& g,
                        const EmbeddingSet& e, double p_cut) {
  model.validate();
  if (g.num_nodes() != e.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "graph and embeddings cover different sample counts");
  }
  const NormalizedAdjacency a_hat = normalized_adjacency(g);
  const Eigen::MatrixXd x = e.rows().cast<double>();
  const Eigen::MatrixXd h = forward_cached(model, a_hat, x).h.back();

  InferResult result;
  std::vector<Edge> drop;
  for (const Edge& edge : g.edges()) {
    const double p = edge_probability(model, h, edge.a, edge.b);
    result.report.push_back({edge.a, edge.b, p});
    if (p < p_cut) drop.push_back(edge);
  }
  result.graph = drop.empty() ? g : remove_edges(g, drop);
  return result;
}

LabelAssignment refine(const GcnModel& model, const SimilarityGraph& g,
                       const EmbeddingSet& e, double p_cut,
                       double score_threshold) {
  const InferResult pruned = infer_prune(model, g, e, p_cut);
  return cluster_by_threshold(pruned.graph, ScoringMethod::kWeighted,
                              score_threshold);
}

void save_edge_report_csv(const std::vector<EdgeProbability>& report,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kFileIo, "cannot open " + path);
  out << "src,dst,probability\n";
  char buffer[80];
  for (const EdgeProbability& entry : report) {
    std::snprintf(buffer, sizeof(buffer), "%lld,%lld,%.6f",
                  static_cast<long long>(entry.src),
                  static_cast<long long>(entry.dst), entry.probability);
    out << buffer << '\n';
  }
  if (!out) throw Error(ErrorCode::kFileIo, "short write to " + path);
}

}  // namespace graphrefine
