#pragma once

// Linear support vector classifier trained by primal subgradient descent on
//
//   J(w, b) = 1/2 |w|^2 + C * sum_i max(0, 1 - y_i (w . x_i + b)),
//
// with labels {0,1} mapped to {-1,+1} and features standardized inside the
// model. Steps follow the Pegasos schedule eta_t = 1 / (lambda * t) on the
// normalized objective J / (C N), i.e. lambda = 1 / (C N).

#include <cstdint>
#include <span>
#include <vector>

#include "fedscreen/matrix.hpp"
#include "fedscreen/train_config.hpp"

namespace fedscreen {

inline constexpr double kScaleFloor = 1e-12;

struct Standardization {
  std::vector<double> means;
  std::vector<double> scales;

  bool operator==(const Standardization&) const = default;
};

// Per-feature count, sum and sum of squares. Mergeable, so pooled
// statistics can be built from per-silo summaries.
class SufficientStats {
 public:
  SufficientStats() = default;
  explicit SufficientStats(std::size_t arity) : sums_(arity, 0.0), squares_(arity, 0.0) {}

  static SufficientStats of(const LabeledMatrix& m);

  void add(std::span<const double> row);
  void merge(const SufficientStats& other);

  std::size_t arity() const noexcept { return sums_.size(); }
  std::uint64_t count() const noexcept { return count_; }
  const std::vector<double>& sums() const noexcept { return sums_; }
  const std::vector<double>& sum_squares() const noexcept { return squares_; }

  // Population mean and standard deviation; scales floor at kScaleFloor.
  Standardization finalize() const;

  static SufficientStats from_parts(std::uint64_t count, std::vector<double> sums,
                                    std::vector<double> squares);

  bool operator==(const SufficientStats&) const = default;

 private:
  std::uint64_t count_ = 0;
  std::vector<double> sums_;
  std::vector<double> squares_;
};

struct LinearSvcModel {
  std::vector<double> weights;  // in standardized coordinates
  double bias = 0.0;
  double regularization_c = 1.0;
  std::vector<double> feature_means;
  std::vector<double> feature_scales;

  std::size_t arity() const noexcept { return weights.size(); }
  Standardization standardization() const { return {feature_means, feature_scales}; }
  bool operator==(const LinearSvcModel&) const = default;
};

struct SvcGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

// Centralized training with statistics taken from the training rows.
LinearSvcModel svc_train(const LabeledMatrix& train, const TrainConfig& cfg);

// Training with externally supplied (e.g. pooled) standardization.
LinearSvcModel svc_train(const LabeledMatrix& train, const TrainConfig& cfg,
                         const Standardization& standardization);

// J at the model's parameters over raw (unstandardized) rows.
double svc_objective(const LinearSvcModel& model, const LabeledMatrix& data);

// A subgradient of J with respect to (weights, bias). Samples exactly at
// margin 1 are treated as inactive.
SvcGradient svc_subgradient(const LinearSvcModel& model, const LabeledMatrix& data);

// w . standardize(x) + b. Throws ShapeError on arity mismatch.
double svc_margin(const LinearSvcModel& model, std::span<const double> features);

// 1 iff margin >= 0.
std::uint8_t svc_predict(const LinearSvcModel& model, std::span<const double> features);

// ---- resumable optimizer ---------------------------------------------------
// Shared by centralized training and federated local steps so both follow
// the same trajectory.

struct SvcIterate {
  std::vector<double> weights;
  double bias = 0.0;
  std::uint64_t epochs_done = 0;
  std::uint64_t steps_done = 0;
};

// Validates finiteness and returns rows mapped through the standardization.
LabeledMatrix standardize_rows(const LabeledMatrix& data, const Standardization& s);

// lambda = 1 / (C * total_samples).
double svc_lambda(double c, std::uint64_t total_samples);

// Runs `epochs` epochs over pre-standardized rows. Stochastic mode visits
// rows in a per-epoch order seeded by (seed, epoch index); full-batch mode
// takes one step per epoch.
void svc_run_epochs(SvcIterate& it, const LabeledMatrix& standardized, double lambda,
                    int epochs, bool full_batch, std::uint64_t seed);

// sum_i max(0, 1 - y_i (w . x_i + b)) over pre-standardized rows.
double svc_hinge_sum(const LabeledMatrix& standardized, std::span<const double> weights,
                     double bias);

// 1/2 |w|^2 + C * hinge_sum.
double svc_objective_from_hinge(std::span<const double> weights, double c,
                                double hinge_sum);

}  // namespace fedscreen
