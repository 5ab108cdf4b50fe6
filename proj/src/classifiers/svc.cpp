#include "fedscreen/svc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fedscreen/kernels.hpp"
#include "fedscreen/rng.hpp"

namespace fedscreen {
namespace {

double signed_label(std::uint8_t label) { return label == 1 ? 1.0 : -1.0; }

void check_trainable(const LabeledMatrix& train) {
  if (train.empty()) throw TrainingError("training set is empty");
  const std::size_t positives = train.count_label(1);
  if (positives == 0 || positives == train.rows()) {
    throw TrainingError("training set holds a single class");
  }
}

void check_arity(const LinearSvcModel& model, std::size_t arity) {
  if (arity != model.arity() || model.feature_means.size() != arity ||
      model.feature_scales.size() != arity) {
    throw ShapeError("model expects " + std::to_string(model.arity()) +
                     " features, got " + std::to_string(arity));
  }
}

}  // namespace

// ---- standardization -------------------------------------------------------

SufficientStats SufficientStats::of(const LabeledMatrix& m) {
  SufficientStats stats(m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) stats.add(m.row(i));
  return stats;
}

SufficientStats SufficientStats::from_parts(std::uint64_t count, std::vector<double> sums,
                                            std::vector<double> squares) {
  if (sums.size() != squares.size()) throw ShapeError("sums and squares differ in length");
  SufficientStats stats;
  stats.count_ = count;
  stats.sums_ = std::move(sums);
  stats.squares_ = std::move(squares);
  return stats;
}

void SufficientStats::add(std::span<const double> row) {
  if (row.size() != sums_.size()) throw ShapeError("row arity differs from statistics");
  for (std::size_t j = 0; j < row.size(); ++j) {
    sums_[j] += row[j];
    squares_[j] += row[j] * row[j];
  }
  ++count_;
}

void SufficientStats::merge(const SufficientStats& other) {
  if (other.arity() != arity()) throw ShapeError("cannot merge statistics of different arity");
  for (std::size_t j = 0; j < sums_.size(); ++j) {
    sums_[j] += other.sums_[j];
    squares_[j] += other.squares_[j];
  }
  count_ += other.count_;
}

Standardization SufficientStats::finalize() const {
  if (count_ == 0) throw TrainingError("no samples to standardize");
  Standardization s;
  s.means.resize(arity());
  s.scales.resize(arity());
  const double n = static_cast<double>(count_);
  for (std::size_t j = 0; j < arity(); ++j) {
    const double mean = sums_[j] / n;
    const double variance = std::max(0.0, squares_[j] / n - mean * mean);
    s.means[j] = mean;
    s.scales[j] = std::max(std::sqrt(variance), kScaleFloor);
  }
  return s;
}

LabeledMatrix standardize_rows(const LabeledMatrix& data, const Standardization& s) {
  if (s.means.size() != data.cols() || s.scales.size() != data.cols()) {
    throw ShapeError("standardization arity differs from data");
  }
  for (double v : data.values()) {
    if (!std::isfinite(v)) throw NumericError("non-finite feature value");
  }
  LabeledMatrix out(data.cols());
  std::vector<double> buffer(data.cols());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    kernels::standardize(data.row(i), s.means, s.scales, buffer);
    out.add_row(buffer, data.label(i));
  }
  return out;
}

// ---- optimizer -------------------------------------------------------------

double svc_lambda(double c, std::uint64_t total_samples) {
  return 1.0 / (c * static_cast<double>(total_samples));
}

void svc_run_epochs(SvcIterate& it, const LabeledMatrix& standardized, double lambda,
                    int epochs, bool full_batch, std::uint64_t seed) {
  const std::size_t n = standardized.rows();
  const std::size_t arity = standardized.cols();
  if (it.weights.size() != arity) throw ShapeError("iterate arity differs from data");
  if (n == 0 || epochs <= 0) return;

  std::vector<std::size_t> order(n);
  std::vector<double> active_sum(arity);
  for (int e = 0; e < epochs; ++e) {
    if (full_batch) {
      std::fill(active_sum.begin(), active_sum.end(), 0.0);
      double active_label_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = standardized.row(i);
        const double y = signed_label(standardized.label(i));
        if (y * (kernels::dot(it.weights, x) + it.bias) < 1.0) {
          kernels::axpy(y, x, active_sum);
          active_label_sum += y;
        }
      }
      const double t = static_cast<double>(++it.steps_done);
      const double eta = 1.0 / (lambda * t);
      kernels::scale(1.0 - 1.0 / t, it.weights);
      kernels::axpy(eta / static_cast<double>(n), active_sum, it.weights);
      it.bias += eta * active_label_sum / static_cast<double>(n);
    } else {
      std::iota(order.begin(), order.end(), std::size_t{0});
      Rng rng(derive_seed(seed, it.epochs_done));
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t i : order) {
        const auto x = standardized.row(i);
        const double y = signed_label(standardized.label(i));
        const double margin = y * (kernels::dot(it.weights, x) + it.bias);
        const double t = static_cast<double>(++it.steps_done);
        const double eta = 1.0 / (lambda * t);
        kernels::scale(1.0 - 1.0 / t, it.weights);
        if (margin < 1.0) {
          kernels::axpy(eta * y, x, it.weights);
          it.bias += eta * y;
        }
      }
    }
    ++it.epochs_done;
  }
}

double svc_hinge_sum(const LabeledMatrix& standardized, std::span<const double> weights,
                     double bias) {
  double total = 0.0;
  for (std::size_t i = 0; i < standardized.rows(); ++i) {
    const double y = signed_label(standardized.label(i));
    total += std::max(0.0, 1.0 - y * (kernels::dot(weights, standardized.row(i)) + bias));
  }
  return total;
}

double svc_objective_from_hinge(std::span<const double> weights, double c,
                                double hinge_sum) {
  return 0.5 * kernels::dot(weights, weights) + c * hinge_sum;
}

// ---- training --------------------------------------------------------------

LinearSvcModel svc_train(const LabeledMatrix& train, const TrainConfig& cfg) {
  check_trainable(train);
  return svc_train(train, cfg, SufficientStats::of(train).finalize());
}

LinearSvcModel svc_train(const LabeledMatrix& train, const TrainConfig& cfg,
                         const Standardization& standardization) {
  check_trainable(train);
  cfg.validate(train.cols());
  const LabeledMatrix data = standardize_rows(train, standardization);
  const double c = cfg.svc.c;
  const double lambda = svc_lambda(c, data.rows());

  SvcIterate it;
  it.weights.assign(data.cols(), 0.0);
  std::vector<double> best_weights = it.weights;
  double best_bias = 0.0;
  double best_objective =
      svc_objective_from_hinge(it.weights, c, svc_hinge_sum(data, it.weights, it.bias));

  const auto total = static_cast<std::uint64_t>(cfg.svc.epochs);
  while (it.epochs_done < total) {
    const auto chunk = std::min<std::uint64_t>(
        static_cast<std::uint64_t>(cfg.svc.checkpoint_interval), total - it.epochs_done);
    svc_run_epochs(it, data, lambda, static_cast<int>(chunk), cfg.svc.full_batch, cfg.seed);
    const double objective =
        svc_objective_from_hinge(it.weights, c, svc_hinge_sum(data, it.weights, it.bias));
    if (!std::isfinite(objective)) throw NumericError("SVC objective diverged");
    if (objective < best_objective) {
      best_objective = objective;
      best_weights = it.weights;
      best_bias = it.bias;
    }
  }

  return {std::move(best_weights), best_bias, c, standardization.means,
          standardization.scales};
}

// ---- evaluation hooks ------------------------------------------------------

double svc_objective(const LinearSvcModel& model, const LabeledMatrix& data) {
  check_arity(model, data.cols());
  const LabeledMatrix standardized = standardize_rows(data, model.standardization());
  return svc_objective_from_hinge(
      model.weights, model.regularization_c,
      svc_hinge_sum(standardized, model.weights, model.bias));
}

SvcGradient svc_subgradient(const LinearSvcModel& model, const LabeledMatrix& data) {
  check_arity(model, data.cols());
  const LabeledMatrix standardized = standardize_rows(data, model.standardization());
  SvcGradient g{model.weights, 0.0};
  const double c = model.regularization_c;
  for (std::size_t i = 0; i < standardized.rows(); ++i) {
    const auto x = standardized.row(i);
    const double y = signed_label(standardized.label(i));
    if (y * (kernels::dot(model.weights, x) + model.bias) < 1.0) {
      kernels::axpy(-c * y, x, g.weights);
      g.bias -= c * y;
    }
  }
  return g;
}

double svc_margin(const LinearSvcModel& model, std::span<const double> features) {
  check_arity(model, features.size());
  std::vector<double> x(features.size());
  kernels::standardize(features, model.feature_means, model.feature_scales, x);
  return kernels::dot(model.weights, x) + model.bias;
}

std::uint8_t svc_predict(const LinearSvcModel& model, std::span<const double> features) {
  return svc_margin(model, features) >= 0.0 ? 1 : 0;
}

}  // namespace fedscreen
