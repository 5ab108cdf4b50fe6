#include <array>

#include "fedscreen/errors.hpp"
#include "fedscreen/evaluation.hpp"

namespace fedscreen {
namespace {

constexpr std::array<std::pair<Condition, std::string_view>, 4> kConditionNames{{
    {Condition::kRawSingleSite, "raw-single-site"},
    {Condition::kFedAvg, "fedavg"},
    {Condition::kMetaVote, "meta-vote"},
    {Condition::kPooledDiagnostic, "pooled-diagnostic"},
}};

// Returns num/den, or 0 with `undefined` set when den is zero.
double ratio(std::uint64_t num, std::uint64_t den, bool& undefined) {
  if (den == 0) {
    undefined = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string_view to_string(Condition condition) {
  for (const auto& [c, name] : kConditionNames) {
    if (c == condition) return name;
  }
  return "unknown";
}

std::optional<Condition> parse_condition(std::string_view text) {
  for (const auto& [c, name] : kConditionNames) {
    if (name == text) return c;
  }
  return std::nullopt;
}

ConfusionMatrix confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> truth) {
  if (predictions.size() != truth.size()) {
    throw ShapeError("predictions (" + std::to_string(predictions.size()) +
                     ") and truth (" + std::to_string(truth.size()) + ") differ in length");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predictions[i] > 1 || truth[i] > 1) throw ShapeError("labels must be 0 or 1");
    if (truth[i] == 1) {
      ++(predictions[i] == 1 ? cm.tp : cm.fn);
    } else {
      ++(predictions[i] == 1 ? cm.fp : cm.tn);
    }
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw EmptyEvalError("cannot compute metrics on zero records");
  MetricsReport r;
  r.n = cm.total();
  bool unused = false;
  r.accuracy = ratio(cm.tp + cm.tn, r.n, unused);
  r.precision = ratio(cm.tp, cm.tp + cm.fp, r.precision_undefined);
  r.recall = ratio(cm.tp, cm.tp + cm.fn, r.recall_undefined);
  if (r.precision_undefined || r.recall_undefined || r.precision + r.recall == 0.0) {
    r.f1_undefined = true;
  } else {
    r.f1_positive = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }

  // Per-class F1 = 2 tp / (2 tp + fp + fn), weighted by class support.
  bool ignored = false;
  const double f1_one = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, ignored);
  const double f1_zero = ratio(2 * cm.tn, 2 * cm.tn + cm.fp + cm.fn, ignored);
  const double n = static_cast<double>(r.n);
  r.f1_weighted = (static_cast<double>(cm.tp + cm.fn) * f1_one +
                   static_cast<double>(cm.tn + cm.fp) * f1_zero) /
                  n;
  return r;
}

}  // namespace fedscreen
