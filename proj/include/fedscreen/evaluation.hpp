#pragma once

// Classification metrics, the raw-vs-federated experiment matrix and the
// comparison table.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedscreen/canonical_json.hpp"
#include "fedscreen/dataset.hpp"
#include "fedscreen/federation.hpp"
#include "fedscreen/matrix.hpp"
#include "fedscreen/train_config.hpp"

namespace fedscreen {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }
  // Same counts with class 0 taken as the positive class.
  ConfusionMatrix transposed() const noexcept { return {tn, fn, fp, tp}; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// Positive class is 1. Throws ShapeError on length mismatch or labels
// outside {0,1}.
ConfusionMatrix confusion(std::span<const std::uint8_t> predictions,
                          std::span<const std::uint8_t> truth);

enum class Condition { kRawSingleSite, kFedAvg, kMetaVote, kPooledDiagnostic };

std::string_view to_string(Condition condition);
std::optional<Condition> parse_condition(std::string_view text);

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1_positive = 0.0;
  double f1_weighted = 0.0;
  // Set when the metric's denominator was zero (the metric is then 0).
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
  std::uint64_t n = 0;

  Condition condition = Condition::kPooledDiagnostic;
  ClassifierKind classifier_kind = ClassifierKind::kSvc;
  // Rows sharing a method label form one group in the table.
  std::string method;
  // Training site for raw-single-site, "all" otherwise.
  std::string site = "all";
  // Population the metrics were measured on.
  std::string evaluated_on = "union";

  bool operator==(const MetricsReport&) const = default;
};

// Throws EmptyEvalError when the matrix is empty.
MetricsReport metrics(const ConfusionMatrix& cm);

// ---- experiment matrix -----------------------------------------------------

struct ExperimentCell {
  ClassifierKind kind = ClassifierKind::kSvc;
  Condition condition = Condition::kRawSingleSite;
  std::optional<SourceId> site;  // raw-single-site only

  std::string describe() const;
  bool operator==(const ExperimentCell&) const = default;
};

struct SiloData {
  SourceId id;
  LabeledMatrix train;
};

struct ExperimentSetup {
  std::vector<SiloData> silos;
  LabeledMatrix test;
  // Rounds, epochs, hyperparameters and seed; kind and aggregation are set
  // per cell.
  RoundConfig federation;
};

// {DT, RF, SVC} x {raw on each given site, meta-vote, pooled-diagnostic},
// plus SVC fedavg.
std::vector<ExperimentCell> default_cells(std::span<const SourceId> sites);

// One report per cell, in cell order. Cells run concurrently. A failing cell
// raises ExperimentError naming the cell.
std::vector<MetricsReport> run_experiment_matrix(const ExperimentSetup& setup,
                                                 std::span<const ExperimentCell> cells);

class ExperimentError : public Error {
 public:
  ExperimentError(const std::string& cell, const std::string& detail, bool training_failure)
      : Error("cell " + cell + ": " + detail), training_failure_(training_failure) {}
  bool training_failure() const noexcept { return training_failure_; }

 private:
  bool training_failure_;
};

// ---- reporting -------------------------------------------------------------

// Half-up rounding of a fraction to an integer percentage.
int percent(double fraction);

std::string classifier_label(ClassifierKind kind);  // "DT", "RF", "SVC"

// Columns Method, Classifier, PR, R, Fs, Acc. Fs is f1_weighted. The method
// label is printed on the first row of each run of equal labels.
std::string render_table(std::span<const MetricsReport> reports);

Json to_json(const MetricsReport& report);
MetricsReport metrics_report_from_json(const Json& j);

// {"reports": [...]} as canonical JSON.
std::string render_json(std::span<const MetricsReport> reports);
// Throws ProtocolError on malformed input.
std::vector<MetricsReport> parse_reports_json(std::string_view text);

// Pinned reference table: raw adults rows and federated rows.
std::vector<MetricsReport> reference_table_reports();

}  // namespace fedscreen
