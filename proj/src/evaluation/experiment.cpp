#include <future>

#include "fedscreen/errors.hpp"
#include "fedscreen/evaluation.hpp"

namespace fedscreen {
namespace {

std::string method_label(const ExperimentCell& cell) {
  switch (cell.condition) {
    case Condition::kRawSingleSite:
      return "Raw Data (" + std::string(cell.site ? to_string(*cell.site) : "?") + ")";
    case Condition::kFedAvg:
      return "Federated learning (fedavg)";
    case Condition::kMetaVote:
      return "Federated learning (meta-vote)";
    case Condition::kPooledDiagnostic:
      return "Pooled (diagnostic)";
  }
  return "?";
}

template <typename Predict>
MetricsReport evaluate(const LabeledMatrix& test, Predict predict) {
  std::vector<std::uint8_t> predictions;
  predictions.reserve(test.rows());
  for (std::size_t i = 0; i < test.rows(); ++i) predictions.push_back(predict(test.row(i)));
  return metrics(confusion(predictions, test.labels()));
}

MetricsReport run_cell(const ExperimentSetup& setup, const ExperimentCell& cell) {
  RoundConfig round = setup.federation;
  round.classifier_kind = cell.kind;
  const TrainConfig train_cfg = round.train_config();

  MetricsReport report;
  switch (cell.condition) {
    case Condition::kRawSingleSite: {
      if (!cell.site) throw ConfigError("raw-single-site cell needs a site");
      const SiloData* silo = nullptr;
      for (const SiloData& s : setup.silos) {
        if (s.id == *cell.site) silo = &s;
      }
      if (silo == nullptr) throw ConfigError("no data for site " + std::string(to_string(*cell.site)));
      const ModelParams model = train_model(silo->train, train_cfg);
      report = evaluate(setup.test, [&](auto x) { return predict(model, x); });
      report.site = std::string(to_string(*cell.site));
      break;
    }
    case Condition::kFedAvg:
    case Condition::kMetaVote: {
      round.aggregation =
          cell.condition == Condition::kFedAvg ? Aggregation::kFedAvg : Aggregation::kMetaVote;
      std::vector<ClientState> clients;
      for (const SiloData& s : setup.silos) clients.push_back({s.id, s.train, std::nullopt, round.seed});
      const FederationResult result = run_federation(std::move(clients), round);
      report = evaluate(setup.test, [&](auto x) { return result.model.predict(x); });
      break;
    }
    case Condition::kPooledDiagnostic: {
      if (setup.silos.empty()) throw ConfigError("no silos to pool");
      LabeledMatrix pooled(setup.silos.front().train.cols());
      for (const SiloData& s : setup.silos) pooled.append(s.train);
      const ModelParams model = train_model(pooled, train_cfg);
      report = evaluate(setup.test, [&](auto x) { return predict(model, x); });
      break;
    }
  }
  report.condition = cell.condition;
  report.classifier_kind = cell.kind;
  report.method = method_label(cell);
  return report;
}

}  // namespace

std::string ExperimentCell::describe() const {
  std::string out = "(" + std::string(to_string(kind)) + ", " + std::string(to_string(condition));
  if (site) out += ", " + std::string(to_string(*site));
  return out + ")";
}

std::vector<ExperimentCell> default_cells(std::span<const SourceId> sites) {
  constexpr ClassifierKind kKinds[] = {ClassifierKind::kDecisionTree,
                                       ClassifierKind::kRandomForest, ClassifierKind::kSvc};
  std::vector<ExperimentCell> cells;
  for (SourceId site : sites) {
    for (ClassifierKind kind : kKinds) cells.push_back({kind, Condition::kRawSingleSite, site});
  }
  for (ClassifierKind kind : kKinds) cells.push_back({kind, Condition::kMetaVote, std::nullopt});
  cells.push_back({ClassifierKind::kSvc, Condition::kFedAvg, std::nullopt});
  for (ClassifierKind kind : kKinds) {
    cells.push_back({kind, Condition::kPooledDiagnostic, std::nullopt});
  }
  return cells;
}

std::vector<MetricsReport> run_experiment_matrix(const ExperimentSetup& setup,
                                                 std::span<const ExperimentCell> cells) {
  std::vector<std::future<MetricsReport>> pending;
  pending.reserve(cells.size());
  for (const ExperimentCell& cell : cells) {
    pending.push_back(std::async(std::launch::async, [&setup, cell] {
      try {
        return run_cell(setup, cell);
      } catch (const ConfigError& e) {
        throw ExperimentError(cell.describe(), e.what(), false);
      } catch (const std::exception& e) {
        throw ExperimentError(cell.describe(), e.what(), true);
      }
    }));
  }
  std::vector<MetricsReport> reports;
  reports.reserve(cells.size());
  for (auto& f : pending) reports.push_back(f.get());
  return reports;
}

}  // namespace fedscreen
