#include <cmath>

#include "fedscreen/federation.hpp"
#include "fedscreen/svc.hpp"

namespace fedscreen {
namespace {

double accuracy_on(const ModelParams& params, const LabeledMatrix& data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    correct += predict(params, data.row(i)) == data.label(i);
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

}  // namespace

void RoundConfig::validate() const {
  if (n_rounds < 1) throw ConfigError("n_rounds must be >= 1");
  if (local_epochs_per_round < 0) throw ConfigError("local_epochs_per_round must be >= 0");
  if (aggregation == Aggregation::kFedAvg && classifier_kind != ClassifierKind::kSvc) {
    throw ConfigError("fedavg averages parameters and needs the svc classifier, got '" +
                      std::string(to_string(classifier_kind)) + "'");
  }
}

int RoundConfig::effective_rounds() const {
  return aggregation == Aggregation::kMetaVote ? 1 : n_rounds;
}

TrainConfig RoundConfig::train_config() const {
  TrainConfig out = train;
  out.kind = classifier_kind;
  out.seed = seed;
  out.svc.full_batch = out.svc.full_batch || full_batch;
  return out;
}

ClientUpdate local_train_step(const ClientState& client,
                              const std::optional<ModelParams>& global,
                              const RoundConfig& cfg, const RoundContext& ctx) {
  const MatrixSplit split = local_split(client);
  const TrainConfig train_cfg = cfg.train_config();
  train_cfg.validate(split.train.cols());

  ClientUpdate update{client.client_id, {}, split.train.rows(), 0.0, std::nullopt};

  if (cfg.aggregation == Aggregation::kMetaVote) {
    std::optional<Standardization> standardization;
    if (!ctx.standardization.means.empty()) standardization = ctx.standardization;
    update.params = train_model(split.train, train_cfg, standardization);
    update.local_validation_accuracy = accuracy_on(update.params, split.test);
    return update;
  }

  const std::size_t arity = split.train.cols();
  LinearSvcModel start{std::vector<double>(arity, 0.0), 0.0, train_cfg.svc.c,
                       ctx.standardization.means, ctx.standardization.scales};
  if (global) {
    const auto* received = std::get_if<LinearSvcModel>(&*global);
    if (received == nullptr) throw FederationSchemaError("fedavg global model is not a linear SVC");
    if (received->arity() != arity) {
      throw FederationSchemaError("global model arity " + std::to_string(received->arity()) +
                                  " differs from local arity " + std::to_string(arity));
    }
    start.weights = received->weights;
    start.bias = received->bias;
  }
  if (ctx.total_samples == 0) throw EmptyRoundError("round carries no samples");

  const LabeledMatrix data = standardize_rows(split.train, ctx.standardization);
  update.received_hinge_sum = svc_hinge_sum(data, start.weights, start.bias);

  const auto epochs = static_cast<std::uint64_t>(ctx.local_epochs);
  const auto round = static_cast<std::uint64_t>(ctx.round_index);
  SvcIterate it{start.weights, start.bias, round * epochs,
                train_cfg.svc.full_batch ? round * epochs : round * epochs * data.rows()};
  svc_run_epochs(it, data, svc_lambda(train_cfg.svc.c, ctx.total_samples), ctx.local_epochs,
                 train_cfg.svc.full_batch, client.rng_seed);
  for (double w : it.weights) {
    if (!std::isfinite(w)) throw NumericError("local SVC weights diverged");
  }

  start.weights = std::move(it.weights);
  start.bias = it.bias;
  update.params = std::move(start);
  update.local_validation_accuracy = accuracy_on(update.params, split.test);
  return update;
}

}  // namespace fedscreen
