#pragma once

// Horizontal federated learning over silos that share one feature schema.
// Clients keep their rows; only sufficient statistics, model parameters and
// scalar summaries cross the wire (see wire.hpp).
//
// Two aggregation modes:
//  * fedavg    - sample-weighted parameter averaging of linear SVC models,
//                repeated over rounds;
//  * meta-vote - each client trains once, the coordinator keeps the local
//                models as a weighted-majority ensemble.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fedscreen/dataset.hpp"
#include "fedscreen/model_params.hpp"
#include "fedscreen/split.hpp"

namespace fedscreen {

inline constexpr double kLocalValidationFraction = 0.2;

struct ClientState {
  SourceId client_id;
  LabeledMatrix local_data;
  std::optional<ModelParams> current_global;
  std::uint64_t rng_seed = 0;
};

// Deterministic stratified 80/20 split of the client's rows into local
// training and validation parts, seeded by rng_seed.
MatrixSplit local_split(const ClientState& client);

struct ClientUpdate {
  SourceId client_id;
  ModelParams params;
  std::uint64_t n_samples = 0;  // local training rows
  double local_validation_accuracy = 0.0;
  // fedavg only: sum of hinge losses of the received global model over the
  // local training rows, used by the coordinator to track the objective.
  std::optional<double> received_hinge_sum;

  bool operator==(const ClientUpdate&) const = default;
};

enum class Aggregation { kFedAvg, kMetaVote };
enum class VoteWeighting { kSamples, kValidationAccuracy };
enum class Transport { kInProcess, kLoopbackStream };

std::string_view to_string(Aggregation aggregation);
std::optional<Aggregation> parse_aggregation(std::string_view text);

struct RoundConfig {
  ClassifierKind classifier_kind = ClassifierKind::kSvc;
  Aggregation aggregation = Aggregation::kFedAvg;
  int n_rounds = 10;
  int local_epochs_per_round = 20;
  std::uint64_t seed = 0;
  VoteWeighting vote_weighting = VoteWeighting::kSamples;
  // Test hook: one full-batch subgradient step per local epoch.
  bool full_batch = false;
  Transport transport = Transport::kInProcess;
  // Classifier hyperparameters (kind and seed are taken from this struct's
  // own fields).
  TrainConfig train;

  // Throws ConfigError. fedavg requires the SVC; rounds must be positive;
  // local epochs non-negative.
  void validate() const;
  // meta-vote trains local models once, so it always runs a single round.
  int effective_rounds() const;
  TrainConfig train_config() const;
};

// Per-client summary sent at registration.
struct Registration {
  SourceId client_id;
  std::uint64_t n_samples = 0;
  SufficientStats stats;

  bool operator==(const Registration&) const = default;
};

Registration register_client(const ClientState& client);

// Pooled mean and standard deviation from per-client statistics. Throws
// FederationSchemaError when arities differ.
Standardization compute_global_standardization(std::span<const SufficientStats> clients);

// What a client needs to know about the round besides the global model.
struct RoundContext {
  int round_index = 0;  // 0-based
  int local_epochs = 0;
  Standardization standardization;
  std::uint64_t total_samples = 0;
};

// fedavg: start from the received global (zeros when absent) and run
// ctx.local_epochs SVC epochs with the step counter continuing from
// round_index * local_epochs epochs. meta-vote: train the configured
// classifier to completion on the local training split.
ClientUpdate local_train_step(const ClientState& client,
                              const std::optional<ModelParams>& global,
                              const RoundConfig& cfg, const RoundContext& ctx);

// Sample-weighted mean of the client weights and biases. Updates are
// ordered by client id first, so the result does not depend on arrival
// order. Throws EmptyRoundError / FederationSchemaError.
LinearSvcModel fedavg(std::span<const ClientUpdate> updates);

struct EnsembleMember {
  ModelParams params;
  double vote_weight = 0.0;

  bool operator==(const EnsembleMember&) const = default;
};

struct Ensemble {
  std::vector<EnsembleMember> members;
  std::uint8_t tie_label = 1;

  bool operator==(const Ensemble&) const = default;
};

// Vote weights proportional to n_samples or validation accuracy, normalized
// to sum to 1; equal weights when every accuracy is zero. Members whose
// weight is zero are left out.
Ensemble meta_aggregate(std::span<const ClientUpdate> updates,
                        VoteWeighting weighting = VoteWeighting::kSamples);

// Weighted majority: 1 iff weight of "1" votes >= weight of "0" votes
// (ties within a relative 1e-12 go to tie_label).
std::uint8_t weighted_vote(std::span<const std::uint8_t> votes,
                           std::span<const double> weights, std::uint8_t tie_label = 1);

class GlobalModel {
 public:
  using Variant = std::variant<LinearSvcModel, Ensemble>;

  explicit GlobalModel(Variant model) : model_(std::move(model)) {}

  const Variant& variant() const noexcept { return model_; }
  bool is_averaged() const noexcept { return model_.index() == 0; }

  std::uint8_t predict(std::span<const double> features) const;

  Json to_json() const;
  static GlobalModel from_json(const Json& j);
  std::string serialize() const;

  bool operator==(const GlobalModel&) const = default;

 private:
  Variant model_;
};

struct ClientRoundEntry {
  SourceId client_id;
  std::uint64_t n_samples = 0;
  double validation_accuracy = 0.0;

  bool operator==(const ClientRoundEntry&) const = default;
};

struct RoundLogEntry {
  int round = 0;  // 1-based
  std::vector<ClientRoundEntry> clients;
  std::optional<double> global_objective;

  Json to_json() const;
  bool operator==(const RoundLogEntry&) const = default;
};

// One canonical JSON object per line.
std::string round_log_jsonl(std::span<const RoundLogEntry> log);

struct FederationObserver {
  // Called with the decoded updates of each training round, sorted by
  // client id.
  std::function<void(int round, std::span<const ClientUpdate>)> on_round;
  // Called with every encoded envelope that crosses the transport.
  std::function<void(std::string_view bytes)> on_message;
};

struct FederationResult {
  GlobalModel model;
  std::vector<RoundLogEntry> log;
};

// Runs registration, effective_rounds() rounds of broadcast / local step /
// aggregate, and (fedavg) a final objective evaluation. For fedavg the
// returned model is the aggregate with the lowest pooled objective among
// the initial model and the end of every round. Any client failure aborts
// with a ClientError naming the client.
FederationResult run_federation(std::vector<ClientState> clients, const RoundConfig& cfg,
                                const FederationObserver* observer = nullptr);

}  // namespace fedscreen
