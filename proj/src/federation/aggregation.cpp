#include <algorithm>
#include <cmath>

#include "fedscreen/federation.hpp"
#include "fedscreen/kernels.hpp"

namespace fedscreen {
namespace {

std::vector<const ClientUpdate*> sorted_by_client(std::span<const ClientUpdate> updates) {
  std::vector<const ClientUpdate*> sorted;
  sorted.reserve(updates.size());
  for (const ClientUpdate& u : updates) sorted.push_back(&u);
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) {
    return a->client_id < b->client_id;
  });
  return sorted;
}

}  // namespace

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::kFedAvg ? "fedavg" : "meta-vote";
}

std::optional<Aggregation> parse_aggregation(std::string_view text) {
  if (text == "fedavg") return Aggregation::kFedAvg;
  if (text == "meta-vote") return Aggregation::kMetaVote;
  return std::nullopt;
}

LinearSvcModel fedavg(std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw EmptyRoundError("fedavg received no updates");
  const auto sorted = sorted_by_client(updates);

  std::uint64_t total = 0;
  for (const ClientUpdate* u : sorted) {
    const auto* model = std::get_if<LinearSvcModel>(&u->params);
    if (model == nullptr) {
      throw FederationSchemaError("fedavg needs linear SVC updates, client " +
                                  std::string(to_string(u->client_id)) + " sent " +
                                  std::string(to_string(kind_of(u->params))));
    }
    const auto* first = std::get_if<LinearSvcModel>(&sorted.front()->params);
    if (model->arity() != first->arity()) {
      throw FederationSchemaError("fedavg arity mismatch: " + std::to_string(model->arity()) +
                                  " vs " + std::to_string(first->arity()));
    }
    if (model->feature_means != first->feature_means ||
        model->feature_scales != first->feature_scales) {
      throw FederationSchemaError("clients used different standardization statistics");
    }
    total += u->n_samples;
  }
  if (total == 0) throw EmptyRoundError("fedavg updates carry no samples");

  // Mean taken relative to the first update: identical inputs average to
  // themselves exactly.
  LinearSvcModel result = std::get<LinearSvcModel>(sorted.front()->params);
  const std::vector<double> reference = result.weights;
  const double reference_bias = result.bias;
  std::vector<double> delta(reference.size());
  double bias_shift = 0.0;
  for (const ClientUpdate* u : sorted) {
    const auto& model = std::get<LinearSvcModel>(u->params);
    const double share = static_cast<double>(u->n_samples) / static_cast<double>(total);
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = model.weights[j] - reference[j];
    kernels::axpy(share, delta, result.weights);
    bias_shift += share * (model.bias - reference_bias);
  }
  result.bias = reference_bias + bias_shift;
  return result;
}

Ensemble meta_aggregate(std::span<const ClientUpdate> updates, VoteWeighting weighting) {
  if (updates.empty()) throw EmptyRoundError("meta-vote received no updates");
  const auto sorted = sorted_by_client(updates);
  const ClassifierKind kind = kind_of(sorted.front()->params);
  const std::size_t arity = arity_of(sorted.front()->params);

  std::vector<double> raw;
  for (const ClientUpdate* u : sorted) {
    if (kind_of(u->params) != kind) {
      throw FederationSchemaError("meta-vote members must share one classifier kind");
    }
    if (arity_of(u->params) != arity) throw FederationSchemaError("meta-vote arity mismatch");
    raw.push_back(weighting == VoteWeighting::kSamples
                      ? static_cast<double>(u->n_samples)
                      : u->local_validation_accuracy);
  }
  double total = 0.0;
  for (double w : raw) total += w;
  if (!(total > 0.0)) {
    // Every member scored zero; fall back to equal votes.
    std::fill(raw.begin(), raw.end(), 1.0);
    total = static_cast<double>(raw.size());
  }

  Ensemble ensemble;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    // A zero-weight member never moves the vote.
    if (raw[k] > 0.0) ensemble.members.push_back({sorted[k]->params, raw[k] / total});
  }
  return ensemble;
}

std::uint8_t weighted_vote(std::span<const std::uint8_t> votes,
                           std::span<const double> weights, std::uint8_t tie_label) {
  if (votes.size() != weights.size()) throw ShapeError("votes and weights differ in length");
  double for_one = 0.0;
  double for_zero = 0.0;
  for (std::size_t k = 0; k < votes.size(); ++k) (votes[k] == 1 ? for_one : for_zero) += weights[k];
  if (std::abs(for_one - for_zero) <= 1e-12 * (for_one + for_zero)) return tie_label;
  return for_one > for_zero ? 1 : 0;
}

std::uint8_t GlobalModel::predict(std::span<const double> features) const {
  if (const auto* svc = std::get_if<LinearSvcModel>(&model_)) return svc_predict(*svc, features);
  const auto& ensemble = std::get<Ensemble>(model_);
  std::vector<std::uint8_t> votes;
  std::vector<double> weights;
  for (const EnsembleMember& m : ensemble.members) {
    votes.push_back(fedscreen::predict(m.params, features));
    weights.push_back(m.vote_weight);
  }
  return weighted_vote(votes, weights, ensemble.tie_label);
}

Json GlobalModel::to_json() const {
  if (const auto* svc = std::get_if<LinearSvcModel>(&model_)) {
    return {{"kind", "averaged"}, {"model", fedscreen::to_json(ModelParams(*svc))}};
  }
  const auto& ensemble = std::get<Ensemble>(model_);
  Json members = Json::array();
  for (const EnsembleMember& m : ensemble.members) {
    members.push_back({{"params", fedscreen::to_json(m.params)}, {"vote_weight", m.vote_weight}});
  }
  return {{"kind", "ensemble"}, {"members", members}, {"tie_label", ensemble.tie_label}};
}

GlobalModel GlobalModel::from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "averaged") {
      auto params = model_params_from_json(j.at("model"));
      if (!std::holds_alternative<LinearSvcModel>(params)) {
        throw ProtocolError(0, "averaged global model must be a linear SVC");
      }
      return GlobalModel(std::get<LinearSvcModel>(std::move(params)));
    }
    if (kind == "ensemble") {
      Ensemble ensemble;
      ensemble.tie_label = j.at("tie_label").get<std::uint8_t>();
      double total = 0.0;
      for (const Json& m : j.at("members")) {
        const double w = m.at("vote_weight").get<double>();
        if (!(w > 0.0)) throw ProtocolError(0, "vote weights must be positive");
        total += w;
        ensemble.members.push_back({model_params_from_json(m.at("params")), w});
      }
      if (ensemble.members.empty()) throw ProtocolError(0, "ensemble has no members");
      if (std::abs(total - 1.0) > 1e-12) throw ProtocolError(0, "vote weights must sum to 1");
      return GlobalModel(std::move(ensemble));
    }
    throw ProtocolError(0, "unknown global model kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw ProtocolError(0, std::string("malformed global model: ") + e.what());
  }
}

std::string GlobalModel::serialize() const { return canonical_dump(to_json()); }

Json RoundLogEntry::to_json() const {
  Json entries = Json::array();
  for (const ClientRoundEntry& c : clients) {
    entries.push_back({{"client_id", std::string(fedscreen::to_string(c.client_id))},
                       {"n_samples", c.n_samples},
                       {"validation_accuracy", c.validation_accuracy}});
  }
  Json j = {{"round", round}, {"clients", entries}};
  j["global_objective"] = global_objective ? Json(*global_objective) : Json(nullptr);
  return j;
}

std::string round_log_jsonl(std::span<const RoundLogEntry> log) {
  std::string out;
  for (const RoundLogEntry& entry : log) {
    out += canonical_dump(entry.to_json());
    out += '\n';
  }
  return out;
}

}  // namespace fedscreen
