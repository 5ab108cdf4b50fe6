#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "fedscreen/canonical_json.hpp"
#include "fedscreen/forest.hpp"
#include "fedscreen/svc.hpp"
#include "fedscreen/tree.hpp"

namespace fedscreen {

using ModelParams = std::variant<LinearSvcModel, TreeModel, ForestModel>;

ClassifierKind kind_of(const ModelParams& params);
std::size_t arity_of(const ModelParams& params);

std::uint8_t predict(const ModelParams& params, std::span<const double> features);

// Trains the classifier named by cfg.kind. The standardization, when given,
// is used by the SVC and ignored by tree models.
ModelParams train_model(const LabeledMatrix& train, const TrainConfig& cfg,
                        const std::optional<Standardization>& standardization = std::nullopt);

Json to_json(const ModelParams& params);
// Throws ProtocolError(0, ...) on a malformed document.
ModelParams model_params_from_json(const Json& j);

// canonical_dump(to_json(params)).
std::string serialize(const ModelParams& params);

}  // namespace fedscreen
