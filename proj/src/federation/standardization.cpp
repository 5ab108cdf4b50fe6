#include "fedscreen/federation.hpp"

namespace fedscreen {

MatrixSplit local_split(const ClientState& client) {
  return stratified_split(client.local_data, kLocalValidationFraction, client.rng_seed);
}

Registration register_client(const ClientState& client) {
  const MatrixSplit split = local_split(client);
  return {client.client_id, split.train.rows(), SufficientStats::of(split.train)};
}

Standardization compute_global_standardization(std::span<const SufficientStats> clients) {
  if (clients.empty()) throw EmptyRoundError("no clients to pool statistics from");
  SufficientStats pooled(clients.front().arity());
  for (const SufficientStats& s : clients) {
    if (s.arity() != pooled.arity()) {
      throw FederationSchemaError("clients disagree on feature arity: " +
                                  std::to_string(s.arity()) + " vs " +
                                  std::to_string(pooled.arity()));
    }
    if (s.count() == 0) throw FederationSchemaError("a client reported no samples");
    pooled.merge(s);
  }
  return pooled.finalize();
}

}  // namespace fedscreen
