#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "fedscreen/errors.hpp"
#include "fedscreen/federation.hpp"
#include "fedscreen/framing.hpp"
#include "fedscreen/wire.hpp"

namespace fedscreen {
namespace {

// Odd read size so frames straddle chunk boundaries on the loopback stream.
constexpr std::size_t kLoopbackChunk = 1021;

class Channel {
 public:
  Channel(Transport transport, const FederationObserver* observer)
      : transport_(transport), observer_(observer) {}

  // Carries one encoded message from sender to receiver.
  std::string deliver(std::string bytes) const {
    if (observer_ != nullptr && observer_->on_message) observer_->on_message(bytes);
    if (transport_ == Transport::kInProcess) return bytes;
    LoopbackStream stream;
    stream.write(frame_message(bytes));
    FrameDecoder decoder;
    std::optional<std::string> out;
    while (!out) {
      if (stream.empty()) throw ProtocolError(0, "stream ended inside a frame");
      decoder.feed(stream.read(kLoopbackChunk));
      out = decoder.next();
    }
    if (decoder.buffered() != 0 || !stream.empty()) {
      throw ProtocolError(bytes.size(), "trailing bytes after frame");
    }
    return std::move(*out);
  }

 private:
  Transport transport_;
  const FederationObserver* observer_;
};

template <typename Fn>
auto as_client(SourceId id, Fn fn) {
  try {
    return fn();
  } catch (const ClientError&) {
    throw;
  } catch (const std::exception& e) {
    throw ClientError(std::string(to_string(id)), e.what());
  }
}

}  // namespace

FederationResult run_federation(std::vector<ClientState> clients, const RoundConfig& cfg,
                                const FederationObserver* observer) {
  cfg.validate();
  if (clients.empty()) throw EmptyRoundError("federation needs at least one client");
  std::sort(clients.begin(), clients.end(),
            [](const ClientState& a, const ClientState& b) { return a.client_id < b.client_id; });
  for (std::size_t k = 1; k < clients.size(); ++k) {
    if (clients[k].client_id == clients[k - 1].client_id) {
      throw FederationSchemaError("duplicate client id " +
                                  std::string(to_string(clients[k].client_id)));
    }
  }
  const Channel channel(cfg.transport, observer);

  // Registration.
  std::vector<SufficientStats> stats;
  std::uint64_t total_samples = 0;
  for (const ClientState& client : clients) {
    const std::string sent =
        as_client(client.client_id, [&] { return encode_registration(register_client(client)); });
    const Registration reg = decode_registration(channel.deliver(sent));
    if (reg.client_id != client.client_id) {
      throw ProtocolError(0, "registration names the wrong client");
    }
    if (!stats.empty() && reg.stats.arity() != stats.front().arity()) {
      throw FederationSchemaError(
          "client " + std::string(to_string(reg.client_id)) + " has " +
          std::to_string(reg.stats.arity()) + " features, expected " +
          std::to_string(stats.front().arity()));
    }
    stats.push_back(reg.stats);
    total_samples += reg.n_samples;
  }
  const Standardization standardization = compute_global_standardization(stats);
  const std::size_t arity = standardization.means.size();

  const bool averaging = cfg.aggregation == Aggregation::kFedAvg;
  const double c = cfg.train.svc.c;

  // Sends the broadcast, runs every client concurrently and returns the
  // decoded updates in client order.
  auto run_round = [&](int round_index, const std::optional<ModelParams>& global,
                       int local_epochs) {
    const Broadcast broadcast{global, standardization, total_samples, local_epochs};
    const std::string message = encode_broadcast(broadcast, round_index);
    std::vector<std::future<std::string>> pending;
    for (const ClientState& client : clients) {
      const std::string received = channel.deliver(message);
      pending.push_back(std::async(std::launch::async, [&client, &cfg, received, round_index] {
        return as_client(client.client_id, [&] {
          const Broadcast b = decode_broadcast(received);
          const RoundContext ctx{round_index, b.local_epochs, b.standardization,
                                 b.total_samples};
          return encode_update(local_train_step(client, b.global, cfg, ctx), round_index);
        });
      }));
    }
    std::vector<std::string> sent;
    std::exception_ptr failure;
    for (auto& f : pending) {
      try {
        sent.push_back(f.get());
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<ClientUpdate> updates;
    for (std::size_t k = 0; k < clients.size(); ++k) {
      ClientUpdate u = decode_update(channel.deliver(sent[k]));
      if (u.client_id != clients[k].client_id) {
        throw ProtocolError(0, "update names the wrong client");
      }
      updates.push_back(std::move(u));
    }
    return updates;
  };

  auto pooled_objective = [&](std::span<const ClientUpdate> updates,
                              const LinearSvcModel& model) {
    double hinge = 0.0;
    for (const ClientUpdate& u : updates) {
      if (!u.received_hinge_sum) throw ProtocolError(0, "update lacks the received hinge sum");
      hinge += *u.received_hinge_sum;
    }
    return svc_objective_from_hinge(model.weights, c, hinge);
  };

  std::vector<RoundLogEntry> log;
  const int rounds = cfg.effective_rounds();

  if (!averaging) {
    std::vector<ClientUpdate> updates = run_round(0, std::nullopt, cfg.local_epochs_per_round);
    if (observer != nullptr && observer->on_round) observer->on_round(1, updates);
    RoundLogEntry entry{1, {}, std::nullopt};
    for (const ClientUpdate& u : updates) {
      entry.clients.push_back({u.client_id, u.n_samples, u.local_validation_accuracy});
    }
    log.push_back(std::move(entry));
    GlobalModel model(meta_aggregate(updates, cfg.vote_weighting));
    channel.deliver(encode_complete(model, rounds));
    return {std::move(model), std::move(log)};
  }

  LinearSvcModel current{std::vector<double>(arity, 0.0), 0.0, c, standardization.means,
                         standardization.scales};
  std::optional<ModelParams> broadcast_global;  // absent in round 0: clients start at zero
  LinearSvcModel best = current;
  std::optional<double> best_objective;

  auto consider = [&](double objective, const LinearSvcModel& candidate) {
    if (!std::isfinite(objective)) throw NumericError("federated objective diverged");
    if (!best_objective || objective < *best_objective) {
      best_objective = objective;
      best = candidate;
    }
  };

  for (int r = 0; r < rounds; ++r) {
    std::vector<ClientUpdate> updates = run_round(r, broadcast_global, cfg.local_epochs_per_round);
    if (observer != nullptr && observer->on_round) observer->on_round(r + 1, updates);
    const double objective = pooled_objective(updates, current);
    consider(objective, current);
    if (r > 0) log.back().global_objective = objective;

    RoundLogEntry entry{r + 1, {}, std::nullopt};
    for (const ClientUpdate& u : updates) {
      entry.clients.push_back({u.client_id, u.n_samples, u.local_validation_accuracy});
    }
    log.push_back(std::move(entry));

    current = fedavg(updates);
    broadcast_global = current;
  }

  // Evaluation pass: zero local epochs, only the hinge sums of the last
  // aggregate come back.
  const std::vector<ClientUpdate> final_updates = run_round(rounds, broadcast_global, 0);
  const double final_objective = pooled_objective(final_updates, current);
  consider(final_objective, current);
  log.back().global_objective = final_objective;

  GlobalModel model(std::move(best));
  channel.deliver(encode_complete(model, rounds));
  return {std::move(model), std::move(log)};
}

}  // namespace fedscreen
