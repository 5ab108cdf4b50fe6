// Acceptance run: one PASS/FAIL line per criterion, with wall time.

#include <bitset>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "fedscreen/cli.hpp"
#include "fedscreen/dataset.hpp"
#include "fedscreen/evaluation.hpp"
#include "fedscreen/federation.hpp"
#include "fedscreen/svc.hpp"
#include "fedscreen/tree.hpp"
#include "fedscreen/wire.hpp"
#include "oracles/oracles.hpp"
#include "support/generators.hpp"
#include "support/golden.hpp"

using namespace fedscreen;
namespace fs = std::filesystem;

namespace {

struct Failure {
  std::string detail;
};

void require(bool ok, const std::string& detail) {
  if (!ok) throw Failure{detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int failures = 0;

void criterion(const std::string& name, double budget_seconds, const std::function<std::string()>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string note, error;
  try {
    note = body();
  } catch (const Failure& f) {
    error = f.detail;
  } catch (const std::exception& e) {
    error = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (error.empty() && seconds > budget_seconds) {
    error = "took " + std::to_string(seconds) + " s, budget " + std::to_string(budget_seconds) + " s";
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(3);
  line << (error.empty() ? "PASS " : "FAIL ") << name << " (" << seconds << " s)";
  if (!error.empty()) line << ": " << error;
  if (error.empty() && !note.empty()) line << ": " << note;
  std::cout << line.str() << std::endl;
  failures += !error.empty();
}

// ---- criteria --------------------------------------------------------------

std::string qchat_exhaustive() {
  for (unsigned v = 0; v < 1024; ++v) {
    const std::bitset<kResponseCount> bits(v);
    int sum = 0;
    for (std::size_t k = 0; k < kResponseCount; ++k) sum += (v >> k) & 1u;
    const QchatScore s = qchat_score(bits);
    require(s.score == sum && s.flag == (sum > 3 ? 1 : 0), "vector " + std::to_string(v));
  }
  return "1024 vectors";
}

std::string svc_gradient_check() {
  Rng rng(1001);
  int checked = 0;
  while (checked < 150) {
    const std::size_t n = 3 + rng.uniform_below(12), d = 1 + rng.uniform_below(5);
    const LabeledMatrix m = testgen::random_matrix(rng, n, d);
    LinearSvcModel model;
    for (std::size_t j = 0; j < d; ++j) {
      model.weights.push_back(testgen::gaussian(rng));
      model.feature_means.push_back(testgen::gaussian(rng));
      model.feature_scales.push_back(0.5 + rng.uniform01());
    }
    model.bias = testgen::gaussian(rng);
    model.regularization_c = 0.1 + 2 * rng.uniform01();
    bool near_kink = false;
    for (std::size_t i = 0; i < n; ++i) {
      near_kink |= std::abs((m.label(i) ? 1.0 : -1.0) * svc_margin(model, m.row(i)) - 1.0) < 1e-3;
    }
    if (near_kink) continue;
    const auto x = testgen::rows_of(m);
    const auto y = testgen::labels_of(m);
    std::vector<double> p = model.weights;
    p.push_back(model.bias);
    const auto objective = [&](const std::vector<double>& q) {
      return oracle::hinge_objective(x, y, {q.begin(), q.end() - 1}, q.back(), model.regularization_c,
                                     model.feature_means, model.feature_scales);
    };
    const auto numeric = oracle::central_differences(objective, p, 1e-6);
    const SvcGradient g = svc_subgradient(model, m);
    for (std::size_t j = 0; j <= d; ++j) {
      const double analytic = j < d ? g.weights[j] : g.bias;
      require(std::abs(analytic - numeric[j]) <= 1e-5,
              "instance " + std::to_string(checked) + " coordinate " + std::to_string(j));
    }
    ++checked;
  }
  return std::to_string(checked) + " instances";
}

std::string tree_oracle() {
  Rng rng(1002);
  int datasets = 0;
  for (; datasets < 400; ++datasets) {
    const std::size_t n = 1 + rng.uniform_below(12), d = 1 + rng.uniform_below(3);
    const LabeledMatrix m = datasets % 2 ? testgen::random_grid_matrix(rng, n, d, 2 + rng.uniform_below(4))
                                         : testgen::random_grid_matrix(rng, n, d, 1000);
    TrainConfig cfg;
    cfg.kind = ClassifierKind::kDecisionTree;
    cfg.tree.max_depth = static_cast<int>(rng.uniform_below(3));
    cfg.tree.min_samples_leaf = 1 + static_cast<int>(rng.uniform_below(2));
    const TreeModel t = tree_train(m, cfg);
    const auto x = testgen::rows_of(m);
    const auto y = testgen::labels_of(m);
    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    const auto ref = oracle::grow_oracle_tree(x, y, rows, 0, cfg.tree.max_depth,
                                              static_cast<std::size_t>(cfg.tree.min_samples_leaf));
    for (std::size_t i = 0; i < n; ++i) {
      require(tree_predict(t, m.row(i)) == oracle::oracle_predict(ref, x[i]),
              "dataset " + std::to_string(datasets) + " row " + std::to_string(i));
    }
  }
  return std::to_string(datasets) + " datasets";
}

std::string federation_identities() {
  Rng rng(1003);
  // (a) one client equals centralized training, bit for bit.
  for (int trial = 0; trial < 5; ++trial) {
    const ClientState client{SourceId::kAdultsUci, testgen::linear_matrix(rng, 80, 5, 1.0), std::nullopt,
                             static_cast<std::uint64_t>(trial)};
    RoundConfig cfg;
    cfg.n_rounds = 2 + trial;
    cfg.local_epochs_per_round = 3;
    cfg.seed = client.rng_seed;
    const FederationResult fed = run_federation({client}, cfg);
    TrainConfig central = cfg.train_config();
    central.svc.epochs = cfg.n_rounds * cfg.local_epochs_per_round;
    central.svc.checkpoint_interval = cfg.local_epochs_per_round;
    const LinearSvcModel expected = svc_train(local_split(client).train, central);
    require(fed.model.serialize() == GlobalModel(expected).serialize(), "(a) trial " + std::to_string(trial));
  }
  // (b) one full-batch step over equal shards equals the centralized step.
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<ClientState> clients;
    for (SourceId id : kAllSources) clients.push_back({id, testgen::linear_matrix(rng, 60, 4, 1.0), std::nullopt, 3});
    std::vector<SufficientStats> stats;
    LabeledMatrix pooled(4);
    std::uint64_t total = 0;
    for (const auto& c : clients) {
      const Registration r = register_client(c);
      stats.push_back(r.stats);
      total += r.n_samples;
      pooled.append(local_split(c).train);
    }
    const Standardization s = compute_global_standardization(stats);
    RoundConfig cfg;
    cfg.n_rounds = 1;
    cfg.local_epochs_per_round = 1;
    cfg.full_batch = true;
    std::vector<ClientUpdate> updates;
    for (const auto& c : clients) updates.push_back(local_train_step(c, std::nullopt, cfg, {0, 1, s, total}));
    const LinearSvcModel averaged = fedavg(updates);
    SvcIterate it{std::vector<double>(4, 0.0)};
    svc_run_epochs(it, standardize_rows(pooled, s), svc_lambda(cfg.train.svc.c, total), 1, true, 0);
    for (std::size_t j = 0; j < 4; ++j) require(std::abs(averaged.weights[j] - it.weights[j]) <= 1e-9, "(b) weight");
    require(std::abs(averaged.bias - it.bias) <= 1e-9, "(b) bias");
  }
  // (c) client order does not matter, bit for bit.
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<ClientState> clients;
    for (SourceId id : kAllSources) clients.push_back({id, testgen::linear_matrix(rng, 50, 3, 1.0), std::nullopt, 9});
    RoundConfig cfg;
    cfg.n_rounds = 3;
    cfg.local_epochs_per_round = 2;
    const std::string reference = run_federation(clients, cfg).model.serialize();
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      rng.shuffle(std::span<ClientState>(clients));
      require(run_federation(clients, cfg).model.serialize() == reference, "(c) run order");
    }
    std::vector<ClientUpdate> updates;
    for (SourceId id : kAllSources) {
      std::vector<double> w(3);
      for (double& v : w) v = testgen::awkward_double(rng);
      updates.push_back({id, LinearSvcModel{w, testgen::gaussian(rng), 1.0, {0, 0, 0}, {1, 1, 1}},
                         1 + rng.uniform_below(500), 0.5, std::nullopt});
    }
    const LinearSvcModel avg = fedavg(updates);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      rng.shuffle(std::span<ClientUpdate>(updates));
      require(fedavg(updates) == avg, "(c) update order");
    }
  }
  return "(a) (b) (c)";
}

std::string metrics_oracle() {
  Rng rng(1004);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.uniform_below(100);
    std::vector<std::uint8_t> p(n), t(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<std::uint8_t>(rng.uniform_below(2));
      t[i] = static_cast<std::uint8_t>(rng.uniform_below(2));
    }
    const oracle::Counts c = oracle::count_confusion(p, t);
    const MetricsReport r = metrics(confusion(p, t));
    const double precision = c.tp + c.fp ? double(c.tp) / double(c.tp + c.fp) : 0.0;
    const double recall = c.tp + c.fn ? double(c.tp) / double(c.tp + c.fn) : 0.0;
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    require(r.accuracy == oracle::agreement_rate(p, t), "accuracy, pair " + std::to_string(trial));
    require(r.precision == precision, "precision, pair " + std::to_string(trial));
    require(r.recall == recall, "recall, pair " + std::to_string(trial));
    require(r.f1_positive == f1, "f1, pair " + std::to_string(trial));
  }
  return "1000 pairs";
}

// Public files, when present, live in FEDSCREEN_PUBLIC_DIR under the same
// names as the fixtures.
std::pair<fs::path, bool> input_dir() {
  if (const char* env = std::getenv("FEDSCREEN_PUBLIC_DIR")) {
    bool all = true;
    for (SourceId id : kAllSources) all &= fs::exists(fs::path(env) / (std::string(to_string(id)) + ".csv"));
    if (all) return {env, true};
  }
  return {FEDSCREEN_FIXTURE_DIR, false};
}

int run_pipeline(const fs::path& out_dir) {
  const fs::path inputs = input_dir().first;
  std::vector<std::string> ingest{"ingest", "--out-dir", out_dir.string()};
  for (SourceId id : kAllSources) {
    ingest.push_back("--" + std::string(to_string(id)));
    ingest.push_back((inputs / (std::string(to_string(id)) + ".csv")).string());
  }
  std::ostringstream sink;
  for (const auto& args : {ingest, std::vector<std::string>{"federate", "--out-dir", out_dir.string()},
                           std::vector<std::string>{"report", "--out-dir", out_dir.string()}}) {
    const int code = run_cli(args, sink, sink);
    if (code != kExitOk) {
      std::cerr << sink.str();
      return code;
    }
  }
  return kExitOk;
}

std::string directional() {
  const auto [inputs, is_public] = input_dir();
  const fs::path dir = testgen::scratch_dir("acceptance-direction");
  require(run_pipeline(dir) == kExitOk, "pipeline failed");
  const auto reports = parse_reports_json(slurp(dir / "report.json"));
  std::map<ClassifierKind, double> worst_raw, best_federated;
  for (const MetricsReport& r : reports) {
    if (r.condition == Condition::kRawSingleSite) {
      auto [it, fresh] = worst_raw.emplace(r.classifier_kind, r.accuracy);
      if (!fresh) it->second = std::min(it->second, r.accuracy);
    } else if (r.condition == Condition::kFedAvg || r.condition == Condition::kMetaVote) {
      auto [it, fresh] = best_federated.emplace(r.classifier_kind, r.accuracy);
      if (!fresh) it->second = std::max(it->second, r.accuracy);
    }
  }
  std::ostringstream note;
  note.precision(3);
  note << (is_public ? "public files" : "synthetic fixtures (public files not present)");
  for (ClassifierKind kind : {ClassifierKind::kDecisionTree, ClassifierKind::kRandomForest, ClassifierKind::kSvc}) {
    require(worst_raw.count(kind) && best_federated.count(kind), "missing cells for " + classifier_label(kind));
    const double gap = best_federated[kind] - worst_raw[kind];
    note << "; " << classifier_label(kind) << " " << best_federated[kind] << " vs " << worst_raw[kind];
    require(gap >= 0.05, classifier_label(kind) + " federated lead " + std::to_string(gap) + " < 0.05");
  }
  require(best_federated[ClassifierKind::kSvc] >= 0.90, "SVC federated accuracy below 0.90");
  return note.str();
}

std::string determinism() {
  const fs::path a = testgen::scratch_dir("acceptance-det-a");
  const fs::path b = testgen::scratch_dir("acceptance-det-b");
  require(run_pipeline(a) == kExitOk && run_pipeline(b) == kExitOk, "pipeline failed");
  for (const char* file : {"model.json", "round_log.jsonl", "report.json"}) {
    const std::string x = slurp(a / file);
    require(!x.empty() && x == slurp(b / file), std::string(file) + " differs");
  }
  return "model.json, round_log.jsonl, report.json identical";
}

std::string wire_round_trip() {
  Rng rng(1005);
  for (int trial = 0; trial < 1000; ++trial) {
    const ClientUpdate u = testgen::random_update(rng);
    require(decode_update(encode_update(u, trial)) == u, "update " + std::to_string(trial));
  }
  const std::string golden = slurp(FEDSCREEN_TEST_DATA_DIR "/golden_update.json");
  require(!golden.empty(), "golden fixture missing");
  require(decode_update(golden) == testgen::golden_update(), "golden fixture decodes differently");
  return "1000 updates + golden fixture";
}

}  // namespace

int main() {
  criterion("Q-CHAT exhaustive oracle", 1, qchat_exhaustive);
  criterion("SVC gradient check", 10, svc_gradient_check);
  criterion("Tree oracle", 30, tree_oracle);
  criterion("Federation identities", 10, federation_identities);
  criterion("Metrics oracle", 5, metrics_oracle);
  criterion("Directional reproduction", 300, directional);
  criterion("Determinism", 600, determinism);
  criterion("Wire round-trip", 60, wire_round_trip);
  return failures == 0 ? 0 : 1;
}
