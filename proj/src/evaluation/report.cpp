#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fedscreen/errors.hpp"
#include "fedscreen/evaluation.hpp"

namespace fedscreen {
namespace {

constexpr int kClassifierWidth = 12;
constexpr int kMetricWidth = 6;

void pad(std::string& out, std::string_view text, std::size_t width) {
  out += text;
  if (text.size() < width) out.append(width - text.size(), ' ');
}

std::string percent_text(double fraction) { return std::to_string(percent(fraction)) + "%"; }

void trim_right(std::string& line) {
  while (!line.empty() && line.back() == ' ') line.pop_back();
}

MetricsReport pinned(const char* method, ClassifierKind kind, Condition condition,
                     const char* site, int pr, int r, int fs, int acc) {
  MetricsReport m;
  m.precision = pr / 100.0;
  m.recall = r / 100.0;
  m.f1_weighted = fs / 100.0;
  m.f1_positive = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  m.accuracy = acc / 100.0;
  m.condition = condition;
  m.classifier_kind = kind;
  m.method = method;
  m.site = site;
  m.evaluated_on = "unstated";
  return m;
}

}  // namespace

int percent(double fraction) { return static_cast<int>(std::floor(fraction * 100.0 + 0.5)); }

std::string classifier_label(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kSvc:
      return "SVC";
    case ClassifierKind::kDecisionTree:
      return "DT";
    case ClassifierKind::kRandomForest:
      return "RF";
  }
  return "?";
}

std::string render_table(std::span<const MetricsReport> reports) {
  std::size_t method_width = std::string_view("Method").size();
  for (const MetricsReport& r : reports) method_width = std::max(method_width, r.method.size());
  method_width += 2;

  std::string out;
  auto emit_row = [&](std::string_view method, std::string_view classifier,
                      std::initializer_list<std::string> cells) {
    std::string line;
    pad(line, method, method_width);
    pad(line, classifier, kClassifierWidth);
    for (const std::string& cell : cells) pad(line, cell, kMetricWidth);
    trim_right(line);
    out += line;
    out += '\n';
  };

  emit_row("Method", "Classifier", {"PR", "R", "Fs", "Acc"});
  const std::string* previous = nullptr;
  for (const MetricsReport& r : reports) {
    const bool first_of_group = previous == nullptr || *previous != r.method;
    emit_row(first_of_group ? std::string_view(r.method) : std::string_view(),
             classifier_label(r.classifier_kind),
             {percent_text(r.precision), percent_text(r.recall), percent_text(r.f1_weighted),
              percent_text(r.accuracy)});
    previous = &r.method;
  }
  return out;
}

Json to_json(const MetricsReport& r) {
  return {{"accuracy", r.accuracy},
          {"precision", r.precision},
          {"recall", r.recall},
          {"f1_positive", r.f1_positive},
          {"f1_weighted", r.f1_weighted},
          {"precision_undefined", r.precision_undefined},
          {"recall_undefined", r.recall_undefined},
          {"f1_undefined", r.f1_undefined},
          {"n", r.n},
          {"condition", std::string(to_string(r.condition))},
          {"classifier_kind", std::string(to_string(r.classifier_kind))},
          {"method", r.method},
          {"site", r.site},
          {"evaluated_on", r.evaluated_on}};
}

MetricsReport metrics_report_from_json(const Json& j) {
  MetricsReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f1_positive = j.at("f1_positive").get<double>();
  r.f1_weighted = j.at("f1_weighted").get<double>();
  r.precision_undefined = j.at("precision_undefined").get<bool>();
  r.recall_undefined = j.at("recall_undefined").get<bool>();
  r.f1_undefined = j.at("f1_undefined").get<bool>();
  r.n = j.at("n").get<std::uint64_t>();
  const auto condition = parse_condition(j.at("condition").get<std::string>());
  if (!condition) throw ProtocolError(0, "unknown condition");
  r.condition = *condition;
  const auto kind = parse_classifier_kind(j.at("classifier_kind").get<std::string>());
  if (!kind) throw ProtocolError(0, "unknown classifier kind");
  r.classifier_kind = *kind;
  r.method = j.at("method").get<std::string>();
  r.site = j.at("site").get<std::string>();
  r.evaluated_on = j.at("evaluated_on").get<std::string>();
  for (double v : {r.accuracy, r.precision, r.recall, r.f1_positive, r.f1_weighted}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ProtocolError(0, "metric outside [0, 1]");
  }
  return r;
}

std::string render_json(std::span<const MetricsReport> reports) {
  Json list = Json::array();
  for (const MetricsReport& r : reports) list.push_back(to_json(r));
  return canonical_dump({{"reports", list}});
}

std::vector<MetricsReport> parse_reports_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ProtocolError(e.byte, "malformed report JSON");
  }
  std::vector<MetricsReport> reports;
  try {
    for (const Json& r : j.at("reports")) reports.push_back(metrics_report_from_json(r));
  } catch (const Json::exception& e) {
    throw ProtocolError(0, std::string("malformed report: ") + e.what());
  }
  return reports;
}

std::vector<MetricsReport> reference_table_reports() {
  constexpr auto kRaw = Condition::kRawSingleSite;
  constexpr auto kFed = Condition::kMetaVote;
  const char* raw = "Raw Data (Adults)";
  const char* fed = "Federated learning";
  return {
      pinned(raw, ClassifierKind::kDecisionTree, kRaw, "adults", 85, 15, 75, 62),
      pinned(raw, ClassifierKind::kRandomForest, kRaw, "adults", 83, 49, 81, 53),
      pinned(raw, ClassifierKind::kSvc, kRaw, "adults", 86, 52, 82, 63),
      pinned(fed, ClassifierKind::kDecisionTree, kFed, "all", 95, 94, 95, 94),
      pinned(fed, ClassifierKind::kRandomForest, kFed, "all", 95, 94, 95, 94),
      pinned(fed, ClassifierKind::kSvc, kFed, "all", 99, 99, 99, 99),
  };
}

}  // namespace fedscreen
