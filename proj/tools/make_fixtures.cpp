// Writes the synthetic screening silos used when the public files are not
// available. Usage: make_fixtures <output-dir>
//
// Row counts follow the public releases. Responses come from a two-class
// latent model; the label is the thresholded response score (> 6 for the
// AQ-10 questionnaires, > 3 for Q-CHAT-10), so silos disagree on how a
// score maps to a label.

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fedscreen/rng.hpp"

namespace {

using fedscreen::Rng;

struct Profile {
  std::string file;
  int rows;
  int age_min;
  int age_max;
  std::string method;
  int label_threshold;
  double positive_rate;
  double yes_if_positive;
  double yes_if_negative;
  bool upper_case_label;
};

const std::array<const char*, 10> kEthnicities = {
    "White-European", "Asian", "Middle Eastern", "Black", "South Asian",
    "Others", "Latino", "Hispanic", "Pasifika", "Turkish"};
const std::array<const char*, 12> kCountries = {
    "United States", "United Kingdom", "India", "Jordan", "New Zealand", "Australia",
    "Canada", "Egypt", "Brazil", "Sri Lanka", "Afghanistan", "Austria"};

struct Record {
  std::array<int, 10> answers{};
  int age = 0;
  std::string gender;
  std::string ethnicity;
  std::string country;
  std::string method;
  bool positive = false;
};

std::string label_text(bool positive, bool upper) {
  if (upper) return positive ? "YES" : "NO";
  return positive ? "Yes" : "No";
}

std::string csv_row(const Record& r, bool upper_label, bool respell) {
  std::string line;
  for (int a : r.answers) line += std::to_string(a) + ",";
  line += std::to_string(r.age) + ",";
  // Re-exported copies differ in case and padding only.
  line += (respell ? " " + std::string(1, static_cast<char>(std::toupper(r.gender[0]))) : r.gender) + ",";
  line += r.ethnicity + ",";
  line += (respell ? r.country + " " : r.country) + ",";
  line += r.method + ",";
  line += label_text(r.positive, upper_label);
  return line;
}

Record draw(Rng& rng, const Profile& p) {
  Record r;
  const bool latent = rng.bernoulli(p.positive_rate);
  int score = 0;
  for (int& a : r.answers) {
    a = rng.bernoulli(latent ? p.yes_if_positive : p.yes_if_negative) ? 1 : 0;
    score += a;
  }
  r.positive = score > p.label_threshold;
  r.age = p.age_min + static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(p.age_max - p.age_min + 1)));
  r.gender = rng.bernoulli(0.6) ? "m" : "f";
  r.ethnicity = rng.bernoulli(0.035) ? "?"
                                     : kEthnicities[rng.uniform_below(kEthnicities.size())];
  r.country = kCountries[rng.uniform_below(kCountries.size())];
  r.method = p.method;
  return r;
}

// Draws `rows` lines; about 1.5% of them repeat an earlier line of the same
// file verbatim.
std::vector<Record> draw_file(Rng& rng, const Profile& p, int rows) {
  std::vector<Record> out;
  while (static_cast<int>(out.size()) < rows) {
    if (out.size() > 10 && rng.bernoulli(0.015)) {
      out.push_back(out[rng.uniform_below(out.size())]);
    } else {
      out.push_back(draw(rng, p));
    }
  }
  return out;
}

void write(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  out << "A1_Score,A2_Score,A3_Score,A4_Score,A5_Score,A6_Score,A7_Score,A8_Score,"
         "A9_Score,A10_Score,age,gender,ethnicity,contry_of_res,screening_method,Class/ASD\n";
  for (const std::string& line : lines) out << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <output-dir>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  Rng rng(20240917);

  const Profile children_uci{"children-uci.csv", 292, 4, 11, "AQ-10-Child", 6, 0.48, 0.8, 0.3, true};
  const Profile toddlers{"children-kaggle.csv", 1054, 1, 3, "Q-CHAT-10", 3, 0.69, 0.7, 0.2, false};
  const Profile adults_uci{"adults-uci.csv", 704, 18, 64, "AQ-10-Adult", 6, 0.27, 0.8, 0.35, true};
  const Profile adults_kaggle{"adults-kaggle.csv", 700, 18, 64, "AQ-10-Adult", 6, 0.3, 0.8, 0.35,
                              false};

  for (const Profile* p : {&children_uci, &toddlers}) {
    std::vector<std::string> lines;
    for (const Record& r : draw_file(rng, *p, p->rows)) {
      lines.push_back(csv_row(r, p->upper_case_label, false));
    }
    write(dir / p->file, lines);
  }

  std::vector<Record> adults = draw_file(rng, adults_uci, adults_uci.rows);
  adults[37].age = 383;  // a data-entry outlier kept on purpose
  std::vector<std::string> lines;
  for (const Record& r : adults) lines.push_back(csv_row(r, true, false));
  write(dir / adults_uci.file, lines);

  // The second adult release re-publishes part of the first one.
  constexpr int kShared = 130;
  lines.clear();
  std::vector<Record> fresh = draw_file(rng, adults_kaggle, adults_kaggle.rows - kShared);
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    lines.push_back(csv_row(fresh[i], false, false));
    if (i % 4 == 0 && static_cast<int>(i / 4) < kShared) {
      lines.push_back(csv_row(adults[(i / 4) * 5], false, (i / 4) % 2 == 0));
    }
  }
  write(dir / adults_kaggle.file, lines);
  return 0;
}
