#include "wordbias/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "wordbias/analogy.hpp"
#include "wordbias/errors.hpp"

namespace wordbias {

namespace {

/// Average ranks, 1-based; tied values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw DataError("spearman: a score column has zero variance");
  }
  return sxy / std::sqrt(sxx * syy);
}

nlohmann::ordered_json extremes_json(const ExtremesReport& extremes) {
  nlohmann::ordered_json j;
  j["direction"] = extremes.direction_label;
  auto side = [](const std::vector<std::pair<std::string, double>>& entries) {
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const auto& [token, projection] : entries) {
      list.push_back({{"token", token}, {"projection", projection}});
    }
    return list;
  };
  j["top_positive"] = side(extremes.top_positive);
  j["top_negative"] = side(extremes.top_negative);
  return j;
}

nlohmann::ordered_json observation1_json(const Observation1Report& obs) {
  return {{"max_inner_product_gap", obs.max_inner_product_gap},
          {"max_distance_gap", obs.max_distance_gap},
          {"pass", obs.pass}};
}

}  // namespace

SimilarityDataset load_similarity_dataset(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open similarity dataset: " + path);
  SimilarityDataset ds{name, {}};
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    SimilarityTriple t;
    std::string score_text;
    if (!std::getline(ls, t.a, '\t') || !std::getline(ls, t.b, '\t') ||
        !std::getline(ls, score_text)) {
      throw DataError(path + ": line " + std::to_string(line_no) +
                      ": expected token<TAB>token<TAB>score");
    }
    try {
      std::size_t consumed = 0;
      t.human_score = std::stod(score_text, &consumed);
      if (consumed != score_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": malformed score '" +
                      score_text + "'");
    }
    ds.triples.push_back(std::move(t));
  }
  if (ds.triples.empty()) throw DataError(path + ": empty similarity dataset");
  return ds;
}

AnalogyDataset load_analogy_dataset(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open analogy dataset: " + path);
  AnalogyDataset ds{name, {}};
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == ':') continue;  // section header
    std::istringstream ls(line);
    AnalogyQuad q;
    std::string extra;
    if (!(ls >> q.a >> q.b >> q.x >> q.y_expected) || (ls >> extra)) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": expected 'a b x y'");
    }
    ds.quads.push_back(std::move(q));
  }
  if (ds.quads.empty()) throw DataError(path + ": empty analogy dataset");
  return ds;
}

BenchmarkScore spearman_similarity(const Embedding& emb, const SimilarityDataset& ds) {
  if (ds.triples.empty()) throw DataError("spearman: empty dataset");
  std::vector<double> ours, humans;
  BenchmarkScore score;
  for (const auto& t : ds.triples) {
    const auto ia = emb.index_of(t.a);
    const auto ib = emb.index_of(t.b);
    if (!ia || !ib) {
      ++score.skipped_oov;
      continue;
    }
    ours.push_back(cosine(emb.matrix().row(*ia).transpose(), emb.matrix().row(*ib).transpose()));
    humans.push_back(t.human_score);
  }
  score.used = static_cast<int>(ours.size());
  if (score.used < 3) throw DataError("spearman: fewer than 3 usable pairs");
  score.value = 100.0 * pearson(average_ranks(ours), average_ranks(humans));
  return score;
}

BenchmarkScore analogy_accuracy(const Embedding& emb, const AnalogyDataset& ds) {
  if (ds.quads.empty()) throw DataError("analogy accuracy: empty dataset");
  BenchmarkScore score;
  long long correct = 0;
  for (const auto& q : ds.quads) {
    if (!emb.contains(q.a) || !emb.contains(q.b) || !emb.contains(q.x) ||
        !emb.contains(q.y_expected)) {
      ++score.skipped_oov;
      continue;
    }
    ++score.used;
    if (solve_cosadd(emb, q.a, q.b, q.x) == q.y_expected) ++correct;
  }
  if (score.used == 0) throw DataError("analogy accuracy: every quad has an OOV token");
  score.value = static_cast<double>(correct) / score.used;
  return score;
}

BiasReport before_after_report(const Embedding& original, const Embedding& debiased,
                               const BiasSubspace& bias, const BiasReportInputs& inputs) {
  if (original.vocab() != debiased.vocab()) {
    throw DataError("before/after report: the two embeddings have different vocabularies");
  }
  BiasReport report;
  report.vocabulary_note = std::to_string(original.size()) + " tokens, dim " +
                           std::to_string(original.dim());
  const int lead = std::min<int>(20, static_cast<int>(bias.spectrum().size()));
  report.spectrum.assign(bias.spectrum().begin(), bias.spectrum().begin() + lead);

  for (const auto& ds : inputs.similarity_datasets) {
    report.benchmarks.push_back(
        {ds.name, spearman_similarity(original, ds), spearman_similarity(debiased, ds)});
  }
  if (inputs.analogy_dataset) {
    BenchmarkScore before = analogy_accuracy(original, *inputs.analogy_dataset);
    BenchmarkScore after = analogy_accuracy(debiased, *inputs.analogy_dataset);
    before.value *= 100.0;  // table parity
    after.value *= 100.0;
    report.benchmarks.push_back({inputs.analogy_dataset->name, before, after});
  }

  if (!inputs.audit_words.empty()) {
    const Vec g = bias.g();
    report.direct_bias_before = direct_bias(original, inputs.audit_words, g, inputs.direct_bias);
    report.direct_bias_after = direct_bias(debiased, inputs.audit_words, g, inputs.direct_bias);
    report.extremes_before =
        extremes_along(original, inputs.audit_words, g, inputs.extremes_n, "bias direction");
    report.extremes_after =
        extremes_along(debiased, inputs.audit_words, g, inputs.extremes_n, "bias direction");
  }
  if (inputs.equality_sets) {
    report.observation1_before =
        check_observation1(original, inputs.audit_words, *inputs.equality_sets);
    report.observation1_after =
        check_observation1(debiased, inputs.audit_words, *inputs.equality_sets);
  }
  return report;
}

std::string report_to_json(const BiasReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = report.schema;
  j["vocabulary"] = report.vocabulary_note;
  j["spectrum"] = report.spectrum;
  j["benchmarks"] = nlohmann::ordered_json::array();
  for (const auto& b : report.benchmarks) {
    j["benchmarks"].push_back({{"dataset", b.dataset},
                               {"before", b.before.value},
                               {"after", b.after.value},
                               {"delta", b.after.value - b.before.value},
                               {"used", b.before.used},
                               {"skipped_oov", b.before.skipped_oov}});
  }
  j["direct_bias"] = {{"before", report.direct_bias_before},
                      {"after", report.direct_bias_after}};
  j["extremes_before"] = extremes_json(report.extremes_before);
  j["extremes_after"] = extremes_json(report.extremes_after);
  if (report.observation1_before) {
    j["observation1_before"] = observation1_json(*report.observation1_before);
  }
  if (report.observation1_after) {
    j["observation1_after"] = observation1_json(*report.observation1_after);
  }
  return j.dump(2) + "\n";
}

std::string report_table_csv(const BiasReport& report) {
  std::ostringstream out;
  out << "embedding";
  for (const auto& b : report.benchmarks) out << ',' << b.dataset;
  out << ",direct_bias\n";
  char num[40];
  const auto cell = [&](double v) {
    std::snprintf(num, sizeof num, ",%.4g", v);
    out << num;
  };
  out << "before";
  for (const auto& b : report.benchmarks) cell(b.before.value);
  cell(report.direct_bias_before);
  out << "\nafter";
  for (const auto& b : report.benchmarks) cell(b.after.value);
  cell(report.direct_bias_after);
  out << '\n';
  return out.str();
}

}  // namespace wordbias
