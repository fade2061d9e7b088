// Command-line driver: audits bias in a word embedding, removes it, and
// verifies embedding quality, with every run reproducible from the flags
// plus one seed.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wordbias/analogy.hpp"
#include "wordbias/debias.hpp"
#include "wordbias/embedding.hpp"
#include "wordbias/errors.hpp"
#include "wordbias/eval.hpp"
#include "wordbias/gender_words.hpp"
#include "wordbias/io_util.hpp"
#include "wordbias/metrics.hpp"
#include "wordbias/subspace.hpp"
#include "wordbias/wordlists.hpp"

namespace {

using nlohmann::ordered_json;
using namespace wordbias;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

struct CommonOptions {
  std::string embedding_path;
  std::string format = "w2v-bin";
  bool text_header = false;
  int filter_top = 0;  // 0 disables vocabulary filtering
  int filter_len = 19;
  bool filter_allow_upper = false;
  bool filter_allow_digits = false;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--embedding", opts->embedding_path, "Embedding file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", opts->format, "Embedding format")
      ->check(CLI::IsMember({"w2v-bin", "text"}))
      ->capture_default_str();
  cmd->add_flag("--text-header", opts->text_header,
                "Text embedding begins with a '<vocab> <dim>' line");
  cmd->add_option("--filter-top", opts->filter_top,
                  "Apply the vocabulary filter to the N most frequent rows (0 = off)")
      ->capture_default_str();
  cmd->add_option("--filter-len", opts->filter_len, "Longest token kept by the filter")
      ->capture_default_str();
  cmd->add_flag("--filter-allow-upper", opts->filter_allow_upper,
                "Filter keeps tokens with uppercase letters");
  cmd->add_flag("--filter-allow-digits", opts->filter_allow_digits,
                "Filter keeps tokens with digits or punctuation");
  cmd->add_option("--out", opts->out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", opts->seed, "Seed for all randomized steps")->capture_default_str();
}

Embedding load_prepared(const CommonOptions& opts) {
  Embedding emb = opts.format == "text"
                      ? load_text_embedding(opts.embedding_path, opts.text_header)
                      : load_word2vec_binary(opts.embedding_path);
  if (opts.filter_top > 0) {
    VocabFilter filter;
    filter.max_rank = opts.filter_top;
    filter.max_token_len = opts.filter_len;
    filter.allow_uppercase = opts.filter_allow_upper;
    filter.allow_digits_punct = opts.filter_allow_digits;
    emb = filter_vocabulary(emb, filter);
  }
  return normalize_rows(emb);
}

std::string out_path(const CommonOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_json(const CommonOptions& opts, const std::string& name, ordered_json j) {
  j["timestamp"] = timestamp_utc();
  write_file_atomic(out_path(opts, name), j.dump(2) + "\n");
}

std::pair<std::string, std::string> parse_pair_flag(const std::string& text,
                                                    const std::string& flag) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || comma == 0 || comma + 1 >= text.size()) {
    throw ConfigError(flag + " expects 'first,second'");
  }
  return {text.substr(0, comma), text.substr(comma + 1)};
}

BiasSubspace subspace_from_files(const Embedding& emb, const std::string& defining_path,
                                 int k) {
  DefiningSets defining{load_word_sets(defining_path)};
  return identify_bias_subspace(emb, defining, k);
}

ordered_json extremes_to_json(const ExtremesReport& report) {
  ordered_json j;
  j["direction"] = report.direction_label;
  auto side = [](const std::vector<std::pair<std::string, double>>& list) {
    ordered_json arr = ordered_json::array();
    for (const auto& [token, projection] : list) {
      arr.push_back({{"token", token}, {"projection", projection}});
    }
    return arr;
  };
  j["top_positive"] = side(report.top_positive);
  j["top_negative"] = side(report.top_negative);
  return j;
}

// ---------------------------------------------------------------------------
// audit

struct AuditOptions {
  CommonOptions common;
  std::string defining_path;
  std::string occupations_path;
  int k = 1;
  double c = 1.0;
  int extremes_n = 10;
  std::string beta_pair;  // "a,b"; empty skips the indirect-bias table
};

int run_audit(const AuditOptions& opts) {
  const Embedding emb = load_prepared(opts.common);
  const BiasSubspace bias = subspace_from_files(emb, opts.defining_path, opts.k);
  const auto occupations = load_word_list(opts.occupations_path);
  if (occupations.empty()) throw DataError(opts.occupations_path + ": empty word list");

  const double bias_value = direct_bias(emb, occupations, bias.g(), DirectBiasParams{opts.c});
  const auto extremes =
      extremes_along(emb, occupations, bias.g(), opts.extremes_n, "bias direction");
  if (extremes.truncated) {
    std::cerr << "warning: fewer than " << opts.extremes_n << " words in the extremes table\n";
  }

  ordered_json j;
  j["schema"] = 1;
  j["embedding"] = opts.common.embedding_path;
  j["vocabulary_size"] = emb.size();
  j["dim"] = emb.dim();
  j["k"] = opts.k;
  j["c"] = opts.c;
  j["seed"] = opts.common.seed;
  const int lead = std::min<std::size_t>(20, bias.spectrum().size());
  j["spectrum"] = std::vector<double>(bias.spectrum().begin(), bias.spectrum().begin() + lead);
  j["direct_bias"] = bias_value;
  j["extremes"] = extremes_to_json(extremes);

  std::ostringstream spectrum_csv;
  spectrum_csv << "component,fraction\n";
  for (std::size_t i = 0; i < bias.spectrum().size() && i < 20; ++i) {
    char line[64];
    std::snprintf(line, sizeof line, "%zu,%.10g\n", i, bias.spectrum()[i]);
    spectrum_csv << line;
  }
  write_file_atomic(out_path(opts.common, "spectrum.csv"), spectrum_csv.str());

  std::ostringstream extremes_csv;
  extremes_csv << "side,token,projection\n";
  for (const auto& [token, projection] : extremes.top_positive) {
    char line[256];
    std::snprintf(line, sizeof line, "positive,%s,%.10g\n", token.c_str(), projection);
    extremes_csv << line;
  }
  for (const auto& [token, projection] : extremes.top_negative) {
    char line[256];
    std::snprintf(line, sizeof line, "negative,%s,%.10g\n", token.c_str(), projection);
    extremes_csv << line;
  }
  write_file_atomic(out_path(opts.common, "extremes.csv"), extremes_csv.str());

  if (!opts.beta_pair.empty()) {
    const auto [left, right] = parse_pair_flag(opts.beta_pair, "--beta-pair");
    const Vec axis = pair_direction(emb, left, right);
    const auto axis_extremes =
        extremes_along(emb, occupations, axis, opts.extremes_n, left + "-" + right);
    std::ostringstream beta_csv;
    beta_csv << "token,projection,beta\n";
    ordered_json beta_rows = ordered_json::array();
    auto emit = [&](const std::vector<std::pair<std::string, double>>& side,
                    const std::string& anchor) {
      for (const auto& [token, projection] : side) {
        const double beta = indirect_bias_beta(emb, token, anchor, bias);
        char line[256];
        std::snprintf(line, sizeof line, "%s,%.10g,%.10g\n", token.c_str(), projection, beta);
        beta_csv << line;
        beta_rows.push_back({{"token", token}, {"projection", projection}, {"beta", beta}});
      }
    };
    emit(axis_extremes.top_positive, left);
    emit(axis_extremes.top_negative, right);
    write_file_atomic(out_path(opts.common, "beta.csv"), beta_csv.str());
    j["beta_axis"] = left + "-" + right;
    j["beta"] = beta_rows;
  }

  write_json(opts.common, "audit.json", std::move(j));
  return 0;
}

// ---------------------------------------------------------------------------
// debias

struct DebiasOptions {
  CommonOptions common;
  std::string mode;
  std::string defining_path;
  std::string specific_path;
  std::string equality_path;
  int k = 1;
  double lambda = 0.2;
  int max_iters = 500;
  double step_size = 1.0;
  double tolerance = 1e-9;
  std::string out_format;  // defaults to the input format
};

int run_debias(const DebiasOptions& opts) {
  const Embedding emb = load_prepared(opts.common);
  const BiasSubspace bias = subspace_from_files(emb, opts.defining_path, opts.k);
  const auto specific = load_word_list(opts.specific_path);
  std::vector<std::string> present_specific;
  for (const auto& token : specific) {
    if (emb.contains(token)) present_specific.push_back(token);
  }
  const auto neutral = neutral_set(emb, present_specific);

  const std::string format = opts.out_format.empty() ? opts.common.format : opts.out_format;
  const std::string out_name = format == "text" ? "debiased.txt" : "debiased.bin";

  if (opts.mode == "hard") {
    if (opts.equality_path.empty()) {
      throw ConfigError("--equality-sets is required for hard mode");
    }
    EqualitySets equality{load_word_sets(opts.equality_path)};
    // Equality words must be gender-specific; otherwise they would also be
    // neutralized and the two rewrites conflict.
    const Embedding debiased = hard_debias(emb, neutral, equality, bias);
    const auto check = check_observation1(debiased, neutral, equality);
    ordered_json j;
    j["schema"] = 1;
    j["mode"] = "hard";
    j["neutral_words"] = static_cast<int>(neutral.size());
    j["equality_sets"] = static_cast<int>(equality.sets.size());
    j["max_inner_product_gap"] = check.max_inner_product_gap;
    j["max_distance_gap"] = check.max_distance_gap;
    j["pass"] = check.pass;
    write_json(opts.common, "observation1.json", std::move(j));
    save_embedding(debiased, out_path(opts.common, out_name),
                   format == "text" ? EmbeddingFormat::kText : EmbeddingFormat::kBinary, /*text_header=*/false);
    if (!check.pass) {
      throw InternalError("hard debiasing violated the equidistance guarantee");
    }
    return 0;
  }

  SoftDebiasParams params;
  params.lambda = opts.lambda;
  params.max_iters = opts.max_iters;
  params.step_size = opts.step_size;
  params.tolerance = opts.tolerance;
  params.seed = opts.common.seed;
  const SoftDebiasResult result = soft_debias(emb, neutral, bias, params);
  if (!result.converged) {
    std::cerr << "warning: soft debias stopped at the iteration cap before converging\n";
  }
  std::ostringstream trace;
  trace << "iter,objective,bias_term\n";
  for (std::size_t i = 0; i < result.objective_trace.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof line, "%zu,%.12g,%.12g\n", i, result.objective_trace[i],
                  result.bias_terms[i]);
    trace << line;
  }
  write_file_atomic(out_path(opts.common, "soft_trace.csv"), trace.str());
  save_embedding(result.debiased, out_path(opts.common, out_name),
                 format == "text" ? EmbeddingFormat::kText : EmbeddingFormat::kBinary, /*text_header=*/false);
  return 0;
}

// ---------------------------------------------------------------------------
// analogies

struct AnalogiesOptions {
  CommonOptions common;
  std::string seed_a;
  std::string seed_b;
  int top_n = 100;
  double delta = 1.0;
  std::string exclusions_path;
  bool allow_seed = false;
};

int run_analogies(const AnalogiesOptions& opts) {
  const Embedding emb = load_prepared(opts.common);
  AnalogyQuery query;
  query.seed_a = opts.seed_a;
  query.seed_b = opts.seed_b;
  query.delta = opts.delta;
  query.top_n = opts.top_n;
  query.exclude_seed = !opts.allow_seed;
  if (!opts.exclusions_path.empty()) {
    const auto excluded = load_word_list(opts.exclusions_path);
    query.exclusions.insert(excluded.begin(), excluded.end());
  }
  emb.require(opts.seed_a);
  emb.require(opts.seed_b);
  const auto pairs = generate_analogies(emb, query);

  std::ostringstream tsv;
  for (const auto& pair : pairs) {
    char line[256];
    std::snprintf(line, sizeof line, "%.10g\t%s\t%s\n", pair.score, pair.x.c_str(),
                  pair.y.c_str());
    tsv << line;
  }
  write_file_atomic(out_path(opts.common, "analogies.tsv"), tsv.str());
  std::cout << tsv.str();
  return 0;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyOptions {
  CommonOptions common;
  std::string specific_path;
  double c = 1.0;
  int folds = 10;
  bool balanced = false;
  std::string full_embedding_path;
  std::string full_format = "w2v-bin";
};

int run_classify(const ClassifyOptions& opts) {
  const Embedding emb = load_prepared(opts.common);
  const auto seed_list = load_word_list(opts.specific_path);
  LabeledVocab labels;
  for (const auto& token : seed_list) {
    if (emb.contains(token)) labels.positives.push_back(token);
  }
  labels.negatives = neutral_set(emb, labels.positives);
  if (labels.positives.empty()) {
    throw DataError("none of the specific words appear in the embedding");
  }

  const auto metrics =
      cross_validate(emb, labels, opts.folds, opts.balanced, opts.common.seed, opts.c);
  const auto classifier = train_specific_classifier(emb, labels, opts.c, opts.common.seed);

  std::vector<std::string> expanded = seed_list;
  if (!opts.full_embedding_path.empty()) {
    const Embedding full = normalize_rows(
        opts.full_format == "text" ? load_text_embedding(opts.full_embedding_path, false)
                                   : load_word2vec_binary(opts.full_embedding_path));
    expanded = expand_specific_set(classifier, full, seed_list, emb.vocab());
  }
  save_word_list(expanded, out_path(opts.common, "specific_expanded.txt"));

  ordered_json j;
  j["schema"] = 1;
  j["positives"] = static_cast<int>(labels.positives.size());
  j["negatives"] = static_cast<int>(labels.negatives.size());
  j["folds"] = metrics.folds;
  j["balanced"] = opts.balanced;
  j["c"] = opts.c;
  j["seed"] = opts.common.seed;
  j["f_score_mean"] = metrics.f_score_mean;
  j["f_score_std"] = metrics.f_score_std;
  j["balanced_accuracy_mean"] = metrics.balanced_accuracy_mean;
  j["balanced_accuracy_std"] = metrics.balanced_accuracy_std;
  j["expanded_size"] = static_cast<int>(expanded.size());
  write_json(opts.common, "cv_metrics.json", std::move(j));
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  CommonOptions common;
  std::string debiased_path;
  std::string debiased_format;  // defaults to --format
  std::vector<std::string> similarity_specs;
  std::string analogy_path;
  std::string defining_path;
  std::string occupations_path;
  std::string equality_path;
  int k = 1;
  double c = 1.0;
  int extremes_n = 10;
};

int run_eval(const EvalOptions& opts) {
  const Embedding original = load_prepared(opts.common);
  CommonOptions debiased_common = opts.common;
  debiased_common.embedding_path = opts.debiased_path;
  if (!opts.debiased_format.empty()) debiased_common.format = opts.debiased_format;
  const Embedding debiased = load_prepared(debiased_common);

  const BiasSubspace bias = subspace_from_files(original, opts.defining_path, opts.k);

  BiasReportInputs inputs;
  for (const auto& spec : opts.similarity_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--similarity expects NAME=FILE, got '" + spec + "'");
    }
    inputs.similarity_datasets.push_back(
        load_similarity_dataset(spec.substr(eq + 1), spec.substr(0, eq)));
  }
  if (!opts.analogy_path.empty()) {
    inputs.analogy_dataset = load_analogy_dataset(opts.analogy_path, "analogy");
  }
  if (!opts.occupations_path.empty()) {
    inputs.audit_words = load_word_list(opts.occupations_path);
  }
  inputs.direct_bias = DirectBiasParams{opts.c};
  inputs.extremes_n = opts.extremes_n;
  if (!opts.equality_path.empty()) {
    inputs.equality_sets = EqualitySets{load_word_sets(opts.equality_path)};
  }

  const BiasReport report = before_after_report(original, debiased, bias, inputs);
  ordered_json j = ordered_json::parse(report_to_json(report));
  write_json(opts.common, "report.json", std::move(j));
  write_file_atomic(out_path(opts.common, "table.csv"), report_table_csv(report));
  std::cout << report_table_csv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audit and remove pair-defined bias in word embeddings"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI file (flags take precedence)");

  AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Subspace spectrum, direct and indirect bias");
  add_common_options(audit_cmd, &audit.common);
  audit_cmd->add_option("--defining-sets", audit.defining_path, "Defining word sets")
      ->required()
      ->check(CLI::ExistingFile);
  audit_cmd->add_option("--occupations", audit.occupations_path, "Words to audit")
      ->required()
      ->check(CLI::ExistingFile);
  audit_cmd->add_option("--k", audit.k, "Bias subspace dimension")->capture_default_str();
  audit_cmd->add_option("--c", audit.c, "Direct bias strictness exponent")
      ->capture_default_str();
  audit_cmd->add_option("--extremes-n", audit.extremes_n, "Rows per extremes table")
      ->capture_default_str();
  audit_cmd->add_option("--beta-pair", audit.beta_pair,
                        "Axis pair 'a,b' for the indirect-bias table");

  DebiasOptions debias;
  auto* debias_cmd = app.add_subcommand("debias", "Write a debiased embedding");
  add_common_options(debias_cmd, &debias.common);
  debias_cmd->add_option("--mode", debias.mode, "hard or soft")
      ->required()
      ->check(CLI::IsMember({"hard", "soft"}));
  debias_cmd->add_option("--defining-sets", debias.defining_path, "Defining word sets")
      ->required()
      ->check(CLI::ExistingFile);
  debias_cmd->add_option("--specific", debias.specific_path, "Gender-specific word list")
      ->required()
      ->check(CLI::ExistingFile);
  debias_cmd->add_option("--equality-sets", debias.equality_path, "Equality sets (hard mode)")
      ->check(CLI::ExistingFile);
  debias_cmd->add_option("--k", debias.k, "Bias subspace dimension")->capture_default_str();
  debias_cmd->add_option("--lambda", debias.lambda, "Soft-mode bias weight")
      ->capture_default_str();
  debias_cmd->add_option("--max-iters", debias.max_iters, "Soft-mode iteration cap")
      ->capture_default_str();
  debias_cmd->add_option("--step-size", debias.step_size, "Soft-mode initial step scale")
      ->capture_default_str();
  debias_cmd->add_option("--tolerance", debias.tolerance, "Soft-mode convergence tolerance")
      ->capture_default_str();
  debias_cmd->add_option("--out-format", debias.out_format, "Output embedding format")
      ->check(CLI::IsMember({"w2v-bin", "text"}));

  AnalogiesOptions analogies;
  auto* analogies_cmd = app.add_subcommand("analogies", "Generate seed-direction analogies");
  add_common_options(analogies_cmd, &analogies.common);
  analogies_cmd->add_option("a", analogies.seed_a, "Seed word a")->required();
  analogies_cmd->add_option("b", analogies.seed_b, "Seed word b")->required();
  analogies_cmd->add_option("--top", analogies.top_n, "Number of pairs")->capture_default_str();
  analogies_cmd->add_option("--delta", analogies.delta, "Pair distance threshold")
      ->capture_default_str();
  analogies_cmd->add_option("--exclusions", analogies.exclusions_path,
                            "Tokens barred from the output")
      ->check(CLI::ExistingFile);
  analogies_cmd->add_flag("--allow-seed", analogies.allow_seed,
                          "Allow the seed words to reappear in pairs");

  ClassifyOptions classify;
  auto* classify_cmd =
      app.add_subcommand("classify", "Cross-validate and expand the specific word list");
  add_common_options(classify_cmd, &classify.common);
  classify_cmd->add_option("--specific", classify.specific_path, "Seed word list")
      ->required()
      ->check(CLI::ExistingFile);
  classify_cmd->add_option("--c", classify.c, "SVM regularization parameter")
      ->capture_default_str();
  classify_cmd->add_option("--folds", classify.folds, "Cross-validation folds")
      ->capture_default_str();
  classify_cmd->add_flag("--balanced", classify.balanced,
                         "Class-balanced weighting with a nested parameter sweep");
  classify_cmd->add_option("--full-embedding", classify.full_embedding_path,
                           "Larger embedding to expand the list over")
      ->check(CLI::ExistingFile);
  classify_cmd->add_option("--full-format", classify.full_format, "Format of --full-embedding")
      ->check(CLI::IsMember({"w2v-bin", "text"}));

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Before/after benchmark and bias report");
  add_common_options(eval_cmd, &eval.common);
  eval_cmd->add_option("--debiased", eval.debiased_path, "Debiased embedding")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--debiased-format", eval.debiased_format,
                       "Format of the debiased embedding")
      ->check(CLI::IsMember({"w2v-bin", "text"}));
  eval_cmd->add_option("--similarity", eval.similarity_specs,
                       "Similarity dataset as NAME=FILE (repeatable)");
  eval_cmd->add_option("--analogy-dataset", eval.analogy_path, "Analogy quads file")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--defining-sets", eval.defining_path, "Defining word sets")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--occupations", eval.occupations_path, "Words to audit")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--equality-sets", eval.equality_path,
                       "Equality sets for the equidistance check")
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--k", eval.k, "Bias subspace dimension")->capture_default_str();
  eval_cmd->add_option("--c", eval.c, "Direct bias strictness exponent")->capture_default_str();
  eval_cmd->add_option("--extremes-n", eval.extremes_n, "Rows per extremes table")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*audit_cmd) return run_audit(audit);
    if (*debias_cmd) return run_debias(debias);
    if (*analogies_cmd) return run_analogies(analogies);
    if (*classify_cmd) return run_classify(classify);
    if (*eval_cmd) return run_eval(eval);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
