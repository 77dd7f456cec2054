// droidprof command-line front end.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "droidprof/classifier.hpp"
#include "droidprof/codec.hpp"
#include "droidprof/corpus.hpp"
#include "droidprof/error.hpp"
#include "droidprof/evaluation.hpp"
#include "droidprof/log.hpp"
#include "droidprof/parallel.hpp"
#include "droidprof/profile.hpp"
#include "droidprof/rules.hpp"
#include "droidprof/synth.hpp"

namespace dp = droidprof;

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kMissingFile = 2,
  kBadRules = 3,
  kGateFailed = 4,
  kBadLog = 5,
  kBadStore = 6,
};

struct Options {
  std::string rules_path;
  std::string store_path;
  std::string weights;
  double threshold = 0.85;
  std::string method = "intersection";
  std::uint64_t seed = 7;
  unsigned jobs = 1;
  std::string format = "human";
  bool gate = false;
  bool paper_spec = false;
  bool boxer_connection_error = false;
  std::string corpus_dir;
  std::string out_dir;
  std::string align = "majority";
  std::size_t folds = 5;
  std::size_t k = 0;
  bool l1 = false;
  bool pretty = false;
  bool base64 = false;
  std::vector<std::string> inputs;
};

dp::RuleSet load_rule_set(const Options& o) {
  return o.rules_path.empty() ? dp::default_rules() : dp::load_rules_file(o.rules_path);
}

dp::SimilarityWeights parse_weights(const std::string& text) {
  std::vector<double> w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw dp::Error(dp::ErrorKind::InvalidWeights, fmt::format("bad weight '{}'", item));
    }
    w.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (w.size() != 4) throw dp::Error(dp::ErrorKind::InvalidWeights, "expected four weights a,b,c,d");
  return {w[0], w[1], w[2], w[3]};
}

dp::ClassifierConfig classifier_config(const Options& o) {
  dp::ClassifierConfig cfg;
  cfg.threshold = o.threshold;
  if (!o.weights.empty()) cfg.weights = parse_weights(o.weights);
  cfg.update_method = *dp::parse_update_method(o.method);
  cfg.validate();
  return cfg;
}

dp::EvaluationOptions evaluation_options(const Options& o) {
  dp::EvaluationOptions e;
  e.folds = o.folds;
  e.seed = o.seed;
  e.alignment = *dp::parse_alignment(o.align);
  e.jobs = o.jobs;
  return e;
}

dp::LabeledCorpus load_corpus(const Options& o) {
  if (!o.corpus_dir.empty()) return dp::load_corpus_dir(o.corpus_dir);
  auto spec = dp::default_paper_spec(o.boxer_connection_error);
  spec.seed = o.seed;
  return dp::generate_corpus(spec, o.jobs);
}

void emit(const std::string& text) { std::fwrite(text.data(), 1, text.size(), stdout); }

int cmd_profile(const Options& o) {
  const auto rules = load_rule_set(o);
  for (const auto& path : o.inputs) {
    const auto p = dp::build_profile(dp::parse_log_file(path), rules);
    if (o.base64) {
      emit(dp::encode_profile(p) + "\n");
    } else if (o.pretty) {
      emit(dp::pretty_text(p));
    } else {
      emit(dp::canonical_text(p) + "\n");
    }
  }
  return kOk;
}

int cmd_classify(const Options& o) {
  const auto cfg = classifier_config(o);
  const auto rules = load_rule_set(o);
  dp::ProfileStore store;
  if (std::filesystem::exists(o.store_path)) store = dp::load_store(dp::read_file(o.store_path));

  std::vector<dp::BehaviorProfile> profiles(o.inputs.size());
  dp::parallel_for(o.inputs.size(), o.jobs, [&](std::size_t i) {
    profiles[i] = dp::build_profile(dp::parse_log_file(o.inputs[i]), rules);
  });
  for (const auto& p : profiles) {
    const auto d = dp::classify(p, store, cfg);
    const auto& entry = store.journal().back();
    if (o.format == "machine") {
      emit(entry.to_line() + "\n");
    } else {
      std::string what;
      switch (d.kind) {
        case dp::Decision::Kind::Benign: what = "benign"; break;
        case dp::Decision::Kind::Assigned: what = fmt::format("assigned to {}", d.label); break;
        case dp::Decision::Kind::NewCluster: what = fmt::format("new cluster {}", d.label); break;
      }
      emit(fmt::format("{}  {}  (score {:.4f}){}\n", entry.sample_id, what, d.score,
                       d.representative_emptied ? "  representative emptied" : ""));
    }
  }
  dp::write_file(o.store_path, dp::save_store(store));
  return kOk;
}

int cmd_evaluate(const Options& o) {
  const auto cfg = classifier_config(o);
  const auto corpus = load_corpus(o);
  const auto report = dp::run_evaluation(corpus, load_rule_set(o), cfg, evaluation_options(o));
  emit(o.format == "machine" ? dp::render_machine(report) : dp::render_human(report));
  if (o.gate) {
    const auto failed = dp::check_gates(report);
    for (const auto& f : failed) std::cerr << "gate failed: " << f << '\n';
    if (!failed.empty()) return kGateFailed;
  }
  return kOk;
}

int cmd_tune(const Options& o) {
  const auto cfg = classifier_config(o);
  const auto corpus = load_corpus(o);
  const auto opts = evaluation_options(o);
  const auto profiles = dp::profile_corpus(corpus, load_rule_set(o), o.jobs);
  const auto result = dp::tune_weights(corpus, profiles, dp::default_weight_schedule(), cfg, opts);
  emit(o.format == "machine" ? dp::render_machine(result) : dp::render_human(result));
  return kOk;
}

int cmd_generate(const Options& o) {
  auto spec = dp::default_paper_spec(o.boxer_connection_error);
  spec.seed = o.seed;
  const auto corpus = dp::generate_corpus(spec, o.jobs);
  if (!o.out_dir.empty()) dp::write_corpus_dir(corpus, o.out_dir);
  if (o.format == "machine") {
    for (const auto& s : corpus.samples()) emit(fmt::format("{}|{}\n", s.log.sample_id(), s.truth));
  } else {
    std::map<std::string, std::size_t> counts;
    for (const auto& s : corpus.samples()) ++counts[s.truth];
    for (const auto& [label, n] : counts) emit(fmt::format("{:<14}{:>6}\n", label, n));
    emit(fmt::format("{:<14}{:>6}\n", "total", corpus.size()));
    if (!o.out_dir.empty()) emit(fmt::format("written to {}\n", o.out_dir));
  }
  return kOk;
}

int cmd_baseline(const Options& o) {
  const auto corpus = load_corpus(o);
  dp::BaselineOptions b;
  b.k = o.k;
  b.l1_normalize = o.l1;
  const auto report = dp::evaluate_baseline(corpus, b, evaluation_options(o));
  emit(o.format == "machine" ? dp::render_machine(report) : dp::render_human(report));
  return kOk;
}

int exit_code_for(const dp::Error& e) {
  switch (e.kind()) {
    case dp::ErrorKind::RuleSyntax:
    case dp::ErrorKind::DuplicateRuleId: return kBadRules;
    case dp::ErrorKind::MalformedLine:
    case dp::ErrorKind::EmptyLog:
    case dp::ErrorKind::SampleIdMismatch: return kBadLog;
    case dp::ErrorKind::CorruptStore:
    case dp::ErrorKind::CorruptProfile: return kBadStore;
    default: return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Behavior profiling and family classification for sandbox system logs"};
  app.require_subcommand(1);
  Options o;

  auto add_rules = [&](CLI::App* c) { c->add_option("--rules", o.rules_path, "Rule file (default: built-in rules)"); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"human", "machine"}));
  };
  auto add_classifier = [&](CLI::App* c) {
    c->add_option("--weights", o.weights, "Similarity weights SS,CS,SIS,CDS");
    c->add_option("--threshold", o.threshold, "Similarity threshold in (0,1]");
    c->add_option("--method", o.method, "Representative update method")
        ->check(CLI::IsMember({"intersection", "union", "1", "2"}));
  };
  auto add_seed_jobs = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Random seed");
    c->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_corpus = [&](CLI::App* c) {
    auto* dir = c->add_option("--corpus", o.corpus_dir, "Corpus directory with labels.txt");
    c->add_flag("--paper-spec", o.paper_spec, "Use the generated default corpus (the default)")->excludes(dir);
    c->add_flag("--boxer-connection-error", o.boxer_connection_error, "Generated Boxer samples lose SMS behavior");
    c->add_option("--folds", o.folds, "Cross-validation folds");
    c->add_option("--align", o.align, "Cluster to label alignment")->check(CLI::IsMember({"majority", "hungarian"}));
  };

  auto* profile = app.add_subcommand("profile", "Print the behavior profile of each log");
  profile->add_option("logs", o.inputs, "Log files")->required();
  add_rules(profile);
  auto* pretty = profile->add_flag("--pretty", o.pretty, "Nested human-readable view");
  profile->add_flag("--base64", o.base64, "Base-64 canonical form")->excludes(pretty);

  auto* classify = app.add_subcommand("classify", "Classify logs against a profile store, updating it");
  classify->add_option("logs", o.inputs, "Log files, classified in order")->required();
  classify->add_option("--store", o.store_path, "Store file (created when missing)")->required();
  add_rules(classify);
  add_classifier(classify);
  add_format(classify);
  add_seed_jobs(classify);

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated accuracy and AUC");
  add_rules(evaluate);
  add_classifier(evaluate);
  add_format(evaluate);
  add_seed_jobs(evaluate);
  add_corpus(evaluate);
  evaluate->add_flag("--gate", o.gate, "Exit 4 unless accuracy gates pass");

  auto* tune = app.add_subcommand("tune", "Weight sweep over the default schedule");
  add_rules(tune);
  add_classifier(tune);
  add_format(tune);
  add_seed_jobs(tune);
  add_corpus(tune);

  auto* generate = app.add_subcommand("generate", "Generate the synthetic corpus");
  generate->add_flag("--paper-spec", o.paper_spec, "Default family mix (the only spec available)");
  generate->add_flag("--boxer-connection-error", o.boxer_connection_error, "Boxer samples lose SMS behavior");
  generate->add_option("--out", o.out_dir, "Directory to write logs and labels.txt");
  add_format(generate);
  add_seed_jobs(generate);

  auto* baseline = app.add_subcommand("baseline", "k-means over syscall frequencies");
  add_format(baseline);
  add_seed_jobs(baseline);
  add_corpus(baseline);
  baseline->add_option("--k", o.k, "Cluster count (default: number of labels)");
  baseline->add_flag("--l1", o.l1, "L1-normalize frequency vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*profile) return cmd_profile(o);
    if (*classify) return cmd_classify(o);
    if (*evaluate) return cmd_evaluate(o);
    if (*tune) return cmd_tune(o);
    if (*generate) return cmd_generate(o);
    if (*baseline) return cmd_baseline(o);
  } catch (const dp::Error& e) {
    std::cerr << "droidprof: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::system_error& e) {
    std::cerr << "droidprof: " << e.what() << '\n';
    return kMissingFile;
  } catch (const std::exception& e) {
    std::cerr << "droidprof: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
