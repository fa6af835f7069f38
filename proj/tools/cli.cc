#include "cli.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "lexbias/beam_decoder.h"
#include "lexbias/bleu.h"
#include "lexbias/calibration.h"
#include "lexbias/parallel.h"
#include "lexbias/penalty_table.h"
#include "lexbias/text.h"
#include "lexbias/toy_models.h"
#include "run_record.h"

namespace lexbias::cli {

namespace {

struct DecodeFlags {
  std::string vocab;
  std::string model;
  std::string input;
  DecodeConfig config;
  unsigned threads = 0;
};

void add_decode_flags(CLI::App& cmd, DecodeFlags& f) {
  cmd.add_option("--vocab", f.vocab, "Vocabulary file, one token per line")->required();
  cmd.add_option("--model", f.model, "copy[:g=REAL] or ngram:order=INT,delta=REAL,corpus=PATH")->required();
  cmd.add_option("--alpha", f.config.alpha, "Penalty weight (presets: 0.0005, 0.003, 0.006)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--beta", f.config.beta, "Exponent on n-gram order")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--beam", f.config.beam_size, "Beam size")->check(CLI::PositiveNumber)->capture_default_str();
  cmd.add_option("--max-order", f.config.max_order, "Largest penalized n-gram")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--max-len", f.config.max_len, "Cap on generated tokens")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--input", f.input, "Input sentences, one per line (default: stdin)");
  cmd.add_option("--threads", f.threads, "Decoding threads (0 = all cores)")->capture_default_str();
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::vector<std::string> read_input(const DecodeFlags& f, std::istream& in) {
  if (f.input.empty()) return read_lines(in);
  std::ifstream file(f.input, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open input file: " + f.input);
  return read_lines(file);
}

struct Loaded {
  SubwordVocab vocab;
  std::unique_ptr<SequenceModel> model;
};

std::unique_ptr<Loaded> load(const DecodeFlags& f) {
  auto vocab = SubwordVocab::load(f.vocab);
  auto loaded = std::unique_ptr<Loaded>(new Loaded{std::move(vocab), nullptr});
  loaded->model = make_model(f.model, loaded->vocab);
  return loaded;
}

int cmd_paraphrase(const DecodeFlags& f, std::istream& in, std::ostream& out, std::ostream& err) {
  f.config.validate();
  const auto loaded = load(f);
  const auto lines = read_input(f, in);

  struct Outcome {
    std::optional<DecodeResult> result;
    std::string error;
  };
  std::vector<Outcome> outcomes(lines.size());
  parallel_for(
      lines.size(),
      [&](std::size_t i) {
        try {
          outcomes[i].result = decode(*loaded->model, lines[i], loaded->vocab, f.config);
        } catch (const std::exception& e) {
          outcomes[i].error = e.what();
        }
      },
      f.threads);

  int status = kExitOk;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!outcomes[i].result) {
      err << "line " << i + 1 << ": " << outcomes[i].error << '\n';
      out << nlohmann::json{{"input", lines[i]}, {"error", outcomes[i].error}}.dump() << '\n';
      status = kExitFailure;
      continue;
    }
    const DecodeResult& r = *outcomes[i].result;
    RunRecord rec;
    rec.input = lines[i];
    rec.output = r.best;
    rec.alpha = f.config.alpha;
    rec.beta = f.config.beta;
    rec.beam = f.config.beam_size;
    rec.score = r.score;
    rec.total_penalty = r.total_penalty;
    rec.input_output_bleu = r.best.empty() ? 0.0 : sentence_bleu(r.best, lines[i]);
    rec.truncated = r.truncated;
    out << nlohmann::json(rec).dump() << '\n';
  }
  return status;
}

int cmd_sweep(const DecodeFlags& f, const std::vector<double>& alphas, std::optional<double> target,
              CalibrationSpec spec, std::istream& in, std::ostream& out, std::ostream& err) {
  f.config.validate();
  const auto loaded = load(f);
  std::vector<std::string> sentences;
  for (auto& line : read_input(f, in)) {
    if (!split_whitespace(line).empty()) sentences.push_back(std::move(line));
  }
  if (sentences.empty()) throw std::runtime_error("no input sentences");

  char buf[128];
  if (target) {
    spec.target_bleu = *target;
    spec.base = f.config;
    spec.threads = f.threads;
    CalibrationResult r;
    try {
      r = calibrate_alpha(spec, *loaded->model, sentences, loaded->vocab);
    } catch (const BracketError& e) {
      err << "error: " << e.what() << '\n';
      return kExitFailure;
    }
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    if (!r.converged) err << "warning: no probe within tolerance after " << r.probes.size() << " probes\n";
    out << "alpha\tachieved_bleu\n";
    std::snprintf(buf, sizeof buf, "%.9g\t%.4f\n", r.alpha, r.achieved_bleu);
    out << buf;
    return kExitOk;
  }

  out << "alpha\tcorpus_bleu\tmean_total_penalty\n";
  for (double alpha : alphas) {
    DecodeConfig config = f.config;
    config.alpha = alpha;
    const auto results = decode_all(*loaded->model, sentences, loaded->vocab, config, f.threads);
    std::vector<BleuStats> stats;
    double penalty = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
      penalty += results[i].total_penalty;
      if (!results[i].best.empty()) {
        stats.push_back(bleu_stats(results[i].best, sentences[i]));
      } else {
        BleuStats s;
        s.reference_length = static_cast<long>(split_whitespace(sentences[i]).size());
        stats.push_back(s);
      }
    }
    std::snprintf(buf, sizeof buf, "%.9g\t%.4f\t%.6f\n", alpha, corpus_bleu(stats),
                  penalty / static_cast<double>(results.size()));
    out << buf;
  }
  return kExitOk;
}

int cmd_inspect(const std::string& vocab_path, const std::string& sentence, const DecodeConfig& config,
                std::ostream& out) {
  const auto vocab = SubwordVocab::load(vocab_path);
  out << build_penalties(sentence, vocab, config).to_json(vocab) << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paraphrase decoding with soft n-gram overlap penalties", args.empty() ? "lexbias" : args[0]};
  app.require_subcommand(1);

  DecodeFlags para;
  auto* paraphrase = app.add_subcommand("paraphrase", "Decode each input line, print JSONL records");
  add_decode_flags(*paraphrase, para);

  DecodeFlags sweep_flags;
  std::vector<double> alphas;
  double target_bleu = 0.0;
  CalibrationSpec spec;
  auto* sweep = app.add_subcommand("sweep", "Corpus BLEU(input, output) over alphas, or calibrate alpha to a target");
  add_decode_flags(*sweep, sweep_flags);
  auto* alphas_opt = sweep->add_option("--alphas", alphas, "Comma-separated alpha grid")->delimiter(',');
  auto* target_opt = sweep->add_option("--target-bleu", target_bleu, "Calibrate alpha to this corpus BLEU");
  sweep->add_option("--tolerance", spec.tolerance, "Calibration tolerance in BLEU points")->capture_default_str();
  sweep->add_option("--alpha-lo", spec.alpha_lo, "Lower end of the alpha bracket")->capture_default_str();
  sweep->add_option("--alpha-hi", spec.alpha_hi, "Upper end of the alpha bracket")->capture_default_str();
  sweep->add_option("--max-iters", spec.max_iters, "Maximum BLEU probes")->capture_default_str();

  std::string inspect_vocab;
  std::string sentence;
  DecodeConfig inspect_config;
  auto* inspect = app.add_subcommand("inspect", "Dump the penalty table for one sentence as JSON");
  inspect->add_option("--vocab", inspect_vocab, "Vocabulary file")->required();
  inspect->add_option("--sentence", sentence, "Input sentence")->required();
  inspect->add_option("--alpha", inspect_config.alpha)->check(CLI::NonNegativeNumber)->capture_default_str();
  inspect->add_option("--beta", inspect_config.beta)->check(CLI::PositiveNumber)->capture_default_str();
  inspect->add_option("--max-order", inspect_config.max_order)->check(CLI::PositiveNumber)->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("lexbias");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (sweep->parsed() && (alphas_opt->count() > 0) == (target_opt->count() > 0)) {
      throw CLI::ValidationError("sweep", "exactly one of --alphas and --target-bleu is required");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (paraphrase->parsed()) return cmd_paraphrase(para, in, out, err);
    if (sweep->parsed()) {
      return cmd_sweep(sweep_flags, alphas, target_opt->count() ? std::optional(target_bleu) : std::nullopt, spec,
                       in, out, err);
    }
    return cmd_inspect(inspect_vocab, sentence, inspect_config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace lexbias::cli
