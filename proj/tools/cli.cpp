// Copyright 2026 The dctts Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <optional>
#include <thread>

#include "dctts/dsp/audio.hpp"
#include "dctts/error.hpp"
#include "dctts/gradcheck.hpp"
#include "dctts/io/corpus.hpp"
#include "dctts/io/features.hpp"
#include "dctts/io/pgm.hpp"
#include "dctts/io/toy_corpus.hpp"
#include "dctts/synth/synthesis.hpp"
#include "dctts/text/vocab.hpp"
#include "dctts/train/checkpoint.hpp"
#include "dctts/train/config.hpp"
#include "dctts/train/trainer.hpp"

namespace dctts::cli {
namespace {

namespace fs = std::filesystem;

std::vector<train::Example> load_examples(const fs::path& cache_dir, const std::string& list_file) {
  std::vector<fs::path> files;
  if (!list_file.empty()) {
    std::ifstream in(list_file);
    if (!in) throw DataError("cannot open list " + list_file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto id = line.substr(0, line.find('|'));
      if (!id.empty()) files.push_back(io::cache_path(cache_dir, id));
    }
  } else {
    if (!fs::is_directory(cache_dir)) throw DataError("cache directory " + cache_dir.string() + " does not exist");
    for (const auto& entry : fs::directory_iterator(cache_dir))
      if (entry.path().extension() == ".dcts") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  }
  if (files.empty()) throw DataError("no cached examples in " + cache_dir.string());
  std::vector<train::Example> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(io::load_cached_example(f));
  return out;
}

std::string read_text_arg(const std::string& text, const std::string& file) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open text file " + file);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  return text;
}

struct TrainArgs {
  std::string config;
  std::string resume;
  std::string cache = "cache";
  std::string out;
  std::string log;
  std::optional<std::uint64_t> max_iters;
  std::optional<std::uint64_t> seed;
};

template <typename Trainer>
int train_command(const TrainArgs& a, train::ModelKind kind, std::ostream& out) {
  train::TrainConfig config = a.config.empty() ? train::TrainConfig{} : train::load_config(a.config);
  if (!a.resume.empty()) {
    const auto meta = train::read_checkpoint_meta(a.resume);
    if (meta.kind != kind) throw DataError(a.resume + ": checkpoint holds the other network");
    if (a.config.empty()) config.hparams = meta.hparams;
    config.seed = meta.seed;
  }
  if (a.seed) config.seed = *a.seed;
  if (a.max_iters) config.max_iters = *a.max_iters;

  const auto examples = load_examples(io::resolve_cache_dir(a.cache), "");
  Trainer trainer(config);
  if (!a.resume.empty()) trainer.load(a.resume);

  std::ofstream log_file;
  std::ostream* log = &out;
  if (!a.log.empty()) {
    log_file.open(a.log, std::ios::app);
    if (!log_file) throw DataError("cannot open log " + a.log);
    log = &log_file;
  }
  if (trainer.iteration() == 0) *log << train::kLogHeader << '\n';
  train::LoopOptions loop;
  loop.max_iters = config.max_iters;
  loop.log = log;
  loop.snapshot_path = a.out;
  const auto last = train::run_training(trainer, examples, loop);
  out << "finished at iteration " << trainer.iteration() << ", loss " << last.total << '\n';
  return kOk;
}

void add_train_options(CLI::App& cmd, TrainArgs& a) {
  cmd.add_option("--config", a.config, "JSON training config; omitted keys keep the documented defaults");
  cmd.add_option("--resume", a.resume, "checkpoint to continue from; its seed is used unless --seed is given");
  cmd.add_option("--cache", a.cache, "feature cache directory (DCTTS_CACHE_DIR overrides)")->capture_default_str();
  cmd.add_option("--out", a.out, "checkpoint written every snapshot_every iterations and at the end")->required();
  cmd.add_option("--log", a.log, "append CSV log lines here instead of stdout");
  cmd.add_option("--max-iters", a.max_iters, "stop when the iteration counter reaches this (default: config max_iters)");
  cmd.add_option("--seed", a.seed, "run seed for initialization and data order (default: config seed)");
}

template <typename Trainer>
std::unique_ptr<Trainer> load_trained(const std::string& path, train::ModelKind kind) {
  const auto meta = train::read_checkpoint_meta(path);
  if (meta.kind != kind) throw DataError(path + ": checkpoint holds the other network");
  train::TrainConfig config;
  config.hparams = meta.hparams;
  config.seed = meta.seed;
  auto trainer = std::make_unique<Trainer>(config);
  trainer->load(path);
  return trainer;
}

struct SynthArgs {
  std::string text;
  std::string text_file;
  std::string t2m;
  std::string ssrn;
  std::string out;
  std::string attention;
  std::size_t max_frames = synth::SynthesisConfig{}.max_frames;
  bool no_incremental = false;
  bool naive = false;
};

void add_synth_options(CLI::App& cmd, SynthArgs& a) {
  auto* group = cmd.add_option_group("text source");
  group->add_option("--text", a.text, "sentence to speak");
  group->add_option("--text-file", a.text_file, "file holding the sentence");
  group->require_option(1);
  cmd.add_option("--t2m", a.t2m, "Text2Mel checkpoint")->required();
  cmd.add_option("--max-frames", a.max_frames, "upper bound on generated mel frames")->capture_default_str();
  cmd.add_flag("--no-incremental-attention", a.no_incremental, "decode with the raw attention argmax");
  cmd.add_flag("--naive", a.naive, "recompute every prefix instead of using cached convolution state");
}

synth::MelSynthesis run_text2mel(const SynthArgs& a, std::ostream& out) {
  const auto t2m = load_trained<train::Text2MelTrainer>(a.t2m, train::ModelKind::text2mel);
  const auto normalized = text::normalize_text(read_text_arg(a.text, a.text_file));
  const auto encoded = text::encode(normalized);
  if (encoded.empty()) throw DataError("text is empty after normalization");
  synth::SynthesisConfig config;
  config.max_frames = a.max_frames;
  config.incremental_attention = !a.no_incremental;
  config.cached = !a.naive;
  auto mel = synth::synthesize_mel(t2m->model(), encoded, config);
  out << "text \"" << normalized << "\": " << mel.mel.frames << " frames, " << (mel.stopped ? "stopped" : "hit max-frames")
      << '\n';
  return mel;
}

void write_attention(const std::string& path, const synth::MelSynthesis& mel) {
  io::write_pgm(path, mel.alignment, mel.chars, mel.mel.frames);
}

int gradcheck_command(int shapes, std::uint64_t seed, const std::string& precision, std::ostream& out) {
  bool ok = true;
  auto report = [&](const char* label, const ad::GradCheckReport& r) {
    out << label << " (tolerance " << r.tolerance << ")\n";
    for (const auto& op : r.ops) {
      out << "  " << std::left << std::setw(24) << op.op << " shapes " << op.shapes << "  max rel err "
          << std::scientific << std::setprecision(3) << op.max_relative_error << std::defaultfloat
          << (op.max_relative_error < r.tolerance ? "" : "  FAIL") << '\n';
    }
    ok = ok && r.passed();
  };
  if (precision == "float" || precision == "both") report("float32", ad::run_gradient_suite<float>(shapes, seed));
  if (precision == "double" || precision == "both") report("float64", ad::run_gradient_suite<double>(shapes, seed));
  out << (ok ? "all ops within tolerance" : "gradient check FAILED") << '\n';
  return ok ? kOk : kNumericError;
}

struct Weighted {
  loss::LossReport sum;
  double weight = 0.0;
  void add(const loss::LossReport& r, double w) {
    sum.l1 += w * r.l1;
    sum.bin_div += w * r.bin_div;
    sum.attention += w * r.attention;
    sum.total += w * r.total;
    weight += w;
  }
  loss::LossReport mean() const {
    return {sum.l1 / weight, sum.bin_div / weight, sum.attention / weight, sum.total / weight};
  }
};

int eval_command(const std::string& t2m, const std::string& ssrn, const std::string& cache, const std::string& list,
                 std::size_t batch, std::ostream& out) {
  const auto examples = load_examples(io::resolve_cache_dir(cache), list);
  std::unique_ptr<train::Text2MelTrainer> t2m_model;
  std::unique_ptr<train::SsrnTrainer> ssrn_model;
  if (!t2m.empty()) {
    t2m_model = load_trained<train::Text2MelTrainer>(t2m, train::ModelKind::text2mel);
  } else {
    ssrn_model = load_trained<train::SsrnTrainer>(ssrn, train::ModelKind::ssrn);
  }
  Weighted acc;
  for (std::size_t begin = 0; begin < examples.size(); begin += batch) {
    std::vector<const train::Example*> chunk;
    for (std::size_t i = begin; i < std::min(examples.size(), begin + batch); ++i) chunk.push_back(&examples[i]);
    if (t2m_model) {
      const auto b = train::make_batch(chunk);
      acc.add(t2m_model->evaluate(b), static_cast<double>(b.mask_count));
    } else {
      std::size_t longest = 0;
      for (const auto* e : chunk) longest = std::max(longest, e->mel.frames);
      const auto b = train::make_ssrn_batch(chunk, longest, 0);
      acc.add(ssrn_model->evaluate(b), static_cast<double>(b.mask_count));
    }
  }
  const auto r = acc.mean();
  out << "examples " << examples.size() << '\n'
      << std::fixed << std::setprecision(6) << "l1 " << r.l1 << "\nbin_div " << r.bin_div << "\nattention "
      << r.attention << "\ntotal " << r.total << '\n';
  if (!r.finite()) throw NumericError("non-finite held-out loss");
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convolutional text-to-speech", "dctts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand every subcommand");

  std::string metadata, wav_dir, cache = "cache";
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* pre = app.add_subcommand("preprocess", "extract mel and linear targets for every clip into the cache");
  pre->add_option("--metadata", metadata, "LJSpeech-style metadata.csv")->required();
  pre->add_option("--wavs", wav_dir, "directory of <id>.wav files (default: wavs/ beside the metadata)");
  pre->add_option("--cache", cache, "output directory (DCTTS_CACHE_DIR overrides)")->capture_default_str();
  pre->add_option("--threads", threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  std::string toy_dir;
  io::ToyCorpusSpec toy;
  auto* toy_cmd = app.add_subcommand("toy-corpus", "write a synthetic tone corpus in LJSpeech layout");
  toy_cmd->add_option("--out", toy_dir, "output directory")->required();
  toy_cmd->add_option("--clips", toy.clips, "number of clips")->capture_default_str();
  toy_cmd->add_option("--seed", toy.seed, "transcript seed")->capture_default_str();

  TrainArgs t2m_args, ssrn_args;
  auto* t2m_cmd = app.add_subcommand("train-t2m", "train Text2Mel on the feature cache");
  add_train_options(*t2m_cmd, t2m_args);
  auto* ssrn_cmd = app.add_subcommand("train-ssrn", "train SSRN on the feature cache");
  add_train_options(*ssrn_cmd, ssrn_args);

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "text to WAV");
  add_synth_options(*synth_cmd, synth_args);
  synth_cmd->add_option("--ssrn", synth_args.ssrn, "SSRN checkpoint")->required();
  synth_cmd->add_option("--out", synth_args.out, "output WAV")->required();
  synth_cmd->add_option("--attention", synth_args.attention, "also write the attention matrix as PGM");

  SynthArgs plot_args;
  auto* plot_cmd = app.add_subcommand("plot-attention", "write the decoding attention matrix as an 8-bit PGM");
  add_synth_options(*plot_cmd, plot_args);
  plot_cmd->add_option("--out", plot_args.out, "output image (rows are characters)")->required();

  int shapes = 20;
  std::uint64_t grad_seed = 7;
  std::string precision = "both";
  auto* grad_cmd = app.add_subcommand("gradcheck", "finite-difference check of every autodiff op");
  grad_cmd->add_option("--shapes", shapes, "random shapes per op")->capture_default_str()->check(CLI::PositiveNumber);
  grad_cmd->add_option("--seed", grad_seed, "shape and value seed")->capture_default_str();
  grad_cmd->add_option("--precision", precision, "float, double or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"float", "double", "both"}));

  std::string eval_t2m, eval_ssrn, eval_cache = "cache", eval_list;
  std::size_t eval_batch = 16;
  auto* eval_cmd = app.add_subcommand("eval-loss", "mask-weighted held-out losses of a checkpoint");
  auto* which = eval_cmd->add_option_group("model");
  which->add_option("--t2m", eval_t2m, "Text2Mel checkpoint");
  which->add_option("--ssrn", eval_ssrn, "SSRN checkpoint (scored on whole clips)");
  which->require_option(1);
  eval_cmd->add_option("--cache", eval_cache, "feature cache directory (DCTTS_CACHE_DIR overrides)")
      ->capture_default_str();
  eval_cmd->add_option("--list", eval_list, "held-out ids, one per line or metadata.csv rows (default: whole cache)");
  eval_cmd->add_option("--batch", eval_batch, "examples per forward pass")->capture_default_str()->check(
      CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\nrun with --help for usage\n";
    return kUsage;
  }

  try {
    if (*pre) {
      const fs::path meta(metadata);
      const auto index = io::load_corpus(meta, wav_dir.empty() ? meta.parent_path() / "wavs" : fs::path(wav_dir));
      for (const auto& w : index.warnings) err << "warning: " << w << '\n';
      const auto dir = io::resolve_cache_dir(cache);
      fs::create_directories(dir);
      const auto written = io::preprocess(index, dir, threads);
      out << "cached " << written.size() << " clips in " << dir.string() << '\n';
      return kOk;
    }
    if (*toy_cmd) {
      const auto meta = io::write_toy_corpus(toy_dir, toy);
      out << "wrote " << toy.clips << " clips, metadata " << meta.string() << '\n';
      return kOk;
    }
    if (*t2m_cmd) return train_command<train::Text2MelTrainer>(t2m_args, train::ModelKind::text2mel, out);
    if (*ssrn_cmd) return train_command<train::SsrnTrainer>(ssrn_args, train::ModelKind::ssrn, out);
    if (*synth_cmd) {
      const auto mel = run_text2mel(synth_args, out);
      const auto ssrn = load_trained<train::SsrnTrainer>(synth_args.ssrn, train::ModelKind::ssrn);
      const auto wave = synth::synthesize_waveform(mel.mel, ssrn->model());
      dsp::write_wav(synth_args.out, wave);
      if (!synth_args.attention.empty()) write_attention(synth_args.attention, mel);
      out << "wrote " << wave.samples.size() << " samples to " << synth_args.out << '\n';
      return kOk;
    }
    if (*plot_cmd) {
      const auto mel = run_text2mel(plot_args, out);
      write_attention(plot_args.out, mel);
      out << "wrote " << mel.chars << "x" << mel.mel.frames << " attention image to " << plot_args.out << '\n';
      return kOk;
    }
    if (*grad_cmd) return gradcheck_command(shapes, grad_seed, precision, out);
    if (*eval_cmd) return eval_command(eval_t2m, eval_ssrn, eval_cache, eval_list, eval_batch, out);
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumericError;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace dctts::cli
