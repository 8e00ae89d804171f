#include "cli.hpp"

#include "uboco/boco.hpp"
#include "uboco/encoder.hpp"
#include "uboco/error.hpp"
#include "uboco/eval.hpp"
#include "uboco/features.hpp"
#include "uboco/parallel.hpp"
#include "uboco/random.hpp"
#include "uboco/rtp.hpp"
#include "uboco/scoring.hpp"
#include "uboco/synth.hpp"
#include "uboco/train.hpp"
#include "uboco/tsm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace uboco::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolVersion = UBOCO_VERSION;

/// Bad flag combinations or config contents detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Option registry: every flag is registered with a JSON getter so the
// effective configuration can be echoed, and config-file keys can be applied.

struct Binding {
  CLI::Option* option = nullptr;
  std::function<json()> value;
  bool echoed = true;  // part of effective_config
};

class Registry {
 public:
  template <typename T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& help, bool echoed = true) {
    CLI::Option* opt = app->add_option("--" + name, var, help)->capture_default_str();
    bindings_[name] = {opt, [&var] { return json(var); }, echoed};
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help, bool echoed = true) {
    CLI::Option* opt = app->add_flag("--" + name, var, help);
    bindings_[name] = {opt, [&var] { return json(var); }, echoed};
    return opt;
  }

  /// Fills options not given on the command line from a flat JSON object.
  void apply_config(const json& doc, const fs::path& path) const {
    if (!doc.is_object()) throw UsageError(path.string() + ": config must be a flat JSON object");
    for (const auto& [key, value] : doc.items()) {
      auto it = bindings_.find(key);
      if (it == bindings_.end() || key == "config")
        throw UsageError(path.string() + ": unknown config key '" + key + "'");
      CLI::Option* opt = it->second.option;
      if (opt->count() > 0) continue;
      std::string text;
      if (value.is_string())
        text = value.get<std::string>();
      else if (value.is_boolean() || value.is_number())
        text = value.dump();
      else
        throw UsageError(path.string() + ": config key '" + key + "' must be a scalar");
      opt->clear();
      opt->add_result(text);
      opt->run_callback();
    }
  }

  json effective() const {
    json out = json::object();
    for (const auto& [name, b] : bindings_)
      if (b.echoed) out[name] = b.value();
    return out;
  }

 private:
  std::map<std::string, Binding> bindings_;
};

// ---------------------------------------------------------------------------
// Output staging: results are written into a hidden directory below --out and
// moved into place only when the subcommand succeeds.

class Staging {
 public:
  explicit Staging(fs::path out) : out_(std::move(out)) {
    std::error_code ec;
    created_out_ = !fs::exists(out_, ec);
    fs::create_directories(out_, ec);
    if (ec || !fs::is_directory(out_)) throw IoError(out_.string() + ": cannot create output directory");
    dir_ = out_ / ".staging";
    fs::remove_all(dir_, ec);
    fs::create_directories(dir_, ec);
    if (ec) throw IoError(dir_.string() + ": " + ec.message());
  }

  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
    if (!committed_ && created_out_ && fs::is_empty(out_, ec)) fs::remove(out_, ec);
  }

  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  const fs::path& dir() const { return dir_; }
  fs::path operator/(const std::string& leaf) const { return dir_ / leaf; }

  void commit() {
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(dir_)) entries.push_back(e.path());
    std::sort(entries.begin(), entries.end());
    for (const auto& src : entries) {
      const fs::path dst = out_ / src.filename();
      std::error_code ec;
      fs::remove_all(dst, ec);
      fs::rename(src, dst, ec);
      if (ec) throw IoError(dst.string() + ": " + ec.message());
    }
    committed_ = true;
  }

 private:
  fs::path out_;
  fs::path dir_;
  bool created_out_ = false;
  bool committed_ = false;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed");
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Shared flag groups.

struct Globals {
  std::uint64_t seed = 0;
  std::string config;
  bool quiet = false;
  std::string out;
  int jobs = 1;
};

struct Context {
  const Globals& globals;
  const Registry& registry;

  json metadata() const {
    return {{"tool_version", kToolVersion}, {"effective_config", registry.effective()}, {"seed", globals.seed}};
  }

  void log(const std::string& line) const {
    if (!globals.quiet) std::cerr << line << "\n";
  }
};

json with_metadata(const Context& ctx, json doc) {
  const json meta = ctx.metadata();
  for (const auto& [k, v] : meta.items()) doc[k] = v;
  return doc;
}

struct InputFlags {
  std::string manifest;
  std::string features;
  std::string checkpoint;

  void add(CLI::App* app, Registry& reg, bool allow_checkpoint = true) {
    reg.option(app, "manifest", manifest, "Dataset manifest (manifest.json)");
    reg.option(app, "features", features, "Single feature file (.bin or .csv)");
    if (allow_checkpoint) reg.option(app, "checkpoint", checkpoint, "Encoder checkpoint applied before the TSM");
  }

  std::vector<FeatureSequence> load() const {
    if (manifest.empty() == features.empty()) throw UsageError("exactly one of --manifest and --features is required");
    if (!features.empty()) return {load_features(features)};
    return load_corpus(load_manifest(manifest));
  }

  std::optional<Encoder> encoder() const {
    if (checkpoint.empty()) return std::nullopt;
    return load_checkpoint(checkpoint);
  }
};

struct RtpFlags {
  RtpConfig cfg;
  std::string mode = "argmax";
  bool no_zero_pad = false;

  void add(CLI::App* app, Registry& reg, bool with_mode = true) {
    reg.option(app, "kernel-size", cfg.kernel_size, "Contrastive kernel size K (odd)");
    reg.option(app, "min-parse-len", cfg.min_parse_len, "Intervals shorter than this are not split");
    reg.option(app, "score-gap", cfg.score_gap, "Stop when max - mean of candidate scores is below this");
    reg.option(app, "top-fraction", cfg.top_fraction, "Share of candidates kept for selection");
    reg.option(app, "temperature", cfg.temperature, "Softmax temperature in sample mode");
    reg.option(app, "min-segment", cfg.min_segment, "Minimum frames between a split and an interval edge");
    if (with_mode) reg.option(app, "mode", mode, "Split selection")->check(CLI::IsMember({"argmax", "sample"}));
    reg.flag(app, "no-zero-pad", no_zero_pad, "Score sub-intervals with full-matrix context (ablation)");
  }

  RtpConfig resolved() const {
    RtpConfig out = cfg;
    out.mode = mode == "sample" ? SelectionMode::sample : SelectionMode::argmax;
    out.padding = no_zero_pad ? Padding::none : Padding::zero;
    validate(out);
    return out;
  }
};

json rtp_json(const RtpConfig& c) {
  return {{"kernel_size", c.kernel_size},   {"min_parse_len", c.min_parse_len},
          {"score_gap", c.score_gap},       {"top_fraction", c.top_fraction},
          {"temperature", c.temperature},   {"min_segment", c.min_segment},
          {"mode", c.mode == SelectionMode::sample ? "sample" : "argmax"},
          {"zero_pad", c.padding == Padding::zero}};
}

Tsm tsm_of(const FeatureSequence& seq, const std::optional<Encoder>& enc, SimilarityMode mode) {
  if (!enc) return build_tsm(seq, mode);
  return build_tsm(enc->encode(seq), mode);
}

// ---------------------------------------------------------------------------
// Subcommands. Each one registers its flags and returns the action to run.

using Action = std::function<void(const Context&)>;

Action add_synth(CLI::App* app, Registry& reg) {
  auto cfg = std::make_shared<SynthConfig>();
  reg.option(app, "num-videos", cfg->num_videos, "Number of videos");
  reg.option(app, "length-min", cfg->length_min, "Minimum video length");
  reg.option(app, "length-max", cfg->length_max, "Maximum video length");
  reg.option(app, "segments-min", cfg->segments_min, "Minimum segments per video");
  reg.option(app, "segments-max", cfg->segments_max, "Maximum segments per video");
  reg.option(app, "min-segment-len", cfg->min_segment_len, "Minimum segment length");
  reg.option(app, "dim", cfg->dim, "Feature dimension D");
  reg.option(app, "sigma", cfg->noise_sigma, "Frame noise standard deviation");
  reg.option(app, "lambda", cfg->distractor_weight, "Distractor weight");
  reg.option(app, "rank", cfg->distractor_rank, "Distractor rank r");
  reg.option(app, "smoothness", cfg->distractor_smoothness, "AR(1) coefficient of the distractor walk");
  reg.flag(app, "mixing", cfg->mixing, "Apply a fixed invertible mixing matrix");
  reg.option(app, "annotators", cfg->annotators, "Annotators per video (extras are jittered by one frame)");
  return [cfg](const Context& ctx) {
    SynthConfig c = *cfg;
    c.seed = ctx.globals.seed;
    Staging stage(ctx.globals.out);
    const DatasetManifest m = generate_dataset(c, stage.dir());
    for (const char* name : {"annotations.json", "manifest.json"})
      write_json(stage / name, with_metadata(ctx, read_json_file(stage / name)));
    stage.commit();
    ctx.log("synth: wrote " + std::to_string(m.entries.size()) + " videos to " + ctx.globals.out);
  };
}

Action add_tsm(CLI::App* app, Registry& reg) {
  auto in = std::make_shared<InputFlags>();
  auto similarity = std::make_shared<std::string>("cosine");
  auto pgm = std::make_shared<bool>(false);
  auto raw = std::make_shared<bool>(false);
  in->add(app, reg);
  reg.option(app, "similarity", *similarity, "Similarity measure")->check(CLI::IsMember({"cosine", "neg_l2"}));
  reg.flag(app, "pgm", *pgm, "Write <id>.pgm images");
  reg.flag(app, "raw", *raw, "Write <id>.ubtm float64 matrices");
  return [=](const Context& ctx) {
    const auto videos = in->load();
    const auto enc = in->encoder();
    const SimilarityMode mode = *similarity == "neg_l2" ? SimilarityMode::neg_l2 : SimilarityMode::cosine;
    Staging stage(ctx.globals.out);
    fs::create_directories(stage / "tsm");
    std::vector<json> rows(videos.size());
    parallel_for(videos.size(), ctx.globals.jobs, [&](std::size_t i) {
      const Tsm tsm = tsm_of(videos[i], enc, mode);
      const std::string& id = videos[i].video_id;
      if (*pgm) render_tsm_pgm(tsm, stage.dir() / "tsm" / (id + ".pgm"));
      if (*raw) save_tsm_raw(tsm, stage.dir() / "tsm" / (id + ".ubtm"));
      rows[i] = {{"video_id", id},
                 {"length", tsm.size()},
                 {"min", tsm.values.minCoeff()},
                 {"max", tsm.values.maxCoeff()},
                 {"mean", tsm.values.mean()}};
    });
    json doc = ctx.metadata();
    doc["videos"] = rows;
    write_json(stage / "tsm.json", doc);
    stage.commit();
    ctx.log("tsm: " + std::to_string(videos.size()) + " matrices");
  };
}

Action add_score(CLI::App* app, Registry& reg) {
  auto in = std::make_shared<InputFlags>();
  auto kernel = std::make_shared<int>(RtpConfig{}.kernel_size);
  in->add(app, reg);
  reg.option(app, "kernel-size", *kernel, "Contrastive kernel size K (odd)");
  return [=](const Context& ctx) {
    const auto videos = in->load();
    const auto enc = in->encoder();
    const ContrastiveKernel k = make_kernel(*kernel);
    std::vector<BoundaryScores> scores(videos.size());
    parallel_for(videos.size(), ctx.globals.jobs, [&](std::size_t i) {
      const Tsm tsm = tsm_of(videos[i], enc, SimilarityMode::cosine);
      scores[i] = boundary_scores(tsm, 0, tsm.size(), k, Padding::zero);
    });
    Staging stage(ctx.globals.out);
    std::string csv = "video_id,frame,score\n";
    json files = json::array();
    for (std::size_t i = 0; i < videos.size(); ++i)
      for (Eigen::Index t = 0; t < scores[i].size(); ++t)
        csv += videos[i].video_id + "," + std::to_string(t) + "," + format_double(scores[i].scores(t)) + "\n";
    write_text(stage / "scores.csv", csv);
    json doc = ctx.metadata();
    doc["videos"] = json::array();
    for (const auto& v : videos) doc["videos"].push_back({{"video_id", v.video_id}, {"length", v.num_frames()}});
    write_json(stage / "scores.json", doc);
    stage.commit();
    ctx.log("score: " + std::to_string(videos.size()) + " videos");
  };
}

Action add_detect(CLI::App* app, Registry& reg) {
  auto in = std::make_shared<InputFlags>();
  auto rtp = std::make_shared<RtpFlags>();
  auto parser = std::make_shared<std::string>("rtp");
  auto theta = std::make_shared<double>(0.5);
  in->add(app, reg);
  rtp->add(app, reg);
  reg.option(app, "parser", *parser, "Boundary parser")->check(CLI::IsMember({"rtp", "threshold", "localmax"}));
  reg.option(app, "theta", *theta, "Sigmoid threshold of the threshold and localmax parsers");
  return [=](const Context& ctx) {
    const RtpConfig base = rtp->resolved();
    const auto videos = in->load();
    const auto enc = in->encoder();
    std::vector<BoundaryPrediction> preds(videos.size());
    parallel_for(videos.size(), ctx.globals.jobs, [&](std::size_t i) {
      const Tsm tsm = tsm_of(videos[i], enc, SimilarityMode::cosine);
      if (*parser == "rtp") {
        RtpConfig c = base;
        c.seed = derive_seed(ctx.globals.seed, {static_cast<std::uint64_t>(i)});
        preds[i] = rtp_detect(tsm, c);
      } else {
        const BoundaryScores s = boundary_scores(tsm, 0, tsm.size(), make_kernel(base.kernel_size), base.padding);
        preds[i].boundaries = *parser == "threshold" ? detect_threshold(s, *theta, base.min_segment)
                                                     : detect_local_maxima(s, *theta, base.min_segment);
        preds[i].depths.assign(preds[i].boundaries.size(), 1);
      }
      preds[i].video_id = videos[i].video_id;
    });
    json cfg = rtp_json(base);
    cfg["parser"] = *parser;
    if (*parser != "rtp") cfg["theta"] = *theta;
    json list = json::array();
    for (const auto& p : preds)
      list.push_back({{"video_id", p.video_id}, {"boundaries", p.boundaries}, {"depths", p.depths}, {"config", cfg}});
    Staging stage(ctx.globals.out);
    json doc = ctx.metadata();
    doc["predictions"] = list;
    write_json(stage / "predictions.json", doc);
    stage.commit();
    std::size_t total = 0;
    for (const auto& p : preds) total += p.boundaries.size();
    ctx.log("detect: " + std::to_string(total) + " boundaries in " + std::to_string(preds.size()) + " videos");
  };
}

std::vector<BoundaryPrediction> load_predictions(const fs::path& path) {
  const json doc = read_json_file(path);
  std::vector<BoundaryPrediction> out;
  try {
    for (const auto& p : doc.at("predictions")) {
      BoundaryPrediction pred;
      pred.video_id = p.at("video_id").get<std::string>();
      pred.boundaries = p.at("boundaries").get<BoundaryList>();
      pred.depths = p.value("depths", std::vector<int>{});
      out.push_back(std::move(pred));
    }
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return out;
}

Action add_train(CLI::App* app, Registry& reg) {
  auto manifest = std::make_shared<std::string>();
  auto annotations = std::make_shared<std::string>();
  auto method = std::make_shared<std::string>("uboco");
  auto optimizer = std::make_shared<std::string>("adamw");
  auto encoder = std::make_shared<std::string>("linear");
  auto timing = std::make_shared<bool>(false);
  auto cfg = std::make_shared<TrainConfig>();
  auto rtp = std::make_shared<RtpFlags>();
  reg.option(app, "manifest", *manifest, "Dataset manifest (manifest.json)")->required();
  reg.option(app, "annotations", *annotations, "Annotations (default: annotations.json beside the manifest, if present)");
  reg.option(app, "method", *method, "Training method")->check(CLI::IsMember({"uboco", "sboco-lite"}));
  reg.option(app, "epochs", cfg->epochs, "Training epochs");
  reg.option(app, "batch-size", cfg->batch_size, "Videos per optimizer step");
  reg.option(app, "optimizer", *optimizer, "Optimizer")->check(CLI::IsMember({"adamw", "sgd"}));
  reg.option(app, "lr", cfg->optimizer.lr, "Learning rate");
  reg.option(app, "momentum", cfg->optimizer.momentum, "SGD momentum");
  reg.option(app, "weight-decay", cfg->optimizer.weight_decay, "AdamW decoupled weight decay");
  reg.option(app, "gap", cfg->gap, "Pair band half-width of the BoCo mask");
  reg.option(app, "encoder", *encoder, "Encoder variant")->check(CLI::IsMember({"linear", "mlp1"}));
  reg.option(app, "output-dim", cfg->output_dim, "Encoder output dimension");
  reg.option(app, "hidden-dim", cfg->hidden_dim, "Hidden width of mlp1");
  reg.flag(app, "timing", *timing, "Record wall-clock seconds in history.csv (makes output run-dependent)");
  rtp->add(app, reg, false);
  return [=](const Context& ctx) {
    TrainConfig c = *cfg;
    c.seed = ctx.globals.seed;
    c.jobs = ctx.globals.jobs;
    c.record_timing = *timing;
    c.optimizer.kind = *optimizer == "sgd" ? OptimizerKind::sgd_momentum : OptimizerKind::adamw;
    c.encoder = *encoder == "mlp1" ? EncoderVariant::mlp1 : EncoderVariant::linear;
    c.rtp = rtp->resolved();
    validate(c);

    Dataset data;
    const DatasetManifest m = load_manifest(*manifest);
    data.videos = load_corpus(m);
    fs::path ann = *annotations;
    if (ann.empty()) {
      const fs::path sibling = fs::path(*manifest).parent_path() / "annotations.json";
      if (fs::exists(sibling)) ann = sibling;
    }
    if (!ann.empty()) data.annotations = load_annotations(ann);
    if (*method == "sboco-lite" && !data.annotations) throw UsageError("sboco-lite needs --annotations");

    ctx.log("train: " + *method + " on " + std::to_string(data.videos.size()) + " videos");
    const TrainResult r = *method == "uboco" ? train_uboco(data, c) : train_sboco_lite(data, c);

    Staging stage(ctx.globals.out);
    save_checkpoint(r.encoder, stage / "checkpoint.ubck");
    save_history_csv(r.history, stage / "history.csv");
    json doc = ctx.metadata();
    json epochs = json::array();
    for (const auto& e : r.history.epochs) {
      json row = {{"epoch", e.epoch}, {"loss", e.loss}, {"seconds", e.seconds}};
      row["f1"] = e.f1 ? json(*e.f1) : json(nullptr);
      epochs.push_back(row);
    }
    doc["history"] = epochs;
    if (data.annotations) {
      doc["initial_f1"] = r.history.initial_f1();
      doc["best_f1"] = r.history.best_f1();
      doc["final_f1"] = r.history.final_f1();
    }
    write_json(stage / "train.json", doc);
    stage.commit();
    if (data.annotations)
      ctx.log("train: F1@0.05 " + format_double(r.history.initial_f1()) + " -> " + format_double(r.history.final_f1()));
  };
}

Action add_eval(CLI::App* app, Registry& reg) {
  auto predictions = std::make_shared<std::string>();
  auto annotations = std::make_shared<std::string>();
  auto rule = std::make_shared<std::string>("max");
  reg.option(app, "predictions", *predictions, "predictions.json from detect")->required();
  reg.option(app, "annotations", *annotations, "Ground-truth annotations.json")->required();
  reg.option(app, "annotator-rule", *rule, "Multi-annotator rule")->check(CLI::IsMember({"max", "first"}));
  return [=](const Context& ctx) {
    const auto preds = load_predictions(*predictions);
    const AnnotationSet ann = load_annotations(*annotations);
    const EvalResult r = average_f1(preds, ann, *rule == "first" ? AnnotatorRule::first : AnnotatorRule::max);
    json rows = json::array();
    std::string csv = "theta,precision,recall,f1\n";
    for (const auto& t : r.per_threshold) {
      rows.push_back({{"theta", t.theta}, {"precision", t.precision}, {"recall", t.recall}, {"f1", t.f1}});
      csv += format_double(t.theta) + "," + format_double(t.precision) + "," + format_double(t.recall) + "," +
             format_double(t.f1) + "\n";
    }
    Staging stage(ctx.globals.out);
    json doc = ctx.metadata();
    doc["per_threshold"] = rows;
    doc["average_f1"] = r.average_f1;
    write_json(stage / "eval.json", doc);
    write_text(stage / "eval.csv", csv);
    stage.commit();
    ctx.log("eval: F1@0.05 " + format_double(r.per_threshold.front().f1) + ", average F1 " +
            format_double(r.average_f1));
  };
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Generic event boundary detection from temporal self-similarity"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  Registry reg;
  reg.option(&app, "seed", g.seed, "Process-wide seed");
  reg.option(&app, "config", g.config, "Flat JSON file of flag names to values", false);
  reg.flag(&app, "quiet", g.quiet, "Suppress progress logging", false);
  reg.option(&app, "out", g.out, "Output directory", false);
  reg.option(&app, "jobs", g.jobs, "Worker threads (results do not depend on this)", false)
      ->check(CLI::PositiveNumber);

  // Each subcommand gets its own registry layered over the globals.
  std::map<CLI::App*, std::pair<std::unique_ptr<Registry>, Action>> subs;
  auto add = [&](const std::string& name, const std::string& help, auto builder) {
    CLI::App* sub = app.add_subcommand(name, help);
    auto r = std::make_unique<Registry>(reg);
    Action act = builder(sub, *r);
    subs.emplace(sub, std::make_pair(std::move(r), std::move(act)));
  };
  add("synth", "Generate a synthetic corpus", add_synth);
  add("tsm", "Build temporal self-similarity matrices", add_tsm);
  add("score", "Write diagonal boundary scores", add_score);
  add("detect", "Detect boundaries", add_detect);
  add("train", "Train an encoder", add_train);
  add("eval", "Evaluate predictions", add_eval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  auto& [sub_reg, action] = subs.at(chosen);
  try {
    if (!g.config.empty()) {
      if (!fs::exists(g.config)) throw IoError(g.config + ": config file not found");
      json doc;
      try {
        doc = read_json_file(g.config);
      } catch (const FormatError& e) {
        throw UsageError(e.what());
      }
      sub_reg->apply_config(doc, g.config);
    }
    if (g.out.empty()) throw UsageError("--out is required");
    if (g.jobs < 1) throw UsageError("--jobs must be >= 1");
    action(Context{g, *sub_reg});
    return kOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const DomainError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data());
}

}  // namespace uboco::cli
