#include "uboco/train.hpp"

#include "binary_io.hpp"
#include "uboco/boco.hpp"
#include "uboco/error.hpp"
#include "uboco/parallel.hpp"
#include "uboco/random.hpp"
#include "uboco/tsm.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <numeric>

namespace uboco {

namespace {

enum class LabelSource { pseudo, ground_truth };

// Stream tags for derive_seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kShuffleStream = 2;
constexpr std::uint64_t kPseudoLabelStream = 3;
constexpr std::uint64_t kAnnotatorStream = 4;

constexpr double kValidationTheta = 0.05;

struct Evaluation {
  double loss = 0;
  std::optional<double> f1;
};

Evaluation evaluate(const Encoder& encoder, const Dataset& data, const TrainConfig& cfg) {
  RtpConfig rtp = cfg.rtp;
  rtp.mode = SelectionMode::argmax;
  const auto preds = detect_corpus(encoder, data.videos, rtp, cfg.jobs);
  std::vector<double> losses(data.videos.size());
  parallel_for(data.videos.size(), cfg.jobs, [&](std::size_t i) {
    const Eigen::MatrixXd out = encoder.forward(data.videos[i].data);
    const Tsm tsm = build_tsm(out);
    losses[i] = boco_loss(tsm.values, build_mask(static_cast<int>(tsm.size()), preds[i].boundaries, cfg.gap));
  });
  Evaluation ev;
  ev.loss = std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(losses.size());
  if (data.annotations) ev.f1 = f1_at(preds, *data.annotations, kValidationTheta).f1;
  return ev;
}

const BoundaryAnnotation& annotation_for(const Dataset& data, const std::string& id) {
  auto it = data.annotations->find(id);
  if (it == data.annotations->end()) throw DomainError("training: no annotation for video '" + id + "'");
  return it->second;
}

TrainResult run_training(const Dataset& data, const TrainConfig& cfg, LabelSource source) {
  validate(cfg);
  if (data.videos.empty()) throw DomainError("training: empty dataset");
  for (const auto& v : data.videos) validate(v);
  if (source == LabelSource::ground_truth) {
    if (!data.annotations) throw DomainError("training: supervised mode needs annotations");
    for (const auto& v : data.videos) {
      const auto& ann = annotation_for(data, v.video_id);
      if (ann.length != v.num_frames()) throw DomainError("training: annotation length mismatch for '" + v.video_id + "'");
    }
  }

  using Clock = std::chrono::steady_clock;
  TrainResult result{initial_encoder(data, cfg), {}};
  Optimizer optimizer(cfg.optimizer);

  auto start = Clock::now();
  const Evaluation initial = evaluate(result.encoder, data, cfg);
  auto elapsed = [&] {
    return cfg.record_timing ? std::chrono::duration<double>(Clock::now() - start).count() : 0.0;
  };
  result.history.epochs.push_back({0, initial.loss, initial.f1, elapsed()});

  std::vector<std::size_t> order(data.videos.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    start = Clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(derive_seed(cfg.seed, {kShuffleStream, static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), shuffle_rng);

    double loss_sum = 0.0;
    for (std::size_t first = 0; first < order.size(); first += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t last = std::min(order.size(), first + static_cast<std::size_t>(cfg.batch_size));
      std::vector<const FeatureSequence*> batch;
      for (std::size_t k = first; k < last; ++k) batch.push_back(&data.videos[order[k]]);

      std::vector<BoundaryList> labels(batch.size());
      if (source == LabelSource::pseudo) {
        parallel_for(batch.size(), cfg.jobs, [&](std::size_t k) {
          RtpConfig rtp = cfg.rtp;
          rtp.mode = SelectionMode::sample;
          rtp.seed = derive_seed(cfg.seed, {kPseudoLabelStream, static_cast<std::uint64_t>(epoch), order[first + k]});
          labels[k] = detect_with_encoder(result.encoder, *batch[k], rtp).boundaries;
        });
      } else {
        for (std::size_t k = 0; k < batch.size(); ++k) {
          const auto& ann = annotation_for(data, batch[k]->video_id);
          Rng pick(derive_seed(cfg.seed, {kAnnotatorStream, static_cast<std::uint64_t>(epoch), order[first + k]}));
          const auto a = std::uniform_int_distribution<std::size_t>(0, ann.annotators.size() - 1)(pick);
          labels[k] = ann.annotators[a];
        }
      }
      loss_sum += train_step(result.encoder, optimizer, batch, labels, cfg) * static_cast<double>(batch.size());
    }

    EpochRecord record{epoch, loss_sum / static_cast<double>(order.size()), std::nullopt, 0.0};
    if (data.annotations) {
      RtpConfig rtp = cfg.rtp;
      rtp.mode = SelectionMode::argmax;
      record.f1 = f1_at(detect_corpus(result.encoder, data.videos, rtp, cfg.jobs), *data.annotations, kValidationTheta).f1;
    }
    record.seconds = elapsed();
    result.history.epochs.push_back(record);
  }
  return result;
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (!(cfg.optimizer.lr > 0.0)) throw DomainError("training: learning rate must be positive");
  if (cfg.batch_size < 1) throw DomainError("training: batch size must be >= 1");
  if (cfg.epochs < 0) throw DomainError("training: epochs must be >= 0");
  if (cfg.gap < 0) throw DomainError("training: gap must be >= 0");
  if (cfg.output_dim < 2) throw DomainError("training: output dim must be >= 2");
  validate(cfg.rtp);
}

double TrainHistory::best_f1() const {
  double best = 0.0;
  for (const auto& r : epochs)
    if (r.f1) best = std::max(best, *r.f1);
  return best;
}

double TrainHistory::final_f1() const { return epochs.empty() || !epochs.back().f1 ? 0.0 : *epochs.back().f1; }

double TrainHistory::initial_f1() const { return epochs.empty() || !epochs.front().f1 ? 0.0 : *epochs.front().f1; }

VideoLoss video_loss_and_grad(const Encoder& encoder, const Eigen::MatrixXd& frames, const BoundaryList& labels,
                              int gap) {
  if (frames.rows() < 2) throw DomainError("training: video needs L >= 2");
  const Eigen::MatrixXd out = encoder.forward(frames);
  const Tsm tsm = build_tsm(out);
  const BocoMask mask = build_mask(static_cast<int>(frames.rows()), labels, gap);
  const Eigen::MatrixXd grad_tsm = boco_grad_tsm(mask);
  return {boco_loss(tsm.values, mask), encoder.backward(frames, tsm_grad_to_features(out, grad_tsm))};
}

double train_step(Encoder& encoder, Optimizer& optimizer, const std::vector<const FeatureSequence*>& batch,
                  const std::vector<BoundaryList>& labels, const TrainConfig& cfg) {
  if (batch.size() != labels.size()) throw DomainError("training: one label list per video required");
  if (batch.empty()) throw DomainError("training: empty batch");
  for (const auto* v : batch)
    if (v->num_frames() < 2) throw DomainError("training: video '" + v->video_id + "' has L < 2");

  std::vector<VideoLoss> parts(batch.size());
  parallel_for(batch.size(), cfg.jobs,
               [&](std::size_t k) { parts[k] = video_loss_and_grad(encoder, batch[k]->data, labels[k], cfg.gap); });

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(encoder.num_parameters());
  double loss = 0.0;
  for (const auto& p : parts) {
    grad += p.grad;
    loss += p.loss;
  }
  Eigen::VectorXd params = encoder.parameters();
  optimizer.step(params, grad);
  encoder.set_parameters(params);
  return loss / static_cast<double>(batch.size());
}

BoundaryPrediction detect_with_encoder(const Encoder& encoder, const FeatureSequence& seq, const RtpConfig& rtp) {
  BoundaryPrediction pred = rtp_detect(build_tsm(encoder.forward(seq.data)), rtp);
  pred.video_id = seq.video_id;
  return pred;
}

std::vector<BoundaryPrediction> detect_corpus(const Encoder& encoder, const std::vector<FeatureSequence>& videos,
                                              const RtpConfig& rtp, int jobs) {
  std::vector<BoundaryPrediction> preds(videos.size());
  parallel_for(videos.size(), jobs, [&](std::size_t i) { preds[i] = detect_with_encoder(encoder, videos[i], rtp); });
  return preds;
}

Encoder initial_encoder(const Dataset& data, const TrainConfig& cfg) {
  if (data.videos.empty()) throw DomainError("training: empty dataset");
  const auto d_in = static_cast<int>(data.videos.front().dim());
  for (const auto& v : data.videos)
    if (v.dim() != d_in) throw DomainError("training: videos have different feature dims");
  return Encoder::initialize(cfg.encoder, d_in, cfg.output_dim, cfg.hidden_dim, derive_seed(cfg.seed, {kInitStream}));
}

TrainResult train_uboco(const Dataset& data, const TrainConfig& cfg) { return run_training(data, cfg, LabelSource::pseudo); }

TrainResult train_sboco_lite(const Dataset& data, const TrainConfig& cfg) {
  return run_training(data, cfg, LabelSource::ground_truth);
}

void save_history_csv(const TrainHistory& history, const std::filesystem::path& path) {
  std::string out = "epoch,loss,f1,seconds\n";
  char buf[64];
  auto put = [&](double v) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
  };
  for (const auto& r : history.epochs) {
    out += std::to_string(r.epoch) + ",";
    put(r.loss);
    out += ",";
    if (r.f1) put(*r.f1);
    out += ",";
    put(r.seconds);
    out += "\n";
  }
  detail::write_file(path, out);
}

}  // namespace uboco
