#ifndef UBOCO_TRAIN_HPP
#define UBOCO_TRAIN_HPP

#include "uboco/encoder.hpp"
#include "uboco/eval.hpp"
#include "uboco/features.hpp"
#include "uboco/optimizer.hpp"
#include "uboco/rtp.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace uboco {

struct TrainConfig {
  OptimizerConfig optimizer;
  int batch_size = 32;
  int epochs = 10;
  std::uint64_t seed = 0;
  RtpConfig rtp;  // inference config; pseudo-labels use it in sample mode
  int gap = 8;
  EncoderVariant encoder = EncoderVariant::linear;
  int output_dim = 64;
  int hidden_dim = 64;
  int jobs = 1;
  bool record_timing = true;
};

void validate(const TrainConfig& cfg);

/// Epoch 0 describes the initial encoder; epoch k >= 1 the encoder after k passes.
/// `loss` is the mean training loss of the epoch (epoch 0: the initial encoder's
/// loss against its own argmax RTP labels). `f1` is F1@0.05 of argmax RTP.
struct EpochRecord {
  int epoch = 0;
  double loss = 0;
  std::optional<double> f1;
  double seconds = 0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  /// Highest recorded F1 (epoch 0 included); 0 without annotations.
  double best_f1() const;
  double final_f1() const;
  double initial_f1() const;
};

struct TrainResult {
  Encoder encoder;
  TrainHistory history;
};

/// Videos plus optional annotations (required for supervised training,
/// used for per-epoch validation when present).
struct Dataset {
  std::vector<FeatureSequence> videos;
  std::optional<AnnotationSet> annotations;
};

struct VideoLoss {
  double loss = 0;
  Eigen::VectorXd grad;  // flat, encoder parameter order
};

/// encode -> cosine TSM -> BoCo mask from `labels` -> loss and parameter gradient.
VideoLoss video_loss_and_grad(const Encoder& encoder, const Eigen::MatrixXd& frames, const BoundaryList& labels,
                              int gap);

/// One optimizer step on the summed batch gradient (summed in batch order).
/// Returns the mean loss of the batch before the step.
double train_step(Encoder& encoder, Optimizer& optimizer, const std::vector<const FeatureSequence*>& batch,
                  const std::vector<BoundaryList>& labels, const TrainConfig& cfg);

/// RTP on the encoder's cosine TSM of `seq`.
BoundaryPrediction detect_with_encoder(const Encoder& encoder, const FeatureSequence& seq, const RtpConfig& rtp);

std::vector<BoundaryPrediction> detect_corpus(const Encoder& encoder, const std::vector<FeatureSequence>& videos,
                                              const RtpConfig& rtp, int jobs);

Encoder initial_encoder(const Dataset& data, const TrainConfig& cfg);

/// Pseudo-label loop: every batch is labelled by sampled RTP on the current
/// encoder (no parameter updates while labelling), then trained on those labels.
TrainResult train_uboco(const Dataset& data, const TrainConfig& cfg);

/// Same loop with ground-truth labels; one annotator is drawn per video per epoch.
TrainResult train_sboco_lite(const Dataset& data, const TrainConfig& cfg);

/// Columns: epoch,loss,f1,seconds.
void save_history_csv(const TrainHistory& history, const std::filesystem::path& path);

}  // namespace uboco

#endif  // UBOCO_TRAIN_HPP
