#include "oracles.hpp"
#include "temp_dir.hpp"
#include "uboco/boco.hpp"
#include "uboco/encoder.hpp"
#include "uboco/error.hpp"
#include "uboco/optimizer.hpp"
#include "uboco/random.hpp"
#include "uboco/synth.hpp"
#include "uboco/train.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace uboco;

namespace {

Eigen::MatrixXd random_frames(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = n(rng);
  return x;
}

double loss_with_parameters(Encoder enc, const Eigen::VectorXd& p, const Eigen::MatrixXd& x, const BocoMask& mask) {
  enc.set_parameters(p);
  return boco_loss(build_tsm(enc.forward(x)).values, mask);
}

Dataset small_corpus(std::uint64_t seed, int videos, double lambda) {
  SynthConfig cfg;
  cfg.num_videos = videos;
  cfg.length_min = 40;
  cfg.length_max = 60;
  cfg.segments_max = 4;
  cfg.dim = 8;
  cfg.noise_sigma = 0.1;
  cfg.distractor_weight = lambda;
  cfg.mixing = true;
  cfg.seed = seed;
  const auto corpus = generate_corpus(cfg);
  return {features_of(corpus), annotations_of(corpus)};
}

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  cfg.output_dim = 8;
  cfg.hidden_dim = 6;
  cfg.record_timing = false;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST(Encoder, IdentityLinearIsPassThrough) {
  std::mt19937_64 rng(1);
  const Eigen::MatrixXd x = random_frames(5, 4, rng);
  EXPECT_EQ(Encoder::identity(4).forward(x), x);
}

TEST(Encoder, ZeroWeightsGiveZeroFeaturesAndFiniteTsm) {
  Encoder enc = Encoder::initialize(EncoderVariant::linear, 3, 4, 0, 1);
  enc.weights().setZero();
  std::mt19937_64 rng(2);
  const Eigen::MatrixXd out = enc.forward(random_frames(5, 3, rng));
  EXPECT_EQ(out, Eigen::MatrixXd::Zero(5, 4));
  const Tsm tsm = build_tsm(out);
  EXPECT_TRUE(tsm.values.allFinite());
  EXPECT_EQ(tsm.values, Eigen::MatrixXd::Identity(5, 5));
}

TEST(Encoder, RowsAreIndependent) {
  std::mt19937_64 rng(3);
  for (auto variant : {EncoderVariant::linear, EncoderVariant::mlp1}) {
    const Encoder enc = Encoder::initialize(variant, 4, 3, 5, 7);
    Eigen::MatrixXd x = random_frames(6, 4, rng);
    const Eigen::MatrixXd before = enc.forward(x);
    x.row(4).setRandom();
    const Eigen::MatrixXd after = enc.forward(x);
    for (int i = 0; i < 6; ++i)
      if (i != 4) EXPECT_EQ(after.row(i), before.row(i));
  }
}

TEST(Encoder, ParameterLayoutRoundTrip) {
  Encoder enc = Encoder::initialize(EncoderVariant::mlp1, 3, 2, 4, 9);
  EXPECT_EQ(enc.num_parameters(), 4 * 3 + 2 * 4 + 2);
  Eigen::VectorXd p = enc.parameters();
  EXPECT_EQ(p(1), enc.hidden_weights()(0, 1));
  EXPECT_EQ(p(12 + 5), enc.weights()(1, 1));
  p.setLinSpaced(-1, 1);
  enc.set_parameters(p);
  EXPECT_EQ(enc.parameters(), p);
  EXPECT_EQ(enc.bias()(1), 1.0);
  EXPECT_THROW(enc.set_parameters(Eigen::VectorXd::Zero(3)), DomainError);
}

TEST(Encoder, SeededInitializationIsReproducible) {
  EXPECT_EQ(Encoder::initialize(EncoderVariant::mlp1, 5, 3, 4, 11), Encoder::initialize(EncoderVariant::mlp1, 5, 3, 4, 11));
  EXPECT_FALSE(Encoder::initialize(EncoderVariant::linear, 5, 3, 0, 11) ==
               Encoder::initialize(EncoderVariant::linear, 5, 3, 0, 12));
  const Encoder enc = Encoder::initialize(EncoderVariant::linear, 5, 3, 0, 11);
  EXPECT_EQ(enc.bias(), Eigen::VectorXd::Zero(3));
  EXPECT_LE(enc.weights().cwiseAbs().maxCoeff(), std::sqrt(6.0 / 8.0));
}

TEST(Encoder, DimensionMismatchIsDomainError) {
  const Encoder enc = Encoder::initialize(EncoderVariant::linear, 5, 3, 0, 1);
  EXPECT_THROW(enc.forward(Eigen::MatrixXd::Ones(4, 4)), DomainError);
  EXPECT_THROW(enc.encode(FeatureSequence{"v", Eigen::MatrixXd::Ones(4, 4)}), DomainError);
  EXPECT_THROW(Encoder::initialize(EncoderVariant::linear, 5, 1, 0, 1), DomainError);
}

TEST(Encoder, ParameterGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  for (auto variant : {EncoderVariant::linear, EncoderVariant::mlp1}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 6);
      // Rank-one inputs or a single hidden unit make every output row colinear, where cosine has a kink.
      const int d_in = 2 + static_cast<int>(rng() % 5);
      const int d_out = 2 + static_cast<int>(rng() % 5);
      Encoder enc = Encoder::initialize(variant, d_in, d_out, 2 + static_cast<int>(rng() % 4), rng());
      enc.bias().setRandom();
      const Eigen::MatrixXd x = random_frames(n, d_in, rng);
      const BoundaryList labels{1 + static_cast<int>(rng() % (n - 1))};
      const BocoMask mask = build_mask(n, labels, 1 + static_cast<int>(rng() % 4));
      const VideoLoss analytic = video_loss_and_grad(enc, x, labels, mask.gap);
      EXPECT_NEAR(analytic.loss, loss_with_parameters(enc, enc.parameters(), x, mask), 1e-12);
      const Eigen::VectorXd numeric = oracle::numeric_gradient(
          [&](const Eigen::VectorXd& p) { return loss_with_parameters(enc, p, x, mask); }, enc.parameters());
      EXPECT_LT(oracle::relative_error(analytic.grad, numeric), 1e-4)
          << "variant " << static_cast<int>(variant) << " n=" << n << " d_in=" << d_in << " d_out=" << d_out;
    }
  }
}

TEST(Encoder, LinearSixByFiveToThree) {
  std::mt19937_64 rng(5);
  Encoder enc = Encoder::initialize(EncoderVariant::linear, 5, 3, 0, 17);
  enc.bias().setRandom();
  const Eigen::MatrixXd x = random_frames(6, 5, rng);
  const BocoMask mask = build_mask(6, {3}, 2);
  const VideoLoss analytic = video_loss_and_grad(enc, x, {3}, 2);
  const Eigen::VectorXd numeric = oracle::numeric_gradient(
      [&](const Eigen::VectorXd& p) { return loss_with_parameters(enc, p, x, mask); }, enc.parameters());
  EXPECT_LT(oracle::relative_error(analytic.grad, numeric), 1e-4);
}

TEST(Checkpoint, RoundTripAndErrors) {
  TempDir dir;
  const Encoder enc = Encoder::initialize(EncoderVariant::mlp1, 4, 3, 5, 8);
  save_checkpoint(enc, dir / "e.ubck");
  EXPECT_EQ(load_checkpoint(dir / "e.ubck"), enc);
  std::string bytes = slurp(dir / "e.ubck");
  spit(dir / "bad.ubck", "XXXX" + bytes.substr(4));
  EXPECT_THROW(load_checkpoint(dir / "bad.ubck"), FormatError);
  spit(dir / "short.ubck", bytes.substr(0, bytes.size() - 1));
  EXPECT_THROW(load_checkpoint(dir / "short.ubck"), FormatError);
  EXPECT_THROW(load_checkpoint(dir / "absent.ubck"), IoError);
}

TEST(Optimizer, SgdMomentumUpdate) {
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::sgd_momentum;
  cfg.lr = 0.1;
  cfg.momentum = 0.5;
  Optimizer opt(cfg);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(2, 1.0);
  const Eigen::VectorXd g = Eigen::VectorXd::Constant(2, 2.0);
  opt.step(p, g);
  EXPECT_DOUBLE_EQ(p(0), 1.0 - 0.2);
  opt.step(p, g);
  EXPECT_DOUBLE_EQ(p(0), 0.8 - 0.1 * (0.5 * 2.0 + 2.0));
  EXPECT_EQ(opt.steps(), 2);
}

TEST(Optimizer, AdamWFirstStepAndDecay) {
  OptimizerConfig cfg;
  cfg.lr = 0.01;
  cfg.weight_decay = 0.1;
  Optimizer opt(cfg);
  Eigen::VectorXd p(2);
  p << 2.0, -1.0;
  Eigen::VectorXd g(2);
  g << 0.5, 0.0;
  opt.step(p, g);
  // Bias-corrected first step moves by lr * g / (|g| + eps); decay scales by 1 - lr * wd.
  EXPECT_NEAR(p(0), 2.0 * (1 - 0.001) - 0.01 * 0.5 / (0.5 + 1e-8), 1e-12);
  EXPECT_NEAR(p(1), -1.0 * (1 - 0.001), 1e-12);
}

TEST(Optimizer, ZeroGradientSgdLeavesParameters) {
  OptimizerConfig cfg;
  cfg.kind = OptimizerKind::sgd_momentum;
  cfg.momentum = 0.0;
  Optimizer opt(cfg);
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(4, 0, 1);
  const Eigen::VectorXd before = p;
  opt.step(p, Eigen::VectorXd::Zero(4));
  EXPECT_EQ(p, before);
}

TEST(TrainStep, ZeroGapLeavesParametersUnchanged) {
  const Dataset data = small_corpus(1, 2, 0.5);
  TrainConfig cfg = quick_config();
  cfg.gap = 0;
  cfg.optimizer.kind = OptimizerKind::sgd_momentum;
  cfg.optimizer.momentum = 0.0;
  Encoder enc = initial_encoder(data, cfg);
  const Encoder before = enc;
  Optimizer opt(cfg.optimizer);
  const double loss = train_step(enc, opt, {&data.videos[0], &data.videos[1]}, {{}, {}}, cfg);
  EXPECT_EQ(loss, 0.0);
  EXPECT_EQ(enc, before);
}

TEST(TrainStep, SgdStepDescends) {
  int success = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset data = small_corpus(seed, 1, 0.5);
    TrainConfig cfg = quick_config();
    cfg.seed = seed;
    cfg.optimizer.kind = OptimizerKind::sgd_momentum;
    cfg.optimizer.lr = 1e-3;
    Encoder enc = initial_encoder(data, cfg);
    Optimizer opt(cfg.optimizer);
    const BoundaryList labels = data.annotations->at(data.videos[0].video_id).annotators[0];
    const double before = train_step(enc, opt, {&data.videos[0]}, {labels}, cfg);
    const double after = video_loss_and_grad(enc, data.videos[0].data, labels, cfg.gap).loss;
    success += after < before;
  }
  EXPECT_GE(success, 19);
}

TEST(TrainStep, BatchLossIsMeanAndGradientIsSum) {
  const Dataset data = small_corpus(2, 3, 0.5);
  TrainConfig cfg = quick_config();
  cfg.optimizer.kind = OptimizerKind::sgd_momentum;
  cfg.optimizer.momentum = 0.0;
  cfg.optimizer.lr = 1e-2;
  Encoder enc = initial_encoder(data, cfg);
  std::vector<BoundaryList> labels;
  std::vector<const FeatureSequence*> batch;
  double mean = 0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(enc.num_parameters());
  for (const auto& v : data.videos) {
    batch.push_back(&v);
    labels.push_back(data.annotations->at(v.video_id).annotators[0]);
    const VideoLoss l = video_loss_and_grad(enc, v.data, labels.back(), cfg.gap);
    mean += l.loss / 3.0;
    sum += l.grad;
  }
  const Eigen::VectorXd expected = enc.parameters() - 1e-2 * sum;
  Optimizer opt(cfg.optimizer);
  EXPECT_NEAR(train_step(enc, opt, batch, labels, cfg), mean, 1e-12);
  EXPECT_LE((enc.parameters() - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(TrainStep, Errors) {
  const Dataset data = small_corpus(2, 1, 0.5);
  TrainConfig cfg = quick_config();
  Encoder enc = initial_encoder(data, cfg);
  Optimizer opt(cfg.optimizer);
  EXPECT_THROW(train_step(enc, opt, {}, {}, cfg), DomainError);
  EXPECT_THROW(train_step(enc, opt, {&data.videos[0]}, {}, cfg), DomainError);
  const FeatureSequence tiny{"t", Eigen::MatrixXd::Ones(1, 8)};
  EXPECT_THROW(train_step(enc, opt, {&tiny}, {{}}, cfg), DomainError);
}

TEST(Train, ZeroEpochsKeepsInitialization) {
  const Dataset data = small_corpus(4, 6, 1.0);
  TrainConfig cfg = quick_config();
  cfg.epochs = 0;
  const TrainResult u = train_uboco(data, cfg);
  const TrainResult s = train_sboco_lite(data, cfg);
  EXPECT_EQ(u.encoder, initial_encoder(data, cfg));
  EXPECT_EQ(s.encoder, u.encoder);
  ASSERT_EQ(u.history.epochs.size(), 1u);
  ASSERT_EQ(s.history.epochs.size(), 1u);
  EXPECT_EQ(u.history.epochs[0].loss, s.history.epochs[0].loss);
  EXPECT_EQ(u.history.epochs[0].f1, s.history.epochs[0].f1);
}

TEST(Train, RunsAreBitIdenticalAndJobIndependent) {
  const Dataset data = small_corpus(5, 9, 1.0);
  TrainConfig cfg = quick_config();
  const TrainResult a = train_uboco(data, cfg);
  const TrainResult b = train_uboco(data, cfg);
  cfg.jobs = 4;
  const TrainResult c = train_uboco(data, cfg);
  EXPECT_EQ(a.encoder, b.encoder);
  EXPECT_EQ(a.encoder, c.encoder);
  ASSERT_EQ(a.history.epochs.size(), 3u);
  for (std::size_t k = 0; k < a.history.epochs.size(); ++k) {
    EXPECT_EQ(a.history.epochs[k].loss, c.history.epochs[k].loss);
    EXPECT_EQ(a.history.epochs[k].f1, c.history.epochs[k].f1);
    EXPECT_EQ(a.history.epochs[k].seconds, 0.0);
  }
  const TrainResult s1 = train_sboco_lite(data, cfg);
  const TrainResult s2 = train_sboco_lite(data, cfg);
  EXPECT_EQ(s1.encoder, s2.encoder);
}

TEST(Train, SupervisedLoopMatchesManualSteps) {
  // One annotator and one batch per epoch: each epoch is a single step on the shuffled videos.
  const Dataset data = small_corpus(6, 5, 1.0);
  TrainConfig cfg = quick_config();
  cfg.batch_size = 5;
  const TrainResult r = train_sboco_lite(data, cfg);
  Encoder enc = initial_encoder(data, cfg);
  Optimizer opt(cfg.optimizer);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(data.videos.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle(derive_seed(cfg.seed, {2, static_cast<std::uint64_t>(epoch)}));
    std::shuffle(order.begin(), order.end(), shuffle);
    std::vector<const FeatureSequence*> batch;
    std::vector<BoundaryList> labels;
    for (auto i : order) {
      batch.push_back(&data.videos[i]);
      labels.push_back(data.annotations->at(data.videos[i].video_id).annotators[0]);
    }
    train_step(enc, opt, batch, labels, cfg);
  }
  EXPECT_EQ(r.encoder, enc);
}

TEST(Train, Errors) {
  TrainConfig cfg = quick_config();
  EXPECT_THROW(train_uboco(Dataset{}, cfg), DomainError);
  Dataset unlabelled = small_corpus(7, 2, 1.0);
  unlabelled.annotations.reset();
  EXPECT_THROW(train_sboco_lite(unlabelled, cfg), DomainError);
  Dataset partial = small_corpus(7, 2, 1.0);
  partial.annotations->erase(partial.annotations->begin());
  EXPECT_THROW(train_sboco_lite(partial, cfg), DomainError);
  cfg.batch_size = 0;
  EXPECT_THROW(train_uboco(small_corpus(7, 2, 1.0), cfg), DomainError);
}

TEST(Train, HistoryCsv) {
  TempDir dir;
  TrainHistory h;
  h.epochs.push_back({0, -0.25, 0.5, 0.0});
  h.epochs.push_back({1, -0.5, std::nullopt, 0.0});
  save_history_csv(h, dir / "h.csv");
  EXPECT_EQ(slurp(dir / "h.csv"), "epoch,loss,f1,seconds\n0,-0.25,0.5,0\n1,-0.5,,0\n");
  EXPECT_EQ(h.initial_f1(), 0.5);
  EXPECT_EQ(h.best_f1(), 0.5);
}

TEST(Detect, EncoderCorpusDetectionIsJobIndependent) {
  const Dataset data = small_corpus(8, 7, 0.0);
  const Encoder enc = Encoder::identity(8);
  RtpConfig rtp;
  const auto a = detect_corpus(enc, data.videos, rtp, 1);
  const auto b = detect_corpus(enc, data.videos, rtp, 3);
  ASSERT_EQ(a.size(), 7u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].video_id, data.videos[k].video_id);
    EXPECT_EQ(a[k].boundaries, b[k].boundaries);
    EXPECT_EQ(a[k].boundaries, detect_with_encoder(enc, data.videos[k], rtp).boundaries);
  }
}
