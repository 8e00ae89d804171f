#ifndef UBOCO_ENCODER_HPP
#define UBOCO_ENCODER_HPP

#include "uboco/features.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>

namespace uboco {

enum class EncoderVariant : std::uint32_t { linear = 0, mlp1 = 1 };

/// Frame-wise trainable projection.
///   linear: y = W x + b
///   mlp1:   y = W tanh(W_h x) + b
/// Parameters flatten in declared order: [W_h row-major (mlp1 only), W row-major, b].
class Encoder {
 public:
  Encoder() = default;

  /// Glorot-uniform weights, zero bias, seeded.
  static Encoder initialize(EncoderVariant variant, int input_dim, int output_dim, int hidden_dim, std::uint64_t seed);
  /// y = x, for tests and as a pass-through baseline.
  static Encoder identity(int dim);

  EncoderVariant variant() const { return variant_; }
  int input_dim() const { return static_cast<int>(variant_ == EncoderVariant::mlp1 ? w_hidden_.cols() : w_out_.cols()); }
  int output_dim() const { return static_cast<int>(w_out_.rows()); }
  int hidden_dim() const { return variant_ == EncoderVariant::mlp1 ? static_cast<int>(w_hidden_.rows()) : 0; }

  const Eigen::MatrixXd& weights() const { return w_out_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  const Eigen::MatrixXd& hidden_weights() const { return w_hidden_; }
  Eigen::MatrixXd& weights() { return w_out_; }
  Eigen::VectorXd& bias() { return bias_; }
  Eigen::MatrixXd& hidden_weights() { return w_hidden_; }

  Eigen::Index num_parameters() const { return w_hidden_.size() + w_out_.size() + bias_.size(); }
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& flat);

  /// Rows are frames; returns L x output_dim.
  Eigen::MatrixXd forward(const Eigen::MatrixXd& frames) const;
  FeatureSequence encode(const FeatureSequence& seq) const;

  /// Parameter gradient (flat, declared order) given dLoss/dOutput for `frames`.
  Eigen::VectorXd backward(const Eigen::MatrixXd& frames, const Eigen::MatrixXd& grad_output) const;

  bool operator==(const Encoder& other) const;

 private:
  void check_input(const Eigen::MatrixXd& frames) const;

  EncoderVariant variant_ = EncoderVariant::linear;
  Eigen::MatrixXd w_hidden_;  // H x D_in, empty for linear
  Eigen::MatrixXd w_out_;     // D_out x (H or D_in)
  Eigen::VectorXd bias_;      // D_out
};

/// "UBCK", u32 version (=1), u32 variant, u32 D_in, u32 D_out, u32 H, then the
/// flat parameters as little-endian float64.
void save_checkpoint(const Encoder& encoder, const std::filesystem::path& path);
Encoder load_checkpoint(const std::filesystem::path& path);

}  // namespace uboco

#endif  // UBOCO_ENCODER_HPP
