#include "uboco/encoder.hpp"

#include "binary_io.hpp"
#include "uboco/error.hpp"
#include "uboco/random.hpp"

#include <cmath>

namespace uboco {

namespace {

constexpr std::string_view kCheckpointMagic = "UBCK";
constexpr std::uint32_t kCheckpointVersion = 1;

Eigen::MatrixXd glorot(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = dist(rng);
  return m;
}

// Row-major copies keep the flat layout independent of Eigen's storage order.
void append_row_major(Eigen::VectorXd& flat, Eigen::Index& at, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat(at++) = m(i, j);
}

void read_row_major(const Eigen::VectorXd& flat, Eigen::Index& at, Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = flat(at++);
}

}  // namespace

Encoder Encoder::initialize(EncoderVariant variant, int input_dim, int output_dim, int hidden_dim,
                            std::uint64_t seed) {
  if (input_dim < 1) throw DomainError("encoder: input dim must be >= 1");
  if (output_dim < 2) throw DomainError("encoder: output dim must be >= 2");
  Rng rng(seed);
  Encoder enc;
  enc.variant_ = variant;
  if (variant == EncoderVariant::mlp1) {
    if (hidden_dim < 1) throw DomainError("encoder: hidden dim must be >= 1");
    enc.w_hidden_ = glorot(hidden_dim, input_dim, rng);
    enc.w_out_ = glorot(output_dim, hidden_dim, rng);
  } else {
    enc.w_out_ = glorot(output_dim, input_dim, rng);
  }
  enc.bias_ = Eigen::VectorXd::Zero(output_dim);
  return enc;
}

Encoder Encoder::identity(int dim) {
  Encoder enc;
  enc.w_out_ = Eigen::MatrixXd::Identity(dim, dim);
  enc.bias_ = Eigen::VectorXd::Zero(dim);
  return enc;
}

Eigen::VectorXd Encoder::parameters() const {
  Eigen::VectorXd flat(num_parameters());
  Eigen::Index at = 0;
  append_row_major(flat, at, w_hidden_);
  append_row_major(flat, at, w_out_);
  flat.segment(at, bias_.size()) = bias_;
  return flat;
}

void Encoder::set_parameters(const Eigen::VectorXd& flat) {
  if (flat.size() != num_parameters()) throw DomainError("encoder: parameter vector has wrong length");
  Eigen::Index at = 0;
  read_row_major(flat, at, w_hidden_);
  read_row_major(flat, at, w_out_);
  bias_ = flat.segment(at, bias_.size());
}

void Encoder::check_input(const Eigen::MatrixXd& frames) const {
  if (frames.cols() != input_dim())
    throw DomainError("encoder expects D=" + std::to_string(input_dim()) + ", got " + std::to_string(frames.cols()));
}

Eigen::MatrixXd Encoder::forward(const Eigen::MatrixXd& frames) const {
  check_input(frames);
  if (variant_ == EncoderVariant::mlp1) {
    const Eigen::MatrixXd hidden = (frames * w_hidden_.transpose()).array().tanh().matrix();
    return (hidden * w_out_.transpose()).rowwise() + bias_.transpose();
  }
  return (frames * w_out_.transpose()).rowwise() + bias_.transpose();
}

FeatureSequence Encoder::encode(const FeatureSequence& seq) const {
  return {seq.video_id, forward(seq.data)};
}

Eigen::VectorXd Encoder::backward(const Eigen::MatrixXd& frames, const Eigen::MatrixXd& grad_output) const {
  check_input(frames);
  if (grad_output.rows() != frames.rows() || grad_output.cols() != output_dim())
    throw DomainError("encoder: output gradient has wrong shape");
  Eigen::VectorXd flat(num_parameters());
  Eigen::Index at = 0;
  if (variant_ == EncoderVariant::mlp1) {
    const Eigen::MatrixXd hidden = (frames * w_hidden_.transpose()).array().tanh().matrix();
    const Eigen::MatrixXd grad_hidden =
        ((grad_output * w_out_).array() * (1.0 - hidden.array().square())).matrix();
    append_row_major(flat, at, grad_hidden.transpose() * frames);
    append_row_major(flat, at, grad_output.transpose() * hidden);
  } else {
    append_row_major(flat, at, grad_output.transpose() * frames);
  }
  flat.segment(at, bias_.size()) = grad_output.colwise().sum().transpose();
  return flat;
}

bool Encoder::operator==(const Encoder& other) const {
  return variant_ == other.variant_ && w_hidden_.rows() == other.w_hidden_.rows() &&
         w_hidden_.cols() == other.w_hidden_.cols() && w_out_.rows() == other.w_out_.rows() &&
         w_out_.cols() == other.w_out_.cols() && parameters() == other.parameters();
}

void save_checkpoint(const Encoder& encoder, const std::filesystem::path& path) {
  std::string out;
  out.append(kCheckpointMagic);
  detail::put_u32(out, kCheckpointVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(encoder.variant()));
  detail::put_u32(out, static_cast<std::uint32_t>(encoder.input_dim()));
  detail::put_u32(out, static_cast<std::uint32_t>(encoder.output_dim()));
  detail::put_u32(out, static_cast<std::uint32_t>(encoder.hidden_dim()));
  const Eigen::VectorXd flat = encoder.parameters();
  for (Eigen::Index i = 0; i < flat.size(); ++i) detail::put_f64(out, flat(i));
  detail::write_file(path, out);
}

Encoder load_checkpoint(const std::filesystem::path& path) {
  const std::string bytes = detail::read_file(path);
  detail::ByteReader in(bytes, path.string());
  in.expect_magic(kCheckpointMagic);
  if (in.u32() != kCheckpointVersion) throw FormatError(path.string() + ": unsupported checkpoint version");
  const std::uint32_t tag = in.u32();
  if (tag > 1) throw FormatError(path.string() + ": unknown encoder variant");
  const auto variant = static_cast<EncoderVariant>(tag);
  const auto d_in = static_cast<int>(in.u32());
  const auto d_out = static_cast<int>(in.u32());
  const auto hidden = static_cast<int>(in.u32());
  Encoder enc = Encoder::initialize(variant, d_in, d_out, std::max(hidden, 1), 0);
  Eigen::VectorXd flat(enc.num_parameters());
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat(i) = in.f64();
  in.expect_end();
  enc.set_parameters(flat);
  return enc;
}

}  // namespace uboco
