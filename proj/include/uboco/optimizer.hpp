#ifndef UBOCO_OPTIMIZER_HPP
#define UBOCO_OPTIMIZER_HPP

#include <Eigen/Core>

namespace uboco {

enum class OptimizerKind { sgd_momentum, adamw };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adamw;
  double lr = 1e-3;
  double momentum = 0.9;  // sgd_momentum
  double beta1 = 0.9;     // adamw
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-2;  // decoupled, adamw only
};

/// First-order optimizer over a flat parameter vector.
class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig cfg) : cfg_(cfg) {}

  const OptimizerConfig& config() const { return cfg_; }
  long steps() const { return steps_; }

  void step(Eigen::VectorXd& params, const Eigen::VectorXd& grad);

 private:
  OptimizerConfig cfg_;
  long steps_ = 0;
  Eigen::VectorXd first_;
  Eigen::VectorXd second_;
};

}  // namespace uboco

#endif  // UBOCO_OPTIMIZER_HPP
