#include "uboco/optimizer.hpp"

#include "uboco/error.hpp"

#include <cmath>

namespace uboco {

void Optimizer::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad) {
  if (params.size() != grad.size()) throw DomainError("optimizer: gradient size mismatch");
  if (!(cfg_.lr > 0.0)) throw DomainError("optimizer: learning rate must be positive");
  if (first_.size() != params.size()) {
    first_ = Eigen::VectorXd::Zero(params.size());
    second_ = Eigen::VectorXd::Zero(params.size());
  }
  ++steps_;
  if (cfg_.kind == OptimizerKind::sgd_momentum) {
    first_ = cfg_.momentum * first_ + grad;
    params -= cfg_.lr * first_;
    return;
  }
  first_ = cfg_.beta1 * first_ + (1.0 - cfg_.beta1) * grad;
  second_ = cfg_.beta2 * second_ + (1.0 - cfg_.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(steps_));
  params *= 1.0 - cfg_.lr * cfg_.weight_decay;
  params.array() -= cfg_.lr * (first_.array() / c1) / ((second_.array() / c2).sqrt() + cfg_.eps);
}

}  // namespace uboco
