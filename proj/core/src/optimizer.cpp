#include "patg/optimizer.hpp"

#include <cmath>

namespace patg {

Adadelta::Adadelta(std::vector<Parameter*> params, Options opt)
    : params_(std::move(params)), opt_(opt) {
  grad_sq_.reserve(params_.size());
  delta_sq_.reserve(params_.size());
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const Parameter* p = params_[i];
    index_.emplace(p, i);
    grad_sq_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    delta_sq_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adadelta::update(const std::vector<Parameter*>& group) {
  for (Parameter* p : group) {
    auto it = index_.find(p);
    if (it == index_.end()) throw Error("Adadelta: parameter not attached: " + p->name);
    std::size_t i = it->second;
    const Eigen::ArrayXXd g = p->grad.array();
    Eigen::ArrayXXd eg2 = grad_sq_[i].array();
    Eigen::ArrayXXd ed2 = delta_sq_[i].array();
    eg2 = opt_.rho * eg2 + (1.0 - opt_.rho) * g.square();
    Eigen::ArrayXXd step = -((ed2 + opt_.eps).sqrt() / (eg2 + opt_.eps).sqrt()) * g;
    ed2 = opt_.rho * ed2 + (1.0 - opt_.rho) * step.square();
    grad_sq_[i] = eg2.matrix();
    delta_sq_[i] = ed2.matrix();
    p->value += opt_.learning_rate * step.matrix();
  }
}

}  // namespace patg
