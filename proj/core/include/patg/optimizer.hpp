#pragma once

#include <Eigen/Core>
#include <unordered_map>
#include <vector>

#include "patg/tape.hpp"

namespace patg {

// Adadelta with a learning-rate multiplier. State is kept per parameter in
// attach order, which is also the order used by checkpoint serialization.
class Adadelta {
 public:
  struct Options {
    double rho = 0.95;
    double eps = 1e-6;
    double learning_rate = 1.0;
  };

  Adadelta(std::vector<Parameter*> params, Options opt);

  // Applies one update to every parameter in `group` from its current
  // grad. Parameters outside the group are untouched.
  void update(const std::vector<Parameter*>& group);

  const Options& options() const { return opt_; }
  const std::vector<Parameter*>& params() const { return params_; }
  Eigen::MatrixXd& grad_accum(std::size_t i) { return grad_sq_[i]; }
  Eigen::MatrixXd& delta_accum(std::size_t i) { return delta_sq_[i]; }

 private:
  std::vector<Parameter*> params_;
  std::unordered_map<const Parameter*, std::size_t> index_;
  std::vector<Eigen::MatrixXd> grad_sq_;
  std::vector<Eigen::MatrixXd> delta_sq_;
  Options opt_;
};

}  // namespace patg
