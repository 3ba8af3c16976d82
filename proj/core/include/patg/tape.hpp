#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "patg/error.hpp"
#include "patg/rng.hpp"

namespace patg {

// A named trainable tensor. Gradients are accumulated here by
// Tape::backward and consumed by the optimizer.
struct Parameter {
  std::string name;
  Eigen::MatrixXd value;
  Eigen::MatrixXd grad;

  Parameter(std::string param_name, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(param_name)),
        value(Eigen::MatrixXd::Zero(rows, cols)),
        grad(Eigen::MatrixXd::Zero(rows, cols)) {}

  void init_uniform(Rng& rng, double lo, double hi) {
    for (Eigen::Index j = 0; j < value.cols(); ++j)
      for (Eigen::Index i = 0; i < value.rows(); ++i) value(i, j) = rng.uniform(lo, hi);
  }

  void zero_grad() { grad.setZero(); }
};

void zero_grads(const std::vector<Parameter*>& params);

// Handle to a node on a Tape.
struct Var {
  int id = -1;
};

// Reverse-mode differentiation tape over Eigen matrices (vectors are Nx1).
// A tape is built once per forward pass; backward() can be run several
// times against different loss nodes, each run accumulating gradients
// into the bound Parameters. Nodes only ever reference earlier nodes, so
// reverse creation order is a valid topological order.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaf without gradient tracking.
  Var constant(Eigen::MatrixXd v);
  // Leaf with gradient tracking but no parameter binding (for probing
  // gradients w.r.t. inputs such as persona embeddings).
  Var input(Eigen::MatrixXd v);
  // Leaf bound to a parameter; memoized, so repeated use() of the same
  // parameter on one tape shares a single node.
  Var use(Parameter& p);

  const Eigen::MatrixXd& value(Var v) const { return node(v).value; }
  double scalar(Var v) const;
  // Gradient of the last backward() target w.r.t. this node.
  const Eigen::MatrixXd& grad(Var v) const { return node(v).grad; }

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var cmul(Var a, Var b);
  Var add_n(const std::vector<Var>& xs);
  // scale * a + shift, elementwise.
  Var affine(Var a, double scale, double shift);
  // a scaled by a 1x1 node.
  Var scale_by(Var a, Var s);
  Var relu(Var a);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var exp(Var a);
  Var log(Var a);
  // Clamp with pass-through gradient strictly inside [lo, hi], zero outside.
  Var clamp(Var a, double lo, double hi);
  // Column-vector softmax.
  Var softmax(Var a);
  Var sum(Var a);
  Var dot(Var a, Var b);
  // Single entry a(i, 0) as a 1x1 node.
  Var entry(Var a, Eigen::Index i);
  // Row r of a matrix node as a column vector (embedding lookup).
  Var row_of(Var m, Eigen::Index r);
  // Vertical concatenation of two column vectors.
  Var concat(Var a, Var b);
  // 1x1 nodes stacked into a column vector.
  Var stack_scalars(const std::vector<Var>& xs);
  // out[indices[k]] += w(k); duplicates accumulate.
  Var scatter_add(Var w, const std::vector<int>& indices, Eigen::Index size);

  // Seeds d(loss)=1 and propagates to all leaves, accumulating into bound
  // Parameter::grad. loss must be 1x1. Node gradients are reset first, so
  // repeated calls on one tape are independent.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;
    bool needs_grad = false;
    std::function<void(Tape&)> back;
  };

  Node& node(Var v) { return nodes_.at(static_cast<std::size_t>(v.id)); }
  const Node& node(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)); }
  bool track(Var v) const { return node(v).needs_grad; }
  Var push(Node n);
  void check_same_shape(Var a, Var b, const char* op) const;

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> bound_;
};

}  // namespace patg
