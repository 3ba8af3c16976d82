#include "patg/tape.hpp"

#include <cmath>
#include <utility>

namespace patg {

void zero_grads(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) p->zero_grad();
}

Var Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return {static_cast<int>(nodes_.size()) - 1};
}

void Tape::check_same_shape(Var a, Var b, const char* op) const {
  const auto& va = node(a).value;
  const auto& vb = node(b).value;
  if (va.rows() != vb.rows() || va.cols() != vb.cols())
    throw Error(std::string(op) + ": shape mismatch " + std::to_string(va.rows()) + "x" +
                std::to_string(va.cols()) + " vs " + std::to_string(vb.rows()) + "x" +
                std::to_string(vb.cols()));
}

double Tape::scalar(Var v) const {
  const auto& m = node(v).value;
  if (m.rows() != 1 || m.cols() != 1) throw Error("scalar: node is not 1x1");
  return m(0, 0);
}

Var Tape::constant(Eigen::MatrixXd v) {
  Node n;
  n.value = std::move(v);
  return push(std::move(n));
}

Var Tape::input(Eigen::MatrixXd v) {
  Node n;
  n.value = std::move(v);
  n.needs_grad = true;
  return push(std::move(n));
}

Var Tape::use(Parameter& p) {
  auto it = bound_.find(&p);
  if (it != bound_.end()) return {it->second};
  Node n;
  n.value = p.value;
  n.needs_grad = true;
  int id = static_cast<int>(nodes_.size());
  Parameter* ptr = &p;
  n.back = [id, ptr](Tape& t) { ptr->grad += t.nodes_[id].grad; };
  push(std::move(n));
  bound_.emplace(&p, id);
  return {id};
}

Var Tape::matmul(Var a, Var b) {
  const auto& va = node(a).value;
  const auto& vb = node(b).value;
  if (va.cols() != vb.rows()) throw Error("matmul: inner dimension mismatch");
  Node n;
  n.value = va * vb;
  n.needs_grad = track(a) || track(b);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, b, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (t.track(a)) t.node(a).grad.noalias() += g * t.node(b).value.transpose();
      if (t.track(b)) t.node(b).grad.noalias() += t.node(a).value.transpose() * g;
    };
  }
  return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
  check_same_shape(a, b, "add");
  Node n;
  n.value = node(a).value + node(b).value;
  n.needs_grad = track(a) || track(b);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, b, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (t.track(a)) t.node(a).grad += g;
      if (t.track(b)) t.node(b).grad += g;
    };
  }
  return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
  check_same_shape(a, b, "sub");
  Node n;
  n.value = node(a).value - node(b).value;
  n.needs_grad = track(a) || track(b);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, b, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (t.track(a)) t.node(a).grad += g;
      if (t.track(b)) t.node(b).grad -= g;
    };
  }
  return push(std::move(n));
}

Var Tape::cmul(Var a, Var b) {
  check_same_shape(a, b, "cmul");
  Node n;
  n.value = node(a).value.cwiseProduct(node(b).value);
  n.needs_grad = track(a) || track(b);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, b, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (t.track(a)) t.node(a).grad += g.cwiseProduct(t.node(b).value);
      if (t.track(b)) t.node(b).grad += g.cwiseProduct(t.node(a).value);
    };
  }
  return push(std::move(n));
}

Var Tape::add_n(const std::vector<Var>& xs) {
  if (xs.empty()) throw Error("add_n: empty argument list");
  Var acc = xs[0];
  for (std::size_t i = 1; i < xs.size(); ++i) acc = add(acc, xs[i]);
  return acc;
}

Var Tape::affine(Var a, double scale, double shift) {
  Node n;
  n.value = (node(a).value.array() * scale + shift).matrix();
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, scale, out](Tape& t) { t.node(a).grad += scale * t.nodes_[out].grad; };
  }
  return push(std::move(n));
}

Var Tape::scale_by(Var a, Var s) {
  if (node(s).value.rows() != 1 || node(s).value.cols() != 1) throw Error("scale_by: s is not 1x1");
  Node n;
  double sv = node(s).value(0, 0);
  n.value = sv * node(a).value;
  n.needs_grad = track(a) || track(s);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, s, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (t.track(a)) t.node(a).grad += t.node(s).value(0, 0) * g;
      if (t.track(s)) t.node(s).grad(0, 0) += g.cwiseProduct(t.node(a).value).sum();
    };
  }
  return push(std::move(n));
}

Var Tape::relu(Var a) {
  Node n;
  n.value = node(a).value.cwiseMax(0.0);
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& x = t.node(a).value;
      t.node(a).grad += (x.array() > 0.0).select(g, Eigen::MatrixXd::Zero(g.rows(), g.cols()));
    };
  }
  return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
  Node n;
  n.value = (1.0 / (1.0 + (-node(a).value.array()).exp())).matrix();
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      const auto& y = t.nodes_[out].value.array();
      t.node(a).grad += (t.nodes_[out].grad.array() * y * (1.0 - y)).matrix();
    };
  }
  return push(std::move(n));
}

Var Tape::tanh(Var a) {
  Node n;
  n.value = node(a).value.array().tanh().matrix();
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      const auto& y = t.nodes_[out].value.array();
      t.node(a).grad += (t.nodes_[out].grad.array() * (1.0 - y * y)).matrix();
    };
  }
  return push(std::move(n));
}

Var Tape::exp(Var a) {
  Node n;
  n.value = node(a).value.array().exp().matrix();
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      t.node(a).grad += t.nodes_[out].grad.cwiseProduct(t.nodes_[out].value);
    };
  }
  return push(std::move(n));
}

Var Tape::log(Var a) {
  Node n;
  n.value = node(a).value.array().log().matrix();
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      t.node(a).grad += t.nodes_[out].grad.cwiseQuotient(t.node(a).value);
    };
  }
  return push(std::move(n));
}

Var Tape::clamp(Var a, double lo, double hi) {
  Node n;
  n.value = node(a).value.cwiseMax(lo).cwiseMin(hi);
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, lo, hi, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      const auto& x = t.node(a).value.array();
      auto inside = (x > lo && x < hi);
      t.node(a).grad += inside.select(g, Eigen::MatrixXd::Zero(g.rows(), g.cols()));
    };
  }
  return push(std::move(n));
}

Var Tape::softmax(Var a) {
  if (node(a).value.cols() != 1) throw Error("softmax: expected a column vector");
  Node n;
  const auto& x = node(a).value;
  double m = x.maxCoeff();
  Eigen::ArrayXd e = (x.array() - m).exp();
  n.value = (e / e.sum()).matrix();
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      const auto& y = t.nodes_[out].value;
      const auto& g = t.nodes_[out].grad;
      double gy = y.cwiseProduct(g).sum();
      t.node(a).grad += y.cwiseProduct(g - Eigen::MatrixXd::Constant(g.rows(), 1, gy));
    };
  }
  return push(std::move(n));
}

Var Tape::sum(Var a) {
  Node n;
  n.value = Eigen::MatrixXd::Constant(1, 1, node(a).value.sum());
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, out](Tape& t) {
      double g = t.nodes_[out].grad(0, 0);
      t.node(a).grad.array() += g;
    };
  }
  return push(std::move(n));
}

Var Tape::dot(Var a, Var b) {
  check_same_shape(a, b, "dot");
  Node n;
  n.value = Eigen::MatrixXd::Constant(1, 1, node(a).value.cwiseProduct(node(b).value).sum());
  n.needs_grad = track(a) || track(b);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, b, out](Tape& t) {
      double g = t.nodes_[out].grad(0, 0);
      if (t.track(a)) t.node(a).grad += g * t.node(b).value;
      if (t.track(b)) t.node(b).grad += g * t.node(a).value;
    };
  }
  return push(std::move(n));
}

Var Tape::entry(Var a, Eigen::Index i) {
  if (node(a).value.cols() != 1) throw Error("entry: expected a column vector");
  if (i < 0 || i >= node(a).value.rows()) throw Error("entry: index out of range");
  Node n;
  n.value = Eigen::MatrixXd::Constant(1, 1, node(a).value(i, 0));
  n.needs_grad = track(a);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, i, out](Tape& t) { t.node(a).grad(i, 0) += t.nodes_[out].grad(0, 0); };
  }
  return push(std::move(n));
}

Var Tape::row_of(Var m, Eigen::Index r) {
  if (r < 0 || r >= node(m).value.rows()) throw Error("row_of: row out of range");
  Node n;
  n.value = node(m).value.row(r).transpose();
  n.needs_grad = track(m);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [m, r, out](Tape& t) {
      t.node(m).grad.row(r) += t.nodes_[out].grad.transpose();
    };
  }
  return push(std::move(n));
}

Var Tape::concat(Var a, Var b) {
  if (node(a).value.cols() != 1 || node(b).value.cols() != 1)
    throw Error("concat: expected column vectors");
  Node n;
  Eigen::Index ra = node(a).value.rows();
  Eigen::Index rb = node(b).value.rows();
  n.value.resize(ra + rb, 1);
  n.value.topRows(ra) = node(a).value;
  n.value.bottomRows(rb) = node(b).value;
  n.needs_grad = track(a) || track(b);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    n.back = [a, b, ra, rb, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      if (t.track(a)) t.node(a).grad += g.topRows(ra);
      if (t.track(b)) t.node(b).grad += g.bottomRows(rb);
    };
  }
  return push(std::move(n));
}

Var Tape::stack_scalars(const std::vector<Var>& xs) {
  if (xs.empty()) throw Error("stack_scalars: empty argument list");
  Node n;
  n.value.resize(static_cast<Eigen::Index>(xs.size()), 1);
  bool needs = false;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (node(xs[i]).value.rows() != 1 || node(xs[i]).value.cols() != 1)
      throw Error("stack_scalars: inputs must be 1x1");
    n.value(static_cast<Eigen::Index>(i), 0) = node(xs[i]).value(0, 0);
    needs = needs || track(xs[i]);
  }
  n.needs_grad = needs;
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    std::vector<Var> inputs = xs;
    n.back = [inputs, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      for (std::size_t i = 0; i < inputs.size(); ++i)
        if (t.track(inputs[i]))
          t.node(inputs[i]).grad(0, 0) += g(static_cast<Eigen::Index>(i), 0);
    };
  }
  return push(std::move(n));
}

Var Tape::scatter_add(Var w, const std::vector<int>& indices, Eigen::Index size) {
  if (node(w).value.cols() != 1) throw Error("scatter_add: expected a column vector");
  if (node(w).value.rows() != static_cast<Eigen::Index>(indices.size()))
    throw Error("scatter_add: weight/index count mismatch");
  Node n;
  n.value = Eigen::MatrixXd::Zero(size, 1);
  for (std::size_t k = 0; k < indices.size(); ++k) {
    int idx = indices[k];
    if (idx < 0 || idx >= size) throw Error("scatter_add: index out of range");
    n.value(idx, 0) += node(w).value(static_cast<Eigen::Index>(k), 0);
  }
  n.needs_grad = track(w);
  int out = static_cast<int>(nodes_.size());
  if (n.needs_grad) {
    std::vector<int> idx = indices;
    n.back = [w, idx, out](Tape& t) {
      const auto& g = t.nodes_[out].grad;
      for (std::size_t k = 0; k < idx.size(); ++k)
        t.node(w).grad(static_cast<Eigen::Index>(k), 0) += g(idx[k], 0);
    };
  }
  return push(std::move(n));
}

void Tape::backward(Var loss) {
  Node& l = node(loss);
  if (l.value.rows() != 1 || l.value.cols() != 1) throw Error("backward: loss must be 1x1");
  for (Node& n : nodes_) {
    if (!n.needs_grad) continue;
    if (n.grad.rows() != n.value.rows() || n.grad.cols() != n.value.cols())
      n.grad.resize(n.value.rows(), n.value.cols());
    n.grad.setZero();
  }
  if (!l.needs_grad) return;
  l.grad(0, 0) = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.needs_grad && n.back) n.back(*this);
  }
}

}  // namespace patg
