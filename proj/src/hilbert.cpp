#include "wfp/hilbert.hpp"

#include <algorithm>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

#include "wfp/errors.hpp"

namespace wfp::hilbert {

Layout::Layout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  std::set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.name.empty()) throw SchemaError("subsystem with empty name");
    if (s.dim < 2) throw SchemaError("subsystem '" + s.name + "' must have dimension >= 2");
    if (!seen.insert(s.name).second) throw SchemaError("duplicate subsystem '" + s.name + "'");
    total_ *= s.dim;
    if (total_ > kMaxDimension) {
      throw SchemaError("layout dimension exceeds " + std::to_string(kMaxDimension));
    }
  }
  strides_.assign(subsystems_.size(), 1);
  for (std::size_t i = subsystems_.size(); i-- > 1;) {
    strides_[i - 1] = strides_[i] * subsystems_[i].dim;
  }
}

bool Layout::contains(std::string_view name) const {
  return std::any_of(subsystems_.begin(), subsystems_.end(),
                     [&](const Subsystem& s) { return s.name == name; });
}

std::size_t Layout::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].name == name) return i;
  }
  throw SchemaError("unknown subsystem '" + std::string(name) + "'");
}

Layout Layout::sublayout(const std::vector<std::string>& names) const {
  std::vector<Subsystem> parts;
  parts.reserve(names.size());
  for (const auto& n : names) parts.push_back(subsystems_[index_of(n)]);
  return Layout(std::move(parts));
}

std::vector<std::size_t> Layout::digits(std::size_t index) const {
  std::vector<std::size_t> d(subsystems_.size());
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    d[i] = (index / strides_[i]) % subsystems_[i].dim;
  }
  return d;
}

std::size_t Layout::index(const std::vector<std::size_t>& digits) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) idx += digits[i] * strides_[i];
  return idx;
}

bool Layout::operator==(const Layout& other) const {
  if (size() != other.size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (subsystems_[i].name != other.subsystems_[i].name ||
        subsystems_[i].dim != other.subsystems_[i].dim) {
      return false;
    }
  }
  return true;
}

StateVector::StateVector(Layout layout, Vector amplitudes, double eps)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dim()) {
    throw SchemaError("state has " + std::to_string(amplitudes_.size()) +
                      " amplitudes, layout needs " + std::to_string(layout_.total_dim()));
  }
  if (std::abs(amplitudes_.norm() - 1.0) > eps) {
    throw InvariantViolation("state is not normalized (norm " +
                             std::to_string(amplitudes_.norm()) + ")");
  }
}

StateVector StateVector::normalized(Layout layout, Vector amplitudes) {
  double n = amplitudes.norm();
  if (n == 0.0) throw InvariantViolation("cannot normalize the zero vector");
  return StateVector(std::move(layout), amplitudes / n);
}

StateVector StateVector::basis(Layout layout, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(layout.total_dim()));
  if (index >= layout.total_dim()) throw SchemaError("basis index out of range");
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(std::move(layout), std::move(v));
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& m, double eps) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= eps;
}

bool is_projector(const Matrix& m, double eps) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m - m.adjoint()) <= eps && max_abs(m * m - m) <= eps;
}

bool commutes(const Matrix& a, const Matrix& b, double eps) {
  return max_abs(a * b - b * a) <= eps;
}

Operator::Operator(Layout layout, Matrix matrix, OperatorKind kind, double eps)
    : layout_(std::move(layout)), matrix_(std::move(matrix)), kind_(kind) {
  auto d = static_cast<Eigen::Index>(layout_.total_dim());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    throw SchemaError("operator is " + std::to_string(matrix_.rows()) + "x" +
                      std::to_string(matrix_.cols()) + ", layout needs " + std::to_string(d));
  }
  if (kind_ == OperatorKind::Unitary && !is_unitary(matrix_, eps)) {
    throw InvariantViolation("operator is not unitary");
  }
  if (kind_ == OperatorKind::Projector && !is_projector(matrix_, eps)) {
    throw InvariantViolation("operator is not an orthogonal projector");
  }
}

Operator Operator::identity(Layout layout) {
  auto d = static_cast<Eigen::Index>(layout.total_dim());
  return Operator(std::move(layout), Matrix::Identity(d, d), OperatorKind::Unitary);
}

Operator Operator::unchecked(Layout layout, Matrix matrix, OperatorKind kind) {
  Operator out;
  out.layout_ = std::move(layout);
  out.matrix_ = std::move(matrix);
  out.kind_ = kind;
  return out;
}

Operator Operator::adjoint() const {
  Operator out;
  out.layout_ = layout_;
  out.matrix_ = matrix_.adjoint();
  out.kind_ = kind_;
  return out;
}

Operator Operator::compose(const Operator& right) const {
  if (!(layout_ == right.layout_)) throw SchemaError("compose: layouts differ");
  Operator out;
  out.layout_ = layout_;
  out.matrix_ = matrix_ * right.matrix_;
  out.kind_ = (kind_ == OperatorKind::Unitary && right.kind_ == OperatorKind::Unitary)
                  ? OperatorKind::Unitary
                  : OperatorKind::General;
  return out;
}

Operator embed(const Operator& op, const Layout& layout, const std::vector<std::string>& targets) {
  std::vector<std::size_t> pos;
  std::size_t local_dim = 1;
  std::set<std::size_t> unique;
  for (const auto& t : targets) {
    std::size_t p = layout.index_of(t);
    if (!unique.insert(p).second) throw SchemaError("embed: repeated target '" + t + "'");
    pos.push_back(p);
    local_dim *= layout[p].dim;
  }
  if (local_dim != op.layout().total_dim()) {
    throw SchemaError("embed: operator dimension " + std::to_string(op.layout().total_dim()) +
                      " does not match targets (" + std::to_string(local_dim) + ")");
  }

  std::size_t D = layout.total_dim();
  // Local digit strides, first target most significant.
  std::vector<std::size_t> lstride(pos.size(), 1);
  for (std::size_t i = pos.size(); i-- > 1;) lstride[i - 1] = lstride[i] * layout[pos[i]].dim;

  Matrix full = Matrix::Zero(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
  const Matrix& m = op.matrix();
  for (std::size_t col = 0; col < D; ++col) {
    std::size_t lc = 0;
    std::size_t base = col;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      std::size_t digit = (col / layout.stride(pos[i])) % layout[pos[i]].dim;
      lc += digit * lstride[i];
      base -= digit * layout.stride(pos[i]);
    }
    for (std::size_t lr = 0; lr < local_dim; ++lr) {
      Complex a = m(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
      if (a == Complex(0.0)) continue;
      std::size_t row = base;
      for (std::size_t i = 0; i < pos.size(); ++i) {
        row += ((lr / lstride[i]) % layout[pos[i]].dim) * layout.stride(pos[i]);
      }
      full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = a;
    }
  }
  // Tensoring with the identity preserves unitarity and idempotence.
  return Operator::unchecked(layout, std::move(full), op.kind());
}

Operator projector_from_vector(const StateVector& v) {
  Matrix p = v.amplitudes() * v.amplitudes().adjoint();
  return Operator(v.layout(), std::move(p), OperatorKind::Projector);
}

Operator complement(const Operator& projector) {
  auto d = static_cast<Eigen::Index>(projector.layout().total_dim());
  return Operator(projector.layout(), Matrix::Identity(d, d) - projector.matrix(),
                  OperatorKind::Projector);
}

Operator controlled_shift(const std::vector<Operator>& projectors, const Layout& layout,
                          const std::vector<std::string>& targets, const std::string& memory) {
  if (projectors.empty()) throw SchemaError("controlled_shift: no projectors");
  if (std::find(targets.begin(), targets.end(), memory) != targets.end()) {
    throw SchemaError("controlled_shift: memory '" + memory + "' is also a target");
  }
  std::size_t md = layout.dim_of(memory);
  if (projectors.size() > md) {
    throw SchemaError("memory '" + memory + "' too small for " +
                      std::to_string(projectors.size()) + " outcomes");
  }
  std::vector<std::string> all = targets;
  all.push_back(memory);
  Layout local = layout.sublayout(all);
  auto ld = static_cast<Eigen::Index>(local.total_dim());
  auto md_i = static_cast<Eigen::Index>(md);
  Matrix u = Matrix::Zero(ld, ld);
  for (std::size_t k = 0; k < projectors.size(); ++k) {
    Matrix shift = Matrix::Zero(md_i, md_i);
    for (std::size_t j = 0; j < md; ++j) {
      shift(static_cast<Eigen::Index>((j + k) % md), static_cast<Eigen::Index>(j)) = 1.0;
    }
    u += Eigen::kroneckerProduct(projectors[k].matrix(), shift).eval();
  }
  return embed(Operator(local, std::move(u), OperatorKind::Unitary), layout, all);
}

Operator cnot_in_basis(const StateVector& v, const Layout& layout, const std::string& system,
                       const std::string& memory) {
  if (layout.dim_of(memory) != 2) throw SchemaError("cnot_in_basis: memory must be a qubit");
  if (v.layout().total_dim() != layout.dim_of(system)) {
    throw SchemaError("cnot_in_basis: vector dimension does not match '" + system + "'");
  }
  Layout sys = layout.sublayout({system});
  Operator p1(sys, v.amplitudes() * v.amplitudes().adjoint(), OperatorKind::Projector);
  return controlled_shift({complement(p1), p1}, layout, {system}, memory);
}

double born_probability(const StateVector& state, const std::vector<Operator>& projectors) {
  Vector v = state.amplitudes();
  for (const auto& p : projectors) {
    if (p.layout().total_dim() != state.layout().total_dim()) {
      throw SchemaError("born_probability: projector dimension mismatch");
    }
    v = p.matrix() * v;
  }
  return v.squaredNorm();
}

Vector product_state(const Layout& layout,
                     const std::vector<std::pair<std::vector<std::string>, Vector>>& pieces) {
  std::vector<int> owner(layout.size(), -1);
  std::vector<std::vector<std::size_t>> piece_pos(pieces.size());
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::size_t dim = 1;
    for (const auto& n : pieces[p].first) {
      std::size_t i = layout.index_of(n);
      if (owner[i] != -1) throw SchemaError("product_state: '" + n + "' covered twice");
      owner[i] = static_cast<int>(p);
      piece_pos[p].push_back(i);
      dim *= layout[i].dim;
    }
    if (static_cast<std::size_t>(pieces[p].second.size()) != dim) {
      throw SchemaError("product_state: piece dimension mismatch");
    }
  }
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (owner[i] == -1) throw SchemaError("product_state: '" + layout[i].name + "' not covered");
  }
  std::size_t D = layout.total_dim();
  Vector out(static_cast<Eigen::Index>(D));
  for (std::size_t idx = 0; idx < D; ++idx) {
    auto d = layout.digits(idx);
    Complex amp = 1.0;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      std::size_t li = 0;
      for (std::size_t i : piece_pos[p]) li = li * layout[i].dim + d[i];
      amp *= pieces[p].second(static_cast<Eigen::Index>(li));
    }
    out(static_cast<Eigen::Index>(idx)) = amp;
  }
  return out;
}

}  // namespace wfp::hilbert
