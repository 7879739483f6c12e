#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wfp/tolerance.hpp"

namespace wfp::hilbert {

using Complex = std::complex<double>;
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr std::size_t kMaxDimension = 4096;

struct Subsystem {
  std::string name;
  std::size_t dim = 0;
};

// Ordered tensor factors. The first factor is the most significant digit of
// a basis index.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<Subsystem> subsystems);

  std::size_t size() const { return subsystems_.size(); }
  const Subsystem& operator[](std::size_t i) const { return subsystems_[i]; }
  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t total_dim() const { return total_; }

  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;
  std::size_t dim_of(std::string_view name) const { return subsystems_[index_of(name)].dim; }
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  Layout sublayout(const std::vector<std::string>& names) const;
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index(const std::vector<std::size_t>& digits) const;

  bool operator==(const Layout& other) const;

 private:
  std::vector<Subsystem> subsystems_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
};

class StateVector {
 public:
  StateVector() = default;
  // Throws InvariantViolation unless the amplitudes are normalized.
  StateVector(Layout layout, Vector amplitudes, double eps = Tolerances{}.norm);

  static StateVector normalized(Layout layout, Vector amplitudes);
  static StateVector basis(Layout layout, std::size_t index);

  const Layout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Layout layout_;
  Vector amplitudes_;
};

enum class OperatorKind { Unitary, Projector, General };

class Operator {
 public:
  Operator() = default;
  // Unitary and Projector kinds are checked against eps.
  Operator(Layout layout, Matrix matrix, OperatorKind kind, double eps = Tolerances{}.algebraic);

  static Operator identity(Layout layout);
  // Skips the kind check; for results that hold the kind by construction.
  static Operator unchecked(Layout layout, Matrix matrix, OperatorKind kind);

  const Layout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  OperatorKind kind() const { return kind_; }

  Operator adjoint() const;
  Operator compose(const Operator& right) const;  // this * right
  Vector apply(const Vector& v) const { return matrix_ * v; }

 private:
  Layout layout_;
  Matrix matrix_;
  OperatorKind kind_ = OperatorKind::General;
};

double max_abs(const Matrix& m);
bool is_unitary(const Matrix& m, double eps);
bool is_projector(const Matrix& m, double eps);
bool commutes(const Matrix& a, const Matrix& b, double eps);

// Lifts an operator on the listed targets (in the given order) to the full
// layout. The operator dimension must equal the product of target dims.
Operator embed(const Operator& op, const Layout& layout, const std::vector<std::string>& targets);

Operator projector_from_vector(const StateVector& v);
Operator complement(const Operator& projector);

// |v><v| (x) sigma_x + (1 - |v><v|) (x) 1 on (system, memory), lifted to layout.
Operator cnot_in_basis(const StateVector& v, const Layout& layout, const std::string& system,
                       const std::string& memory);

// sum_k P_k (x) X^k with X the cyclic shift on the memory register. The
// projectors act on `targets`; reduces to cnot_in_basis for a rank-one P_1
// and a qubit memory.
Operator controlled_shift(const std::vector<Operator>& projectors, const Layout& layout,
                          const std::vector<std::string>& targets, const std::string& memory);

// || P_k ... P_1 psi ||^2 with projectors applied in list order.
double born_probability(const StateVector& state, const std::vector<Operator>& projectors);

// Tensor product of pieces that together cover every factor of the layout.
Vector product_state(const Layout& layout,
                     const std::vector<std::pair<std::vector<std::string>, Vector>>& pieces);

}  // namespace wfp::hilbert
