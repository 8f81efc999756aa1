// Copyright 2026 The cqed-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cqed/core.h"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace cqed {

void HilbertSpec::validate() const {
  if (n_qubits < 1 || n_qubits > 12) {
    throw std::invalid_argument("HilbertSpec: n_qubits must be in [1, 12]");
  }
  if (fock_dim < 2) {
    throw std::invalid_argument("HilbertSpec: fock_dim must be >= 2");
  }
}

namespace {

Matrix single_qubit(OpKind which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case OpKind::kSigmaMinus:
      m(0, 1) = 1.0;
      break;
    case OpKind::kSigmaPlus:
      m(1, 0) = 1.0;
      break;
    case OpKind::kSigmaX:
      m(0, 1) = m(1, 0) = 1.0;
      break;
    case OpKind::kSigmaY:
      // sigma_y = i(sigma_- - sigma_+) keeps [sigma_z, sigma_x] = 2i sigma_y
      // with sigma_z = diag(-1, 1).
      m(0, 1) = kI;
      m(1, 0) = -kI;
      break;
    case OpKind::kSigmaZ:
      m(0, 0) = -1.0;
      m(1, 1) = 1.0;
      break;
    default:
      m.setIdentity();
  }
  return m;
}

Matrix lowering(int fock_dim) {
  Matrix a = Matrix::Zero(fock_dim, fock_dim);
  for (int n = 1; n < fock_dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix embed_qubit(const HilbertSpec& space, const Matrix& op, int qubit) {
  Matrix out = Matrix::Identity(1, 1);
  for (int q = 0; q < space.n_qubits; ++q) {
    out = kron(out, q == qubit ? op : Matrix::Identity(2, 2));
  }
  return kron(out, Matrix::Identity(space.fock_dim, space.fock_dim));
}

Matrix embed_cavity(const HilbertSpec& space, const Matrix& op) {
  int qdim = 1 << space.n_qubits;
  return kron(Matrix::Identity(qdim, qdim), op);
}

}  // namespace

bool Operator::is_hermitian(double rel_tol) const {
  double norm = matrix.norm();
  if (norm == 0.0) return true;
  return (matrix - matrix.adjoint()).norm() <= rel_tol * norm;
}

Operator build_canonical(const HilbertSpec& space, OpKind which, int qubit) {
  space.validate();
  bool qubit_op = which == OpKind::kSigmaMinus || which == OpKind::kSigmaPlus ||
                  which == OpKind::kSigmaX || which == OpKind::kSigmaY ||
                  which == OpKind::kSigmaZ;
  if (qubit_op && (qubit < 0 || qubit >= space.n_qubits)) {
    throw std::out_of_range("build_canonical: qubit index out of range");
  }
  Operator out{space, Matrix()};
  switch (which) {
    case OpKind::kA:
      out.matrix = embed_cavity(space, lowering(space.fock_dim));
      break;
    case OpKind::kADagger:
      out.matrix = embed_cavity(space, lowering(space.fock_dim).adjoint());
      break;
    case OpKind::kIdentity:
      out.matrix = Matrix::Identity(space.dim(), space.dim());
      break;
    case OpKind::kNumberExcitations: {
      Matrix a = lowering(space.fock_dim);
      out.matrix = embed_cavity(space, a.adjoint() * a);
      Matrix up = single_qubit(OpKind::kSigmaPlus) * single_qubit(OpKind::kSigmaMinus);
      for (int q = 0; q < space.n_qubits; ++q) out.matrix += embed_qubit(space, up, q);
      break;
    }
    default:
      out.matrix = embed_qubit(space, single_qubit(which), qubit);
  }
  return out;
}

Operator build_canonical(const HilbertSpec& space, std::string_view name) {
  std::string base(name);
  int qubit = 0;
  auto paren = base.find('(');
  if (paren != std::string::npos) {
    auto close = base.find(')', paren);
    if (close == std::string::npos || close != base.size() - 1) {
      throw std::invalid_argument("build_canonical: malformed operator name '" + base + "'");
    }
    std::string index = base.substr(paren + 1, close - paren - 1);
    try {
      std::size_t used = 0;
      qubit = std::stoi(index, &used);
      if (used != index.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::invalid_argument("build_canonical: bad qubit index in '" + base + "'");
    }
    base = base.substr(0, paren);
  }
  static const std::pair<const char*, OpKind> kNames[] = {
      {"a", OpKind::kA},
      {"a_dagger", OpKind::kADagger},
      {"sigma_minus", OpKind::kSigmaMinus},
      {"sigma_plus", OpKind::kSigmaPlus},
      {"sigma_x", OpKind::kSigmaX},
      {"sigma_y", OpKind::kSigmaY},
      {"sigma_z", OpKind::kSigmaZ},
      {"identity", OpKind::kIdentity},
      {"n_ex", OpKind::kNumberExcitations},
  };
  for (const auto& [label, kind] : kNames) {
    if (base == label) return build_canonical(space, kind, qubit);
  }
  throw std::invalid_argument("build_canonical: unknown operator '" + std::string(name) + "'");
}

DensityMatrix::DensityMatrix(HilbertSpec space, Matrix rho)
    : space_(space), rho_(std::move(rho)) {
  space_.validate();
  if (rho_.rows() != space_.dim() || rho_.cols() != space_.dim()) {
    throw std::invalid_argument("DensityMatrix: dimension does not match space");
  }
  if (std::abs(rho_.trace() - 1.0) > 1e-10) {
    throw NumericalError("DensityMatrix: trace deviates from 1");
  }
  if ((rho_ - rho_.adjoint()).norm() > 1e-10) {
    throw NumericalError("DensityMatrix: not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << es.eigenvalues().minCoeff();
    throw NumericalError(msg.str());
  }
}

DensityMatrix DensityMatrix::pure(const HilbertSpec& space, const Vector& psi) {
  Vector n = psi / psi.norm();
  return DensityMatrix(space, n * n.adjoint());
}

int basis_index(const HilbertSpec& space, const std::vector<int>& qubit_levels, int photons) {
  if (static_cast<int>(qubit_levels.size()) != space.n_qubits) {
    throw std::invalid_argument("basis_index: wrong number of qubit levels");
  }
  if (photons < 0 || photons >= space.fock_dim) {
    throw std::out_of_range("basis_index: photon number outside truncation");
  }
  int index = 0;
  for (int level : qubit_levels) index = 2 * index + (level ? 1 : 0);
  return index * space.fock_dim + photons;
}

Vector basis_state(const HilbertSpec& space, const std::vector<int>& qubit_levels, int photons) {
  Vector v = Vector::Zero(space.dim());
  v(basis_index(space, qubit_levels, photons)) = 1.0;
  return v;
}

Matrix kron(const Matrix& a, const Matrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double relative_frobenius(const Matrix& value, const Matrix& reference) {
  double ref = reference.norm();
  double diff = (value - reference).norm();
  return ref > 0.0 ? diff / ref : diff;
}

Matrix expm_hermitian(const Matrix& h, double t) {
  double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-10 * scale) {
    throw std::invalid_argument("expm_hermitian: input is not Hermitian");
  }
  Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  Vector phases = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Operator expm_hermitian(const Operator& h, double t) {
  return Operator{h.space, expm_hermitian(h.matrix, t)};
}

Matrix expm_superoperator(const Matrix& l, double t) {
  if (l.rows() != l.cols()) {
    throw std::invalid_argument("expm_superoperator: matrix is not square");
  }
  int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(l.rows()))));
  if (d * d != l.rows()) {
    throw std::invalid_argument("expm_superoperator: dimension is not a perfect square");
  }
  return (l * t).exp();
}

Matrix expm_taylor(const Matrix& input) {
  Matrix a = input;
  double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 0.25) {
    norm *= 0.5;
    ++squarings;
  }
  a /= std::ldexp(1.0, squarings);
  Matrix result = Matrix::Identity(a.rows(), a.cols());
  Matrix term = result;
  for (int k = 1; k <= 18; ++k) {
    term = term * a / static_cast<double>(k);
    result += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Matrix expm_skew_taylor(const Matrix& h, double dt) { return expm_taylor((-kI * dt) * h); }

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix hamiltonian_superoperator(const Matrix& h) {
  Matrix id = Matrix::Identity(h.rows(), h.cols());
  return -kI * (kron(id, h) - kron(h.transpose(), id));
}

Matrix dissipator_superoperator(const Matrix& c) {
  Matrix id = Matrix::Identity(c.rows(), c.cols());
  Matrix cdc = c.adjoint() * c;
  return kron(c.conjugate(), c) - 0.5 * kron(id, cdc) - 0.5 * kron(cdc.transpose(), id);
}

Matrix conjugation_superoperator(const Matrix& u) { return kron(u.conjugate(), u); }

Eigen::RowVectorXcd trace_functional(const Matrix& y) {
  Matrix yt = y.transpose();
  return Eigen::Map<const Eigen::RowVectorXcd>(yt.data(), yt.size());
}

double six_state_fidelity(const Matrix& u, const Vector& in0, const Vector& in1,
                          const Vector& out0, const Vector& out1) {
  static const cplx kAxes[6][2] = {{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0},
                                   {1.0, -1.0}, {1.0, kI}, {1.0, -kI}};
  double total = 0.0;
  for (const auto& c : kAxes) {
    double norm = std::sqrt(std::norm(c[0]) + std::norm(c[1]));
    Vector psi = (c[0] * in0 + c[1] * in1) / norm;
    Vector target = (c[0] * out0 + c[1] * out1) / norm;
    total += std::norm(target.dot(u * psi));
  }
  return total / 6.0;
}

FockCheck check_fock_convergence(const std::function<double(int)>& f, int fock_dim, double tol,
                                 bool auto_double, int max_fock) {
  if (fock_dim < 2) throw std::invalid_argument("check_fock_convergence: fock_dim < 2");
  FockCheck check;
  check.fock_dim = fock_dim;
  check.value = f(fock_dim);
  while (true) {
    check.doubled_value = f(2 * check.fock_dim);
    check.converged = std::abs(check.doubled_value - check.value) < tol;
    if (check.converged || !auto_double || 2 * check.fock_dim > max_fock) break;
    check.fock_dim *= 2;
    check.value = check.doubled_value;
  }
  return check;
}

}  // namespace cqed
