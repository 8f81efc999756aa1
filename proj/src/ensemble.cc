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


#include "cqed/ensemble.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace cqed {
namespace {

double root_mean_square(const std::vector<double>& g, const std::vector<double>& xi, int power) {
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double w = g[i] * std::pow(xi[i], power);
    sum += w * w;
  }
  return std::sqrt(sum / static_cast<double>(g.size()));
}

RealVector weighted_mode(const EnsembleSpec& e, int power, const char* name) {
  RealVector v(e.size());
  for (int i = 0; i < e.size(); ++i) v(i) = e.couplings[i] * std::pow(e.detunings[i], power);
  double norm = v.norm();
  if (!(norm > 0.0)) {
    throw NumericalError(std::string("collective mode ") + name + " has zero norm");
  }
  return v / norm;
}

}  // namespace

void EnsembleSpec::validate() const {
  if (couplings.empty()) throw std::invalid_argument("ensemble is empty");
  if (couplings.size() != detunings.size()) {
    throw std::invalid_argument("ensemble couplings and detunings differ in length");
  }
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    if (!std::isfinite(couplings[i]) || couplings[i] < 0.0) {
      throw std::invalid_argument("ensemble couplings must be finite and non-negative");
    }
    if (!std::isfinite(detunings[i])) throw std::invalid_argument("ensemble detunings must be finite");
  }
  if (!(g_av() > 0.0)) throw std::invalid_argument("ensemble couplings are all zero");
}

double EnsembleSpec::g_av() const { return root_mean_square(couplings, detunings, 0); }
double EnsembleSpec::g_ens() const { return std::sqrt(static_cast<double>(size())) * g_av(); }
double EnsembleSpec::g_xi_av() const { return root_mean_square(couplings, detunings, 1); }
double EnsembleSpec::g_xi2_av() const { return root_mean_square(couplings, detunings, 2); }

double EnsembleSpec::chi_moment() const {
  double sum = 0.0;
  for (int i = 0; i < size(); ++i) sum += couplings[i] * couplings[i] * detunings[i];
  return sum;
}

double EnsembleSpec::signed_mean_xi() const {
  double norm = 0.0;
  for (double g : couplings) norm += g * g;
  return chi_moment() / norm;
}

RealVector EnsembleSpec::mode_b() const { return weighted_mode(*this, 0, "b"); }
RealVector EnsembleSpec::mode_c() const { return weighted_mode(*this, 1, "c"); }
RealVector EnsembleSpec::mode_d() const { return weighted_mode(*this, 2, "d"); }

void EnsembleSpec::write(std::ostream& out) const {
  out << "# g xi\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int i = 0; i < size(); ++i) out << couplings[i] << ' ' << detunings[i] << '\n';
}

EnsembleSpec EnsembleSpec::read(std::istream& in) {
  EnsembleSpec e;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double g = 0.0;
    double xi = 0.0;
    std::string extra;
    if (!(fields >> g >> xi) || (fields >> extra)) {
      throw std::invalid_argument("ensemble record line " + std::to_string(line_no) +
                                  ": expected two numbers");
    }
    e.couplings.push_back(g);
    e.detunings.push_back(xi);
  }
  e.validate();
  return e;
}

EnsembleSpec sample_ensemble(int n, double g_av_target, double delta_xi, double coupling_spread,
                             std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_ensemble: n must be >= 1");
  if (!(g_av_target > 0.0)) throw std::invalid_argument("sample_ensemble: coupling must be positive");
  if (!(delta_xi >= 0.0)) throw std::invalid_argument("sample_ensemble: delta_xi must be >= 0");
  if (!(coupling_spread >= 0.0)) throw std::invalid_argument("sample_ensemble: spread must be >= 0");
  boost::random::mt19937_64 engine(seed);
  boost::random::normal_distribution<double> unit(0.0, 1.0);
  EnsembleSpec e;
  e.detunings.reserve(n);
  e.couplings.reserve(n);
  for (int i = 0; i < n; ++i) e.detunings.push_back(delta_xi * unit(engine));
  for (int i = 0; i < n; ++i) {
    double g = g_av_target;
    if (coupling_spread > 0.0) {
      do {
        g = g_av_target * (1.0 + coupling_spread * unit(engine));
      } while (!(g > 0.0));
    }
    e.couplings.push_back(g);
  }
  return e;
}

CollectiveOverlaps collective_overlaps(const EnsembleSpec& ensemble) {
  ensemble.validate();
  RealVector b = ensemble.mode_b();
  RealVector c = ensemble.mode_c();
  RealVector d = ensemble.mode_d();
  CollectiveOverlaps o;
  o.s = b.dot(d);
  o.b_c = b.dot(c);
  o.c_d = c.dot(d);
  o.norm_residual = std::max({std::abs(b.squaredNorm() - 1.0), std::abs(c.squaredNorm() - 1.0),
                              std::abs(d.squaredNorm() - 1.0)});
  return o;
}

FourModeModel four_mode_model(double g_ens, double overlap, double xi_av, double xi2_av,
                              double tau) {
  if (!(g_ens > 0.0)) throw std::invalid_argument("four_mode_model: g_ens must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("four_mode_model: tau must be positive");
  if (!(overlap > -1.0 && overlap < 1.0)) {
    throw std::invalid_argument("four_mode_model: overlap must lie in (-1, 1)");
  }
  FourModeModel m;
  m.s = overlap;
  m.g_ens = g_ens;
  m.tau = tau;
  const double up = std::sqrt(0.5 * (1.0 + overlap));
  const double down = std::sqrt(0.5 * (1.0 - overlap));
  const double second = g_ens * xi2_av * tau * tau / 48.0;
  const double prime = g_ens * g_ens * xi_av * tau * tau / 48.0;
  m.omega_plus = up * (0.5 * g_ens - second);
  m.omega_minus = -down * (0.5 * g_ens + second);
  m.omega_prime_plus = down * prime;
  m.omega_prime_minus = -up * prime;
  // Basis order (a~, b~, c~, d~).
  m.matrix(0, 1) = m.matrix(1, 0) = m.omega_minus;
  m.matrix(0, 3) = m.matrix(3, 0) = m.omega_plus;
  m.matrix(1, 2) = m.matrix(2, 1) = m.omega_prime_plus;
  m.matrix(2, 3) = m.matrix(3, 2) = m.omega_prime_minus;
  return m;
}

FourModeModel four_mode_model(double g_ens, double delta_xi, double tau) {
  if (!(delta_xi >= 0.0)) throw std::invalid_argument("four_mode_model: delta_xi must be >= 0");
  return four_mode_model(g_ens, 1.0 / std::sqrt(3.0), delta_xi,
                         std::sqrt(3.0) * delta_xi * delta_xi, tau);
}

FourModeModel four_mode_model(const EnsembleSpec& ensemble, double tau, XiAverage convention,
                              double delta_xi) {
  ensemble.validate();
  const double g_ens = ensemble.g_ens();
  if (convention == XiAverage::kGaussianLimit) return four_mode_model(g_ens, delta_xi, tau);
  if (!(ensemble.g_xi_av() > 0.0)) {
    return four_mode_model(g_ens, 1.0 / std::sqrt(3.0), 0.0, 0.0, tau);
  }
  CollectiveOverlaps o = collective_overlaps(ensemble);
  const double g_av = ensemble.g_av();
  double xi_av = convention == XiAverage::kSignedMean ? ensemble.signed_mean_xi()
                                                      : ensemble.g_xi_av() / g_av;
  return four_mode_model(g_ens, o.s, xi_av, ensemble.g_xi2_av() / g_av, tau);
}

DoubletEnergies doublet_energies(const FourModeModel& model) {
  const double wp = model.omega_plus;
  const double wm = model.omega_minus;
  const double qp = model.omega_prime_plus;
  const double qm = model.omega_prime_minus;
  const double total = wp * wp + wm * wm + qp * qp + qm * qm;
  const double sigma2 = std::sqrt(((wp + qp) * (wp + qp) + (wm - qm) * (wm - qm)) *
                                  ((wp - qp) * (wp - qp) + (wm + qm) * (wm + qm)));
  if (sigma2 > total * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "doublet_energies: Sigma^2 = " << sigma2 << " exceeds omega_tot^2 = " << total;
    throw NumericalError(msg.str());
  }
  DoubletEnergies e;
  e.bright_plus = std::sqrt(0.5 * (total + sigma2));
  e.bright_minus = -e.bright_plus;
  // The product of the two positive energies is |det|^(1/2) =
  // |w- w'- - w+ w'+|; this avoids cancellation in (total - sigma2).
  if (e.bright_plus > 0.0) e.dark_plus = std::abs(wm * qm - wp * qp) / e.bright_plus;
  e.dark_minus = -e.dark_plus;
  return e;
}

RealVector exact_spectrum(const EnsembleSpec& ensemble, double tau) {
  ensemble.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("exact_spectrum: tau must be positive");
  const int n = ensemble.size();
  const int dim = n + 1;  // photon then qubits
  const double root_n = std::sqrt(static_cast<double>(n));
  const double omega1 = -(n * tau * tau / 48.0) * ensemble.g_av() * ensemble.g_xi_av();
  const double omega2 = -(root_n * tau * tau / 48.0) * ensemble.g_xi2_av();
  const double chi = (tau * tau / 24.0) * ensemble.chi_moment();
  const bool detuned = ensemble.g_xi_av() > 0.0;

  // Spanning kets u_k and the coefficient matrix C with H = sum C_kl |u_k><u_l|.
  const int modes = detuned ? 4 : 2;
  RealMatrix u = RealMatrix::Zero(dim, modes);
  u(0, 0) = 1.0;
  u.col(1).tail(n) = ensemble.mode_b();
  RealMatrix coeff = RealMatrix::Zero(modes, modes);
  coeff(0, 0) = chi;
  coeff(0, 1) = coeff(1, 0) = 0.5 * ensemble.g_ens();
  if (detuned) {
    u.col(2).tail(n) = ensemble.mode_c();
    u.col(3).tail(n) = ensemble.mode_d();
    coeff(1, 2) = coeff(2, 1) = omega1;
    coeff(0, 3) = coeff(3, 0) = omega2;
  }

  Eigen::ColPivHouseholderQR<RealMatrix> qr(u);
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  RealMatrix q = RealMatrix(qr.householderQ()).leftCols(rank);
  RealMatrix overlap = q.transpose() * u;
  RealMatrix reduced = overlap * coeff * overlap.transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(reduced, Eigen::EigenvaluesOnly);

  RealVector out = RealVector::Zero(dim);
  out.head(rank) = solver.eigenvalues();
  std::sort(out.data(), out.data() + dim);
  return out;
}

double ensemble_transfer_error(double g_ens, double delta_xi, int n_p) {
  if (!(g_ens > 0.0)) throw std::invalid_argument("ensemble_transfer_error: g_ens must be positive");
  if (n_p < 1) throw std::invalid_argument("ensemble_transfer_error: n_p must be positive");
  const double r = delta_xi / (2.0 * g_ens);
  const double q = std::numbers::pi / (2.0 * n_p);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return ((8.0 + pi2) / 18.0 * std::pow(r, 4) + r * r / 18.0) * std::pow(q, 4);
}

double ensemble_transfer_fidelity_numeric(const FourModeModel& model, int n_p) {
  if (n_p < 1) throw std::invalid_argument("ensemble_transfer_fidelity_numeric: n_p must be positive");
  // Vacuum (index 0) followed by (a~, b~, c~, d~).
  Matrix h = Matrix::Zero(5, 5);
  h.block(1, 1, 4, 4) = model.matrix.cast<cplx>();
  Matrix u = expm_hermitian(h, n_p * model.tau);
  Vector vacuum = Vector::Unit(5, 0);
  Vector photon = Vector::Unit(5, 1);
  Vector b = std::sqrt(0.5 * (1.0 + model.s)) * Vector::Unit(5, 4) -
             std::sqrt(0.5 * (1.0 - model.s)) * Vector::Unit(5, 2);
  return six_state_fidelity(u, vacuum, photon, vacuum, -kI * b);
}

}  // namespace cqed
