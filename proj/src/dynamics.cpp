#include "circuitforge/dynamics.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

namespace circuitforge {

namespace detail {

using State = std::vector<Complex>;

struct ProjectedRhs {
  const Eigen::VectorXd* energies;   // hertz, ground-referenced
  const Eigen::MatrixXcd* drive_op;
  double amplitude;                  // hertz
  double frequency;                  // hertz

  void operator()(const State& psi, State& dpsi, double t) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const int d = static_cast<int>(psi.size());
    const double drive = amplitude * std::cos(two_pi * frequency * t);
    for (int i = 0; i < d; ++i) {
      Complex acc = (*energies)(i)*psi[i];
      if (drive != 0.0) {
        for (int j = 0; j < d; ++j) acc += drive * (*drive_op)(i, j) * psi[j];
      }
      dpsi[i] = Complex(0.0, -two_pi) * acc;
    }
  }
};

}  // namespace detail

// Integrates the projected Schrodinger equation between two times (backward
// when t1 < t0), sampling on a uniform grid.  Shared by the public entry
// point and the time-reversal tests.
void evolve_projected(const Eigen::VectorXd& energies,
                      const Eigen::MatrixXcd& drive_op, double amplitude,
                      double frequency, std::vector<Complex>& psi, double t0,
                      double t1, int points, double tolerance,
                      const std::function<void(double, const std::vector<Complex>&)>&
                          observer) {
  namespace ode = boost::numeric::odeint;
  using Stepper = ode::runge_kutta_dopri5<detail::State>;
  detail::ProjectedRhs rhs{&energies, &drive_op, amplitude, frequency};
  auto stepper = ode::make_controlled<Stepper>(tolerance, tolerance);
  const double span = t1 - t0;
  const double dt0 = span / std::max(points - 1, 1);
  std::vector<double> times(points);
  for (int i = 0; i < points; ++i) {
    times[i] = t0 + span * double(i) / double(std::max(points - 1, 1));
  }
  try {
    ode::integrate_times(stepper, rhs, psi, times.begin(), times.end(), dt0,
                         [&](const detail::State& s, double t) { observer(t, s); });
  } catch (const std::exception& e) {
    throw IntegrationFailure(std::string("adaptive step collapsed: ") + e.what());
  }
}

DynamicsReport evolve_driven(const ChainCircuit& circuit, const DriveSpec& drive,
                             const TruncationPolicy& truncation) {
  if (drive.levels < 2) throw std::invalid_argument("need at least 2 levels");
  if (drive.initial_state >= drive.levels) {
    throw std::invalid_argument("initial state outside the retained levels");
  }
  auto sys = assemble_chain_hamiltonian(circuit, truncation);
  const int d = std::min(drive.levels, sys.dimension());
  Eigensystem eig = eigensystem(sys.hamiltonian, d);
  Eigen::MatrixXcd op = matrix_elements(sys, eig, drive.operator_label);
  Eigen::VectorXd energies = eig.values.array() - eig.values(0);

  DynamicsReport report;
  const double n10 = std::abs(op(1, 0));
  if (drive.amplitude > 0.0 && n10 > 1e-12) {
    report.t_eff = 1.0 / (2.0 * drive.amplitude * n10);
  } else if (drive.frequency > 0.0) {
    report.t_eff = 1.0 / drive.frequency;
  } else {
    report.t_eff = 1.0;
  }
  const double t_max = drive.horizon * report.t_eff;

  std::vector<Complex> psi(d, Complex(0.0, 0.0));
  psi[drive.initial_state] = 1.0;

  report.times.reserve(drive.output_points);
  report.populations.reserve(drive.output_points);
  evolve_projected(
      energies, op, drive.amplitude, drive.frequency, psi, 0.0, t_max,
      drive.output_points, drive.tolerance,
      [&](double t, const std::vector<Complex>& state) {
        double norm2 = 0.0;
        std::vector<double> pops(d);
        for (int j = 0; j < d; ++j) {
          pops[j] = std::norm(state[j]);
          norm2 += pops[j];
        }
        report.norm_drift = std::max(report.norm_drift, std::abs(1.0 - norm2));
        report.times.push_back(t);
        report.populations.push_back(std::move(pops));
      });
  return report;
}

Eigen::MatrixXd dump_operator_matrix(const ChainCircuit& circuit,
                                     const std::string& operator_label, int k,
                                     const TruncationPolicy& truncation) {
  auto sys = assemble_chain_hamiltonian(circuit, truncation);
  const int kk = std::min(k, sys.dimension());
  Eigensystem eig = eigensystem(sys.hamiltonian, kk);
  return matrix_elements(sys, eig, operator_label).cwiseAbs();
}

}  // namespace circuitforge
