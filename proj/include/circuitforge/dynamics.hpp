#pragma once

#include <functional>
#include <string>
#include <vector>

#include "circuitforge/quantize.hpp"
#include "circuitforge/spectrum.hpp"

namespace circuitforge {

struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DriveSpec {
  double amplitude = 0.0;   // Omega [Hz]; 0 keeps every population frozen
  double frequency = 0.0;   // nu [Hz]
  std::string operator_label = "charge-edge-left";
  int initial_state = 0;
  int levels = 8;           // eigenbasis truncation D
  // Evolution horizon in units of t_eff = 1/(2 Omega |N_10|); when the
  // reference element vanishes, horizon_periods / frequency is used.
  double horizon = 2.0;
  int output_points = 400;
  double tolerance = 1e-9;
};

struct DynamicsReport {
  std::vector<double> times;                  // seconds
  std::vector<std::vector<double>> populations;  // [time][level]
  double t_eff = 0.0;                         // seconds
  double norm_drift = 0.0;                    // max |1 - ||psi||^2|
};

// Projects H and the drive operator onto the lowest D eigenstates and
// integrates i dpsi/dt = 2 pi (H + Omega cos(2 pi nu t) O) psi with an
// adaptive Dormand-Prince step.
DynamicsReport evolve_driven(const ChainCircuit& circuit, const DriveSpec& drive,
                             const TruncationPolicy& truncation = {});

// |<i|O|j>| magnitudes of the lowest k levels, for plot emission.
Eigen::MatrixXd dump_operator_matrix(const ChainCircuit& circuit,
                                     const std::string& operator_label, int k,
                                     const TruncationPolicy& truncation = {});

// Low-level integrator over an already-projected system; integrates
// backward when t1 < t0.  psi is updated in place.
void evolve_projected(const Eigen::VectorXd& energies,
                      const Eigen::MatrixXcd& drive_op, double amplitude,
                      double frequency, std::vector<Complex>& psi, double t0,
                      double t1, int points, double tolerance,
                      const std::function<void(double, const std::vector<Complex>&)>&
                          observer);

}  // namespace circuitforge
