// Copyright 2026 The cpgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// rf-SQUID spectrum from a finite-difference discretisation of
//   H = Q^2/2C + (Phi - Phi_x)^2/2L - E_J cos(2 pi Phi/Phi_0),  Q = -i hbar d/dPhi
// on a flux window with hard walls. SI inputs; energies are returned as
// angular frequencies (rad/s) relative to the ground level.

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cpgate {

inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;          // J s
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElementaryCharge);  // Wb

struct SquidParams {
    double capacitance = 0.0;       ///< F
    double inductance = 0.0;        ///< H
    double critical_current = 0.0;  ///< A
    double bias_flux = 0.0;         ///< Wb

    /// E_J = I_c Phi_0 / (2 pi), joules.
    double josephson_energy() const;
    /// beta_L = 2 pi L I_c / Phi_0.
    double screening() const;
    /// Throws std::invalid_argument unless C > 0, L > 0 and I_c >= 0.
    void validate() const;
};

struct GridConfig {
    double half_width_phi0 = 0.7;  ///< window half-width around the potential minimum, units of Phi_0
    int points = 2001;             ///< odd, >= 201

    void validate() const;
    /// Same window, 2 * points - 1 nodes (grid spacing halved).
    GridConfig doubled() const { return {half_width_phi0, 2 * points - 1}; }
};

/// U(Phi) in joules.
double squid_potential(const SquidParams& p, double flux);

/// Location (Wb) of the global minimum of U on [Phi_x - Phi_0, Phi_x + Phi_0].
double potential_minimum(const SquidParams& p);

/// Raw eigenpairs on one grid. `wavefunctions` columns are normalised under
/// the grid inner product sum |psi_i|^2 dPhi = 1 (dPhi in units of Phi_0).
struct GridSolution {
    Eigen::VectorXd flux_phi0;      ///< node positions, units of Phi_0
    Eigen::VectorXd energies;       ///< absolute eigenvalues, rad/s
    Eigen::MatrixXd wavefunctions;  ///< points x k
    double spacing_phi0 = 0.0;
};

/// k lowest eigenpairs of the discretised Hamiltonian. `center_phi0` fixes
/// the window centre; by default the global potential minimum is used.
GridSolution solve_grid(const SquidParams& p, const GridConfig& grid, int k);
GridSolution solve_grid(const SquidParams& p, const GridConfig& grid, int k, double center_phi0);

struct LevelStructure {
    std::vector<double> energies;  ///< rad/s, energies[0] == 0
    int grid_points = 0;
    int doubled_points = 0;
    double max_relative_change = 0.0;  ///< grid-doubling diagnostic over the four lowest levels
    double outer_mass = 0.0;           ///< highest level's probability in the outer 5% of the window

    /// E_j - E_i.
    double transition(int i, int j) const;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(std::vector<double> coarse, std::vector<double> fine, double change);

    const std::vector<double>& coarse() const noexcept { return coarse_; }
    const std::vector<double>& fine() const noexcept { return fine_; }
    double relative_change() const noexcept { return change_; }

private:
    std::vector<double> coarse_;
    std::vector<double> fine_;
    double change_;
};

class WindowTooSmallError : public std::invalid_argument {
public:
    explicit WindowTooSmallError(double outer_mass);

    double outer_mass() const noexcept { return outer_mass_; }

private:
    double outer_mass_;
};

inline constexpr double kConvergenceTolerance = 1e-3;
inline constexpr double kOuterMassLimit = 1e-6;

/// k (>= 4) lowest levels with a grid-doubling convergence check on the
/// four lowest. Throws NonConvergenceError or WindowTooSmallError.
LevelStructure eigenlevels(const SquidParams& p, const GridConfig& grid = {}, int k = 4);

/// Antisymmetric table T(i, j) = E_j - E_i.
Eigen::MatrixXd transition_table(const LevelStructure& levels);

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message);

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct DeviceConfig {
    SquidParams squid;
    GridConfig grid;
};

/// Line-based `key = value` file; `#` starts a comment. Required keys:
/// capacitance_f, inductance_h, critical_current_a, bias_flux_phi0_fraction.
/// Optional: grid_points, window_phi0.
DeviceConfig parse_device_config(std::istream& in);
DeviceConfig load_device_config(const std::string& path);

}  // namespace cpgate
