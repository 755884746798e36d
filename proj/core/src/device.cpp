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

#include "cpgate/device.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <lapacke.h>

namespace cpgate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCheckedLevels = 4;
constexpr int kMinimumScanPoints = 200001;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string nonconvergence_message(double change) {
    std::ostringstream os;
    os << "eigenvalues not converged under grid doubling: max relative change " << change << " exceeds "
       << kConvergenceTolerance;
    return os.str();
}

std::string window_message(double mass) {
    std::ostringstream os;
    os << "flux window too small: highest level has probability " << mass << " in the outer 5% of the window";
    return os.str();
}

/// Probability of column `level` in the outer 5% on either side of the window.
double outer_mass(const GridSolution& sol, int level) {
    const auto n = sol.flux_phi0.size();
    const auto edge = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(0.05 * static_cast<double>(n))));
    const auto psi = sol.wavefunctions.col(level);
    const double left = psi.head(edge).squaredNorm();
    const double right = psi.tail(edge).squaredNorm();
    return (left + right) * sol.spacing_phi0;
}

}  // namespace

double SquidParams::josephson_energy() const { return critical_current * kFluxQuantum / kTwoPi; }

double SquidParams::screening() const { return kTwoPi * inductance * critical_current / kFluxQuantum; }

void SquidParams::validate() const {
    if (!(capacitance > 0.0)) throw std::invalid_argument("capacitance must be positive");
    if (!(inductance > 0.0)) throw std::invalid_argument("inductance must be positive");
    if (!(critical_current >= 0.0)) throw std::invalid_argument("critical current must be nonnegative");
    if (!std::isfinite(bias_flux)) throw std::invalid_argument("bias flux must be finite");
}

void GridConfig::validate() const {
    if (points < 201 || points % 2 == 0) throw std::invalid_argument("grid point count must be odd and >= 201");
    if (!(half_width_phi0 > 0.0)) throw std::invalid_argument("flux window half-width must be positive");
}

double squid_potential(const SquidParams& p, double flux) {
    const double d = flux - p.bias_flux;
    return d * d / (2.0 * p.inductance) - p.josephson_energy() * std::cos(kTwoPi * flux / kFluxQuantum);
}

double potential_minimum(const SquidParams& p) {
    const double lo = p.bias_flux - kFluxQuantum;
    const double step = 2.0 * kFluxQuantum / (kMinimumScanPoints - 1);
    double best_flux = p.bias_flux;
    double best = squid_potential(p, best_flux);
    for (int i = 0; i < kMinimumScanPoints; ++i) {
        const double f = lo + step * i;
        const double u = squid_potential(p, f);
        if (u < best) {
            best = u;
            best_flux = f;
        }
    }
    return best_flux;
}

GridSolution solve_grid(const SquidParams& p, const GridConfig& grid, int k) {
    p.validate();
    return solve_grid(p, grid, k, potential_minimum(p) / kFluxQuantum);
}

GridSolution solve_grid(const SquidParams& p, const GridConfig& grid, int k, double center_phi0) {
    p.validate();
    grid.validate();
    if (k < 1 || k > grid.points) throw std::invalid_argument("requested level count out of range");

    const int n = grid.points;
    const double h = 2.0 * grid.half_width_phi0 / (n - 1);
    // -hbar^2/(2C) d^2/dPhi^2 divided by hbar, with Phi measured in Phi_0.
    const double kinetic = kHbar / (2.0 * p.capacitance * kFluxQuantum * kFluxQuantum) / (h * h);

    GridSolution sol;
    sol.spacing_phi0 = h;
    sol.flux_phi0.resize(n);
    std::vector<double> diag(static_cast<std::size_t>(n));
    std::vector<double> off(static_cast<std::size_t>(n), -kinetic);
    for (int j = 0; j < n; ++j) {
        const double x = center_phi0 - grid.half_width_phi0 + h * j;
        sol.flux_phi0(j) = x;
        diag[static_cast<std::size_t>(j)] = squid_potential(p, x * kFluxQuantum) / kHbar + 2.0 * kinetic;
    }

    std::vector<double> w(static_cast<std::size_t>(n));
    std::vector<double> z(static_cast<std::size_t>(n) * static_cast<std::size_t>(k));
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(k));
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, k,
                                           0.0, &found, w.data(), z.data(), n, support.data());
    if (info != 0 || found != k) throw std::runtime_error("tridiagonal eigensolver failed");

    sol.energies = Eigen::Map<Eigen::VectorXd>(w.data(), k);
    sol.wavefunctions = Eigen::Map<Eigen::MatrixXd>(z.data(), n, k) / std::sqrt(h);
    return sol;
}

double LevelStructure::transition(int i, int j) const {
    return energies.at(static_cast<std::size_t>(j)) - energies.at(static_cast<std::size_t>(i));
}

NonConvergenceError::NonConvergenceError(std::vector<double> coarse, std::vector<double> fine, double change)
    : std::runtime_error(nonconvergence_message(change)),
      coarse_(std::move(coarse)),
      fine_(std::move(fine)),
      change_(change) {}

WindowTooSmallError::WindowTooSmallError(double mass)
    : std::invalid_argument(window_message(mass)), outer_mass_(mass) {}

LevelStructure eigenlevels(const SquidParams& p, const GridConfig& grid, int k) {
    if (k < kCheckedLevels) throw std::invalid_argument("at least four levels are required");
    p.validate();
    grid.validate();
    const double center = potential_minimum(p) / kFluxQuantum;

    const GridSolution coarse = solve_grid(p, grid, k, center);
    const double mass = outer_mass(coarse, kCheckedLevels - 1);
    if (mass > kOuterMassLimit) throw WindowTooSmallError(mass);

    const GridConfig fine_grid = grid.doubled();
    const GridSolution fine = solve_grid(p, fine_grid, kCheckedLevels, center);

    const double gap = fine.energies(1) - fine.energies(0);
    double change = std::abs(coarse.energies(0) - fine.energies(0)) / gap;
    for (int i = 1; i < kCheckedLevels; ++i) {
        const double rc = coarse.energies(i) - coarse.energies(0);
        const double rf = fine.energies(i) - fine.energies(0);
        change = std::max(change, std::abs(rc - rf) / std::abs(rf));
    }

    LevelStructure ls;
    ls.energies.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) ls.energies[static_cast<std::size_t>(i)] = coarse.energies(i) - coarse.energies(0);
    ls.grid_points = grid.points;
    ls.doubled_points = fine_grid.points;
    ls.max_relative_change = change;
    ls.outer_mass = mass;

    if (!(change < kConvergenceTolerance)) {
        std::vector<double> fine_levels(kCheckedLevels);
        for (int i = 0; i < kCheckedLevels; ++i) {
            fine_levels[static_cast<std::size_t>(i)] = fine.energies(i) - fine.energies(0);
        }
        std::vector<double> coarse_levels(ls.energies.begin(), ls.energies.begin() + kCheckedLevels);
        throw NonConvergenceError(std::move(coarse_levels), std::move(fine_levels), change);
    }
    return ls;
}

Eigen::MatrixXd transition_table(const LevelStructure& levels) {
    const auto n = static_cast<Eigen::Index>(levels.energies.size());
    Eigen::MatrixXd t(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            t(i, j) = levels.energies[static_cast<std::size_t>(j)] - levels.energies[static_cast<std::size_t>(i)];
        }
    }
    return t;
}

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key + ": " + message), key_(std::move(key)) {}

DeviceConfig parse_device_config(std::istream& in) {
    std::map<std::string, double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected `key = value`");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string text = trim(std::string_view(body).substr(eq + 1));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
            throw ConfigError(key, "invalid numeric value `" + text + "`");
        }
        if (!values.emplace(key, v).second) throw ConfigError(key, "duplicate key");
    }

    static const char* const known[] = {"capacitance_f",           "inductance_h", "critical_current_a",
                                        "bias_flux_phi0_fraction", "grid_points",  "window_phi0"};
    for (const auto& [key, v] : values) {
        if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) ==
            std::end(known)) {
            throw ConfigError(key, "unknown key");
        }
    }
    auto require = [&](const char* key) {
        const auto it = values.find(key);
        if (it == values.end()) throw ConfigError(key, "missing required key");
        return it->second;
    };

    DeviceConfig cfg;
    cfg.squid.capacitance = require("capacitance_f");
    cfg.squid.inductance = require("inductance_h");
    cfg.squid.critical_current = require("critical_current_a");
    cfg.squid.bias_flux = require("bias_flux_phi0_fraction") * kFluxQuantum;
    if (const auto it = values.find("grid_points"); it != values.end()) {
        if (it->second != std::floor(it->second)) throw ConfigError("grid_points", "must be an integer");
        cfg.grid.points = static_cast<int>(it->second);
    }
    if (const auto it = values.find("window_phi0"); it != values.end()) cfg.grid.half_width_phi0 = it->second;

    try {
        cfg.squid.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        const char* key = what.rfind("capacitance", 0) == 0   ? "capacitance_f"
                          : what.rfind("inductance", 0) == 0  ? "inductance_h"
                          : what.rfind("critical", 0) == 0    ? "critical_current_a"
                                                              : "bias_flux_phi0_fraction";
        throw ConfigError(key, what);
    }
    try {
        cfg.grid.validate();
    } catch (const std::invalid_argument& e) {
        const std::string what = e.what();
        throw ConfigError(what.rfind("grid", 0) == 0 ? "grid_points" : "window_phi0", what);
    }
    return cfg;
}

DeviceConfig load_device_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open device config");
    return parse_device_config(in);
}

}  // namespace cpgate
