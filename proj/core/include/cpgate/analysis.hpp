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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpgate/protocol.hpp"

namespace cpgate {

/// Peak population of |3> of SQUID b during the dispersive wait:
/// 4 g^2 / (4 g^2 + delta^2).
double occupation_p3(double g, double delta);

/// Closed-form error terms for the spurious dispersive shift s = g_b^2/delta_c
/// acting on SQUID b while the step (ii)/(iv) pulses run.
struct FidelityTerms {
    double s = 0.0;
    double phi = 0.0;  ///< pi sqrt(omega12^2 + s^2/4) / (2 omega12)
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

FidelityTerms fidelity_terms(double omega12, double g_b, double delta_c);

/// Same terms with the shift s given directly (s = 0 is the error-free limit).
FidelityTerms fidelity_terms_from_shift(double omega12, double s);

/// Fidelity |<psi_id|psi>|^2 as a function of x = |theta|^2 in [0, 1].
double fidelity_F(double x, const FidelityTerms& terms);

/// Integral of fidelity_F over x in [0, 1], in closed form.
double average_fidelity(const FidelityTerms& terms);

struct SweepRow {
    double omega12 = 0.0;
    double avg_fidelity_analytic = 0.0;
    std::optional<double> avg_fidelity_full;
    std::optional<double> stderr_full;
};

/// Analytic average fidelity at every grid point. Grid values must be
/// positive and ascending.
std::vector<SweepRow> sweep_average_fidelity(const std::vector<double>& grid, double g_b, double delta_c);

struct MonteCarloFidelity {
    double mean = 0.0;
    double standard_error = 0.0;
    int samples = 0;
};

/// Mean |<psi_id|psi(tau)>|^2 over random normalized two-qubit inputs
/// (uniform on the unit 7-sphere of real and imaginary parts) under the
/// full model. Deterministic in `seed`.
MonteCarloFidelity full_model_average_fidelity(const GateParams& params, int samples, std::uint64_t seed = 0,
                                               const FullModelTerms& terms = {});

struct FullSweepOptions {
    int samples = 200;
    std::uint64_t seed = 0;
    int jobs = 1;
};

/// Analytic sweep plus the full-model Monte Carlo column. omega_02 follows
/// omega_12 at each point. Rows come back in grid order for any `jobs`.
std::vector<SweepRow> sweep_with_full_model(const std::vector<double>& grid, const GateParams& base,
                                            const FullSweepOptions& options);

/// Fixed-format CSV with 12 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct BudgetOptions {
    std::optional<double> gamma3_inv;  ///< relaxation time of |3>_a, units of 1/g_b
    std::optional<double> s_override;  ///< replaces g_b^2/delta_c in the analytic terms
    int samples = 200;
    std::uint64_t seed = 0;
};

struct ErrorBudget {
    double p3 = 0.0;
    double analytic_infidelity = 0.0;     ///< 1 - average_fidelity
    double full_residual = 0.0;           ///< analytic average fidelity - full-model mean
    double full_model_stderr = 0.0;
    std::optional<double> relaxation_exposure;  ///< (t1 + t1') / gamma3_inv
};

ErrorBudget error_budget(const GateParams& params, const BudgetOptions& options = {});

/// JSON object with keys p3, analytic_infidelity, full_residual,
/// relaxation_exposure (null when no relaxation time was given).
std::string error_budget_json(const ErrorBudget& budget);

}  // namespace cpgate
