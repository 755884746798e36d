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

#include <array>
#include <string>
#include <vector>

#include "cpgate/dynamics.hpp"

namespace cpgate {

/// One piecewise-constant slice of a pulse sequence. A segment with no drives
/// is a free wait during which only the resonator couplings act.
struct Segment {
    std::string step;
    std::vector<DriveTerm> drives;
    double duration = 0.0;

    bool is_wait() const noexcept { return drives.empty(); }
};

struct Schedule {
    std::vector<Segment> segments;

    double total_duration() const;
};

/// Which unwanted couplings the full model keeps. All on is the physical
/// model; all off collapses it onto the ideal model.
struct FullModelTerms {
    bool squid_a_during_pulses = true;  ///< resonant g_a coupling while pulses act
    bool squid_b_during_pulses = true;  ///< detuned g_b coupling while pulses act
    bool squid_b_exact_in_waits = true; ///< detuned JC (true) or its dispersive limit (false)
};

struct ModelConfig {
    FidelityModelKind kind = FidelityModelKind::ideal;
    FullModelTerms terms;

    static ModelConfig ideal() { return {}; }
    static ModelConfig full() { return {FidelityModelKind::full, {}}; }
};

/// Durations of the individual steps.
struct StepDurations {
    double t1 = 0.0;        ///< pi / (2 omega_13)
    double t1_prime = 0.0;  ///< pi / (2 g_a)
    double t2 = 0.0;        ///< pi / (2 omega_02)
    double t3 = 0.0;        ///< pi delta_c / g_b^2
};

StepDurations step_durations(const GateParams& params);

/// The five-step controlled-phase sequence, seven segments long. Rejects
/// omega_02 != omega_12 because both step (ii)/(iv) pulses share t2.
Schedule build_schedule(const GateParams& params);

/// tau = pi/g_a + pi delta_c/g_b^2 + pi/omega_13 + pi/omega_02.
double gate_time(const GateParams& params);

/// Hamiltonian acting during `segment` under `model`.
HamiltonianSpec segment_hamiltonian(const Segment& segment, const ModelConfig& model);

std::vector<TimedHamiltonian> realize_schedule(const Schedule& schedule, const ModelConfig& model);

OperatorMatrix schedule_propagator(const Schedule& schedule, const GateParams& params, const ModelConfig& model);

/// diag(1, 1, 1, -1) on {|00>, |01>, |10>, |11>}.
Eigen::Matrix4cd ideal_gate_unitary();

/// Computational basis labels in row order: "00", "01", "10", "11".
inline constexpr std::array<const char*, 4> kQubitLabels = {"00", "01", "10", "11"};

struct TruthTableRow {
    std::string input;
    Eigen::Vector4cd output;   ///< amplitudes on (computational basis) x |0>_c
    double relative_phase = 0; ///< arg of the diagonal amplitude relative to the |00> row
    double leakage = 0;        ///< 1 - population in (computational basis) x |0>_c
};

struct TruthTable {
    std::array<TruthTableRow, 4> rows;

    /// Columns are the output vectors of the four rows.
    Eigen::Matrix4cd matrix() const;
    double max_leakage() const;
    /// max |row amplitude - ideal CP amplitude| over all entries.
    double max_deviation_from_ideal() const;
};

TruthTable run_truth_table(const GateParams& params, const ModelConfig& model);
TruthTable run_truth_table(const Schedule& schedule, const GateParams& params, const ModelConfig& model);

struct GateResult {
    StateVector final_state;
    Eigen::Vector4cd computational;  ///< projection onto (computational basis) x |0>_c
    double leakage = 0.0;
};

inline constexpr double kNormalizationTolerance = 1e-10;

/// Embeds alpha|00> + beta|01> + gamma|10> + theta|11> with the resonator in
/// vacuum and runs the schedule. Rejects inputs whose norm differs from 1 by
/// more than 1e-10.
GateResult apply_gate(const Eigen::Vector4cd& input, const GateParams& params, const ModelConfig& model);
GateResult apply_gate(const Eigen::Vector4cd& input, const Schedule& schedule, const GateParams& params,
                      const ModelConfig& model);

/// Embedding of a two-qubit amplitude vector into the full space.
StateVector embed_qubits(const Eigen::Vector4cd& input, const SystemSpace& space);

/// Projection of a full-space state onto (computational basis) x |0>_c.
Eigen::Vector4cd project_qubits(const StateVector& state, const SystemSpace& space);

}  // namespace cpgate
