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

#include "cpgate/protocol.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace cpgate {

namespace {

constexpr double kPi = std::numbers::pi;

CouplingTerm coupling(CouplingKind kind, Squid squid) { return {kind, squid}; }

}  // namespace

double Schedule::total_duration() const {
    return std::accumulate(segments.begin(), segments.end(), 0.0,
                           [](double acc, const Segment& s) { return acc + s.duration; });
}

StepDurations step_durations(const GateParams& params) {
    return {kPi / (2.0 * params.omega_13), kPi / (2.0 * params.g_a), kPi / (2.0 * params.omega_02),
            kPi * params.delta_c / (params.g_b * params.g_b)};
}

Schedule build_schedule(const GateParams& params) {
    params.validate();
    if (params.omega_02 != params.omega_12) {
        throw std::invalid_argument("omega_02 and omega_12 must be equal (shared pulse duration t2)");
    }
    const auto t = step_durations(params);

    const DriveTerm pulse_13{Squid::a, {1, 3}, params.omega_13, kPi};
    const DriveTerm a_up{Squid::a, {0, 2}, params.omega_02, kPi / 2};
    const DriveTerm b_up{Squid::b, {1, 2}, params.omega_12, -kPi / 2};
    const DriveTerm a_down{Squid::a, {0, 2}, params.omega_02, -kPi / 2};
    const DriveTerm b_down{Squid::b, {1, 2}, params.omega_12, kPi / 2};

    Schedule s;
    s.segments = {
        {"i", {pulse_13}, t.t1},
        {"i", {}, t.t1_prime},
        {"ii", {a_up, b_up}, t.t2},
        {"iii", {}, t.t3},
        {"iv", {a_down, b_down}, t.t2},
        {"v", {}, t.t1_prime},
        {"v", {pulse_13}, t.t1},
    };
    return s;
}

double gate_time(const GateParams& params) {
    return kPi / params.g_a + kPi * params.delta_c / (params.g_b * params.g_b) + kPi / params.omega_13 +
           kPi / params.omega_02;
}

HamiltonianSpec segment_hamiltonian(const Segment& segment, const ModelConfig& model) {
    HamiltonianSpec h;
    for (const auto& d : segment.drives) h.terms.emplace_back(d);

    const bool full = model.kind == FidelityModelKind::full;
    const auto b_wait_kind =
        full && model.terms.squid_b_exact_in_waits ? CouplingKind::jc_detuned : CouplingKind::dispersive;

    if (segment.is_wait()) {
        h.terms.emplace_back(coupling(CouplingKind::jc_resonant, Squid::a));
        h.terms.emplace_back(coupling(b_wait_kind, Squid::b));
        return h;
    }
    if (full && model.terms.squid_a_during_pulses) {
        h.terms.emplace_back(coupling(CouplingKind::jc_resonant, Squid::a));
    }
    if (full && model.terms.squid_b_during_pulses) {
        h.terms.emplace_back(coupling(CouplingKind::jc_detuned, Squid::b));
    }
    return h;
}

std::vector<TimedHamiltonian> realize_schedule(const Schedule& schedule, const ModelConfig& model) {
    std::vector<TimedHamiltonian> out;
    out.reserve(schedule.segments.size());
    for (const auto& seg : schedule.segments) {
        out.push_back({segment_hamiltonian(seg, model), seg.duration});
    }
    return out;
}

OperatorMatrix schedule_propagator(const Schedule& schedule, const GateParams& params, const ModelConfig& model) {
    return propagator(realize_schedule(schedule, model), params);
}

Eigen::Matrix4cd ideal_gate_unitary() {
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
    u(3, 3) = -1.0;
    return u;
}

Eigen::Matrix4cd TruthTable::matrix() const {
    Eigen::Matrix4cd m;
    for (int j = 0; j < 4; ++j) m.col(j) = rows[j].output;
    return m;
}

double TruthTable::max_leakage() const {
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.leakage);
    return worst;
}

double TruthTable::max_deviation_from_ideal() const {
    return (matrix() - ideal_gate_unitary()).cwiseAbs().maxCoeff();
}

StateVector embed_qubits(const Eigen::Vector4cd& input, const SystemSpace& space) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dimension());
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) amps(space.index(k, l, 0)) = input(2 * k + l);
    }
    return {space.dims(), std::move(amps)};
}

Eigen::Vector4cd project_qubits(const StateVector& state, const SystemSpace& space) {
    Eigen::Vector4cd out;
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) out(2 * k + l) = state[space.index(k, l, 0)];
    }
    return out;
}

TruthTable run_truth_table(const GateParams& params, const ModelConfig& model) {
    return run_truth_table(build_schedule(params), params, model);
}

TruthTable run_truth_table(const Schedule& schedule, const GateParams& params, const ModelConfig& model) {
    const SystemSpace space = params.space();
    const OperatorMatrix u = schedule_propagator(schedule, params, model);

    TruthTable table;
    for (int j = 0; j < 4; ++j) {
        const auto column = u.entries().col(space.index(j / 2, j % 2, 0));
        auto& row = table.rows[j];
        row.input = kQubitLabels[j];
        for (int i = 0; i < 4; ++i) row.output(i) = column(space.index(i / 2, i % 2, 0));
        row.leakage = std::max(0.0, 1.0 - row.output.squaredNorm());
    }
    const double reference = std::arg(table.rows[0].output(0));
    for (int j = 0; j < 4; ++j) {
        auto& row = table.rows[j];
        // Wrap into (-pi, pi].
        row.relative_phase = std::arg(row.output(j) * std::polar(1.0, -reference));
    }
    return table;
}

GateResult apply_gate(const Eigen::Vector4cd& input, const GateParams& params, const ModelConfig& model) {
    return apply_gate(input, build_schedule(params), params, model);
}

GateResult apply_gate(const Eigen::Vector4cd& input, const Schedule& schedule, const GateParams& params,
                      const ModelConfig& model) {
    if (std::abs(input.norm() - 1.0) > kNormalizationTolerance) {
        throw std::invalid_argument("two-qubit input state must be normalized");
    }
    const SystemSpace space = params.space();
    StateVector final_state = propagate(embed_qubits(input, space), realize_schedule(schedule, model), params);
    Eigen::Vector4cd comp = project_qubits(final_state, space);
    const double leak = std::max(0.0, 1.0 - comp.squaredNorm());
    return {std::move(final_state), comp, leak};
}

}  // namespace cpgate
