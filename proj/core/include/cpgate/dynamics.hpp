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

// Hamiltonians of the two-SQUID + resonator system and piecewise-constant
// propagation. Units: hbar = 1, every frequency is an angular frequency in
// units of g_b, every time in units of 1/g_b. All Hamiltonians live in the
// rotating frame and are time independent within a segment.

#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cpgate/hilbert.hpp"

namespace cpgate {

enum class Squid { a, b };

std::string_view to_string(Squid squid);

/// Couplings, detuning and drive strengths of the gate.
struct GateParams {
    double g_a = 1.0;       ///< SQUID a |2>-|3> coupling to the resonator
    double g_b = 1.0;       ///< SQUID b |2>-|3> coupling to the resonator
    double delta_c = 10.0;  ///< omega_32(b) - omega_c
    double omega_13 = 10.0;
    double omega_02 = 10.0;
    double omega_12 = 10.0;
    int n_max = 2;

    /// Throws std::invalid_argument unless every coupling, detuning and Rabi
    /// frequency is positive and n_max >= 1.
    void validate() const;

    /// Dispersive treatment of SQUID b is trusted for delta_c >= 5 g_b.
    bool dispersive_valid() const noexcept { return delta_c >= 5.0 * g_b; }

    SystemSpace space() const { return SystemSpace{n_max}; }
};

/// Ordered pair of SQUID levels (low < high), both in 0..3.
struct LevelPair {
    int low = 0;
    int high = 1;

    friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

/// g (c+ |2><3| + c |3><2|) on the chosen SQUID.
OperatorMatrix jc_resonant(double g, Squid squid, int n_max);

/// (g^2/delta)(|3><3| - |2><2|) c+c on the chosen SQUID. Throws for delta <= 0.
OperatorMatrix dispersive(double g, double delta, Squid squid, int n_max);

/// delta |3><3| + g (c+ |2><3| + h.c.): the detuned coupling whose
/// second-order reduction is `dispersive`.
OperatorMatrix jc_detuned(double g, double delta, Squid squid, int n_max);

/// omega (e^{i phi} |l><h| + e^{-i phi} |h><l|) on the chosen SQUID. Over a
/// time t the pair {|l>, |h>} evolves as cos(omega t) I - i sin(omega t) (...).
OperatorMatrix drive(double omega, double phi, LevelPair pair, Squid squid, int n_max);

/// Closed-form resonant exchange |3>|0>_c <-> |2>|1>_c on the chosen SQUID,
/// generalised to every photon number: |3>|n> and |2>|n+1> rotate at
/// g sqrt(n+1). Other components are untouched.
StateVector evolve_closed_resonant(const StateVector& state, double g, double t, Squid squid = Squid::a);

/// Closed-form dispersive phases: amplitudes on |2>|n> pick up e^{+i n g^2 t/delta},
/// amplitudes on |3>|n> pick up e^{-i n g^2 t/delta}.
StateVector evolve_closed_dispersive(const StateVector& state, double g, double delta, double t,
                                     Squid squid = Squid::b);

enum class CouplingKind { jc_resonant, dispersive, jc_detuned };

struct DriveTerm {
    Squid squid = Squid::a;
    LevelPair levels;
    double omega = 0.0;
    double phase = 0.0;

    friend bool operator==(const DriveTerm&, const DriveTerm&) = default;
};

/// A resonator coupling whose strength is taken from GateParams:
/// g_a / g_b by squid, detuning delta_c (SQUID b only).
struct CouplingTerm {
    CouplingKind kind = CouplingKind::jc_resonant;
    Squid squid = Squid::a;

    friend bool operator==(const CouplingTerm&, const CouplingTerm&) = default;
};

using HamiltonianTerm = std::variant<DriveTerm, CouplingTerm>;

/// Sum of terms, realised against a parameter set.
struct HamiltonianSpec {
    std::vector<HamiltonianTerm> terms;

    OperatorMatrix realize(const GateParams& params) const;
};

struct TimedHamiltonian {
    HamiltonianSpec hamiltonian;
    double duration = 0.0;
};

enum class FidelityModelKind { ideal, full };

std::string_view to_string(FidelityModelKind kind);

/// Time-ordered product of exp(-i H_k t_k). Throws for negative durations.
OperatorMatrix propagator(const std::vector<TimedHamiltonian>& segments, const GateParams& params);

/// Applies the segments in order to `state`.
StateVector propagate(const StateVector& state, const std::vector<TimedHamiltonian>& segments,
                      const GateParams& params);

}  // namespace cpgate
