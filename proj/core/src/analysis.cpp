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

#include "cpgate/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <exception>
#include <thread>

#include "json.hpp"

namespace cpgate {

namespace {

constexpr double kPi = std::numbers::pi;

/// Columns of the schedule propagator for the four computational inputs.
Eigen::Matrix<Complex, Eigen::Dynamic, 4> computational_columns(const GateParams& params,
                                                                 const FullModelTerms& terms) {
    const SystemSpace space = params.space();
    const OperatorMatrix u =
        schedule_propagator(build_schedule(params), params, {FidelityModelKind::full, terms});
    Eigen::Matrix<Complex, Eigen::Dynamic, 4> cols(space.dimension(), 4);
    for (int j = 0; j < 4; ++j) cols.col(j) = u.entries().col(space.index(j / 2, j % 2, 0));
    return cols;
}

std::string format_g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

double occupation_p3(double g, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("detuning must be positive");
    return 4.0 * g * g / (4.0 * g * g + delta * delta);
}

FidelityTerms fidelity_terms(double omega12, double g_b, double delta_c) {
    if (!(delta_c > 0.0)) throw std::invalid_argument("delta_c must be positive");
    return fidelity_terms_from_shift(omega12, g_b * g_b / delta_c);
}

FidelityTerms fidelity_terms_from_shift(double omega12, double s) {
    if (!(omega12 > 0.0)) throw std::invalid_argument("omega12 must be positive");
    const double w = std::sqrt(omega12 * omega12 + s * s / 4.0);
    FidelityTerms t;
    t.s = s;
    t.phi = kPi * w / (2.0 * omega12);
    t.p = std::cos(t.phi);
    t.q = s / (2.0 * w) * std::sin(t.phi);
    t.r = omega12 / w * std::sin(t.phi);
    return t;
}

double fidelity_F(double x, const FidelityTerms& t) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("x = |theta|^2 must lie in [0, 1]");
    const double p2 = t.p * t.p;
    const double q2 = t.q * t.q;
    const double r2 = t.r * t.r;
    const double linear = 1.0 + p2 - q2 - r2;
    const double quad = (1.0 - q2 - r2) * (1.0 - q2 - r2) + 2.0 * p2 * (1.0 + q2 - r2) + p2 * p2;
    return 1.0 - 2.0 * x * linear + x * x * quad;
}

double average_fidelity(const FidelityTerms& t) {
    const double p2 = t.p * t.p;
    const double q2 = t.q * t.q;
    const double r2 = t.r * t.r;
    return (1.0 + p2 * p2 + q2 * q2 + r2 + r2 * r2 + p2 * (-1.0 + 2.0 * q2 - 2.0 * r2) + q2 * (1.0 + 2.0 * r2)) /
           3.0;
}

std::vector<SweepRow> sweep_average_fidelity(const std::vector<double>& grid, double g_b, double delta_c) {
    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw std::invalid_argument("sweep grid values must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep grid must be ascending");
        rows.push_back({grid[i], average_fidelity(fidelity_terms(grid[i], g_b, delta_c)), {}, {}});
    }
    return rows;
}

MonteCarloFidelity full_model_average_fidelity(const GateParams& params, int samples, std::uint64_t seed,
                                               const FullModelTerms& terms) {
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    const SystemSpace space = params.space();
    const auto cols = computational_columns(params, terms);
    const Eigen::Matrix4cd ideal = ideal_gate_unitary();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < samples; ++k) {
        Eigen::Matrix<double, 8, 1> v;
        for (int i = 0; i < 8; ++i) v(i) = normal(rng);
        v /= v.norm();
        Eigen::Vector4cd psi;
        for (int i = 0; i < 4; ++i) psi(i) = Complex(v(i), v(i + 4));

        const Eigen::VectorXcd out = cols * psi;
        const Eigen::Vector4cd target = ideal * psi;
        Complex amp = 0.0;
        for (int i = 0; i < 4; ++i) amp += std::conj(target(i)) * out(space.index(i / 2, i % 2, 0));
        const double f = std::norm(amp);
        sum += f;
        sum_sq += f * f;
    }
    const double n = samples;
    const double mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), samples};
}

std::vector<SweepRow> sweep_with_full_model(const std::vector<double>& grid, const GateParams& base,
                                            const FullSweepOptions& options) {
    auto rows = sweep_average_fidelity(grid, base.g_b, base.delta_c);
    const int jobs = std::clamp(options.jobs, 1, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));

    auto work = [&](std::size_t first) {
        for (std::size_t i = first; i < rows.size(); i += static_cast<std::size_t>(jobs)) {
            GateParams p = base;
            p.omega_12 = rows[i].omega12;
            p.omega_02 = rows[i].omega12;
            const auto mc = full_model_average_fidelity(p, options.samples, options.seed);
            rows[i].avg_fidelity_full = mc.mean;
            rows[i].stderr_full = mc.standard_error;
        }
    };

    if (jobs == 1) {
        work(0);
        return rows;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&, j] {
            try {
                work(static_cast<std::size_t>(j));
            } catch (...) {
                errors[static_cast<std::size_t>(j)] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    const bool full = !rows.empty() && rows.front().avg_fidelity_full.has_value();
    std::ostringstream os;
    os << "omega12_over_gb,avg_fidelity_analytic";
    if (full) os << ",avg_fidelity_full,stderr";
    os << '\n';
    for (const auto& r : rows) {
        os << format_g12(r.omega12) << ',' << format_g12(r.avg_fidelity_analytic);
        if (full) os << ',' << format_g12(r.avg_fidelity_full.value()) << ',' << format_g12(r.stderr_full.value());
        os << '\n';
    }
    return os.str();
}

ErrorBudget error_budget(const GateParams& params, const BudgetOptions& options) {
    params.validate();
    if (options.gamma3_inv && !(*options.gamma3_inv > 0.0)) {
        throw std::invalid_argument("relaxation time gamma3^-1 must be positive");
    }
    ErrorBudget b;
    b.p3 = occupation_p3(params.g_b, params.delta_c);

    const FidelityTerms terms = options.s_override
                                    ? fidelity_terms_from_shift(params.omega_12, *options.s_override)
                                    : fidelity_terms(params.omega_12, params.g_b, params.delta_c);
    const double analytic = average_fidelity(terms);
    b.analytic_infidelity = 1.0 - analytic;

    const auto mc = full_model_average_fidelity(params, options.samples, options.seed);
    b.full_residual = analytic - mc.mean;
    b.full_model_stderr = mc.standard_error;

    if (options.gamma3_inv) {
        const auto t = step_durations(params);
        b.relaxation_exposure = (t.t1 + t.t1_prime) / *options.gamma3_inv;
    }
    return b;
}

std::string error_budget_json(const ErrorBudget& budget) {
    nlohmann::ordered_json j;
    j["p3"] = budget.p3;
    j["analytic_infidelity"] = budget.analytic_infidelity;
    j["full_residual"] = budget.full_residual;
    j["full_residual_stderr"] = budget.full_model_stderr;
    j["relaxation_exposure"] = budget.relaxation_exposure ? nlohmann::ordered_json(*budget.relaxation_exposure)
                                                          : nlohmann::ordered_json(nullptr);
    return j.dump(2);
}

}  // namespace cpgate
