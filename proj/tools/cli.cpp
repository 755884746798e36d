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

#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cpgate/analysis.hpp"
#include "cpgate/device.hpp"
#include "cpgate/protocol.hpp"
#include "cpgate/pulseseq.hpp"

namespace cpgate::cli {

namespace {

using nlohmann::ordered_json;

/// A usage/config problem that maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GateFlags {
    double ga = 1.0;
    double gb = 1.0;
    double delta_c = 10.0;
    std::optional<double> omega;
    std::optional<double> omega13;
    std::optional<double> omega02;
    std::optional<double> omega12;
    int n_max = 2;
    double gb_si = 3.0e9;

    GateParams params() const {
        GateParams p;
        p.g_a = ga;
        p.g_b = gb;
        p.delta_c = delta_c;
        const double base = omega.value_or(10.0);
        p.omega_13 = omega13.value_or(base);
        p.omega_02 = omega02.value_or(omega12.value_or(base));
        p.omega_12 = omega12.value_or(omega02.value_or(base));
        p.n_max = n_max;
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (p.omega_02 != p.omega_12) throw UsageError("--omega02 and --omega12 must be equal");
        if (!(gb_si > 0.0)) throw UsageError("--gb-si must be positive");
        return p;
    }
};

void add_gate_flags(CLI::App& app, GateFlags& f) {
    app.add_option("--ga", f.ga, "SQUID a coupling g_a (units of g_b)")->capture_default_str();
    app.add_option("--gb", f.gb, "SQUID b coupling g_b")->capture_default_str();
    app.add_option("--delta-c", f.delta_c, "detuning delta_c of SQUID b (units of g_b)")->capture_default_str();
    app.add_option("--omega", f.omega, "sets omega13 = omega02 = omega12 (default 10)");
    app.add_option("--omega13", f.omega13, "Rabi frequency of the |1>-|3> pulse on SQUID a");
    app.add_option("--omega02", f.omega02, "Rabi frequency of the |0>-|2> pulses on SQUID a");
    app.add_option("--omega12", f.omega12, "Rabi frequency of the |1>-|2> pulses on SQUID b");
    app.add_option("--n-max", f.n_max, "highest retained photon number")->capture_default_str();
    app.add_option("--gb-si", f.gb_si, "g_b in s^-1 for SI conversions")->capture_default_str();
}

ModelConfig model_from(const std::string& name) {
    return name == "full" ? ModelConfig::full() : ModelConfig::ideal();
}

std::string fixed(double v, int digits = 12) {
    std::ostringstream os;
    os << std::showpos << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

/// Writes to --output when given, otherwise to `out`.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file " + path);
        }
        stream_ = path.empty() ? &fallback : &file_;
    }

    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

ordered_json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

int cmd_levels(const std::string& config_path, int k, const std::string& output, std::ostream& out) {
    const DeviceConfig cfg = load_device_config(config_path);
    const LevelStructure ls = eigenlevels(cfg.squid, cfg.grid, k);
    const Eigen::MatrixXd table = transition_table(ls);

    ordered_json j;
    j["config"] = config_path;
    j["screening_beta_l"] = cfg.squid.screening();
    j["energies_rad_per_s"] = ls.energies;
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < table.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(table.cols()));
        for (Eigen::Index c = 0; c < table.cols(); ++c) row[static_cast<std::size_t>(c)] = table(i, c);
        rows.push_back(row);
    }
    j["transition_table_rad_per_s"] = rows;
    ordered_json named;
    for (int hi = 1; hi < 4; ++hi) {
        for (int lo = 0; lo < hi; ++lo) {
            named["omega_" + std::to_string(hi) + std::to_string(lo)] = ls.transition(lo, hi);
        }
    }
    j["transitions"] = named;
    j["convergence"] = {{"grid_points", ls.grid_points},
                        {"doubled_points", ls.doubled_points},
                        {"max_relative_change", ls.max_relative_change},
                        {"outer_window_mass", ls.outer_mass}};
    Sink sink(output, out);
    sink.stream() << j.dump(2) << '\n';
    return kSuccess;
}

std::string output_label(const Eigen::Vector4cd& amps) {
    Eigen::Index best = 0;
    amps.cwiseAbs().maxCoeff(&best);
    return std::string(amps(best).real() < 0.0 ? "-" : "") + kQubitLabels[static_cast<std::size_t>(best)];
}

int cmd_truth_table(const GateFlags& flags, const std::string& model_name, const std::string& format,
                    const std::string& output, std::ostream& out) {
    const GateParams params = flags.params();
    const ModelConfig model = model_from(model_name);
    const TruthTable table = run_truth_table(params, model);

    Sink sink(output, out);
    auto& os = sink.stream();
    if (format == "json") {
        ordered_json j;
        j["model"] = model_name;
        ordered_json rows = ordered_json::array();
        for (const auto& r : table.rows) {
            ordered_json amps = ordered_json::array();
            for (int i = 0; i < 4; ++i) amps.push_back(complex_json(r.output(i)));
            rows.push_back({{"input", r.input},
                            {"output", output_label(r.output)},
                            {"amplitudes", amps},
                            {"relative_phase", r.relative_phase},
                            {"leakage", r.leakage}});
        }
        j["rows"] = rows;
        j["max_deviation_from_ideal"] = table.max_deviation_from_ideal();
        os << j.dump(2) << '\n';
    } else {
        os << "# model: " << model_name << '\n';
        os << "# input -> output | amplitudes on |00>,|01>,|10>,|11> x |0>_c | phase vs |00> | leakage\n";
        for (const auto& r : table.rows) {
            os << r.input << " -> " << std::setw(3) << output_label(r.output) << " |";
            for (int i = 0; i < 4; ++i) {
                os << ' ' << fixed(r.output(i).real()) << fixed(r.output(i).imag()) << 'i';
            }
            char leak[32];
            std::snprintf(leak, sizeof leak, "%.3e", r.leakage);
            os << " | " << fixed(r.relative_phase) << " | " << leak << '\n';
        }
    }

    if (model.kind == FidelityModelKind::ideal &&
        (table.max_deviation_from_ideal() > 1e-10 || table.max_leakage() > 1e-10)) {
        return kVerificationFailed;
    }
    return kSuccess;
}

Eigen::Vector4cd input_state(const std::string& label, const std::vector<double>& amplitudes) {
    const bool has_label = !label.empty();
    const bool has_amps = !amplitudes.empty();
    if (has_label == has_amps) throw UsageError("give exactly one of --input or --amplitudes");
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    if (has_label) {
        for (std::size_t i = 0; i < kQubitLabels.size(); ++i) {
            if (label == kQubitLabels[i]) psi(static_cast<Eigen::Index>(i)) = 1.0;
        }
        if (psi.squaredNorm() == 0.0) throw UsageError("--input must be one of 00, 01, 10, 11");
        return psi;
    }
    if (amplitudes.size() != 8) throw UsageError("--amplitudes takes 8 numbers: re,im for |00>,|01>,|10>,|11>");
    for (int i = 0; i < 4; ++i) psi(i) = Complex(amplitudes[2 * i], amplitudes[2 * i + 1]);
    if (std::abs(psi.norm() - 1.0) > 1e-6) throw UsageError("input amplitudes are not normalized (tolerance 1e-6)");
    return psi / psi.norm();
}

int cmd_run(const GateFlags& flags, const std::string& seq_path, const std::string& label,
            const std::vector<double>& amplitudes, const std::string& model_name, const std::string& output,
            std::ostream& out, std::ostream& err) {
    const GateParams params = flags.params();
    const Eigen::Vector4cd psi = input_state(label, amplitudes);

    Schedule schedule;
    if (seq_path.empty() || seq_path == "built-in") {
        schedule = build_schedule(params);
    } else {
        std::string source;
        try {
            source = pseq::load_file(seq_path);
        } catch (const std::runtime_error& e) {
            throw UsageError(e.what());
        }
        try {
            schedule = pseq::compile(pseq::parse(source), params, {flags.gb_si});
        } catch (const pseq::ParseError& e) {
            err << seq_path << ':' << e.line() << ':' << e.column() << ": " << e.message() << " `" << e.token()
                << "`\n";
            return kSequenceError;
        } catch (const pseq::CompileError& e) {
            err << seq_path << ':' << e.line() << ": " << e.message() << '\n';
            return kSequenceError;
        }
    }

    const GateResult result = apply_gate(psi, schedule, params, model_from(model_name));
    const Eigen::Vector4cd target = ideal_gate_unitary() * psi;
    const Complex ov = target.dot(result.computational);
    const double tau = schedule.total_duration();

    ordered_json j;
    j["sequence"] = seq_path.empty() ? "built-in" : seq_path;
    j["model"] = model_name;
    ordered_json in = ordered_json::array();
    ordered_json amps = ordered_json::array();
    ordered_json tgt = ordered_json::array();
    for (int i = 0; i < 4; ++i) {
        in.push_back(complex_json(psi(i)));
        ordered_json a = complex_json(result.computational(i));
        a["label"] = kQubitLabels[static_cast<std::size_t>(i)];
        amps.push_back(a);
        tgt.push_back(complex_json(target(i)));
    }
    j["input"] = in;
    j["amplitudes"] = amps;
    j["leakage"] = result.leakage;
    j["target"] = tgt;
    j["overlap"] = {{"re", ov.real()}, {"im", ov.imag()}, {"probability", std::norm(ov)}};
    j["gate_time"] = {{"natural", tau}, {"seconds", tau / flags.gb_si}};
    j["final_norm"] = result.final_state.norm();

    Sink sink(output, out);
    sink.stream() << j.dump(2) << '\n';
    return kSuccess;
}

int default_jobs() {
    if (const char* env = std::getenv("CPGATE_JOBS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
        throw UsageError("CPGATE_JOBS must be a positive integer");
    }
    return 1;
}

struct SweepFlags {
    std::string param = "omega12";
    std::optional<double> from;
    std::optional<double> to;
    int steps = 0;
    bool full = false;
    int samples = 200;
    std::uint64_t seed = 0;
    std::optional<int> jobs;
};

int cmd_sweep(const GateFlags& flags, const SweepFlags& s, const std::string& output, std::ostream& out) {
    if (s.param != "omega12") throw UsageError("--param supports only omega12");
    if (!s.from || !s.to) throw UsageError("--from and --to are required");
    if (!(*s.from > 0.0)) throw UsageError("--from must be positive");
    if (!(*s.to > *s.from)) throw UsageError("--to must be greater than --from");
    if (s.steps < 2) throw UsageError("--steps must be at least 2");
    if (s.samples < 1) throw UsageError("--samples must be at least 1");
    const int jobs = s.jobs.value_or(default_jobs());
    if (jobs < 1) throw UsageError("--jobs must be positive");

    std::vector<double> grid(static_cast<std::size_t>(s.steps));
    for (int i = 0; i < s.steps; ++i) {
        grid[static_cast<std::size_t>(i)] = *s.from + (*s.to - *s.from) * i / (s.steps - 1);
    }

    GateFlags base_flags = flags;
    base_flags.omega02.reset();
    base_flags.omega12.reset();
    const GateParams base = base_flags.params();

    const auto rows = s.full ? sweep_with_full_model(grid, base, {s.samples, s.seed, jobs})
                             : sweep_average_fidelity(grid, base.g_b, base.delta_c);
    Sink sink(output, out);
    sink.stream() << sweep_csv(rows);
    return kSuccess;
}

int cmd_budget(const GateFlags& flags, std::optional<double> gamma3_inv, std::optional<double> s_override,
               int samples, std::uint64_t seed, const std::string& output, std::ostream& out) {
    if (gamma3_inv && !(*gamma3_inv > 0.0)) throw UsageError("--gamma3-inv must be positive");
    if (s_override && !(*s_override >= 0.0)) throw UsageError("--s-override must be nonnegative");
    if (samples < 1) throw UsageError("--samples must be at least 1");
    const GateParams params = flags.params();
    const ErrorBudget b = error_budget(params, {gamma3_inv, s_override, samples, seed});
    Sink sink(output, out);
    sink.stream() << error_budget_json(b) << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Controlled-phase gate simulator for two four-level SQUIDs coupled to a resonator", "cpgate"};
    app.require_subcommand(1);

    std::string output;

    auto* levels = app.add_subcommand("levels", "rf-SQUID spectrum from a device config (JSON)");
    std::string config_path;
    int level_count = 4;
    levels->add_option("config,--config", config_path, "device config file")->required();
    levels->add_option("-k,--levels", level_count, "number of levels to report")->capture_default_str();
    levels->add_option("-o,--output", output, "write to a file instead of stdout");

    auto* truth = app.add_subcommand("truth-table", "propagate the four computational inputs");
    GateFlags truth_flags;
    std::string truth_model = "ideal";
    std::string truth_format = "text";
    add_gate_flags(*truth, truth_flags);
    truth->add_option("--model", truth_model)->check(CLI::IsMember({"ideal", "full"}))->capture_default_str();
    truth->add_option("--format", truth_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    truth->add_option("-o,--output", output, "write to a file instead of stdout");

    auto* run_cmd = app.add_subcommand("run", "run a pulse sequence on one input state (JSON)");
    GateFlags run_flags;
    std::string seq_path;
    std::string input_label;
    std::vector<double> amplitudes;
    std::string run_model = "ideal";
    add_gate_flags(*run_cmd, run_flags);
    run_cmd->add_option("--seq", seq_path, ".pseq file, or `built-in` (default)");
    run_cmd->add_option("--input", input_label, "computational input 00|01|10|11");
    run_cmd->add_option("--amplitudes", amplitudes, "re,im of |00>,|01>,|10>,|11>")->delimiter(',');
    run_cmd->add_option("--model", run_model)->check(CLI::IsMember({"ideal", "full"}))->capture_default_str();
    run_cmd->add_option("-o,--output", output, "write to a file instead of stdout");

    auto* sweep = app.add_subcommand("sweep", "average fidelity versus omega12 (CSV)");
    GateFlags sweep_flags;
    SweepFlags sweep_opts;
    add_gate_flags(*sweep, sweep_flags);
    sweep->add_option("--param", sweep_opts.param)->capture_default_str();
    sweep->add_option("--from", sweep_opts.from)->required();
    sweep->add_option("--to", sweep_opts.to)->required();
    sweep->add_option("--steps", sweep_opts.steps)->required();
    sweep->add_flag("--full", sweep_opts.full, "add the full-model Monte Carlo column");
    sweep->add_option("--samples", sweep_opts.samples)->capture_default_str();
    sweep->add_option("--seed", sweep_opts.seed)->capture_default_str();
    sweep->add_option("--jobs", sweep_opts.jobs, "worker threads (default $CPGATE_JOBS or 1)");
    sweep->add_option("-o,--output", output, "write to a file instead of stdout");

    auto* budget = app.add_subcommand("budget", "error budget (JSON)");
    GateFlags budget_flags;
    std::optional<double> gamma3_inv;
    std::optional<double> s_override;
    int budget_samples = 200;
    std::uint64_t budget_seed = 0;
    add_gate_flags(*budget, budget_flags);
    budget->add_option("--gamma3-inv", gamma3_inv, "relaxation time of |3>_a (units of 1/g_b)");
    budget->add_option("--s-override", s_override, "replace g_b^2/delta_c in the analytic terms");
    budget->add_option("--samples", budget_samples)->capture_default_str();
    budget->add_option("--seed", budget_seed)->capture_default_str();
    budget->add_option("-o,--output", output, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (levels->parsed()) return cmd_levels(config_path, level_count, output, out);
        if (truth->parsed()) return cmd_truth_table(truth_flags, truth_model, truth_format, output, out);
        if (run_cmd->parsed()) {
            return cmd_run(run_flags, seq_path, input_label, amplitudes, run_model, output, out, err);
        }
        if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_opts, output, out);
        if (budget->parsed()) {
            return cmd_budget(budget_flags, gamma3_inv, s_override, budget_samples, budget_seed, output, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const WindowTooSmallError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        err << "  coarse grid levels:";
        for (double v : e.coarse()) err << ' ' << v;
        err << "\n  doubled grid levels:";
        for (double v : e.fine()) err << ' ' << v;
        err << '\n';
        return kNonConvergence;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace cpgate::cli
