// Command-line front end: solve / evaluate / sweep / simulate / bounds /
// policy-dump, with CSV and JSON emission.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randao/bounds.hpp"
#include "randao/errors.hpp"
#include "randao/model.hpp"
#include "randao/policy.hpp"
#include "randao/simulator.hpp"
#include "randao/solver.hpp"

namespace {

using json = nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kBadConfig = 2,
    kNumericalFailure = 3,
    kNonConvergence = 4,
    kIoError = 5,
};

// 17 significant digits round-trip a double exactly.
std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_alpha_grid(const std::string& text) {
    std::vector<double> alphas;
    const auto first_colon = text.find(':');
    if (first_colon == std::string::npos) {
        alphas.push_back(std::stod(text));
    } else {
        const auto second_colon = text.find(':', first_colon + 1);
        if (second_colon == std::string::npos) {
            throw std::invalid_argument("alpha grid must be start:stop:step");
        }
        const double start = std::stod(text.substr(0, first_colon));
        const double stop = std::stod(text.substr(first_colon + 1, second_colon - first_colon - 1));
        const double step = std::stod(text.substr(second_colon + 1));
        if (step <= 0.0) throw std::invalid_argument("alpha grid step must be > 0");
        if (start > stop) throw std::invalid_argument("alpha grid start must be <= stop");
        const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long k = 0; k <= n; ++k) alphas.push_back(start + static_cast<double>(k) * step);
    }
    for (double a : alphas) {
        if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("alphas must lie in [0, 1)");
    }
    return alphas;
}

randao::PolicySpec parse_policy(const std::string& name) {
    if (name == "honest") return randao::PolicySpec::honest();
    if (name == "tailmax") return randao::PolicySpec::tailmax();
    if (name == "valuemax") return randao::PolicySpec::valuemax();
    throw std::invalid_argument("unknown policy: " + name);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw std::ios_base::failure("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        stream().flush();
        if (!stream()) throw std::ios_base::failure("write failure on output");
    }

private:
    std::ofstream file_;
};

void emit_record(Output& out, const std::string& format,
                 const std::vector<std::pair<std::string, std::string>>& fields,
                 const json& object) {
    if (format == "json") {
        out.stream() << object.dump(2) << "\n";
    } else {
        std::string header;
        std::string row;
        for (const auto& [name, value] : fields) {
            if (!header.empty()) {
                header += ',';
                row += ',';
            }
            header += name;
            row += value;
        }
        out.stream() << header << "\n" << row << "\n";
    }
    out.finish();
}

struct SolveRecord {
    double alpha{};
    int ell{};
    randao::SolveResult result;
    std::string policy;
};

void emit_solve_record(Output& out, const std::string& format, const SolveRecord& rec) {
    const double improvement =
        rec.alpha == 0.0 ? 0.0
                         : randao::improvement_over_honest(
                               rec.result, randao::ModelParams(rec.alpha, rec.ell));
    const bool provable = rec.ell <= 32;
    std::vector<std::pair<std::string, std::string>> fields = {
        {"alpha", fmt17(rec.alpha)},
        {"ell", std::to_string(rec.ell)},
        {"policy", rec.policy},
        {"fraction", fmt17(rec.result.fraction)},
        {"gain_per_epoch", fmt17(rec.result.gain)},
        {"improvement_over_honest", fmt17(improvement)},
        {"iterations", std::to_string(rec.result.iterations)},
        {"provable", provable ? "true" : "false"},
    };
    json object = {
        {"alpha", rec.alpha},
        {"ell", rec.ell},
        {"policy", rec.policy},
        {"fraction", rec.result.fraction},
        {"gain_per_epoch", rec.result.gain},
        {"improvement_over_honest", improvement},
        {"iterations", rec.result.iterations},
        {"provable", provable},
    };
    json bias = json::array();
    for (int t = 0; t < rec.result.bias.size(); ++t) {
        fields.emplace_back("bias_" + std::to_string(t), fmt17(rec.result.bias(t)));
        bias.push_back(rec.result.bias(t));
    }
    object["bias"] = bias;
    emit_record(out, format, fields, object);
}

int run_solve(double alpha, int ell, const std::string& format, const std::string& output) {
    const randao::ModelParams params(alpha, ell);
    const auto optimal = randao::policy_iteration(params);
    Output out(output);
    emit_solve_record(out, format, SolveRecord{alpha, ell, optimal.result, "optimal"});
    return kOk;
}

int run_evaluate(double alpha, int ell, const std::string& policy, const std::string& format,
                 const std::string& output) {
    const randao::ModelParams params(alpha, ell);
    randao::SolveResult result;
    if (policy == "optimal") {
        result = randao::policy_iteration(params).result;
    } else {
        result = randao::evaluate_policy(params, parse_policy(policy));
    }
    Output out(output);
    emit_solve_record(out, format, SolveRecord{alpha, ell, result, policy});
    return kOk;
}

struct SweepRow {
    double alpha{};
    std::string policy;
    std::optional<double> fraction;
    std::optional<double> improvement;
    std::string error;
};

int run_sweep(const std::string& alpha_grid, int ell, std::vector<std::string> policies,
              const std::string& format, const std::string& output) {
    const auto alphas = parse_alpha_grid(alpha_grid);
    if (policies.empty()) policies = {"optimal", "tailmax", "valuemax", "honest"};
    for (const auto& p : policies) {
        if (p != "optimal") parse_policy(p);  // validate names up front
    }

    const auto evaluate_point = [ell](double alpha, const std::string& policy) {
        SweepRow row;
        row.alpha = alpha;
        row.policy = policy;
        try {
            const randao::ModelParams params(alpha, ell);
            randao::SolveResult result;
            if (policy == "optimal") {
                result = randao::policy_iteration(params).result;
            } else {
                result = randao::evaluate_policy(params, parse_policy(policy));
            }
            row.fraction = result.fraction;
            row.improvement = alpha == 0.0 ? 0.0
                                           : randao::improvement_over_honest(result, params);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    // One task per alpha; rows are emitted in ascending alpha regardless of
    // completion order.
    std::vector<std::future<std::vector<SweepRow>>> tasks;
    tasks.reserve(alphas.size());
    for (double alpha : alphas) {
        tasks.push_back(std::async(std::launch::async, [alpha, &policies, &evaluate_point] {
            std::vector<SweepRow> rows;
            rows.reserve(policies.size());
            for (const auto& policy : policies) rows.push_back(evaluate_point(alpha, policy));
            return rows;
        }));
    }

    Output out(output);
    const bool provable = ell <= 32;
    if (format == "json") {
        json array = json::array();
        for (auto& task : tasks) {
            for (const auto& row : task.get()) {
                json object = {{"alpha", row.alpha}, {"ell", ell}, {"policy", row.policy},
                               {"provable", provable}};
                if (row.fraction) {
                    object["fraction"] = *row.fraction;
                    object["improvement"] = *row.improvement;
                } else {
                    object["error"] = row.error;
                }
                array.push_back(object);
            }
        }
        out.stream() << array.dump(2) << "\n";
    } else {
        out.stream() << "alpha,ell,policy,fraction,improvement,provable,error\n";
        for (auto& task : tasks) {
            for (const auto& row : task.get()) {
                out.stream() << fmt17(row.alpha) << ',' << ell << ',' << row.policy << ','
                             << (row.fraction ? fmt17(*row.fraction) : "") << ','
                             << (row.improvement ? fmt17(*row.improvement) : "") << ','
                             << (provable ? "true" : "false") << ',' << row.error << "\n";
            }
        }
    }
    out.finish();
    return kOk;
}

int run_simulate(double alpha, int ell, const std::string& policy, std::int64_t epochs,
                 std::uint64_t seed, bool cap_override, const std::string& format,
                 const std::string& output) {
    const randao::ModelParams params(alpha, ell);
    randao::PolicySpec spec = randao::PolicySpec::honest();
    if (policy == "optimal") {
        spec = randao::PolicySpec::from_order(randao::policy_iteration(params).order);
    } else {
        spec = parse_policy(policy);
    }
    const int cap = cap_override ? std::max(ell, randao::kDefaultTailCap)
                                 : randao::kDefaultTailCap;
    const auto estimate = randao::simulate(params, spec, epochs, seed, cap);

    Output out(output);
    std::vector<std::pair<std::string, std::string>> fields = {
        {"alpha", fmt17(alpha)},
        {"ell", std::to_string(ell)},
        {"policy", policy},
        {"epochs", std::to_string(estimate.epochs)},
        {"seed", std::to_string(estimate.seed)},
        {"mean_fraction", fmt17(estimate.mean_fraction)},
        {"std_error", fmt17(estimate.std_error)},
    };
    json object = {
        {"alpha", alpha},
        {"ell", ell},
        {"policy", policy},
        {"epochs", estimate.epochs},
        {"seed", estimate.seed},
        {"mean_fraction", estimate.mean_fraction},
        {"std_error", estimate.std_error},
        {"per_state_visits", estimate.per_state_visits},
    };
    emit_record(out, format, fields, object);
    return kOk;
}

int run_bounds(const std::string& alpha_grid, int ell, const std::string& format,
               const std::string& output) {
    const auto alphas = parse_alpha_grid(alpha_grid);
    Output out(output);
    json array = json::array();
    if (format != "json") {
        out.stream() << "alpha,ell,q,stable,takeover,expected_height_bound,reset_time_max,"
                        "error_bound\n";
    }
    for (double alpha : alphas) {
        const randao::ModelParams params(alpha, ell);
        const auto report = randao::bound_report(params);
        if (format == "json") {
            json object = {{"alpha", alpha},       {"ell", ell},
                           {"q", report.q},        {"stable", report.stable},
                           {"takeover", report.takeover}};
            if (report.stable) {
                object["expected_height_bound"] = report.expected_height_bound;
                object["reset_time_max"] = report.reset_time_max;
                object["error_bound"] = report.error_bound;
            }
            array.push_back(object);
        } else {
            out.stream() << fmt17(alpha) << ',' << ell << ',' << fmt17(report.q) << ','
                         << (report.stable ? "true" : "false") << ',' << fmt17(report.takeover)
                         << ',';
            if (report.stable) {
                out.stream() << fmt17(report.expected_height_bound) << ','
                             << fmt17(report.reset_time_max) << ',' << fmt17(report.error_bound);
            } else {
                out.stream() << ",,";
            }
            out.stream() << "\n";
        }
    }
    if (format == "json") out.stream() << array.dump(2) << "\n";
    out.finish();
    return kOk;
}

int run_policy_dump(double alpha, int ell, const std::string& policy, const std::string& output) {
    randao::PolicyOrder order = [&] {
        if (policy == "optimal") {
            return randao::policy_iteration(randao::ModelParams(alpha, ell)).order;
        }
        if (policy == "tailmax") return randao::tailmax_order(ell);
        if (policy == "valuemax") return randao::valuemax_order(ell);
        throw std::invalid_argument("policy-dump requires tailmax, valuemax, or optimal");
    }();
    Output out(output);
    out.stream() << "rank,tail,omega,sort_key\n";
    const auto& ranking = order.ranking();
    const auto& keys = order.sort_keys();
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        const std::size_t k = ranking.size() - 1 - r;  // descending preference
        out.stream() << r << ',' << ranking[k].tail << ',' << ranking[k].omega << ','
                     << fmt17(keys[k]) << "\n";
    }
    out.finish();
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytic solver and simulator for optimal RANDAO manipulation"};
    app.require_subcommand(1);

    std::string alpha_grid = "0.2";
    int ell = 32;
    std::string policy = "optimal";
    std::string format = "csv";
    std::string output;
    std::int64_t epochs = 1000000;
    std::uint64_t seed = 1;
    bool cap_override = false;

    const auto add_common = [&](CLI::App* cmd, bool with_policy) {
        cmd->add_option("--alpha", alpha_grid, "stake fraction, or grid start:stop:step");
        cmd->add_option("--ell", ell, "slots per epoch")->check(CLI::Range(1, 128));
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--output", output, "output path (default: stdout)");
        if (with_policy) {
            cmd->add_option("--policy", policy, "honest|tailmax|valuemax|optimal");
        }
    };

    auto* solve = app.add_subcommand("solve", "optimal policy at a single alpha");
    add_common(solve, false);

    auto* evaluate = app.add_subcommand("evaluate", "evaluate a named policy");
    add_common(evaluate, true);

    std::vector<std::string> sweep_policies;
    auto* sweep = app.add_subcommand("sweep", "alpha sweep, CSV per (alpha, policy)");
    add_common(sweep, false);
    sweep->add_option("--policy", sweep_policies,
                      "policies to sweep (repeatable; default all four)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo game run");
    add_common(simulate, true);
    simulate->add_option("--epochs", epochs, "epochs to simulate");
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_flag("--cap-override", cap_override, "lift the tail cap to ell");

    auto* bounds = app.add_subcommand("bounds", "appendix takeover/reset-time bounds");
    add_common(bounds, false);

    auto* dump = app.add_subcommand("policy-dump", "serialize a policy order");
    add_common(dump, true);

    CLI11_PARSE(app, argc, argv);

    try {
        const auto single_alpha = [&] {
            const auto alphas = parse_alpha_grid(alpha_grid);
            if (alphas.size() != 1) {
                throw std::invalid_argument("this command takes a single alpha, not a grid");
            }
            return alphas.front();
        };
        if (solve->parsed()) return run_solve(single_alpha(), ell, format, output);
        if (evaluate->parsed()) return run_evaluate(single_alpha(), ell, policy, format, output);
        if (sweep->parsed()) return run_sweep(alpha_grid, ell, sweep_policies, format, output);
        if (simulate->parsed()) {
            return run_simulate(single_alpha(), ell, policy, epochs, seed, cap_override, format,
                                output);
        }
        if (bounds->parsed()) return run_bounds(alpha_grid, ell, format, output);
        if (dump->parsed()) return run_policy_dump(single_alpha(), ell, policy, output);
    } catch (const randao::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNonConvergence;
    } catch (const randao::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const randao::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadConfig;
    }
    return kBadConfig;
}
