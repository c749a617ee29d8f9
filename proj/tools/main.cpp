// coopgame: CLI over the valuation library. Subcommands: value, marginals,
// removal-curve, flid-gen, bench, axioms. All randomized paths are seeded and
// reproducible; identical flags give byte-identical output.
//
// Exit codes: 0 success, 1 axiom-suite failure, 2 usage error, 3 capacity
// error (game too large for an exact route), 4 file/parse error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopgame/ebm.hpp"
#include "coopgame/game_io.hpp"
#include "coopgame/harness.hpp"
#include "coopgame/solver.hpp"
#include "coopgame/valuation.hpp"

namespace {

using namespace coopgame;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_values(const std::vector<double>& values) {
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ", ";
        out += fmt17(values[i]);
    }
    return out + "]";
}

// Sink for --out: a file when given, stdout otherwise.
class OutputSink {
  public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::trunc);
            if (!file_) throw parse_error("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

struct ValueOptions {
    std::string game_path;
    std::string method = "varindex";
    double temperature = 1.0;
    int steps = 50;
    double init = 0.5;
    double tol = 1e-12;
    bool exact = false;
    int samples = 0;
    int one_shot = 0;
    std::uint64_t seed = 0;
    std::string out;
};

void add_value_flags(CLI::App* cmd, ValueOptions* opt, bool with_method = true) {
    cmd->add_option("--game", opt->game_path, "game file (JSON)")->required();
    if (with_method)
        cmd->add_option("--method", opt->method, "valuation method")
            ->check(CLI::IsMember({"shapley", "shapley-line", "banzhaf", "kstep", "varindex"}));
    cmd->add_option("--temperature", opt->temperature, "EBM temperature");
    cmd->add_option("--steps", opt->steps, "iteration budget / K");
    cmd->add_option("--init", opt->init, "uniform initializer in [0,1]");
    cmd->add_option("--tol", opt->tol, "stepwise-difference convergence threshold");
    cmd->add_flag("--exact", opt->exact, "force exact gradients");
    cmd->add_option("--samples", opt->samples, "Monte-Carlo samples per coordinate");
    cmd->add_option("--one-shot", opt->one_shot, "one-shot cache samples per coordinate");
    cmd->add_option("--seed", opt->seed, "master seed for randomized paths");
    cmd->add_option("--out", opt->out, "output path (default stdout)");
}

struct ResolvedGradient {
    GradientSource source;
    bool randomized = false;
};

ResolvedGradient resolve_gradient(const GameOracle& game, const ValueOptions& opt) {
    const int given = (opt.exact ? 1 : 0) + (opt.samples > 0 ? 1 : 0) + (opt.one_shot > 0 ? 1 : 0);
    if (given > 1) throw input_error("choose at most one of --exact, --samples, --one-shot");
    if (opt.exact) return {ExactGradient{}, false};
    if (opt.samples > 0) return {SampledGradient{opt.samples, opt.seed}, true};
    if (opt.one_shot > 0)
        return {CachedGradient{std::make_shared<OneShotCache>(game, opt.one_shot, opt.seed)}, true};
    if (game.num_players() <= kMaxExactPlayers) return {ExactGradient{}, false};
    const auto m = static_cast<int>(sample_count_for(0.05, 0.01));
    return {SampledGradient{m, opt.seed}, true};
}

ValuationVector compute_valuation(const GameOracle& game, const ValueOptions& opt,
                                  bool* randomized) {
    const int n = game.num_players();
    const MarginalVector init = uniform_init(n, opt.init);
    if (opt.method == "shapley") {
        *randomized = false;
        return shapley_exact(game);
    }
    if (opt.method == "shapley-line") {
        *randomized = false;
        return shapley_line_integral(game, (n + 1) / 2);
    }
    const ResolvedGradient grad = resolve_gradient(game, opt);
    *randomized = grad.randomized;
    if (opt.method == "banzhaf") {
        if (const auto* mc = std::get_if<SampledGradient>(&grad.source))
            return banzhaf_sampled(game, mc->samples_per_coordinate, mc->seed);
        if (const auto* os = std::get_if<CachedGradient>(&grad.source)) {
            ValuationVector out;
            out.method = "banzhaf";
            out.values = mt_gradient_oneshot(*os->cache, MarginalVector(n, 0.5)).g;
            return out;
        }
        return banzhaf(game);
    }
    if (opt.method == "kstep")
        return kstep_variational(game, opt.temperature, init, opt.steps, grad.source);
    if (opt.method == "varindex")
        return variational_index(game, opt.temperature, init, opt.tol, opt.steps, grad.source);
    throw input_error("unknown method: " + opt.method);
}

void emit_valuation(std::ostream& out, const ValuationVector& v, int n, bool randomized,
                    std::uint64_t seed) {
    out << "{\"method\": \"" << v.method << "\", \"n\": " << n
        << ", \"values\": " << json_values(v.values) << ", \"diagnostics\": {";
    out << "\"converged_at\": ";
    if (v.diagnostics.converged_at)
        out << *v.diagnostics.converged_at;
    else
        out << "null";
    out << ", \"kl\": ";
    if (v.diagnostics.kl)
        out << fmt17(*v.diagnostics.kl);
    else
        out << "null";
    out << ", \"temperature\": " << fmt17(v.diagnostics.temperature)
        << ", \"steps\": " << v.diagnostics.steps;
    if (randomized) out << ", \"seed\": " << seed << ", \"samples\": " << v.diagnostics.samples;
    out << "}}\n";
}

int cmd_value(const ValueOptions& opt) {
    const auto game = load_game(opt.game_path);
    bool randomized = false;
    const ValuationVector v = compute_valuation(*game, opt, &randomized);
    OutputSink sink(opt.out);
    emit_valuation(sink.stream(), v, game->num_players(), randomized, opt.seed);
    return 0;
}

std::vector<double> parse_point(const std::string& csv) {
    std::vector<double> x;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            x.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw input_error("--at expects a comma-separated list of numbers");
        }
    }
    return x;
}

int cmd_marginals(const std::string& game_path, double temperature, const std::string& at,
                  const std::string& out_path) {
    const auto game = load_game(game_path);
    std::optional<MarginalVector> x;
    if (!at.empty()) {
        x = parse_point(at);
        check_marginals(*game, *x);
    }
    const EbmSummary summary = summarize_ebm(*game, temperature, x);
    OutputSink sink(out_path);
    std::ostream& out = sink.stream();
    out << "{\"n\": " << game->num_players() << ", \"temperature\": " << fmt17(temperature)
        << ", \"log_z\": " << fmt17(summary.log_z)
        << ", \"true_marginals\": " << json_values(summary.true_marginals);
    if (x) {
        out << ", \"at\": " << json_values(*x) << ", \"elbo\": " << fmt17(*summary.elbo_at)
            << ", \"kl\": " << fmt17(*summary.kl_at);
    }
    out << "}\n";
    return 0;
}

int cmd_removal_curve(const ValueOptions& opt, const std::string& direction) {
    const auto game = load_game(opt.game_path);
    bool randomized = false;
    const ValuationVector v = compute_valuation(*game, opt, &randomized);
    const RemovalCurve curve = removal_curve(*game, v.values, direction == "desc");
    OutputSink sink(opt.out);
    std::ostream& out = sink.stream();
    out << "step,removed_player,payoff\n0,," << fmt17(curve.payoffs[0]) << '\n';
    for (std::size_t k = 0; k < curve.order.size(); ++k)
        out << k + 1 << ',' << curve.order[k] << ',' << fmt17(curve.payoffs[k + 1]) << '\n';
    return 0;
}

int cmd_flid_gen(int n, int d, std::uint64_t seed, const std::string& out_path) {
    const auto game = random_flid_game(n, d, seed);
    OutputSink sink(out_path);
    write_flid_json(sink.stream(), *game);
    return 0;
}

int cmd_bench(const std::string& suite, const std::string& n_csv, const std::string& d_csv,
              int seeds, double temperature, std::uint64_t seed, const std::string& out_path) {
    if (suite != "flid") throw input_error("unknown bench suite: " + suite);
    auto to_ints = [](const std::string& csv) {
        std::vector<int> out;
        for (double v : parse_point(csv)) out.push_back(static_cast<int>(v));
        return out;
    };
    const std::vector<BenchRow> rows =
        flid_benchmark(seed, to_ints(n_csv), to_ints(d_csv), seeds, temperature);
    OutputSink sink(out_path);
    write_benchmark_csv(sink.stream(), rows);
    return 0;
}

// The axiom suite checks the fixed-point trajectory values: null players get
// exactly zero, symmetric players tie exactly under simultaneous updates, a
// constant payoff shift leaves values identical, and the 1-step value at the
// uniform midpoint is additive across games.
int cmd_axioms(std::uint64_t seed, int n, int count) {
    const std::vector<AxiomCase> cases = gen_axiom_suite(seed, n, count);
    const std::vector<int> k_grid = {1, 2, 5, 10};
    const std::vector<double> init_grid = {0.25, 0.5, 0.75};
    int failures = 0;

    auto run_solver = [&](const GameOracle& game, bool naive, double init, int k) {
        SolverConfig config;
        config.init = uniform_init(game.num_players(), init);
        config.max_steps = k;
        config.tol = 0.0;
        const Trajectory traj = naive ? mfi_naive(game, config) : mfi_full_gradient(game, config);
        return traj.final_logits;
    };

    auto report = [&](const char* what, bool ok) {
        std::cout << what << ": " << (ok ? "PASS" : "FAIL") << '\n';
        if (!ok) ++failures;
    };

    for (bool naive : {false, true}) {
        const char* solver = naive ? "naive" : "full";
        for (int k : k_grid) {
            for (double init : init_grid) {
                bool null_ok = true, sym_ok = true, marg_ok = true;
                for (const AxiomCase& cs : cases) {
                    if (cs.relation == AxiomRelation::kNullPlayer) {
                        const auto v = run_solver(*cs.game_a, naive, init, k);
                        null_ok = null_ok && v[cs.player_i] == 0.0;
                    } else if (cs.relation == AxiomRelation::kSymmetricPair && !naive) {
                        // Exact ties require simultaneous updates; the
                        // sequential sweep only reaches them at convergence.
                        const auto v = run_solver(*cs.game_a, naive, init, k);
                        sym_ok = sym_ok && v[cs.player_i] == v[cs.player_j];
                    } else if (cs.relation == AxiomRelation::kMarginalism) {
                        const auto va = run_solver(*cs.game_a, naive, init, k);
                        const auto vb = run_solver(*cs.game_b, naive, init, k);
                        marg_ok = marg_ok && va == vb;
                    }
                }
                char label[96];
                std::snprintf(label, sizeof label, "null-player  solver=%-5s K=%-2d init=%.2f",
                              solver, k, init);
                report(label, null_ok);
                if (!naive) {
                    std::snprintf(label, sizeof label, "symmetry     solver=%-5s K=%-2d init=%.2f",
                                  solver, k, init);
                    report(label, sym_ok);
                }
                std::snprintf(label, sizeof label, "marginalism  solver=%-5s K=%-2d init=%.2f",
                              solver, k, init);
                report(label, marg_ok);
            }
        }
    }

    bool add_ok = true;
    for (const AxiomCase& cs : cases) {
        if (cs.relation != AxiomRelation::kAdditivity) continue;
        const auto va = banzhaf(*cs.game_a).values;
        const auto vb = banzhaf(*cs.game_b).values;
        std::vector<double> sum_table(std::size_t{1} << n);
        const auto& ta = dynamic_cast<const TabulatedGame&>(*cs.game_a).table();
        const auto& tb = dynamic_cast<const TabulatedGame&>(*cs.game_b).table();
        for (std::size_t s = 0; s < sum_table.size(); ++s) sum_table[s] = ta[s] + tb[s];
        const TabulatedGame sum_game(n, std::move(sum_table));
        const auto vs = banzhaf(sum_game).values;
        for (int i = 0; i < n; ++i)
            add_ok = add_ok && std::abs(vs[i] - (va[i] + vb[i])) <= 1e-10;
    }
    report("additivity   1-step value at 0.5*1", add_ok);

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Game-theoretic player valuations via mean-field variational inference"};
    app.require_subcommand(1);

    ValueOptions value_opt;
    CLI::App* value_cmd = app.add_subcommand("value", "compute a valuation vector");
    add_value_flags(value_cmd, &value_opt);

    std::string marg_game, marg_at, marg_out;
    double marg_temperature = 1.0;
    CLI::App* marg_cmd = app.add_subcommand("marginals", "exact EBM diagnostics");
    marg_cmd->add_option("--game", marg_game, "game file (JSON)")->required();
    marg_cmd->add_option("--temperature", marg_temperature, "EBM temperature");
    marg_cmd->add_option("--at", marg_at, "marginal vector x0,x1,... for ELBO/KL");
    marg_cmd->add_option("--out", marg_out, "output path (default stdout)");

    ValueOptions curve_opt;
    std::string curve_direction = "desc";
    CLI::App* curve_cmd = app.add_subcommand("removal-curve", "payoff under player removal");
    add_value_flags(curve_cmd, &curve_opt);
    curve_cmd->add_option("--direction", curve_direction, "removal order")
        ->check(CLI::IsMember({"desc", "asc"}));

    int gen_n = 0, gen_d = 0;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* gen_cmd = app.add_subcommand("flid-gen", "generate a random FLID game file");
    gen_cmd->add_option("--n", gen_n, "players")->required();
    gen_cmd->add_option("--d", gen_d, "latent dimensions")->required();
    gen_cmd->add_option("--seed", gen_seed, "generator seed");
    gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

    std::string bench_suite = "flid", bench_n = "6,8,10", bench_d = "4,8", bench_out;
    int bench_seeds = 20;
    double bench_temperature = 1.0;
    std::uint64_t bench_seed = 0;
    CLI::App* bench_cmd = app.add_subcommand("bench", "FLID marginal-fit benchmark (CSV)");
    bench_cmd->add_option("--suite", bench_suite, "benchmark suite");
    bench_cmd->add_option("--n", bench_n, "player counts, comma separated");
    bench_cmd->add_option("--d", bench_d, "latent dimensions, comma separated");
    bench_cmd->add_option("--seeds", bench_seeds, "instances per configuration");
    bench_cmd->add_option("--temperature", bench_temperature, "EBM temperature");
    bench_cmd->add_option("--seed", bench_seed, "master seed");
    bench_cmd->add_option("--out", bench_out, "output path (default stdout)");

    std::uint64_t ax_seed = 0;
    int ax_n = 6, ax_count = 20;
    CLI::App* ax_cmd = app.add_subcommand("axioms", "run the randomized axiom suite");
    ax_cmd->add_option("--seed", ax_seed, "generator seed");
    ax_cmd->add_option("--n", ax_n, "players per generated game");
    ax_cmd->add_option("--count", ax_count, "instances per axiom");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (value_cmd->parsed()) return cmd_value(value_opt);
        if (marg_cmd->parsed())
            return cmd_marginals(marg_game, marg_temperature, marg_at, marg_out);
        if (curve_cmd->parsed()) return cmd_removal_curve(curve_opt, curve_direction);
        if (gen_cmd->parsed()) return cmd_flid_gen(gen_n, gen_d, gen_seed, gen_out);
        if (bench_cmd->parsed())
            return cmd_bench(bench_suite, bench_n, bench_d, bench_seeds, bench_temperature,
                             bench_seed, bench_out);
        if (ax_cmd->parsed()) return cmd_axioms(ax_seed, ax_n, ax_count);
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
