// Command-line front end: instance generation, Q-learning runs, property
// sweeps, classical baselines, and the QUBO/alternating-operator pipeline.
//
// Exit codes: 0 success, 1 validation or property failure, 2 usage error,
// 3 capacity (request exceeds a hard resource limit).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qtour/agent.hpp"
#include "qtour/analytic.hpp"
#include "qtour/ansatz.hpp"
#include "qtour/baselines.hpp"
#include "qtour/errors.hpp"
#include "qtour/graph.hpp"
#include "qtour/propcheck.hpp"
#include "qtour/qaoa.hpp"
#include "qtour/rng.hpp"
#include "qtour/trainer.hpp"

namespace {

using namespace qtour;

std::string csv_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

int run_gen(int cities, int count, std::uint64_t seed, bool solve, const std::string& out) {
    auto graphs = generate_instances(cities, count, seed);
    std::vector<Instance> instances;
    instances.reserve(graphs.size());
    for (auto& g : graphs) {
        std::optional<Tour> opt;
        if (solve) opt = solve_exact(g);
        instances.push_back(Instance{std::move(g), std::move(opt)});
    }
    save_instances(out, instances);
    std::cout << "wrote " << count << " instances (" << cities << " cities"
              << (solve ? ", solved" : "") << ") to " << out << "\n";
    return 0;
}

struct TrainCli {
    std::string ansatz = "eqc";
    int depth = 1;
    std::string train_path;
    std::string val_path;
    std::string config_path;
    std::string out_dir = ".";
    // Overrides; negative / NaN sentinels mean "keep the config value".
    int episodes = -1;
    double lr = std::numeric_limits<double>::quiet_NaN();
    long long seed = -1;
    int threads = -1;
    int batch = -1;
    std::string gradient;
};

int run_train(const TrainCli& cli) {
    TrainerConfig cfg;
    if (!cli.config_path.empty()) cfg = load_trainer_config(cli.config_path);
    if (cli.episodes >= 0) cfg.episodes_max = cli.episodes;
    if (!std::isnan(cli.lr)) cfg.learning_rate = cli.lr;
    if (cli.seed >= 0) cfg.seed = static_cast<std::uint64_t>(cli.seed);
    if (cli.threads >= 0) cfg.threads = cli.threads;
    if (cli.batch >= 0) cfg.batch_size = cli.batch;
    if (!cli.gradient.empty()) cfg.gradient = gradient_from_string(cli.gradient);

    const AnsatzKind kind = ansatz_from_string(cli.ansatz);
    const auto train_set = load_instances(cli.train_path);
    if (train_set.empty()) throw std::runtime_error("no instances in " + cli.train_path);

    std::filesystem::create_directories(cli.out_dir);
    const auto out = [&](const char* name) {
        return (std::filesystem::path(cli.out_dir) / name).string();
    };

    TrainResult tr = train(cfg, train_set, kind, cli.depth);

    const int n = train_set[0].graph.size();
    Checkpoint ck{kind, n, cli.depth, tr.episodes_run, tr.params, tr.optimizer};
    save_checkpoint(out("checkpoint.txt"), ck);
    write_metrics_csv(out("episodes.csv"), tr.history);

    TrainSummary summary;
    summary.kind = kind;
    summary.cities = n;
    summary.depth = cli.depth;
    summary.n_trainable = static_cast<int>(tr.params.size());
    summary.seed = cfg.seed;
    summary.episodes_run = tr.episodes_run;
    summary.solved = tr.solved;
    summary.window = cfg.solve_window;
    double window_mean = std::numeric_limits<double>::quiet_NaN();
    if (!tr.history.empty()) {
        const int w = std::min<int>(cfg.solve_window, static_cast<int>(tr.history.size()));
        double acc = 0.0;
        bool any_nan = false;
        for (int i = 0; i < w; ++i) {
            const double r = tr.history[tr.history.size() - 1 - i].ratio;
            if (std::isnan(r)) any_nan = true;
            acc += r;
        }
        if (!any_nan) window_mean = acc / w;
    }
    summary.final_window_mean_ratio = window_mean;

    std::vector<Instance> val_set;
    if (!cli.val_path.empty()) {
        val_set = load_instances(cli.val_path);
        summary.has_validation = true;
        summary.validation = evaluate_policy(kind, cli.depth, tr.params, val_set);
        write_validation_csv(out("validation.csv"), val_set, kind, cli.depth, tr.params);
    }
    write_summary_json(out("summary.json"), summary, cfg);

    std::cout << "trained " << cli.ansatz << " depth " << cli.depth << " on " << train_set.size()
              << " instances (" << n << " cities, " << tr.params.size() << " parameters): "
              << tr.episodes_run << " episodes, "
              << (tr.solved ? "stopping rule met" : "episode budget reached") << "\n";
    if (summary.has_validation) {
        std::cout << "validation mean ratio " << summary.validation.mean << " median "
                  << summary.validation.median << " over " << val_set.size() << " instances\n";
    }
    std::cout << "artifacts in " << cli.out_dir
              << ": checkpoint.txt episodes.csv summary.json"
              << (summary.has_validation ? " validation.csv" : "") << "\n";
    return 0;
}

void print_report(const CheckReport& r) {
    std::cout << r.name << ": trials=" << r.trials << " max_deviation=" << r.max_deviation
              << " tolerance=" << r.tolerance << " failures=" << r.failures << " "
              << (r.passed ? "PASS" : "FAIL") << "\n";
}

int run_check(const std::string& what, int trials, std::uint64_t seed) {
    std::vector<CheckReport> reports;
    if (what == "equivariance") {
        reports.push_back(check_state_equivariance(trials, seed));
        reports.push_back(check_qvalue_equivariance(trials, seed));
        reports.push_back(check_tour_equivariance(trials, seed));
    } else if (what == "analytic") {
        reports.push_back(check_analytic_oracle(trials, seed));
    } else if (what == "gradients") {
        reports.push_back(check_gradients(std::max(1, trials / 8), seed));
    } else {
        throw CLI::ValidationError("--what must be equivariance, analytic, or gradients");
    }
    bool all = true;
    for (const auto& r : reports) {
        print_report(r);
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

int run_baseline(const std::string& instances_path, const std::string& out,
                 std::uint64_t seed, bool random_start) {
    const auto instances = load_instances(instances_path);
    if (instances.empty()) throw std::runtime_error("no instances in " + instances_path);
    auto rng = make_rng(seed, 200);
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write " + out);
    os << "instance,optimal_cost,nn_cost,nn_ratio,random_cost,random_ratio,christofides_bound\n";
    double nn_sum = 0.0, rnd_sum = 0.0;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& g = instances[i].graph;
        const Tour opt = instances[i].optimal ? *instances[i].optimal : solve_exact(g);
        const double opt_cost = tour_cost(g, opt);
        const int start = random_start ? static_cast<int>(uniform_index(rng, g.size())) : 0;
        const Tour nn = nearest_neighbor(g, start);
        const Tour rnd = random_tour(g, rng);
        const double nn_cost = tour_cost(g, nn);
        const double rnd_cost = tour_cost(g, rnd);
        nn_sum += nn_cost / opt_cost;
        rnd_sum += rnd_cost / opt_cost;
        os << i << ',' << csv_double(opt_cost) << ',' << csv_double(nn_cost) << ','
           << csv_double(nn_cost / opt_cost) << ',' << csv_double(rnd_cost) << ','
           << csv_double(rnd_cost / opt_cost) << ',' << csv_double(1.5 * opt_cost) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + out);
    std::cout << "baselines over " << instances.size() << " instances: nearest-neighbor mean "
              << nn_sum / instances.size() << ", random mean " << rnd_sum / instances.size()
              << "; table in " << out << "\n";
    return 0;
}

std::vector<double> load_params_file(const std::string& path, int* depth_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file: " + path);
    int depth = 0;
    if (!(in >> depth) || depth < 1) throw std::runtime_error(path + ": bad depth header");
    std::vector<double> params(2 * static_cast<std::size_t>(depth));
    std::string tok;
    for (auto& p : params) {
        if (!(in >> tok)) throw std::runtime_error(path + ": expected 2*depth parameters");
        char* end = nullptr;
        p = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0') {
            throw std::runtime_error(path + ": malformed number '" + tok + "'");
        }
    }
    *depth_out = depth;
    return params;
}

void save_params_file(const std::string& path, int depth, std::span<const double> params) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write parameter file: " + path);
    out << depth << '\n';
    char buf[48];
    for (double p : params) {
        std::snprintf(buf, sizeof(buf), "%a", p);
        out << buf << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct QaoaCli {
    std::string instances_path;
    int cities = 4;
    int count = 10;
    int depth = 1;
    int budget = 500;
    double penalty = 1.0;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "qaoa.csv";
    std::string transfer_params;
    std::string write_params;
};

int run_qaoa(const QaoaCli& cli) {
    std::vector<Instance> instances;
    if (!cli.instances_path.empty()) {
        instances = load_instances(cli.instances_path);
        if (instances.empty()) throw std::runtime_error("no instances in " + cli.instances_path);
    } else {
        for (auto& g : generate_instances(cli.cities, cli.count, cli.seed)) {
            instances.push_back(Instance{std::move(g), std::nullopt});
        }
    }

    std::vector<double> fixed_params;
    int depth = cli.depth;
    if (!cli.transfer_params.empty()) {
        int file_depth = 0;
        fixed_params = load_params_file(cli.transfer_params, &file_depth);
        depth = file_depth;
    }

    std::ofstream os(cli.out);
    if (!os) throw std::runtime_error("cannot write " + cli.out);
    os << "instance,depth,evaluations,expected_cost,feasible,tour_cost,optimal_cost,ratio\n";

    double best_ratio = std::numeric_limits<double>::infinity();
    double best_expected = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    int feasible_count = 0;
    std::vector<double> ratios;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& g = instances[i].graph;
        const QuboProblem qubo = build_qubo(g, cli.penalty);
        const QaoaResult res =
            fixed_params.empty()
                ? optimize_qaoa(qubo, depth, cli.budget, cli.seed + i, cli.threads)
                : evaluate_qaoa(qubo, depth, fixed_params);
        const Tour opt = instances[i].optimal ? *instances[i].optimal : solve_exact(g);
        const double opt_cost = tour_cost(g, opt);
        double cost = std::numeric_limits<double>::quiet_NaN();
        double ratio = std::numeric_limits<double>::quiet_NaN();
        if (res.outcome.feasible) {
            cost = tour_cost(g, res.outcome.tour);
            ratio = cost / opt_cost;
            ++feasible_count;
            ratios.push_back(ratio);
            if (fixed_params.empty() &&
                (ratio < best_ratio ||
                 (ratio == best_ratio && res.expected_cost < best_expected))) {
                best_ratio = ratio;
                best_expected = res.expected_cost;
                best_params = res.params;
            }
        }
        os << i << ',' << res.depth << ',' << res.evaluations << ','
           << csv_double(res.expected_cost) << ',' << (res.outcome.feasible ? 1 : 0) << ','
           << csv_double(cost) << ',' << csv_double(opt_cost) << ',' << csv_double(ratio) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + cli.out);

    if (!cli.write_params.empty()) {
        if (best_params.empty()) throw std::runtime_error("no feasible run to take parameters from");
        save_params_file(cli.write_params, depth, best_params);
    }
    double median = std::numeric_limits<double>::quiet_NaN();
    if (!ratios.empty()) {
        std::sort(ratios.begin(), ratios.end());
        median = quantile(ratios, 0.5);
    }
    std::cout << "depth " << depth << ": " << feasible_count << "/" << instances.size()
              << " feasible, median ratio " << median << "; table in " << cli.out << "\n";
    return feasible_count > 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"statevector circuit simulator and tour-learning toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    // gen
    auto* gen = app.add_subcommand("gen", "generate planar instances (optionally solved)");
    int gen_cities = 5, gen_count = 100;
    std::uint64_t gen_seed = 1;
    bool gen_solve = false;
    std::string gen_out;
    gen->add_option("--cities", gen_cities, "nodes per instance (>= 4)");
    gen->add_option("--count", gen_count, "number of instances");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_flag("--solve", gen_solve, "attach exact optimal tours (cities <= 20)");
    gen->add_option("--out", gen_out, "output file")->required();
    gen->callback([&] { rc = run_gen(gen_cities, gen_count, gen_seed, gen_solve, gen_out); });

    // train
    auto* train_cmd = app.add_subcommand("train", "Q-learning over an instance set");
    TrainCli tc;
    train_cmd->add_option("--ansatz", tc.ansatz, "circuit family: eqc, neqc, hwete, hwe");
    train_cmd->add_option("--depth", tc.depth, "circuit layers");
    train_cmd->add_option("--train", tc.train_path, "training instance file")->required();
    train_cmd->add_option("--val", tc.val_path, "validation instance file");
    train_cmd->add_option("--config", tc.config_path, "key = value config file");
    train_cmd->add_option("--out", tc.out_dir, "output directory");
    train_cmd->add_option("--episodes", tc.episodes, "override episode budget");
    train_cmd->add_option("--lr", tc.lr, "override learning rate");
    train_cmd->add_option("--seed", tc.seed, "override seed");
    train_cmd->add_option("--threads", tc.threads, "evaluation threads");
    train_cmd->add_option("--batch", tc.batch, "override batch size");
    train_cmd->add_option("--gradient", tc.gradient, "parameter-shift or central-difference");
    train_cmd->callback([&] { rc = run_train(tc); });

    // check / analytic-check
    auto* check = app.add_subcommand("check", "randomized property sweeps");
    std::string check_what = "equivariance";
    int check_trials = 100;
    std::uint64_t check_seed = 1;
    check->add_option("--what", check_what, "equivariance, analytic, or gradients");
    check->add_option("--trials", check_trials, "random trials");
    check->add_option("--seed", check_seed, "sweep seed");
    check->callback([&] { rc = run_check(check_what, check_trials, check_seed); });

    auto* acheck = app.add_subcommand("analytic-check", "depth-1 closed form vs simulator");
    int acheck_trials = 200;
    std::uint64_t acheck_seed = 1;
    acheck->add_option("--trials", acheck_trials, "random trials");
    acheck->add_option("--seed", acheck_seed, "sweep seed");
    acheck->callback([&] { rc = run_check("analytic", acheck_trials, acheck_seed); });

    // baseline
    auto* base = app.add_subcommand("baseline", "classical reference tours and bounds");
    std::string base_instances, base_out = "baselines.csv";
    std::uint64_t base_seed = 1;
    bool base_random_start = false;
    base->add_option("--instances", base_instances, "instance file")->required();
    base->add_option("--out", base_out, "output CSV");
    base->add_option("--seed", base_seed, "seed for random tours/starts");
    base->add_flag("--random-start", base_random_start,
                   "random nearest-neighbor start instead of node 0");
    base->callback(
        [&] { rc = run_baseline(base_instances, base_out, base_seed, base_random_start); });

    // qaoa
    auto* qa = app.add_subcommand("qaoa", "QUBO alternating-operator baseline");
    QaoaCli qc;
    qa->add_option("--instances", qc.instances_path, "instance file (else generated)");
    qa->add_option("--cities", qc.cities, "cities when generating (4 or 5)");
    qa->add_option("--count", qc.count, "instances when generating");
    qa->add_option("--depth", qc.depth, "layers");
    qa->add_option("--budget", qc.budget, "random-search evaluations at depth 1");
    qa->add_option("--penalty", qc.penalty, "one-hot penalty weight");
    qa->add_option("--seed", qc.seed, "seed");
    qa->add_option("--threads", qc.threads, "evaluation threads");
    qa->add_option("--out", qc.out, "output CSV");
    qa->add_option("--transfer-params", qc.transfer_params,
                   "apply parameters from file instead of optimizing");
    qa->add_option("--write-params", qc.write_params, "save the best instance's parameters");
    qa->callback([&] { rc = run_qaoa(qc); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qtour::capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
