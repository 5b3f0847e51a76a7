#include "qtour/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "qtour/baselines.hpp"
#include "qtour/parallel.hpp"
#include "qtour/rng.hpp"

namespace qtour {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

GradientMethod gradient_from_string(std::string_view name) {
    if (name == "parameter-shift" || name == "shift") return GradientMethod::parameter_shift;
    if (name == "central-difference" || name == "central") {
        return GradientMethod::central_difference;
    }
    throw std::invalid_argument("unknown gradient method '" + std::string(name) +
                                "' (expected parameter-shift or central-difference)");
}

std::string_view to_string(GradientMethod m) {
    return m == GradientMethod::parameter_shift ? "parameter-shift" : "central-difference";
}

double TrainerConfig::learning_rate_for(AnsatzKind kind) const {
    if (learning_rate > 0.0) return learning_rate;
    return kind == AnsatzKind::eqc ? 1e-2 : 1e-3;
}

double TrainerConfig::epsilon_at(int episode) const {
    const double e = eps_start * std::pow(eps_decay, episode - 1);
    return std::max(eps_end, e);
}

TrainerConfig load_trainer_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    TrainerConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), '=', ' ');
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::string value;
        if (!(ls >> value)) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": key '" + key +
                                     "' has no value");
        }
        std::string extra;
        if (ls >> extra) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": trailing tokens after value");
        }
        try {
            if (key == "episodes_max") cfg.episodes_max = std::stoi(value);
            else if (key == "solve_window") cfg.solve_window = std::stoi(value);
            else if (key == "solve_threshold") cfg.solve_threshold = std::stod(value);
            else if (key == "batch_size") cfg.batch_size = std::stoi(value);
            else if (key == "memory_capacity") cfg.memory_capacity = std::stoi(value);
            else if (key == "target_update_interval") cfg.target_update_interval = std::stoi(value);
            else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
            else if (key == "discount") cfg.discount = std::stod(value);
            else if (key == "eps_start") cfg.eps_start = std::stod(value);
            else if (key == "eps_end") cfg.eps_end = std::stod(value);
            else if (key == "eps_decay") cfg.eps_decay = std::stod(value);
            else if (key == "warm_up") cfg.warm_up = std::stoi(value);
            else if (key == "init_range") cfg.init_range = std::stod(value);
            else if (key == "gradient_method") cfg.gradient = gradient_from_string(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "threads") cfg.threads = std::stoi(value);
            else {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": unknown config key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad value for '" +
                                     key + "': " + value);
        }
    }
    return cfg;
}

AnnotatedGraph annotated_from_mask(const WeightedGraph& g, std::uint32_t avail) {
    std::vector<double> alpha(g.size(), kAlphaVisited);
    for (int i = 0; i < g.size(); ++i) {
        if (avail & (1u << i)) alpha[i] = kAlphaAvailable;
    }
    return AnnotatedGraph(g, std::move(alpha));
}

std::uint32_t mask_from_state(const AnnotatedGraph& s) {
    std::uint32_t m = 0;
    for (int i = 0; i < s.size(); ++i) {
        if (s.available(i)) m |= 1u << i;
    }
    return m;
}

ReplayMemory::ReplayMemory(std::size_t capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
    buf_.resize(capacity);
}

void ReplayMemory::push(const Transition& t) {
    buf_[head_] = t;
    head_ = (head_ + 1) % buf_.size();
    if (head_ == 0) full_ = true;
}

const Transition& ReplayMemory::sample_one(std::mt19937_64& rng) const {
    const std::size_t count = size();
    if (count == 0) throw std::logic_error("replay memory is empty");
    return buf_[uniform_index(rng, count)];
}

std::vector<Transition> ReplayMemory::sample(std::size_t count, std::mt19937_64& rng) const {
    std::vector<Transition> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(sample_one(rng));
    return out;
}

void AdamOptimizer::reset(std::size_t n_params) {
    m.assign(n_params, 0.0);
    v.assign(n_params, 0.0);
    steps = 0;
}

void AdamOptimizer::update(std::vector<double>& params, std::span<const double> grad) {
    if (params.size() != grad.size() || params.size() != m.size()) {
        throw std::invalid_argument("optimizer state does not match parameter count");
    }
    ++steps;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(steps));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(steps));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + epsilon);
    }
}

namespace {

double q_from_state(const Statevector& psi, const WeightedGraph& g, int last, int action) {
    return g.weight(last, action) * psi.expectation_zz(last, action);
}

} // namespace

double q_value_single(const WeightedGraph& g, AnsatzKind kind, int depth,
                      std::span<const double> params, std::uint32_t avail, int last, int action) {
    const AnnotatedGraph s = annotated_from_mask(g, avail);
    const AnsatzProgram program = build_ansatz(kind, s, depth);
    const QValues q = q_values(program, params, s, last);
    if (!q.available[action]) {
        throw std::invalid_argument("action " + std::to_string(action) + " is not available");
    }
    return q.values[action];
}

double td_target(const Transition& t, const WeightedGraph& g, AnsatzKind kind, int depth,
                 std::span<const double> target_params, double discount) {
    if (t.done) return t.reward;
    const AnnotatedGraph next = annotated_from_mask(g, t.next_avail);
    const AnsatzProgram program = build_ansatz(kind, next, depth);
    const QValues q = q_values(program, target_params, next, t.next_last);
    return t.reward + discount * q.values[q.best_available()];
}

std::vector<double> q_gradient(const WeightedGraph& g, AnsatzKind kind, int depth,
                               std::span<const double> params, std::uint32_t avail, int last,
                               int action, GradientMethod method) {
    const AnnotatedGraph s = annotated_from_mask(g, avail);
    const AnsatzProgram program = build_ansatz(kind, s, depth);
    std::vector<double> grad(program.n_trainable(), 0.0);
    if (method == GradientMethod::parameter_shift) {
        for (int p = 0; p < program.n_trainable(); ++p) {
            double acc = 0.0;
            for (int gi : program.param_sites()[p]) {
                const double c = program.gates()[gi].coeff;
                if (c == 0.0) continue;
                const double qp = q_from_state(
                    program.evaluate_shifted(params, gi, std::numbers::pi / 2), g, last, action);
                const double qm = q_from_state(
                    program.evaluate_shifted(params, gi, -std::numbers::pi / 2), g, last, action);
                acc += 0.5 * c * (qp - qm);
            }
            grad[p] = acc;
        }
    } else {
        std::vector<double> shifted(params.begin(), params.end());
        for (int p = 0; p < program.n_trainable(); ++p) {
            const double saved = shifted[p];
            shifted[p] = saved + kCentralDifferenceStep;
            const double qp = q_from_state(program.evaluate(shifted), g, last, action);
            shifted[p] = saved - kCentralDifferenceStep;
            const double qm = q_from_state(program.evaluate(shifted), g, last, action);
            shifted[p] = saved;
            grad[p] = (qp - qm) / (2.0 * kCentralDifferenceStep);
        }
    }
    return grad;
}

namespace {

struct ElementResult {
    double residual = 0.0;
    std::vector<double> dq;
};

void check_instance_bounds(std::span<const Transition> batch,
                           std::span<const Instance> instances) {
    for (const auto& t : batch) {
        if (t.instance < 0 || t.instance >= static_cast<int>(instances.size())) {
            throw std::out_of_range("transition references a missing instance");
        }
    }
}

} // namespace

double batch_loss(std::span<const Transition> batch, std::span<const Instance> instances,
                  AnsatzKind kind, int depth, std::span<const double> params,
                  std::span<const double> target_params, double discount, int threads) {
    if (batch.empty()) throw std::invalid_argument("batch is empty");
    check_instance_bounds(batch, instances);
    std::vector<double> sq(batch.size(), 0.0);
    parallel_for(batch.size(), threads, [&](std::size_t b) {
        const Transition& t = batch[b];
        const WeightedGraph& g = instances[t.instance].graph;
        const double y = td_target(t, g, kind, depth, target_params, discount);
        const double q = q_value_single(g, kind, depth, params, t.avail, t.last, t.action);
        sq[b] = (q - y) * (q - y);
    });
    double acc = 0.0;
    for (double s : sq) acc += s;
    return acc / static_cast<double>(batch.size());
}

LossGradient loss_gradient(std::span<const Transition> batch, std::span<const Instance> instances,
                           AnsatzKind kind, int depth, std::span<const double> params,
                           std::span<const double> target_params, double discount,
                           GradientMethod method, int threads) {
    if (batch.empty()) throw std::invalid_argument("batch is empty");
    check_instance_bounds(batch, instances);
    std::vector<ElementResult> parts(batch.size());
    parallel_for(batch.size(), threads, [&](std::size_t b) {
        const Transition& t = batch[b];
        const WeightedGraph& g = instances[t.instance].graph;
        const double y = td_target(t, g, kind, depth, target_params, discount);
        const double q = q_value_single(g, kind, depth, params, t.avail, t.last, t.action);
        parts[b].residual = q - y;
        parts[b].dq = q_gradient(g, kind, depth, params, t.avail, t.last, t.action, method);
    });
    LossGradient out;
    out.grad.assign(params.size(), 0.0);
    const double scale = 2.0 / static_cast<double>(batch.size());
    for (const auto& part : parts) {
        out.loss += part.residual * part.residual;
        for (std::size_t p = 0; p < out.grad.size(); ++p) {
            out.grad[p] += scale * part.residual * part.dq[p];
        }
    }
    out.loss /= static_cast<double>(batch.size());
    if (!std::isfinite(out.loss)) throw std::runtime_error("non-finite loss in training update");
    for (double gv : out.grad) {
        if (!std::isfinite(gv)) throw std::runtime_error("non-finite gradient in training update");
    }
    return out;
}

TrainResult train(const TrainerConfig& cfg, std::span<const Instance> instances,
                  AnsatzKind kind, int depth) {
    if (instances.empty()) throw std::invalid_argument("no training instances");
    const int n = instances[0].graph.size();
    if (n < 4) throw std::invalid_argument("training needs at least 4 cities");
    for (const auto& inst : instances) {
        if (inst.graph.size() != n) {
            throw std::invalid_argument("all training instances must have the same size");
        }
    }
    if (cfg.batch_size < 1) throw std::invalid_argument("batch size must be positive");
    if (cfg.episodes_max < 1) throw std::invalid_argument("episode budget must be positive");

    bool have_optima = true;
    std::vector<double> opt_cost(instances.size(), 0.0);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (instances[i].optimal) {
            opt_cost[i] = tour_cost(instances[i].graph, *instances[i].optimal);
        } else {
            have_optima = false;
        }
    }

    TrainResult res;
    auto init_rng = make_rng(cfg.seed, 0);
    auto action_rng = make_rng(cfg.seed, 1);
    auto replay_rng = make_rng(cfg.seed, 2);

    res.params.resize(trainable_count(kind, n, depth));
    for (auto& p : res.params) p = uniform_real(init_rng, -cfg.init_range, cfg.init_range);
    std::vector<double> target = res.params;

    res.optimizer.lr = cfg.learning_rate_for(kind);
    res.optimizer.reset(res.params.size());

    ReplayMemory memory(static_cast<std::size_t>(cfg.memory_capacity));
    long update_steps = 0;
    std::vector<double> ratio_window;

    for (int ep = 1; ep <= cfg.episodes_max; ++ep) {
        const double eps = cfg.epsilon_at(ep);
        const std::size_t idx = static_cast<std::size_t>(ep - 1) % instances.size();
        const WeightedGraph& g = instances[idx].graph;

        TspEpisode episode(g);
        double loss_sum = 0.0;
        int loss_count = 0;
        while (!episode.done()) {
            const std::uint32_t avail = mask_from_state(episode.state());
            const int last = episode.last();
            const AnsatzProgram program = build_ansatz(kind, episode.state(), depth);
            const QValues q = q_values(program, res.params, episode.state(), last);
            const int action = select_action(q, eps, action_rng);
            const double reward = episode.step(action);
            memory.push(Transition{static_cast<int>(idx), avail, last, action, reward,
                                   mask_from_state(episode.state()), episode.last(),
                                   episode.done()});
            if (memory.size() >= static_cast<std::size_t>(cfg.warm_up)) {
                const auto batch =
                    memory.sample(static_cast<std::size_t>(cfg.batch_size), replay_rng);
                auto lg = loss_gradient(batch, instances, kind, depth, res.params, target,
                                        cfg.discount, cfg.gradient, cfg.threads);
                res.optimizer.update(res.params, lg.grad);
                ++update_steps;
                if (update_steps % cfg.target_update_interval == 0) target = res.params;
                loss_sum += lg.loss;
                ++loss_count;
            }
        }

        EpisodeMetrics em;
        em.episode = ep;
        em.epsilon = eps;
        em.loss = loss_count > 0 ? loss_sum / loss_count : kNaN;
        if (instances[idx].optimal) {
            em.ratio = tour_cost(g, episode.tour()) / opt_cost[idx];
        } else {
            em.ratio = kNaN;
        }
        res.history.push_back(em);
        res.episodes_run = ep;

        if (have_optima) {
            ratio_window.push_back(em.ratio);
            if (static_cast<int>(ratio_window.size()) > cfg.solve_window) {
                ratio_window.erase(ratio_window.begin());
            }
            if (static_cast<int>(ratio_window.size()) == cfg.solve_window) {
                double mean = 0.0;
                for (double r : ratio_window) mean += r;
                mean /= static_cast<double>(cfg.solve_window);
                if (mean < cfg.solve_threshold) {
                    res.solved = true;
                    break;
                }
            }
        }
    }
    return res;
}

double quantile(std::span<const double> sorted_values, double q) {
    if (sorted_values.empty()) throw std::invalid_argument("quantile of empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile must lie in [0, 1]");
    const double pos = q * static_cast<double>(sorted_values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

ValidationSummary evaluate_policy(AnsatzKind kind, int depth, std::span<const double> params,
                                  std::span<const Instance> validation) {
    if (validation.empty()) throw std::invalid_argument("no validation instances");
    ValidationSummary out;
    out.ratios.reserve(validation.size());
    for (const auto& inst : validation) {
        const Tour t{greedy_order(kind, depth, params, inst.graph, 0)};
        const Tour opt = inst.optimal ? *inst.optimal : solve_exact(inst.graph);
        out.ratios.push_back(approximation_ratio(inst.graph, t, opt));
    }
    std::vector<double> sorted = out.ratios;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double r : sorted) mean += r;
    out.mean = mean / static_cast<double>(sorted.size());
    out.median = quantile(sorted, 0.5);
    out.q1 = quantile(sorted, 0.25);
    out.q3 = quantile(sorted, 0.75);
    out.min = sorted.front();
    out.max = sorted.back();
    return out;
}

namespace {

std::string hexdouble(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw std::runtime_error(path + ": malformed number '" + s + "'");
    }
    return v;
}

void write_vector(std::ofstream& out, const std::string& name, std::span<const double> v) {
    out << name << ' ' << v.size() << '\n';
    for (double x : v) out << hexdouble(x) << '\n';
}

std::vector<double> read_vector(std::ifstream& in, const std::string& name,
                                const std::string& path) {
    std::string key;
    std::size_t count = 0;
    if (!(in >> key >> count) || key != name) {
        throw std::runtime_error(path + ": expected section '" + name + "'");
    }
    std::vector<double> v(count);
    std::string tok;
    for (auto& x : v) {
        if (!(in >> tok)) throw std::runtime_error(path + ": truncated section '" + name + "'");
        x = parse_double(tok, path);
    }
    return v;
}

constexpr const char* kCheckpointMagic = "qtour-checkpoint";
constexpr int kCheckpointVersion = 1;

} // namespace

void save_checkpoint(const std::string& path, const Checkpoint& c) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << kCheckpointMagic << ' ' << kCheckpointVersion << '\n';
    out << "ansatz " << to_string(c.kind) << '\n';
    out << "cities " << c.cities << '\n';
    out << "depth " << c.depth << '\n';
    out << "episode " << c.episode << '\n';
    write_vector(out, "params", c.params);
    out << "adam_lr " << hexdouble(c.optimizer.lr) << '\n';
    out << "adam_steps " << c.optimizer.steps << '\n';
    write_vector(out, "adam_m", c.optimizer.m);
    write_vector(out, "adam_v", c.optimizer.v);
    out << "end\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != kCheckpointMagic) {
        throw std::runtime_error(path + ": not a checkpoint file");
    }
    if (version != kCheckpointVersion) {
        throw std::runtime_error(path + ": unsupported checkpoint version " +
                                 std::to_string(version));
    }
    Checkpoint c;
    std::string key, value;
    if (!(in >> key >> value) || key != "ansatz") throw std::runtime_error(path + ": bad header");
    c.kind = ansatz_from_string(value);
    if (!(in >> key >> c.cities) || key != "cities") throw std::runtime_error(path + ": bad header");
    if (!(in >> key >> c.depth) || key != "depth") throw std::runtime_error(path + ": bad header");
    if (!(in >> key >> c.episode) || key != "episode") {
        throw std::runtime_error(path + ": bad header");
    }
    c.params = read_vector(in, "params", path);
    if (!(in >> key >> value) || key != "adam_lr") throw std::runtime_error(path + ": bad header");
    c.optimizer.lr = parse_double(value, path);
    if (!(in >> key >> c.optimizer.steps) || key != "adam_steps") {
        throw std::runtime_error(path + ": bad header");
    }
    c.optimizer.m = read_vector(in, "adam_m", path);
    c.optimizer.v = read_vector(in, "adam_v", path);
    if (!(in >> key) || key != "end") throw std::runtime_error(path + ": missing end marker");
    const std::size_t expect = trainable_count(c.kind, c.cities, c.depth);
    if (c.params.size() != expect || c.optimizer.m.size() != expect ||
        c.optimizer.v.size() != expect) {
        throw std::runtime_error(path + ": parameter count does not match header");
    }
    return c;
}

namespace {

std::string csv_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void write_metrics_csv(const std::string& path, std::span<const EpisodeMetrics> history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write metrics file: " + path);
    out << "episode,ratio,loss,epsilon\n";
    for (const auto& em : history) {
        out << em.episode << ',' << csv_double(em.ratio) << ',' << csv_double(em.loss) << ','
            << csv_double(em.epsilon) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_validation_csv(const std::string& path, std::span<const Instance> instances,
                          AnsatzKind kind, int depth, std::span<const double> params) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write validation file: " + path);
    out << "instance,cost,optimal_cost,ratio\n";
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        const Tour t{greedy_order(kind, depth, params, inst.graph, 0)};
        const Tour opt = inst.optimal ? *inst.optimal : solve_exact(inst.graph);
        const double cost = tour_cost(inst.graph, t);
        const double oc = tour_cost(inst.graph, opt);
        out << i << ',' << csv_double(cost) << ',' << csv_double(oc) << ','
            << csv_double(cost / oc) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_summary_json(const std::string& path, const TrainSummary& s,
                        const TrainerConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["ansatz"] = std::string(to_string(s.kind));
    j["cities"] = s.cities;
    j["depth"] = s.depth;
    j["n_trainable"] = s.n_trainable;
    j["seed"] = s.seed;
    j["episodes_run"] = s.episodes_run;
    j["solved"] = s.solved;
    if (std::isnan(s.final_window_mean_ratio)) {
        j["final_window_mean_ratio"] = nullptr;
    } else {
        j["final_window_mean_ratio"] = s.final_window_mean_ratio;
    }
    j["window"] = s.window;
    if (s.has_validation) {
        j["validation"] = {
            {"count", s.validation.ratios.size()}, {"mean", s.validation.mean},
            {"median", s.validation.median},       {"q1", s.validation.q1},
            {"q3", s.validation.q3},               {"min", s.validation.min},
            {"max", s.validation.max},
        };
    }
    j["config"] = {
        {"episodes_max", cfg.episodes_max},
        {"solve_window", cfg.solve_window},
        {"solve_threshold", cfg.solve_threshold},
        {"batch_size", cfg.batch_size},
        {"memory_capacity", cfg.memory_capacity},
        {"target_update_interval", cfg.target_update_interval},
        {"learning_rate", cfg.learning_rate},
        {"discount", cfg.discount},
        {"eps_start", cfg.eps_start},
        {"eps_end", cfg.eps_end},
        {"eps_decay", cfg.eps_decay},
        {"warm_up", cfg.warm_up},
        {"init_range", cfg.init_range},
        {"gradient_method", std::string(to_string(cfg.gradient))},
        {"threads", cfg.threads},
    };
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write summary file: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace qtour
