// trustnet command-line front end: reproducible trust-network experiments
// with file-based inputs and CSV/JSON outputs.
//
// Exit codes: 0 success, 1 usage/config error, 2 input parse error,
// 3 numeric or validation failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trustnet/trustnet.hpp"

using nlohmann::json;
using namespace trustnet;

namespace {

// Seeds default to a fixed constant so documented examples reproduce
// exactly; wall-clock seeding would break that.
constexpr std::uint64_t kDefaultSeed = 1729;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(double v) { return detail::format_double(v); }

GammaSchedule schedule_from_options(const std::string& kind, const std::string& params,
                                    double gamma_bot) {
    const std::vector<double> p = parse_double_list(params);
    if (kind == "constant") {
        if (p.size() != 1)
            throw ConfigError("constant schedule needs gamma-params '<gamma>'");
        return GammaSchedule::constant(p[0], gamma_bot);
    }
    if (kind == "geometric") {
        if (p.size() != 2)
            throw ConfigError("geometric schedule needs gamma-params '<gamma1>,<rho>'");
        return GammaSchedule::geometric_approach(p[0], p[1], gamma_bot);
    }
    if (kind == "sleeper") {
        if (p.size() != 1 || p[0] < 1.0)
            throw ConfigError("sleeper schedule needs gamma-params '<threshold>'");
        return GammaSchedule::sleeper(static_cast<std::uint64_t>(p[0]), gamma_bot);
    }
    throw ConfigError("unknown gamma_kind '" + kind + "' (constant|geometric|sleeper)");
}

std::string schedule_param_string(const GammaSchedule& s) {
    switch (s.kind) {
    case GammaSchedule::Kind::Constant:
        return fmt(s.gamma);
    case GammaSchedule::Kind::GeometricApproach:
        return fmt(s.gamma1) + "," + fmt(s.rho);
    case GammaSchedule::Kind::Sleeper:
        return std::to_string(s.sleeper_threshold);
    }
    return "";
}

std::string gamma_kind_name(const GammaSchedule& s) {
    switch (s.kind) {
    case GammaSchedule::Kind::Constant: return "constant";
    case GammaSchedule::Kind::GeometricApproach: return "geometric";
    case GammaSchedule::Kind::Sleeper: return "sleeper";
    }
    return "";
}

json schedule_to_json(const GammaSchedule& s) {
    json j;
    j["kind"] = gamma_kind_name(s);
    j["gamma_bot"] = s.gamma_bot;
    j["params"] = schedule_param_string(s);
    return j;
}

std::size_t worker_count(std::size_t jobs) {
    std::size_t n = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("TRUSTNET_WORKERS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) n = static_cast<std::size_t>(parsed);
    }
    if (n == 0) n = 1;
    return std::min(n, jobs);
}

// Runs fn(i) for i in [0, jobs) across a small thread pool; results are
// indexed, so output order never depends on scheduling.
void parallel_for(std::size_t jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = worker_count(jobs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

// --- complete -----------------------------------------------------------

struct CompleteOpts {
    std::string input, output;
    double eta = 0.0;
    double epsilon = 1.0;
    std::size_t max_path_len = 8;
    std::string mode = "endorsement";
};

int run_complete(const CompleteOpts& o) {
    std::istringstream in(read_file(o.input));
    const TrustNetworkFile net = parse_network(in);
    const CompletionParams params{o.eta, o.epsilon, o.max_path_len};

    TrustNetworkFile out;
    if (o.mode == "endorsement") {
        out.recommendations = endorsement_complete(net.recommendations, net.endorsements, params);
    } else if (o.mode == "path") {
        out.endorsements = path_complete(net.endorsements, params);
    } else {
        throw ConfigError("mode must be 'endorsement' or 'path'");
    }

    std::ostringstream body;
    body << format_param_header("complete", {{"eta", fmt(o.eta)},
                                             {"epsilon", fmt(o.epsilon)},
                                             {"max-path-len", std::to_string(o.max_path_len)},
                                             {"mode", o.mode},
                                             {"input", o.input}});
    emit_network(body, out);
    atomic_write_file(o.output, body.str());
    return 0;
}

// --- reduce --------------------------------------------------------------

struct ReduceOpts {
    std::string input, output;
    std::string policy = "sum";
    std::string which = "rec";
};

ReducePolicy parse_policy(const std::string& p) {
    if (p == "sum") return ReducePolicy::Sum;
    if (p == "average") return ReducePolicy::Average;
    if (p == "last") return ReducePolicy::Last;
    throw ConfigError("policy must be sum|average|last");
}

int run_reduce(const ReduceOpts& o) {
    std::istringstream in(read_file(o.input));
    const TrustNetworkFile net = parse_network(in);
    const ReducePolicy policy = parse_policy(o.policy);
    TrustMatrix m;
    if (o.which == "rec") {
        m = reduce_to_matrix(net.recommendations, policy);
    } else if (o.which == "end") {
        m = reduce_to_matrix(net.endorsements, policy);
    } else {
        throw ConfigError("network must be 'rec' or 'end'");
    }
    std::ostringstream body;
    body << format_param_header("reduce", {{"policy", o.policy},
                                           {"network", o.which},
                                           {"input", o.input}});
    body << "id";
    for (const auto& col : m.col_ids) body << ',' << col;
    body << '\n';
    for (std::size_t r = 0; r < m.values.rows(); ++r) {
        body << m.row_ids[r];
        for (std::size_t c = 0; c < m.values.cols(); ++c) body << ',' << fmt(m.values(r, c));
        body << '\n';
    }
    atomic_write_file(o.output, body.str());
    return 0;
}

// --- simulate -------------------------------------------------------------

struct SimulateOpts {
    std::string config_path;
    std::string out_hist;
    std::string out_summary;
};

SimConfig sim_config_from_file(const KeyValueConfig& cfg) {
    SimConfig sim;
    sim.shops = cfg.require_u64("J");
    sim.alpha = cfg.require_double("alpha");
    const std::string kind = cfg.require("gamma_kind");
    const std::string params = cfg.get_or("gamma_params", kind == "constant" ? "1" : "");
    sim.schedule = schedule_from_options(kind, params, cfg.double_or("gamma_bot", 1.0));
    sim.steps = cfg.require_u64("steps");
    sim.seed = cfg.u64_or("seed", kDefaultSeed);
    const std::string init = cfg.get_or("init", "uniform-tau-one");
    if (init == "uniform-tau-one") {
        sim.init = InitMode::UniformTauOne;
    } else if (init == "from-sigma") {
        sim.init = InitMode::FromSigma;
        const std::string net_path = cfg.require("network");
        std::istringstream in(read_file(net_path));
        const TrustNetworkFile net = parse_network(in);
        const TrustMatrix a = reduce_to_matrix(net.recommendations);
        const std::vector<double> sigma(a.values.rows(), 1.0); // sigma_u = 1 at t = 0
        sim.initial_tau = derive_tau_from_sigma(sigma, a);
        sim.shops = sim.initial_tau.size();
    } else {
        throw ConfigError("init must be uniform-tau-one or from-sigma");
    }
    const std::string snap = cfg.get_or("snapshot", "geometric");
    if (snap == "geometric") {
        sim.snapshot = SnapshotPolicy::Geometric;
    } else if (snap == "final") {
        sim.snapshot = SnapshotPolicy::FinalOnly;
    } else {
        throw ConfigError("snapshot must be geometric or final");
    }
    return sim;
}

std::vector<std::pair<std::string, std::string>> sim_params_kv(const SimConfig& sim) {
    return {{"J", std::to_string(sim.shops)},
            {"alpha", fmt(sim.alpha)},
            {"gamma_kind", gamma_kind_name(sim.schedule)},
            {"gamma_params", schedule_param_string(sim.schedule)},
            {"gamma_bot", fmt(sim.schedule.gamma_bot)},
            {"steps", std::to_string(sim.steps)},
            {"seed", std::to_string(sim.seed)},
            {"init", sim.init == InitMode::UniformTauOne ? "uniform-tau-one" : "from-sigma"}};
}

int run_simulate(const SimulateOpts& o) {
    const KeyValueConfig cfg = KeyValueConfig::parse_file(o.config_path);
    const SimConfig sim = sim_config_from_file(cfg);
    const SimResult result = run_simulation(sim);

    std::ostringstream body;
    body << format_param_header("simulate", sim_params_kv(sim));
    body << "snapshot_t,rating,count\n";
    for (const auto& [t, hist] : result.snapshots)
        for (const auto& [rating, count] : hist.counts)
            body << t << ',' << rating << ',' << count << '\n';
    atomic_write_file(o.out_hist, body.str());

    if (!o.out_summary.empty()) {
        json summary;
        for (const auto& [k, v] : sim_params_kv(sim)) summary["params"][k] = v;
        summary["final"]["t"] = sim.steps;
        summary["final"]["total_trust"] = result.final_total;
        summary["final"]["replacements"] = result.replacements;
        summary["final"]["resets"] = result.resets;
        summary["final"]["distinct_ratings"] = result.final_histogram.counts.size();
        summary["final"]["max_rating"] = result.final_histogram.counts.rbegin()->first;
        summary["final"]["min_rating"] = result.final_histogram.counts.begin()->first;
        summary["snapshots"] = result.snapshots.size();
        atomic_write_file(o.out_summary, summary.dump(2) + "\n");
    }
    return 0;
}

// --- steady ----------------------------------------------------------------

struct SteadyOpts {
    double alpha = 0.1;
    std::string gamma_kind = "constant";
    std::string gamma_params = "1";
    double gamma_bot = 1.0;
    std::uint64_t n_max = 10000;
    std::string output;
};

int run_steady(const SteadyOpts& o) {
    SteadyStateParams params;
    params.alpha = o.alpha;
    params.schedule = schedule_from_options(o.gamma_kind, o.gamma_params, o.gamma_bot);
    const DensityTable rec = steady_state_recurrence(params, o.n_max);
    const DensityTable closed = steady_state_closed_form_table(params, o.n_max);
    const PowerLawAsymptote asym = power_law_asymptote(params);

    std::ostringstream body;
    body << format_param_header(
        "steady", {{"alpha", fmt(o.alpha)},
                   {"gamma_kind", o.gamma_kind},
                   {"gamma_params", o.gamma_params},
                   {"gamma_bot", fmt(o.gamma_bot)},
                   {"n_max", std::to_string(o.n_max)},
                   {"c", fmt(params.c())},
                   {"exponent", fmt(asym.exponent)},
                   {"G", fmt(asym.g_estimate)},
                   {"G_truncation_bound", fmt(asym.g_truncation_bound)},
                   {"power_law_applicable", asym.applicable ? "yes" : "no"}});
    body << "n,upsilon_recurrence,upsilon_closed,asymptote\n";
    for (std::uint64_t n = 1; n <= o.n_max; ++n) {
        body << n << ',' << fmt(rec.value(n)) << ',' << fmt(closed.value(n)) << ','
             << fmt(asym.density(n)) << '\n';
    }
    atomic_write_file(o.output, body.str());
    return 0;
}

// --- fit ---------------------------------------------------------------------

struct FitOpts {
    std::string input;
    std::string output;
    std::uint64_t x_min = 5;
};

json fit_to_json(const TailFit& fit) {
    json j;
    j["x_min"] = fit.x_min;
    j["n_tail"] = fit.n_tail;
    j["power"]["exponent"] = fit.power_exponent;
    j["power"]["loglik"] = fit.power_loglik;
    j["geometric"]["rate"] = fit.geometric_rate;
    j["geometric"]["loglik"] = fit.geometric_loglik;
    j["preferred"] = tail_model_name(fit.preferred);
    return j;
}

int run_fit(const FitOpts& o) {
    const RatingHistogram hist = parse_histogram_csv_file(o.input);
    const TailFit fit = fit_tail(hist, o.x_min);
    json out = fit_to_json(fit);
    out["params"]["input"] = o.input;
    out["params"]["x_min"] = o.x_min;
    atomic_write_file(o.output, out.dump(2) + "\n");
    return 0;
}

// --- communities ---------------------------------------------------------------

struct CommunitiesOpts {
    std::string input;
    std::string output;
    std::string tau_list;
    std::string personalized_csv;
    std::string policy = "sum";
    double grouping_tol = -1.0;
};

int run_communities(const CommunitiesOpts& o) {
    std::istringstream in(read_file(o.input));
    const TrustNetworkFile net = parse_network(in);
    const TrustMatrix tm = reduce_to_matrix(net.recommendations, parse_policy(o.policy));
    const CommunityDecomposition decomp = decompose(tm.values, o.grouping_tol);

    std::vector<double> tau;
    if (!o.tau_list.empty()) {
        tau = parse_double_list(o.tau_list);
        if (tau.size() != tm.col_ids.size())
            throw ConfigError("tau needs one entry per object (" +
                              std::to_string(tm.col_ids.size()) + ")");
    }

    json out;
    out["params"]["input"] = o.input;
    out["params"]["policy"] = o.policy;
    out["objects"] = tm.col_ids;
    out["recommenders"] = tm.row_ids;
    out["eigenvalues"] = decomp.eigenvalues;
    out["communities"] = json::array();
    for (std::size_t k = 0; k < decomp.communities(); ++k) {
        json c;
        c["index"] = k;
        c["eigenvalue"] = decomp.eigenvalues[k];
        const Matrix& p = decomp.projectors[k];
        double dim = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i) dim += p(i, i);
        c["dimension"] = std::llround(dim);
        // objects ranked by their projector weight
        std::vector<std::size_t> order(p.rows());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return p(a, a) > p(b, b); });
        json top = json::array();
        for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i) {
            if (p(order[i], order[i]) <= 1e-12) break;
            top.push_back({{"object", tm.col_ids[order[i]]},
                           {"weight", p(order[i], order[i])}});
        }
        c["top_objects"] = top;
        if (!tau.empty()) c["affinity"] = community_affinity(tau, decomp, k);
        out["communities"].push_back(c);
    }
    if (!tau.empty()) {
        out["tau"] = tau;
        out["tau_norm_sq"] = dot(tau, tau);
    }

    if (!o.personalized_csv.empty()) {
        if (tau.empty())
            throw ConfigError("--personalized needs --tau");
        const Matrix a_tau = personalized_matrix(tm.values, tau, decomp);
        std::ostringstream csv;
        csv << format_param_header("communities", {{"input", o.input},
                                                   {"policy", o.policy},
                                                   {"tau", o.tau_list}});
        csv << "id";
        for (const auto& col : tm.col_ids) csv << ',' << col;
        csv << '\n';
        for (std::size_t r = 0; r < a_tau.rows(); ++r) {
            csv << tm.row_ids[r];
            for (std::size_t c = 0; c < a_tau.cols(); ++c) csv << ',' << fmt(a_tau(r, c));
            csv << '\n';
        }
        atomic_write_file(o.personalized_csv, csv.str());
    }

    atomic_write_file(o.output, out.dump(2) + "\n");
    return 0;
}

// --- attack -----------------------------------------------------------------

struct AttackOpts {
    std::string input;
    std::string output;
    std::string summary;
    std::string fractions = "0.01,0.02,0.05";
    std::string strategies = "random,hubs";
    std::size_t seeds = 20;
    std::uint64_t base_seed = kDefaultSeed;
};

int run_attack(const AttackOpts& o) {
    const RatingHistogram hist = parse_histogram_csv_file(o.input);
    const std::vector<double> fractions = parse_double_list(o.fractions);

    std::vector<AttackStrategy> strategies;
    std::stringstream ss(o.strategies);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "random") strategies.push_back(AttackStrategy::Random);
        else if (item == "hubs") strategies.push_back(AttackStrategy::Hubs);
        else throw ConfigError("unknown strategy '" + item + "' (random|hubs)");
    }

    const AttackResult result =
        attack_experiment(hist, strategies, fractions, o.seeds, o.base_seed);

    std::ostringstream body;
    body << format_param_header("attack", {{"input", o.input},
                                           {"fractions", o.fractions},
                                           {"strategies", o.strategies},
                                           {"seeds", std::to_string(o.seeds)},
                                           {"base-seed", std::to_string(o.base_seed)}});
    body << "strategy,fraction,seed,giant_fraction\n";
    for (const auto& cell : result.cells)
        body << attack_strategy_name(cell.strategy) << ',' << fmt(cell.fraction) << ','
             << cell.seed << ',' << fmt(cell.giant_fraction) << '\n';
    atomic_write_file(o.output, body.str());

    if (!o.summary.empty()) {
        json j;
        j["params"]["fractions"] = o.fractions;
        j["params"]["strategies"] = o.strategies;
        j["params"]["seeds"] = o.seeds;
        j["params"]["base_seed"] = o.base_seed;
        j["summaries"] = json::array();
        for (const auto& s : result.summaries) {
            j["summaries"].push_back({{"strategy", attack_strategy_name(s.strategy)},
                                      {"fraction", s.fraction},
                                      {"mean_giant_fraction", s.mean},
                                      {"stddev", s.stddev}});
        }
        atomic_write_file(o.summary, j.dump(2) + "\n");
    }
    return 0;
}

// --- verify ------------------------------------------------------------------

struct VerifyOpts {
    std::uint64_t shops = 2000;
    double alpha = 0.1;
    std::uint64_t steps = 2000000;
    std::size_t seeds = 10;
    std::uint64_t x_min = 5;
    std::uint64_t base_seed = kDefaultSeed;
    std::string gamma_kind = "constant";
    std::string gamma_params = "1";
    double gamma_bot = 1.0;
    double exponent_tol = 0.25;
    double density_tol = 0.20;
    std::string out_prefix;
};

int run_verify(const VerifyOpts& o) {
    SteadyStateParams analytic;
    analytic.alpha = o.alpha;
    analytic.schedule = schedule_from_options(o.gamma_kind, o.gamma_params, o.gamma_bot);

    std::vector<RatingHistogram> hists(o.seeds);
    std::vector<double> exponents(o.seeds, 0.0);
    std::vector<std::string> fit_errors(o.seeds);
    parallel_for(o.seeds, [&](std::size_t i) {
        SimConfig sim;
        sim.shops = o.shops;
        sim.alpha = o.alpha;
        sim.schedule = analytic.schedule;
        sim.steps = o.steps;
        sim.seed = o.base_seed + i;
        sim.snapshot = SnapshotPolicy::FinalOnly;
        const SimResult r = run_simulation(sim);
        hists[i] = r.final_histogram;
        try {
            exponents[i] = fit_tail(r.final_histogram, o.x_min).power_exponent;
        } catch (const NumericError& e) {
            fit_errors[i] = e.what();
        }
    });

    // raw data: one final histogram per seed
    std::ostringstream raw;
    raw << format_param_header("verify", {{"J", std::to_string(o.shops)},
                                          {"alpha", fmt(o.alpha)},
                                          {"steps", std::to_string(o.steps)},
                                          {"seeds", std::to_string(o.seeds)},
                                          {"base-seed", std::to_string(o.base_seed)},
                                          {"gamma_kind", o.gamma_kind},
                                          {"gamma_params", o.gamma_params},
                                          {"gamma_bot", fmt(o.gamma_bot)}});
    raw << "seed,rating,count\n";
    for (std::size_t i = 0; i < o.seeds; ++i)
        for (const auto& [rating, count] : hists[i].counts)
            raw << (o.base_seed + i) << ',' << rating << ',' << count << '\n';
    atomic_write_file(o.out_prefix + "_hist.csv", raw.str());

    // pooled empirical densities over ratings >= 1, normalized
    std::map<std::uint64_t, double> pooled;
    double pooled_mass = 0.0;
    for (const auto& h : hists) {
        for (const auto& [rating, count] : h.counts) {
            if (rating < 1) continue;
            pooled[rating] += static_cast<double>(count);
            pooled_mass += static_cast<double>(count);
        }
    }

    const std::uint64_t n_max = 100000;
    const DensityTable table = steady_state_recurrence(analytic, n_max);
    double analytic_mass = 0.0;
    for (std::uint64_t n = 1; n <= n_max; ++n) analytic_mass += table.value(n);

    json report;
    report["params"] = {{"J", o.shops},         {"alpha", o.alpha},
                        {"steps", o.steps},     {"seeds", o.seeds},
                        {"x_min", o.x_min},     {"base_seed", o.base_seed},
                        {"schedule", schedule_to_json(analytic.schedule)},
                        {"exponent_tol", o.exponent_tol},
                        {"density_tol", o.density_tol}};
    report["analytic"]["c"] = analytic.c();
    report["analytic"]["exponent"] = analytic.tail_exponent();

    double exp_sum = 0.0;
    std::size_t exp_count = 0;
    json per_seed = json::array();
    for (std::size_t i = 0; i < o.seeds; ++i) {
        json row;
        row["seed"] = o.base_seed + i;
        if (fit_errors[i].empty()) {
            row["fitted_exponent"] = exponents[i];
            exp_sum += exponents[i];
            ++exp_count;
        } else {
            row["fit_error"] = fit_errors[i];
        }
        per_seed.push_back(row);
    }
    report["per_seed"] = per_seed;

    bool exponent_ok = false;
    if (exp_count > 0) {
        const double mean = exp_sum / static_cast<double>(exp_count);
        report["fitted_exponent_mean"] = mean;
        report["exponent_abs_error"] = std::fabs(mean - analytic.tail_exponent());
        exponent_ok = std::fabs(mean - analytic.tail_exponent()) <= o.exponent_tol;
    }
    report["exponent_ok"] = exponent_ok;

    json densities = json::array();
    bool densities_ok = true;
    for (std::uint64_t n = 2; n <= 8; ++n) {
        const double emp = pooled.count(n) && pooled_mass > 0.0
                               ? pooled[n] / pooled_mass : 0.0;
        const double ana = analytic_mass > 0.0 ? table.value(n) / analytic_mass : 0.0;
        const double rel = ana > 0.0 ? std::fabs(emp - ana) / ana
                                     : (emp == 0.0 ? 0.0 : HUGE_VAL);
        densities.push_back({{"rating", n},
                             {"empirical", emp},
                             {"analytic", ana},
                             {"relative_error", rel}});
        if (rel > o.density_tol) densities_ok = false;
    }
    report["densities"] = densities;
    report["densities_ok"] = densities_ok;
    report["verdict"] = exponent_ok && densities_ok ? "pass" : "fail";

    atomic_write_file(o.out_prefix + ".json", report.dump(2) + "\n");
    std::cout << "verify: exponent_ok=" << (exponent_ok ? "yes" : "no")
              << " densities_ok=" << (densities_ok ? "yes" : "no")
              << " report=" << o.out_prefix << ".json\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trust network modeling, simulation and analysis toolkit"};
    app.require_subcommand(1);

    CompleteOpts complete_opts;
    auto* complete = app.add_subcommand(
        "complete", "fold endorsement chains into a completed network");
    complete->add_option("input", complete_opts.input, "network file")->required();
    complete->add_option("output", complete_opts.output, "completed network file")->required();
    complete->add_option("--eta", complete_opts.eta, "trust threshold in [0,1]")->required();
    complete->add_option("--epsilon", complete_opts.epsilon, "composition penalty in [0,1]")
        ->required();
    complete->add_option("--max-path-len", complete_opts.max_path_len, "chain hop cap");
    complete->add_option("--mode", complete_opts.mode, "endorsement|path");

    ReduceOpts reduce_opts;
    auto* reduce = app.add_subcommand("reduce", "reduce a network to its trust matrix");
    reduce->add_option("input", reduce_opts.input, "network file")->required();
    reduce->add_option("output", reduce_opts.output, "matrix CSV")->required();
    reduce->add_option("--policy", reduce_opts.policy, "sum|average|last");
    reduce->add_option("--network", reduce_opts.which, "rec|end");

    SimulateOpts sim_opts;
    auto* simulate = app.add_subcommand("simulate", "run the trust-building process");
    simulate->add_option("--config", sim_opts.config_path, "key = value config file")
        ->required();
    simulate->add_option("--out", sim_opts.out_hist, "snapshot histogram CSV")->required();
    simulate->add_option("--summary", sim_opts.out_summary, "JSON summary");

    SteadyOpts steady_opts;
    auto* steady = app.add_subcommand("steady", "emit the analytic steady-state tables");
    steady->add_option("--alpha", steady_opts.alpha, "replacement probability");
    steady->add_option("--gamma-kind", steady_opts.gamma_kind, "constant|geometric|sleeper");
    steady->add_option("--gamma-params", steady_opts.gamma_params, "schedule parameters");
    steady->add_option("--gamma-bot", steady_opts.gamma_bot, "new-shop honesty probability");
    steady->add_option("--n-max", steady_opts.n_max, "table size");
    steady->add_option("output", steady_opts.output, "CSV output")->required();

    FitOpts fit_opts;
    auto* fit = app.add_subcommand("fit", "fit power/geometric models to a histogram tail");
    fit->add_option("input", fit_opts.input, "histogram CSV")->required();
    fit->add_option("output", fit_opts.output, "JSON report")->required();
    fit->add_option("--x-min", fit_opts.x_min, "tail cutoff");

    CommunitiesOpts comm_opts;
    auto* communities = app.add_subcommand("communities", "spectral trust-community report");
    communities->add_option("input", comm_opts.input, "network file")->required();
    communities->add_option("output", comm_opts.output, "JSON report")->required();
    communities->add_option("--tau", comm_opts.tau_list, "trust vector, comma separated");
    communities->add_option("--personalized", comm_opts.personalized_csv,
                            "write the personalized matrix CSV here");
    communities->add_option("--policy", comm_opts.policy, "reduction policy");
    communities->add_option("--grouping-tol", comm_opts.grouping_tol,
                            "eigenvalue grouping tolerance (default 1e-8 * lambda1)");

    AttackOpts attack_opts;
    auto* attack = app.add_subcommand("attack", "hub/random removal percolation experiment");
    attack->add_option("input", attack_opts.input, "histogram CSV")->required();
    attack->add_option("output", attack_opts.output, "per-cell CSV")->required();
    attack->add_option("--summary", attack_opts.summary, "JSON summary");
    attack->add_option("--fractions", attack_opts.fractions, "removal fractions");
    attack->add_option("--strategies", attack_opts.strategies, "random,hubs");
    attack->add_option("--seeds", attack_opts.seeds, "Monte Carlo seeds");
    attack->add_option("--seed", attack_opts.base_seed, "base seed");

    VerifyOpts verify_opts;
    auto* verify = app.add_subcommand(
        "verify", "simulate + steady + fit, with a pass/fail comparison report");
    verify->add_option("--J", verify_opts.shops, "shop count");
    verify->add_option("--alpha", verify_opts.alpha, "replacement probability");
    verify->add_option("--steps", verify_opts.steps, "ticks per simulation");
    verify->add_option("--seeds", verify_opts.seeds, "number of independent runs");
    verify->add_option("--x-min", verify_opts.x_min, "tail cutoff for fitting");
    verify->add_option("--seed", verify_opts.base_seed, "base seed");
    verify->add_option("--gamma-kind", verify_opts.gamma_kind, "constant|geometric|sleeper");
    verify->add_option("--gamma-params", verify_opts.gamma_params, "schedule parameters");
    verify->add_option("--gamma-bot", verify_opts.gamma_bot, "new-shop honesty probability");
    verify->add_option("--exponent-tol", verify_opts.exponent_tol,
                       "pass window around the theoretical exponent");
    verify->add_option("--density-tol", verify_opts.density_tol,
                       "pass window for the rating 2..8 densities");
    verify->add_option("--out", verify_opts.out_prefix, "output prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the usage message
        return 1;
    }

    try {
        if (*complete) return run_complete(complete_opts);
        if (*reduce) return run_reduce(reduce_opts);
        if (*simulate) return run_simulate(sim_opts);
        if (*steady) return run_steady(steady_opts);
        if (*fit) return run_fit(fit_opts);
        if (*communities) return run_communities(comm_opts);
        if (*attack) return run_attack(attack_opts);
        if (*verify) return run_verify(verify_opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
