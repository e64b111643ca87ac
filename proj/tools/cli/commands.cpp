#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cli/csv.hpp"
#include "cli/experiments.hpp"
#include "coupon/bounds.hpp"
#include "coupon/collector.hpp"
#include "coupon/coupling.hpp"
#include "coupon/errors.hpp"
#include "coupon/rng.hpp"
#include "coupon/version.hpp"

namespace coupon::cli {

using json = nlohmann::ordered_json;

int default_threads() {
    if (const char* s = std::getenv("COUPON_LAB_THREADS")) {
        int v = 0;
        auto [end, ec] = std::from_chars(s, s + std::char_traits<char>::length(s), v);
        if (ec == std::errc{} && *end == '\0' && v >= 0) return v;
    }
    return 1;
}

namespace {

struct Common {
    std::string out;
    std::string json_path;
    bool timing = false;
    int threads = -1;
    std::uint64_t seed = 0;
};

struct Opts {
    Common common;
    long long n = 0, m = 0;
    int J = 6;
    // pmf
    std::string engine = "convolution";
    double tail_eps = 1e-12;
    long long t_max = 0;
    bool shifted = false;
    // distance / bounds
    std::string target;
    std::vector<std::string> metrics;
    int R = 3;
    double quad_tol = 1e-10;
    bool no_measure = false;
    // couple
    std::string lemma = "uniform";
    int l = 2, r = 16, width = 2;
    long long trials = 100000;
    // sweep
    std::vector<long long> n_values;
    std::string m_rule;
    std::vector<std::string> targets;
};

int resolve_threads(int t) {
    const int v = t < 0 ? default_threads() : t;
    if (v == 0) return std::max(1u, std::thread::hardware_concurrency());
    return v;
}

Row violation_row(std::optional<long long> n, std::optional<long long> m, const std::string& target,
                  const std::string& what) {
    Row r;
    r.n = n;
    r.m = m;
    r.target = target;
    r.preconditions_met = false;
    r.note = what;
    return r;
}

// m from an "<kind>:<value>" rule
long long apply_rule(const std::string& rule, long long n) {
    const auto colon = rule.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("m-rule must look like kind:value");
    const std::string kind = rule.substr(0, colon), arg = rule.substr(colon + 1);
    double v = 0;
    auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), v);
    if (ec != std::errc{} || end != arg.data() + arg.size())
        throw std::invalid_argument("m-rule: bad value '" + arg + "'");
    if (kind == "fixed") return std::llround(v);
    if (kind == "ratio") return static_cast<long long>(std::ceil(v * static_cast<double>(n) - 1e-9));
    if (kind == "poisson") return n - static_cast<long long>(std::ceil(std::sqrt(2 * v * static_cast<double>(n))));
    if (kind == "offset") return n - std::llround(v);
    throw std::invalid_argument("m-rule: unknown kind '" + kind + "' (fixed, ratio, poisson, offset)");
}

// Runs f(i) for i in [0, count) on `threads` workers; results keep index order.
template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
        });
}

void add_common(CLI::App* sub, Common& c, bool threads) {
    sub->add_option("-o,--out", c.out, "CSV output path (default: stdout)");
    sub->add_option("--json", c.json_path, "JSON sidecar path (default: <out>.json when --out is set)");
    sub->add_flag("--timing", c.timing, "fill the runtime_ms column (output is then not reproducible)");
    if (threads) sub->add_option("--threads", c.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
}

void add_nm(CLI::App* sub, Opts& o) {
    sub->add_option("-n,--n", o.n, "number of coupons")->required();
    sub->add_option("-m,--m", o.m, "coupons allowed missing")->required();
}

json config_json(const std::string& cmd, const Opts& o) {
    json c;
    if (cmd == "moments" || cmd == "pmf" || cmd == "distance" || cmd == "bounds") {
        c["n"] = o.n;
        c["m"] = o.m;
    }
    if (cmd == "moments") c["J"] = o.J;
    if (cmd == "pmf") {
        c["engine"] = o.engine;
        c["tail_eps"] = o.tail_eps;
        c["t_max"] = o.t_max;
        c["shifted"] = o.shifted;
    }
    if (cmd == "distance" || cmd == "bounds" || cmd == "sweep") {
        c["tail_eps"] = o.tail_eps;
        c["quad_tol"] = o.quad_tol;
        c["R"] = o.R;
    }
    if (cmd == "distance") {
        c["target"] = o.target;
        c["metrics"] = o.metrics;
    }
    if (cmd == "bounds") c["measure"] = !o.no_measure;
    if (cmd == "couple") {
        c["lemma"] = o.lemma;
        if (o.lemma == "embedding") {
            c["n"] = o.n;
            c["m"] = o.m;
        } else {
            c["l"] = o.l;
            c["r"] = o.r;
            c["width"] = o.width;
        }
        c["trials"] = o.trials;
    }
    if (cmd == "sweep") {
        c["n_values"] = o.n_values;
        c["m_rule"] = o.m_rule;
        c["targets"] = o.targets;
        c["metrics"] = o.metrics;
    }
    return c;
}

std::vector<Row> cmd_moments(const Opts& o) { return moment_rows(make_params(o.n, o.m), o.J); }

std::vector<Row> cmd_pmf(const Opts& o) {
    const auto p = make_params(o.n, o.m);
    LatticePMF w;
    if (o.engine == "convolution")
        w = exact_pmf_convolution(p, o.tail_eps);
    else if (o.engine == "markov")
        w = exact_pmf_markov(p, static_cast<int>(o.t_max > 0 ? o.t_max : 10LL * p.needed() + 50));
    else
        throw std::invalid_argument("unknown engine '" + o.engine + "' (convolution, markov)");
    if (o.shifted) w = shifted_law(w, p);
    std::vector<Row> rows;
    const std::string regime(to_string(classify_regime(p)));
    for (auto k = w.first(); k <= w.last(); ++k) {
        Row r;
        r.n = p.n;
        r.m = p.m;
        r.regime = regime;
        r.target = o.shifted ? "shifted_waiting_time" : "waiting_time";
        r.metric = "pmf";
        r.k = k;
        r.value = w.at(k);
        rows.push_back(r);
    }
    Row t = rows.back();
    t.metric = "tail_deficit";
    t.k.reset();
    t.value = w.tail_deficit;
    t.note = o.engine;
    rows.push_back(t);
    return rows;
}

EvalOptions eval_options(const Opts& o) {
    EvalOptions e;
    e.tail_eps = o.tail_eps;
    e.quad_tol = o.quad_tol;
    e.R = o.R;
    e.timing = o.common.timing;
    return e;
}

std::vector<Row> cmd_distance(const Opts& o) {
    const auto t = parse_target(o.target);
    for (const auto& m : o.metrics) {
        const auto& sup = supported_metrics(t);
        if (std::find(sup.begin(), sup.end(), m) == sup.end())
            throw std::invalid_argument("metric '" + m + "' is not available for target '" + o.target + "'");
    }
    return evaluate(make_params(o.n, o.m), t, o.metrics, eval_options(o));
}

std::vector<Row> cmd_bounds(const Opts& o) {
    return bound_rows(make_params(o.n, o.m), eval_options(o), !o.no_measure);
}

std::vector<Row> cmd_couple(const Opts& o) {
    if (o.trials <= 0) throw std::invalid_argument("--trials must be positive");
    SimConfig cfg;
    cfg.seed = o.common.seed;
    cfg.trials = o.trials;
    cfg.threads = resolve_threads(o.common.threads);

    SimResult res;
    LatticePMF marginal;
    std::string params_note;
    std::optional<CollectorParams> p;
    if (o.lemma == "uniform") {
        if (o.l < 1 || o.r < 2) throw precondition_error("uniform coupling: requires l >= 1, r >= 2");
        res = simulate_uniform_embedding(o.l, o.r, cfg);
        marginal = uniform_sum_law(2 * o.l, o.r);
        params_note = "l=" + std::to_string(o.l) + "; r=" + std::to_string(o.r);
    } else if (o.lemma == "mineka") {
        if (o.width < 1 || o.r < 1) throw precondition_error("mineka: requires width >= 1, r >= 1");
        std::vector<LatticePMF> steps(static_cast<std::size_t>(o.r), uniform_law(1, o.width));
        res = simulate_mineka(steps, cfg);
        if (o.width == 2) res.bound = mineka_uniform_bound(o.r);
        marginal = uniform_sum_law(o.width, o.r);
        params_note = "width=" + std::to_string(o.width) + "; r=" + std::to_string(o.r);
    } else if (o.lemma == "embedding") {
        p = make_params(o.n, o.m);
        res = estimate_d_tv_shift_for_waiting_time(*p, cfg);
        marginal = partial_sum_law(*p, p->m + 1, 2 * p->m);
        const auto plan = embedding_plan(*p);
        params_note = "l=" + std::to_string(plan.l) + "; p=" + format_number(plan.p);
    } else {
        throw std::invalid_argument("unknown lemma '" + o.lemma + "' (uniform, mineka, embedding)");
    }

    std::vector<Row> rows;
    auto row = [&](std::string metric) {
        Row r;
        if (p) {
            r.n = p->n;
            r.m = p->m;
            r.regime = std::string(to_string(classify_regime(*p)));
        }
        r.target = "coupling_" + o.lemma;
        r.metric = std::move(metric);
        r.note = params_note;
        return r;
    };
    Row t = row("p_T_gt_r");
    t.value = res.p_T_gt_r;
    t.std_err = res.std_err;
    if (res.bound) t.bound = *res.bound;
    t.preconditions_met = true;
    rows.push_back(t);
    if (res.exact_d_tv) {
        Row r = row("exact_d_tv");
        r.value = *res.exact_d_tv;
        rows.push_back(r);
    }
    if (o.lemma == "uniform") {
        Row r = row("branch_rate");
        r.value = static_cast<double>(res.branch_hits) / static_cast<double>(res.trials);
        r.std_err = std::sqrt(*r.value * (1 - *r.value) / static_cast<double>(res.trials));
        r.note += "; expected=" + format_number(1.0 / (2 * o.l));
        rows.push_back(r);
    }
    Row c1 = row("chi2_pvalue_first");
    c1.value = chi_square_pvalue(res.first, marginal);
    rows.push_back(c1);
    Row c2 = row("chi2_pvalue_second");
    c2.value = chi_square_pvalue(res.second, marginal);
    rows.push_back(c2);
    return rows;
}

// Returns the rows and whether any (n, m) violated a precondition.
std::pair<std::vector<Row>, bool> cmd_sweep(const Opts& o) {
    if (o.n_values.empty()) throw std::invalid_argument("sweep: --n-values is empty");
    if (o.targets.empty()) throw std::invalid_argument("sweep: --targets is empty");
    std::vector<Target> targets;
    for (const auto& t : o.targets) targets.push_back(parse_target(t));
    static const std::vector<std::string> known{"d_tv", "d_k", "sup_local"};
    for (const auto& m : o.metrics)
        if (std::find(known.begin(), known.end(), m) == known.end())
            throw std::invalid_argument("unknown metric '" + m + "'");
    std::vector<long long> ms;
    for (auto n : o.n_values) ms.push_back(apply_rule(o.m_rule, n));

    struct Task {
        long long n, m;
        Target t;
    };
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < o.n_values.size(); ++i)
        for (auto t : targets) tasks.push_back({o.n_values[i], ms[i], t});

    const auto opt = eval_options(o);
    std::vector<std::vector<Row>> out(tasks.size());
    std::vector<char> violated(tasks.size(), 0);
    std::vector<std::string> numerical(tasks.size());
    parallel_for(tasks.size(), resolve_threads(o.common.threads), [&](std::size_t i) {
        const auto& task = tasks[i];
        try {
            out[i] = evaluate(make_params(task.n, task.m), task.t, o.metrics, opt);
        } catch (const precondition_error& e) {
            out[i] = {violation_row(task.n, task.m, std::string(to_string(task.t)), e.what())};
            violated[i] = 1;
        } catch (const numerical_error& e) {
            numerical[i] = e.what();
        }
    });
    for (const auto& e : numerical)
        if (!e.empty()) throw numerical_error(e);

    std::vector<Row> rows;
    for (auto& v : out)
        for (auto& r : v) rows.push_back(std::move(r));
    return {rows, std::any_of(violated.begin(), violated.end(), [](char c) { return c != 0; })};
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"coupon-lab: exact laws, approximations and error bounds for the coupon collector"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));
    Opts o;

    auto* moments = app.add_subcommand("moments", "mean, variance and the lambda/a sums");
    add_nm(moments, o);
    add_common(moments, o.common, false);
    moments->add_option("--J", o.J, "highest power in the j-indexed sums")->check(CLI::Range(2, 64));

    auto* pmf = app.add_subcommand("pmf", "exact law of the waiting time");
    add_nm(pmf, o);
    add_common(pmf, o.common, false);
    pmf->add_option("--engine", o.engine, "convolution or markov");
    pmf->add_option("--tail-eps", o.tail_eps, "right-tail mass allowed to be cut (convolution)");
    pmf->add_option("--t-max", o.t_max, "last draw count (markov)");
    pmf->add_flag("--shifted", o.shifted, "report W - (n-m)");

    auto* distance = app.add_subcommand("distance", "distance between the exact law and one approximation");
    add_nm(distance, o);
    add_common(distance, o.common, false);
    distance->add_option("--target", o.target, "normal, gumbel, gumbel_corrected, poisson, poisson_mean, "
                                               "poisson_corrected, compound_poisson, poisson_charlier, shift")
        ->required();
    distance->add_option("--metric", o.metrics, "d_tv, d_k, sup_local (default: all the target supports)");
    distance->add_option("--R", o.R, "Poisson-Charlier order")->check(CLI::Range(3, 12));
    distance->add_option("--quad-tol", o.quad_tol, "tolerance for the correction term");
    distance->add_option("--tail-eps", o.tail_eps, "truncation of the exact law");

    auto* bounds = app.add_subcommand("bounds", "every bound for (n, m) next to its measured distance");
    add_nm(bounds, o);
    add_common(bounds, o.common, false);
    bounds->add_option("--R", o.R, "Poisson-Charlier order")->check(CLI::Range(3, 12));
    bounds->add_option("--quad-tol", o.quad_tol, "tolerance for the correction term");
    bounds->add_option("--tail-eps", o.tail_eps, "truncation of the exact law");
    bounds->add_flag("--no-measure", o.no_measure, "only evaluate the bounds");

    auto* couple = app.add_subcommand("couple", "coupling simulations");
    add_common(couple, o.common, true);
    couple->add_option("--lemma", o.lemma, "uniform, mineka or embedding");
    couple->add_option("--l", o.l, "uniform{1..2l} steps (uniform)");
    couple->add_option("--r", o.r, "number of steps (uniform, mineka)");
    couple->add_option("--width", o.width, "uniform{1..width} steps (mineka)");
    couple->add_option("-n,--n", o.n, "number of coupons (embedding)");
    couple->add_option("-m,--m", o.m, "coupons allowed missing (embedding)");
    couple->add_option("--trials", o.trials, "Monte Carlo trials");
    couple->add_option("--seed", o.common.seed, "RNG seed");

    auto* sweep = app.add_subcommand("sweep", "distances over a grid of n");
    add_common(sweep, o.common, true);
    sweep->add_option("--n-values", o.n_values, "list of n")->delimiter(',');
    sweep->add_option("--m-rule", o.m_rule, "fixed:M, ratio:RHO, poisson:LAMBDA or offset:C")->required();
    sweep->add_option("--targets", o.targets, "approximation families")->delimiter(',')->required();
    sweep->add_option("--metrics", o.metrics, "d_tv, d_k, sup_local (default: all)")->delimiter(',');
    sweep->add_option("--R", o.R, "Poisson-Charlier order")->check(CLI::Range(3, 12));
    sweep->add_option("--quad-tol", o.quad_tol, "tolerance for the correction term");
    sweep->add_option("--tail-eps", o.tail_eps, "truncation of the exact law");
    sweep->add_option("--seed", o.common.seed, "recorded in the sidecar");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_args;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string cmd = sub->get_name();

    std::vector<Row> rows;
    int code = exit_ok;
    try {
        if (cmd == "moments")
            rows = cmd_moments(o);
        else if (cmd == "pmf")
            rows = cmd_pmf(o);
        else if (cmd == "distance")
            rows = cmd_distance(o);
        else if (cmd == "bounds")
            rows = cmd_bounds(o);
        else if (cmd == "couple")
            rows = cmd_couple(o);
        else {
            auto [r, bad] = cmd_sweep(o);
            rows = std::move(r);
            if (bad) code = exit_precondition;
        }
    } catch (const precondition_error& e) {
        err << "precondition violated: " << e.what() << '\n';
        std::optional<long long> n, m;
        if (cmd != "couple" || o.lemma == "embedding") n = o.n, m = o.m;
        rows = {violation_row(n, m, cmd == "distance" ? o.target : cmd, e.what())};
        code = exit_precondition;
    } catch (const numerical_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_args;
    }

    if (o.common.out.empty()) {
        write_csv(out, rows);
    } else {
        std::ofstream f(o.common.out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << o.common.out << '\n';
            return exit_args;
        }
        write_csv(f, rows);
    }

    std::string side = o.common.json_path;
    if (side.empty() && !o.common.out.empty()) side = o.common.out + ".json";
    if (!side.empty()) {
        json j;
        j["tool"] = "coupon-lab";
        j["version"] = std::string(version);
        j["command"] = cmd;
        j["config"] = config_json(cmd, o);
        j["seed"] = o.common.seed;
        j["rng"] = std::string(rng_version);
        if (cmd == "couple" || cmd == "sweep") j["threads"] = resolve_threads(o.common.threads);
        j["timing"] = o.common.timing;
        j["rows"] = rows.size();
        j["exit_code"] = code;
        std::ofstream f(side, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << side << '\n';
            return exit_args;
        }
        f << j.dump(2) << '\n';
    }
    return code;
}

} // namespace coupon::cli
