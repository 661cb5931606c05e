#include "relaynet/cli.hpp"

#include "relaynet/cf_constraints.hpp"
#include "relaynet/config_io.hpp"
#include "relaynet/errors.hpp"
#include "relaynet/experiments.hpp"
#include "relaynet/units.hpp"
#include "relaynet/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace relaynet::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::string strategies;
    std::string mode = "forall";
    std::string log_base = "2";
    bool db = false;
    int relay_cap = kDefaultPartitionCap;
    std::uint64_t seed = 1;
    int draws = 200;
    // sweep
    std::string gnuplot;
    int threads = 0;
    // probe
    std::vector<std::string> cases;
    double approach = 1e-3;
    double floor = 1e-2;
    // threshold
    double d23 = 0.05;
    double target = 0.97;
};

std::vector<Strategy> parse_strategies(const std::string& list)
{
    std::vector<Strategy> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty())
            out.push_back(strategy_from_string(item));
    if (out.empty())
        throw UsageError("--strategies is empty");
    return out;
}

json optional_number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json to_json(const RateResult& r)
{
    json j;
    j["strategy"] = to_string(r.strategy);
    j["column"] = column_name(r.strategy);
    j["rate"] = r.rate;
    if (r.alpha)
        j["alpha"] = *r.alpha;
    if (r.quantization) {
        json q = json::array();
        for (double v : r.quantization->values())
            q.push_back(optional_number(v));
        j["quantization"] = q;
    }
    j["binding"] = r.binding;
    j["converged"] = r.converged;
    if (r.sweeps > 0)
        j["sweeps"] = r.sweeps;
    return j;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback)
    {
        if (path.empty()) {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw ValidationError("cannot write '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

NetworkConfig require_config(const Options& o)
{
    if (o.config.empty())
        throw UsageError("--config is required");
    return load_config(o.config, o.db);
}

int cmd_rate(const Options& o, std::ostream& out, std::ostream& err)
{
    const NetworkConfig cfg = require_config(o);
    const RelayNetwork& net = cfg.network;
    std::vector<Strategy> strategies;
    if (!o.strategies.empty())
        strategies = parse_strategies(o.strategies);
    else if (net.node_count() == 3)
        strategies = {Strategy::cut_set, Strategy::decode_forward, Strategy::compress_forward,
                      Strategy::compress_forward_t2, Strategy::multihop};
    else
        strategies = {Strategy::compress_forward_t2, Strategy::broadcast_cut};

    const ConstraintMode mode = constraint_mode_from_string(o.mode);
    json doc;
    doc["unit"] = unit_name(log_base());
    doc["input_units"] = o.db ? "dB" : "linear";
    doc["mode"] = to_string(mode);
    doc["network"] = serialize_network(net, o.db);
    doc["results"] = json::array();
    bool converged = true;
    for (Strategy s : strategies) {
        const RateResult r = evaluate_strategy(net, s, mode, o.relay_cap);
        converged = converged && r.converged;
        doc["results"].push_back(to_json(r));
    }
    Output sink(o.out, out);
    *sink << doc.dump(2) << '\n';
    if (!converged) {
        err << "warning: quantisation search stopped before converging\n";
        return kNotConverged;
    }
    return kOk;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err)
{
    const NetworkConfig cfg = require_config(o);
    if (!cfg.sweep)
        throw ValidationError(o.config + ": config has no 'sweep' object");
    SweepSpec spec = *cfg.sweep;
    if (!o.strategies.empty())
        spec.strategies = parse_strategies(o.strategies);
    spec.mode = constraint_mode_from_string(o.mode);
    spec.relay_cap = o.relay_cap;
    if (o.threads > 0)
        spec.threads = o.threads;
    const auto rows = run_sweep(spec);
    {
        Output sink(o.out, out);
        write_sweep_csv(*sink, spec, rows);
    }
    if (!o.gnuplot.empty())
        for (const auto& path : write_gnuplot(o.gnuplot, spec, rows))
            err << "wrote " << path << '\n';
    for (const auto& row : rows)
        for (const auto& r : row.rates)
            if (!r.converged) {
                err << "warning: quantisation search stopped before converging at swept = "
                    << format_number(row.swept) << '\n';
                return kNotConverged;
            }
    return kOk;
}

int cmd_probe(const Options& o, std::ostream& out, std::ostream&)
{
    ProbeSettings settings;
    settings.thresholds.approach = o.approach;
    settings.thresholds.floor = o.floor;
    const auto cases = o.cases.empty() ? probe_case_ids() : o.cases;
    json doc = json::array();
    for (const auto& id : cases) {
        for (const auto& v : asymptotic_probe(id, settings)) {
            json j;
            j["case"] = v.case_id;
            j["model"] = to_string(v.model);
            j["strategy"] = to_string(v.strategy);
            j["direction"] = v.direction;
            j["probe"] = v.probe;
            j["gaps"] = v.gaps;
            j["verdict"] = to_string(v.verdict);
            j["expected"] = to_string(v.expected);
            j["matches"] = v.matches;
            doc.push_back(j);
        }
    }
    Output sink(o.out, out);
    *sink << doc.dump(2) << '\n';
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream&)
{
    const VerifyReport rep = run_verification(o.seed, o.draws);
    Output sink(o.out, out);
    std::ostream& s = *sink;
    s << "# generator std::mt19937_64 seed=" << rep.seed << " draws=" << rep.draws << '\n';
    for (const auto& suite : rep.suites) {
        s << suite.name << " passed=" << suite.passed << " failed=" << suite.failed
          << " worst=" << format_number(suite.worst) << '\n';
        if (!suite.ok())
            s << "  first failure: " << suite.first_failure << '\n';
    }
    s << "verify: " << (rep.ok() ? "PASS" : "FAIL") << '\n';
    return rep.ok() ? kOk : kVerifyFailed;
}

int cmd_threshold(const Options& o, std::ostream& out, std::ostream&)
{
    ThresholdSpec spec;
    if (!o.config.empty()) {
        const NetworkConfig cfg = load_config(o.config, o.db);
        const auto& geo = cfg.network.geometry();
        if (cfg.network.node_count() != 3 || !geo)
            throw ValidationError(o.config + ": threshold needs a T = 3 geometry config");
        spec.model = geo->model;
        spec.p1 = cfg.network.power(1);
        spec.n2 = cfg.network.noise(2);
        spec.n3 = cfg.network.noise(3);
        spec.d13 = distance(geo->positions[0], geo->positions[2]);
    }
    const ThresholdResult r = power_threshold(spec, o.d23, o.target);
    json doc;
    doc["model"] = to_string(spec.model.kind);
    doc["d23"] = o.d23;
    doc["target"] = o.target;
    doc["P2"] = r.p2;
    doc["P2_over_P1"] = r.p2 / spec.p1;
    doc["fraction"] = r.fraction;
    Output sink(o.out, out);
    *sink << doc.dump(2) << '\n';
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Achievable rates and bounds for Gaussian multiple relay channels", "relaynet"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options o;
    app.add_option("--config", o.config, "Network config (JSON)");
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--strategies", o.strategies, "Comma separated: cs,df,cf,cf_t2,mh,cinf");
    app.add_option("--mode", o.mode, "Constraint mode for cf_t2")->check(CLI::IsMember({"forall", "exists"}));
    app.add_option("--log-base", o.log_base, "Rate unit: 2 (bits) or e (nats)")->check(CLI::IsMember({"2", "e"}));
    app.add_flag("--db", o.db, "Config powers, noises and gains are in dB");
    app.add_option("--relay-cap", o.relay_cap, "Largest relay count for constraint enumeration")
        ->check(CLI::Range(1, 20));
    app.add_option("--seed", o.seed, "Seed for verify");
    app.add_option("--draws", o.draws, "Random draws per verify suite")->check(CLI::PositiveNumber);

    auto* rate = app.add_subcommand("rate", "Print per-strategy rates as JSON");
    auto* sweep = app.add_subcommand("sweep", "Run the config's sweep and write CSV");
    sweep->add_option("--gnuplot", o.gnuplot, "Also write <prefix>_<strategy>.dat files");
    sweep->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    auto* probe = app.add_subcommand("probe", "Asymptotic verdicts for the relay distance/power cases");
    probe->add_option("--case", o.cases, "Case ids (default all)")->delimiter(',');
    probe->add_option("--approach", o.approach, "Gap below which a case approaches")->check(CLI::PositiveNumber);
    probe->add_option("--floor", o.floor, "Gap above which a case is bounded away")->check(CLI::PositiveNumber);
    auto* verify = app.add_subcommand("verify", "Randomized invariant suites");
    auto* threshold = app.add_subcommand("threshold", "Relay power reaching a fraction of the cut-set bound");
    threshold->add_option("--d23", o.d23, "Relay-destination distance");
    threshold->add_option("--target", o.target, "Target fraction R_CF/R_CS");

    std::vector<const char*> argv{"relaynet"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInvalid;
    }

    const ScopedLogBase unit(o.log_base == "e" ? LogBase::e : LogBase::two);
    try {
        if (rate->parsed())
            return cmd_rate(o, out, err);
        if (sweep->parsed())
            return cmd_sweep(o, out, err);
        if (probe->parsed())
            return cmd_probe(o, out, err);
        if (verify->parsed())
            return cmd_verify(o, out, err);
        if (threshold->parsed())
            return cmd_threshold(o, out, err);
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << '\n';
        return kNotConverged;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kInvalid;
}

int run(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace relaynet::cli
