#include "relaynet/config_io.hpp"

#include "relaynet/errors.hpp"
#include "relaynet/units.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace relaynet {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what)
{
    throw ValidationError("config field '" + field + "': " + what);
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> known)
{
    std::set<std::string> ok(known.begin(), known.end());
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!ok.count(it.key()))
            bad(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
}

const json& need(const json& obj, const char* key, const std::string& where)
{
    const std::string field = where.empty() ? key : where + "." + key;
    if (!obj.contains(key))
        bad(field, "missing");
    return obj.at(key);
}

double number(const json& v, const std::string& field)
{
    if (!v.is_number())
        bad(field, "expected a number, got " + std::string(v.type_name()));
    return v.get<double>();
}

double maybe_db(double v, bool db) { return db ? db_to_linear(v) : v; }

std::vector<double> number_list(const json& v, const std::string& field, bool db)
{
    if (!v.is_array())
        bad(field, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k)
        out.push_back(maybe_db(number(v[k], field + "[" + std::to_string(k) + "]"), db));
    return out;
}

PathLossModel parse_path_loss(const json& v)
{
    if (!v.is_object())
        bad("path_loss", "expected an object");
    if (!need(v, "model", "path_loss").is_string())
        bad("path_loss.model", "expected a string");
    PathLossModel m;
    try {
        m.kind = path_loss_kind_from_string(v.at("model").get<std::string>());
    } catch (const Error& e) {
        bad("path_loss.model", e.what());
    }
    if (m.kind == PathLossKind::friis) {
        reject_unknown(v, "path_loss", {"model", "gain", "frequency"});
        m.antenna_gain = number(need(v, "gain", "path_loss"), "path_loss.gain");
        m.frequency = number(need(v, "frequency", "path_loss"), "path_loss.frequency");
    } else {
        reject_unknown(v, "path_loss", {"model", "kappa", "eta"});
        if (v.contains("kappa"))
            m.kappa = number(v.at("kappa"), "path_loss.kappa");
        if (v.contains("eta"))
            m.eta = number(v.at("eta"), "path_loss.eta");
    }
    try {
        m.validate();
    } catch (const ValidationError& e) {
        bad("path_loss", e.what());
    }
    return m;
}

Geometry parse_geometry(const json& v, const PathLossModel& model, std::size_t t)
{
    if (!v.is_object())
        bad("geometry", "expected an object");
    reject_unknown(v, "geometry", {"collinear", "positions"});
    Geometry g;
    g.model = model;
    if (v.contains("collinear") == v.contains("positions"))
        bad("geometry", "give exactly one of 'collinear' or 'positions'");
    if (v.contains("collinear")) {
        const auto xs = number_list(v.at("collinear"), "geometry.collinear", false);
        g = Geometry::collinear(xs, model);
    } else {
        const json& ps = v.at("positions");
        if (!ps.is_array())
            bad("geometry.positions", "expected an array");
        for (std::size_t k = 0; k < ps.size(); ++k) {
            const std::string field = "geometry.positions[" + std::to_string(k) + "]";
            if (!ps[k].is_array() || ps[k].size() != 2)
                bad(field, "expected [x, y]");
            g.positions.push_back({number(ps[k][0], field + "[0]"), number(ps[k][1], field + "[1]")});
        }
    }
    if (g.positions.size() != t)
        bad("geometry", "has " + std::to_string(g.positions.size()) + " nodes but T = " + std::to_string(t));
    return g;
}

GainMatrix parse_gains(const json& v, std::size_t t, bool db)
{
    if (!v.is_array() || v.size() != t)
        bad("gains", "expected a " + std::to_string(t) + " x " + std::to_string(t) + " matrix");
    GainMatrix g(t, std::vector<double>(t, 0.0));
    for (std::size_t i = 0; i < t; ++i) {
        const std::string row = "gains[" + std::to_string(i) + "]";
        if (!v[i].is_array() || v[i].size() != t)
            bad(row, "expected " + std::to_string(t) + " entries");
        for (std::size_t j = 0; j < t; ++j) {
            const json& e = v[i][j];
            if (e.is_null())
                continue;
            g[i][j] = maybe_db(number(e, row + "[" + std::to_string(j) + "]"), db);
        }
    }
    return g;
}

SweepSpec parse_sweep(const json& v, const RelayNetwork& net)
{
    if (!v.is_object())
        bad("sweep", "expected an object");
    reject_unknown(v, "sweep", {"variable", "grid", "range", "strategies", "mode", "relay_cap", "threads"});
    if (net.node_count() != 3)
        bad("sweep", "sweeps need T = 3");
    SweepSpec spec;
    const json& var = need(v, "variable", "sweep");
    if (!var.is_string())
        bad("sweep.variable", "expected a string");
    try {
        spec.variable = sweep_variable_from_string(var.get<std::string>());
    } catch (const Error& e) {
        bad("sweep.variable", e.what());
    }

    if (v.contains("grid") == v.contains("range"))
        bad("sweep", "give exactly one of 'grid' or 'range'");
    if (v.contains("grid")) {
        spec.grid = number_list(v.at("grid"), "sweep.grid", false);
    } else {
        const json& r = v.at("range");
        if (!r.is_object())
            bad("sweep.range", "expected an object");
        reject_unknown(r, "sweep.range", {"from", "to", "points", "scale"});
        const double from = number(need(r, "from", "sweep.range"), "sweep.range.from");
        const double to = number(need(r, "to", "sweep.range"), "sweep.range.to");
        const json& pts = need(r, "points", "sweep.range");
        if (!pts.is_number_integer())
            bad("sweep.range.points", "expected an integer");
        const json scale = r.value("scale", json("linear"));
        if (scale != "linear" && scale != "log")
            bad("sweep.range.scale", "expected 'linear' or 'log'");
        try {
            spec.grid = scale == "log" ? log_grid(from, to, pts.get<int>()) : linear_grid(from, to, pts.get<int>());
        } catch (const ValidationError& e) {
            bad("sweep.range", e.what());
        }
    }

    if (v.contains("strategies")) {
        const json& s = v.at("strategies");
        if (!s.is_array())
            bad("sweep.strategies", "expected an array of names");
        spec.strategies.clear();
        for (std::size_t k = 0; k < s.size(); ++k) {
            const std::string field = "sweep.strategies[" + std::to_string(k) + "]";
            if (!s[k].is_string())
                bad(field, "expected a string");
            try {
                spec.strategies.push_back(strategy_from_string(s[k].get<std::string>()));
            } catch (const Error& e) {
                bad(field, e.what());
            }
        }
    }
    if (v.contains("mode")) {
        try {
            spec.mode = constraint_mode_from_string(v.at("mode").get<std::string>());
        } catch (const std::exception& e) {
            bad("sweep.mode", e.what());
        }
    }
    if (v.contains("relay_cap"))
        spec.relay_cap = static_cast<int>(number(v.at("relay_cap"), "sweep.relay_cap"));
    if (v.contains("threads"))
        spec.threads = static_cast<int>(number(v.at("threads"), "sweep.threads"));

    const auto& geo = net.geometry();
    const bool line = geo && geo->positions[0].y == 0.0 && geo->positions[1].y == 0.0 &&
                      geo->positions[2].y == 0.0 && geo->positions[0].x <= geo->positions[1].x &&
                      geo->positions[1].x <= geo->positions[2].x;
    if (line) {
        spec.model = geo->model;
        spec.p1 = net.power(1);
        spec.p2 = net.power(2);
        spec.n2 = net.noise(2);
        spec.n3 = net.noise(3);
        spec.d13 = geo->positions[2].x - geo->positions[0].x;
        spec.relay_position = geo->positions[1].x - geo->positions[0].x;
    } else {
        if (spec.variable != SweepVariable::p2)
            bad("sweep.variable", "distance sweeps need a collinear geometry with the relay between source and destination");
        spec.base = net;
    }
    try {
        spec.validate();
    } catch (const ValidationError& e) {
        bad("sweep", e.what());
    }
    return spec;
}

} // namespace

RelayNetwork parse_network(const json& doc, bool db)
{
    if (!doc.is_object())
        throw ValidationError("config must be a JSON object");
    const json& tv = need(doc, "T", "");
    if (!tv.is_number_integer() || tv.get<long long>() < 2 || tv.get<long long>() > 64)
        bad("T", "expected an integer node count in [2, 64]");
    const auto t = static_cast<std::size_t>(tv.get<long long>());
    auto powers = number_list(need(doc, "powers", ""), "powers", db);
    auto noises = number_list(need(doc, "noises", ""), "noises", db);
    if (powers.size() != t - 1)
        bad("powers", "expected " + std::to_string(t - 1) + " entries (P1..P_{T-1})");
    if (noises.size() != t - 1)
        bad("noises", "expected " + std::to_string(t - 1) + " entries (N2..N_T)");

    const bool has_gains = doc.contains("gains");
    const bool has_geo = doc.contains("geometry");
    if (has_gains == has_geo)
        bad("gains", "give exactly one of 'gains' or 'geometry' + 'path_loss'");
    GainSource source;
    if (has_gains) {
        if (doc.contains("path_loss"))
            bad("path_loss", "only used together with 'geometry'");
        source = parse_gains(doc.at("gains"), t, db);
    } else {
        const PathLossModel model = parse_path_loss(need(doc, "path_loss", ""));
        source = parse_geometry(doc.at("geometry"), model, t);
    }
    return build_network(std::move(powers), std::move(noises), std::move(source));
}

json serialize_network(const RelayNetwork& net, bool db)
{
    auto conv = [db](double v) -> json {
        if (!db)
            return v;
        if (v == 0.0)
            return nullptr;
        return linear_to_db(v);
    };
    json doc;
    doc["T"] = net.node_count();
    doc["powers"] = json::array();
    for (double p : net.powers())
        doc["powers"].push_back(conv(p));
    doc["noises"] = json::array();
    for (double n : net.noises())
        doc["noises"].push_back(conv(n));
    if (const auto& geo = net.geometry()) {
        json ps = json::array();
        for (const auto& p : geo->positions)
            ps.push_back({p.x, p.y});
        doc["geometry"] = {{"positions", ps}};
        json pl;
        pl["model"] = to_string(geo->model.kind);
        if (geo->model.kind == PathLossKind::friis) {
            pl["gain"] = geo->model.antenna_gain;
            pl["frequency"] = geo->model.frequency;
        } else {
            pl["kappa"] = geo->model.kappa;
            pl["eta"] = geo->model.eta;
        }
        doc["path_loss"] = pl;
    } else {
        json rows = json::array();
        for (const auto& row : net.gain_matrix()) {
            json r = json::array();
            for (double g : row)
                r.push_back(db && g == 0.0 ? json(nullptr) : conv(g));
            rows.push_back(r);
        }
        doc["gains"] = rows;
    }
    return doc;
}

NetworkConfig parse_config(const json& doc, bool db)
{
    if (!doc.is_object())
        throw ValidationError("config must be a JSON object");
    reject_unknown(doc, "", {"T", "powers", "noises", "gains", "geometry", "path_loss", "sweep"});
    NetworkConfig cfg{parse_network(doc, db), std::nullopt};
    if (doc.contains("sweep"))
        cfg.sweep = parse_sweep(doc.at("sweep"), cfg.network);
    return cfg;
}

NetworkConfig parse_config_text(const std::string& text, bool db)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t k = 0; k < stop; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError("config is not valid JSON at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
    }
    return parse_config(doc, db);
}

NetworkConfig load_config(const std::string& path, bool db)
{
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str(), db);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

} // namespace relaynet
