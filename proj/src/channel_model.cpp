#include "relaynet/channel_model.hpp"

#include "relaynet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace relaynet {

const char* to_string(PathLossKind kind) noexcept
{
    switch (kind) {
    case PathLossKind::friis: return "Friis";
    case PathLossKind::spl: return "SPL";
    case PathLossKind::mpl: return "MPL";
    }
    return "?";
}

PathLossKind path_loss_kind_from_string(const std::string& name)
{
    std::string lower;
    std::transform(name.begin(), name.end(), std::back_inserter(lower),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "friis") return PathLossKind::friis;
    if (lower == "spl") return PathLossKind::spl;
    if (lower == "mpl") return PathLossKind::mpl;
    throw ValidationError("unknown path loss model '" + name + "' (expected Friis, SPL or MPL)");
}

PathLossModel PathLossModel::friis(double antenna_gain, double frequency)
{
    PathLossModel m;
    m.kind = PathLossKind::friis;
    m.antenna_gain = antenna_gain;
    m.frequency = frequency;
    m.validate();
    return m;
}

PathLossModel PathLossModel::spl(double kappa, double eta)
{
    PathLossModel m;
    m.kind = PathLossKind::spl;
    m.kappa = kappa;
    m.eta = eta;
    m.validate();
    return m;
}

PathLossModel PathLossModel::mpl(double kappa, double eta)
{
    PathLossModel m;
    m.kind = PathLossKind::mpl;
    m.kappa = kappa;
    m.eta = eta;
    m.validate();
    return m;
}

void PathLossModel::validate() const
{
    if (kind == PathLossKind::friis) {
        if (!(antenna_gain > 0.0) || !std::isfinite(antenna_gain))
            throw ValidationError("Friis antenna gain must be positive and finite");
        if (!(frequency > 0.0) || !std::isfinite(frequency))
            throw ValidationError("Friis carrier frequency must be positive and finite");
        return;
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw ValidationError("path loss kappa must be positive and finite");
    if (!(eta >= 2.0) || !std::isfinite(eta))
        throw ValidationError("path loss exponent eta must be >= 2");
}

double path_loss_gain(const PathLossModel& model, double d)
{
    model.validate();
    if (std::isnan(d) || d < 0.0)
        throw DomainError("path loss distance must be >= 0");
    switch (model.kind) {
    case PathLossKind::friis: {
        if (d == 0.0)
            throw DomainError("Friis gain diverges at distance 0");
        const double denom = 4.0 * std::numbers::pi * model.frequency * d;
        return model.antenna_gain / (denom * denom);
    }
    case PathLossKind::spl:
        if (d == 0.0)
            throw DomainError("SPL gain diverges at distance 0");
        return model.kappa * std::pow(d, -model.eta);
    case PathLossKind::mpl:
        return model.kappa * std::pow(1.0 + d, -model.eta);
    }
    throw DomainError("unknown path loss model");
}

double distance(const Point& a, const Point& b) noexcept
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

Geometry Geometry::collinear(const std::vector<double>& xs, const PathLossModel& model)
{
    Geometry g;
    g.model = model;
    g.positions.reserve(xs.size());
    for (double x : xs)
        g.positions.push_back({x, 0.0});
    return g;
}

double RelayNetwork::power(int node) const
{
    if (node < 1 || node > node_count_ - 1)
        throw UsageError("node " + std::to_string(node) + " does not transmit");
    return powers_[static_cast<std::size_t>(node - 1)];
}

double RelayNetwork::noise(int node) const
{
    if (node < 2 || node > node_count_)
        throw UsageError("node " + std::to_string(node) + " does not receive");
    return noises_[static_cast<std::size_t>(node - 2)];
}

double RelayNetwork::gain(int from, int to) const
{
    if (from < 1 || from > node_count_ || to < 1 || to > node_count_)
        throw UsageError("gain index out of range");
    return gains_[static_cast<std::size_t>((from - 1) * node_count_ + (to - 1))];
}

std::vector<int> RelayNetwork::relays() const
{
    std::vector<int> out;
    for (int k = 2; k < node_count_; ++k)
        out.push_back(k);
    return out;
}

GainMatrix RelayNetwork::gain_matrix() const
{
    const auto t = static_cast<std::size_t>(node_count_);
    GainMatrix m(t, std::vector<double>(t, 0.0));
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j)
            m[i][j] = gains_[i * t + j];
    return m;
}

RelayNetwork RelayNetwork::with_power(int node, double p) const
{
    auto powers = powers_;
    if (node < 1 || node > node_count_ - 1)
        throw UsageError("node " + std::to_string(node) + " does not transmit");
    powers[static_cast<std::size_t>(node - 1)] = p;
    if (geometry_)
        return build_network(std::move(powers), noises_, *geometry_);
    return build_network(std::move(powers), noises_, gain_matrix());
}

namespace {

bool link_exists(int from, int to, int t) noexcept
{
    return from != to && from < t && to > 1;
}

void check_positive(const std::vector<double>& values, const char* what, int first_node)
{
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double v = values[k];
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError(std::string(what) + " of node " +
                                  std::to_string(first_node + static_cast<int>(k)) +
                                  " must be positive and finite");
    }
}

} // namespace

RelayNetwork build_network(std::vector<double> powers, std::vector<double> noises, GainSource source)
{
    if (powers.empty())
        throw ValidationError("a network needs at least two nodes");
    if (noises.size() != powers.size())
        throw ValidationError("expected " + std::to_string(powers.size()) + " noises (nodes 2..T), got " +
                              std::to_string(noises.size()));
    check_positive(powers, "power", 1);
    check_positive(noises, "noise", 2);

    RelayNetwork net;
    net.node_count_ = static_cast<int>(powers.size()) + 1;
    const int t = net.node_count_;
    const auto tu = static_cast<std::size_t>(t);
    net.gains_.assign(tu * tu, 0.0);

    if (const auto* matrix = std::get_if<GainMatrix>(&source)) {
        if (matrix->size() != tu)
            throw ValidationError("gain matrix must have " + std::to_string(t) + " rows");
        for (int i = 1; i <= t; ++i) {
            const auto& row = (*matrix)[static_cast<std::size_t>(i - 1)];
            if (row.size() != tu)
                throw ValidationError("gain matrix row " + std::to_string(i) + " must have " +
                                      std::to_string(t) + " entries");
            for (int j = 1; j <= t; ++j) {
                const double g = row[static_cast<std::size_t>(j - 1)];
                if (std::isnan(g) || g < 0.0 || !std::isfinite(g))
                    throw ValidationError("gain " + std::to_string(i) + "->" + std::to_string(j) +
                                          " must be finite and >= 0");
                if (!link_exists(i, j, t) && g != 0.0)
                    throw ValidationError("gain " + std::to_string(i) + "->" + std::to_string(j) +
                                          " must be 0 (no such link)");
                net.gains_[static_cast<std::size_t>((i - 1) * t + (j - 1))] = g;
            }
        }
    } else {
        auto& geo = std::get<Geometry>(source);
        if (geo.positions.size() != tu)
            throw ValidationError("geometry must place " + std::to_string(t) + " nodes");
        geo.model.validate();
        for (int i = 1; i <= t; ++i) {
            for (int j = 1; j <= t; ++j) {
                if (!link_exists(i, j, t))
                    continue;
                const double d = distance(geo.positions[static_cast<std::size_t>(i - 1)],
                                          geo.positions[static_cast<std::size_t>(j - 1)]);
                double g = 0.0;
                try {
                    g = path_loss_gain(geo.model, d);
                } catch (const DomainError& e) {
                    throw ValidationError("link " + std::to_string(i) + "->" + std::to_string(j) + ": " +
                                          e.what());
                }
                if (!std::isfinite(g))
                    throw ValidationError("link " + std::to_string(i) + "->" + std::to_string(j) +
                                          " has a non-finite gain");
                net.gains_[static_cast<std::size_t>((i - 1) * t + (j - 1))] = g;
            }
        }
        net.geometry_ = std::move(geo);
    }
    net.powers_ = std::move(powers);
    net.noises_ = std::move(noises);
    return net;
}

RelayNetwork single_relay_line(double p1, double p2, double n2, double n3, double d12, double d13,
                               const PathLossModel& model)
{
    if (!(d12 >= 0.0) || !(d12 <= d13))
        throw ValidationError("relay must lie between source and destination (0 <= d12 <= d13)");
    return build_network({p1, p2}, {n2, n3}, Geometry::collinear({0.0, d12, d13}, model));
}

RelayNetwork single_relay_gains(double p1, double p2, double n2, double n3, double g12, double g13,
                                double g23)
{
    return build_network({p1, p2}, {n2, n3},
                         GainMatrix{{0.0, g12, g13}, {0.0, 0.0, g23}, {0.0, 0.0, 0.0}});
}

} // namespace relaynet
