#pragma once

// Gaussian multiple-relay channel: node 1 is the source, node T the
// destination, nodes 2..T-1 are relays. Node j receives
//   Y_j = sum_{i != j, i < T} sqrt(gain(i, j)) X_i + Z_j,  Z_j ~ N(0, noise(j))
// with E[X_i^2] <= power(i). All quantities are linear (not dB).

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace relaynet {

enum class PathLossKind { friis, spl, mpl };

const char* to_string(PathLossKind kind) noexcept;
PathLossKind path_loss_kind_from_string(const std::string& name);

/// Distance-to-gain law. Friis uses (antenna_gain, frequency); SPL and MPL
/// use (kappa, eta).
struct PathLossModel {
    PathLossKind kind = PathLossKind::mpl;
    double antenna_gain = 1.0;
    double frequency = 1.0;
    double kappa = 1.0;
    double eta = 2.0;

    static PathLossModel friis(double antenna_gain, double frequency);
    static PathLossModel spl(double kappa = 1.0, double eta = 2.0);
    static PathLossModel mpl(double kappa = 1.0, double eta = 2.0);

    /// Throws ValidationError unless kappa > 0, eta >= 2, G > 0, f > 0.
    void validate() const;

    bool operator==(const PathLossModel&) const = default;
};

/// Friis: G/(4 pi f d)^2, SPL: kappa d^-eta, MPL: kappa (1+d)^-eta.
/// Throws DomainError for d < 0, and for d == 0 under SPL/Friis.
double path_loss_gain(const PathLossModel& model, double distance);

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

double distance(const Point& a, const Point& b) noexcept;

/// Node positions (index 0 is node 1) plus the law turning distances into gains.
struct Geometry {
    std::vector<Point> positions;
    PathLossModel model;

    /// Places nodes on the x axis.
    static Geometry collinear(const std::vector<double>& xs, const PathLossModel& model);

    bool operator==(const Geometry&) const = default;
};

/// Row-major T x T gains, entry [i-1][j-1] is the gain from node i to node j.
using GainMatrix = std::vector<std::vector<double>>;

using GainSource = std::variant<GainMatrix, Geometry>;

class RelayNetwork {
public:
    /// Number of nodes T (>= 2).
    int node_count() const noexcept { return node_count_; }

    /// Transmit power of node i, i in [1, T-1].
    double power(int node) const;
    /// Receiver noise of node j, j in [2, T].
    double noise(int node) const;
    /// Gain from node i to node j; 0 for pairs that do not exist.
    double gain(int from, int to) const;

    /// Relay node ids 2..T-1 in ascending order.
    std::vector<int> relays() const;

    const std::vector<double>& powers() const noexcept { return powers_; }
    const std::vector<double>& noises() const noexcept { return noises_; }
    GainMatrix gain_matrix() const;
    const std::optional<Geometry>& geometry() const noexcept { return geometry_; }

    /// Copy with the power of one transmitter replaced (re-validated).
    RelayNetwork with_power(int node, double power) const;

    bool operator==(const RelayNetwork&) const = default;

private:
    friend RelayNetwork build_network(std::vector<double>, std::vector<double>, GainSource);

    int node_count_ = 0;
    std::vector<double> powers_;  // node 1..T-1
    std::vector<double> noises_;  // node 2..T
    std::vector<double> gains_;   // T x T, row = transmitter
    std::optional<Geometry> geometry_;
};

/// Validates and assembles a network. `powers` holds P_1..P_{T-1}, `noises`
/// holds N_2..N_T. Gains come either verbatim from a matrix (entries that
/// would mean node 1 receiving, node T transmitting or self-links must be 0)
/// or from geometry through path_loss_gain. Throws ValidationError.
RelayNetwork build_network(std::vector<double> powers, std::vector<double> noises, GainSource source);

/// Three collinear nodes at 0, d12, d13.
RelayNetwork single_relay_line(double p1, double p2, double n2, double n3, double d12, double d13,
                               const PathLossModel& model);

/// Three nodes with explicit link gains.
RelayNetwork single_relay_gains(double p1, double p2, double n2, double n3, double g12, double g13,
                                double g23);

} // namespace relaynet
