#pragma once

// JSON network configs.
//
//   { "T": 3, "powers": [P1, P2], "noises": [N2, N3],
//     "gains": [[...], [...], [...]] }                 // row = transmitter
//
// or, instead of "gains",
//
//   "geometry": { "collinear": [0, 0.5, 1] }          // or "positions": [[x, y], ...]
//   "path_loss": { "model": "mpl", "kappa": 1, "eta": 2 }
//               { "model": "friis", "gain": 1, "frequency": 2.4e9 }
//
// An optional "sweep" object configures `relaynet sweep`:
//
//   "sweep": { "variable": "P2", "grid": [1, 2, 4]      // or
//              "range": { "from": 1, "to": 20, "points": 20, "scale": "linear" },
//              "strategies": ["cs", "df", "cf"], "mode": "forall" }
//
// With db = true, powers, noises and gains are read as dB; null gains mean
// no link.

#include "relaynet/channel_model.hpp"
#include "relaynet/experiments.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace relaynet {

struct NetworkConfig {
    RelayNetwork network;
    std::optional<SweepSpec> sweep;
};

RelayNetwork parse_network(const nlohmann::json& doc, bool db = false);
nlohmann::json serialize_network(const RelayNetwork& net, bool db = false);

/// Network plus optional sweep. Diagnostics name the offending field.
NetworkConfig parse_config(const nlohmann::json& doc, bool db = false);

/// Parses text; syntax errors report line and column.
NetworkConfig parse_config_text(const std::string& text, bool db = false);
NetworkConfig load_config(const std::string& path, bool db = false);

} // namespace relaynet
