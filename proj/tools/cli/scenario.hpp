#pragma once

// Scenario configuration: a flat, typed `section.key = value` text format
// describing the two hops, the OTFS grid, the Monte Carlo budget, and the
// SNR sweep. Presets encoding the published channel parameter sets ship under
// configs/.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "otfsop/fading.hpp"
#include "otfsop/montecarlo.hpp"
#include "otfsop/otfs.hpp"
#include "otfsop/outage.hpp"

namespace otfsop::cli {

// Config file problem; carries the offending field (or file) name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct LinkOneConfig {
    fading::SRParams sr;
    int antennas = 1;
    outage::LinkBudget budget;
    double snr_threshold_db = 0.0;

    friend bool operator==(const LinkOneConfig&, const LinkOneConfig&) = default;
};

struct LinkTwoConfig {
    fading::NakagamiParams nakagami;
    outage::LinkBudget budget;
    double snr_threshold_db = 0.0;
    // When set, the relay transmits at the configured fixed power instead of
    // tracking the swept satellite power.
    bool fixed_tx_power = false;

    friend bool operator==(const LinkTwoConfig&, const LinkTwoConfig&) = default;
};

struct SweepSpec {
    double snr_db_start = 0.0;
    double snr_db_stop = 0.0;
    double snr_db_step = 1.0;

    void validate() const;  // step > 0, start <= stop
    int points() const;
    double snr_db(int i) const { return snr_db_start + i * snr_db_step; }

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct ScenarioConfig {
    LinkOneConfig link1;
    LinkTwoConfig link2;
    otfs::Grid grid;
    mc::Config mc;
    SweepSpec sweep;

    void validate() const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// Parses config text; `origin` names the source in error messages.
// Throws ConfigError on unknown keys, missing required keys, type mismatches,
// or invariant violations.
ScenarioConfig parse_scenario(const std::string& text, const std::string& origin);

ScenarioConfig load_scenario(const std::string& path);

// Canonical serialization; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& c);

// Locale-independent shortest decimal that round-trips the double.
std::string format_double(double v);

}  // namespace otfsop::cli
