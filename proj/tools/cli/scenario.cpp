#include "cli/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace otfsop::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

class KeyValueReader {
public:
    KeyValueReader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(origin_ + ":" + std::to_string(lineno),
                                  "expected `section.key = value`");
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw ConfigError(origin_ + ":" + std::to_string(lineno),
                                  "expected `section.key = value`");
            }
            if (values_.count(key)) {
                throw ConfigError(key, "duplicate key");
            }
            values_[key] = value;
        }
    }

    double get_double(const std::string& key) {
        const std::string raw = take(key);
        try {
            std::size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
            if (!std::isfinite(v)) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError(key, "expected a finite number, got `" + raw + "`");
        }
    }

    double get_double_or(const std::string& key, double fallback) {
        if (!values_.count(key)) return fallback;
        return get_double(key);
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    long long get_int(const std::string& key) {
        const std::string raw = take(key);
        long long v = 0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
            throw ConfigError(key, "expected an integer, got `" + raw + "`");
        }
        return v;
    }

    long long get_int_or(const std::string& key, long long fallback) {
        if (!values_.count(key)) return fallback;
        return get_int(key);
    }

    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) {
        if (!values_.count(key)) return fallback;
        const std::string raw = take(key);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
        if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
            throw ConfigError(key, "expected an unsigned integer, got `" + raw + "`");
        }
        return v;
    }

    void finish() const {
        if (!values_.empty()) {
            throw ConfigError(values_.begin()->first, "unknown key");
        }
    }

private:
    std::string take(const std::string& key) {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError(key, "missing required key");
        std::string v = it->second;
        values_.erase(it);
        return v;
    }

    std::string origin_;
    std::map<std::string, std::string> values_;
};

void require(bool cond, const std::string& field, const std::string& message) {
    if (!cond) throw ConfigError(field, message);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

void SweepSpec::validate() const {
    if (!(snr_db_step > 0.0)) throw std::domain_error("sweep: snr_db_step must be > 0");
    if (!(snr_db_start <= snr_db_stop))
        throw std::domain_error("sweep: snr_db_start must be <= snr_db_stop");
}

int SweepSpec::points() const {
    validate();
    return static_cast<int>(std::floor((snr_db_stop - snr_db_start) / snr_db_step + 1e-9)) + 1;
}

void ScenarioConfig::validate() const {
    link1.sr.validate();
    link1.budget.validate();
    if (link1.antennas < 1) throw std::domain_error("link1.antennas must be >= 1");
    link2.nakagami.validate();
    link2.budget.validate();
    grid.validate();
    mc.validate();
    sweep.validate();
}

ScenarioConfig parse_scenario(const std::string& text, const std::string& origin) {
    KeyValueReader r(text, origin);
    ScenarioConfig c;

    c.link1.antennas = static_cast<int>(r.get_int("link1.antennas"));
    require(c.link1.antennas >= 1, "link1.antennas", "must be >= 1");
    c.link1.sr.m = static_cast<int>(r.get_int("link1.sr_m"));
    require(c.link1.sr.m >= 1, "link1.sr_m", "must be an integer >= 1");
    c.link1.sr.b0 = r.get_double("link1.sr_b0");
    require(c.link1.sr.b0 > 0.0, "link1.sr_b0", "must be > 0");
    c.link1.sr.omega = r.get_double("link1.sr_omega");
    require(c.link1.sr.omega >= 0.0, "link1.sr_omega", "must be >= 0");
    c.link1.budget.distance = r.get_double_or("link1.distance", 1.0);
    require(c.link1.budget.distance > 0.0, "link1.distance", "must be > 0");
    c.link1.budget.pathloss_exp = r.get_double_or("link1.pathloss_exp", 2.0);
    require(c.link1.budget.pathloss_exp > 0.0, "link1.pathloss_exp", "must be > 0");
    c.link1.budget.noise_power = r.get_double_or("link1.noise_power", 1.0);
    require(c.link1.budget.noise_power > 0.0, "link1.noise_power", "must be > 0");
    c.link1.budget.tx_power = r.get_double_or("link1.tx_power", 1.0);
    require(c.link1.budget.tx_power > 0.0, "link1.tx_power", "must be > 0");
    c.link1.snr_threshold_db = r.get_double_or("link1.snr_threshold_db", 0.0);
    c.link1.budget.snr_threshold = db_to_linear(c.link1.snr_threshold_db);

    c.link2.nakagami.m = r.get_double("link2.nakagami_m");
    require(c.link2.nakagami.m >= 0.5, "link2.nakagami_m", "must be >= 0.5");
    c.link2.nakagami.omega = r.get_double_or("link2.nakagami_omega", 1.0);
    require(c.link2.nakagami.omega > 0.0, "link2.nakagami_omega", "must be > 0");
    c.link2.budget.distance = r.get_double_or("link2.distance", 1.0);
    require(c.link2.budget.distance > 0.0, "link2.distance", "must be > 0");
    c.link2.budget.pathloss_exp = r.get_double_or("link2.pathloss_exp", 2.0);
    require(c.link2.budget.pathloss_exp > 0.0, "link2.pathloss_exp", "must be > 0");
    c.link2.budget.noise_power = r.get_double_or("link2.noise_power", 1.0);
    require(c.link2.budget.noise_power > 0.0, "link2.noise_power", "must be > 0");
    c.link2.fixed_tx_power = r.has("link2.tx_power");
    c.link2.budget.tx_power = r.get_double_or("link2.tx_power", 1.0);
    require(c.link2.budget.tx_power > 0.0, "link2.tx_power", "must be > 0");
    c.link2.snr_threshold_db = r.get_double_or("link2.snr_threshold_db", 0.0);
    c.link2.budget.snr_threshold = db_to_linear(c.link2.snr_threshold_db);

    c.grid.n_doppler = static_cast<int>(r.get_int("grid.n_doppler"));
    require(c.grid.n_doppler >= 1, "grid.n_doppler", "must be >= 1");
    c.grid.m_delay = static_cast<int>(r.get_int("grid.m_delay"));
    require(c.grid.m_delay >= 1, "grid.m_delay", "must be >= 1");
    if (r.has("grid.symbol_period")) c.grid.symbol_period = r.get_double("grid.symbol_period");
    if (r.has("grid.subcarrier_spacing"))
        c.grid.subcarrier_spacing = r.get_double("grid.subcarrier_spacing");

    c.mc.trials = r.get_u64_or("mc.trials", 100000);
    require(c.mc.trials >= 1, "mc.trials", "must be >= 1");
    c.mc.master_seed = r.get_u64_or("mc.master_seed", 20250801);
    c.mc.workers = static_cast<int>(r.get_int_or("mc.workers", 1));
    require(c.mc.workers >= 1, "mc.workers", "must be >= 1");
    c.mc.histogram_bins = static_cast<int>(r.get_int_or("mc.histogram_bins", 50));
    require(c.mc.histogram_bins >= 10, "mc.histogram_bins", "must be >= 10");

    c.sweep.snr_db_start = r.get_double("sweep.snr_db_start");
    c.sweep.snr_db_stop = r.get_double("sweep.snr_db_stop");
    c.sweep.snr_db_step = r.get_double("sweep.snr_db_step");
    require(c.sweep.snr_db_step > 0.0, "sweep.snr_db_step", "must be > 0");
    require(c.sweep.snr_db_start <= c.sweep.snr_db_stop, "sweep.snr_db_start",
            "must be <= sweep.snr_db_stop");

    r.finish();

    try {
        c.validate();
    } catch (const std::exception& e) {
        throw ConfigError(origin, e.what());
    }
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), path);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string serialize_scenario(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "link1.antennas = " << c.link1.antennas << "\n";
    out << "link1.sr_m = " << c.link1.sr.m << "\n";
    out << "link1.sr_b0 = " << format_double(c.link1.sr.b0) << "\n";
    out << "link1.sr_omega = " << format_double(c.link1.sr.omega) << "\n";
    out << "link1.distance = " << format_double(c.link1.budget.distance) << "\n";
    out << "link1.pathloss_exp = " << format_double(c.link1.budget.pathloss_exp) << "\n";
    out << "link1.noise_power = " << format_double(c.link1.budget.noise_power) << "\n";
    out << "link1.tx_power = " << format_double(c.link1.budget.tx_power) << "\n";
    out << "link1.snr_threshold_db = " << format_double(c.link1.snr_threshold_db) << "\n";
    out << "link2.nakagami_m = " << format_double(c.link2.nakagami.m) << "\n";
    out << "link2.nakagami_omega = " << format_double(c.link2.nakagami.omega) << "\n";
    out << "link2.distance = " << format_double(c.link2.budget.distance) << "\n";
    out << "link2.pathloss_exp = " << format_double(c.link2.budget.pathloss_exp) << "\n";
    out << "link2.noise_power = " << format_double(c.link2.budget.noise_power) << "\n";
    if (c.link2.fixed_tx_power) {
        out << "link2.tx_power = " << format_double(c.link2.budget.tx_power) << "\n";
    }
    out << "link2.snr_threshold_db = " << format_double(c.link2.snr_threshold_db) << "\n";
    out << "grid.n_doppler = " << c.grid.n_doppler << "\n";
    out << "grid.m_delay = " << c.grid.m_delay << "\n";
    if (c.grid.symbol_period)
        out << "grid.symbol_period = " << format_double(*c.grid.symbol_period) << "\n";
    if (c.grid.subcarrier_spacing)
        out << "grid.subcarrier_spacing = " << format_double(*c.grid.subcarrier_spacing) << "\n";
    out << "mc.trials = " << c.mc.trials << "\n";
    out << "mc.master_seed = " << c.mc.master_seed << "\n";
    out << "mc.workers = " << c.mc.workers << "\n";
    out << "mc.histogram_bins = " << c.mc.histogram_bins << "\n";
    out << "sweep.snr_db_start = " << format_double(c.sweep.snr_db_start) << "\n";
    out << "sweep.snr_db_stop = " << format_double(c.sweep.snr_db_stop) << "\n";
    out << "sweep.snr_db_step = " << format_double(c.sweep.snr_db_step) << "\n";
    return out.str();
}

}  // namespace otfsop::cli
