#include "beaconloc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace beaconloc {

namespace {

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        auto item = text.substr(pos, end - pos);
        const auto first = item.find_first_not_of(" \t");
        const auto last = item.find_last_not_of(" \t");
        if (first != std::string_view::npos) out.emplace_back(item.substr(first, last - first + 1));
        pos = end + 1;
    }
    return out;
}

constexpr std::string_view kVaryPrefix = "vary.";

}  // namespace

SweepSpec parse_sweep(std::string_view text, const std::string& source, Preset preset) {
    SweepSpec spec;
    spec.base = preset_config(preset);
    bool has_range = false;

    for (const auto& kv : parse_key_values(text, source)) {
        try {
            if (kv.key == "seeds") {
                for (const auto& s : split_list(kv.value)) {
                    ScenarioConfig probe;
                    apply_scenario_key(probe, "seed", s);
                    spec.seeds.push_back(probe.seed);
                }
            } else if (kv.key.starts_with(kVaryPrefix)) {
                const std::string key = kv.key.substr(kVaryPrefix.size());
                auto values = split_list(kv.value);
                if (values.empty()) throw std::invalid_argument("vary list for '" + key + "' is empty");
                ScenarioConfig probe = spec.base;
                for (const auto& v : values) apply_scenario_key(probe, key, v);
                has_range = has_range || key == "comm_range";
                spec.vary.emplace_back(key, std::move(values));
            } else {
                apply_scenario_key(spec.base, kv.key, kv.value);
                has_range = has_range || kv.key == "comm_range";
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError(source, kv.line, e.what());
        }
    }
    if (!has_range) throw ConfigError(source, 0, "missing required key 'comm_range'");
    if (spec.seeds.empty()) spec.seeds.push_back(spec.base.seed);
    return spec;
}

std::vector<SweepCell> expand(const SweepSpec& spec) {
    std::vector<SweepCell> cells;
    std::vector<std::size_t> index(spec.vary.size(), 0);
    while (true) {
        SweepCell cell;
        ScenarioConfig config = spec.base;
        for (std::size_t v = 0; v < spec.vary.size(); ++v) {
            const auto& [key, values] = spec.vary[v];
            apply_scenario_key(config, key, values[index[v]]);
            if (key != "method" && key != "anchor_pct") {
                if (!cell.params.empty()) cell.params += ';';
                cell.params += key + "=" + values[index[v]];
            }
        }
        for (auto seed : spec.seeds) {
            ScenarioConfig run = config;
            run.seed = seed;
            try {
                run.validate();
            } catch (const InvalidConfig& e) {
                throw ConfigError("sweep", 0, e.what());
            }
            cell.runs.push_back(run);
        }
        cells.push_back(std::move(cell));

        // Odometer increment, last vary key fastest.
        std::size_t v = spec.vary.size();
        while (v > 0) {
            --v;
            if (++index[v] < spec.vary[v].second.size()) break;
            index[v] = 0;
            if (v == 0) return cells;
        }
        if (spec.vary.empty()) return cells;
    }
}

void run_ordered(std::span<const ScenarioConfig> configs, unsigned jobs,
                 const std::function<void(std::size_t, MetricsReport&&)>& sink) {
    const std::size_t n = configs.size();
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));

    std::vector<std::optional<MetricsReport>> done(n);
    std::exception_ptr failure;
    std::mutex mu;
    std::condition_variable ready;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        while (!stop) {
            const std::size_t i = next++;
            if (i >= n) return;
            try {
                MetricsReport report = run_scenario(configs[i]);
                std::lock_guard lock(mu);
                done[i] = std::move(report);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
            }
            ready.notify_one();
        }
    };

    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);

    for (std::size_t emitted = 0; emitted < n; ++emitted) {
        MetricsReport report;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return done[emitted].has_value() || failure; });
            if (!done[emitted]) break;
            report = std::move(*done[emitted]);
            done[emitted].reset();
        }
        sink(emitted, std::move(report));
    }
    stop = true;
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace beaconloc
