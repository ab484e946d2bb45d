// Copyright (c) 2026 The regtrace Authors
// SPDX-License-Identifier: Apache-2.0

#include "regtrace/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "regtrace/errors.hpp"

namespace regtrace {
namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    if (trim(text).empty()) return items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
}

template <typename T>
T parse_number(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ConfigError(field, "expected a number, got '" + text + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError(field, "must be finite");
    }
    return value;
}

bool parse_bool(const std::string& field, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    throw ConfigError(field, "expected true or false, got '" + text + "'");
}

template <typename T>
std::vector<T> parse_number_list(const std::string& field, const std::string& text) {
    std::vector<T> out;
    for (const auto& item : split_list(text)) out.push_back(parse_number<T>(field, item));
    return out;
}

// Re-throws a name parser's complaint as a ConfigError for `field`.
template <typename F>
auto parse_named(const std::string& field, const std::string& text, F&& parse) {
    try {
        return parse(trim(text));
    } catch (const ArgumentError& e) {
        throw ConfigError(field, e.what());
    }
}

std::vector<LrStep> parse_schedule(const std::string& field, const std::string& text) {
    std::vector<LrStep> steps;
    for (const auto& item : split_list(text)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(field, "expected epoch:multiplier, got '" + item + "'");
        steps.push_back({parse_number<std::size_t>(field, item.substr(0, colon)),
                         parse_number<double>(field, item.substr(colon + 1))});
    }
    return steps;
}

using Setter = std::function<void(const std::string& field, const std::string& value)>;
using SetterTable = std::map<std::string, Setter>;

SetterTable model_setters(ModelSpec& m) {
    return {
        {"hidden", [&m](auto& f, auto& v) { m.hidden_widths = parse_number_list<std::size_t>(f, v); }},
        {"activation", [&m](auto& f, auto& v) { m.activation = parse_named(f, v, parse_activation); }},
        {"init_scale", [&m](auto& f, auto& v) { m.init_scale = parse_number<double>(f, v); }},
    };
}

SetterTable section_setters(const std::string& section, ExperimentConfig& c) {
    auto& d = c.data;
    auto& t = c.train;
    auto& a = c.analysis;
    auto& p = c.prune;
    auto& z = c.compress;
    if (section == "data")
        return {
            {"classes", [&d](auto& f, auto& v) { d.mixture.classes = parse_number<std::size_t>(f, v); }},
            {"per_class", [&d](auto& f, auto& v) { d.mixture.per_class = parse_number<std::size_t>(f, v); }},
            {"dim", [&d](auto& f, auto& v) { d.mixture.dim = parse_number<std::size_t>(f, v); }},
            {"separation", [&d](auto& f, auto& v) { d.mixture.separation = parse_number<double>(f, v); }},
            {"noise_frac", [&d](auto& f, auto& v) { d.mixture.noise_frac = parse_number<double>(f, v); }},
            {"seed", [&d](auto& f, auto& v) { d.mixture.seed = parse_number<std::uint64_t>(f, v); }},
            {"train_frac", [&d](auto& f, auto& v) { d.train_frac = parse_number<double>(f, v); }},
            {"csv", [&d](auto&, auto& v) { d.csv = trim(v); }},
        };
    if (section == "train")
        return {
            {"epochs", [&t](auto& f, auto& v) { t.epochs = parse_number<std::size_t>(f, v); }},
            {"batch_size", [&t](auto& f, auto& v) { t.batch_size = parse_number<std::size_t>(f, v); }},
            {"optimizer", [&t](auto& f, auto& v) { t.optimizer.kind = parse_named(f, v, parse_optimizer_kind); }},
            {"learning_rate", [&t](auto& f, auto& v) { t.optimizer.learning_rate = parse_number<double>(f, v); }},
            {"momentum", [&t](auto& f, auto& v) { t.optimizer.momentum = parse_number<double>(f, v); }},
            {"epsilon", [&t](auto& f, auto& v) { t.optimizer.epsilon = parse_number<double>(f, v); }},
            {"beta1", [&t](auto& f, auto& v) { t.optimizer.beta1 = parse_number<double>(f, v); }},
            {"beta2", [&t](auto& f, auto& v) { t.optimizer.beta2 = parse_number<double>(f, v); }},
            {"lr_schedule", [&t](auto& f, auto& v) { t.lr_schedule = parse_schedule(f, v); }},
        };
    if (section == "experiment")
        return {
            {"repetitions", [&c](auto& f, auto& v) { c.repetitions = parse_number<std::size_t>(f, v); }},
            {"base_seed", [&c](auto& f, auto& v) { c.base_seed = parse_number<std::uint64_t>(f, v); }},
            {"workers", [&c](auto& f, auto& v) { c.workers = parse_number<std::size_t>(f, v); }},
            {"out", [&c](auto&, auto& v) { c.out = trim(v); }},
        };
    if (section == "analysis")
        return {
            {"radius", [&a](auto& f, auto& v) { a.radius = parse_number<double>(f, v); }},
            {"histogram_width", [&a](auto& f, auto& v) { a.histogram_width = parse_number<std::size_t>(f, v); }},
            {"scatter", [&a](auto& f, auto& v) { a.scatter = parse_bool(f, v); }},
            {"histograms", [&a](auto& f, auto& v) { a.histograms = parse_bool(f, v); }},
        };
    if (section == "prune")
        return {
            {"fractions", [&p](auto& f, auto& v) { p.fractions = parse_number_list<double>(f, v); }},
            {"strategies",
             [&p](auto& f, auto& v) {
                 p.strategies.clear();
                 for (const auto& item : split_list(v)) p.strategies.push_back(parse_named(f, item, parse_prune_kind));
             }},
            {"radius", [&p](auto& f, auto& v) { p.radius = parse_number<double>(f, v); }},
            {"radii", [&p](auto& f, auto& v) { p.radii = parse_number_list<double>(f, v); }},
            {"seeds", [&p](auto& f, auto& v) { p.seeds = parse_number<std::size_t>(f, v); }},
            {"train_seed", [&p](auto& f, auto& v) { p.train_seed = parse_number<std::uint64_t>(f, v); }},
        };
    if (section == "compress")
        return {
            {"sector_deg", [&z](auto& f, auto& v) { z.sector_deg = parse_number<double>(f, v); }},
            {"n_per_bin", [&z](auto& f, auto& v) { z.n_per_bin = parse_number_list<std::size_t>(f, v); }},
            {"take_all", [&z](auto& f, auto& v) { z.take_all = parse_number_list<std::size_t>(f, v); }},
            {"seeds", [&z](auto& f, auto& v) { z.seeds = parse_number<std::size_t>(f, v); }},
            {"zoo",
             [&z](auto& f, auto& v) {
                 z.zoo.clear();
                 for (const auto& item : split_list(v)) z.zoo.push_back(parse_named(f, item, parse_zoo_algorithm));
             }},
            {"knn_k", [&z](auto& f, auto& v) { z.knn_k = parse_number<std::size_t>(f, v); }},
        };
    throw ConfigError(section, "unknown section");
}

void apply_section(const std::string& section, const pt::ptree& body, SetterTable setters) {
    for (const auto& [key, node] : body) {
        const std::string field = section + "." + key;
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(field, "unknown key");
        it->second(field, node.data());
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    const auto& m = data.mixture;
    if (m.classes < 2) throw ConfigError("data.classes", "need at least 2 classes");
    if (m.per_class < 2) throw ConfigError("data.per_class", "need at least 2 samples per class");
    if (m.dim < 1) throw ConfigError("data.dim", "must be positive");
    if (!(m.separation > 0)) throw ConfigError("data.separation", "must be positive");
    if (!(m.noise_frac >= 0 && m.noise_frac <= 1)) throw ConfigError("data.noise_frac", "must lie in [0, 1]");
    if (!(data.train_frac > 0 && data.train_frac < 1)) throw ConfigError("data.train_frac", "must lie in (0, 1)");

    if (models.empty()) throw ConfigError("model", "no model configured");
    for (const auto& model : models) {
        const std::string field = model.name == "default" ? "model" : "model." + model.name;
        try {
            model.spec.validate();
        } catch (const ArgumentError& e) {
            throw ConfigError(field, e.what());
        }
    }
    try {
        train.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError("train", e.what());
    }

    if (repetitions < 1) throw ConfigError("experiment.repetitions", "must be at least 1");
    if (workers < 1) throw ConfigError("experiment.workers", "must be at least 1");
    if (out.empty()) throw ConfigError("experiment.out", "must not be empty");

    if (analysis.radius < 0) throw ConfigError("analysis.radius", "must be non-negative");
    if (analysis.histogram_width < 1) throw ConfigError("analysis.histogram_width", "must be at least 1");

    if (prune.fractions.empty()) throw ConfigError("prune.fractions", "must not be empty");
    for (double f : prune.fractions)
        if (!(f >= 0 && f < 1)) throw ConfigError("prune.fractions", "each fraction must lie in [0, 1)");
    if (prune.strategies.empty()) throw ConfigError("prune.strategies", "must not be empty");
    if (!(prune.radius > 0)) throw ConfigError("prune.radius", "must be positive");
    for (double r : prune.radii)
        if (!(r > 0)) throw ConfigError("prune.radii", "each radius must be positive");
    if (prune.seeds < 1) throw ConfigError("prune.seeds", "must be at least 1");

    const double bins = 180.0 / compress.sector_deg;
    if (!(compress.sector_deg > 0) || std::abs(bins - std::round(bins)) > 1e-9)
        throw ConfigError("compress.sector_deg", "must divide 180");
    if (compress.n_per_bin.empty()) throw ConfigError("compress.n_per_bin", "must not be empty");
    for (auto n : compress.n_per_bin)
        if (n < 1) throw ConfigError("compress.n_per_bin", "each entry must be at least 1");
    if (compress.seeds < 1) throw ConfigError("compress.seeds", "must be at least 1");
    if (compress.zoo.size() < 3) throw ConfigError("compress.zoo", "need at least 3 algorithms");
    if (compress.knn_k < 1) throw ConfigError("compress.knn_k", "must be at least 1");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()), e.message());
    }

    ExperimentConfig config;
    std::vector<NamedModel> extra_models;
    bool default_model_seen = false;
    for (const auto& [name, body] : tree) {
        if (body.empty() && !body.data().empty()) throw ConfigError(name, "key outside any section");
        if (name == "model") {
            apply_section(name, body, model_setters(config.models.front().spec));
            default_model_seen = true;
        } else if (name.rfind("model.", 0) == 0) {
            NamedModel model{name.substr(6), ModelSpec{}};
            if (model.name.empty() || model.name == "default") throw ConfigError(name, "invalid model name");
            apply_section(name, body, model_setters(model.spec));
            extra_models.push_back(std::move(model));
        } else {
            apply_section(name, body, section_setters(name, config));
        }
    }
    // Named sections alone replace the implicit default model.
    if (!default_model_seen && !extra_models.empty()) config.models.clear();
    for (auto& m : extra_models) config.models.push_back(std::move(m));
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open config file");
    ExperimentConfig config = parse_config(in, path.string());
    if (!config.data.csv.empty() && config.data.csv.is_relative())
        config.data.csv = path.parent_path() / config.data.csv;
    return config;
}

LabeledDataset load_experiment_data(const ExperimentConfig& config) {
    const auto& d = config.data;
    if (d.csv.empty()) return stratified_split(synth_mixture(d.mixture), d.train_frac, d.mixture.seed);
    LabeledDataset data = load_csv(d.csv);
    if (data.ids_with(Split::test).empty()) data = stratified_split(data, d.train_frac, d.mixture.seed);
    return data;
}

}  // namespace regtrace
