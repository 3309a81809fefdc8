#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fr3sim/association.hpp"
#include "fr3sim/channel.hpp"
#include "fr3sim/errors.hpp"
#include "fr3sim/geometry.hpp"
#include "fr3sim/link.hpp"
#include "fr3sim/power.hpp"
#include "fr3sim/radio_catalog.hpp"

namespace fr3sim {

struct LayerConfig {
    std::string radio;
    SiteKind deployment = SiteKind::UMa;
    double isd_m = 500.0;  // ignored for hotspot layers
    int n_tiers = 2;
    double bs_height_m = 25.0;
    double vertical_boresight_deg = 90.0;
};

struct GeometryConfig {
    double macro_isd_m = 500.0;
    int macro_tiers = 2;
    MacroUeCounts macro_counts{};
    int n_hotspots = 19;
    double hotspot_region_radius_m = 500.0;
    double hotspot_radius_m = 40.0;
    double hotspot_min_separation_m = 80.0;
    int ues_per_hotspot = 30;
    UeModel ue{};
};

struct ScenarioConfig {
    std::string name;
    std::vector<LayerConfig> layers;
    ReselectionPolicy reselection{};
    std::uint64_t seed = 1;
    int n_drops = 10;
    SchedulingMode mode = SchedulingMode::PaperLiteral;
    std::string output_dir = "out";
    GeometryConfig geometry{};
    ChannelParams channel{};
    PowerCalibration power{};
    RadioCatalog catalog = RadioCatalog::standard();
};

inline LayerConfig uma_layer(const std::string& radio) { return {radio, SiteKind::UMa, 500.0, 2, 25.0, 90.0}; }
inline LayerConfig umi_layer(const std::string& radio) { return {radio, SiteKind::UMi, 200.0, 2, 10.0, 90.0}; }
inline LayerConfig hotspot_layer(const std::string& radio) {
    return {radio, SiteKind::Hotspot, 0.0, 0, 10.0, 90.0};
}

/// The seven named deployments, in increasing expected median rate.
inline const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names{
        "4G UMa",
        "5G UMa",
        "[4G UMa + 5G UMa]",
        "4G UMa + 5G UMi",
        "4G UMa + 5G UMi (UMa BS)",
        "4G UMa + [5G UMi + 6G UMi]",
        "4G UMa + 5G UMi + 6G HS",
    };
    return names;
}

/// File-system friendly name, e.g. "4G UMa + 5G UMi" -> "4g-uma_5g-umi".
inline std::string scenario_slug(const std::string& name) {
    std::string out;
    for (char c : name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (c == ' ') {
            if (!out.empty() && out.back() != '-' && out.back() != '_') out += '-';
        } else if (c == '+') {
            while (!out.empty() && out.back() == '-') out.pop_back();
            out += '_';
        } else if (c == '[') {
            out += "co-";
        }
    }
    while (!out.empty() && (out.back() == '-' || out.back() == '_')) out.pop_back();
    std::string squeezed;
    for (char c : out)
        if (!(c == '-' && !squeezed.empty() && squeezed.back() == '_')) squeezed += c;
    return squeezed;
}

inline ScenarioConfig expand_scenario(const std::string& name) {
    ScenarioConfig cfg;
    const auto& names = scenario_names();
    std::string match;
    for (const auto& n : names)
        if (n == name || scenario_slug(n) == name) match = n;
    if (match.empty()) {
        std::string msg = "unknown scenario '" + name + "'; valid names:";
        for (const auto& n : names) msg += "\n  " + n + "  (" + scenario_slug(n) + ")";
        throw UsageError(msg);
    }
    cfg.name = match;
    if (match == names[0]) cfg.layers = {uma_layer("4G macro")};
    if (match == names[1]) cfg.layers = {uma_layer("5G macro")};
    if (match == names[2]) cfg.layers = {uma_layer("4G/5G macro")};
    if (match == names[3]) cfg.layers = {uma_layer("4G macro"), umi_layer("5G micro")};
    if (match == names[4]) cfg.layers = {uma_layer("4G macro"), umi_layer("5G macro")};
    if (match == names[5]) cfg.layers = {uma_layer("4G macro"), umi_layer("5G/6G micro")};
    if (match == names[6])
        cfg.layers = {uma_layer("4G macro"), umi_layer("5G micro"), hotspot_layer("6G pico")};
    return cfg;
}

// ---------------------------------------------------------------------------
// JSON

inline SiteKind site_kind_from_string(const std::string& s) {
    if (s == "UMa") return SiteKind::UMa;
    if (s == "UMi") return SiteKind::UMi;
    if (s == "HS" || s == "Hotspot") return SiteKind::Hotspot;
    throw UsageError("unknown deployment '" + s + "' (expected UMa, UMi or HS)");
}

namespace detail {

inline double threshold_to_json_value(double t) { return t; }

template <class T>
void get_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace detail

inline nlohmann::json to_json(const ScenarioConfig& c) {
    using nlohmann::json;
    json layers = json::array();
    for (const auto& l : c.layers)
        layers.push_back({{"radio", l.radio},
                          {"deployment", to_string(l.deployment)},
                          {"isd_m", l.isd_m},
                          {"n_tiers", l.n_tiers},
                          {"bs_height_m", l.bs_height_m},
                          {"vertical_boresight_deg", l.vertical_boresight_deg}});
    json thresholds = json::object();
    for (int t = 0; t < 3; ++t) {
        const double v = c.reselection.threshold_dbm[t];
        thresholds[to_string(static_cast<Technology>(t))] = std::isfinite(v) ? json(v) : json(nullptr);
    }
    const auto& g = c.geometry;
    const auto& ch = c.channel;
    auto shadow = [](const ShadowingParams& s) {
        return json{{"los_std_db", s.los_std_db},
                    {"nlos_std_db", s.nlos_std_db},
                    {"los_corr_m", s.los_corr_m},
                    {"nlos_corr_m", s.nlos_corr_m}};
    };
    json overrides = json::object();
    for (const auto& [name, o] : c.power.overrides) {
        json e = json::object();
        if (o.p_bbu_w) e["p_bbu_w"] = *o.p_bbu_w;
        if (o.p_0_w) e["p_0_w"] = *o.p_0_w;
        if (o.p_bb_w) e["p_bb_w"] = *o.p_bb_w;
        if (o.d_trx_w) e["d_trx_w"] = *o.d_trx_w;
        if (o.d_pa_w) e["d_pa_w"] = *o.d_pa_w;
        if (o.eta) e["eta"] = *o.eta;
        overrides[name] = e;
    }
    return {
        {"name", c.name},
        {"layers", layers},
        {"reselection", {{"enabled", c.reselection.enabled}, {"thresholds_dbm", thresholds}}},
        {"seed", c.seed},
        {"n_drops", c.n_drops},
        {"scheduling_mode", to_string(c.mode)},
        {"geometry",
         {{"macro_isd_m", g.macro_isd_m},
          {"macro_tiers", g.macro_tiers},
          {"ues_per_sector", {{"center", g.macro_counts.center}, {"tier1", g.macro_counts.tier1}, {"tier2", g.macro_counts.tier2}}},
          {"n_hotspots", g.n_hotspots},
          {"hotspot_region_radius_m", g.hotspot_region_radius_m},
          {"hotspot_radius_m", g.hotspot_radius_m},
          {"hotspot_min_separation_m", g.hotspot_min_separation_m},
          {"ues_per_hotspot", g.ues_per_hotspot},
          {"indoor_probability", g.ue.indoor_probability},
          {"outdoor_height_m", g.ue.outdoor_height_m},
          {"floor_height_m", g.ue.floor_height_m},
          {"max_floor", g.ue.max_floor},
          {"min_distance_uma_m", g.ue.min_distance_uma_m},
          {"min_distance_umi_m", g.ue.min_distance_umi_m}}},
        {"channel",
         {{"uma_shadowing", shadow(ch.uma)},
          {"umi_shadowing", shadow(ch.umi)},
          {"rician_k_los_db", ch.rician_k_los_db},
          {"noise_figure_db", ch.noise_figure_db},
          {"temperature_k", ch.temperature_k},
          {"indoor_distance_max_m", ch.indoor_distance_max_m},
          {"element_peak_dbi", ch.element_peak_dbi},
          {"element_hpbw_deg", ch.element_hpbw_deg},
          {"element_max_atten_db", ch.element_max_atten_db},
          {"min_distance_2d_m", ch.min_distance_2d_m},
          {"shadow_sinusoids", ch.shadow_sinusoids},
          {"prb_groups", ch.prb_groups}}},
        {"power",
         {{"p_bbu_w", c.power.p_bbu_w},
          {"p_0_w", c.power.p_0_w},
          {"p_bb_w", c.power.p_bb_w},
          {"multiband_bb_scale", c.power.multiband_bb_scale},
          {"d_trx_w", {{"4G", c.power.d_trx_w[0]}, {"5G", c.power.d_trx_w[1]}, {"6G", c.power.d_trx_w[2]}}},
          {"d_pa_w", c.power.d_pa_w},
          {"eta", c.power.eta},
          {"overrides", overrides}}},
        {"catalog", c.catalog},
    };
}

/// Reads a config. A config may name one of the built-in scenarios under
/// "name" and override any subset of keys; "layers" replaces the layer list.
inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    using detail::get_if;
    ScenarioConfig c;
    const std::string name = j.value("name", std::string{"custom"});
    bool named = false;
    for (const auto& n : scenario_names()) {
        if (n == name || scenario_slug(n) == name) {
            c = expand_scenario(name);
            named = true;
        }
    }
    if (!named) c.name = name;
    if (j.contains("catalog")) {
        for (const auto& e : j.at("catalog")) c.catalog.upsert(e.get<RadioType>());
    }
    if (j.contains("layers")) {
        c.layers.clear();
        for (const auto& l : j.at("layers")) {
            LayerConfig lc;
            lc.radio = l.at("radio").get<std::string>();
            lc.deployment = site_kind_from_string(l.value("deployment", std::string{"UMa"}));
            const LayerConfig base = lc.deployment == SiteKind::UMa   ? uma_layer(lc.radio)
                                     : lc.deployment == SiteKind::UMi ? umi_layer(lc.radio)
                                                                      : hotspot_layer(lc.radio);
            lc = base;
            get_if(l, "isd_m", lc.isd_m);
            get_if(l, "n_tiers", lc.n_tiers);
            get_if(l, "bs_height_m", lc.bs_height_m);
            get_if(l, "vertical_boresight_deg", lc.vertical_boresight_deg);
            c.catalog.lookup(lc.radio);
            c.layers.push_back(lc);
        }
    }
    if (c.layers.empty()) throw UsageError("config '" + c.name + "' defines no layers");
    if (j.contains("reselection")) {
        const auto& r = j.at("reselection");
        get_if(r, "enabled", c.reselection.enabled);
        if (r.contains("thresholds_dbm")) {
            for (auto& [k, v] : r.at("thresholds_dbm").items()) {
                const int t = static_cast<int>(technology_from_string(k));
                c.reselection.threshold_dbm[t] = v.is_null() ? -std::numeric_limits<double>::infinity()
                                                             : v.get<double>();
            }
        }
    }
    get_if(j, "seed", c.seed);
    get_if(j, "n_drops", c.n_drops);
    if (j.contains("scheduling_mode")) c.mode = scheduling_mode_from_string(j.at("scheduling_mode").get<std::string>());
    get_if(j, "output_dir", c.output_dir);
    if (j.contains("geometry")) {
        const auto& g = j.at("geometry");
        auto& o = c.geometry;
        get_if(g, "macro_isd_m", o.macro_isd_m);
        get_if(g, "macro_tiers", o.macro_tiers);
        if (g.contains("ues_per_sector")) {
            const auto& u = g.at("ues_per_sector");
            get_if(u, "center", o.macro_counts.center);
            get_if(u, "tier1", o.macro_counts.tier1);
            get_if(u, "tier2", o.macro_counts.tier2);
        }
        get_if(g, "n_hotspots", o.n_hotspots);
        get_if(g, "hotspot_region_radius_m", o.hotspot_region_radius_m);
        get_if(g, "hotspot_radius_m", o.hotspot_radius_m);
        get_if(g, "hotspot_min_separation_m", o.hotspot_min_separation_m);
        get_if(g, "ues_per_hotspot", o.ues_per_hotspot);
        get_if(g, "indoor_probability", o.ue.indoor_probability);
        get_if(g, "outdoor_height_m", o.ue.outdoor_height_m);
        get_if(g, "floor_height_m", o.ue.floor_height_m);
        get_if(g, "max_floor", o.ue.max_floor);
        get_if(g, "min_distance_uma_m", o.ue.min_distance_uma_m);
        get_if(g, "min_distance_umi_m", o.ue.min_distance_umi_m);
    }
    if (j.contains("channel")) {
        const auto& ch = j.at("channel");
        auto& o = c.channel;
        auto shadow = [&](const char* key, ShadowingParams& s) {
            if (!ch.contains(key)) return;
            const auto& x = ch.at(key);
            get_if(x, "los_std_db", s.los_std_db);
            get_if(x, "nlos_std_db", s.nlos_std_db);
            get_if(x, "los_corr_m", s.los_corr_m);
            get_if(x, "nlos_corr_m", s.nlos_corr_m);
        };
        shadow("uma_shadowing", o.uma);
        shadow("umi_shadowing", o.umi);
        get_if(ch, "rician_k_los_db", o.rician_k_los_db);
        get_if(ch, "noise_figure_db", o.noise_figure_db);
        get_if(ch, "temperature_k", o.temperature_k);
        get_if(ch, "indoor_distance_max_m", o.indoor_distance_max_m);
        get_if(ch, "element_peak_dbi", o.element_peak_dbi);
        get_if(ch, "element_hpbw_deg", o.element_hpbw_deg);
        get_if(ch, "element_max_atten_db", o.element_max_atten_db);
        get_if(ch, "min_distance_2d_m", o.min_distance_2d_m);
        get_if(ch, "shadow_sinusoids", o.shadow_sinusoids);
        get_if(ch, "prb_groups", o.prb_groups);
    }
    if (j.contains("power")) {
        const auto& p = j.at("power");
        auto& o = c.power;
        get_if(p, "p_bbu_w", o.p_bbu_w);
        get_if(p, "p_0_w", o.p_0_w);
        get_if(p, "p_bb_w", o.p_bb_w);
        get_if(p, "multiband_bb_scale", o.multiband_bb_scale);
        if (p.contains("d_trx_w")) {
            for (auto& [k, v] : p.at("d_trx_w").items())
                o.d_trx_w[static_cast<int>(technology_from_string(k))] = v.get<double>();
        }
        get_if(p, "d_pa_w", o.d_pa_w);
        get_if(p, "eta", o.eta);
        if (p.contains("overrides")) {
            o.overrides.clear();
            for (auto& [name, v] : p.at("overrides").items()) {
                PowerOverride ov;
                auto opt = [&](const char* key, std::optional<double>& f) {
                    if (v.contains(key)) f = v.at(key).get<double>();
                };
                opt("p_bbu_w", ov.p_bbu_w);
                opt("p_0_w", ov.p_0_w);
                opt("p_bb_w", ov.p_bb_w);
                opt("d_trx_w", ov.d_trx_w);
                opt("d_pa_w", ov.d_pa_w);
                opt("eta", ov.eta);
                o.overrides[name] = ov;
            }
        }
    }
    if (c.n_drops < 1) throw UsageError("n_drops must be at least 1");
    if (c.channel.prb_groups < 1) throw UsageError("channel.prb_groups must be at least 1");
    return c;
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FilesystemError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

}  // namespace fr3sim
