#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fr3sim/errors.hpp"
#include "fr3sim/radio_catalog.hpp"

namespace fr3sim {

/// Parameters of the multicarrier radio-unit power model.
struct PowerParams {
    double p_bbu_w = 0.0;
    double p_0_w = 0.0;
    double p_bb_w = 0.0;
    double d_trx_w = 0.0;
    double d_pa_w = 0.0;
    double eta = 1.0;
    int m_trx_av = 0;
    int m_pa_ac = 0;

    void validate() const {
        if (!(eta > 0.0 && eta <= 1.0)) throw InvalidParameter("power model: eta must be in (0, 1]");
        if (p_bbu_w < 0 || p_0_w < 0 || p_bb_w < 0 || d_trx_w < 0 || d_pa_w < 0 || m_trx_av < 0 || m_pa_ac < 0)
            throw InvalidParameter("power model: parameters must be non-negative");
        if (m_pa_ac > m_trx_av) throw InvalidParameter("power model: active PAs exceed available TRX");
    }
};

struct PowerBreakdown {
    double bbu = 0.0;
    double static_ = 0.0;
    double baseband = 0.0;
    double trx = 0.0;
    double pa = 0.0;
    double out = 0.0;

    double total() const { return bbu + static_ + baseband + trx + pa + out; }
};

/// P = P_BBU + P_0 + P_BB + M_TRX D_TRX + M_PA D_PA + (1/eta) sum_c P_TX,c
inline PowerBreakdown radio_power(const PowerParams& p, std::span<const double> cell_tx_w) {
    p.validate();
    PowerBreakdown b;
    b.bbu = p.p_bbu_w;
    b.static_ = p.p_0_w;
    b.baseband = p.p_bb_w;
    b.trx = p.m_trx_av * p.d_trx_w;
    b.pa = p.m_pa_ac * p.d_pa_w;
    double tx = 0.0;
    for (double w : cell_tx_w) {
        if (w < 0) throw InvalidParameter("power model: negative transmit power");
        tx += w;
    }
    b.out = tx / p.eta;
    return b;
}

/// Optional per-radio-type replacement of calibration values.
struct PowerOverride {
    std::optional<double> p_bbu_w, p_0_w, p_bb_w, d_trx_w, d_pa_w, eta;
};

/// Calibration defaults the per-radio parameters are derived from.
struct PowerCalibration {
    double p_bbu_w = 100.0;
    double p_0_w = 60.0;
    double p_bb_w = 40.0;
    double multiband_bb_scale = 1.5;
    std::array<double, 3> d_trx_w{1.5, 4.0, 2.5};  // per technology (4G, 5G, 6G)
    double d_pa_w = 2.0;
    double eta = 0.35;
    std::map<std::string, PowerOverride> overrides{
        {"6G pico", PowerOverride{std::nullopt, 30.0, 20.0, 1.0, 0.5, std::nullopt}}};
};

/// Per-radio parameters. Multiband radios add the TRX chains of each carrier
/// (D_TRX becomes their chain-weighted mean) and scale baseband power.
inline PowerParams power_params_for(const RadioType& type, const PowerCalibration& cal = {}) {
    PowerParams p;
    p.p_bbu_w = cal.p_bbu_w;
    p.p_0_w = cal.p_0_w;
    p.p_bb_w = cal.p_bb_w * (type.multiband() ? cal.multiband_bb_scale : 1.0);
    p.d_pa_w = cal.d_pa_w;
    p.eta = cal.eta;
    double trx_w = 0.0;
    for (const auto& c : type.carriers) {
        p.m_trx_av += c.n_trx;
        trx_w += c.n_trx * cal.d_trx_w[static_cast<int>(c.technology)];
    }
    p.d_trx_w = p.m_trx_av > 0 ? trx_w / p.m_trx_av : 0.0;
    p.m_pa_ac = p.m_trx_av;
    if (auto it = cal.overrides.find(type.name); it != cal.overrides.end()) {
        const auto& o = it->second;
        if (o.p_bbu_w) p.p_bbu_w = *o.p_bbu_w;
        if (o.p_0_w) p.p_0_w = *o.p_0_w;
        if (o.p_bb_w) p.p_bb_w = *o.p_bb_w;
        if (o.d_trx_w) p.d_trx_w = *o.d_trx_w;
        if (o.d_pa_w) p.d_pa_w = *o.d_pa_w;
        if (o.eta) p.eta = *o.eta;
    }
    return p;
}

struct RadioPowerRecord {
    int radio_id = 0;
    std::string radio_type;
    std::string layer;
    PowerBreakdown breakdown;
};

struct PowerReport {
    std::string scenario;
    std::vector<RadioPowerRecord> per_radio;
    std::map<std::string, double> per_layer;
    double total_w = 0.0;
};

/// Aggregates radios; `layer_of` names the layer each radio belongs to.
inline PowerReport network_power(const std::vector<RadioUnit>& radios, const std::vector<Cell>& cells,
                                 const PowerCalibration& cal = {}, const std::vector<std::string>& layer_of = {}) {
    PowerReport r;
    for (std::size_t i = 0; i < radios.size(); ++i) {
        const auto& radio = radios[i];
        std::vector<double> tx;
        for (int id : radio.cell_ids) tx.push_back(cells.at(id).tx_power_w);
        RadioPowerRecord rec;
        rec.radio_id = radio.id;
        rec.radio_type = radio.type.name;
        rec.layer = i < layer_of.size() ? layer_of[i] : radio.type.name + " " + to_string(radio.site_kind);
        rec.breakdown = radio_power(power_params_for(radio.type, cal), tx);
        r.per_layer[rec.layer] += rec.breakdown.total();
        r.per_radio.push_back(rec);
    }
    // Sum in id order so the total does not depend on map iteration.
    for (const auto& rec : r.per_radio) r.total_w += rec.breakdown.total();
    return r;
}

inline nlohmann::json to_json(const PowerReport& r) {
    nlohmann::json radios = nlohmann::json::array();
    for (const auto& rec : r.per_radio) {
        const auto& b = rec.breakdown;
        radios.push_back({{"radio_id", rec.radio_id},
                          {"radio_type", rec.radio_type},
                          {"layer", rec.layer},
                          {"bbu_w", b.bbu},
                          {"static_w", b.static_},
                          {"baseband_w", b.baseband},
                          {"trx_w", b.trx},
                          {"pa_w", b.pa},
                          {"out_w", b.out},
                          {"total_w", b.total()}});
    }
    nlohmann::json layers = nlohmann::json::object();
    for (const auto& [k, v] : r.per_layer) layers[k] = v;
    return {{"scenario", r.scenario}, {"per_radio", radios}, {"per_layer", layers}, {"total_w", r.total_w}};
}

}  // namespace fr3sim
