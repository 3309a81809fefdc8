#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fr3sim/errors.hpp"
#include "fr3sim/geometry.hpp"
#include "fr3sim/rng.hpp"
#include "fr3sim/units.hpp"

namespace fr3sim {

enum class Technology { G4 = 0, G5 = 1, G6 = 2 };

inline std::string to_string(Technology t) {
    switch (t) {
        case Technology::G4: return "4G";
        case Technology::G5: return "5G";
        case Technology::G6: return "6G";
    }
    return "?";
}

inline Technology technology_from_string(const std::string& s) {
    if (s == "4G") return Technology::G4;
    if (s == "5G") return Technology::G5;
    if (s == "6G") return Technology::G6;
    throw InvalidParameter("unknown technology '" + s + "'");
}

/// Reselection priority of a layer: 4G 0, 5G 1, 6G 2.
inline int priority_of(Technology t) { return static_cast<int>(t); }

/// One technology carried by a radio type (a column of the radio table).
struct CarrierSpec {
    Technology technology = Technology::G5;
    double carrier_ghz = 0.0;
    double bandwidth_mhz = 0.0;
    int n_prb = 0;
    double scs_khz = 0.0;  // subcarrier spacing; PRB = 12 subcarriers
    int n_trx = 0;
    int n_elements = 0;
    int m_h = 0;
    int m_v = 0;
    int n_ssb_beams = 0;
    int n_csirs_beams = 0;
    double tx_power_dbm = 0.0;  // per cell

    double prb_bandwidth_hz() const { return 12.0 * scs_khz * 1e3; }
};

struct RadioType {
    std::string name;
    std::vector<CarrierSpec> carriers;  // one per technology
    int cells_supported = 3;

    bool multiband() const { return carriers.size() > 1; }
    const CarrierSpec& carrier(Technology t) const {
        for (const auto& c : carriers)
            if (c.technology == t) return c;
        throw InvalidParameter("radio type '" + name + "' does not carry " + to_string(t));
    }
};

inline void to_json(nlohmann::json& j, const CarrierSpec& c) {
    j = nlohmann::json{{"technology", to_string(c.technology)},
                       {"carrier_ghz", c.carrier_ghz},
                       {"bandwidth_mhz", c.bandwidth_mhz},
                       {"n_prb", c.n_prb},
                       {"scs_khz", c.scs_khz},
                       {"n_trx", c.n_trx},
                       {"n_elements", c.n_elements},
                       {"m_h", c.m_h},
                       {"m_v", c.m_v},
                       {"n_ssb_beams", c.n_ssb_beams},
                       {"n_csirs_beams", c.n_csirs_beams},
                       {"tx_power_dbm", c.tx_power_dbm}};
}

inline void from_json(const nlohmann::json& j, CarrierSpec& c) {
    c.technology = technology_from_string(j.at("technology").get<std::string>());
    j.at("carrier_ghz").get_to(c.carrier_ghz);
    j.at("bandwidth_mhz").get_to(c.bandwidth_mhz);
    j.at("n_prb").get_to(c.n_prb);
    j.at("scs_khz").get_to(c.scs_khz);
    j.at("n_trx").get_to(c.n_trx);
    j.at("n_elements").get_to(c.n_elements);
    j.at("m_h").get_to(c.m_h);
    j.at("m_v").get_to(c.m_v);
    j.at("n_ssb_beams").get_to(c.n_ssb_beams);
    j.at("n_csirs_beams").get_to(c.n_csirs_beams);
    j.at("tx_power_dbm").get_to(c.tx_power_dbm);
}

inline void to_json(nlohmann::json& j, const RadioType& r) {
    j = nlohmann::json{{"name", r.name}, {"carriers", r.carriers}, {"cells_supported", r.cells_supported}};
}

inline void from_json(const nlohmann::json& j, RadioType& r) {
    j.at("name").get_to(r.name);
    j.at("carriers").get_to(r.carriers);
    r.cells_supported = j.value("cells_supported", 3 * static_cast<int>(r.carriers.size()));
}

namespace detail {

inline CarrierSpec lte_macro() {
    return {Technology::G4, 2.0, 20.0, 100, 15.0, 8, 8, 2, 2, 4, 8, 46.0};
}
inline CarrierSpec nr_macro() {
    return {Technology::G5, 3.5, 100.0, 273, 30.0, 64, 64, 8, 4, 8, 64, 49.0};
}
inline CarrierSpec nr_micro() {
    return {Technology::G5, 3.5, 100.0, 273, 30.0, 64, 64, 8, 4, 8, 32, 44.0};
}
inline CarrierSpec sixg_micro() {
    return {Technology::G6, 10.0, 200.0, 273, 60.0, 128, 128, 16, 4, 16, 128, 44.0};
}
inline CarrierSpec sixg_pico() {
    return {Technology::G6, 10.0, 200.0, 273, 60.0, 128, 128, 16, 4, 16, 128, 41.0};
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace detail

class RadioCatalog {
public:
    RadioCatalog() = default;
    explicit RadioCatalog(std::vector<RadioType> entries) : entries_(std::move(entries)) {}

    /// The seven radio types of the reference deployment study.
    static RadioCatalog standard() {
        using namespace detail;
        return RadioCatalog({
            {"4G macro", {lte_macro()}, 3},
            {"5G macro", {nr_macro()}, 3},
            {"5G micro", {nr_micro()}, 3},
            {"6G micro", {sixg_micro()}, 3},
            {"6G pico", {sixg_pico()}, 3},
            {"4G/5G macro", {lte_macro(), nr_macro()}, 6},
            {"5G/6G micro", {nr_micro(), sixg_micro()}, 6},
        });
    }

    const RadioType& lookup(const std::string& name) const {
        const auto key = detail::lower(name);
        for (const auto& e : entries_)
            if (detail::lower(e.name) == key) return e;
        throw CatalogMiss(name);
    }

    /// Replaces an entry with the same name, or appends a new one.
    void upsert(RadioType r) {
        const auto key = detail::lower(r.name);
        for (auto& e : entries_) {
            if (detail::lower(e.name) == key) {
                e = std::move(r);
                return;
            }
        }
        entries_.push_back(std::move(r));
    }

    const std::vector<RadioType>& entries() const { return entries_; }

private:
    std::vector<RadioType> entries_;
};

inline void to_json(nlohmann::json& j, const RadioCatalog& c) { j = c.entries(); }
inline void from_json(const nlohmann::json& j, RadioCatalog& c) {
    c = RadioCatalog(j.get<std::vector<RadioType>>());
}

inline const RadioType& catalog_lookup(const std::string& name) {
    static const RadioCatalog catalog = RadioCatalog::standard();
    return catalog.lookup(name);
}

struct Codebook;

struct Cell {
    int id = 0;
    int radio_id = 0;
    Technology technology = Technology::G5;
    std::string radio_type;
    SiteKind site_kind = SiteKind::UMa;
    int site_index = 0;
    int sector = 0;
    Vec2 site_position;
    double bs_height_m = 25.0;
    double boresight_deg = 30.0;
    double vertical_boresight_deg = 90.0;  // zenith angle of the electrical boresight
    int m_h = 1;
    int m_v = 1;
    double carrier_hz = 0.0;
    int n_prb = 0;
    double prb_bandwidth_hz = 0.0;
    double bandwidth_hz = 0.0;
    double tx_power_w = 0.0;
    int priority = 0;
    std::uint64_t key = 0;  // stable identity for random substreams
    std::shared_ptr<const Codebook> ssb;
    std::shared_ptr<const Codebook> csirs;

    int n_elements() const { return 2 * m_h * m_v; }
    Vec3 antenna_position() const { return {site_position.x, site_position.y, bs_height_m}; }
};

struct RadioUnit {
    int id = 0;
    RadioType type;
    SiteKind site_kind = SiteKind::UMa;
    int site_index = 0;
    Vec2 site_position;
    std::vector<int> cell_ids;
};

struct LayerPlacement {
    double bs_height_m = 25.0;
    double vertical_boresight_deg = 90.0;
};

struct LayerInstance {
    std::vector<RadioUnit> radios;
    std::vector<Cell> cells;
};

inline std::uint64_t cell_key(SiteKind kind, int site, int sector, Technology t) {
    return derive_seed(tag("cell"), {static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(site),
                                     static_cast<std::uint64_t>(sector), static_cast<std::uint64_t>(t)});
}

/// One radio per site; each radio drives three sectors per technology it
/// carries. Ids continue from `first_radio_id` / `first_cell_id`.
inline LayerInstance instantiate_layer(const SitePlan& plan, const RadioType& type,
                                       const std::vector<double>& boresights = {kSectorBoresights.begin(),
                                                                                kSectorBoresights.end()},
                                       const LayerPlacement& placement = {}, int first_radio_id = 0,
                                       int first_cell_id = 0) {
    if (plan.size() == 0) throw InvalidParameter("instantiate_layer: empty site plan");
    if (type.carriers.empty()) throw InvalidParameter("radio type '" + type.name + "' carries nothing");
    LayerInstance out;
    int cell_id = first_cell_id;
    for (std::size_t s = 0; s < plan.size(); ++s) {
        RadioUnit radio;
        radio.id = first_radio_id + static_cast<int>(s);
        radio.type = type;
        radio.site_kind = plan.kind;
        radio.site_index = static_cast<int>(s);
        radio.site_position = plan.sites[s];
        for (const auto& carrier : type.carriers) {
            for (std::size_t sector = 0; sector < boresights.size(); ++sector) {
                Cell c;
                c.id = cell_id++;
                c.radio_id = radio.id;
                c.technology = carrier.technology;
                c.radio_type = type.name;
                c.site_kind = plan.kind;
                c.site_index = static_cast<int>(s);
                c.sector = static_cast<int>(sector);
                c.site_position = plan.sites[s];
                c.bs_height_m = placement.bs_height_m;
                c.boresight_deg = boresights[sector];
                c.vertical_boresight_deg = placement.vertical_boresight_deg;
                c.m_h = carrier.m_h;
                c.m_v = carrier.m_v;
                c.carrier_hz = carrier.carrier_ghz * 1e9;
                c.n_prb = carrier.n_prb;
                c.prb_bandwidth_hz = carrier.prb_bandwidth_hz();
                c.bandwidth_hz = carrier.bandwidth_mhz * 1e6;
                c.tx_power_w = dbm_to_watt(carrier.tx_power_dbm);
                c.priority = priority_of(carrier.technology);
                c.key = cell_key(plan.kind, c.site_index, c.sector, c.technology);
                radio.cell_ids.push_back(c.id);
                out.cells.push_back(std::move(c));
            }
        }
        out.radios.push_back(std::move(radio));
    }
    return out;
}

}  // namespace fr3sim
