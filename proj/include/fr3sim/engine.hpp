#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "fr3sim/association.hpp"
#include "fr3sim/beamforming.hpp"
#include "fr3sim/channel.hpp"
#include "fr3sim/errors.hpp"
#include "fr3sim/geometry.hpp"
#include "fr3sim/link.hpp"
#include "fr3sim/parallel.hpp"
#include "fr3sim/power.hpp"
#include "fr3sim/radio_catalog.hpp"
#include "fr3sim/rng.hpp"
#include "fr3sim/scenario.hpp"

#ifndef FR3SIM_VERSION
#define FR3SIM_VERSION "0.1.0"
#endif

namespace fr3sim {

inline std::string version_string() { return FR3SIM_VERSION; }

// ---------------------------------------------------------------------------
// Network instantiation

struct Network {
    std::vector<RadioUnit> radios;
    std::vector<Cell> cells;           // cell id == index
    std::vector<std::string> radio_layer;
    std::vector<int> cell_layer;       // index into ScenarioConfig::layers
};

inline std::string layer_label(const LayerConfig& l) { return l.radio + " " + to_string(l.deployment); }

inline SitePlan site_plan_for(const LayerConfig& l, const std::vector<Hotspot>& hotspots) {
    if (l.deployment == SiteKind::Hotspot) return hotspot_site_plan(hotspots);
    return build_hex_grid(l.isd_m, l.n_tiers, {}, l.deployment);
}

inline Network build_network(const ScenarioConfig& cfg, const std::vector<Hotspot>& hotspots) {
    Network net;
    for (std::size_t li = 0; li < cfg.layers.size(); ++li) {
        const auto& l = cfg.layers[li];
        const auto plan = site_plan_for(l, hotspots);
        if (plan.size() == 0) continue;
        auto inst = instantiate_layer(plan, cfg.catalog.lookup(l.radio),
                                      {kSectorBoresights.begin(), kSectorBoresights.end()},
                                      {l.bs_height_m, l.vertical_boresight_deg}, static_cast<int>(net.radios.size()),
                                      static_cast<int>(net.cells.size()));
        for (auto& r : inst.radios) {
            net.radios.push_back(std::move(r));
            net.radio_layer.push_back(layer_label(l));
        }
        for (auto& c : inst.cells) {
            net.cells.push_back(std::move(c));
            net.cell_layer.push_back(static_cast<int>(li));
        }
    }
    attach_codebooks(net.cells, cfg.catalog);
    return net;
}

/// Power of the deployment; independent of the drop since hotspot positions
/// do not enter the power model.
inline PowerReport scenario_power(const ScenarioConfig& cfg) {
    std::vector<Hotspot> placeholder(static_cast<std::size_t>(std::max(0, cfg.geometry.n_hotspots)));
    const auto net = build_network(cfg, placeholder);
    auto report = network_power(net.radios, net.cells, cfg.power, net.radio_layer);
    report.scenario = cfg.name;
    return report;
}

// ---------------------------------------------------------------------------
// One drop

struct SiteRef {
    SiteKind kind = SiteKind::UMa;
    int index = 0;
    Vec2 position;
    ChannelModel model = ChannelModel::UMa;
    std::uint64_t key = 0;
};

struct LinkState {
    bool los = false;
    double d_in = 0.0;
    double shadow_db = 0.0;
};

struct DropState {
    int drop = 0;
    std::uint64_t seed = 0;  // per-drop seed all substreams hang off
    std::vector<Ue> ues;
    std::vector<Hotspot> hotspots;
    Network net;
    std::vector<SiteRef> sites;
    std::vector<int> cell_site;
    std::vector<std::vector<LinkState>> link;  // [ue][site]
    std::vector<std::vector<double>> beta;     // [ue][cell]
    std::vector<int> carrier_group;            // per cell
    std::vector<double> noise_w;               // per-PRB noise per cell
    std::vector<AssociationState> assoc;       // [ue]
    std::vector<PrbAllocation> allocation;     // [ue]
    std::vector<int> cell_load;                // UEs per cell
};

inline std::uint64_t drop_seed(std::uint64_t seed, int drop) {
    return derive_seed(seed, {tag("drop"), static_cast<std::uint64_t>(drop)});
}

/// Geometry, network, link states and large-scale gains of one drop.
inline DropState prepare_drop(const ScenarioConfig& cfg, int drop, unsigned threads = 1) {
    DropState ds;
    ds.drop = drop;
    ds.seed = drop_seed(cfg.seed, drop);
    const auto& g = cfg.geometry;
    const auto& p = cfg.channel;

    auto macro_rng = substream(ds.seed, {tag("macro-ues")});
    const auto macro_plan = build_hex_grid(g.macro_isd_m, g.macro_tiers, {}, SiteKind::UMa);
    ds.ues = drop_macro_ues(macro_plan, g.macro_counts, macro_rng, g.ue, 0);
    auto hs_rng = substream(ds.seed, {tag("hotspots")});
    auto hs = drop_hotspots(g.n_hotspots, g.hotspot_region_radius_m, g.hotspot_radius_m, g.hotspot_min_separation_m,
                            g.ues_per_hotspot, hs_rng, g.ue, static_cast<int>(ds.ues.size()));
    ds.hotspots = std::move(hs.hotspots);
    ds.ues.insert(ds.ues.end(), hs.ues.begin(), hs.ues.end());

    ds.net = build_network(cfg, ds.hotspots);
    const auto& cells = ds.net.cells;
    if (cells.empty()) throw InvalidParameter("scenario '" + cfg.name + "' instantiates no cells");

    std::map<std::pair<int, int>, int> site_index;
    for (const auto& c : cells) {
        const auto k = std::make_pair(static_cast<int>(c.site_kind), c.site_index);
        auto it = site_index.find(k);
        if (it == site_index.end()) {
            it = site_index.emplace(k, static_cast<int>(ds.sites.size())).first;
            ds.sites.push_back({c.site_kind, c.site_index, c.site_position, channel_model_for(c.site_kind),
                                site_key(c.site_kind, c.site_index)});
        }
        ds.cell_site.push_back(it->second);
    }

    std::map<std::pair<int, double>, int> groups;
    for (const auto& c : cells) {
        const auto k = std::make_pair(static_cast<int>(c.technology), c.carrier_hz);
        ds.carrier_group.push_back(groups.emplace(k, static_cast<int>(groups.size())).first->second);
        ds.noise_w.push_back(noise_power_w(c.prb_bandwidth_hz, p));
    }

    std::vector<SiteShadowing> fields;
    fields.reserve(ds.sites.size());
    for (const auto& s : ds.sites) fields.emplace_back(s.model, p, ds.seed, s.key);

    const std::size_t n_ue = ds.ues.size();
    ds.link.assign(n_ue, std::vector<LinkState>(ds.sites.size()));
    ds.beta.assign(n_ue, std::vector<double>(cells.size()));
    parallel_for(n_ue, threads, [&](std::size_t u) {
        const auto& ue = ds.ues[u];
        for (std::size_t s = 0; s < ds.sites.size(); ++s) {
            const auto& site = ds.sites[s];
            auto rng = substream(ds.seed, {tag("link"), static_cast<std::uint64_t>(ue.id), site.key});
            std::uniform_real_distribution<double> u01(0.0, 1.0);
            const double draw = u01(rng);
            const double d_in = p.indoor_distance_max_m * u01(rng);
            auto& ls = ds.link[u][s];
            ls.d_in = ue.indoor ? d_in : 0.0;
            const double d2d_out = std::max(distance(ue.position.xy(), site.position) - ls.d_in, 0.0);
            ls.los = draw < los_probability(site.model, d2d_out, ue.position.z);
            ls.shadow_db = fields[s].db(ue.position.xy(), ls.los, p.shadowing(site.model));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto& ls = ds.link[u][ds.cell_site[c]];
            ds.beta[u][c] = large_scale_gain(ue, cells[c], ls.shadow_db, ls.los, ls.d_in, p).beta_linear;
        }
    });
    return ds;
}

/// Small-scale channel of (ue, cell); regenerated identically on every call.
inline void link_channel(const DropState& ds, const ScenarioConfig& cfg, int u, int c, SmallScale& out) {
    const auto& ue = ds.ues[u];
    const auto& cell = ds.net.cells[c];
    auto rng = substream(ds.seed, {tag("fading"), static_cast<std::uint64_t>(ue.id), cell.key});
    const bool los = ds.link[u][ds.cell_site[c]].los;
    draw_small_scale(link_geometry(ue, cell), cell, los, db_to_linear(cfg.channel.rician_k_los_db),
                     cfg.channel.prb_groups, rng, out);
}

/// SSB measurement, (re)selection and CSI-RS beam choice for every UE.
inline void associate(DropState& ds, const ScenarioConfig& cfg, unsigned threads = 1) {
    const auto& cells = ds.net.cells;
    ds.assoc.assign(ds.ues.size(), {});
    parallel_for(ds.ues.size(), threads, [&](std::size_t u) {
        SmallScale h;
        std::vector<RsrpMeasurement> meas;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            link_channel(ds, cfg, static_cast<int>(u), static_cast<int>(c), h);
            auto m = measure_rsrp(ds.ues[u].id, cells[c], ds.beta[u][c], h);
            meas.insert(meas.end(), m.begin(), m.end());
        }
        auto st = priority_reselect(meas, cfg.reselection);
        link_channel(ds, cfg, static_cast<int>(u), st.serving_cell, h);
        st.serving_csirs_beam = select_csirs_beam(st, cells[st.serving_cell], h).csirs_direction;
        ds.assoc[u] = st;
    });
}

inline void allocate(DropState& ds, const ScenarioConfig& cfg) {
    const auto& cells = ds.net.cells;
    ds.cell_load.assign(cells.size(), 0);
    std::vector<std::vector<int>> per_direction(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) per_direction[c].assign(cells[c].csirs->direction_count(), 0);
    for (const auto& a : ds.assoc) {
        ++ds.cell_load.at(a.serving_cell);
        ++per_direction[a.serving_cell].at(a.serving_csirs_beam);
    }
    std::vector<int> active(cells.size(), 0);
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (int n : per_direction[c]) active[c] += n > 0 ? 1 : 0;
    ds.allocation.clear();
    for (const auto& a : ds.assoc) {
        const auto& cell = cells[a.serving_cell];
        const CellOccupancy occ{ds.cell_load[a.serving_cell], per_direction[a.serving_cell][a.serving_csirs_beam],
                                active[a.serving_cell]};
        ds.allocation.push_back(allocate_ue(a.ue_id, a.serving_cell, a.serving_csirs_beam, cell.tx_power_w,
                                            cell.n_prb, a.layer_count, occ, cfg.mode));
    }
}

/// Materialises every channel of the drop; only sensible for small drops.
inline LinkSnapshot snapshot(const DropState& ds, const ScenarioConfig& cfg) {
    LinkSnapshot s;
    s.mode = cfg.mode;
    s.beta = ds.beta;
    s.allocation = ds.allocation;
    s.noise_w = ds.noise_w;
    s.carrier_group = ds.carrier_group;
    for (const auto& c : ds.net.cells) s.codebook.push_back(c.csirs.get());
    s.channel.assign(ds.ues.size(), std::vector<SmallScale>(ds.net.cells.size()));
    for (std::size_t u = 0; u < ds.ues.size(); ++u)
        for (std::size_t c = 0; c < ds.net.cells.size(); ++c)
            link_channel(ds, cfg, static_cast<int>(u), static_cast<int>(c), s.channel[u][c]);
    return s;
}

/// Effective SINR of both layers per UE, streaming over co-channel cells so
/// no channel is kept in memory.
inline std::vector<std::array<double, 2>> evaluate_sinr(const DropState& ds, const ScenarioConfig& cfg,
                                                        unsigned threads = 1) {
    const auto& cells = ds.net.cells;
    std::vector<std::vector<double>> weights(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) weights[c].assign(cells[c].csirs->direction_count(), 0.0);
    for (const auto& a : ds.allocation) weights[a.cell][a.direction] += a.interference_power_w;

    const int n_groups = std::max(1, cfg.channel.prb_groups);
    std::vector<std::array<double, 2>> out(ds.ues.size());
    parallel_for(ds.ues.size(), threads, [&](std::size_t u) {
        const auto& a = ds.allocation[u];
        const int serving = a.cell;
        std::vector<SinrTerms> terms(static_cast<std::size_t>(2 * n_groups));
        for (auto& t : terms) t.noise = ds.noise_w[serving];
        SmallScale h;
        std::vector<double> g;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (ds.carrier_group[c] != ds.carrier_group[serving]) continue;
            link_channel(ds, cfg, static_cast<int>(u), static_cast<int>(c), h);
            for (int k = 0; k < n_groups; ++k) {
                for (int l = 0; l < 2; ++l) {
                    cells[c].csirs->gains(h.groups[k].pol[l], g);
                    add_cell_terms(terms[2 * k + l], static_cast<int>(c) == serving, ds.beta[u][c], g, weights[c], a,
                                   cfg.mode);
                }
            }
        }
        std::vector<double> per_prb(n_groups);
        for (int l = 0; l < 2; ++l) {
            for (int k = 0; k < n_groups; ++k) per_prb[k] = terms[2 * k + l].sinr();
            out[u][l] = effective_sinr(per_prb);
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Results

struct UeRecord {
    int drop = 0;
    int ue_id = 0;
    TierLabel tier = TierLabel::Center;
    Technology serving_tech = Technology::G4;
    int serving_cell = 0;
    int ssb_beam = 0;
    int csirs_beam = 0;  // CSI-RS direction; the beam pair is (2d, 2d+1)
    std::array<double, 2> sinr_eff{0.0, 0.0};  // linear
    double rate_bps = 0.0;
};

struct Percentiles {
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
};

struct ResultMetadata {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    unsigned threads = 1;
    double wall_clock_s = 0.0;
};

struct ResultSet {
    ScenarioConfig config;
    std::vector<UeRecord> ues;
    Percentiles rate_mbps;
    PowerReport power;
    ResultMetadata meta;

    /// Fraction of UEs served by each technology.
    std::array<double, 3> tech_fraction() const {
        std::array<double, 3> f{0.0, 0.0, 0.0};
        for (const auto& r : ues) f[static_cast<int>(r.serving_tech)] += 1.0;
        if (!ues.empty())
            for (auto& x : f) x /= static_cast<double>(ues.size());
        return f;
    }
};

/// Linear interpolation between order statistics; q in [0, 1].
inline double percentile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

inline Percentiles rate_percentiles(const std::vector<UeRecord>& ues) {
    std::vector<double> r;
    r.reserve(ues.size());
    for (const auto& u : ues) r.push_back(u.rate_bps / 1e6);
    return {percentile(r, 0.05), percentile(r, 0.50), percentile(r, 0.95)};
}

inline std::string config_hash(const ScenarioConfig& cfg) {
    const auto h = derive_seed(0, {tag(to_json(cfg).dump())});
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::vector<UeRecord> run_drop(const ScenarioConfig& cfg, int drop, unsigned threads = 1) {
    auto ds = prepare_drop(cfg, drop, threads);
    associate(ds, cfg, threads);
    allocate(ds, cfg);
    const auto sinr = evaluate_sinr(ds, cfg, threads);
    std::vector<UeRecord> out;
    out.reserve(ds.ues.size());
    for (std::size_t u = 0; u < ds.ues.size(); ++u) {
        const auto& st = ds.assoc[u];
        const auto& cell = ds.net.cells[st.serving_cell];
        UeRecord r;
        r.drop = drop;
        r.ue_id = ds.ues[u].id;
        r.tier = ds.ues[u].tier;
        r.serving_tech = cell.technology;
        r.serving_cell = st.serving_cell;
        r.ssb_beam = st.serving_ssb_beam;
        r.csirs_beam = st.serving_csirs_beam;
        r.sinr_eff = sinr[u];
        r.rate_bps = ue_rate(cell.n_prb, cell.prb_bandwidth_hz, ds.allocation[u].rate_share, sinr[u]);
        out.push_back(r);
    }
    return out;
}

inline ResultSet run(const ScenarioConfig& cfg, unsigned threads = 1) {
    const auto t0 = std::chrono::steady_clock::now();
    ResultSet rs;
    rs.config = cfg;
    try {
        for (int d = 0; d < cfg.n_drops; ++d) {
            auto recs = run_drop(cfg, d, threads);
            rs.ues.insert(rs.ues.end(), recs.begin(), recs.end());
        }
        rs.power = scenario_power(cfg);
    } catch (const Error& e) {
        throw Error("scenario '" + cfg.name + "': " + e.what());
    }
    rs.rate_mbps = rate_percentiles(rs.ues);
    rs.meta.config_hash = config_hash(cfg);
    rs.meta.seed = cfg.seed;
    rs.meta.version = version_string();
    rs.meta.threads = threads;
    rs.meta.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rs;
}

}  // namespace fr3sim
