#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "fr3sim/beamforming.hpp"
#include "fr3sim/channel.hpp"
#include "fr3sim/errors.hpp"
#include "fr3sim/radio_catalog.hpp"
#include "fr3sim/units.hpp"

namespace fr3sim {

struct RsrpMeasurement {
    int ue_id = 0;
    int cell_id = 0;
    int beam_index = 0;
    double rsrp_dbm = 0.0;
    Technology technology = Technology::G4;
    int priority = 0;
};

struct AssociationState {
    int ue_id = 0;
    int serving_cell = -1;
    int serving_ssb_beam = -1;
    int serving_csirs_beam = -1;  // CSI-RS direction index
    double rsrp_dbm = -std::numeric_limits<double>::infinity();
    Technology technology = Technology::G4;
    int layer_count = 2;
};

struct ReselectionPolicy {
    bool enabled = true;
    /// RSRP threshold per technology (indexed by priority); -inf disables.
    std::array<double, 3> threshold_dbm{-std::numeric_limits<double>::infinity(), -110.0, -108.0};

    double threshold(Technology t) const { return threshold_dbm[static_cast<int>(t)]; }
};

/// SSB power per resource element: the cell power spread over 12 * N_PRB
/// subcarriers.
inline double ssb_power_per_re_w(const Cell& cell) { return cell.tx_power_w / (12.0 * cell.n_prb); }

/// RSRP of every SSB beam of `cell` as seen by one UE (panel 0, first PRB group).
inline std::vector<RsrpMeasurement> measure_rsrp(int ue_id, const Cell& cell, double beta, const SmallScale& h,
                                                 const Codebook& ssb, double p_ssb_w) {
    if (h.groups.empty()) throw ShapeMismatch("measure_rsrp: empty channel");
    std::vector<double> g;
    ssb.gains(h.groups.front().pol[0], g);
    std::vector<RsrpMeasurement> out;
    out.reserve(g.size());
    for (std::size_t s = 0; s < g.size(); ++s) {
        out.push_back({ue_id, cell.id, static_cast<int>(s), watt_to_dbm(beta * g[s] * p_ssb_w), cell.technology,
                       cell.priority});
    }
    return out;
}

inline std::vector<RsrpMeasurement> measure_rsrp(int ue_id, const Cell& cell, double beta, const SmallScale& h) {
    if (!cell.ssb) throw InvalidParameter("measure_rsrp: cell has no SSB codebook");
    return measure_rsrp(ue_id, cell, beta, h, *cell.ssb, ssb_power_per_re_w(cell));
}

namespace detail {

/// Strict ordering: higher RSRP, then lower cell id, then lower beam.
inline bool stronger(const RsrpMeasurement& a, const RsrpMeasurement& b) {
    if (a.rsrp_dbm != b.rsrp_dbm) return a.rsrp_dbm > b.rsrp_dbm;
    if (a.cell_id != b.cell_id) return a.cell_id < b.cell_id;
    return a.beam_index < b.beam_index;
}

inline AssociationState state_from(const RsrpMeasurement& m) {
    AssociationState s;
    s.ue_id = m.ue_id;
    s.serving_cell = m.cell_id;
    s.serving_ssb_beam = m.beam_index;
    s.rsrp_dbm = m.rsrp_dbm;
    s.technology = m.technology;
    return s;
}

}  // namespace detail

inline AssociationState associate_strongest(std::span<const RsrpMeasurement> measurements) {
    if (measurements.empty()) throw NoCoverage("association: no RSRP measurements");
    const RsrpMeasurement* best = &measurements.front();
    for (const auto& m : measurements)
        if (detail::stronger(m, *best)) best = &m;
    return detail::state_from(*best);
}

/// Highest-priority layer whose strongest beam meets its threshold wins;
/// otherwise the strongest beam overall. Priority-0 layers never qualify
/// on their own and are reached through the fallback.
inline AssociationState priority_reselect(std::span<const RsrpMeasurement> measurements,
                                          const ReselectionPolicy& policy) {
    if (!policy.enabled) return associate_strongest(measurements);
    if (measurements.empty()) throw NoCoverage("reselection: no RSRP measurements");
    std::array<const RsrpMeasurement*, 3> best{nullptr, nullptr, nullptr};
    for (const auto& m : measurements) {
        auto& b = best[static_cast<int>(m.technology)];
        if (!b || detail::stronger(m, *b)) b = &m;
    }
    for (int t = 2; t >= 1; --t) {
        const auto* b = best[t];
        const double thr = policy.threshold_dbm[t];
        if (b && std::isfinite(thr) && b->rsrp_dbm >= thr) return detail::state_from(*b);
    }
    return associate_strongest(measurements);
}

struct BeamAssignment {
    int ue_id = 0;
    int ssb_beam = -1;
    int csirs_direction = -1;
    std::array<int, 2> csirs_beam_pair{-1, -1};  // beam ids 2d (panel 0) and 2d+1 (panel 1)
    std::shared_ptr<const Codebook> codebook;

    /// The serving codeword for layer l; both layers share the per-panel vector.
    const cvec& codeword(int layer) const {
        (void)layer;
        return codebook->codewords.at(csirs_direction);
    }
};

/// Index of the largest value, lowest index on ties.
inline int argmax_lowest(std::span<const double> v) {
    int best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = static_cast<int>(i);
    return best;
}

/// Strongest CSI-RS direction on panel 0, averaged over PRB groups.
inline int strongest_csirs_direction(const SmallScale& h, const Codebook& csirs) {
    thread_local std::vector<double> g, acc;
    acc.assign(csirs.direction_count(), 0.0);
    for (const auto& grp : h.groups) {
        csirs.gains(grp.pol[0], g);
        for (std::size_t d = 0; d < g.size(); ++d) acc[d] += g[d];
    }
    return argmax_lowest(acc);
}

inline BeamAssignment select_csirs_beam(const AssociationState& state, const Cell& serving, const SmallScale& h) {
    if (!serving.csirs) throw InvalidParameter("select_csirs_beam: cell has no CSI-RS codebook");
    if (serving.id != state.serving_cell) throw InvalidParameter("select_csirs_beam: cell is not the serving cell");
    BeamAssignment b;
    b.ue_id = state.ue_id;
    b.ssb_beam = state.serving_ssb_beam;
    b.codebook = serving.csirs;
    b.csirs_direction = strongest_csirs_direction(h, *serving.csirs);
    b.csirs_beam_pair = {2 * b.csirs_direction, 2 * b.csirs_direction + 1};
    return b;
}

}  // namespace fr3sim
