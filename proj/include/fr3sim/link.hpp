#pragma once

#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fr3sim/beamforming.hpp"
#include "fr3sim/channel.hpp"
#include "fr3sim/errors.hpp"

namespace fr3sim {

/// How UEs of one cell share the air interface.
///  - PaperLiteral: every UE of a cell is co-scheduled on every PRB, so the
///    intra-cell sum is live, and resources are still divided by N_UE in the
///    rate.
///  - Orthogonal: round-robin FDM; no intra-cell interference, the served UE
///    gets the full per-PRB power and other cells radiate their time-averaged
///    beam mix.
///  - MuMimo: every active CSI-RS direction of a cell is co-scheduled with
///    power split evenly over them; UEs sharing a direction take turns, so
///    the rate divides by the UEs on that direction and only the other
///    directions interfere.
enum class SchedulingMode { PaperLiteral, Orthogonal, MuMimo };

inline std::string to_string(SchedulingMode m) {
    switch (m) {
        case SchedulingMode::PaperLiteral: return "paper-literal";
        case SchedulingMode::Orthogonal: return "orthogonal";
        case SchedulingMode::MuMimo: return "mu-mimo";
    }
    return "?";
}

inline SchedulingMode scheduling_mode_from_string(const std::string& s) {
    if (s == "paper-literal") return SchedulingMode::PaperLiteral;
    if (s == "orthogonal") return SchedulingMode::Orthogonal;
    if (s == "mu-mimo") return SchedulingMode::MuMimo;
    throw UsageError("unknown scheduling mode '" + s + "' (expected paper-literal, orthogonal or mu-mimo)");
}

inline double split_power(double tx_power_w, int n_prb, int n_layers) {
    if (n_prb < 1 || n_layers < 1) throw InvalidParameter("split_power: PRB and layer counts must be at least 1");
    return tx_power_w / (static_cast<double>(n_prb) * n_layers);
}

/// Downlink allocation of one UE; the same power is used on both layers and
/// on every PRB of the cell.
struct PrbAllocation {
    int ue_id = 0;
    int cell = 0;                      // index of the serving cell
    int direction = 0;                 // CSI-RS direction
    double signal_power_w = 0.0;       // p used for this UE's own layers
    double interference_power_w = 0.0; // average power its beam radiates towards others
    int rate_share = 1;                // UEs the cell's resources are divided among in the rate
};

/// Occupancy of one cell: its UE count, the UEs on the direction of interest
/// and how many directions carry at least one UE.
struct CellOccupancy {
    int n_ue = 1;
    int n_on_direction = 1;
    int n_active_directions = 1;
};

/// Powers and rate share of one UE with `layers` layers.
inline PrbAllocation allocate_ue(int ue_id, int cell, int direction, double tx_power_w, int n_prb, int layers,
                                 const CellOccupancy& occ, SchedulingMode mode) {
    if (occ.n_ue < 1 || occ.n_on_direction < 1 || occ.n_active_directions < 1)
        throw InvalidParameter("allocation: occupancy counts must be at least 1");
    PrbAllocation a{ue_id, cell, direction, 0.0, 0.0, occ.n_ue};
    switch (mode) {
        case SchedulingMode::PaperLiteral:
            a.signal_power_w = a.interference_power_w = split_power(tx_power_w, n_prb, layers * occ.n_ue);
            break;
        case SchedulingMode::Orthogonal:
            a.signal_power_w = split_power(tx_power_w, n_prb, layers);
            a.interference_power_w = a.signal_power_w / occ.n_ue;
            break;
        case SchedulingMode::MuMimo:
            a.signal_power_w = split_power(tx_power_w, n_prb, layers * occ.n_active_directions);
            a.interference_power_w = a.signal_power_w / occ.n_on_direction;
            a.rate_share = occ.n_on_direction;
            break;
    }
    return a;
}

/// Everything needed to evaluate the per-PRB SINR of every UE: channels for
/// all (UE, cell) pairs, allocations, codebooks and noise.
struct LinkSnapshot {
    SchedulingMode mode = SchedulingMode::PaperLiteral;
    std::vector<std::vector<double>> beta;        // [ue][cell]
    std::vector<std::vector<SmallScale>> channel; // [ue][cell]
    std::vector<PrbAllocation> allocation;        // [ue]
    std::vector<const Codebook*> codebook;        // CSI-RS codebook per cell
    std::vector<double> noise_w;                  // per-PRB noise power per cell
    std::vector<int> carrier_group;               // co-channel cells share a group id
};

/// Per-direction radiated power of each cell, summed over its UEs.
inline std::vector<std::vector<double>> direction_weights(const LinkSnapshot& s) {
    std::vector<std::vector<double>> w(s.codebook.size());
    for (std::size_t c = 0; c < s.codebook.size(); ++c) w[c].assign(s.codebook[c]->direction_count(), 0.0);
    for (const auto& a : s.allocation) w[a.cell][a.direction] += a.interference_power_w;
    return w;
}

/// Interference received through one cell: beta * sum_d weight_d * gain_d.
inline double weighted_gain(double beta, std::span<const double> gains, std::span<const double> weights) {
    double s = 0.0;
    for (std::size_t d = 0; d < gains.size(); ++d)
        if (weights[d] != 0.0) s += weights[d] * gains[d];
    return beta * s;
}

struct SinrTerms {
    double signal = 0.0;
    double intra = 0.0;
    double inter = 0.0;
    double noise = 0.0;

    double sinr() const { return signal / (intra + inter + noise); }
};

/// Adds the contribution of one co-channel cell given the UE's gains towards
/// each of its directions.
inline void add_cell_terms(SinrTerms& t, bool serving, double beta, std::span<const double> gains,
                           std::span<const double> weights, const PrbAllocation& a, SchedulingMode mode) {
    if (!serving) {
        t.inter += weighted_gain(beta, gains, weights);
        return;
    }
    t.signal = beta * gains[a.direction] * a.signal_power_w;
    if (mode == SchedulingMode::Orthogonal) return;
    thread_local std::vector<double> own;
    own.assign(weights.begin(), weights.end());
    // Co-scheduled UEs on the victim's own direction interfere only when
    // every UE is on air at once.
    if (mode == SchedulingMode::PaperLiteral)
        own[a.direction] -= a.interference_power_w;
    else
        own[a.direction] = 0.0;
    t.intra = weighted_gain(beta, gains, own);
}

/// Evaluates the SINR terms of `ue` on `layer` and PRB group `group`, with
/// precomputed direction weights.
inline SinrTerms sinr_terms(const LinkSnapshot& s, const std::vector<std::vector<double>>& weights, int ue,
                            int layer, int group) {
    const auto& a = s.allocation.at(ue);
    const int serving = a.cell;
    SinrTerms t;
    t.noise = s.noise_w.at(serving);
    std::vector<double> g;
    for (std::size_t c = 0; c < s.codebook.size(); ++c) {
        if (s.carrier_group[c] != s.carrier_group[serving]) continue;
        const auto& h = s.channel.at(ue).at(c);
        if (static_cast<std::size_t>(group) >= h.groups.size()) throw ShapeMismatch("sinr: PRB group out of range");
        s.codebook[c]->gains(h.groups[group].pol[layer], g);
        add_cell_terms(t, static_cast<int>(c) == serving, s.beta[ue][c], g, weights[c], a, s.mode);
    }
    return t;
}

inline double sinr(const LinkSnapshot& s, int ue, int layer, int group = 0) {
    return sinr_terms(s, direction_weights(s), ue, layer, group).sinr();
}

/// Mutual-information average: C^-1(mean C(gamma_k)), C(x) = log2(1+x).
inline double effective_sinr(std::span<const double> per_prb) {
    if (per_prb.empty()) throw InvalidParameter("effective_sinr: empty PRB set");
    double acc = 0.0;
    for (double g : per_prb) acc += std::log2(1.0 + g);
    return std::exp2(acc / static_cast<double>(per_prb.size())) - 1.0;
}

/// Achievable rate in bit/s: sum over layers of N_PRB B_PRB / N_UE log2(1+gamma).
inline double ue_rate(int n_prb, double prb_bandwidth_hz, int n_ue, std::span<const double> layer_sinr) {
    if (n_ue < 1) throw InvalidParameter("ue_rate: resource share must be at least one UE");
    double r = 0.0;
    for (double g : layer_sinr) r += n_prb * prb_bandwidth_hz / n_ue * std::log2(1.0 + g);
    return r;
}

}  // namespace fr3sim
