#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "fr3sim/errors.hpp"
#include "fr3sim/geometry.hpp"
#include "fr3sim/radio_catalog.hpp"
#include "fr3sim/rng.hpp"
#include "fr3sim/units.hpp"

namespace fr3sim {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class ChannelModel { UMa, UMi };

/// Hotspot deployments follow the UMi variant.
inline ChannelModel channel_model_for(SiteKind k) {
    return k == SiteKind::UMa ? ChannelModel::UMa : ChannelModel::UMi;
}

struct ShadowingParams {
    double los_std_db = 4.0;
    double nlos_std_db = 6.0;
    double los_corr_m = 37.0;
    double nlos_corr_m = 50.0;
};

struct ChannelParams {
    ShadowingParams uma{4.0, 6.0, 37.0, 50.0};
    ShadowingParams umi{4.0, 7.82, 10.0, 13.0};
    double rician_k_los_db = 9.0;
    double noise_figure_db = 9.0;
    double temperature_k = 290.0;
    double indoor_distance_max_m = 25.0;
    double element_peak_dbi = 8.0;
    double element_hpbw_deg = 65.0;
    double element_max_atten_db = 30.0;
    double min_distance_2d_m = 10.0;  // path-loss evaluation floor
    int shadow_sinusoids = 256;
    int prb_groups = 1;

    const ShadowingParams& shadowing(ChannelModel m) const { return m == ChannelModel::UMa ? uma : umi; }
};

// ---------------------------------------------------------------------------
// Link geometry

struct LinkGeometry {
    double d2d = 0.0;
    double d3d = 0.0;
    double azimuth_deg = 0.0;  // from the cell's horizontal boresight, wrapped to [-180, 180)
    double zenith_deg = 90.0;  // 90° is horizontal, >90° points down
    double h_bs = 0.0;
    double h_ut = 0.0;
};

inline LinkGeometry link_geometry(const Vec3& ue, const Vec3& bs, double boresight_deg) {
    LinkGeometry g;
    const double dx = ue.x - bs.x;
    const double dy = ue.y - bs.y;
    const double dz = ue.z - bs.z;
    g.d2d = std::hypot(dx, dy);
    g.d3d = std::sqrt(g.d2d * g.d2d + dz * dz);
    g.azimuth_deg = g.d2d > 0.0 ? wrap_deg(rad2deg(std::atan2(dy, dx)) - boresight_deg) : 0.0;
    g.zenith_deg = rad2deg(std::atan2(g.d2d, dz));
    g.h_bs = bs.z;
    g.h_ut = ue.z;
    return g;
}

inline LinkGeometry link_geometry(const Ue& ue, const Cell& cell) {
    return link_geometry(ue.position, cell.antenna_position(), cell.boresight_deg);
}

// ---------------------------------------------------------------------------
// LOS probability and path loss (3GPP UMa / UMi street canyon)

inline double los_probability(ChannelModel model, double d2d_out, double h_ut = 1.5) {
    if (d2d_out <= 18.0) return 1.0;
    if (model == ChannelModel::UMi)
        return 18.0 / d2d_out + std::exp(-d2d_out / 36.0) * (1.0 - 18.0 / d2d_out);
    const double c = h_ut <= 13.0 ? 0.0 : std::pow((h_ut - 13.0) / 10.0, 1.5);
    return (18.0 / d2d_out + std::exp(-d2d_out / 63.0) * (1.0 - 18.0 / d2d_out)) *
           (1.0 + c * 1.25 * std::pow(d2d_out / 100.0, 3.0) * std::exp(-d2d_out / 150.0));
}

inline double los_probability(const Ue& ue, const Cell& cell) {
    const auto g = link_geometry(ue, cell);
    return los_probability(channel_model_for(cell.site_kind), g.d2d, g.h_ut);
}

/// Path loss in dB (positive = loss). NLOS returns max(LOS, NLOS').
inline double path_loss_db(ChannelModel model, double d2d, double d3d, double h_bs, double h_ut,
                           double carrier_hz, bool los) {
    const double fc = carrier_hz / 1e9;
    if (!(fc >= 0.5 && fc <= 100.0))
        throw ModelDomain("path loss: carrier " + std::to_string(fc) + " GHz outside 0.5-100 GHz");
    const double h_e = 1.0;
    const double d_bp = 4.0 * (h_bs - h_e) * (h_ut - h_e) * carrier_hz / kSpeedOfLight;
    const double dh2 = (h_bs - h_ut) * (h_bs - h_ut);

    double pl_los = 0.0;
    if (model == ChannelModel::UMa) {
        if (d2d <= d_bp)
            pl_los = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc);
        else
            pl_los = 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.0 * std::log10(d_bp * d_bp + dh2);
    } else {
        if (d2d <= d_bp)
            pl_los = 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc);
        else
            pl_los = 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) - 9.5 * std::log10(d_bp * d_bp + dh2);
    }
    if (los) return pl_los;

    const double pl_nlos = model == ChannelModel::UMa
                               ? 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc) - 0.6 * (h_ut - 1.5)
                               : 22.4 + 35.3 * std::log10(d3d) + 21.3 * std::log10(fc) - 0.3 * (h_ut - 1.5);
    return std::max(pl_los, pl_nlos);
}

inline double path_loss_db(const Ue& ue, const Cell& cell, bool los, const ChannelParams& p = {}) {
    auto g = link_geometry(ue, cell);
    const double d2d = std::max(g.d2d, p.min_distance_2d_m);
    const double dz = g.h_bs - g.h_ut;
    return path_loss_db(channel_model_for(cell.site_kind), d2d, std::sqrt(d2d * d2d + dz * dz), g.h_bs, g.h_ut,
                        cell.carrier_hz, los);
}

/// Outdoor-to-indoor low-loss building model.
inline double o2i_loss_db(double carrier_hz, double d2d_in) {
    const double fc = carrier_hz / 1e9;
    const double l_glass = 2.0 + 0.2 * fc;
    const double l_concrete = 5.0 + 4.0 * fc;
    const double through_wall =
        5.0 - 10.0 * std::log10(0.3 * std::pow(10.0, -l_glass / 10.0) + 0.7 * std::pow(10.0, -l_concrete / 10.0));
    return through_wall + 0.5 * d2d_in;
}

// ---------------------------------------------------------------------------
// Antenna element pattern

inline double element_gain_dbi(double azimuth_deg, double zenith_deg, double vertical_boresight_deg,
                               const ChannelParams& p = {}) {
    const double az = wrap_deg(azimuth_deg);
    const double a_h = -std::min(12.0 * std::pow(az / p.element_hpbw_deg, 2.0), p.element_max_atten_db);
    const double a_v = -std::min(12.0 * std::pow((zenith_deg - vertical_boresight_deg) / p.element_hpbw_deg, 2.0),
                                 p.element_max_atten_db);
    return p.element_peak_dbi - std::min(-(a_h + a_v), p.element_max_atten_db);
}

inline double element_gain(const Ue& ue, const Cell& cell, const ChannelParams& p = {}) {
    const auto g = link_geometry(ue, cell);
    return element_gain_dbi(g.azimuth_deg, g.zenith_deg, cell.vertical_boresight_deg, p);
}

// ---------------------------------------------------------------------------
// Spatially correlated shadowing

/// Zero-mean unit-variance isotropic field with correlation exp(-d/d_corr),
/// synthesised as a sum of random sinusoids whose wave vectors follow the
/// bivariate Cauchy law (the spectral measure of the exponential kernel).
class ShadowField {
public:
    ShadowField() = default;

    ShadowField(double corr_distance_m, int n_sinusoids, Stream& rng) {
        if (!(corr_distance_m > 0.0)) throw InvalidParameter("shadow field: correlation distance must be positive");
        if (n_sinusoids < 1) throw InvalidParameter("shadow field: need at least one sinusoid");
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        kx_.resize(n_sinusoids);
        ky_.resize(n_sinusoids);
        phase_.resize(n_sinusoids);
        for (int n = 0; n < n_sinusoids; ++n) {
            double w = 0.0;
            while (w == 0.0) w = std::abs(gauss(rng));
            kx_[n] = gauss(rng) / (w * corr_distance_m);
            ky_[n] = gauss(rng) / (w * corr_distance_m);
            phase_[n] = phase(rng);
        }
        scale_ = std::sqrt(2.0 / n_sinusoids);
    }

    double operator()(Vec2 p) const {
        double s = 0.0;
        for (std::size_t n = 0; n < kx_.size(); ++n) s += std::cos(kx_[n] * p.x + ky_[n] * p.y + phase_[n]);
        return scale_ * s;
    }

private:
    std::vector<double> kx_, ky_, phase_;
    double scale_ = 0.0;
};

/// The two unit fields of a site, one per LOS state (they differ in
/// correlation distance). All sectors and carriers of a site share them.
struct SiteShadowing {
    ShadowField los;
    ShadowField nlos;

    SiteShadowing() = default;
    SiteShadowing(ChannelModel model, const ChannelParams& p, std::uint64_t seed, std::uint64_t site_key) {
        const auto& s = p.shadowing(model);
        auto rng_los = substream(seed, {tag("shadow-los"), site_key});
        auto rng_nlos = substream(seed, {tag("shadow-nlos"), site_key});
        los = ShadowField(s.los_corr_m, p.shadow_sinusoids, rng_los);
        nlos = ShadowField(s.nlos_corr_m, p.shadow_sinusoids, rng_nlos);
    }

    double db(Vec2 pos, bool is_los, const ShadowingParams& s) const {
        return is_los ? s.los_std_db * los(pos) : s.nlos_std_db * nlos(pos);
    }
};

inline std::uint64_t site_key(SiteKind kind, int site_index) {
    return derive_seed(tag("site"), {static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(site_index)});
}

/// Shadowing in dB for every (UE, cell) pair given the link LOS states.
inline std::vector<std::vector<double>> shadow_field(const std::vector<Ue>& ues, const std::vector<Cell>& cells,
                                                     const std::vector<std::vector<bool>>& los, std::uint64_t seed,
                                                     const ChannelParams& p = {}) {
    if (los.size() != ues.size()) throw ShapeMismatch("shadow_field: LOS matrix rows must match UE count");
    std::vector<SiteShadowing> fields;
    fields.reserve(cells.size());
    for (const auto& c : cells)
        fields.emplace_back(channel_model_for(c.site_kind), p, seed, site_key(c.site_kind, c.site_index));
    std::vector<std::vector<double>> out(ues.size(), std::vector<double>(cells.size()));
    for (std::size_t u = 0; u < ues.size(); ++u) {
        if (los[u].size() != cells.size()) throw ShapeMismatch("shadow_field: LOS matrix columns must match cells");
        for (std::size_t c = 0; c < cells.size(); ++c)
            out[u][c] = fields[c].db(ues[u].position.xy(), los[u][c],
                                     p.shadowing(channel_model_for(cells[c].site_kind)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Large-scale gain

struct LargeScale {
    double path_loss_db = 0.0;
    double shadow_db = 0.0;
    double elem_gain_db = 0.0;
    double o2i_loss_db = 0.0;
    double beta_linear = 0.0;
    bool los = false;
};

inline LargeScale large_scale_gain(double path_loss_db, double shadow_db, double elem_gain_db, bool los,
                                   double o2i_loss_db = 0.0) {
    LargeScale ls{path_loss_db, shadow_db, elem_gain_db, o2i_loss_db, 0.0, los};
    ls.beta_linear = db_to_linear(-path_loss_db + shadow_db + elem_gain_db - o2i_loss_db);
    return ls;
}

/// Full evaluation for one link; `d2d_in` is the indoor distance (ignored
/// for outdoor UEs).
inline LargeScale large_scale_gain(const Ue& ue, const Cell& cell, double shadow_db, bool los, double d2d_in,
                                   const ChannelParams& p = {}) {
    const double pl = path_loss_db(ue, cell, los, p);
    const double g = element_gain(ue, cell, p);
    const double o2i = ue.indoor ? o2i_loss_db(cell.carrier_hz, d2d_in) : 0.0;
    return large_scale_gain(pl, shadow_db, g, los, o2i);
}

inline double noise_power_w(double bandwidth_hz, const ChannelParams& p = {}) {
    return kBoltzmann * p.temperature_k * bandwidth_hz * db_to_linear(p.noise_figure_db);
}

// ---------------------------------------------------------------------------
// Small-scale fading

/// Per-polarisation channel columns; element (h, v) sits at index h*M_v + v.
struct PolarizedChannel {
    std::array<cvec, 2> pol;
};

struct SmallScale {
    std::vector<PolarizedChannel> groups;  // one per PRB group
    double rician_k_linear = 0.0;
};

/// Unit-modulus plane-wave response of an M_h x M_v half-wavelength panel.
inline void steering_vector(int m_h, int m_v, double azimuth_deg, double zenith_deg, cplx global_phase,
                            cvec& out) {
    const double th = deg2rad(zenith_deg);
    const double ph = deg2rad(azimuth_deg);
    const double u = std::sin(th) * std::sin(ph);
    const double v = std::cos(th);
    out.resize(static_cast<std::size_t>(m_h) * m_v);
    const cplx step_h = std::polar(1.0, kPi * u);
    const cplx step_v = std::polar(1.0, kPi * v);
    cplx ph_h = global_phase;
    for (int h = 0; h < m_h; ++h) {
        cplx ph_v = ph_h;
        for (int q = 0; q < m_v; ++q) {
            out[static_cast<std::size_t>(h) * m_v + q] = ph_v;
            ph_v *= step_v;
        }
        ph_h *= step_h;
    }
}

/// Draws the Rician channel of one link into `out`, reusing its storage.
/// The second polarisation is the first rotated by 90 degrees.
inline void draw_small_scale(const LinkGeometry& g, const Cell& cell, bool los, double rician_k_linear,
                             int prb_groups, Stream& rng, SmallScale& out) {
    const std::size_t n = static_cast<std::size_t>(cell.m_h) * cell.m_v;
    const double lambda = kSpeedOfLight / cell.carrier_hz;
    out.rician_k_linear = los ? rician_k_linear : 0.0;
    out.groups.resize(std::max(1, prb_groups));
    const double k = out.rician_k_linear;
    const bool pure_los = std::isinf(k);
    const double a_los = pure_los ? 1.0 : std::sqrt(k / (1.0 + k));
    const double a_nlos = pure_los ? 0.0 : std::sqrt(1.0 / (1.0 + k));

    thread_local cvec los_vec;
    if (a_los > 0.0) {
        const cplx global = std::polar(1.0, -2.0 * kPi * std::fmod(g.d3d / lambda, 1.0));
        steering_vector(cell.m_h, cell.m_v, g.azimuth_deg, g.zenith_deg, global, los_vec);
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    const cplx rot(0.0, 1.0);
    for (auto& grp : out.groups) {
        auto& h1 = grp.pol[0];
        auto& h2 = grp.pol[1];
        h1.resize(n);
        h2.resize(n);
        for (std::size_t m = 0; m < n; ++m) {
            cplx v = a_los > 0.0 ? a_los * los_vec[m] : cplx{};
            if (a_nlos > 0.0) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                v += a_nlos * cplx(re, im);
            }
            h1[m] = v;
            h2[m] = rot * v;
        }
    }
}

inline SmallScale small_scale(const Ue& ue, const Cell& cell, bool los, Stream& rng, const ChannelParams& p = {}) {
    SmallScale out;
    draw_small_scale(link_geometry(ue, cell), cell, los, db_to_linear(p.rician_k_los_db), p.prb_groups, rng, out);
    return out;
}

}  // namespace fr3sim
