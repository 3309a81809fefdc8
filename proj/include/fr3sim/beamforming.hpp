#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "fr3sim/channel.hpp"
#include "fr3sim/errors.hpp"
#include "fr3sim/radio_catalog.hpp"
#include "fr3sim/units.hpp"

namespace fr3sim {

enum class CodebookKind { SSB, CsiRs };

struct BeamDirection {
    int h = 0;  // horizontal DFT index
    int v = 0;  // vertical DFT index
};

/// Grid-of-beams over one polarisation panel. Every codeword is the
/// Kronecker product of a horizontal and a vertical DFT factor, so gains
/// for the whole grid can be evaluated separably.
struct Codebook {
    CodebookKind kind = CodebookKind::SSB;
    int m_h = 1;
    int m_v = 1;
    int o_h = 1;
    int o_v = 1;
    int panels = 1;
    double boresight_azimuth_deg = 0.0;
    double boresight_zenith_deg = 90.0;
    std::vector<double> u_grid;  // horizontal spatial frequency per h index
    std::vector<double> v_grid;  // vertical spatial frequency per v index
    std::vector<cvec> h_factors;
    std::vector<cvec> v_factors;
    std::vector<BeamDirection> directions;
    std::vector<cvec> codewords;  // one per direction, length m_h*m_v

    std::size_t direction_count() const { return directions.size(); }
    /// Beams as counted in the radio table: directions times panels.
    std::size_t beam_count() const { return directions.size() * static_cast<std::size_t>(panels); }
    std::size_t panel_size() const { return static_cast<std::size_t>(m_h) * m_v; }

    /// |h . w_d|^2 for every direction d, written to `out`.
    void gains(const cvec& h, std::vector<double>& out) const {
        if (h.size() != panel_size()) throw ShapeMismatch("codebook gains: channel length does not match panel");
        thread_local std::vector<cplx> partial;  // [v index][h element]
        const std::size_t nv = v_factors.size();
        partial.assign(nv * m_h, cplx{});
        for (std::size_t q = 0; q < nv; ++q) {
            const auto& b = v_factors[q];
            for (int m = 0; m < m_h; ++m) {
                cplx s{};
                const cplx* row = h.data() + static_cast<std::size_t>(m) * m_v;
                for (int n = 0; n < m_v; ++n) s += row[n] * b[n];
                partial[q * m_h + m] = s;
            }
        }
        out.resize(directions.size());
        for (std::size_t d = 0; d < directions.size(); ++d) {
            const auto& a = h_factors[directions[d].h];
            const cplx* t = partial.data() + static_cast<std::size_t>(directions[d].v) * m_h;
            cplx s{};
            for (int m = 0; m < m_h; ++m) s += a[m] * t[m];
            out[d] = std::norm(s);
        }
    }

    /// Pointing direction of a beam as (azimuth, zenith) in degrees in the
    /// panel's local frame; azimuth is NaN when the beam is invisible.
    std::pair<double, double> pointing(std::size_t d) const {
        const double v = std::clamp(v_grid[directions[d].v], -1.0, 1.0);
        const double th = std::acos(v);
        const double s = std::sin(th);
        const double ratio = s > 0.0 ? u_grid[directions[d].h] / s : 0.0;
        const double az = std::abs(ratio) <= 1.0 ? rad2deg(std::asin(ratio)) : std::nan("");
        return {az, rad2deg(th)};
    }
};

namespace detail {

inline std::vector<double> dft_grid(int n_elems, int oversampling, double centre) {
    const int n = n_elems * oversampling;
    std::vector<double> g(n);
    for (int p = 0; p < n; ++p) g[p] = centre + (2.0 * p - n + 1.0) / n;
    return g;
}

inline cvec dft_factor(int n_elems, double spatial_freq) {
    cvec f(n_elems);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_elems));
    for (int m = 0; m < n_elems; ++m) f[m] = std::polar(scale, -kPi * m * spatial_freq);
    return f;
}

inline void materialise(Codebook& cb) {
    cb.codewords.clear();
    cb.codewords.reserve(cb.directions.size());
    for (const auto& d : cb.directions) {
        const auto& a = cb.h_factors[d.h];
        const auto& b = cb.v_factors[d.v];
        cvec w(cb.panel_size());
        for (int m = 0; m < cb.m_h; ++m)
            for (int n = 0; n < cb.m_v; ++n) w[static_cast<std::size_t>(m) * cb.m_v + n] = a[m] * b[n];
        cb.codewords.push_back(std::move(w));
    }
}

inline Codebook dft_skeleton(int m_h, int m_v, int o_h, int o_v, double az_deg, double zenith_deg) {
    if (m_h < 1 || m_v < 1) throw InvalidParameter("codebook: array dimensions must be at least 1");
    if (o_h < 1 || o_v < 1) throw InvalidParameter("codebook: oversampling must be at least 1");
    Codebook cb;
    cb.m_h = m_h;
    cb.m_v = m_v;
    cb.o_h = o_h;
    cb.o_v = o_v;
    cb.boresight_azimuth_deg = az_deg;
    cb.boresight_zenith_deg = zenith_deg;
    // The horizontal fan is centred on the panel normal; the vertical fan on
    // the electrical boresight.
    const double v_centre = std::abs(zenith_deg - 90.0) < 1e-12 ? 0.0 : std::cos(deg2rad(zenith_deg));
    cb.u_grid = dft_grid(m_h, o_h, 0.0);
    cb.v_grid = dft_grid(m_v, o_v, v_centre);
    for (double u : cb.u_grid) cb.h_factors.push_back(dft_factor(m_h, u));
    for (double v : cb.v_grid) cb.v_factors.push_back(dft_factor(m_v, v));
    return cb;
}

/// Vertical index nearest the boresight from below (first downward row).
inline int central_down_row(int n_rows) { return n_rows % 2 == 0 ? n_rows / 2 - 1 : (n_rows - 1) / 2; }

/// `count` indices spread uniformly over [0, n).
inline std::vector<int> uniform_subset(int n, int count) {
    std::vector<int> idx(count);
    for (int k = 0; k < count; ++k) idx[k] = static_cast<int>(std::floor((k + 0.5) * n / count));
    return idx;
}

}  // namespace detail

/// Full 2D-DFT grid of O_h*M_h x O_v*M_v single-panel codewords; direction
/// index d = h * (O_v*M_v) + v.
inline Codebook build_dft_codebook(int m_h, int m_v, int o_h = 1, int o_v = 1, double boresight_az_deg = 0.0,
                                   double boresight_zenith_deg = 90.0) {
    auto cb = detail::dft_skeleton(m_h, m_v, o_h, o_v, boresight_az_deg, boresight_zenith_deg);
    for (int p = 0; p < m_h * o_h; ++p)
        for (int q = 0; q < m_v * o_v; ++q) cb.directions.push_back({p, q});
    detail::materialise(cb);
    return cb;
}

/// SSB beams on a single panel. Up to M_h beams form a horizontal fan on
/// the first downward row; larger counts add whole central rows.
inline Codebook ssb_codebook(const CarrierSpec& carrier, double boresight_az_deg = 0.0,
                             double boresight_zenith_deg = 90.0) {
    auto cb = detail::dft_skeleton(carrier.m_h, carrier.m_v, 1, 1, boresight_az_deg, boresight_zenith_deg);
    cb.kind = CodebookKind::SSB;
    cb.panels = 1;
    const int n = carrier.n_ssb_beams;
    if (n < 1 || n > carrier.m_h * carrier.m_v)
        throw InvalidParameter("SSB codebook: beam count must be in [1, M_h*M_v]");
    if (n <= carrier.m_h) {
        const int row = detail::central_down_row(carrier.m_v);
        for (int p : detail::uniform_subset(carrier.m_h, n)) cb.directions.push_back({p, row});
    } else {
        if (n % carrier.m_h != 0) throw InvalidParameter("SSB codebook: beam count must be a multiple of M_h");
        const int rows = n / carrier.m_h;
        const int first = (carrier.m_v - rows) / 2;
        for (int p = 0; p < carrier.m_h; ++p)
            for (int q = first; q < first + rows; ++q) cb.directions.push_back({p, q});
    }
    detail::materialise(cb);
    return cb;
}

inline Codebook ssb_codebook(const RadioType& radio, Technology t) { return ssb_codebook(radio.carrier(t)); }

/// Dual-panel CSI-RS beams: |W| / 2 directions, each sent on both
/// polarisations. Subsets keep every horizontal index on the central rows.
inline Codebook csirs_codebook(const CarrierSpec& carrier, double boresight_az_deg = 0.0,
                               double boresight_zenith_deg = 90.0) {
    auto cb = detail::dft_skeleton(carrier.m_h, carrier.m_v, 1, 1, boresight_az_deg, boresight_zenith_deg);
    cb.kind = CodebookKind::CsiRs;
    cb.panels = 2;
    if (carrier.n_csirs_beams % 2 != 0) throw InvalidParameter("CSI-RS codebook: beam count must be even");
    const int n = carrier.n_csirs_beams / 2;
    if (n < 1 || n > carrier.m_h * carrier.m_v)
        throw InvalidParameter("CSI-RS codebook: direction count must be in [1, M_h*M_v]");
    if (n < carrier.m_h) {
        const int row = detail::central_down_row(carrier.m_v);
        for (int p : detail::uniform_subset(carrier.m_h, n)) cb.directions.push_back({p, row});
    } else {
        if (n % carrier.m_h != 0) throw InvalidParameter("CSI-RS codebook: direction count must be a multiple of M_h");
        const int rows = n / carrier.m_h;
        const int first = (carrier.m_v - rows) / 2;
        for (int p = 0; p < carrier.m_h; ++p)
            for (int q = first; q < first + rows; ++q) cb.directions.push_back({p, q});
    }
    detail::materialise(cb);
    return cb;
}

inline Codebook csirs_codebook(const RadioType& radio, Technology t) { return csirs_codebook(radio.carrier(t)); }

/// |h . w|^2 with the plain (non-conjugating) product h w.
inline double beam_amplitude_gain(const cvec& h, const cvec& w) {
    if (h.size() != w.size()) throw ShapeMismatch("beam gain: channel and codeword lengths differ");
    cplx s{};
    for (std::size_t m = 0; m < h.size(); ++m) s += h[m] * w[m];
    return std::norm(s);
}

inline double beam_amplitude_gain(const SmallScale& h, int panel, const cvec& w, std::size_t group = 0) {
    if (panel < 0 || panel > 1) throw ShapeMismatch("beam gain: panel must be 0 or 1");
    if (group >= h.groups.size()) throw ShapeMismatch("beam gain: PRB group out of range");
    return beam_amplitude_gain(h.groups[group].pol[panel], w);
}

/// Builds (and shares) SSB / CSI-RS codebooks for every cell.
inline void attach_codebooks(std::vector<Cell>& cells, const RadioCatalog& catalog) {
    using Key = std::tuple<std::string, int, double>;
    std::map<Key, std::pair<std::shared_ptr<const Codebook>, std::shared_ptr<const Codebook>>> cache;
    for (auto& c : cells) {
        Key k{c.radio_type, static_cast<int>(c.technology), c.vertical_boresight_deg};
        auto it = cache.find(k);
        if (it == cache.end()) {
            const auto& carrier = catalog.lookup(c.radio_type).carrier(c.technology);
            auto ssb = std::make_shared<const Codebook>(ssb_codebook(carrier, 0.0, c.vertical_boresight_deg));
            auto csi = std::make_shared<const Codebook>(csirs_codebook(carrier, 0.0, c.vertical_boresight_deg));
            it = cache.emplace(k, std::make_pair(ssb, csi)).first;
        }
        c.ssb = it->second.first;
        c.csirs = it->second.second;
    }
}

/// Horizontal and vertical pattern cuts through each beam's peak, element
/// pattern included, as CSV rows.
inline void write_beam_diagram(std::ostream& os, const Codebook& cb, const std::string& label,
                               const ChannelParams& p = {}, double step_deg = 1.0) {
    cvec a;
    for (std::size_t d = 0; d < cb.direction_count(); ++d) {
        auto [az0, zen0] = cb.pointing(d);
        if (std::isnan(az0)) az0 = 0.0;
        auto emit = [&](const char* cut, double az, double zen) {
            steering_vector(cb.m_h, cb.m_v, az, zen, cplx{1.0, 0.0}, a);
            const double g = beam_amplitude_gain(a, cb.codewords[d]);
            const double elem = element_gain_dbi(az, zen, cb.boresight_zenith_deg, p);
            const double db = g > 0.0 ? elem + linear_to_db(g) : -300.0;
            os << label << ',' << d << ',' << cut << ',' << cb.boresight_azimuth_deg + az << ',' << 90.0 - zen << ','
               << db << '\n';
        };
        for (double az = -90.0; az <= 90.0 + 1e-9; az += step_deg) emit("horizontal", az, zen0);
        for (double el = -90.0; el <= 90.0 + 1e-9; el += step_deg) emit("vertical", az0, 90.0 - el);
    }
}

}  // namespace fr3sim
