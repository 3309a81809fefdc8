#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "fr3sim/errors.hpp"
#include "fr3sim/rng.hpp"
#include "fr3sim/units.hpp"

namespace fr3sim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    Vec2 xy() const { return {x, y}; }
};

enum class SiteKind { UMa, UMi, Hotspot };

inline std::string to_string(SiteKind k) {
    switch (k) {
        case SiteKind::UMa: return "UMa";
        case SiteKind::UMi: return "UMi";
        case SiteKind::Hotspot: return "HS";
    }
    return "?";
}

struct SitePlan {
    std::vector<Vec2> sites;
    std::vector<int> ring;  // hex tier of each site; 0 for hotspot plans
    double isd = 0.0;
    int n_tiers = 0;
    SiteKind kind = SiteKind::UMa;

    std::size_t size() const { return sites.size(); }
};

/// Horizontal sector boresights in degrees, counter-clockwise from +x.
inline constexpr std::array<double, 3> kSectorBoresights{30.0, 150.0, 270.0};

/// Hexagonal grid with neighbours along 0°, 60°, ..., sorted by ring then
/// angle; site 0 sits at `origin`.
inline SitePlan build_hex_grid(double isd, int n_tiers, Vec2 origin = {},
                               SiteKind kind = SiteKind::UMa) {
    if (!(isd > 0.0)) throw InvalidParameter("hex grid: isd must be positive");
    if (n_tiers < 0) throw InvalidParameter("hex grid: n_tiers must be non-negative");

    struct Axial {
        int q, r, ring;
        double angle;
    };
    std::vector<Axial> cells;
    for (int q = -n_tiers; q <= n_tiers; ++q) {
        for (int r = -n_tiers; r <= n_tiers; ++r) {
            const int s = -q - r;
            const int ring = std::max({std::abs(q), std::abs(r), std::abs(s)});
            if (ring > n_tiers) continue;
            const double x = q + 0.5 * r;
            const double y = r * std::sqrt(3.0) / 2.0;
            double a = std::atan2(y, x);
            if (a < -1e-12) a += 2.0 * kPi;
            cells.push_back({q, r, ring, ring == 0 ? 0.0 : a});
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Axial& a, const Axial& b) {
        if (a.ring != b.ring) return a.ring < b.ring;
        return a.angle < b.angle - 1e-9;
    });

    SitePlan plan;
    plan.isd = isd;
    plan.n_tiers = n_tiers;
    plan.kind = kind;
    for (const auto& c : cells) {
        plan.sites.push_back({origin.x + isd * (c.q + 0.5 * c.r),
                              origin.y + isd * (c.r * std::sqrt(3.0) / 2.0)});
        plan.ring.push_back(c.ring);
    }
    return plan;
}

enum class TierLabel { Center, Tier1, Tier2, Hotspot };

inline std::string to_string(TierLabel t) {
    switch (t) {
        case TierLabel::Center: return "center";
        case TierLabel::Tier1: return "tier1";
        case TierLabel::Tier2: return "tier2";
        case TierLabel::Hotspot: return "hotspot";
    }
    return "?";
}

struct Ue {
    int id = 0;
    Vec3 position;
    bool indoor = false;
    TierLabel tier = TierLabel::Center;
    int n_rx_antennas = 2;
};

struct Hotspot {
    Vec2 center;
    double radius = 40.0;
    int ue_count = 30;
};

struct MacroUeCounts {
    int center = 80;
    int tier1 = 40;
    int tier2 = 20;  // also used for rings beyond the second

    int for_ring(int ring) const { return ring == 0 ? center : ring == 1 ? tier1 : tier2; }
};

struct UeModel {
    double indoor_probability = 0.8;
    double outdoor_height_m = 1.5;
    double floor_height_m = 3.0;
    int max_floor = 4;
    double min_distance_uma_m = 35.0;
    double min_distance_umi_m = 10.0;
    int max_attempts = 100000;
};

/// Whether `p` (relative to a hex site) lies inside that site's hexagon.
inline bool in_site_hexagon(Vec2 p, double isd) {
    const double apothem = 0.5 * isd;
    for (int k = 0; k < 3; ++k) {
        const double a = deg2rad(60.0 * k);
        if (std::abs(p.x * std::cos(a) + p.y * std::sin(a)) > apothem + 1e-9) return false;
    }
    return true;
}

/// Wedge test: sector s covers azimuths within ±60° of its boresight.
inline int sector_of(Vec2 p) {
    const double az = rad2deg(std::atan2(p.y, p.x));
    for (int s = 0; s < 3; ++s) {
        const double d = wrap_deg(az - kSectorBoresights[s]);
        if (d >= -60.0 && d < 60.0) return s;
    }
    return 0;
}

namespace detail {

inline double draw_indoor_height(const UeModel& m, bool indoor, Stream& rng) {
    if (!indoor) return m.outdoor_height_m;
    std::uniform_int_distribution<int> floor(1, m.max_floor);
    return m.outdoor_height_m + m.floor_height_m * (floor(rng) - 1);
}

}  // namespace detail

/// Drops macro-area UEs uniformly over each sector's third of the site
/// hexagon, `counts.for_ring(ring)` per sector.
inline std::vector<Ue> drop_macro_ues(const SitePlan& plan, const MacroUeCounts& counts, Stream& rng,
                                      const UeModel& model = {}, int first_id = 0) {
    if (counts.center < 0 || counts.tier1 < 0 || counts.tier2 < 0)
        throw InvalidParameter("macro UE counts must be non-negative");
    std::vector<Ue> ues;
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::bernoulli_distribution indoor(model.indoor_probability);
    const double r_vertex = plan.isd / std::sqrt(3.0);
    int id = first_id;
    for (std::size_t site = 0; site < plan.size(); ++site) {
        const int ring = plan.ring.empty() ? 0 : plan.ring[site];
        const int per_sector = counts.for_ring(ring);
        const TierLabel label = ring == 0 ? TierLabel::Center
                                : ring == 1 ? TierLabel::Tier1
                                            : TierLabel::Tier2;
        for (int sector = 0; sector < 3; ++sector) {
            for (int n = 0; n < per_sector; ++n) {
                Vec2 p;
                int attempts = 0;
                for (;; ++attempts) {
                    if (attempts >= model.max_attempts)
                        throw Exhaustion("macro UE drop: no point satisfies the sector/minimum-distance constraint");
                    p = {r_vertex * unit(rng), r_vertex * unit(rng)};
                    if (!in_site_hexagon(p, plan.isd)) continue;
                    if (sector_of(p) != sector) continue;
                    if (norm(p) < model.min_distance_uma_m) continue;
                    break;
                }
                Ue ue;
                ue.id = id++;
                ue.indoor = indoor(rng);
                const Vec2 abs = plan.sites[site] + p;
                ue.position = {abs.x, abs.y, detail::draw_indoor_height(model, ue.indoor, rng)};
                ue.tier = label;
                ues.push_back(ue);
            }
        }
    }
    return ues;
}

struct HotspotDrop {
    std::vector<Hotspot> hotspots;
    std::vector<Ue> ues;
};

/// Places `n` hotspot centres uniformly in a disc with pairwise separation
/// `min_sep`, then `ues_per_hs` outdoor UEs uniformly in each hotspot disc.
inline HotspotDrop drop_hotspots(int n, double region_radius, double hs_radius, double min_sep,
                                 int ues_per_hs, Stream& rng, const UeModel& model = {},
                                 int first_id = 0, int max_attempts_per_hotspot = 10000) {
    if (n < 0 || ues_per_hs < 0) throw InvalidParameter("hotspot counts must be non-negative");
    if (!(region_radius > 0.0) || !(hs_radius > 0.0))
        throw InvalidParameter("hotspot radii must be positive");
    HotspotDrop out;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    auto in_disc = [&](double radius) {
        const double r = radius * std::sqrt(u01(rng));
        const double a = 2.0 * kPi * u01(rng);
        return Vec2{r * std::cos(a), r * std::sin(a)};
    };
    for (int h = 0; h < n; ++h) {
        bool placed = false;
        for (int attempt = 0; attempt < max_attempts_per_hotspot && !placed; ++attempt) {
            const Vec2 c = in_disc(region_radius);
            bool ok = true;
            for (const auto& other : out.hotspots) {
                if (distance(c, other.center) < min_sep) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                out.hotspots.push_back({c, hs_radius, ues_per_hs});
                placed = true;
            }
        }
        if (!placed)
            throw Exhaustion("hotspot drop: could not place hotspot " + std::to_string(h + 1) + " of " +
                             std::to_string(n) + " with minimum separation " +
                             std::to_string(min_sep) + " m inside radius " +
                             std::to_string(region_radius) + " m");
    }
    int id = first_id;
    for (const auto& hs : out.hotspots) {
        for (int k = 0; k < ues_per_hs; ++k) {
            Vec2 p;
            int attempts = 0;
            do {
                if (++attempts > model.max_attempts)
                    throw Exhaustion("hotspot UE drop: minimum distance larger than hotspot radius");
                p = in_disc(hs_radius);
            } while (norm(p) < std::min(model.min_distance_umi_m, 0.5 * hs_radius));
            Ue ue;
            ue.id = id++;
            ue.indoor = false;
            const Vec2 abs = hs.center + p;
            ue.position = {abs.x, abs.y, model.outdoor_height_m};
            ue.tier = TierLabel::Hotspot;
            out.ues.push_back(ue);
        }
    }
    return out;
}

/// Site plan with one site at every hotspot centre.
inline SitePlan hotspot_site_plan(const std::vector<Hotspot>& hotspots) {
    SitePlan plan;
    plan.kind = SiteKind::Hotspot;
    for (const auto& h : hotspots) {
        plan.sites.push_back(h.center);
        plan.ring.push_back(0);
    }
    return plan;
}

}  // namespace fr3sim
