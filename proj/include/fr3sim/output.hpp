#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fr3sim/engine.hpp"
#include "fr3sim/errors.hpp"

namespace fr3sim {

namespace detail {

/// Round-trip-exact, locale-independent number formatting.
inline std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FilesystemError("cannot write '" + path.string() + "'");
    return out;
}

inline void close_checked(std::ofstream& out, const std::filesystem::path& path) {
    out.close();
    if (!out) throw FilesystemError("write failed for '" + path.string() + "'");
}

}  // namespace detail

inline constexpr int kCdfPoints = 1000;

/// (rate, cumulative probability) at kCdfPoints evenly spaced probabilities.
inline std::vector<std::pair<double, double>> rate_cdf(const std::vector<UeRecord>& ues, int points = kCdfPoints) {
    std::vector<std::pair<double, double>> out;
    if (ues.empty()) return out;
    std::vector<double> r;
    r.reserve(ues.size());
    for (const auto& u : ues) r.push_back(u.rate_bps / 1e6);
    std::sort(r.begin(), r.end());
    for (int k = 0; k < points; ++k) {
        const double q = points == 1 ? 1.0 : static_cast<double>(k) / (points - 1);
        const double pos = q * static_cast<double>(r.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, r.size() - 1);
        out.emplace_back(r[lo] + (pos - static_cast<double>(lo)) * (r[hi] - r[lo]), q);
    }
    return out;
}

/// Loose absolute-rate check for the hotspot scenario; other scenarios are
/// reported as not applicable.
inline nlohmann::json plausibility(const ResultSet& rs) {
    nlohmann::json j{{"median_mbps", rs.rate_mbps.p50}, {"p95_mbps", rs.rate_mbps.p95}};
    if (rs.config.name != scenario_names().back()) {
        j["status"] = "not-applicable";
        return j;
    }
    const bool median_ok = rs.rate_mbps.p50 >= 150.0 && rs.rate_mbps.p50 <= 600.0;
    const bool p95_ok = rs.rate_mbps.p95 >= 700.0;
    j["median_range_mbps"] = {150.0, 600.0};
    j["p95_min_mbps"] = 700.0;
    j["status"] = median_ok && p95_ok ? "pass" : "calibration-review";
    if (!median_ok) j["note_median"] = "median outside the expected range";
    if (!p95_ok) j["note_p95"] = "95th percentile below the expected floor";
    return j;
}

inline nlohmann::json manifest(const ResultSet& rs) {
    const auto f = rs.tech_fraction();
    return {{"tool", "fr3sim"},
            {"version", rs.meta.version},
            {"seed", rs.meta.seed},
            {"config_hash", rs.meta.config_hash},
            {"config", to_json(rs.config)},
            {"threads", rs.meta.threads},
            {"wall_clock_s", rs.meta.wall_clock_s},
            {"summary",
             {{"n_ue_records", rs.ues.size()},
              {"rate_p5_mbps", rs.rate_mbps.p5},
              {"rate_p50_mbps", rs.rate_mbps.p50},
              {"rate_p95_mbps", rs.rate_mbps.p95},
              {"served_fraction", {{"4G", f[0]}, {"5G", f[1]}, {"6G", f[2]}}},
              {"total_power_w", rs.power.total_w}}},
            {"plausibility", plausibility(rs)}};
}

inline void write_per_ue_csv(std::ostream& os, const std::vector<UeRecord>& ues) {
    os << "drop,ue_id,tier_label,serving_tech,serving_cell,ssb_beam,csirs_beam,sinr_eff_l1_db,sinr_eff_l2_db,"
          "rate_mbps\n";
    for (const auto& u : ues) {
        os << u.drop << ',' << u.ue_id << ',' << to_string(u.tier) << ',' << to_string(u.serving_tech) << ','
           << u.serving_cell << ',' << u.ssb_beam << ',' << u.csirs_beam << ','
           << detail::fmt(linear_to_db(u.sinr_eff[0])) << ',' << detail::fmt(linear_to_db(u.sinr_eff[1])) << ','
           << detail::fmt(u.rate_bps / 1e6) << '\n';
    }
}

inline void write_cdf_csv(std::ostream& os, const std::vector<UeRecord>& ues) {
    os << "rate_mbps,cdf\n";
    for (const auto& [r, q] : rate_cdf(ues)) os << detail::fmt(r) << ',' << detail::fmt(q) << '\n';
}

/// Writes per_ue.csv, cdf.csv, power.json and manifest.json into `dir`.
inline void emit(const ResultSet& rs, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw FilesystemError("cannot create '" + dir.string() + "': " + ec.message());
    {
        const auto p = dir / "per_ue.csv";
        auto out = detail::open_out(p);
        write_per_ue_csv(out, rs.ues);
        detail::close_checked(out, p);
    }
    {
        const auto p = dir / "cdf.csv";
        auto out = detail::open_out(p);
        write_cdf_csv(out, rs.ues);
        detail::close_checked(out, p);
    }
    {
        const auto p = dir / "power.json";
        auto out = detail::open_out(p);
        out << to_json(rs.power).dump(2) << '\n';
        detail::close_checked(out, p);
    }
    {
        const auto p = dir / "manifest.json";
        auto out = detail::open_out(p);
        out << manifest(rs).dump(2) << '\n';
        detail::close_checked(out, p);
    }
}

// ---------------------------------------------------------------------------
// Comparison

struct ComparisonRow {
    std::string label;
    double median_mbps = 0.0;
    double p95_mbps = 0.0;
    double power_w = 0.0;
    double median_ratio = 1.0;  // against the first row
    double p95_ratio = 1.0;
    double power_ratio = 1.0;
};

struct RunSummary {
    std::string label;
    double median_mbps = 0.0;
    double p95_mbps = 0.0;
    double power_w = 0.0;
};

inline RunSummary summarize(const ResultSet& rs) {
    return {rs.config.name, rs.rate_mbps.p50, rs.rate_mbps.p95, rs.power.total_w};
}

/// Reads back an output directory written by emit().
inline RunSummary load_summary(const std::filesystem::path& dir) {
    const auto p = dir / "manifest.json";
    std::ifstream in(p);
    if (!in) throw FilesystemError("cannot open '" + p.string() + "'");
    nlohmann::json m;
    try {
        in >> m;
        const auto& s = m.at("summary");
        return {m.at("config").at("name").get<std::string>(), s.at("rate_p50_mbps").get<double>(),
                s.at("rate_p95_mbps").get<double>(), s.at("total_power_w").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw FilesystemError("malformed manifest '" + p.string() + "': " + e.what());
    }
}

inline std::vector<ComparisonRow> compare(const std::vector<RunSummary>& runs) {
    if (runs.size() < 2) throw UsageError("compare needs at least two result sets");
    const auto& base = runs.front();
    auto ratio = [](double a, double b) { return b != 0.0 ? a / b : std::nan(""); };
    std::vector<ComparisonRow> rows;
    for (const auto& r : runs) {
        rows.push_back({r.label, r.median_mbps, r.p95_mbps, r.power_w, ratio(r.median_mbps, base.median_mbps),
                        ratio(r.p95_mbps, base.p95_mbps), ratio(r.power_w, base.power_w)});
    }
    return rows;
}

inline std::vector<ComparisonRow> compare(const std::vector<ResultSet>& sets) {
    std::vector<RunSummary> s;
    for (const auto& r : sets) s.push_back(summarize(r));
    return compare(s);
}

inline void write_comparison(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << "scenario,median_mbps,p95_mbps,total_power_w,median_ratio,p95_ratio,power_ratio\n";
    for (const auto& r : rows) {
        os << '"' << r.label << '"' << ',' << detail::fmt(r.median_mbps) << ',' << detail::fmt(r.p95_mbps) << ','
           << detail::fmt(r.power_w) << ',' << detail::fmt(r.median_ratio) << ',' << detail::fmt(r.p95_ratio) << ','
           << detail::fmt(r.power_ratio) << '\n';
    }
}

}  // namespace fr3sim
