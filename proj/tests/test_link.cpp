#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "fr3sim/link.hpp"

using namespace fr3sim;

namespace {

struct Instance {
    LinkSnapshot snap;
    std::vector<std::shared_ptr<Codebook>> books;
};

// Random multi-cell snapshot with allocations derived from the actual
// per-cell occupancy.
Instance random_instance(Stream& rng, SchedulingMode mode) {
    std::uniform_int_distribution<int> n_cells(1, 5), n_ues(1, 9), group(0, 1), pick(0, 2), groups(1, 3);
    std::uniform_real_distribution<double> logb(-12.0, -7.0), pw(1.0, 80.0);
    std::normal_distribution<double> g;
    Instance in;
    auto& s = in.snap;
    s.mode = mode;
    const int nc = n_cells(rng), nu = n_ues(rng), ng = groups(rng);
    const std::pair<int, int> shapes[] = {{2, 2}, {4, 2}, {1, 1}};
    std::vector<double> tx(nc);
    for (int c = 0; c < nc; ++c) {
        const auto [mh, mv] = shapes[pick(rng)];
        in.books.push_back(std::make_shared<Codebook>(build_dft_codebook(mh, mv)));
        s.codebook.push_back(in.books.back().get());
        s.carrier_group.push_back(group(rng));
        s.noise_w.push_back(std::pow(10.0, logb(rng) - 3.0));
        tx[c] = pw(rng);
    }
    s.beta.assign(nu, std::vector<double>(nc));
    s.channel.assign(nu, std::vector<SmallScale>(nc));
    for (int u = 0; u < nu; ++u)
        for (int c = 0; c < nc; ++c) {
            s.beta[u][c] = std::pow(10.0, logb(rng));
            auto& h = s.channel[u][c];
            h.groups.resize(ng);
            for (auto& grp : h.groups)
                for (auto& p : grp.pol) {
                    p.resize(s.codebook[c]->panel_size());
                    for (auto& x : p) x = {g(rng), g(rng)};
                }
        }
    std::vector<int> cell_of(nu), dir_of(nu);
    for (int u = 0; u < nu; ++u) {
        cell_of[u] = std::uniform_int_distribution<int>(0, nc - 1)(rng);
        dir_of[u] = std::uniform_int_distribution<int>(0, int(s.codebook[cell_of[u]]->direction_count()) - 1)(rng);
    }
    for (int u = 0; u < nu; ++u) {
        CellOccupancy occ{0, 0, 0};
        std::map<int, int> dirs;
        for (int v = 0; v < nu; ++v)
            if (cell_of[v] == cell_of[u]) {
                ++occ.n_ue;
                ++dirs[dir_of[v]];
            }
        occ.n_on_direction = dirs[dir_of[u]];
        occ.n_active_directions = static_cast<int>(dirs.size());
        s.allocation.push_back(allocate_ue(u, cell_of[u], dir_of[u], tx[cell_of[u]], 7, 2, occ, mode));
    }
    return in;
}

// Per-UE double sum straight from the definition of the downlink SINR.
SinrTerms brute_force(const LinkSnapshot& s, int u, int layer, int grp) {
    const auto& a = s.allocation[u];
    const int sc = a.cell;
    auto gain = [&](int c, int d) {
        return s.beta[u][c] * beam_amplitude_gain(s.channel[u][c].groups[grp].pol[layer], s.codebook[c]->codewords[d]);
    };
    SinrTerms t;
    t.noise = s.noise_w[sc];
    t.signal = gain(sc, a.direction) * a.signal_power_w;
    for (std::size_t v = 0; v < s.allocation.size(); ++v) {
        if (static_cast<int>(v) == u) continue;
        const auto& b = s.allocation[v];
        if (s.carrier_group[b.cell] != s.carrier_group[sc]) continue;
        const double x = gain(b.cell, b.direction) * b.interference_power_w;
        if (b.cell != sc) {
            t.inter += x;
        } else if (s.mode == SchedulingMode::PaperLiteral ||
                   (s.mode == SchedulingMode::MuMimo && b.direction != a.direction)) {
            t.intra += x;
        }
    }
    return t;
}

}  // namespace

TEST(SplitPower, FiveGMicroTwoLayers) {
    EXPECT_NEAR(split_power(dbm_to_watt(44.0), 273, 2), 0.046005245998344, 1e-14);
    EXPECT_THROW(split_power(1.0, 0, 2), InvalidParameter);
    EXPECT_THROW(split_power(1.0, 273, 0), InvalidParameter);
}

TEST(SchedulingMode, StringRoundTrip) {
    for (auto m : {SchedulingMode::PaperLiteral, SchedulingMode::Orthogonal, SchedulingMode::MuMimo})
        EXPECT_EQ(scheduling_mode_from_string(to_string(m)), m);
    EXPECT_THROW(scheduling_mode_from_string("tdma"), UsageError);
}

TEST(Allocation, PerModePowers) {
    const CellOccupancy occ{6, 2, 3};
    const auto lit = allocate_ue(0, 0, 1, 60.0, 10, 2, occ, SchedulingMode::PaperLiteral);
    EXPECT_DOUBLE_EQ(lit.signal_power_w, 0.5);
    EXPECT_DOUBLE_EQ(lit.interference_power_w, 0.5);
    EXPECT_EQ(lit.rate_share, 6);
    const auto orth = allocate_ue(0, 0, 1, 60.0, 10, 2, occ, SchedulingMode::Orthogonal);
    EXPECT_DOUBLE_EQ(orth.signal_power_w, 3.0);
    EXPECT_DOUBLE_EQ(orth.interference_power_w, 0.5);
    EXPECT_EQ(orth.rate_share, 6);
    const auto mu = allocate_ue(0, 0, 1, 60.0, 10, 2, occ, SchedulingMode::MuMimo);
    EXPECT_DOUBLE_EQ(mu.signal_power_w, 1.0);
    EXPECT_DOUBLE_EQ(mu.interference_power_w, 0.5);
    EXPECT_EQ(mu.rate_share, 2);
    EXPECT_THROW(allocate_ue(0, 0, 0, 1.0, 1, 2, CellOccupancy{0, 1, 1}, SchedulingMode::Orthogonal),
                 InvalidParameter);
}

TEST(Allocation, CellPowerConserved) {
    auto rng = substream(5, {});
    for (auto mode : {SchedulingMode::PaperLiteral, SchedulingMode::Orthogonal, SchedulingMode::MuMimo}) {
        for (int i = 0; i < 200; ++i) {
            const auto in = random_instance(rng, mode);
            const auto w = direction_weights(in.snap);
            std::vector<double> tx(in.snap.codebook.size(), 0.0);
            for (std::size_t c = 0; c < w.size(); ++c)
                for (double x : w[c]) tx[c] += x * 7 * 2;
            for (const auto& a : in.snap.allocation) {
                // Recover the cell power from any one of its UEs.
                double p = a.signal_power_w * 7 * 2;
                if (mode == SchedulingMode::PaperLiteral) p *= a.rate_share;
                if (mode == SchedulingMode::MuMimo) {
                    std::set<int> dirs;
                    for (const auto& b : in.snap.allocation)
                        if (b.cell == a.cell) dirs.insert(b.direction);
                    p *= static_cast<double>(dirs.size());
                }
                EXPECT_NEAR(tx[a.cell], p, 1e-12 * p);
            }
        }
    }
}

TEST(Sinr, MatchesBruteForce) {
    auto rng = substream(8, {});
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto mode = static_cast<SchedulingMode>(i % 3);
        const auto in = random_instance(rng, mode);
        const auto& s = in.snap;
        const auto w = direction_weights(s);
        for (int u = 0; u < static_cast<int>(s.allocation.size()); ++u) {
            const int ng = static_cast<int>(s.channel[u][0].groups.size());
            for (int layer = 0; layer < 2; ++layer)
                for (int grp = 0; grp < ng; ++grp) {
                    const auto got = sinr_terms(s, w, u, layer, grp);
                    const auto want = brute_force(s, u, layer, grp);
                    const double rel = std::abs(got.sinr() - want.sinr()) / want.sinr();
                    worst = std::max(worst, rel);
                    ASSERT_LE(rel, 1e-10) << "instance " << i << " ue " << u;
                    ASSERT_NEAR(got.signal, want.signal, 1e-12 * want.signal);
                    if (mode == SchedulingMode::Orthogonal) {
                        ASSERT_EQ(got.intra, 0.0);
                    }
                }
        }
    }
    RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(Sinr, GroupOutOfRangeThrows) {
    auto rng = substream(9, {});
    const auto in = random_instance(rng, SchedulingMode::Orthogonal);
    EXPECT_THROW(sinr(in.snap, 0, 0, 17), ShapeMismatch);
}

TEST(Sinr, LoneUeIsNoiseLimited) {
    auto rng = substream(10, {});
    Instance in;
    do in = random_instance(rng, SchedulingMode::PaperLiteral);
    while (in.snap.allocation.size() != 1);
    const auto t = sinr_terms(in.snap, direction_weights(in.snap), 0, 0, 0);
    EXPECT_EQ(t.intra, 0.0);
    EXPECT_EQ(t.inter, 0.0);
    EXPECT_DOUBLE_EQ(t.sinr(), t.signal / t.noise);
}

TEST(EffectiveSinr, Properties) {
    auto rng = substream(11, {});
    std::uniform_int_distribution<int> len(1, 40);
    std::uniform_real_distribution<double> db(-20.0, 40.0);
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> v(len(rng));
        for (auto& x : v) x = db_to_linear(db(rng));
        const double eff = effective_sinr(v);
        const double lo = *std::min_element(v.begin(), v.end());
        const double hi = *std::max_element(v.begin(), v.end());
        double mean = 0.0;
        for (double x : v) mean += x / v.size();
        ASSERT_GE(eff, lo * (1 - 1e-12));
        ASSERT_LE(eff, hi * (1 + 1e-12));
        ASSERT_LE(eff, mean * (1 + 1e-12));
        // Scaling every PRB up never lowers the effective value.
        auto up = v;
        for (auto& x : up) x *= 1.5;
        ASSERT_GE(effective_sinr(up), eff);
    }
}

TEST(EffectiveSinr, ClosedForms) {
    const std::vector<double> flat(12, 7.0);
    EXPECT_NEAR(effective_sinr(flat), 7.0, 1e-12);
    for (double g : {0.5, 3.0, 99.0}) {
        const std::vector<double> v{g, 0.0};
        EXPECT_NEAR(effective_sinr(v), std::sqrt(1.0 + g) - 1.0, 1e-12);
    }
    EXPECT_THROW(effective_sinr({}), InvalidParameter);
}

TEST(Rate, SixGFullBandUnitSinr) {
    const std::vector<double> layers{1.0, 1.0};
    EXPECT_NEAR(ue_rate(273, 720e3, 1, layers), 393.12e6, 1e-3);
    EXPECT_NEAR(ue_rate(273, 720e3, 4, layers), 393.12e6 / 4, 1e-3);
    EXPECT_THROW(ue_rate(273, 720e3, 0, layers), InvalidParameter);
}

TEST(Rate, ZeroSinrZeroRate) {
    const std::vector<double> layers{0.0, 0.0};
    EXPECT_EQ(ue_rate(100, 180e3, 3, layers), 0.0);
}
