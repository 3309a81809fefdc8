#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "fr3sim/engine.hpp"

using namespace fr3sim;

TEST(Scenario, SevenNamedScenarios) {
    const auto& names = scenario_names();
    ASSERT_EQ(names.size(), 7u);
    struct Expect {
        std::size_t layers, cells, radios;
    };
    const Expect want[] = {{1, 57, 19}, {1, 57, 19}, {1, 114, 19}, {2, 114, 38},
                           {2, 114, 38}, {2, 171, 38}, {3, 171, 57}};
    for (std::size_t i = 0; i < names.size(); ++i) {
        SCOPED_TRACE(names[i]);
        const auto cfg = expand_scenario(names[i]);
        EXPECT_EQ(cfg.name, names[i]);
        EXPECT_EQ(cfg.layers.size(), want[i].layers);
        const auto net = build_network(cfg, std::vector<Hotspot>(19));
        EXPECT_EQ(net.cells.size(), want[i].cells);
        EXPECT_EQ(net.radios.size(), want[i].radios);
        for (std::size_t c = 0; c < net.cells.size(); ++c) {
            EXPECT_EQ(net.cells[c].id, static_cast<int>(c));
            ASSERT_TRUE(net.cells[c].ssb);
            ASSERT_TRUE(net.cells[c].csirs);
        }
    }
}

TEST(Scenario, LayerShapes) {
    const auto hs = expand_scenario("4G UMa + 5G UMi + 6G HS");
    EXPECT_EQ(hs.layers[0].deployment, SiteKind::UMa);
    EXPECT_DOUBLE_EQ(hs.layers[0].isd_m, 500.0);
    EXPECT_DOUBLE_EQ(hs.layers[0].bs_height_m, 25.0);
    EXPECT_EQ(hs.layers[1].deployment, SiteKind::UMi);
    EXPECT_DOUBLE_EQ(hs.layers[1].isd_m, 200.0);
    EXPECT_DOUBLE_EQ(hs.layers[1].bs_height_m, 10.0);
    EXPECT_EQ(hs.layers[2].deployment, SiteKind::Hotspot);
    EXPECT_EQ(hs.layers[2].radio, "6G pico");
    const auto bs = expand_scenario("4G UMa + 5G UMi (UMa BS)");
    EXPECT_EQ(bs.layers[1].radio, "5G macro");
    EXPECT_EQ(bs.layers[1].deployment, SiteKind::UMi);
}

TEST(Scenario, HotspotCellsSitOnHotspots) {
    std::vector<Hotspot> hs(19);
    for (int i = 0; i < 19; ++i) hs[i].center = {10.0 * i, -5.0 * i};
    const auto net = build_network(expand_scenario("4G UMa + 5G UMi + 6G HS"), hs);
    for (std::size_t c = 114; c < net.cells.size(); ++c) {
        const auto& cell = net.cells[c];
        EXPECT_EQ(cell.technology, Technology::G6);
        EXPECT_DOUBLE_EQ(cell.site_position.x, hs[cell.site_index].center.x);
        EXPECT_DOUBLE_EQ(cell.site_position.y, hs[cell.site_index].center.y);
    }
}

TEST(Scenario, SlugsResolve) {
    for (const auto& n : scenario_names()) {
        const auto slug = scenario_slug(n);
        EXPECT_EQ(slug.find(' '), std::string::npos);
        EXPECT_EQ(expand_scenario(slug).name, n);
    }
    EXPECT_EQ(scenario_slug("4G UMa + 5G UMi"), "4g-uma_5g-umi");
}

TEST(Scenario, UnknownNameListsChoices) {
    try {
        expand_scenario("5G mmWave");
        FAIL();
    } catch (const UsageError& e) {
        const std::string msg = e.what();
        for (const auto& n : scenario_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
    }
}

// Radio totals from the hand-evaluated power model, times 19 sites.
TEST(Scenario, DeploymentPower) {
    const double g4 = 569.2347176172834, g5m = 1264.8527726208126, g5u = 799.3045512722497,
                 g45 = 1654.087490238096, g56 = 1610.6091025444994, pico = 449.9078924395001;
    const double want[] = {19 * g4, 19 * g5m, 19 * g45, 19 * (g4 + g5u), 19 * (g4 + g5m), 19 * (g4 + g56),
                           19 * (g4 + g5u + pico)};
    const auto& names = scenario_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        EXPECT_NEAR(scenario_power(expand_scenario(names[i])).total_w, want[i], 1e-6) << names[i];
}

TEST(Config, JsonRoundTrip) {
    for (const auto& n : scenario_names()) {
        auto cfg = expand_scenario(n);
        cfg.seed = 42;
        cfg.mode = SchedulingMode::MuMimo;
        cfg.reselection.threshold_dbm[2] = -104.0;
        cfg.channel.noise_figure_db = 7.0;
        cfg.power.eta = 0.3;
        const auto j = to_json(cfg);
        EXPECT_EQ(to_json(config_from_json(j)).dump(), j.dump()) << n;
    }
}

TEST(Config, OverridesOnNamedScenario) {
    const auto cfg = config_from_json(nlohmann::json::parse(R"({
        "name": "5G UMa", "seed": 9, "n_drops": 2, "scheduling_mode": "paper-literal",
        "power": {"eta": 0.5}, "channel": {"noise_figure_db": 7.5},
        "reselection": {"enabled": false}
    })"));
    EXPECT_EQ(cfg.layers.size(), 1u);
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.n_drops, 2);
    EXPECT_EQ(cfg.mode, SchedulingMode::PaperLiteral);
    EXPECT_DOUBLE_EQ(cfg.power.eta, 0.5);
    EXPECT_DOUBLE_EQ(cfg.channel.noise_figure_db, 7.5);
    EXPECT_FALSE(cfg.reselection.enabled);
}

TEST(Config, Rejections) {
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"name": "x"})")), UsageError);
    EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"name": "x", "layers": [{"radio": "wifi"}]})")),
                 CatalogMiss);
    EXPECT_THROW(
        config_from_json(nlohmann::json::parse(R"({"name": "x", "layers": [{"radio": "5G macro", "deployment": "LEO"}]})")),
        UsageError);
    EXPECT_THROW(load_config("/nonexistent/cfg.json"), Error);
}

TEST(Config, CustomLayerFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "fr3sim_cfg_test.json";
    {
        std::ofstream out(path);
        out << R"({"name": "tiny", "layers": [{"radio": "5G micro", "deployment": "UMi", "n_tiers": 0}]})";
    }
    const auto cfg = load_config(path.string());
    std::filesystem::remove(path);
    ASSERT_EQ(cfg.layers.size(), 1u);
    EXPECT_EQ(cfg.layers[0].n_tiers, 0);
    EXPECT_DOUBLE_EQ(cfg.layers[0].isd_m, 200.0);
    EXPECT_EQ(build_network(cfg, {}).cells.size(), 3u);
}
