#include <gtest/gtest.h>

#include "fr3sim/radio_catalog.hpp"

using namespace fr3sim;

TEST(Catalog, SixGPico) {
    const auto& r = catalog_lookup("6G pico");
    ASSERT_EQ(r.carriers.size(), 1u);
    const auto& c = r.carriers[0];
    EXPECT_EQ(c.technology, Technology::G6);
    EXPECT_DOUBLE_EQ(c.carrier_ghz, 10.0);
    // Table I lists one 200 MHz carrier per cell; the 400 MHz in the radio
    // list is not what a cell transmits.
    EXPECT_DOUBLE_EQ(c.bandwidth_mhz, 200.0);
    EXPECT_EQ(c.n_trx, 128);
    EXPECT_DOUBLE_EQ(c.tx_power_dbm, 41.0);
    EXPECT_EQ(c.n_ssb_beams, 16);
    EXPECT_EQ(c.n_csirs_beams, 128);
}

TEST(Catalog, FourGMacro) {
    const auto& c = catalog_lookup("4G macro").carriers.at(0);
    EXPECT_DOUBLE_EQ(c.bandwidth_mhz, 20.0);
    EXPECT_EQ(c.n_prb, 100);
    EXPECT_EQ(c.n_trx, 8);
    EXPECT_DOUBLE_EQ(c.tx_power_dbm, 46.0);
}

TEST(Catalog, UnknownNameMisses) { EXPECT_THROW(catalog_lookup("wifi"), CatalogMiss); }

TEST(Catalog, LookupIgnoresCase) { EXPECT_EQ(catalog_lookup("5g MACRO").name, "5G macro"); }

// Every numeric field of the seven entries, row by row as printed.
TEST(Catalog, TableValues) {
    struct Row {
        const char* name;
        Technology t;
        double ghz, mhz;
        int prb, trx, elems, ssb, csi;
        double dbm;
    };
    const Row rows[] = {
        {"4G macro", Technology::G4, 2.0, 20, 100, 8, 8, 4, 8, 46},
        {"5G macro", Technology::G5, 3.5, 100, 273, 64, 64, 8, 64, 49},
        {"5G micro", Technology::G5, 3.5, 100, 273, 64, 64, 8, 32, 44},
        {"6G micro", Technology::G6, 10.0, 200, 273, 128, 128, 16, 128, 44},
        {"6G pico", Technology::G6, 10.0, 200, 273, 128, 128, 16, 128, 41},
        {"4G/5G macro", Technology::G4, 2.0, 20, 100, 8, 8, 4, 8, 46},
        {"4G/5G macro", Technology::G5, 3.5, 100, 273, 64, 64, 8, 64, 49},
        {"5G/6G micro", Technology::G5, 3.5, 100, 273, 64, 64, 8, 32, 44},
        {"5G/6G micro", Technology::G6, 10.0, 200, 273, 128, 128, 16, 128, 44},
    };
    for (const auto& row : rows) {
        SCOPED_TRACE(row.name);
        const auto& c = catalog_lookup(row.name).carrier(row.t);
        EXPECT_DOUBLE_EQ(c.carrier_ghz, row.ghz);
        EXPECT_DOUBLE_EQ(c.bandwidth_mhz, row.mhz);
        EXPECT_EQ(c.n_prb, row.prb);
        EXPECT_EQ(c.n_trx, row.trx);
        EXPECT_EQ(c.n_elements, row.elems);
        EXPECT_EQ(c.n_ssb_beams, row.ssb);
        EXPECT_EQ(c.n_csirs_beams, row.csi);
        EXPECT_DOUBLE_EQ(c.tx_power_dbm, row.dbm);
        // M counts both polarisations of the M_h x M_v panel.
        EXPECT_EQ(2 * c.m_h * c.m_v, c.n_elements);
    }
    for (const auto& r : RadioCatalog::standard().entries())
        EXPECT_EQ(r.cells_supported, 3 * static_cast<int>(r.carriers.size())) << r.name;
}

TEST(Catalog, PrbBandwidths) {
    EXPECT_DOUBLE_EQ(catalog_lookup("4G macro").carriers[0].prb_bandwidth_hz(), 180e3);
    EXPECT_DOUBLE_EQ(catalog_lookup("5G macro").carriers[0].prb_bandwidth_hz(), 360e3);
    EXPECT_DOUBLE_EQ(catalog_lookup("6G micro").carriers[0].prb_bandwidth_hz(), 720e3);
    for (const auto& r : RadioCatalog::standard().entries())
        for (const auto& c : r.carriers) EXPECT_LE(c.n_prb * c.prb_bandwidth_hz(), c.bandwidth_mhz * 1e6);
}

TEST(Catalog, JsonRoundTripIsExact) {
    const auto cat = RadioCatalog::standard();
    const nlohmann::json j = cat;
    const auto back = j.get<RadioCatalog>();
    ASSERT_EQ(back.entries().size(), cat.entries().size());
    EXPECT_EQ(nlohmann::json(back).dump(), j.dump());
}

TEST(Catalog, UpsertReplacesByName) {
    auto cat = RadioCatalog::standard();
    auto r = cat.lookup("5G micro");
    r.carriers[0].tx_power_dbm = 40.0;
    cat.upsert(r);
    EXPECT_EQ(cat.entries().size(), 7u);
    EXPECT_DOUBLE_EQ(cat.lookup("5G micro").carriers[0].tx_power_dbm, 40.0);
    r.name = "custom";
    cat.upsert(r);
    EXPECT_EQ(cat.entries().size(), 8u);
}

TEST(InstantiateLayer, FiveGMacroOnUmaGrid) {
    const auto inst = instantiate_layer(build_hex_grid(500.0, 2), catalog_lookup("5G macro"));
    EXPECT_EQ(inst.radios.size(), 19u);
    ASSERT_EQ(inst.cells.size(), 57u);
    for (const auto& c : inst.cells) {
        EXPECT_DOUBLE_EQ(c.carrier_hz, 3.5e9);
        EXPECT_EQ(c.priority, 1);
        EXPECT_EQ(c.n_elements(), 64);
    }
}

TEST(InstantiateLayer, MultibandOwnsSixCells) {
    const auto inst = instantiate_layer(build_hex_grid(500.0, 2), catalog_lookup("4G/5G macro"));
    EXPECT_EQ(inst.radios.size(), 19u);
    EXPECT_EQ(inst.cells.size(), 114u);
    std::size_t owned = 0;
    for (const auto& r : inst.radios) {
        EXPECT_EQ(r.cell_ids.size(), 6u);
        int g4 = 0, g5 = 0;
        for (int id : r.cell_ids) {
            g4 += inst.cells[id].technology == Technology::G4;
            g5 += inst.cells[id].technology == Technology::G5;
        }
        EXPECT_EQ(g4, 3);
        EXPECT_EQ(g5, 3);
        owned += r.cell_ids.size();
    }
    EXPECT_EQ(owned, inst.cells.size());
}

TEST(InstantiateLayer, SinglePicoSite) {
    SitePlan plan;
    plan.kind = SiteKind::Hotspot;
    plan.sites = {{10.0, 20.0}};
    plan.ring = {0};
    const auto inst = instantiate_layer(plan, catalog_lookup("6G pico"), {30, 150, 270}, {10.0, 90.0}, 5, 100);
    ASSERT_EQ(inst.radios.size(), 1u);
    ASSERT_EQ(inst.cells.size(), 3u);
    EXPECT_EQ(inst.radios[0].id, 5);
    EXPECT_EQ(inst.cells[0].id, 100);
    EXPECT_DOUBLE_EQ(inst.cells[1].boresight_deg, 150.0);
    EXPECT_DOUBLE_EQ(inst.cells[2].bs_height_m, 10.0);
    EXPECT_NEAR(inst.cells[0].tx_power_w, 12.589254117941675, 1e-12);
}

TEST(InstantiateLayer, EmptyPlanRejected) {
    EXPECT_THROW(instantiate_layer(SitePlan{}, catalog_lookup("5G macro")), InvalidParameter);
}

TEST(Priority, ByTechnology) {
    EXPECT_EQ(priority_of(Technology::G4), 0);
    EXPECT_EQ(priority_of(Technology::G5), 1);
    EXPECT_EQ(priority_of(Technology::G6), 2);
}
