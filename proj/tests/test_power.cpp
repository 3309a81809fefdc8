#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fr3sim/power.hpp"

using namespace fr3sim;

namespace {

double total_for(const std::string& name) {
    const auto& type = catalog_lookup(name);
    std::vector<double> tx;
    for (const auto& c : type.carriers)
        for (int s = 0; s < 3; ++s) tx.push_back(dbm_to_watt(c.tx_power_dbm));
    return radio_power(power_params_for(type), tx).total();
}

PowerParams sample() {
    PowerParams p;
    p.p_bbu_w = 100;
    p.p_0_w = 60;
    p.p_bb_w = 40;
    p.d_trx_w = 2;
    p.d_pa_w = 1;
    p.eta = 0.4;
    p.m_trx_av = 10;
    p.m_pa_ac = 8;
    return p;
}

}  // namespace

// Fully loaded three-sector radios with the default calibration, evaluated
// by hand from the model formula.
TEST(RadioPower, DefaultCalibrationTotals) {
    EXPECT_NEAR(total_for("4G macro"), 569.2347176172834, 1e-9);
    EXPECT_NEAR(total_for("5G macro"), 1264.8527726208126, 1e-9);
    EXPECT_NEAR(total_for("5G micro"), 799.3045512722497, 1e-9);
    EXPECT_NEAR(total_for("4G/5G macro"), 1654.087490238096, 1e-9);
    EXPECT_NEAR(total_for("5G/6G micro"), 1610.6091025444994, 1e-9);
    EXPECT_NEAR(total_for("6G pico"), 449.9078924395001, 1e-9);
}

TEST(RadioPower, Breakdown) {
    const std::vector<double> tx{4.0, 4.0};
    const auto b = radio_power(sample(), tx);
    EXPECT_DOUBLE_EQ(b.trx, 20.0);
    EXPECT_DOUBLE_EQ(b.pa, 8.0);
    EXPECT_DOUBLE_EQ(b.out, 20.0);
    EXPECT_DOUBLE_EQ(b.total(), 248.0);
}

TEST(RadioPower, ZeroOutputLeavesStaticSum) {
    const std::vector<double> tx{0.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(radio_power(sample(), tx).total(), 100 + 60 + 40 + 20 + 8);
}

TEST(RadioPower, LinearAndMonotoneInOutputPower) {
    auto rng = substream(12, {});
    std::uniform_real_distribution<double> w(0.0, 60.0);
    const auto p = sample();
    const std::vector<double> none;
    const double base = radio_power(p, none).total();
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> a{w(rng), w(rng), w(rng)};
        const double pa = radio_power(p, a).total();
        EXPECT_NEAR(pa - base, (a[0] + a[1] + a[2]) / p.eta, 1e-9);
        auto b = a;
        b[i % 3] += 1.0;
        EXPECT_GT(radio_power(p, b).total(), pa);
    }
}

TEST(RadioPower, MonotoneInEveryParameter) {
    const std::vector<double> tx{5.0, 7.0};
    const double base = radio_power(sample(), tx).total();
    auto bump = [&](auto&& edit) {
        auto p = sample();
        edit(p);
        return radio_power(p, tx).total();
    };
    EXPECT_GT(bump([](PowerParams& p) { p.p_bbu_w += 1; }), base);
    EXPECT_GT(bump([](PowerParams& p) { p.p_0_w += 1; }), base);
    EXPECT_GT(bump([](PowerParams& p) { p.p_bb_w += 1; }), base);
    EXPECT_GT(bump([](PowerParams& p) { p.d_trx_w += 1; }), base);
    EXPECT_GT(bump([](PowerParams& p) { p.d_pa_w += 1; }), base);
    EXPECT_GT(bump([](PowerParams& p) { p.m_trx_av += 1; }), base);
    EXPECT_GT(bump([](PowerParams& p) { p.m_pa_ac += 1; }), base);
    EXPECT_LT(bump([](PowerParams& p) { p.eta += 0.1; }), base);
}

TEST(RadioPower, InvalidParameters) {
    auto p = sample();
    p.eta = 0.0;
    EXPECT_THROW(radio_power(p, std::vector<double>{}), InvalidParameter);
    p.eta = 1.2;
    EXPECT_THROW(radio_power(p, std::vector<double>{}), InvalidParameter);
    p = sample();
    p.m_pa_ac = 11;
    EXPECT_THROW(radio_power(p, std::vector<double>{}), InvalidParameter);
    p = sample();
    p.d_pa_w = -1.0;
    EXPECT_THROW(radio_power(p, std::vector<double>{}), InvalidParameter);
    EXPECT_THROW(radio_power(sample(), std::vector<double>{-1.0}), InvalidParameter);
}

TEST(PowerParams, MultibandSumsChains) {
    const auto p = power_params_for(catalog_lookup("4G/5G macro"));
    EXPECT_EQ(p.m_trx_av, 72);
    EXPECT_EQ(p.m_pa_ac, 72);
    EXPECT_DOUBLE_EQ(p.p_bb_w, 60.0);
    EXPECT_NEAR(p.m_trx_av * p.d_trx_w, 8 * 1.5 + 64 * 4.0, 1e-12);
}

TEST(PowerParams, PicoOverride) {
    const auto p = power_params_for(catalog_lookup("6G pico"));
    EXPECT_DOUBLE_EQ(p.p_0_w, 30.0);
    EXPECT_DOUBLE_EQ(p.p_bb_w, 20.0);
    EXPECT_DOUBLE_EQ(p.d_trx_w, 1.0);
    EXPECT_DOUBLE_EQ(p.d_pa_w, 0.5);
    EXPECT_DOUBLE_EQ(p.p_bbu_w, 100.0);
    PowerCalibration cal;
    cal.overrides.clear();
    EXPECT_DOUBLE_EQ(power_params_for(catalog_lookup("6G pico"), cal).d_trx_w, 2.5);
}

TEST(NetworkPower, AdditiveOverRadios) {
    const auto plan = build_hex_grid(500.0, 2);
    const auto a = instantiate_layer(plan, catalog_lookup("4G macro"));
    const auto b = instantiate_layer(plan, catalog_lookup("5G macro"), {30, 150, 270}, {25.0, 90.0}, 19, 57);
    auto radios = a.radios;
    radios.insert(radios.end(), b.radios.begin(), b.radios.end());
    auto cells = a.cells;
    cells.insert(cells.end(), b.cells.begin(), b.cells.end());
    const auto ra = network_power(a.radios, a.cells);
    const auto both = network_power(radios, cells);
    EXPECT_NEAR(ra.total_w, 19 * 569.2347176172834, 1e-6);
    EXPECT_NEAR(both.total_w, 19 * (569.2347176172834 + 1264.8527726208126), 1e-6);
    double layers = 0.0;
    for (const auto& [k, v] : both.per_layer) layers += v;
    EXPECT_NEAR(layers, both.total_w, 1e-6);
    EXPECT_EQ(both.per_radio.size(), 38u);
}

TEST(NetworkPower, JsonShape) {
    const auto inst = instantiate_layer(build_hex_grid(500.0, 0), catalog_lookup("5G micro"));
    auto r = network_power(inst.radios, inst.cells, {}, {"5G micro UMi"});
    r.scenario = "x";
    const auto j = to_json(r);
    EXPECT_EQ(j["per_radio"].size(), 1u);
    EXPECT_NEAR(j["per_layer"]["5G micro UMi"].get<double>(), 799.3045512722497, 1e-9);
    EXPECT_NEAR(j["total_w"].get<double>(), 799.3045512722497, 1e-9);
}
