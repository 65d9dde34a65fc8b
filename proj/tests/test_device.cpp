// Copyright 2026 The camoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sstream>

#include "camoforge/device.hpp"
#include "camoforge/rng.hpp"

using namespace camoforge;
using namespace camoforge::device;

TEST(Device, ConductancesFromTableParameters) {
  auto g = conductances(DeviceParams{});
  EXPECT_NEAR(g.parallel, 420e-6, 1e-15);
  EXPECT_NEAR(g.antiparallel, 420e-6 / 2.7, 1e-15);
  EXPECT_NEAR(g.antiparallel * 1e6, 155.6, 0.05);
  EXPECT_DOUBLE_EQ(g.parallel / g.antiparallel, 2.7);
}

TEST(Device, ZeroTmrMakesConductancesEqualAndReadoutInfeasible) {
  DeviceParams p;
  p.tmr = 0;
  auto g = conductances(p);
  EXPECT_EQ(g.parallel, g.antiparallel);
  EXPECT_THROW(read_power(p, 20e-6), std::domain_error);
}

TEST(Device, DoubledAreaDoublesConductances) {
  DeviceParams p;
  auto a = conductances(p);
  p.nanomagnet_length *= 2;
  auto b = conductances(p);
  EXPECT_NEAR(b.parallel, 2 * a.parallel, 1e-15);
  EXPECT_NEAR(b.antiparallel, 2 * a.antiparallel, 1e-15);
}

TEST(Device, ReadPowerAtDeterministicCurrent) {
  double w = read_power(DeviceParams{}, 20e-6);
  EXPECT_NEAR(w * 1e6, 0.2095, 0.0005);
  EXPECT_GE(w, 0.2095e-6 * 0.98);
  EXPECT_LE(w, 0.2125e-6);
  EXPECT_EQ(read_power(DeviceParams{}, 0), 0.0);
}

TEST(Device, CatalogLeakageLiftsPowerToCatalogValue) {
  DeviceParams p;
  p.leakage_power = catalog_leakage();
  EXPECT_NEAR(read_power(p, 20e-6), 0.2125e-6, 1e-15);
}

TEST(Device, QuadraticScalingProperty) {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    DeviceParams p;
    p.rap = 0.5e-12 + rng.uniform01() * 2e-12;
    p.tmr = 0.2 + rng.uniform01() * 3;
    p.r_heavy_metal = 100 + rng.uniform01() * 5000;
    p.spin_hall_angle = 0.1 + rng.uniform01();
    double i = 1e-6 + rng.uniform01() * 50e-6;
    double a = read_power(p, i), b = read_power(p, 2 * i);
    EXPECT_NEAR(b / a, 4.0, 4.0 * 1e-12);
  }
  EXPECT_NEAR(read_power(DeviceParams{}, 40e-6) / read_power(DeviceParams{}, 20e-6), 4.0, 1e-12);
}

TEST(Device, Energy) {
  EXPECT_NEAR(energy(0.2125e-6, 1.55e-9) * 1e15, 0.329, 0.001);
  EXPECT_NEAR(energy(0.2673e-6, 1.83e-9) * 1e15, 0.489, 0.001);
  EXPECT_EQ(energy(0, 5), 0.0);
  EXPECT_THROW(energy(-1, 1), std::invalid_argument);
}

TEST(Device, CatalogEnergyConsistentWithPowerTimesDelay) {
  for (auto k : {PrimitiveKind::kIntrinsic, PrimitiveKind::kWithTransducer, PrimitiveKind::kObfuscatedWithMuxes}) {
    auto c = primitive_cost(k);
    EXPECT_NEAR(energy(c.power, c.delay) / c.energy, 1.0, 0.03) << primitive_name(k);
  }
}

TEST(Device, CatalogOrderingAndOverheads) {
  auto i = primitive_cost(PrimitiveKind::kIntrinsic);
  auto t = primitive_cost(PrimitiveKind::kWithTransducer);
  auto o = primitive_cost(PrimitiveKind::kObfuscatedWithMuxes);
  for (auto [a, b] : {std::pair{i, t}, std::pair{t, o}}) {
    EXPECT_LE(a.energy, b.energy);
    EXPECT_LE(a.power, b.power);
    EXPECT_LE(a.delay, b.delay);
    EXPECT_LE(a.area, b.area);
  }
  EXPECT_NEAR(overhead(o.energy, t.energy), 0.089, 0.0005);
  EXPECT_NEAR(overhead(o.power, t.power), 0.058, 0.001);
  EXPECT_NEAR(overhead(o.delay, t.delay), 0.017, 0.0005);
  EXPECT_DOUBLE_EQ(i.area, 0.0016e-12);
  EXPECT_DOUBLE_EQ(kPower90PercentAccuracy, 0.1071e-6);
}

TEST(Device, OperatingPoints) {
  auto d = deterministic_point();
  EXPECT_EQ(d.correctness, 1.0);
  EXPECT_DOUBLE_EQ(d.mean_delay, 1.55e-9);
  auto p = probabilistic_point(0.9);
  EXPECT_DOUBLE_EQ(p.spin_current, 15e-6);
  EXPECT_DOUBLE_EQ(p.mean_delay, 4.5e-9);
  EXPECT_GT(p.power, 0);
}

TEST(FlipCalibration, PassthroughInterpolationAndClamping) {
  FlipCalibration cal({{0.0, 0.5}, {15e-6, 0.9}, {20e-6, 1.0}});
  EXPECT_DOUBLE_EQ(flip_probability(cal, 15e-6), 0.9);
  EXPECT_DOUBLE_EQ(flip_probability(cal, 20e-6), 1.0);
  EXPECT_DOUBLE_EQ(flip_probability(cal, 30e-6), 1.0);
  EXPECT_NEAR(flip_probability(cal, 17.5e-6), 0.95, 1e-12);
  EXPECT_NEAR(flip_probability(cal, 7.5e-6), 0.7, 1e-12);
}

TEST(FlipCalibration, RejectsInvalidTables) {
  EXPECT_THROW(FlipCalibration({}), std::invalid_argument);
  EXPECT_THROW(FlipCalibration({{10e-6, 0.9}, {15e-6, 0.8}, {20e-6, 1.0}}), std::invalid_argument);
  EXPECT_THROW(FlipCalibration({{10e-6, 0.9}}), std::invalid_argument);
  EXPECT_THROW(FlipCalibration({{10e-6, 0.9}, {10e-6, 0.95}, {20e-6, 1.0}}), std::invalid_argument);
}

TEST(FlipCalibration, MonotoneAndBoundedOnRandomTables) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::pair<double, double>> pts{{20e-6, 1.0}};
    double p = 0.5;
    for (int k = 1; k <= 4; ++k) {
      p = std::min(1.0, p + rng.uniform01() * 0.1);
      pts.push_back({k * 4e-6, p});
    }
    FlipCalibration cal(pts);
    double prev = 0.5;
    for (int s = 0; s <= 300; ++s) {
      double v = flip_probability(cal, s * 0.1e-6);
      EXPECT_GE(v, prev - 1e-15);
      EXPECT_GE(v, 0.5);
      EXPECT_LE(v, 1.0);
      prev = v;
    }
  }
}

TEST(Device, ParameterFileRoundTrip) {
  DeviceParams p;
  p.tmr = 2.5;
  p.rap = 2e-12;
  std::istringstream in(format_params(p));
  auto q = parse_params(in);
  EXPECT_DOUBLE_EQ(q.tmr, 2.5);
  EXPECT_DOUBLE_EQ(q.rap, 2e-12);
  std::istringstream bad("nonsense = 1\n");
  EXPECT_THROW(parse_params(bad), std::invalid_argument);
}

TEST(Device, StageSpinCurrentHelper) {
  DeviceParams p;
  EXPECT_GT(stage_spin_current(p, 0.02), 0);
  EXPECT_NEAR(stage_spin_current(p, 0.04), 2 * stage_spin_current(p, 0.02), 1e-18);
}
