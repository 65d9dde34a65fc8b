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

#include <cmath>
#include <fstream>
#include <sstream>

#include "camoforge/bench.hpp"
#include "camoforge/obfuscate.hpp"
#include "camoforge/simulate.hpp"

using namespace camoforge;

namespace {

Circuit load(const std::string& name) {
  std::ifstream in(std::string(CAMOFORGE_BENCH_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_bench(s.str());
}

double three_sigma(double p, double n) { return 3.0 * std::sqrt(p * (1 - p) / n); }

BitString random_bits(Rng& rng, std::size_t n) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, rng.next() & 1);
  return b;
}

const Circuit kNand = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)\n");

}  // namespace

TEST(Simulate, C17Zero) {
  Simulator sim(load("c17.bench"));
  EXPECT_EQ(sim.eval(BitString::from_binary("00000"), BitString(0)).to_binary(), "00");
  EXPECT_EQ(sim.eval(BitString::from_binary("11111"), BitString(0)).to_binary(), "10");
}

TEST(Simulate, WidthMismatchIsAnError) {
  Simulator sim(load("c17.bench"));
  EXPECT_THROW(sim.eval(BitString(4), BitString(0)), std::invalid_argument);
  auto l = insert_key_gates(load("c17.bench"), 3, 1);
  Simulator locked(l.circuit, {}, l.key_inputs);
  EXPECT_THROW(locked.eval(BitString(5), BitString(2)), std::invalid_argument);
}

TEST(Simulate, InertAnnotationsMatchDeterministicOn10kCases) {
  Circuit c = load("c880.bench");
  auto sel = select_gates_random(c, 0.5, 4).gates;
  Simulator det(c), inert(c, make_probabilistic(c, sel, 1.0));
  Rng rng(12);
  for (int t = 0; t < 10000; ++t) {
    auto x = random_bits(rng, c.inputs().size());
    ASSERT_EQ(inert.eval(x, BitString(0), EvalMode::random(rng.next(), rng.next()), rng.next()),
              det.eval(x, BitString(0)));
  }
}

TEST(Simulate, DeterministicModeIgnoresAnnotations) {
  Circuit c = load("c432.bench");
  Simulator noisy(c, make_probabilistic(c, select_gates_random(c, 0.5, 1).gates, 0.6)), det(c);
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    auto x = random_bits(rng, c.inputs().size());
    EXPECT_EQ(noisy.eval(x, BitString(0)), det.eval(x, BitString(0)));
  }
}

TEST(Simulate, FlipRateWithinThreeSigma) {
  const double n = 1e5;
  for (double corr : {0.95, 0.99, 0.7}) {
    Simulator sim(kNand, {{"y", Probabilistic{corr}}});
    auto h = sim.sample(BitString::from_binary("11"), BitString(0), EvalMode::random(42), 0, static_cast<uint64_t>(n));
    double flips = static_cast<double>(h.count(BitString::from_binary("1"))) / n;
    EXPECT_NEAR(flips, 1 - corr, three_sigma(1 - corr, n)) << corr;
  }
}

TEST(Simulate, SingleNandAtNinetyFivePercent) {
  auto h = sample_outputs(kNand, {{"y", Probabilistic{0.95}}}, {}, BitString(0), BitString::from_binary("00"), 100000, 7);
  EXPECT_NEAR(static_cast<double>(h.count(BitString::from_binary("0"))) / 1e5, 0.05, 0.005);
}

TEST(Simulate, C17OutputGateAtNinetyFivePercent) {
  Circuit c = load("c17.bench");
  auto h = sample_outputs(c, {{"N22", Probabilistic{0.95}}}, {}, BitString(0), BitString::from_binary("00000"), 100000, 3);
  EXPECT_EQ(h.total(), 100000u);
  EXPECT_NEAR(static_cast<double>(h.count(BitString::from_binary("00"))) / 1e5, 0.95, 0.005);
  EXPECT_NEAR(static_cast<double>(h.count(BitString::from_binary("10"))) / 1e5, 0.05, 0.005);
}

TEST(Simulate, PerGateFlipRatesOnLargerCircuit) {
  Circuit c = load("c432.bench");
  auto sel = select_gates_random(c, 0.2, 8).gates;
  sel.resize(5);
  for (const auto& g : sel) {
    // Observe the gate directly by making it the only output.
    std::vector<std::string> outs{g};
    Circuit probe(c.inputs(), outs, c.gates());
    Simulator noisy(probe, make_probabilistic(probe, {g}, 0.9)), det(probe);
    auto x = BitString(c.inputs().size());
    auto h = noisy.sample(x, BitString(0), EvalMode::random(5), 0, 20000);
    double flips = 1.0 - static_cast<double>(h.count(det.eval(x, BitString(0)))) / 20000.0;
    EXPECT_NEAR(flips, 0.1, three_sigma(0.1, 20000)) << g;
  }
}

TEST(Simulate, PolymorphicFrequenciesWithinThreeSigma) {
  Simulator sim(kNand, {{"y", polymorphic_distribution(GateFunction::nand())}});
  std::map<unsigned, double> seen;
  const int n = 100000;
  auto mode = EvalMode::random(99);
  for (int s = 0; s < n; ++s) {
    unsigned table = 0;
    for (unsigned m = 0; m < 4; ++m) {
      if (sim.eval(BitString::from_uint(m, 2), BitString(0), mode, s)[0]) table |= 1u << m;
    }
    seen[table] += 1;
  }
  auto expect = [&](const char* fn, double p) {
    double f = seen[function_by_name(fn).table4()] / n;
    EXPECT_NEAR(f, p, three_sigma(p, n)) << fn;
  };
  expect("NAND", 2.0 / 3.0);
  for (const char* fn : {"AND", "NOR", "OR", "XOR", "XNOR"}) expect(fn, 1.0 / 15.0);
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Simulate, PolymorphicEpochHoldsFunction) {
  Simulator sim(kNand, {{"y", polymorphic_distribution(GateFunction::nand())}});
  auto mode = EvalMode::random(1, 0, 16);
  for (uint64_t block = 0; block < 50; ++block) {
    auto ref = sim.eval(BitString::from_binary("10"), BitString(0), mode, block * 16);
    for (uint64_t s = 1; s < 16; ++s) EXPECT_EQ(sim.eval(BitString::from_binary("10"), BitString(0), mode, block * 16 + s), ref);
  }
}

TEST(Simulate, SameSeedSameHistogramAndStreamsDiffer) {
  Circuit c = load("c432.bench");
  auto anns = make_probabilistic(c, select_gates_random(c, 0.5, 2).gates, 0.9);
  Simulator sim(c, anns);
  auto x = BitString(c.inputs().size());
  auto a = sim.sample(x, BitString(0), EvalMode::random(5, 1), 0, 5000);
  EXPECT_EQ(a, sim.sample(x, BitString(0), EvalMode::random(5, 1), 0, 5000));
  EXPECT_NE(a, sim.sample(x, BitString(0), EvalMode::random(5, 2), 0, 5000));
}

TEST(Simulate, SplitSamplingMergesToSameHistogram) {
  Circuit c = load("c432.bench");
  Simulator sim(c, make_probabilistic(c, select_gates_random(c, 0.5, 2).gates, 0.9));
  auto x = BitString(c.inputs().size());
  auto mode = EvalMode::random(17);
  auto whole = sim.sample(x, BitString(0), mode, 0, 1000);
  auto first = sim.sample(x, BitString(0), mode, 0, 300);
  auto second = sim.sample(x, BitString(0), mode, 300, 700);
  OutputHistogram ab(whole.width()), ba(whole.width());
  ab.merge(first);
  ab.merge(second);
  ba.merge(second);
  ba.merge(first);
  EXPECT_EQ(ab, whole);
  EXPECT_EQ(ba, whole);
}

TEST(Simulate, DeterministicCircuitPointMass) {
  auto h = sample_outputs(load("c17.bench"), {}, {}, BitString(0), BitString::from_binary("10101"), 1000, 1);
  ASSERT_EQ(h.distinct(), 1u);
  EXPECT_EQ(h.total(), 1000u);
  EXPECT_THROW(sample_outputs(load("c17.bench"), {}, {}, BitString(0), BitString(5), 0, 1), std::invalid_argument);
}

TEST(Histogram, RankingBreaksTiesLexicographically) {
  OutputHistogram h(2);
  h.add(BitString::from_binary("11"), 5);
  h.add(BitString::from_binary("01"), 5);
  h.add(BitString::from_binary("10"), 9);
  auto r = h.ranked();
  EXPECT_EQ(r[0].first.to_binary(), "10");
  EXPECT_EQ(r[1].first.to_binary(), "01");
  EXPECT_EQ(r[2].first.to_binary(), "11");
  EXPECT_THROW(h.add(BitString(3)), std::invalid_argument);
}

TEST(Simulate, KeyedEvaluationUsesKeySlots) {
  Circuit c = load("c17.bench");
  auto l = insert_key_gates(c, 3, 5);
  Simulator det(c), locked(l.circuit, {}, l.key_inputs);
  for (uint64_t m = 0; m < 32; ++m) {
    auto x = BitString::from_uint(m, 5);
    EXPECT_EQ(locked.eval(x, l.correct_key), det.eval(x, BitString(0)));
  }
}
