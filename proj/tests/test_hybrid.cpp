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

#include <set>
#include <sstream>

#include "camoforge/bench.hpp"
#include "camoforge/hybrid.hpp"

using namespace camoforge;

namespace {

Circuit chain3() { return parse_bench("INPUT(a)\nOUTPUT(z)\nx = NOT(a)\ny = NOT(x)\nz = NOT(y)\n"); }

std::set<std::string> all_gates(const Circuit& c) {
  std::set<std::string> s;
  for (const auto& g : c.gates()) s.insert(g.name);
  return s;
}

uint64_t adder_output(const BitString& out) {
  uint64_t v = 0;
  for (std::size_t i = 0; i < out.size(); ++i) v |= uint64_t(out[i]) << i;
  return v;
}

}  // namespace

TEST(Sta, UnitChain) {
  auto t = sta(chain3(), std::vector<double>(3, 1.0));
  EXPECT_EQ(t.critical_delay, 3.0);
  for (double s : t.slack) EXPECT_EQ(s, 0.0);
  EXPECT_EQ(t.arrival, (std::vector<double>{1, 2, 3}));
}

TEST(Sta, GsheChain) {
  Circuit c = chain3();
  DelayMap d = default_delays();
  d.gshe_delay = 1.55e-9;
  EXPECT_NEAR(sta(c, gate_delays(c, d, all_gates(c))).critical_delay, 4.65e-9, 1e-21);
}

TEST(Sta, SideBranchSlack) {
  Circuit c = parse_bench("INPUT(a)\nOUTPUT(z)\nOUTPUT(w)\nx = NOT(a)\ny = NOT(x)\nz = NOT(y)\nw = NOT(a)\n");
  auto t = sta(c, std::vector<double>(4, 1.0));
  EXPECT_EQ(t.critical_delay, 3.0);
  EXPECT_EQ(t.slack[c.gate_index("w")], 2.0);
  EXPECT_EQ(t.slack[c.gate_index("y")], 0.0);
}

TEST(Sta, MonotoneArrivalAndErrors) {
  Circuit c = generate_skewed_circuit({});
  auto t = sta(c, default_delays());
  double max_po = 0;
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    for (NetId f : c.gate_fanin(g)) {
      if (f >= c.num_sources()) {
        EXPECT_LT(t.arrival[f - c.num_sources()], t.arrival[g]);
      }
    }
    EXPECT_GE(t.slack[g], -1e-18);
  }
  for (NetId o : c.output_ids()) max_po = std::max(max_po, o >= c.num_sources() ? t.arrival[o - c.num_sources()] : 0.0);
  EXPECT_EQ(max_po, t.critical_delay);
  DelayMap missing;
  EXPECT_THROW(sta(c, missing), std::invalid_argument);
  EXPECT_THROW(sta(c, std::vector<double>(2, 1.0)), std::invalid_argument);
}

TEST(Select, SingleCriticalPathGivesNothing) {
  auto sel = delay_aware_select(chain3(), default_delays());
  EXPECT_TRUE(sel.gates.empty());
  EXPECT_EQ(sel.timing.critical_delay, sel.original_critical_delay);
}

TEST(Select, SkewedCircuitsLandInBand) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    SkewedCircuitParams p;
    p.seed = seed;
    Circuit c = generate_skewed_circuit(p);
    auto sel = delay_aware_select(c, default_delays());
    double frac = double(sel.gates.size()) / double(c.gates().size());
    EXPECT_GE(frac, 0.05) << seed;
    EXPECT_LE(frac, 0.15) << seed;
    EXPECT_EQ(sel.timing.critical_delay, sel.original_critical_delay);
    std::set<std::string> chosen(sel.gates.begin(), sel.gates.end());
    EXPECT_EQ(sta(c, gate_delays(c, default_delays(), chosen)).critical_delay, sel.original_critical_delay);
  }
}

TEST(Select, NeverIncreasesCriticalDelayOnRandomCircuits) {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    std::vector<std::string> inputs;
    for (int i = 0; i < 8; ++i) inputs.push_back("i" + std::to_string(i));
    std::vector<std::string> nets = inputs;
    std::vector<Gate> gates;
    const GateFunction::Family fams[] = {GateFunction::Family::kAnd, GateFunction::Family::kNand, GateFunction::Family::kOr,
                                         GateFunction::Family::kNor, GateFunction::Family::kXor};
    int n = 20 + static_cast<int>(rng.uniform_int(100));
    for (int g = 0; g < n; ++g) {
      std::string a = nets[rng.uniform_int(nets.size())], b = nets[rng.uniform_int(nets.size())];
      std::string name = "g" + std::to_string(g);
      gates.push_back({name, GateFunction::from_family(fams[rng.uniform_int(5)], 2), {a, b}});
      nets.push_back(name);
    }
    Circuit c(inputs, {nets.back(), nets[nets.size() / 2]}, gates);
    DelayMap d = default_delays();
    d.gshe_delay = 20e-12 + rng.uniform01() * 40e-12;
    auto sel = delay_aware_select(c, d);
    EXPECT_LE(sel.timing.critical_delay, sel.original_critical_delay);
    std::set<std::string> chosen(sel.gates.begin(), sel.gates.end());
    EXPECT_EQ(sta(c, gate_delays(c, d, chosen)).critical_delay, sel.timing.critical_delay);
  }
}

TEST(ChipCost, EmptyAndFullSelection) {
  Circuit c = generate_skewed_circuit({});
  CmosCost cmos;
  auto none = chip_cost(c, {}, default_delays());
  double n = double(c.gates().size());
  EXPECT_NEAR(none.area / (n * cmos.area), 1.0, 1e-12);
  EXPECT_NEAR(none.power / (n * cmos.power), 1.0, 1e-12);
  EXPECT_EQ(none.delay, sta(c, default_delays()).critical_delay);
  auto names = all_gates(c);
  std::vector<std::string> every(names.begin(), names.end());
  auto full = chip_cost(c, every, default_delays());
  EXPECT_NEAR(full.area / (n * 0.029e-12), 1.0, 1e-12);
  EXPECT_THROW(chip_cost(c, {"nope"}, default_delays()), std::exception);
}

TEST(ChipCost, ThousandGateGshePower) {
  std::string text = "INPUT(a)\nOUTPUT(g999)\ng0 = NOT(a)\n";
  for (int i = 1; i < 1000; ++i) text += "g" + std::to_string(i) + " = NOT(g" + std::to_string(i - 1) + ")\n";
  Circuit c = parse_bench(text);
  auto names = all_gates(c);
  std::vector<std::string> every(names.begin(), names.end());
  auto cost = chip_cost(c, every, default_delays());
  EXPECT_NEAR(cost.power * 1e3, 0.2673, 1e-9);
  EXPECT_NEAR(cost.delay, 1000 * 1.83e-9, 1e-15);
}

TEST(Adder, WidthOneTruthTable) {
  Circuit c = build_ripple_adder(1);
  Simulator sim(c);
  for (uint64_t x = 0; x < 8; ++x) {
    uint64_t a = x & 1, b = (x >> 1) & 1, cin = (x >> 2) & 1;
    EXPECT_EQ(adder_output(sim.eval(BitString::from_uint(x, 3), BitString(0))), a + b + cin);
  }
}

TEST(Adder, WidthFourExhaustive) {
  Circuit c = build_ripple_adder(4);
  Simulator sim(c);
  for (uint64_t a = 0; a < 16; ++a)
    for (uint64_t b = 0; b < 16; ++b) {
      BitString in(9);
      for (int i = 0; i < 4; ++i) {
        in.set(i, (a >> i) & 1);
        in.set(4 + i, (b >> i) & 1);
      }
      EXPECT_EQ(adder_output(sim.eval(in, BitString(0))), a + b);
    }
  BitString in(9);
  in.set(0, true), in.set(1, true), in.set(2, true), in.set(4, true), in.set(7, true);
  EXPECT_EQ(adder_output(sim.eval(in, BitString(0))), 16u);
}

TEST(Adder, GateCounts) {
  EXPECT_EQ(build_ripple_adder(32).gates().size(), 160u);
  EXPECT_EQ(build_ripple_adder(32).outputs().size(), 33u);
  EXPECT_THROW(build_ripple_adder(0), std::invalid_argument);
}

TEST(LsbCone, Boundaries) {
  Circuit c = build_ripple_adder(8);
  EXPECT_TRUE(lsb_cone_selection(c, 0).empty());
  auto all = lsb_cone_selection(c, 8);
  std::set<std::string> expect;
  for (int i = 0; i < 8; ++i) expect.insert("s" + std::to_string(i));
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()), expect);
}

TEST(LsbCone, SelectedConesStayBelowK) {
  for (std::size_t w : {4u, 8u, 16u}) {
    Circuit c = build_ripple_adder(w);
    for (std::size_t k = 0; k <= w; ++k) {
      for (const auto& g : lsb_cone_selection(c, k)) {
        for (const auto& po : fanout_cone(c, g)) {
          auto pos = std::find(c.outputs().begin(), c.outputs().end(), po) - c.outputs().begin();
          EXPECT_LT(static_cast<std::size_t>(pos), k) << g;
        }
      }
    }
  }
}

TEST(AdderStudy, CaseStudyNumbers) {
  auto s = adder_case_study(32, 10);
  EXPECT_NEAR(s.worst_case_error, 1023.0 / 4294967296.0, 1e-18);
  EXPECT_NEAR(s.worst_case_error * 100, 0.000024, 0.0000005);
  EXPECT_NEAR(s.per_gate_saving, 0.496, 0.0005);
  EXPECT_EQ(s.selected, 10u);
  EXPECT_EQ(s.gates, 160u);
  EXPECT_NEAR(s.total_saving, s.per_gate_saving * 10 / 160, 1e-12);
  auto zero = adder_case_study(32, 0);
  EXPECT_EQ(zero.worst_case_error, 0.0);
  EXPECT_EQ(zero.total_saving, 0.0);
  EXPECT_THROW(adder_case_study(8, 9), std::invalid_argument);
}

TEST(AdderStudy, AdversarialFlipsRespectBound) {
  for (std::size_t k = 0; k <= 8; ++k) {
    uint64_t bound = (uint64_t{1} << k) - 1;
    uint64_t worst = adversarial_flip_max_error(8, k);
    EXPECT_LE(worst, bound) << k;
    EXPECT_EQ(worst, bound) << k;
  }
}

TEST(Delays, ParseFile) {
  std::istringstream in("# cell delays\nnand 0.009\nINV 0.005  # inverter\nbuf 0.007\nGSHE 1.55\n\n");
  auto d = parse_delays(in);
  EXPECT_NEAR(d.cmos.at("NAND"), 9e-12, 1e-24);
  EXPECT_NEAR(d.cmos.at("NOT"), 5e-12, 1e-24);
  EXPECT_NEAR(d.cmos.at("BUFF"), 7e-12, 1e-24);
  EXPECT_NEAR(d.gshe_delay, 1.55e-9, 1e-21);
  EXPECT_NEAR(d.cmos.at("XOR"), 18e-12, 1e-24);
  std::istringstream bad("NAND\n");
  EXPECT_THROW(parse_delays(bad), std::invalid_argument);
  std::istringstream neg("NAND -1\n");
  EXPECT_THROW(parse_delays(neg), std::invalid_argument);
}
