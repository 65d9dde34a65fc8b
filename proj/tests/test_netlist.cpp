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

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "camoforge/bench.hpp"
#include "camoforge/rng.hpp"
#include "camoforge/simulate.hpp"

using namespace camoforge;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(CAMOFORGE_BENCH_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Circuit c17() { return parse_bench(slurp("c17.bench")); }

// Random acyclic circuit: mostly 2-input gates, some 3-input gates and inverters.
Circuit random_circuit(Rng& rng, std::size_t inputs, std::size_t gates, std::size_t outputs) {
  using F = GateFunction::Family;
  static const F kinds[] = {F::kAnd, F::kNand, F::kOr, F::kNor, F::kXor, F::kXnor};
  std::vector<std::string> in, nets;
  for (std::size_t i = 0; i < inputs; ++i) {
    in.push_back("i" + std::to_string(i));
    nets.push_back(in.back());
  }
  std::vector<Gate> gs;
  for (std::size_t g = 0; g < gates; ++g) {
    std::string name = "g" + std::to_string(g);
    auto pick = [&] { return nets[rng.uniform_int(nets.size())]; };
    if (rng.uniform_int(8) == 0) {
      gs.push_back({name, GateFunction::inv(), {pick()}});
    } else {
      unsigned arity = rng.uniform_int(5) == 0 ? 3 : 2;
      std::vector<std::string> fin;
      for (unsigned j = 0; j < arity; ++j) fin.push_back(pick());
      gs.push_back({name, GateFunction::from_family(kinds[rng.uniform_int(6)], arity), fin});
    }
    nets.push_back(name);
  }
  std::vector<std::string> outs;
  for (std::size_t o = 0; o < outputs; ++o) outs.push_back("g" + std::to_string(gates - 1 - o));
  return Circuit(in, outs, gs);
}

}  // namespace

TEST(GateFunction, SixteenTwoInputFunctionsAreDistinct) {
  std::set<std::vector<uint64_t>> tables;
  for (unsigned t = 0; t < 16; ++t) tables.insert(GateFunction::two_input(t).truth_table());
  EXPECT_EQ(tables.size(), 16u);
  EXPECT_EQ(GateFunction::nand().table4(), 0b0111u);
  EXPECT_EQ(GateFunction::xor_().table4(), 0b0110u);
}

TEST(GateFunction, BitParallelEvalMatchesTruthTable) {
  for (unsigned t = 0; t < 16; ++t) {
    auto f = GateFunction::two_input(t);
    uint64_t a = 0b1010, b = 0b1100;
    uint64_t in[2] = {a, b};
    uint64_t r = f.eval(in);
    for (unsigned m = 0; m < 4; ++m) EXPECT_EQ((r >> m) & 1, f.output(m) ? 1u : 0u);
  }
}

TEST(GateFunction, RejectsBadArity) {
  EXPECT_THROW(GateFunction(0, {0}), NetlistError);
  EXPECT_THROW(GateFunction::from_family(GateFunction::Family::kNot, 2), NetlistError);
}

TEST(Bench, ParsesC17) {
  Circuit c = c17();
  EXPECT_EQ(c.inputs().size(), 5u);
  EXPECT_EQ(c.outputs().size(), 2u);
  EXPECT_EQ(c.gates().size(), 6u);
  for (const auto& g : c.gates()) EXPECT_EQ(g.function.family(), GateFunction::Family::kNand);
}

TEST(Bench, C17ZeroInputGivesZeroOutput) {
  EXPECT_EQ(evaluate(c17(), BitString::from_binary("00000")).to_binary(), "00");
}

TEST(Bench, Errors) {
  EXPECT_THROW(parse_bench(""), NetlistError);
  EXPECT_THROW(parse_bench("INPUT(a)\nOUTPUT(g)\ng = NAND(g, a)\n"), NetlistError);
  EXPECT_THROW(parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, b)\n"), NetlistError);
  EXPECT_THROW(parse_bench("INPUT(a)\nINPUT(a)\nOUTPUT(a)\n"), NetlistError);
  try {
    parse_bench("INPUT(a)\nOUTPUT(y)\ny = FOO(a)\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3, column 4"), std::string::npos);
  }
}

TEST(Bench, LongerCycleDetected) {
  EXPECT_THROW(parse_bench("INPUT(a)\nOUTPUT(y)\nx = AND(a, y)\ny = OR(a, x)\n"), NetlistError);
}

TEST(Bench, SingleBufferIsThreeLines) {
  EXPECT_EQ(write_bench(parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUFF(a)\n")), "INPUT(a)\nOUTPUT(y)\ny = BUFF(a)\n");
}

TEST(Bench, PragmasSurviveByteExact) {
  std::string text = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\n#@ prob y 0.9\n#@ custom   spacing kept\ny = NAND(a, b)\n";
  Circuit c = parse_bench(text);
  ASSERT_EQ(c.pragmas().size(), 2u);
  EXPECT_EQ(c.pragmas()[1], "#@ custom   spacing kept");
  EXPECT_EQ(parse_bench(write_bench(c)).pragmas(), c.pragmas());
}

TEST(Bench, LutExtensionRoundTrips) {
  Circuit c = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = LUT 0x96(a, b, c)\n");
  EXPECT_EQ(c.gates()[0].function, GateFunction::xor_(3));
  Circuit d = parse_bench("INPUT(a)\nINPUT(b)\nINPUT(c)\nOUTPUT(y)\ny = LUT 0xe8(a, b, c)\n");
  EXPECT_EQ(parse_bench(write_bench(d)).gates()[0].function.truth_table(), d.gates()[0].function.truth_table());
}

TEST(Bench, RoundTripOnCorpus) {
  for (const char* name : {"c17.bench", "c432.bench", "c880.bench", "c7552.bench", "s27.bench"}) {
    Circuit c = parse_bench(slurp(name));
    std::string once = write_bench(c);
    Circuit d = parse_bench(once);
    EXPECT_EQ(write_bench(d), once) << name;
    EXPECT_EQ(d.gates().size(), c.gates().size());
    EXPECT_EQ(d.inputs(), c.inputs());
    EXPECT_EQ(d.outputs(), c.outputs());
  }
}

TEST(Netlist, TopologicalOrderRespectsEdges) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    Circuit c = random_circuit(rng, 6, 40, 3);
    std::map<std::string, std::size_t> pos;
    auto order = topological_order(c);
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (const auto& g : c.gates())
      for (const auto& f : g.fanin)
        if (pos.count(f)) {
          EXPECT_LT(pos[f], pos[g.name]);
        }
  }
}

TEST(Netlist, ChainOrder) {
  Circuit c({"i"}, {"c"}, {{"c", GateFunction::inv(), {"b"}}, {"b", GateFunction::inv(), {"a"}}, {"a", GateFunction::buf(), {"i"}}});
  EXPECT_EQ(topological_order(c), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(Netlist, C17Cones) {
  Circuit c = c17();
  EXPECT_EQ(fanout_cone(c, "N16"), (std::vector<std::string>{"N22", "N23"}));
  EXPECT_EQ(fanout_cone(c, "N10"), (std::vector<std::string>{"N22"}));
  EXPECT_EQ(fanin_cone(c, c.outputs()).size(), c.gates().size());
}

TEST(Netlist, UnrollS27) {
  Circuit s = parse_bench(slurp("s27.bench"));
  ASSERT_EQ(s.flops().size(), 3u);
  Circuit u = unroll_sequential(s);
  EXPECT_TRUE(u.is_combinational());
  EXPECT_EQ(u.inputs().size(), s.inputs().size() + 3);
  EXPECT_EQ(u.outputs().size(), s.outputs().size() + 3);
  for (const auto& ff : s.flops()) EXPECT_TRUE(u.is_pseudo(ff.q_output));
  Circuit c = c17();
  EXPECT_EQ(write_bench(unroll_sequential(c)), write_bench(c));
}

TEST(Netlist, SingleFlopLoop) {
  Circuit s = parse_bench("INPUT(a)\nOUTPUT(y)\nq = DFF(d)\nd = XOR(a, q)\ny = BUFF(q)\n");
  Circuit u = unroll_sequential(s);
  EXPECT_TRUE(u.is_combinational());
  EXPECT_EQ(u.inputs().size(), 2u);
  EXPECT_EQ(u.outputs().size(), 2u);
}

TEST(Netlist, DecomposeKeepsFunction) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    Circuit c = random_circuit(rng, 6, 30, 4);
    Circuit d = decompose_to_two_input(c);
    for (const auto& g : d.gates()) EXPECT_LE(g.function.arity(), 2u);
    for (uint64_t m = 0; m < 64; ++m) {
      auto x = BitString::from_uint(m, 6);
      EXPECT_EQ(evaluate(c, x), evaluate(d, x));
    }
  }
}

TEST(Netlist, DeterministicEvalMatchesTruthTableBruteForce) {
  Rng rng(21);
  for (int t = 0; t < 30; ++t) {
    Circuit c = random_circuit(rng, 5, 25, 3);
    Simulator sim(c);
    for (uint64_t m = 0; m < 32; ++m) {
      auto x = BitString::from_uint(m, 5);
      std::map<std::string, bool> v;
      for (std::size_t i = 0; i < 5; ++i) v[c.inputs()[i]] = x[i];
      for (const auto& g : c.gates()) {
        uint64_t minterm = 0;
        for (std::size_t j = 0; j < g.fanin.size(); ++j) minterm |= uint64_t(v[g.fanin[j]]) << j;
        v[g.name] = g.function.output(minterm);
      }
      auto y = sim.eval(x, BitString(0));
      for (std::size_t o = 0; o < c.outputs().size(); ++o) EXPECT_EQ(y[o], v[c.outputs()[o]]);
    }
  }
}
