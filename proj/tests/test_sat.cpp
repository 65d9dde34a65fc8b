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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "camoforge/bench.hpp"
#include "camoforge/cnf.hpp"
#include "camoforge/rng.hpp"
#include "camoforge/sat.hpp"
#include "camoforge/simulate.hpp"

using namespace camoforge;

namespace {

Circuit load(const std::string& name) {
  std::ifstream in(std::string(CAMOFORGE_BENCH_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_bench(s.str());
}

using Clauses = std::vector<std::vector<int>>;

Clauses random_formula(Rng& rng, int vars, int clauses, int width) {
  Clauses f;
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> cl;
    int w = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(width)));
    for (int j = 0; j < w; ++j) {
      int v = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(vars)));
      cl.push_back(rng.next() & 1 ? v : -v);
    }
    f.push_back(cl);
  }
  return f;
}

bool satisfied(const Clauses& f, const std::vector<int>& assumptions, uint64_t assignment) {
  auto val = [&](int l) { return (((assignment >> (std::abs(l) - 1)) & 1) != 0) == (l > 0); };
  for (int a : assumptions) if (!val(a)) return false;
  for (const auto& c : f) {
    bool any = false;
    for (int l : c) any = any || val(l);
    if (!any) return false;
  }
  return true;
}

bool brute_force(const Clauses& f, const std::vector<int>& assumptions, int vars) {
  for (uint64_t a = 0; a < (uint64_t{1} << vars); ++a) if (satisfied(f, assumptions, a)) return true;
  return false;
}

std::string pysat() { return std::string(CAMOFORGE_TOOLS_DIR) + "/pysat_solver.py"; }

bool pysat_available() {
  FILE* p = popen("python3 -c 'import pysat.solvers' 2>/dev/null && echo yes", "r");
  if (!p) return false;
  char buf[8] = {0};
  bool ok = fgets(buf, sizeof buf, p) != nullptr && std::string(buf).rfind("yes", 0) == 0;
  pclose(p);
  return ok;
}

}  // namespace

TEST(Solver, AgreesWithBruteForceUnderAssumptions) {
  Rng rng(2024);
  for (int t = 0; t < 1500; ++t) {
    int vars = 3 + static_cast<int>(rng.uniform_int(10));
    auto f = random_formula(rng, vars, 2 + static_cast<int>(rng.uniform_int(50)), 4);
    sat::Solver s;
    for (int v = 0; v < vars; ++v) s.new_var();
    bool ok = true;
    for (const auto& c : f) ok = s.add_clause(c) && ok;
    for (int q = 0; q < 3; ++q) {
      std::vector<int> assume;
      for (int k = 0; k < static_cast<int>(rng.uniform_int(3)); ++k) {
        int v = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(vars)));
        assume.push_back(rng.next() & 1 ? v : -v);
      }
      bool expect = brute_force(f, assume, vars);
      auto r = s.solve(assume);
      ASSERT_EQ(r == sat::Result::kSat, expect) << "formula " << t;
      if (r == sat::Result::kSat) {
        uint64_t a = 0;
        for (int v = 1; v <= vars; ++v) if (s.model_value(v)) a |= uint64_t{1} << (v - 1);
        EXPECT_TRUE(satisfied(f, assume, a));
      }
    }
  }
}

TEST(Solver, PigeonholeIsUnsat) {
  for (int holes = 2; holes <= 6; ++holes) {
    int pigeons = holes + 1;
    sat::Solver s;
    auto var = [&](int p, int h) { return p * holes + h + 1; };
    for (int i = 0; i < pigeons * holes; ++i) s.new_var();
    for (int p = 0; p < pigeons; ++p) {
      std::vector<int> c;
      for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
      s.add_clause(c);
    }
    for (int h = 0; h < holes; ++h)
      for (int p = 0; p < pigeons; ++p)
        for (int q = p + 1; q < pigeons; ++q) s.add_clause({-var(p, h), -var(q, h)});
    EXPECT_EQ(s.solve(), sat::Result::kUnsat) << holes;
  }
}

TEST(Solver, IncrementalAndDeterministic) {
  auto run = [] {
    Rng rng(77);
    sat::Solver s;
    for (int v = 0; v < 120; ++v) s.new_var();
    std::vector<int> models;
    for (int round = 0; round < 10; ++round) {
      for (const auto& c : random_formula(rng, 120, 40, 3)) s.add_clause(c);
      if (s.solve() != sat::Result::kSat) break;
      int bits = 0;
      for (int v = 1; v <= 30; ++v) bits = bits * 2 + s.model_value(v);
      models.push_back(bits);
    }
    return models;
  };
  EXPECT_EQ(run(), run());
}

TEST(Solver, ExpiredDeadlineGivesUnknown) {
  Rng rng(5);
  sat::Solver s;
  for (int v = 0; v < 200; ++v) s.new_var();
  for (int c = 0; c < 852; ++c) {
    std::vector<int> cl;
    for (int j = 0; j < 3; ++j) {
      int v = 1 + static_cast<int>(rng.uniform_int(200));
      cl.push_back(rng.next() & 1 ? v : -v);
    }
    s.add_clause(cl);
  }
  s.set_deadline(sat::Clock::now() - std::chrono::seconds(1));
  EXPECT_EQ(s.solve(), sat::Result::kUnknown);
}

TEST(Solver, EmptyClauseMakesUnsat) {
  sat::Solver s;
  s.new_var();
  EXPECT_FALSE(s.add_clause(std::span<const int>{}));
  EXPECT_EQ(s.solve(), sat::Result::kUnsat);
}

TEST(Tseitin, NandIsThreeClausesOverThreeVariables) {
  CnfFormula f;
  int a = f.new_var(), b = f.new_var();
  auto y = encode_gate(f, GateFunction::nand(), {Signal::literal(a), Signal::literal(b)});
  EXPECT_FALSE(y.is_constant());
  EXPECT_EQ(f.num_vars(), 3);
  EXPECT_EQ(f.num_clauses(), 3u);
}

TEST(Tseitin, ConstantsPropagate) {
  CnfFormula f;
  int a = f.new_var();
  EXPECT_EQ(encode_gate(f, GateFunction::and_(), {Signal::literal(a), Signal::constant(false)}), Signal::constant(false));
  EXPECT_EQ(encode_gate(f, GateFunction::and_(), {Signal::literal(a), Signal::constant(true)}), Signal::literal(a));
  EXPECT_EQ(encode_gate(f, GateFunction::xor_(), {Signal::literal(a), Signal::constant(true)}), Signal::literal(-a));
  EXPECT_EQ(f.num_clauses(), 0u);
}

TEST(Tseitin, EveryTwoAndThreeInputFunctionMatchesTable) {
  for (unsigned arity : {1u, 2u, 3u}) {
    for (uint64_t t = 0; t < (uint64_t{1} << (1u << arity)); ++t) {
      GateFunction fn(arity, {t});
      sat::Solver s;
      std::vector<Signal> in;
      for (unsigned j = 0; j < arity; ++j) in.push_back(Signal::literal(s.new_var()));
      Signal y = encode_gate(s, fn, in);
      for (uint64_t m = 0; m < (uint64_t{1} << arity); ++m) {
        std::vector<int> assume;
        for (unsigned j = 0; j < arity; ++j) assume.push_back(((m >> j) & 1) ? in[j].lit : -in[j].lit);
        ASSERT_EQ(s.solve(assume), sat::Result::kSat);
        bool v = y.is_constant() ? y.value : (s.model_value(std::abs(y.lit)) == (y.lit > 0));
        EXPECT_EQ(v, fn.output(m)) << arity << " " << t << " " << m;
      }
    }
  }
}

TEST(Tseitin, EncodedC17MatchesSimulator) {
  Circuit c = load("c17.bench");
  CnfFormula f;
  auto nets = encode(f, c, 0);
  sat::Solver s;
  f.load_into(s);
  Simulator sim(c);
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    auto x = BitString::from_uint(rng.uniform_int(32), 5);
    std::vector<int> assume;
    for (std::size_t i = 0; i < 5; ++i) assume.push_back(x[i] ? nets[i].lit : -nets[i].lit);
    ASSERT_EQ(s.solve(assume), sat::Result::kSat);
    auto y = sim.eval(x, BitString(0));
    std::vector<int> outs;
    for (std::size_t o = 0; o < 2; ++o) {
      Signal out = nets[c.output_ids()[o]];
      EXPECT_EQ(s.model_value(std::abs(out.lit)) == (out.lit > 0), y[o]);
      outs.push_back(out.lit);
    }
    // The opposite output value is impossible.
    for (std::size_t o = 0; o < 2; ++o) {
      auto more = assume;
      more.push_back(y[o] ? -outs[o] : outs[o]);
      EXPECT_EQ(s.solve(more), sat::Result::kUnsat);
    }
  }
  EXPECT_TRUE(f.lookup("N22", 0).has_value());
}

TEST(Tseitin, RejectsEmptyAndSequentialCircuits) {
  CnfFormula f;
  EXPECT_THROW(encode(f, Circuit({"a"}, {"a"}, {}), 0), std::invalid_argument);
  Circuit s = load("s27.bench");
  EXPECT_THROW(encode(f, s, 0), std::invalid_argument);
}

TEST(Dimacs, FrozenExport) {
  CnfFormula f;
  f.add_clause({1, -2});
  EXPECT_EQ(export_dimacs(f), "p cnf 2 1\n1 -2 0\n");
  EXPECT_EQ(export_dimacs(CnfFormula{}), "p cnf 0 0\n");
  EXPECT_THROW(f.add_clause(std::span<const int>{}), std::invalid_argument);
}

TEST(Dimacs, ParseRoundTrip) {
  Rng rng(3);
  CnfFormula f;
  for (const auto& c : random_formula(rng, 20, 60, 4)) f.add_clause(c);
  auto text = export_dimacs(f);
  EXPECT_EQ(export_dimacs(parse_dimacs(text)), text);
  EXPECT_EQ(parse_dimacs("c comment\np cnf 3 2\n1 2\n-3 0 2 0\n").clauses().size(), 2u);
  EXPECT_THROW(parse_dimacs("p cnf x y\n"), std::invalid_argument);
}

TEST(ExternalSolver, AgreesWithBuiltinOnC17Assumptions) {
  if (!pysat_available()) GTEST_SKIP() << "python-sat not installed";
  Circuit c = load("c17.bench");
  ExternalSolver ext(pysat());
  sat::Solver in;
  std::vector<Signal> xe, xi;
  for (int i = 0; i < 5; ++i) {
    xe.push_back(Signal::literal(ext.new_var()));
    xi.push_back(Signal::literal(in.new_var()));
  }
  auto ne = encode_circuit(ext, c, xe);
  auto ni = encode_circuit(in, c, xi);
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> ae, ai;
    for (int i = 0; i < 5; ++i) {
      if (rng.uniform_int(3) == 0) continue;
      bool v = rng.next() & 1;
      ae.push_back(v ? xe[i].lit : -xe[i].lit);
      ai.push_back(v ? xi[i].lit : -xi[i].lit);
    }
    for (std::size_t o = 0; o < 2; ++o) {
      bool v = rng.next() & 1;
      Signal se = ne[c.output_ids()[o]], si = ni[c.output_ids()[o]];
      ae.push_back(v ? se.lit : -se.lit);
      ai.push_back(v ? si.lit : -si.lit);
    }
    EXPECT_EQ(ext.solve(ae), in.solve(ai)) << t;
  }
}

TEST(ExternalSolver, AgreesWithBuiltinOnThousandRandomFormulas) {
  if (!pysat_available()) GTEST_SKIP() << "python-sat not installed";
  auto dir = std::filesystem::temp_directory_path() / "camoforge_sat_diff";
  std::filesystem::create_directories(dir);
  Rng rng(99);
  std::vector<sat::Result> builtin;
  std::string cmd = "\"" + pysat() + "\"";
  for (int t = 0; t < 1000; ++t) {
    int vars = 10 + static_cast<int>(rng.uniform_int(40));
    Clauses clauses;
    for (int k = 0; k < static_cast<int>(vars * (3.5 + rng.uniform01() * 2)); ++k) {
      std::vector<int> cl;
      for (int j = 0; j < 3; ++j) {
        int v = 1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(vars)));
        cl.push_back(rng.next() & 1 ? v : -v);
      }
      clauses.push_back(cl);
    }
    CnfFormula f;
    sat::Solver s;
    for (int v = 0; v < vars; ++v) {
      f.new_var();
      s.new_var();
    }
    for (const auto& c : clauses) {
      f.add_clause(c);
      s.add_clause(c);
    }
    builtin.push_back(s.solve());
    auto path = dir / ("f" + std::to_string(t) + ".cnf");
    std::ofstream(path) << export_dimacs(f);
    cmd += " \"" + path.string() + "\"";
  }
  FILE* p = popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  pclose(p);
  std::istringstream in(out);
  std::string line;
  std::size_t idx = 0, sat_count = 0;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) != 0) continue;
    ASSERT_LT(idx, builtin.size());
    bool ext_sat = line == "s SATISFIABLE";
    EXPECT_EQ(ext_sat, builtin[idx] == sat::Result::kSat) << "formula " << idx;
    sat_count += ext_sat;
    ++idx;
  }
  EXPECT_EQ(idx, builtin.size());
  EXPECT_GT(sat_count, 50u);
  EXPECT_LT(sat_count, 950u);
  std::filesystem::remove_all(dir);
}

TEST(Backend, Factory) {
  EXPECT_NE(dynamic_cast<sat::Solver*>(make_backend("builtin").get()), nullptr);
  EXPECT_THROW(make_backend("minisat"), std::invalid_argument);
  EXPECT_THROW(make_backend("dimacs:/no/such/solver"), std::invalid_argument);
}
