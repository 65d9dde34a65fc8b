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

#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "camoforge/device.hpp"
#include "camoforge/netlist.hpp"
#include "camoforge/rng.hpp"
#include "camoforge/simulate.hpp"

namespace camoforge {

// CMOS gate delays by function family, plus the delay of the GSHE replacement.
struct DelayMap {
  std::map<std::string, double> cmos;  // seconds, keyed by family keyword
  double gshe_delay = 1.83e-9;

  static std::string key_for(const GateFunction& f) {
    using F = GateFunction::Family;
    switch (f.family()) {
      case F::kAnd: return "AND";
      case F::kNand: return "NAND";
      case F::kOr: return "OR";
      case F::kNor: return "NOR";
      case F::kXor: return "XOR";
      case F::kXnor: return "XNOR";
      case F::kBuf: return "BUFF";
      case F::kNot: return "NOT";
      case F::kTable: return "LUT";
    }
    return "LUT";
  }

  double delay(const GateFunction& f) const {
    auto it = cmos.find(key_for(f));
    if (it == cmos.end()) throw std::invalid_argument("no delay given for function " + key_for(f));
    return it->second;
  }

  void validate() const {
    if (!(gshe_delay > 0)) throw std::invalid_argument("GSHE delay must be positive");
    for (const auto& [k, v] : cmos) if (!(v > 0)) throw std::invalid_argument("delay of " + k + " must be positive");
  }
};

// Representative 15nm-class standard-cell delays.
inline DelayMap default_delays() {
  DelayMap d;
  d.cmos = {{"NOT", 6e-12}, {"BUFF", 8e-12}, {"NAND", 8e-12}, {"NOR", 10e-12}, {"AND", 12e-12},
            {"OR", 14e-12}, {"XOR", 18e-12}, {"XNOR", 18e-12}, {"LUT", 20e-12}};
  return d;
}

// `function delay_ns` per line; the function GSHE sets the replacement delay.
inline DelayMap parse_delays(std::istream& in, DelayMap base = default_delays()) {
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string fn;
    double ns;
    if (!(ls >> fn)) continue;
    if (!(ls >> ns)) throw std::invalid_argument("delay file line " + std::to_string(n) + ": expected `function delay_ns`");
    for (auto& c : fn) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (fn == "BUF") fn = "BUFF";
    if (fn == "INV") fn = "NOT";
    if (fn == "GSHE") base.gshe_delay = ns * 1e-9;
    else base.cmos[fn] = ns * 1e-9;
  }
  base.validate();
  return base;
}

struct TimingReport {
  std::vector<double> arrival;   // per gate, at its output
  std::vector<double> required;  // per gate
  std::vector<double> slack;     // per gate
  double critical_delay = 0;
};

// Longest-path timing with explicit per-gate delays (gate order of `c`).
inline TimingReport sta(const Circuit& c, const std::vector<double>& gate_delay) {
  if (!c.is_combinational()) throw std::invalid_argument("timing analysis needs a combinational circuit");
  std::size_t ng = c.gates().size(), src = c.num_sources();
  if (gate_delay.size() != ng) throw std::invalid_argument("one delay per gate expected");
  std::vector<double> at(c.num_nets(), 0.0);
  for (std::size_t g = 0; g < ng; ++g) {
    double a = 0;
    for (NetId f : c.gate_fanin(g)) a = std::max(a, at[f]);
    at[src + g] = a + gate_delay[g];
  }
  TimingReport r;
  for (NetId o : c.output_ids()) r.critical_delay = std::max(r.critical_delay, at[o]);
  std::vector<double> rt(c.num_nets(), r.critical_delay);
  for (std::size_t g = ng; g-- > 0;) {
    double req = rt[src + g];
    for (NetId f : c.gate_fanin(g)) rt[f] = std::min(rt[f], req - gate_delay[g]);
  }
  r.arrival.assign(at.begin() + static_cast<long>(src), at.end());
  r.required.assign(rt.begin() + static_cast<long>(src), rt.end());
  r.slack.resize(ng);
  for (std::size_t g = 0; g < ng; ++g) r.slack[g] = r.required[g] - r.arrival[g];
  return r;
}

// Per-gate delays: CMOS values, GSHE delay for gates in `replaced`.
inline std::vector<double> gate_delays(const Circuit& c, const DelayMap& d, const std::set<std::string>& replaced = {}) {
  std::vector<double> out;
  out.reserve(c.gates().size());
  for (const auto& g : c.gates()) out.push_back(replaced.count(g.name) ? d.gshe_delay : d.delay(g.function));
  return out;
}

inline TimingReport sta(const Circuit& c, const DelayMap& d) { return sta(c, gate_delays(c, d)); }

struct HybridSelection {
  std::vector<std::string> gates;
  TimingReport timing;
  double original_critical_delay = 0;
};

// Greedy replacement in decreasing-slack order: a gate becomes GSHE only if
// the critical delay stays at its original value.
inline HybridSelection delay_aware_select(const Circuit& c, const DelayMap& d) {
  d.validate();
  std::vector<double> delay = gate_delays(c, d);
  TimingReport t = sta(c, delay);
  HybridSelection sel;
  sel.original_critical_delay = t.critical_delay;
  std::vector<std::size_t> order(c.gates().size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t.slack[a] > t.slack[b]; });
  for (std::size_t g : order) {
    double extra = d.gshe_delay - delay[g];
    if (t.slack[g] < extra) continue;
    double old = delay[g];
    delay[g] = d.gshe_delay;
    TimingReport next = sta(c, delay);
    if (next.critical_delay > sel.original_critical_delay) {
      delay[g] = old;
      continue;
    }
    t = std::move(next);
    sel.gates.push_back(c.gates()[g].name);
  }
  sel.timing = std::move(t);
  return sel;
}

// Per-gate CMOS cost; defaults are the c7552 full-chip averages (222.51 um^2 and 0.68 mW over 4045 cells).
struct CmosCost {
  double area = 222.51e-12 / 4045;  // m^2
  double power = 0.68e-3 / 4045;    // W
};

struct ChipCost {
  double area = 0;   // m^2
  double power = 0;  // W
  double delay = 0;  // s
};

inline ChipCost chip_cost(const Circuit& c, const std::vector<std::string>& selection, const DelayMap& d,
                          device::PrimitiveKind kind = device::PrimitiveKind::kObfuscatedWithMuxes,
                          const CmosCost& cmos = {}) {
  std::set<std::string> chosen(selection.begin(), selection.end());
  for (const auto& g : chosen) c.gate_index(g);
  auto prim = device::primitive_cost(kind);
  ChipCost cost;
  for (const auto& g : c.gates()) {
    bool gshe = chosen.count(g.name) > 0;
    cost.area += gshe ? prim.area : cmos.area;
    cost.power += gshe ? prim.power : cmos.power;
  }
  DelayMap mixed = d;
  mixed.gshe_delay = prim.delay;
  cost.delay = sta(c, gate_delays(c, mixed, chosen)).critical_delay;
  return cost;
}

// ---- skewed-path benchmark generator ----------------------------------------

// A few long chains set the critical delay; many shallow cones sit far below it.
struct SkewedCircuitParams {
  std::size_t inputs = 64;
  std::size_t deep_paths = 4;
  std::size_t deep_depth = 250;
  std::size_t shallow_cones = 40;
  std::size_t shallow_depth = 2;  // levels of 2-input gates per cone
  uint64_t seed = 1;
};

inline Circuit generate_skewed_circuit(const SkewedCircuitParams& p) {
  if (p.inputs < 2 || p.deep_paths == 0 || p.deep_depth == 0) throw std::invalid_argument("degenerate generator parameters");
  static const char* kKinds[] = {"NAND", "NOR", "AND", "OR", "XOR", "XNOR"};
  Rng rng(mix64(p.seed ^ 0x736b6577ull));
  std::vector<std::string> inputs, outputs;
  for (std::size_t i = 0; i < p.inputs; ++i) inputs.push_back("i" + std::to_string(i));
  std::vector<Gate> gates;
  auto pick_input = [&] { return inputs[rng.uniform_int(inputs.size())]; };
  auto pick_fn = [&] { return function_by_name(kKinds[rng.uniform_int(6)]); };
  for (std::size_t d = 0; d < p.deep_paths; ++d) {
    std::string prev = pick_input();
    for (std::size_t k = 0; k < p.deep_depth; ++k) {
      std::string name = "d" + std::to_string(d) + "_" + std::to_string(k);
      std::string other = pick_input();
      while (other == prev) other = pick_input();
      gates.push_back({name, pick_fn(), {prev, other}});
      prev = name;
    }
    outputs.push_back(prev);
  }
  for (std::size_t s = 0; s < p.shallow_cones; ++s) {
    std::vector<std::string> level;
    std::size_t width = std::size_t{1} << p.shallow_depth;
    for (std::size_t i = 0; i < width; ++i) level.push_back(pick_input());
    for (std::size_t l = 0; l < p.shallow_depth; ++l) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        std::string name = "s" + std::to_string(s) + "_" + std::to_string(l) + "_" + std::to_string(i / 2);
        std::string a = level[i], b = level[i + 1];
        if (a == b) b = (a == inputs[0]) ? inputs[1] : inputs[0];
        gates.push_back({name, pick_fn(), {a, b}});
        next.push_back(name);
      }
      level = std::move(next);
    }
    outputs.push_back(level.front());
  }
  return Circuit(inputs, outputs, gates);
}

// ---- approximate adder ------------------------------------------------------

// Inputs a0..a{w-1}, b0..b{w-1}, cin; outputs s0..s{w-1}, cout. Five gates per bit.
inline Circuit build_ripple_adder(std::size_t width) {
  if (width == 0) throw std::invalid_argument("adder width must be at least 1");
  std::vector<std::string> inputs, outputs;
  for (std::size_t i = 0; i < width; ++i) inputs.push_back("a" + std::to_string(i));
  for (std::size_t i = 0; i < width; ++i) inputs.push_back("b" + std::to_string(i));
  inputs.push_back("cin");
  std::vector<Gate> gates;
  std::string carry = "cin";
  for (std::size_t i = 0; i < width; ++i) {
    std::string a = "a" + std::to_string(i), b = "b" + std::to_string(i), n = std::to_string(i);
    gates.push_back({"p" + n, GateFunction::xor_(), {a, b}});
    gates.push_back({"s" + n, GateFunction::xor_(), {"p" + n, carry}});
    gates.push_back({"g" + n, GateFunction::and_(), {a, b}});
    gates.push_back({"t" + n, GateFunction::and_(), {"p" + n, carry}});
    std::string next = i + 1 == width ? "cout" : "c" + std::to_string(i + 1);
    gates.push_back({next, GateFunction::or_(), {"g" + n, "t" + n}});
    outputs.push_back("s" + n);
    carry = next;
  }
  outputs.push_back("cout");
  return Circuit(inputs, outputs, gates);
}

// Gates whose every path to a primary output ends in one of the first k outputs.
inline std::vector<std::string> lsb_cone_selection(const Circuit& c, std::size_t k) {
  if (k > c.outputs().size()) throw std::invalid_argument("k exceeds the number of outputs");
  std::set<std::string> low(c.outputs().begin(), c.outputs().begin() + static_cast<long>(k));
  std::vector<std::string> sel;
  if (k == 0) return sel;
  for (const auto& g : c.gates()) {
    auto cone = fanout_cone(c, g.name);
    if (!cone.empty() && std::all_of(cone.begin(), cone.end(), [&](const std::string& o) { return low.count(o) > 0; })) {
      sel.push_back(g.name);
    }
  }
  return sel;
}

struct AdderStudy {
  std::size_t width = 0;
  std::size_t k = 0;
  double worst_case_error = 0;  // relative to 2^width
  double per_gate_saving = 0;
  double total_saving = 0;
  std::size_t selected = 0;
  std::size_t gates = 0;
};

inline AdderStudy adder_case_study(std::size_t width, std::size_t k, const device::OperatingPoint& det = device::deterministic_point(),
                                   double probabilistic_power = device::kPower90PercentAccuracy) {
  if (k > width) throw std::invalid_argument("k must not exceed the adder width");
  if (!(det.power > 0) || probabilistic_power < 0) throw std::invalid_argument("operating-point powers must be positive");
  Circuit adder = build_ripple_adder(width);
  auto sel = lsb_cone_selection(adder, k);
  AdderStudy s;
  s.width = width;
  s.k = k;
  s.worst_case_error = (std::ldexp(1.0, static_cast<int>(k)) - 1.0) / std::ldexp(1.0, static_cast<int>(width));
  s.per_gate_saving = 1.0 - probabilistic_power / det.power;
  s.selected = sel.size();
  s.gates = adder.gates().size();
  s.total_saving = s.per_gate_saving * static_cast<double>(s.selected) / static_cast<double>(s.gates);
  return s;
}

// Copy of `c` where each gate in `gates` is XORed with a new input flip_<gate>.
inline Circuit with_flip_inputs(const Circuit& c, const std::vector<std::string>& gates) {
  std::vector<std::string> inputs = c.inputs();
  std::vector<Gate> out = c.gates();
  for (const auto& name : gates) {
    std::string raw = name + "__raw";
    out[c.gate_index(name)].name = raw;
    out.push_back({name, GateFunction::xor_(), {raw, "flip_" + name}});
    inputs.push_back("flip_" + name);
  }
  return Circuit(inputs, c.outputs(), out);
}

// Largest |computed - exact| over every adder input and every subset of
// output flips on the lsb_cone_selection gates. Exhaustive, so keep width small.
inline uint64_t adversarial_flip_max_error(std::size_t width, std::size_t k) {
  Circuit adder = build_ripple_adder(width);
  auto sel = lsb_cone_selection(adder, k);
  Circuit flipped = with_flip_inputs(adder, sel);
  std::size_t n = flipped.inputs().size();
  if (n > 30) throw std::invalid_argument("adversarial flip check is exhaustive; width too large");
  Simulator sim(flipped);
  std::vector<uint64_t> in(n), out(flipped.outputs().size());
  static constexpr uint64_t kLow[6] = {0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                       0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull};
  uint64_t total = uint64_t{1} << n, worst = 0, mask = (uint64_t{1} << width) - 1;
  for (uint64_t base = 0; base < total; base += 64) {
    for (std::size_t i = 0; i < n; ++i) in[i] = i < 6 ? kLow[i] : (((base >> i) & 1) ? ~uint64_t{0} : 0);
    sim.eval_lanes(in, EvalMode::deterministic(), 0, out);
    unsigned lanes = static_cast<unsigned>(std::min<uint64_t>(64, total - base));
    for (unsigned l = 0; l < lanes; ++l) {
      uint64_t p = base + l;
      uint64_t exact = (p & mask) + ((p >> width) & mask) + ((p >> (2 * width)) & 1);
      uint64_t got = 0;
      for (std::size_t o = 0; o < out.size(); ++o) got |= ((out[o] >> l) & 1) << o;
      worst = std::max(worst, got > exact ? got - exact : exact - got);
    }
  }
  return worst;
}

}  // namespace camoforge
