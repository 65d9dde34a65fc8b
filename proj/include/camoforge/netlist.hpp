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
#include <bit>
#include <cstdint>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace camoforge {

class NetlistError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Boolean function of `arity` inputs stored as a truth table: bit m is the
// output for the minterm whose bit j is the value of fanin j.
class GateFunction {
 public:
  enum class Family : uint8_t { kAnd, kNand, kOr, kNor, kXor, kXnor, kBuf, kNot, kTable };

  static constexpr unsigned kMaxArity = 16;

  GateFunction() : GateFunction(1, {0b10}) {}

  GateFunction(unsigned arity, std::vector<uint64_t> table) : arity_(arity), table_(std::move(table)) {
    if (arity == 0 || arity > kMaxArity) {
      throw NetlistError("gate arity must be in [1, " + std::to_string(kMaxArity) + "], got " + std::to_string(arity));
    }
    std::size_t words = table_words(arity);
    if (table_.size() != words) throw NetlistError("truth table length does not match arity");
    if (arity < 6) table_[0] &= (uint64_t{1} << (1u << arity)) - 1;
    family_ = classify();
  }

  static GateFunction from_family(Family f, unsigned arity) {
    if ((f == Family::kBuf || f == Family::kNot) && arity != 1) throw NetlistError("BUFF/NOT take exactly one input");
    if (f == Family::kTable) throw NetlistError("table family has no canonical function");
    if (arity == 0 || arity > kMaxArity) throw NetlistError("unsupported gate arity " + std::to_string(arity));
    std::vector<uint64_t> t(table_words(arity), 0);
    uint64_t n = uint64_t{1} << arity;
    for (uint64_t m = 0; m < n; ++m) {
      if (family_output(f, arity, m)) t[m >> 6] |= uint64_t{1} << (m & 63);
    }
    return GateFunction(arity, std::move(t));
  }

  // 2-input function from its 4-bit table (bit m = f(a = m&1, b = m>>1)).
  static GateFunction two_input(unsigned table4) { return GateFunction(2, {table4 & 0xFu}); }

  static GateFunction and_(unsigned n = 2) { return from_family(Family::kAnd, n); }
  static GateFunction nand(unsigned n = 2) { return from_family(Family::kNand, n); }
  static GateFunction or_(unsigned n = 2) { return from_family(Family::kOr, n); }
  static GateFunction nor(unsigned n = 2) { return from_family(Family::kNor, n); }
  static GateFunction xor_(unsigned n = 2) { return from_family(Family::kXor, n); }
  static GateFunction xnor(unsigned n = 2) { return from_family(Family::kXnor, n); }
  static GateFunction buf() { return from_family(Family::kBuf, 1); }
  static GateFunction inv() { return from_family(Family::kNot, 1); }

  unsigned arity() const { return arity_; }
  Family family() const { return family_; }
  const std::vector<uint64_t>& truth_table() const { return table_; }

  bool output(uint64_t minterm) const { return (table_[minterm >> 6] >> (minterm & 63)) & 1; }

  // Low 4 bits of the table; only meaningful for arity 2.
  unsigned table4() const { return static_cast<unsigned>(table_[0] & 0xF); }

  // Bit-parallel evaluation: lane l of the result is the output for lane l of the inputs.
  uint64_t eval(std::span<const uint64_t> in) const {
    switch (family_) {
      case Family::kAnd: case Family::kNand: {
        uint64_t v = ~uint64_t{0};
        for (uint64_t x : in) v &= x;
        return family_ == Family::kAnd ? v : ~v;
      }
      case Family::kOr: case Family::kNor: {
        uint64_t v = 0;
        for (uint64_t x : in) v |= x;
        return family_ == Family::kOr ? v : ~v;
      }
      case Family::kXor: case Family::kXnor: {
        uint64_t v = 0;
        for (uint64_t x : in) v ^= x;
        return family_ == Family::kXor ? v : ~v;
      }
      case Family::kBuf: return in[0];
      case Family::kNot: return ~in[0];
      case Family::kTable: break;
    }
    uint64_t out = 0;
    uint64_t n = uint64_t{1} << arity_;
    for (uint64_t m = 0; m < n; ++m) {
      if (!output(m)) continue;
      uint64_t term = ~uint64_t{0};
      for (unsigned j = 0; j < arity_; ++j) term &= ((m >> j) & 1) ? in[j] : ~in[j];
      out |= term;
    }
    return out;
  }

  bool eval_scalar(uint64_t minterm) const { return output(minterm); }

  // .bench keyword for the standard families, "LUT" otherwise.
  std::string bench_keyword() const {
    switch (family_) {
      case Family::kAnd: return "AND";
      case Family::kNand: return "NAND";
      case Family::kOr: return "OR";
      case Family::kNor: return "NOR";
      case Family::kXor: return "XOR";
      case Family::kXnor: return "XNOR";
      case Family::kBuf: return "BUFF";
      case Family::kNot: return "NOT";
      case Family::kTable: break;
    }
    return "LUT";
  }

  // Hex form of the table, most significant minterm first.
  std::string table_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    uint64_t bits = uint64_t{1} << arity_;
    std::string s;
    for (uint64_t nib = 0; nib * 4 < bits; ++nib) {
      unsigned v = 0;
      for (unsigned j = 0; j < 4 && nib * 4 + j < bits; ++j) v |= unsigned(output(nib * 4 + j)) << j;
      s.push_back(kDigits[v]);
    }
    std::reverse(s.begin(), s.end());
    return "0x" + s;
  }

  static GateFunction from_hex(unsigned arity, std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (arity == 0 || arity > kMaxArity) throw NetlistError("unsupported LUT arity " + std::to_string(arity));
    std::vector<uint64_t> t(table_words(arity), 0);
    uint64_t bits = uint64_t{1} << arity;
    uint64_t pos = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, pos += 4) {
      char c = *it;
      unsigned v;
      if (c >= '0' && c <= '9') v = c - '0';
      else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
      else throw NetlistError("bad LUT digit '" + std::string(1, c) + "'");
      for (unsigned j = 0; j < 4; ++j) {
        if (!((v >> j) & 1)) continue;
        if (pos + j >= bits) throw NetlistError("LUT table wider than 2^arity bits");
        t[(pos + j) >> 6] |= uint64_t{1} << ((pos + j) & 63);
      }
    }
    return GateFunction(arity, std::move(t));
  }

  bool operator==(const GateFunction& o) const { return arity_ == o.arity_ && table_ == o.table_; }

 private:
  static std::size_t table_words(unsigned arity) { return arity >= 6 ? (std::size_t{1} << (arity - 6)) : 1; }

  static bool family_output(Family f, unsigned arity, uint64_t m) {
    uint64_t all = (uint64_t{1} << arity) - 1;
    switch (f) {
      case Family::kAnd: return m == all;
      case Family::kNand: return m != all;
      case Family::kOr: return m != 0;
      case Family::kNor: return m == 0;
      case Family::kXor: return std::popcount(m) & 1;
      case Family::kXnor: return !(std::popcount(m) & 1);
      case Family::kBuf: return m & 1;
      case Family::kNot: return !(m & 1);
      case Family::kTable: break;
    }
    return false;
  }

  Family classify() const {
    static constexpr Family kCandidates[] = {Family::kAnd, Family::kNand, Family::kOr, Family::kNor,
                                             Family::kXor, Family::kXnor, Family::kBuf, Family::kNot};
    uint64_t n = uint64_t{1} << arity_;
    for (Family f : kCandidates) {
      if ((f == Family::kBuf || f == Family::kNot) && arity_ != 1) continue;
      if (arity_ == 1 && f != Family::kBuf && f != Family::kNot) continue;
      bool match = true;
      for (uint64_t m = 0; m < n && match; ++m) match = output(m) == family_output(f, arity_, m);
      if (match) return f;
    }
    return Family::kTable;
  }

  unsigned arity_;
  std::vector<uint64_t> table_;
  Family family_ = Family::kTable;
};

// Names for the sixteen 2-input functions, indexed by their 4-bit table.
inline const std::string& two_input_name(unsigned table4) {
  static const std::string kNames[16] = {"ZERO",  "NOR",  "ANDNB", "NB",   "NAANDB", "NA",  "XOR",  "NAND",
                                         "AND",   "XNOR", "A",     "ORNB", "B",      "NAORB", "OR",  "ONE"};
  return kNames[table4 & 0xF];
}

// Function by symbolic name: the 16 two-input names above plus NOT/INV/BUF/BUFF.
inline GateFunction function_by_name(const std::string& name) {
  if (name == "NOT" || name == "INV") return GateFunction::inv();
  if (name == "BUF" || name == "BUFF") return GateFunction::buf();
  for (unsigned t = 0; t < 16; ++t) {
    if (two_input_name(t) == name) return GateFunction::two_input(t);
  }
  throw NetlistError("unknown function name '" + name + "'");
}

inline std::string function_name(const GateFunction& f) {
  if (f.arity() == 1) return f.family() == GateFunction::Family::kNot ? "INV" : "BUF";
  if (f.arity() == 2) return two_input_name(f.table4());
  return f.bench_keyword() == "LUT" ? "LUT" + f.table_hex() : f.bench_keyword() + std::to_string(f.arity());
}

struct Gate {
  std::string name;  // also the name of the driven net
  GateFunction function;
  std::vector<std::string> fanin;
};

struct SequentialElement {
  std::string d_input;
  std::string q_output;
};

using NetId = uint32_t;

// Validated gate-level netlist. Net ids: primary inputs first, then flip-flop
// outputs, then gate outputs in topological order.
class Circuit {
 public:
  Circuit() = default;

  Circuit(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Gate> gates,
          std::vector<SequentialElement> flops = {}, std::vector<std::string> pragmas = {},
          std::vector<std::string> pseudo_nets = {})
      : inputs_(std::move(inputs)),
        outputs_(std::move(outputs)),
        flops_(std::move(flops)),
        pragmas_(std::move(pragmas)),
        pseudo_nets_(std::move(pseudo_nets)) {
    build(std::move(gates));
  }

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<SequentialElement>& flops() const { return flops_; }
  const std::vector<std::string>& pragmas() const { return pragmas_; }
  const std::vector<std::string>& pseudo_nets() const { return pseudo_nets_; }

  bool is_combinational() const { return flops_.empty(); }
  std::size_t num_nets() const { return net_names_.size(); }
  std::size_t num_sources() const { return inputs_.size() + flops_.size(); }
  const std::string& net_name(NetId id) const { return net_names_[id]; }

  std::optional<NetId> find_net(const std::string& name) const {
    auto it = net_index_.find(name);
    if (it == net_index_.end()) return std::nullopt;
    return it->second;
  }
  NetId net_id(const std::string& name) const {
    auto id = find_net(name);
    if (!id) throw NetlistError("unknown net '" + name + "'");
    return *id;
  }

  // Index into gates() of the gate driving `name`, if any.
  std::optional<std::size_t> find_gate(const std::string& name) const {
    auto id = find_net(name);
    if (!id || *id < num_sources()) return std::nullopt;
    return *id - num_sources();
  }
  std::size_t gate_index(const std::string& name) const {
    auto g = find_gate(name);
    if (!g) throw NetlistError("no gate named '" + name + "'");
    return *g;
  }

  NetId gate_net(std::size_t gate) const { return static_cast<NetId>(num_sources() + gate); }
  std::span<const NetId> gate_fanin(std::size_t gate) const {
    return {fanin_ids_.data() + fanin_offsets_[gate], fanin_offsets_[gate + 1] - fanin_offsets_[gate]};
  }
  const std::vector<NetId>& output_ids() const { return output_ids_; }
  const std::vector<std::vector<NetId>>& fanout() const { return fanout_; }

  bool is_pseudo(const std::string& net) const {
    return std::find(pseudo_nets_.begin(), pseudo_nets_.end(), net) != pseudo_nets_.end();
  }

  Circuit with_pragmas(std::vector<std::string> pragmas) const {
    Circuit c = *this;
    c.pragmas_ = std::move(pragmas);
    return c;
  }

 private:
  void build(std::vector<Gate> gates) {
    std::unordered_map<std::string, std::size_t> driver;  // gate name -> index in `gates`
    auto add_source = [&](const std::string& name) {
      if (net_index_.count(name)) throw NetlistError("duplicate definition of net '" + name + "'");
      net_index_.emplace(name, static_cast<NetId>(net_names_.size()));
      net_names_.push_back(name);
    };
    for (const auto& n : inputs_) add_source(n);
    for (const auto& ff : flops_) add_source(ff.q_output);
    for (std::size_t i = 0; i < gates.size(); ++i) {
      const Gate& g = gates[i];
      if (net_index_.count(g.name) || driver.count(g.name)) {
        throw NetlistError("duplicate definition of net '" + g.name + "'");
      }
      if (g.fanin.size() != g.function.arity()) {
        throw NetlistError("gate '" + g.name + "' has " + std::to_string(g.fanin.size()) + " fanins but arity " +
                           std::to_string(g.function.arity()));
      }
      driver.emplace(g.name, i);
    }
    // Kahn's algorithm; ties resolved by declaration order so output is stable.
    std::vector<std::size_t> pending(gates.size(), 0);
    std::vector<std::vector<std::size_t>> users(gates.size());
    for (std::size_t i = 0; i < gates.size(); ++i) {
      for (const auto& f : gates[i].fanin) {
        if (f == gates[i].name) throw NetlistError("combinational cycle through net '" + f + "'");
        if (net_index_.count(f)) continue;
        auto it = driver.find(f);
        if (it == driver.end()) throw NetlistError("undriven net '" + f + "' used by gate '" + gates[i].name + "'");
        ++pending[i];
        users[it->second].push_back(i);
      }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < gates.size(); ++i) if (pending[i] == 0) ready.push(i);
    std::vector<std::size_t> order;
    order.reserve(gates.size());
    while (!ready.empty()) {
      std::size_t i = ready.top();
      ready.pop();
      order.push_back(i);
      for (std::size_t u : users[i]) if (--pending[u] == 0) ready.push(u);
    }
    if (order.size() != gates.size()) {
      for (std::size_t i = 0; i < gates.size(); ++i) {
        if (pending[i] != 0) throw NetlistError("combinational cycle through net '" + gates[i].name + "'");
      }
    }
    gates_.reserve(gates.size());
    for (std::size_t i : order) {
      add_source(gates[i].name);
      gates_.push_back(std::move(gates[i]));
    }
    fanin_offsets_.assign(1, 0);
    fanout_.assign(net_names_.size(), {});
    for (std::size_t g = 0; g < gates_.size(); ++g) {
      for (const auto& f : gates_[g].fanin) {
        NetId id = net_index_.at(f);
        fanin_ids_.push_back(id);
        fanout_[id].push_back(gate_net(g));
      }
      fanin_offsets_.push_back(fanin_ids_.size());
    }
    for (const auto& o : outputs_) {
      auto it = net_index_.find(o);
      if (it == net_index_.end()) throw NetlistError("undriven primary output '" + o + "'");
      output_ids_.push_back(it->second);
    }
    for (const auto& ff : flops_) {
      if (!net_index_.count(ff.d_input)) throw NetlistError("flip-flop '" + ff.q_output + "' reads undriven net '" + ff.d_input + "'");
    }
    for (const auto& p : pseudo_nets_) {
      if (!net_index_.count(p)) throw NetlistError("pseudo net '" + p + "' does not exist");
    }
  }

  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::vector<SequentialElement> flops_;
  std::vector<std::string> pragmas_;
  std::vector<std::string> pseudo_nets_;
  std::vector<Gate> gates_;
  std::vector<std::string> net_names_;
  std::unordered_map<std::string, NetId> net_index_;
  std::vector<std::size_t> fanin_offsets_;
  std::vector<NetId> fanin_ids_;
  std::vector<NetId> output_ids_;
  std::vector<std::vector<NetId>> fanout_;
};

// Gate names in an order where every gate follows all of its fanins.
inline std::vector<std::string> topological_order(const Circuit& c) {
  std::vector<std::string> order;
  order.reserve(c.gates().size());
  for (const auto& g : c.gates()) order.push_back(g.name);
  return order;
}

// Primary outputs (by name, in output order) reachable from the net `net`.
inline std::vector<std::string> fanout_cone(const Circuit& c, const std::string& net) {
  std::vector<char> seen(c.num_nets(), 0);
  std::vector<NetId> stack{c.net_id(net)};
  seen[stack.back()] = 1;
  while (!stack.empty()) {
    NetId n = stack.back();
    stack.pop_back();
    for (NetId u : c.fanout()[n]) {
      if (!seen[u]) { seen[u] = 1; stack.push_back(u); }
    }
  }
  std::vector<std::string> result;
  for (std::size_t i = 0; i < c.outputs().size(); ++i) {
    if (seen[c.output_ids()[i]]) result.push_back(c.outputs()[i]);
  }
  return result;
}

// Gates (by name, in topological order) in the transitive fanin of `outputs`.
inline std::vector<std::string> fanin_cone(const Circuit& c, const std::vector<std::string>& outputs) {
  std::vector<char> seen(c.num_nets(), 0);
  std::vector<NetId> stack;
  for (const auto& o : outputs) {
    NetId id = c.net_id(o);
    if (!seen[id]) { seen[id] = 1; stack.push_back(id); }
  }
  while (!stack.empty()) {
    NetId n = stack.back();
    stack.pop_back();
    if (n < c.num_sources()) continue;
    for (NetId f : c.gate_fanin(n - c.num_sources())) {
      if (!seen[f]) { seen[f] = 1; stack.push_back(f); }
    }
  }
  std::vector<std::string> result;
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    if (seen[c.gate_net(g)]) result.push_back(c.gates()[g].name);
  }
  return result;
}

// Logic level per gate (sources are level 0).
inline std::vector<unsigned> levelize(const Circuit& c) {
  std::vector<unsigned> level(c.num_nets(), 0);
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    unsigned l = 0;
    for (NetId f : c.gate_fanin(g)) l = std::max(l, level[f]);
    level[c.gate_net(g)] = l + 1;
  }
  return {level.begin() + static_cast<std::ptrdiff_t>(c.num_sources()), level.end()};
}

// Flip-flops are cut: Q becomes a pseudo-primary input, D a pseudo-primary output.
inline Circuit unroll_sequential(const Circuit& c) {
  if (c.is_combinational()) return c;
  std::vector<std::string> inputs = c.inputs();
  std::vector<std::string> outputs = c.outputs();
  std::vector<std::string> pseudo = c.pseudo_nets();
  for (const auto& ff : c.flops()) {
    inputs.push_back(ff.q_output);
    outputs.push_back(ff.d_input);
    pseudo.push_back(ff.q_output);
    pseudo.push_back(ff.d_input);
  }
  return Circuit(std::move(inputs), std::move(outputs), c.gates(), {}, c.pragmas(), std::move(pseudo));
}

// Splits AND/NAND/OR/NOR/XOR/XNOR gates wider than two inputs into balanced
// 2-input trees. The root keeps the original name (and any inversion).
inline Circuit decompose_to_two_input(const Circuit& c) {
  using F = GateFunction::Family;
  std::set<std::string> taken;
  for (NetId i = 0; i < c.num_nets(); ++i) taken.insert(c.net_name(i));
  std::vector<Gate> gates;
  for (const auto& g : c.gates()) {
    F fam = g.function.family();
    if (g.function.arity() <= 2 || fam == F::kTable) {
      gates.push_back(g);
      continue;
    }
    F inner = (fam == F::kAnd || fam == F::kNand) ? F::kAnd : (fam == F::kOr || fam == F::kNor) ? F::kOr : F::kXor;
    F root = fam == F::kNand ? F::kNand : fam == F::kNor ? F::kNor : fam == F::kXnor ? F::kXnor : inner;
    std::vector<std::string> level = g.fanin;
    int serial = 0;
    while (level.size() > 2) {
      std::vector<std::string> next;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
        std::string name;
        do { name = g.name + "_d" + std::to_string(serial++); } while (taken.count(name));
        taken.insert(name);
        gates.push_back(Gate{name, GateFunction::from_family(inner, 2), {level[i], level[i + 1]}});
        next.push_back(name);
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    gates.push_back(Gate{g.name, GateFunction::from_family(root, 2), level});
  }
  return Circuit(c.inputs(), c.outputs(), std::move(gates), c.flops(), c.pragmas(), c.pseudo_nets());
}

}  // namespace camoforge
