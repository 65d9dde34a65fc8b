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
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "camoforge/annotation.hpp"
#include "camoforge/bits.hpp"
#include "camoforge/netlist.hpp"
#include "camoforge/rng.hpp"

namespace camoforge {

// Functions a camouflaged cell may implement; the key selects one of them.
struct FunctionSet {
  std::string name;
  std::vector<GateFunction> functions;

  unsigned arity() const { return functions.front().arity(); }

  // ceil(log2(|functions|))
  unsigned key_width() const { return static_cast<unsigned>(std::bit_width(functions.size() - 1)); }

  std::optional<std::size_t> index_of(const GateFunction& f) const {
    for (std::size_t i = 0; i < functions.size(); ++i) if (functions[i] == f) return i;
    return std::nullopt;
  }

  void validate() const {
    if (functions.size() < 2) throw std::invalid_argument("function set '" + name + "' provides no obfuscation (fewer than 2 functions)");
    for (std::size_t i = 0; i < functions.size(); ++i) {
      if (functions[i].arity() != functions[0].arity()) throw std::invalid_argument("function set '" + name + "' mixes arities");
      for (std::size_t j = 0; j < i; ++j) {
        if (functions[i] == functions[j]) throw std::invalid_argument("function set '" + name + "' has duplicate functions");
      }
    }
  }
};

namespace detail {
inline FunctionSet make_set(std::string name, std::initializer_list<const char*> fns) {
  FunctionSet s{std::move(name), {}};
  for (const char* f : fns) s.functions.push_back(function_by_name(f));
  return s;
}
}  // namespace detail

// Camouflaging primitives from the literature plus the full 16-function cell.
inline const std::vector<FunctionSet>& function_set_catalog() {
  static const std::vector<FunctionSet> kCatalog = [] {
    std::vector<FunctionSet> c;
    c.push_back(detail::make_set("nand_nor", {"NAND", "NOR"}));
    c.push_back(detail::make_set("xor_xnor", {"XOR", "XNOR"}));
    c.push_back(detail::make_set("inv_buf", {"INV", "BUF"}));
    c.push_back(detail::make_set("and_or", {"AND", "OR"}));
    c.push_back(detail::make_set("nand_nor_and_or", {"NAND", "NOR", "AND", "OR"}));
    c.push_back(detail::make_set("nand_nor_xor", {"NAND", "NOR", "XOR"}));
    c.push_back(detail::make_set("six", {"NAND", "NOR", "XOR", "XNOR", "AND", "OR"}));
    // INV/BUF of the first input stand in for the single-input cells.
    c.push_back(detail::make_set("seven_plus_one", {"NAND", "NOR", "XOR", "XNOR", "AND", "OR", "NA", "A"}));
    FunctionSet all{"gshe16", {}};
    for (unsigned t = 0; t < 16; ++t) all.functions.push_back(GateFunction::two_input(t));
    c.push_back(std::move(all));
    return c;
  }();
  return kCatalog;
}

inline const FunctionSet& function_set(const std::string& name) {
  for (const auto& s : function_set_catalog()) if (s.name == name) return s;
  throw std::invalid_argument("unknown function set '" + name + "'");
}

struct CamoRecord {
  std::string gate;
  std::string set_name;
  std::size_t key_offset = 0;  // first bit of the slice within the key
  unsigned key_width = 0;
  std::size_t original_index = 0;

  bool operator==(const CamoRecord&) const = default;
};

// Circuit with key inputs among its primary inputs and the key that unlocks it.
struct LockedCircuit {
  Circuit circuit;
  std::vector<std::string> key_inputs;
  BitString correct_key;
  std::vector<CamoRecord> camo;
  uint64_t seed = 0;
  std::string benchmark;

  static LockedCircuit unlocked(Circuit c, std::string benchmark = {}) {
    LockedCircuit l;
    l.circuit = std::move(c);
    l.benchmark = std::move(benchmark);
    return l;
  }

  // Primary inputs that are not key inputs, in circuit order.
  std::vector<std::string> data_inputs() const {
    std::set<std::string> keys(key_inputs.begin(), key_inputs.end());
    std::vector<std::string> d;
    for (const auto& i : circuit.inputs()) if (!keys.count(i)) d.push_back(i);
    return d;
  }
};

// A memorized random gate selection, reusable across techniques.
struct Selection {
  uint64_t seed = 0;
  double fraction = 0;
  std::vector<std::string> gates;

  std::string to_text() const {
    std::ostringstream o;
    o << "selection " << seed << " " << format_probability(fraction) << " " << gates.size() << "\n";
    for (const auto& g : gates) o << g << "\n";
    return o.str();
  }

  static Selection parse(const std::string& text) {
    std::istringstream in(text);
    std::string tag;
    Selection s;
    std::size_t n = 0;
    if (!(in >> tag >> s.seed >> s.fraction >> n) || tag != "selection") throw std::invalid_argument("malformed selection header");
    for (std::size_t i = 0; i < n; ++i) {
      std::string g;
      if (!(in >> g)) throw std::invalid_argument("selection truncated");
      s.gates.push_back(g);
    }
    return s;
  }

  bool operator==(const Selection&) const = default;
};

// Seeded permutation of the eligible gates; every selection of the same seed is
// a prefix of it, so smaller fractions are subsets of larger ones.
inline std::vector<std::string> gate_permutation(const Circuit& c, uint64_t seed,
                                                 const std::function<bool(const Gate&)>& eligible = {}) {
  std::vector<std::string> names;
  for (const auto& g : c.gates()) if (!eligible || eligible(g)) names.push_back(g.name);
  Rng rng(mix64(seed ^ 0x5e1ec7ull));
  rng.shuffle(names);
  return names;
}

// floor(fraction * #eligible) distinct gates, uniform without replacement.
inline Selection select_gates_random(const Circuit& c, double fraction, uint64_t seed,
                                     const std::function<bool(const Gate&)>& eligible = {}) {
  if (c.gates().empty()) throw std::invalid_argument("cannot select gates of an empty circuit");
  if (!(fraction > 0 && fraction <= 1)) throw std::invalid_argument("selection fraction must lie in (0, 1]");
  auto perm = gate_permutation(c, seed, eligible);
  auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(perm.size()) + 1e-9));
  perm.resize(std::min(count, perm.size()));
  return Selection{seed, fraction, std::move(perm)};
}

// The first `count` gates of the seeded permutation of eligible gates.
inline std::vector<std::string> select_gates_count(const Circuit& c, std::size_t count, uint64_t seed,
                                                   const std::function<bool(const Gate&)>& eligible = {}) {
  auto perm = gate_permutation(c, seed, eligible);
  if (count > perm.size()) {
    throw std::invalid_argument("cannot select " + std::to_string(count) + " gates from " + std::to_string(perm.size()) +
                                " eligible gates");
  }
  perm.resize(count);
  return perm;
}

namespace detail {

inline std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
  std::string name = base;
  for (int i = 0; taken.count(name); ++i) name = base + "_" + std::to_string(i);
  taken.insert(name);
  return name;
}

inline std::set<std::string> all_net_names(const Circuit& c) {
  std::set<std::string> s;
  for (NetId i = 0; i < c.num_nets(); ++i) s.insert(c.net_name(i));
  return s;
}

}  // namespace detail

// Cuts `n` randomly chosen nets with XOR/XNOR key gates fed by fresh key inputs.
// XOR gates get key bit 0 and XNOR gates key bit 1, so the correct key is transparent.
inline LockedCircuit insert_key_gates(const Circuit& c, std::size_t n, uint64_t seed, std::string benchmark = {}) {
  if (!c.is_combinational()) throw std::invalid_argument("unroll sequential elements before locking");
  std::vector<std::string> nets;
  for (NetId i = 0; i < c.num_nets(); ++i) nets.push_back(c.net_name(i));
  if (n > nets.size()) {
    throw std::invalid_argument("cannot insert " + std::to_string(n) + " key gates into " + std::to_string(nets.size()) + " nets");
  }
  Rng rng(mix64(seed ^ 0x6b65797367ull));
  rng.shuffle(nets);
  nets.resize(n);

  std::set<std::string> taken = detail::all_net_names(c);
  std::vector<std::string> inputs = c.inputs();
  std::vector<std::string> outputs = c.outputs();
  std::vector<Gate> gates = c.gates();
  LockedCircuit locked;
  locked.seed = seed;
  locked.benchmark = std::move(benchmark);
  locked.correct_key = BitString(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& net = nets[i];
    std::string key = detail::fresh_name("keyinput" + std::to_string(i), taken);
    std::string kg = detail::fresh_name(net + "_kg" + std::to_string(i), taken);
    bool xnor = rng.next() & 1;
    for (auto& g : gates) for (auto& f : g.fanin) if (f == net) f = kg;
    for (auto& o : outputs) if (o == net) o = kg;
    gates.push_back(Gate{kg, xnor ? GateFunction::xnor() : GateFunction::xor_(), {net, key}});
    locked.key_inputs.push_back(key);
    locked.correct_key.set(i, xnor);
  }
  for (const auto& k : locked.key_inputs) inputs.push_back(k);
  locked.circuit = Circuit(std::move(inputs), std::move(outputs), std::move(gates), {}, c.pragmas(), c.pseudo_nets());
  return locked;
}

// Truth table of a camouflaged cell: data inputs first, then the key slice.
// Selector codes past the end of the set alias to function 0.
inline GateFunction camouflaged_function(const FunctionSet& set) {
  unsigned a = set.arity();
  unsigned w = set.key_width();
  unsigned arity = a + w;
  std::vector<uint64_t> table(arity >= 6 ? (std::size_t{1} << (arity - 6)) : 1, 0);
  uint64_t total = uint64_t{1} << arity;
  for (uint64_t m = 0; m < total; ++m) {
    uint64_t data = m & ((uint64_t{1} << a) - 1);
    uint64_t code = m >> a;
    std::size_t idx = code < set.functions.size() ? code : 0;
    if (set.functions[idx].output(data)) table[m >> 6] |= uint64_t{1} << (m & 63);
  }
  return GateFunction(arity, std::move(table));
}

// Replaces each selected gate by a key-selected cell able to implement every
// function of `set`. The gate keeps its name; the key encodes its true function.
inline LockedCircuit camouflage(const Circuit& c, const std::vector<std::string>& selection, const FunctionSet& set,
                                uint64_t seed = 0, std::string benchmark = {}) {
  set.validate();
  if (!c.is_combinational()) throw std::invalid_argument("unroll sequential elements before camouflaging");
  unsigned w = set.key_width();
  GateFunction cell = camouflaged_function(set);
  std::set<std::string> taken = detail::all_net_names(c);
  std::vector<Gate> gates = c.gates();
  std::vector<std::string> inputs = c.inputs();
  LockedCircuit locked;
  locked.seed = seed;
  locked.benchmark = std::move(benchmark);
  std::set<std::string> done;
  for (const auto& name : selection) {
    if (!done.insert(name).second) throw std::invalid_argument("gate '" + name + "' selected twice");
    std::size_t gi = c.gate_index(name);
    Gate& g = gates[gi];
    if (g.function.arity() != set.arity()) {
      throw std::invalid_argument("gate '" + name + "' has arity " + std::to_string(g.function.arity()) + " but set '" +
                                  set.name + "' needs " + std::to_string(set.arity()));
    }
    auto idx = set.index_of(g.function);
    if (!idx) throw std::invalid_argument("function of gate '" + name + "' is not in set '" + set.name + "'");
    CamoRecord rec{name, set.name, locked.key_inputs.size(), w, *idx};
    for (unsigned b = 0; b < w; ++b) {
      std::string key = detail::fresh_name("keyinput" + std::to_string(locked.key_inputs.size()), taken);
      locked.key_inputs.push_back(key);
      locked.correct_key.push_back((*idx >> b) & 1);
      g.fanin.push_back(key);
    }
    g.function = cell;
    locked.camo.push_back(std::move(rec));
  }
  for (const auto& k : locked.key_inputs) inputs.push_back(k);
  locked.circuit = Circuit(std::move(inputs), c.outputs(), std::move(gates), {}, c.pragmas(), c.pseudo_nets());
  return locked;
}

// One probabilistic annotation per selected gate; `overrides` maps gate -> correctness.
inline Annotations make_probabilistic(const Circuit& c, const std::vector<std::string>& selection, double correctness,
                                      const std::map<std::string, double>& overrides = {}) {
  Annotations out;
  for (const auto& g : selection) {
    c.gate_index(g);
    auto it = overrides.find(g);
    BehaviorAnnotation a{g, Probabilistic{it == overrides.end() ? correctness : it->second}};
    validate_annotation(a);
    out.push_back(std::move(a));
  }
  return out;
}

// Distribution for a polymorphic stand-in: the true function keeps 2/3, the
// remaining functions of its family share the rest evenly.
inline Polymorphic polymorphic_distribution(const GateFunction& f) {
  static const char* kTwoInput[] = {"NAND", "AND", "NOR", "OR", "XOR", "XNOR"};
  static const char* kOneInput[] = {"INV", "BUF"};
  std::vector<GateFunction> family;
  if (f.arity() == 2) for (const char* n : kTwoInput) family.push_back(function_by_name(n));
  else if (f.arity() == 1) for (const char* n : kOneInput) family.push_back(function_by_name(n));
  auto it = std::find(family.begin(), family.end(), f);
  if (it == family.end()) {
    throw std::invalid_argument("polymorphic gates need a 2-input NAND/AND/NOR/OR/XOR/XNOR or an INV/BUF, got " +
                                function_name(f));
  }
  Polymorphic p;
  double others = (1.0 / 3.0) / static_cast<double>(family.size() - 1);
  p.distribution.emplace_back(f, 2.0 / 3.0);
  for (const auto& g : family) if (!(g == f)) p.distribution.emplace_back(g, others);
  return p;
}

inline bool supports_polymorphism(const GateFunction& f) {
  using F = GateFunction::Family;
  if (f.arity() == 1) return f.family() == F::kBuf || f.family() == F::kNot;
  return f.arity() == 2 && f.family() != F::kTable;
}

inline Annotations make_polymorphic(const Circuit& c, const std::vector<std::string>& selection) {
  Annotations out;
  for (const auto& g : selection) {
    const Gate& gate = c.gates()[c.gate_index(g)];
    try {
      out.push_back({g, polymorphic_distribution(gate.function)});
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("gate '" + g + "': " + e.what());
    }
  }
  return out;
}

// Keeps `keep` annotations chosen by a seeded permutation; the rest revert to
// regular gates. Smaller `keep` values give subsets of larger ones.
inline Annotations revert_annotations(const Annotations& anns, std::size_t keep, uint64_t seed) {
  std::vector<std::size_t> order(anns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix64(seed ^ 0x7265766572ull));
  rng.shuffle(order);
  order.resize(std::min(keep, order.size()));
  std::sort(order.begin(), order.end());
  Annotations out;
  for (std::size_t i : order) out.push_back(anns[i]);
  return out;
}

// ---- key sidecar ----------------------------------------------------------

inline nlohmann::ordered_json annotations_to_json(const Annotations& anns) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& a : anns) {
    nlohmann::ordered_json j;
    j["gate"] = a.gate;
    if (const auto* p = std::get_if<Probabilistic>(&a.mode)) {
      j["mode"] = "prob";
      j["correctness"] = p->correctness;
    } else {
      j["mode"] = "poly";
      auto d = nlohmann::ordered_json::array();
      for (const auto& [f, p] : std::get<Polymorphic>(a.mode).distribution) d.push_back({function_name(f), p});
      j["distribution"] = d;
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

inline Annotations annotations_from_json(const nlohmann::json& arr) {
  Annotations out;
  for (const auto& j : arr) {
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "prob") {
      out.push_back({j.at("gate").get<std::string>(), Probabilistic{j.at("correctness").get<double>()}});
    } else if (mode == "poly") {
      Polymorphic p;
      for (const auto& e : j.at("distribution")) {
        p.distribution.emplace_back(function_by_name(e.at(0).get<std::string>()), e.at(1).get<double>());
      }
      out.push_back({j.at("gate").get<std::string>(), std::move(p)});
    } else {
      throw std::invalid_argument("unknown annotation mode '" + mode + "'");
    }
    validate_annotation(out.back());
  }
  return out;
}

// JSON document with fields benchmark, seed, key_inputs, correct_key, camo, annotations.
inline std::string write_sidecar(const LockedCircuit& l, const Annotations& anns = {}) {
  nlohmann::ordered_json j;
  j["benchmark"] = l.benchmark;
  j["seed"] = l.seed;
  j["key_inputs"] = l.key_inputs;
  j["correct_key"] = l.correct_key.to_binary();
  auto camo = nlohmann::ordered_json::array();
  for (const auto& r : l.camo) {
    camo.push_back({{"gate", r.gate}, {"set", r.set_name}, {"key_offset", r.key_offset},
                    {"key_width", r.key_width}, {"original_index", r.original_index}});
  }
  j["camo"] = camo;
  j["annotations"] = annotations_to_json(anns);
  return j.dump(2) + "\n";
}

struct Sidecar {
  std::string benchmark;
  uint64_t seed = 0;
  std::vector<std::string> key_inputs;
  BitString correct_key;
  std::vector<CamoRecord> camo;
  Annotations annotations;
};

inline Sidecar parse_sidecar(const std::string& text) {
  Sidecar s;
  try {
    auto j = nlohmann::json::parse(text);
    s.benchmark = j.at("benchmark").get<std::string>();
    s.seed = j.at("seed").get<uint64_t>();
    s.key_inputs = j.at("key_inputs").get<std::vector<std::string>>();
    s.correct_key = BitString::from_binary(j.at("correct_key").get<std::string>());
    for (const auto& r : j.at("camo")) {
      s.camo.push_back({r.at("gate").get<std::string>(), r.at("set").get<std::string>(), r.at("key_offset").get<std::size_t>(),
                        r.at("key_width").get<unsigned>(), r.at("original_index").get<std::size_t>()});
    }
    s.annotations = annotations_from_json(j.at("annotations"));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed key sidecar: ") + e.what());
  }
  if (s.correct_key.size() != s.key_inputs.size()) throw std::invalid_argument("malformed key sidecar: key width mismatch");
  return s;
}

// Reassembles a locked circuit from a netlist and its sidecar.
inline LockedCircuit attach_sidecar(Circuit c, const Sidecar& s) {
  for (const auto& k : s.key_inputs) {
    if (std::find(c.inputs().begin(), c.inputs().end(), k) == c.inputs().end()) {
      throw std::invalid_argument("sidecar key input '" + k + "' is not a primary input of the netlist");
    }
  }
  LockedCircuit l;
  l.circuit = std::move(c);
  l.key_inputs = s.key_inputs;
  l.correct_key = s.correct_key;
  l.camo = s.camo;
  l.seed = s.seed;
  l.benchmark = s.benchmark;
  return l;
}

}  // namespace camoforge
