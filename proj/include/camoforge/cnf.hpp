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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "camoforge/netlist.hpp"
#include "camoforge/sat.hpp"

namespace camoforge {

// Clause list with a net-to-variable map. Variables are DIMACS-numbered from 1.
class CnfFormula : public sat::Backend {
 public:
  int new_var() override { return ++num_vars_; }
  int num_vars() const override { return num_vars_; }
  std::size_t num_clauses() const override { return clauses_.size(); }
  const std::vector<std::vector<int>>& clauses() const { return clauses_; }

  using sat::Backend::add_clause;
  bool add_clause(std::span<const int> lits) override {
    if (lits.empty()) throw std::invalid_argument("empty clause");
    for (int l : lits) {
      if (l == 0) throw std::invalid_argument("literal 0 is not a valid DIMACS literal");
      num_vars_ = std::max(num_vars_, std::abs(l));
    }
    clauses_.emplace_back(lits.begin(), lits.end());
    return true;
  }

  // A formula is only a container; solving goes through a real backend.
  sat::Result solve(std::span<const int>) override { throw std::logic_error("CnfFormula cannot solve; load it into a solver"); }
  bool model_value(int) const override { throw std::logic_error("CnfFormula has no model"); }
  void set_deadline(sat::Clock::time_point) override {}

  void map_net(const std::string& net, int copy, int lit) {
    if (!var_map_.emplace(std::make_pair(net, copy), lit).second) {
      throw std::invalid_argument("net '" + net + "' of copy " + std::to_string(copy) + " mapped twice");
    }
  }
  const std::map<std::pair<std::string, int>, int>& var_map() const { return var_map_; }
  std::optional<int> lookup(const std::string& net, int copy) const {
    auto it = var_map_.find({net, copy});
    if (it == var_map_.end()) return std::nullopt;
    return it->second;
  }

  void load_into(sat::Backend& b) const {
    while (b.num_vars() < num_vars_) b.new_var();
    for (const auto& c : clauses_) b.add_clause(c);
  }

 private:
  int num_vars_ = 0;
  std::vector<std::vector<int>> clauses_;
  std::map<std::pair<std::string, int>, int> var_map_;
};

// Value of a net inside an encoding: either a constant or a literal.
struct Signal {
  int lit = 0;  // 0 for constants
  bool value = false;

  static Signal literal(int l) { return {l, false}; }
  static Signal constant(bool v) { return {0, v}; }
  bool is_constant() const { return lit == 0; }
  Signal operator!() const { return is_constant() ? constant(!value) : literal(-lit); }
  bool operator==(const Signal&) const = default;
};

namespace detail {

// y <-> AND(lits)
inline void encode_and(sat::Backend& s, int y, const std::vector<int>& lits) {
  std::vector<int> big{y};
  for (int l : lits) {
    s.add_clause({-y, l});
    big.push_back(-l);
  }
  s.add_clause(big);
}

// y <-> a XOR b
inline void encode_xor2(sat::Backend& s, int y, int a, int b) {
  s.add_clause({-y, a, b});
  s.add_clause({-y, -a, -b});
  s.add_clause({y, -a, b});
  s.add_clause({y, a, -b});
}

}  // namespace detail

// Encodes one gate whose fanins carry `in`; constants are folded, so the
// result may be a constant or an existing literal.
inline Signal encode_gate(sat::Backend& s, const GateFunction& f, const std::vector<Signal>& in) {
  // Distinct variables among the non-constant fanins.
  std::vector<int> vars;
  for (const Signal& x : in) {
    if (x.is_constant()) continue;
    int v = std::abs(x.lit);
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  }
  std::size_t k = vars.size();
  std::vector<uint8_t> table(std::size_t{1} << k);
  for (uint64_t a = 0; a < table.size(); ++a) {
    uint64_t m = 0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      bool bit;
      if (in[j].is_constant()) {
        bit = in[j].value;
      } else {
        std::size_t u = std::find(vars.begin(), vars.end(), std::abs(in[j].lit)) - vars.begin();
        bit = ((a >> u) & 1) != (in[j].lit < 0);
      }
      if (bit) m |= uint64_t{1} << j;
    }
    table[a] = f.output(m);
  }
  // Drop variables the reduced function does not depend on.
  for (std::size_t u = k; u-- > 0;) {
    bool depends = false;
    for (uint64_t a = 0; a < table.size() && !depends; ++a) {
      if (!((a >> u) & 1) && table[a] != table[a | (uint64_t{1} << u)]) depends = true;
    }
    if (depends) continue;
    std::vector<uint8_t> compact(table.size() / 2);
    for (uint64_t a = 0; a < table.size(); ++a) {
      if ((a >> u) & 1) continue;
      uint64_t low = a & ((uint64_t{1} << u) - 1);
      uint64_t high = a >> (u + 1);
      compact[low | (high << u)] = table[a];
    }
    table = std::move(compact);
    vars.erase(vars.begin() + static_cast<long>(u));
  }
  k = vars.size();
  if (k == 0) return Signal::constant(table[0]);
  if (k == 1) return Signal::literal(table[1] ? vars[0] : -vars[0]);

  std::size_t ones = 0;
  for (uint8_t t : table) ones += t;
  auto lit_for = [&](std::size_t u, bool positive) { return positive ? vars[u] : -vars[u]; };
  if (ones == 1 || ones == table.size() - 1) {
    // AND of literals, or its complement (an OR).
    bool target = ones == 1;
    uint64_t m = std::find(table.begin(), table.end(), target ? 1 : 0) - table.begin();
    std::vector<int> lits;
    for (std::size_t u = 0; u < k; ++u) lits.push_back(lit_for(u, (m >> u) & 1));
    int y = s.new_var();
    detail::encode_and(s, y, lits);
    return Signal::literal(target ? y : -y);
  }
  bool parity = true, inv_parity = true;
  for (uint64_t a = 0; a < table.size(); ++a) {
    bool p = std::popcount(a) & 1;
    if (table[a] != p) parity = false;
    if (table[a] == p) inv_parity = false;
  }
  if (parity || inv_parity) {
    int acc = vars[0];
    for (std::size_t u = 1; u < k; ++u) {
      int y = s.new_var();
      detail::encode_xor2(s, y, acc, vars[u]);
      acc = y;
    }
    return Signal::literal(parity ? acc : -acc);
  }
  int y = s.new_var();
  std::vector<int> clause;
  for (uint64_t a = 0; a < table.size(); ++a) {
    clause.clear();
    for (std::size_t u = 0; u < k; ++u) clause.push_back(lit_for(u, !((a >> u) & 1)));
    clause.push_back(table[a] ? y : -y);
    s.add_clause(clause);
  }
  return Signal::literal(y);
}

// Tseitin encoding of `c` with the given primary-input signals; returns one signal per net.
inline std::vector<Signal> encode_circuit(sat::Backend& s, const Circuit& c, const std::vector<Signal>& inputs) {
  if (!c.is_combinational()) throw std::invalid_argument("cannot encode a circuit with flip-flops; unroll it first");
  if (c.gates().empty()) throw std::invalid_argument("cannot encode an empty circuit");
  if (inputs.size() != c.inputs().size()) throw std::invalid_argument("input signal count mismatch");
  std::vector<Signal> net(c.num_nets());
  std::copy(inputs.begin(), inputs.end(), net.begin());
  std::vector<Signal> in;
  for (std::size_t g = 0; g < c.gates().size(); ++g) {
    in.clear();
    for (NetId f : c.gate_fanin(g)) in.push_back(net[f]);
    net[c.gate_net(g)] = encode_gate(s, c.gates()[g].function, in);
  }
  return net;
}

// Fresh-variable encoding of one circuit copy into `f`, with every net recorded in its map.
inline std::vector<Signal> encode(CnfFormula& f, const Circuit& c, int copy) {
  std::vector<Signal> inputs;
  for (std::size_t i = 0; i < c.inputs().size(); ++i) inputs.push_back(Signal::literal(f.new_var()));
  auto nets = encode_circuit(f, c, inputs);
  for (NetId n = 0; n < nets.size(); ++n) {
    if (!nets[n].is_constant()) f.map_net(c.net_name(n), copy, nets[n].lit);
  }
  return nets;
}

// a XOR b as a signal.
inline Signal xor_signal(sat::Backend& s, Signal a, Signal b) {
  return encode_gate(s, GateFunction::xor_(), {a, b});
}

// Forces `sig` to `v`; false when that is already contradictory.
inline bool assert_signal(sat::Backend& s, Signal sig, bool v) {
  if (sig.is_constant()) {
    if (sig.value != v) {
      s.add_clause(std::span<const int>{});
      return false;
    }
    return true;
  }
  return s.add_clause({v ? sig.lit : -sig.lit});
}

// ---- DIMACS ---------------------------------------------------------------

inline std::string export_dimacs(const CnfFormula& f) {
  std::ostringstream o;
  o << "p cnf " << f.num_vars() << " " << f.num_clauses() << "\n";
  for (const auto& c : f.clauses()) {
    for (int l : c) o << l << " ";
    o << "0\n";
  }
  return o.str();
}

inline CnfFormula parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfFormula f;
  bool header = false;
  int declared_vars = 0;
  std::size_t declared_clauses = 0;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c" || first[0] == 'c' || first == "%") continue;
    if (first == "p") {
      std::string fmt;
      if (!(ls >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf") throw std::invalid_argument("malformed DIMACS header: " + line);
      header = true;
      continue;
    }
    if (!header) throw std::invalid_argument("DIMACS clause before header");
    std::istringstream all(line);
    long long v;
    while (all >> v) {
      if (v == 0) {
        if (cur.empty()) throw std::invalid_argument("empty clause in DIMACS input");
        f.add_clause(cur);
        cur.clear();
      } else {
        cur.push_back(static_cast<int>(v));
      }
    }
  }
  if (!cur.empty()) throw std::invalid_argument("unterminated DIMACS clause");
  if (!header) throw std::invalid_argument("missing DIMACS header");
  while (f.num_vars() < declared_vars) f.new_var();
  if (f.num_clauses() != declared_clauses) throw std::invalid_argument("DIMACS clause count does not match header");
  return f;
}

// Runs an external executable on a DIMACS file per solve call. The program
// must print "s SATISFIABLE"/"s UNSATISFIABLE" and "v" model lines.
class ExternalSolver : public sat::Backend {
 public:
  explicit ExternalSolver(std::string program) : program_(std::move(program)) {
    if (!std::filesystem::exists(program_)) throw std::invalid_argument("external solver '" + program_ + "' not found");
  }

  int new_var() override { return formula_.new_var(); }
  int num_vars() const override { return formula_.num_vars(); }
  std::size_t num_clauses() const override { return formula_.num_clauses(); }
  void set_deadline(sat::Clock::time_point d) override { deadline_ = d; }

  using sat::Backend::add_clause;
  bool add_clause(std::span<const int> lits) override {
    if (lits.empty()) {
      unsat_ = true;
      return false;
    }
    formula_.add_clause(lits);
    return !unsat_;
  }

  sat::Result solve(std::span<const int> assumptions) override {
    model_.clear();
    if (unsat_) return sat::Result::kUnsat;
    if (sat::Clock::now() >= deadline_) return sat::Result::kUnknown;
    CnfFormula f = formula_;
    for (int a : assumptions) f.add_clause({a});
    auto path = std::filesystem::temp_directory_path() /
                ("camoforge_" + std::to_string(reinterpret_cast<uintptr_t>(this)) + "_" + std::to_string(++calls_) + ".cnf");
    {
      std::ofstream out(path);
      out << export_dimacs(f);
    }
    std::string cmd = "\"" + program_ + "\" \"" + path.string() + "\"";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw std::runtime_error("cannot run external solver '" + program_ + "'");
    std::string output;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
    pclose(pipe);
    std::filesystem::remove(path);
    std::istringstream in(output);
    std::string line;
    sat::Result r = sat::Result::kUnknown;
    std::vector<int8_t> model(static_cast<std::size_t>(f.num_vars()), 0);
    while (std::getline(in, line)) {
      if (line.rfind("s ", 0) == 0) {
        if (line.find("UNSATISFIABLE") != std::string::npos) r = sat::Result::kUnsat;
        else if (line.find("SATISFIABLE") != std::string::npos) r = sat::Result::kSat;
      } else if (line.rfind("v ", 0) == 0) {
        std::istringstream ls(line.substr(2));
        int l;
        while (ls >> l) {
          if (l != 0 && std::abs(l) <= f.num_vars()) model[std::abs(l) - 1] = l > 0 ? 1 : -1;
        }
      }
    }
    if (r == sat::Result::kSat) model_ = std::move(model);
    return r;
  }

  bool model_value(int var) const override {
    if (var < 1 || static_cast<std::size_t>(var) > model_.size()) throw std::out_of_range("no model value for variable");
    return model_[var - 1] > 0;
  }

 private:
  std::string program_;
  CnfFormula formula_;
  bool unsat_ = false;
  std::vector<int8_t> model_;
  uint64_t calls_ = 0;
  sat::Clock::time_point deadline_ = sat::Clock::time_point::max();
};

// "builtin" or "dimacs:<path-to-executable>".
inline std::unique_ptr<sat::Backend> make_backend(const std::string& choice) {
  if (choice.empty() || choice == "builtin") return std::make_unique<sat::Solver>();
  if (choice.rfind("dimacs:", 0) == 0) return std::make_unique<ExternalSolver>(choice.substr(7));
  throw std::invalid_argument("unknown solver '" + choice + "' (expected builtin or dimacs:<path>)");
}

}  // namespace camoforge
