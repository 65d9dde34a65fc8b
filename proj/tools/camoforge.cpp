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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "camoforge.hpp"

namespace cf = camoforge;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;

// Raised for unreadable or malformed inputs; mapped to exit code 3.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else write_file(path, text);
}

cf::Circuit load_circuit(const std::string& path) {
  try {
    return cf::parse_bench(read_file(path));
  } catch (const cf::NetlistError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

std::string default_sidecar(const std::string& netlist) { return netlist + ".key.json"; }

// A netlist with its sidecar, or the bare netlist when no sidecar exists.
struct Design {
  cf::LockedCircuit locked;
  cf::Annotations annotations;
};

Design load_design(const std::string& netlist, std::string sidecar) {
  cf::Circuit c = cf::unroll_sequential(load_circuit(netlist));
  Design d;
  bool explicit_sidecar = !sidecar.empty();
  if (!explicit_sidecar) sidecar = default_sidecar(netlist);
  if (std::filesystem::exists(sidecar)) {
    try {
      auto s = cf::parse_sidecar(read_file(sidecar));
      d.annotations = s.annotations;
      d.locked = cf::attach_sidecar(std::move(c), s);
    } catch (const std::invalid_argument& e) {
      throw InputError(sidecar + ": " + e.what());
    }
  } else if (explicit_sidecar) {
    throw InputError("cannot read '" + sidecar + "'");
  } else {
    d.locked = cf::LockedCircuit::unlocked(std::move(c), stem_of(netlist));
  }
  if (d.annotations.empty()) d.annotations = cf::parse_annotation_pragmas(d.locked.circuit.pragmas());
  cf::validate_annotations(d.locked.circuit, d.annotations);
  return d;
}

void save_design(const cf::LockedCircuit& l, const cf::Annotations& anns, const std::string& out, const std::string& sidecar) {
  write_file(out, cf::write_bench(cf::with_annotations(l.circuit, anns)));
  write_file(sidecar.empty() ? default_sidecar(out) : sidecar, cf::write_sidecar(l, anns));
}

cf::BitString parse_bits(const std::string& text, std::size_t width, const char* what) {
  try {
    cf::BitString b = text.starts_with("0x") ? cf::BitString::from_hex(text, width) : cf::BitString::from_binary(text);
    if (b.size() != width) throw std::invalid_argument("expected " + std::to_string(width) + " bits");
    return b;
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string(what) + " '" + text + "': " + e.what());
  }
}

json histogram_json(const cf::OutputHistogram& h) {
  json arr = json::array();
  for (const auto& [pattern, count] : h.ranked()) arr.push_back({{"output", pattern.to_binary()}, {"count", count}});
  return arr;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

cf::OracleKind oracle_from_name(const std::string& s, const cf::Annotations& anns) {
  if (s == "auto") return anns.empty() ? cf::OracleKind::kDeterministic : cf::OracleKind::kProbabilistic;
  if (s == "deterministic") return cf::OracleKind::kDeterministic;
  if (s == "probabilistic") return cf::OracleKind::kProbabilistic;
  if (s == "defended") return cf::OracleKind::kDefended;
  throw std::invalid_argument("unknown oracle kind '" + s + "'");
}

const std::vector<std::string> kFormats{"json-like", "json", "csv"};
const std::vector<std::string> kOracles{"auto", "deterministic", "probabilistic", "defended"};

// Flags shared by attack and campaign.
struct AttackFlags {
  std::string kind = "sat";
  cf::AttackConfig cfg;
  std::string oracle = "auto";
  cf::DefenseConfig defense;

  void add(CLI::App* app) {
    app->add_option("--kind", kind, "Attack: sat, 2dip or psat")->check(CLI::IsMember({"sat", "2dip", "psat"}));
    app->add_option("--samples", cfg.samples, "Oracle samples per DIP (psat)")->check(CLI::PositiveNumber);
    app->add_option("--patterns", cfg.patterns, "Random patterns for HD/OER")->check(CLI::PositiveNumber);
    app->add_option("--timeout-s", cfg.timeout_s, "Attack time budget in seconds")->check(CLI::PositiveNumber);
    app->add_option("--max-iters", cfg.max_iterations, "Iteration cap");
    app->add_option("--solver", cfg.solver, "builtin or dimacs:<path>");
    app->add_option("--oracle", oracle, "auto, deterministic, probabilistic or defended")->check(CLI::IsMember(kOracles));
    app->add_option("--defense-window", defense.window, "Repetition window (queries)");
    app->add_option("--defense-threshold", defense.threshold, "Repeats that trigger escalation");
    app->add_option("--defense-duration", defense.duration, "Escalated queries per trigger");
    app->add_option("--defense-correctness", defense.escalated_correctness, "Correctness while escalated");
  }
};

int cmd_parse(const std::string& path, const std::string& out, bool unroll) {
  cf::Circuit c = load_circuit(path);
  if (unroll) c = cf::unroll_sequential(c);
  std::string text = cf::write_bench(c);
  cf::Circuit again = cf::parse_bench(text);
  bool round_trip = cf::write_bench(again) == text;
  if (!out.empty()) write_file(out, text);
  json j{{"file", path},
         {"inputs", c.inputs().size()},
         {"outputs", c.outputs().size()},
         {"gates", c.gates().size()},
         {"flops", c.flops().size()},
         {"annotations", cf::parse_annotation_pragmas(c.pragmas()).size()},
         {"round_trip", round_trip}};
  std::cout << dump(j);
  return round_trip ? 0 : kExitInput;
}


int cmd_lock(const std::string& path, std::size_t keys, uint64_t seed, std::string out, const std::string& sidecar) {
  cf::Circuit c = cf::unroll_sequential(load_circuit(path));
  auto locked = cf::insert_key_gates(c, keys, seed, stem_of(path));
  if (out.empty()) out = stem_of(path) + ".locked.bench";
  save_design(locked, {}, out, sidecar);
  std::cout << dump({{"netlist", out}, {"seed", seed}, {"key_inputs", locked.key_inputs.size()},
                     {"correct_key", locked.correct_key.to_binary()}});
  return 0;
}

int cmd_camo(const std::string& path, const std::string& set_name, double fraction, uint64_t seed,
             const std::string& selection_in, const std::string& selection_out, std::string out, const std::string& sidecar) {
  cf::Circuit c = cf::unroll_sequential(load_circuit(path));
  const cf::FunctionSet& set = cf::function_set(set_name);
  cf::Selection sel;
  if (!selection_in.empty()) {
    try {
      sel = cf::Selection::parse(read_file(selection_in));
    } catch (const std::invalid_argument& e) {
      throw InputError(selection_in + ": " + e.what());
    }
  } else {
    auto eligible = [&](const cf::Gate& g) { return set.index_of(g.function).has_value(); };
    sel = cf::select_gates_random(c, fraction, seed, eligible);
  }
  if (!selection_out.empty()) write_file(selection_out, sel.to_text());
  auto locked = cf::camouflage(c, sel.gates, set, seed, stem_of(path));
  if (out.empty()) out = stem_of(path) + ".camo.bench";
  save_design(locked, {}, out, sidecar);
  std::cout << dump({{"netlist", out}, {"seed", seed}, {"set", set.name}, {"camouflaged", sel.gates.size()},
                     {"key_inputs", locked.key_inputs.size()}, {"correct_key", locked.correct_key.to_binary()}});
  return 0;
}

int cmd_annotate(const std::string& path, const std::string& sidecar, const std::string& mode, double fraction, double correctness,
                 uint64_t seed, std::string out, const std::string& sidecar_out) {
  Design d = load_design(path, sidecar);
  const cf::Circuit& c = d.locked.circuit;
  auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(c.gates().size())));
  cf::Annotations anns;
  if (mode == "prob") {
    anns = cf::make_probabilistic(c, cf::select_gates_count(c, count, seed), correctness);
  } else {
    auto eligible = [](const cf::Gate& g) { return cf::supports_polymorphism(g.function); };
    anns = cf::make_polymorphic(c, cf::select_gates_count(c, count, seed, eligible));
  }
  if (out.empty()) out = stem_of(path) + ".annot.bench";
  save_design(d.locked, anns, out, sidecar_out);
  std::cout << dump({{"netlist", out}, {"seed", seed}, {"mode", mode}, {"annotated", anns.size()}});
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& sidecar, const std::vector<std::string>& inputs,
                 const std::string& key_text, uint64_t samples, uint64_t seed) {
  Design d = load_design(path, sidecar);
  cf::Simulator sim(d.locked.circuit, d.annotations, d.locked.key_inputs);
  cf::BitString key = key_text.empty() ? d.locked.correct_key : parse_bits(key_text, sim.num_keys(), "key");
  json results = json::array();
  for (const auto& text : inputs) {
    cf::BitString x = parse_bits(text, sim.num_data_inputs(), "input");
    json r{{"input", x.to_binary()}, {"output", sim.eval(x, key).to_binary()}};
    if (samples > 0) r["histogram"] = histogram_json(sim.sample(x, key, cf::EvalMode::random(seed), 0, samples));
    results.push_back(std::move(r));
  }
  std::cout << dump({{"netlist", path}, {"seed", seed}, {"samples", samples}, {"key", key.to_binary()}, {"results", results}});
  return 0;
}

int cmd_attack(const std::string& path, const std::string& sidecar, AttackFlags& f, uint64_t seed, const std::string& trace_out,
               const std::string& out) {
  Design d = load_design(path, sidecar);
  if (d.locked.key_inputs.empty()) throw InputError(path + ": netlist has no key inputs");
  auto kind = cf::attack_kind_from_name(f.kind);
  auto okind = oracle_from_name(f.oracle, d.annotations);
  cf::AttackConfig cfg = f.cfg;
  cfg.seed = cf::derive_seed(seed, 3);
  cfg.validate();
  cf::Oracle oracle(d.locked, d.annotations, okind, cf::derive_seed(seed, 2), f.defense);
  auto r = cf::run_attack(kind, d.locked, oracle, cfg);
  json j{{"netlist", path},
         {"attack", cf::attack_kind_name(kind)},
         {"oracle", cf::oracle_kind_name(okind)},
         {"seed", seed},
         {"samples", cfg.samples},
         {"status", cf::attack_status_name(r.status)},
         {"success", r.success()},
         {"key", r.key ? json(r.key->to_binary()) : json(nullptr)},
         {"key_hex", r.key ? json(r.key->to_hex()) : json(nullptr)},
         {"equivalent", r.key ? json(cf::keys_equivalent(d.locked, *r.key, d.locked.correct_key)) : json(nullptr)},
         {"iterations", r.iterations},
         {"oracle_queries", r.oracle_queries},
         {"escalated_queries", oracle.escalated_queries()},
         {"runtime_s", r.runtime_s}};
  if (r.key && !d.annotations.empty()) {
    cf::Simulator sim(d.locked.circuit, d.annotations, d.locked.key_inputs);
    auto m = cf::hd_oer(sim, d.locked.correct_key, sim, *r.key, cfg.patterns, cf::derive_seed(seed, 4));
    j["hd"] = m.hd;
    j["oer"] = m.oer;
  }
  if (!trace_out.empty()) write_file(trace_out, cf::format_trace(r.trace));
  emit(out, dump(j));
  return 0;
}

struct CampaignFlags {
  std::string lock = "keygates";
  std::size_t keys = 32;
  std::string set = "gshe16";
  double camo_fraction = 0.1;
  std::string behavior = "prob";
  double behavior_fraction = 0.5;
  double correctness = 0.99;
  bool defended = false;
  uint64_t runs = 1;
  unsigned jobs = 1;
  std::string format = "json-like";
};

int cmd_campaign(const std::string& path, const CampaignFlags& cf_, AttackFlags& f, uint64_t seed, const std::string& out) {
  cf::CampaignConfig c;
  c.benchmark = stem_of(path);
  c.circuit = cf::unroll_sequential(load_circuit(path));
  c.lock = cf_.lock == "camo" ? cf::LockScheme::kCamouflage : cf::LockScheme::kKeyGates;
  c.key_gates = cf_.keys;
  c.function_set = cf_.set;
  c.camo_fraction = cf_.camo_fraction;
  c.behavior = cf::behavior_from_name(cf_.behavior);
  c.behavior_fraction = cf_.behavior_fraction;
  c.correctness = cf_.correctness;
  c.defended = cf_.defended;
  c.defense = f.defense;
  c.attack = cf::attack_kind_from_name(f.kind);
  c.attack_config = f.cfg;
  c.runs = cf_.runs;
  c.master_seed = seed;
  c.jobs = cf_.jobs;
  auto summary = cf::run_campaign(c);
  emit(out, cf::emit_report(summary, cf::report_format_from_name(cf_.format)));
  return 0;
}

struct HybridFlags {
  bool generate = false;
  cf::SkewedCircuitParams gen;
  std::string delays;
  std::string primitive = "obfuscated";
  std::string selection_out;
  bool list = false;
};

json cost_json(const cf::ChipCost& c) {
  return {{"area_um2", c.area * 1e12}, {"power_mW", c.power * 1e3}, {"delay_ns", c.delay * 1e9}};
}

int cmd_hybrid(const std::string& path, HybridFlags& h, uint64_t seed) {
  if (!h.generate && path.empty()) throw CLI::ValidationError("hybrid needs a netlist or --generate");
  cf::Circuit c;
  if (h.generate) {
    h.gen.seed = seed;
    c = cf::generate_skewed_circuit(h.gen);
  } else {
    c = cf::unroll_sequential(load_circuit(path));
  }
  cf::DelayMap d = cf::default_delays();
  if (!h.delays.empty()) {
    std::istringstream in(read_file(h.delays));
    try {
      d = cf::parse_delays(in);
    } catch (const std::invalid_argument& e) {
      throw InputError(h.delays + ": " + e.what());
    }
  }
  auto kind = cf::device::primitive_from_name(h.primitive);
  d.gshe_delay = cf::device::primitive_cost(kind).delay;
  auto sel = cf::delay_aware_select(c, d);
  if (!h.selection_out.empty()) {
    std::string text;
    for (const auto& g : sel.gates) text += g + "\n";
    write_file(h.selection_out, text);
  }
  json j{{"source", h.generate ? std::string("generated") : path},
         {"seed", seed},
         {"gates", c.gates().size()},
         {"selected", sel.gates.size()},
         {"fraction", static_cast<double>(sel.gates.size()) / static_cast<double>(c.gates().size())},
         {"critical_delay_ns", sel.original_critical_delay * 1e9},
         {"hybrid_critical_delay_ns", sel.timing.critical_delay * 1e9},
         {"cmos", cost_json(cf::chip_cost(c, {}, d, kind))},
         {"hybrid", cost_json(cf::chip_cost(c, sel.gates, d, kind))}};
  if (h.list) j["selection"] = sel.gates;
  std::cout << dump(j);
  return 0;
}

int cmd_adder(std::size_t width, std::size_t k, bool flip_check) {
  auto s = cf::adder_case_study(width, k);
  char pct[64];
  std::snprintf(pct, sizeof pct, "%.6f%%", s.worst_case_error * 100);
  json j{{"width", width},
         {"k", k},
         {"gates", s.gates},
         {"selected", s.selected},
         {"worst_case_error", s.worst_case_error},
         {"worst_case_error_pct", pct},
         {"per_gate_saving", s.per_gate_saving},
         {"total_saving", s.total_saving}};
  if (flip_check) {
    auto worst = cf::adversarial_flip_max_error(width, k);
    j["adversarial_max_error"] = worst;
    j["within_bound"] = static_cast<double>(worst) <= s.worst_case_error * std::ldexp(1.0, static_cast<int>(width));
  }
  std::cout << dump(j);
  return 0;
}

int cmd_device(const std::vector<double>& currents, const std::string& params_path, bool catalog) {
  cf::device::DeviceParams p;
  if (!params_path.empty()) {
    std::istringstream in(read_file(params_path));
    try {
      p = cf::device::parse_params(in);
    } catch (const std::invalid_argument& e) {
      throw InputError(params_path + ": " + e.what());
    }
  }
  if (catalog) p.leakage_power = cf::device::catalog_leakage(p);
  auto g = cf::device::conductances(p);
  std::printf("G_P = %.4f uS\nG_AP = %.4f uS\n", g.parallel * 1e6, g.antiparallel * 1e6);
  for (double i : currents) {
    double w = cf::device::read_power(p, i);
    auto v = cf::device::readout_voltages(p, i);
    std::printf("I_s = %.4g uA: power = %.4f uW, energy(1.55 ns) = %.4f fJ, V_out = %.4g mV, V_sup = %.4g mV\n", i * 1e6, w * 1e6,
                cf::device::energy(w, 1.55e-9) * 1e15, v.v_out * 1e3, v.v_sup * 1e3);
  }
  for (auto k : {cf::device::PrimitiveKind::kIntrinsic, cf::device::PrimitiveKind::kWithTransducer,
                 cf::device::PrimitiveKind::kObfuscatedWithMuxes}) {
    auto c = cf::device::primitive_cost(k);
    std::printf("primitive %s: energy %.2f fJ, power %.4f uW, delay %.2f ns, area %.4f um^2\n", cf::device::primitive_name(k),
                c.energy * 1e15, c.power * 1e6, c.delay * 1e9, c.area * 1e12);
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& files, const std::string& format) {
  auto fmt = cf::report_format_from_name(format);
  for (const auto& path : files) {
    std::string text = read_file(path);
    auto first = text.find_first_not_of(" \t\r\n");
    auto in_fmt = (first != std::string::npos && text[first] == '{') ? cf::ReportFormat::kJson : cf::ReportFormat::kCsv;
    cf::CampaignSummary s;
    try {
      s = cf::parse_report(text, in_fmt);
    } catch (const std::exception& e) {
      throw InputError(path + ": " + e.what());
    }
    std::cout << cf::emit_report(s, fmt);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camoforge: logic locking, camouflaging and probabilistic-circuit workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  uint64_t seed = 1;
  std::string netlist, sidecar, out, sidecar_out;
  app.add_option("--seed", seed, "Master seed (recorded in every output)");

  auto* parse = app.add_subcommand("parse", "Validate a .bench netlist and check that it round-trips");
  bool unroll = false;
  parse->add_option("netlist", netlist)->required();
  parse->add_option("-o,--out", out, "Write the canonical netlist here");
  parse->add_flag("--unroll", unroll, "Cut flip-flops into pseudo-primary inputs/outputs");

  auto* lock = app.add_subcommand("lock", "Insert XOR/XNOR key gates");
  std::size_t keys = 32;
  lock->add_option("netlist", netlist)->required();
  lock->add_option("--keys", keys, "Number of key gates")->required()->check(CLI::PositiveNumber);
  lock->add_option("-o,--out", out);
  lock->add_option("--sidecar", sidecar_out);

  auto* camo = app.add_subcommand("camo", "Camouflage a random gate selection");
  std::string set_name = "gshe16", sel_in, sel_out;
  double fraction = 0.1;
  camo->add_option("netlist", netlist)->required();
  camo->add_option("--set", set_name, "Function set")->check(CLI::IsMember([] {
    std::vector<std::string> n;
    for (const auto& s : cf::function_set_catalog()) n.push_back(s.name);
    return n;
  }()));
  camo->add_option("--fraction", fraction, "Fraction of eligible gates")->check(CLI::Range(0.0, 1.0));
  camo->add_option("--selection", sel_in, "Reuse a saved selection");
  camo->add_option("--save-selection", sel_out, "Save the selection");
  camo->add_option("-o,--out", out);
  camo->add_option("--sidecar", sidecar_out);

  auto* annotate = app.add_subcommand("annotate", "Mark gates probabilistic or polymorphic");
  std::string mode = "prob";
  double correctness = 0.99;
  annotate->add_option("netlist", netlist)->required();
  annotate->add_option("--key-sidecar", sidecar, "Sidecar of the input netlist");
  annotate->add_option("--mode", mode)->check(CLI::IsMember({"prob", "poly"}));
  annotate->add_option("--fraction", fraction, "Fraction of all gates")->check(CLI::Range(0.0, 1.0));
  annotate->add_option("--correctness", correctness)->check(CLI::Range(0.5, 1.0));
  annotate->add_option("-o,--out", out);
  annotate->add_option("--sidecar", sidecar_out);

  auto* simulate = app.add_subcommand("simulate", "Evaluate input patterns");
  std::vector<std::string> inputs;
  std::string key_text;
  uint64_t sim_samples = 0;
  simulate->add_option("netlist", netlist)->required();
  simulate->add_option("--key-sidecar", sidecar);
  simulate->add_option("--input", inputs, "Input pattern (binary, or 0x hex)")->required();
  simulate->add_option("--key", key_text, "Key (defaults to the correct key)");
  simulate->add_option("--samples", sim_samples, "Stochastic samples per input (0: deterministic only)");

  AttackFlags af;
  auto* attack = app.add_subcommand("attack", "Run an oracle-guided attack");
  std::string trace_out;
  attack->add_option("netlist", netlist)->required();
  attack->add_option("--key-sidecar", sidecar);
  attack->add_option("--trace", trace_out, "Write the per-iteration trace here");
  attack->add_option("-o,--out", out);
  af.add(attack);

  AttackFlags cf_attack;
  CampaignFlags cflags;
  auto* campaign = app.add_subcommand("campaign", "Repeated lock + annotate + attack runs");
  campaign->add_option("netlist", netlist)->required();
  campaign->add_option("--lock", cflags.lock)->check(CLI::IsMember({"keygates", "camo"}));
  campaign->add_option("--keys", cflags.keys)->check(CLI::PositiveNumber);
  campaign->add_option("--set", cflags.set);
  campaign->add_option("--camo-fraction", cflags.camo_fraction)->check(CLI::Range(0.0, 1.0));
  campaign->add_option("--behavior", cflags.behavior)->check(CLI::IsMember({"none", "prob", "poly"}));
  campaign->add_option("--behavior-fraction", cflags.behavior_fraction)->check(CLI::Range(0.0, 1.0));
  campaign->add_option("--correctness", cflags.correctness)->check(CLI::Range(0.5, 1.0));
  campaign->add_flag("--defended", cflags.defended, "Attack the repetition-defended oracle");
  campaign->add_option("--runs", cflags.runs)->check(CLI::PositiveNumber);
  campaign->add_option("--jobs", cflags.jobs)->check(CLI::PositiveNumber);
  campaign->add_option("--format", cflags.format)->check(CLI::IsMember(kFormats));
  campaign->add_option("-o,--out", out);
  cf_attack.add(campaign);

  HybridFlags hf;
  auto* hybrid = app.add_subcommand("hybrid", "Delay-aware GSHE replacement and full-chip cost");
  hybrid->add_option("netlist", netlist);
  hybrid->add_flag("--generate", hf.generate, "Use a generated skewed-path circuit");
  hybrid->add_option("--deep-paths", hf.gen.deep_paths);
  hybrid->add_option("--deep-depth", hf.gen.deep_depth);
  hybrid->add_option("--shallow-cones", hf.gen.shallow_cones);
  hybrid->add_option("--shallow-depth", hf.gen.shallow_depth);
  hybrid->add_option("--gen-inputs", hf.gen.inputs);
  hybrid->add_option("--delays", hf.delays, "Delay file: `function delay_ns` lines");
  hybrid->add_option("--primitive", hf.primitive)->check(CLI::IsMember({"intrinsic", "with_transducer", "obfuscated"}));
  hybrid->add_option("--save-selection", hf.selection_out);
  hybrid->add_flag("--list", hf.list, "Include the selected gate names");

  auto* adder = app.add_subcommand("adder-study", "Approximate ripple-carry adder case study");
  std::size_t width = 32, k = 10;
  bool flip_check = false;
  adder->add_option("--width", width)->check(CLI::Range(1, 64));
  adder->add_option("--k", k);
  adder->add_flag("--flip-check", flip_check, "Exhaustive adversarial-flip check (small widths)");

  auto* device = app.add_subcommand("device", "Evaluate the spin-Hall switch cost model");
  std::vector<double> currents{20e-6};
  std::string params;
  bool catalog = false;
  device->add_option("--current", currents, "Spin current(s) in A");
  device->add_option("--params", params, "Parameter file (`name = value` lines)");
  device->add_flag("--catalog-leakage", catalog, "Add the leakage that matches the catalog power");

  auto* report = app.add_subcommand("report", "Re-emit campaign reports in another format");
  std::vector<std::string> files;
  std::string rformat = "json-like";
  report->add_option("files", files)->required();
  report->add_option("--format", rformat)->check(CLI::IsMember(kFormats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*parse) return cmd_parse(netlist, out, unroll);
    if (*lock) return cmd_lock(netlist, keys, seed, out, sidecar_out);
    if (*camo) return cmd_camo(netlist, set_name, fraction, seed, sel_in, sel_out, out, sidecar_out);
    if (*annotate) return cmd_annotate(netlist, sidecar, mode, fraction, correctness, seed, out, sidecar_out);
    if (*simulate) return cmd_simulate(netlist, sidecar, inputs, key_text, sim_samples, seed);
    if (*attack) return cmd_attack(netlist, sidecar, af, seed, trace_out, out);
    if (*campaign) return cmd_campaign(netlist, cflags, cf_attack, seed, out);
    if (*hybrid) return cmd_hybrid(netlist, hf, seed);
    if (*adder) return cmd_adder(width, k, flip_check);
    if (*device) return cmd_device(currents, params, catalog);
    if (*report) return cmd_report(files, rformat);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "camoforge: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "camoforge: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
