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
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace camoforge::device {

/// Material and geometry constants of the spin-Hall switch, SI units.
///
/// Magnetization and anisotropy values are carried for completeness; the
/// closed-form model below does not read them.
struct DeviceParams {
  double nanomagnet_width = 15e-9;   // m
  double nanomagnet_length = 28e-9;  // m
  double nanomagnet_thickness = 2e-9;
  double rap = 1e-12;                // resistance-area product, ohm*m^2
  double tmr = 1.7;                  // tunneling magnetoresistance ratio
  double r_heavy_metal = 1e3;        // ohm
  double spin_hall_angle = 0.4;
  double heavy_metal_thickness = 1e-9;  // m
  double heavy_metal_resistivity = 5.6e-7;  // ohm*m
  double deterministic_current = 20e-6;     // A
  double ms_write = 1e6, ms_read = 5e5;     // A/m
  double ku_write = 2.5e4, ku_read = 5e3;   // J/m^3
  double leakage_power = 0.0;               // W, added to read_power()

  double area() const { return nanomagnet_width * nanomagnet_length; }
  double beta() const { return spin_hall_angle * (nanomagnet_width / heavy_metal_thickness); }

  void validate() const {
    auto positive = [](double v, const char* what) {
      if (!(v > 0)) throw std::invalid_argument(std::string(what) + " must be strictly positive");
    };
    positive(nanomagnet_width, "nanomagnet_width");
    positive(nanomagnet_length, "nanomagnet_length");
    positive(rap, "rap");
    positive(r_heavy_metal, "r_heavy_metal");
    positive(spin_hall_angle, "spin_hall_angle");
    positive(heavy_metal_thickness, "heavy_metal_thickness");
    positive(deterministic_current, "deterministic_current");
    if (!(tmr >= 0)) throw std::invalid_argument("tmr must be nonnegative");
    if (!(leakage_power >= 0)) throw std::invalid_argument("leakage_power must be nonnegative");
  }
};

struct Conductances {
  double parallel;       // G_P, siemens
  double antiparallel;   // G_AP, siemens
};

inline Conductances conductances(const DeviceParams& p) {
  p.validate();
  double gp = p.area() / p.rap;
  return {gp, gp / (1.0 + p.tmr)};
}

struct ReadoutVoltages {
  double v_out;
  double v_sup;
};

inline ReadoutVoltages readout_voltages(const DeviceParams& p, double spin_current) {
  if (!(spin_current >= 0)) throw std::invalid_argument("spin current must be nonnegative");
  auto [gp, gap] = conductances(p);
  if (gp == gap) throw std::domain_error("zero TMR: read-out infeasible (G_P == G_AP)");
  double beta = p.beta();
  double v_out = spin_current * p.r_heavy_metal / beta;
  double v_sup = (spin_current / beta) * (1.0 + p.r_heavy_metal * (gp + gap)) / (gp - gap);
  return {v_out, v_sup};
}

/// Read-out power of the equivalent circuit (heavy-metal resistor plus the two
/// MTJ branches), plus the optional leakage constant.
inline double read_power(const DeviceParams& p, double spin_current) {
  auto [gp, gap] = conductances(p);
  auto [v_out, v_sup] = readout_voltages(p, spin_current);
  double dyn = v_out * v_out / p.r_heavy_metal + (v_sup - v_out) * (v_sup - v_out) * gp +
               (v_out + v_sup) * (v_out + v_sup) * gap;
  return spin_current > 0 ? dyn + p.leakage_power : 0.0;
}

/// Leakage that lifts the read-out power at the deterministic current to the
/// 0.2125 uW catalog figure. Off by default.
inline double catalog_leakage(DeviceParams p = {}) {
  p.leakage_power = 0;
  return 0.2125e-6 - read_power(p, p.deterministic_current);
}

inline double energy(double power, double delay) {
  if (!(power >= 0) || !(delay >= 0)) throw std::invalid_argument("energy needs nonnegative power and delay");
  return power * delay;
}

/// Spin current delivered to the write nanomagnet by one input stage driven at
/// `voltage`: beta * (G_P - G_AP) * V / (1 + r (G_P + G_AP)). Not used by the
/// gate-level simulator, which works with correctness probabilities.
inline double stage_spin_current(const DeviceParams& p, double voltage) {
  auto [gp, gap] = conductances(p);
  return p.beta() * (gp - gap) * voltage / (1.0 + p.r_heavy_metal * (gp + gap));
}

// Piecewise-linear correctness-vs-current table.
class FlipCalibration {
 public:
  FlipCalibration(std::vector<std::pair<double, double>> points, double deterministic_current = 20e-6)
      : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("calibration table is empty");
    std::sort(points_.begin(), points_.end());
    bool has_det = false;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      auto [cur, p] = points_[i];
      if (!(cur >= 0)) throw std::invalid_argument("calibration current must be nonnegative");
      if (!(p >= 0.5 && p <= 1.0)) throw std::invalid_argument("calibration correctness must lie in [0.5, 1]");
      if (i > 0 && cur == points_[i - 1].first) throw std::invalid_argument("calibration currents must be distinct");
      if (i > 0 && p < points_[i - 1].second) throw std::invalid_argument("calibration is not monotone in current");
      if (cur == deterministic_current && p == 1.0) has_det = true;
    }
    if (!has_det) throw std::invalid_argument("calibration must contain (deterministic current, 1.0)");
  }

  // Default table: only the deterministic point, 0.5 at zero current.
  static FlipCalibration default_table() { return FlipCalibration({{0.0, 0.5}, {20e-6, 1.0}}); }

  const std::vector<std::pair<double, double>>& points() const { return points_; }

  double correctness(double current) const {
    if (current <= points_.front().first) return std::clamp(points_.front().second, 0.5, 1.0);
    if (current >= points_.back().first) return std::clamp(points_.back().second, 0.5, 1.0);
    auto hi = std::upper_bound(points_.begin(), points_.end(), std::make_pair(current, 2.0));
    auto lo = hi - 1;
    if (lo->first == current) return lo->second;
    double t = (current - lo->first) / (hi->first - lo->first);
    return std::clamp(lo->second + t * (hi->second - lo->second), 0.5, 1.0);
  }

 private:
  std::vector<std::pair<double, double>> points_;
};

inline double flip_probability(const FlipCalibration& cal, double spin_current) {
  return cal.correctness(spin_current);
}

struct OperatingPoint {
  double spin_current;
  double correctness;
  double mean_delay;
  double power;
};

inline OperatingPoint deterministic_point() { return {20e-6, 1.0, 1.55e-9, 0.2125e-6}; }

// Sub-critical point; its correctness comes from configuration.
inline OperatingPoint probabilistic_point(double correctness = 0.9) { return {15e-6, correctness, 4.5e-9, 0.12e-6}; }

// Power of a gate operated at 90% output accuracy.
inline constexpr double kPower90PercentAccuracy = 0.1071e-6;

enum class PrimitiveKind { kIntrinsic, kWithTransducer, kObfuscatedWithMuxes };

struct PrimitiveCost {
  PrimitiveKind kind;
  double energy;  // J
  double power;   // W
  double delay;   // s
  double area;    // m^2
};

inline PrimitiveCost primitive_cost(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::kIntrinsic: return {kind, 0.33e-15, 0.2125e-6, 1.55e-9, 0.0016e-12};
    case PrimitiveKind::kWithTransducer: return {kind, 0.45e-15, 0.2525e-6, 1.8e-9, 0.003e-12};
    case PrimitiveKind::kObfuscatedWithMuxes: return {kind, 0.49e-15, 0.2673e-6, 1.83e-9, 0.029e-12};
  }
  throw std::invalid_argument("unknown primitive kind");
}

inline const char* primitive_name(PrimitiveKind k) {
  switch (k) {
    case PrimitiveKind::kIntrinsic: return "intrinsic";
    case PrimitiveKind::kWithTransducer: return "with_transducer";
    case PrimitiveKind::kObfuscatedWithMuxes: return "obfuscated";
  }
  return "?";
}

inline PrimitiveKind primitive_from_name(const std::string& s) {
  if (s == "intrinsic") return PrimitiveKind::kIntrinsic;
  if (s == "with_transducer" || s == "transducer") return PrimitiveKind::kWithTransducer;
  if (s == "obfuscated") return PrimitiveKind::kObfuscatedWithMuxes;
  throw std::invalid_argument("unknown primitive kind '" + s + "'");
}

// Relative overhead (a - b) / b.
inline double overhead(double a, double b) { return (a - b) / b; }

// Flat `key = value` (or `key value`) file; `#` starts a comment. Unknown keys are errors.
inline DeviceParams parse_params(std::istream& in) {
  DeviceParams p;
  std::map<std::string, double*> fields = {
      {"nanomagnet_width", &p.nanomagnet_width},
      {"nanomagnet_length", &p.nanomagnet_length},
      {"nanomagnet_thickness", &p.nanomagnet_thickness},
      {"rap", &p.rap},
      {"tmr", &p.tmr},
      {"r_heavy_metal", &p.r_heavy_metal},
      {"spin_hall_angle", &p.spin_hall_angle},
      {"heavy_metal_thickness", &p.heavy_metal_thickness},
      {"heavy_metal_resistivity", &p.heavy_metal_resistivity},
      {"deterministic_current", &p.deterministic_current},
      {"ms_write", &p.ms_write},
      {"ms_read", &p.ms_read},
      {"ku_write", &p.ku_write},
      {"ku_read", &p.ku_read},
      {"leakage_power", &p.leakage_power},
  };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& c : line) if (c == '=') c = ' ';
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    double value;
    if (!(ls >> value)) throw std::invalid_argument("line " + std::to_string(line_no) + ": missing value for '" + key + "'");
    auto it = fields.find(key);
    if (it == fields.end()) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown parameter '" + key + "'");
    *it->second = value;
  }
  p.validate();
  return p;
}

inline std::string format_params(const DeviceParams& p) {
  std::ostringstream o;
  o.precision(17);
  o << "nanomagnet_width = " << p.nanomagnet_width << "\n"
    << "nanomagnet_length = " << p.nanomagnet_length << "\n"
    << "nanomagnet_thickness = " << p.nanomagnet_thickness << "\n"
    << "rap = " << p.rap << "\n"
    << "tmr = " << p.tmr << "\n"
    << "r_heavy_metal = " << p.r_heavy_metal << "\n"
    << "spin_hall_angle = " << p.spin_hall_angle << "\n"
    << "heavy_metal_thickness = " << p.heavy_metal_thickness << "\n"
    << "heavy_metal_resistivity = " << p.heavy_metal_resistivity << "\n"
    << "deterministic_current = " << p.deterministic_current << "\n"
    << "ms_write = " << p.ms_write << "\n"
    << "ms_read = " << p.ms_read << "\n"
    << "ku_write = " << p.ku_write << "\n"
    << "ku_read = " << p.ku_read << "\n"
    << "leakage_power = " << p.leakage_power << "\n";
  return o.str();
}

// Calibration file: one `<current A> <correctness>` pair per line.
inline FlipCalibration parse_calibration(std::istream& in, double deterministic_current = 20e-6) {
  std::vector<std::pair<double, double>> pts;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    for (char& c : line) if (c == ',') c = ' ';
    std::istringstream ls(line);
    double cur, p;
    if (!(ls >> cur)) continue;
    if (!(ls >> p)) throw std::invalid_argument("calibration line without correctness: " + line);
    pts.emplace_back(cur, p);
  }
  return FlipCalibration(std::move(pts), deterministic_current);
}

}  // namespace camoforge::device
