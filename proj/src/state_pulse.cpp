#include <fstream>
#include <sstream>

#include "spinsim/pulse.hpp"
#include "spinsim/state.hpp"
#include "spinsim/units.hpp"

#include <json.hpp>

namespace spinsim {

void SpinState::validate() const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw NumericError("spin state: density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
    throw NumericError("spin state: trace != 1");
  Eigen::SelfAdjointEigenSolver<Matrix6cd> s(rho);
  if (s.eigenvalues().minCoeff() < -1e-9)
    throw NumericError("spin state: negative eigenvalue");
}

void PulseSequence::validate() const {
  if (elements.empty()) throw ConfigError("pulse sequence: empty");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const bool last = i + 1 == elements.size();
    if (std::holds_alternative<Readout>(elements[i]) && !last)
      throw ConfigError("pulse sequence: element " + std::to_string(i) + " is a non-final readout");
    if (const auto* mw = std::get_if<MwPulse>(&elements[i])) {
      if (mw->duration < 0 || mw->rabi < 0 || !std::isfinite(mw->frequency))
        throw ConfigError("pulse sequence: element " + std::to_string(i) + " has invalid MW parameters");
    }
    if (const auto* w = std::get_if<Wait>(&elements[i])) {
      if (w->duration < 0)
        throw ConfigError("pulse sequence: element " + std::to_string(i) + " has negative duration");
    }
  }
  if (!std::holds_alternative<Readout>(elements.back()))
    throw ConfigError("pulse sequence: element " + std::to_string(elements.size() - 1) +
                      " must be the final readout");
}

void DephasingSpec::validate() const {
  if (electron_sigma < 0 || nuclear_sigma < 0)
    throw ConfigError("dephasing: sigmas must be >= 0");
  if (samples < 1) throw ConfigError("dephasing: samples must be >= 1");
}

namespace {

using nlohmann::json;

double quantity(const json& j, Dimension dim, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_string())
    throw ConfigError(what + ": expected [value, \"unit\"]");
  return convert(j[0].get<double>(), j[1].get<std::string>(), dim);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
  }
}

}  // namespace

PulseSequence load_sequence(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sequence file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("sequence file '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("sequence file: top level must be an object");
  reject_unknown(j, {"elements"}, "sequence file");
  if (!j.contains("elements") || !j["elements"].is_array())
    throw ConfigError("sequence file: missing 'elements' array");

  PulseSequence seq;
  std::size_t i = 0;
  for (const auto& e : j["elements"]) {
    const std::string ctx = "sequence element " + std::to_string(i++);
    if (!e.is_object() || !e.contains("type"))
      throw ConfigError(ctx + ": expected an object with a 'type' key");
    const std::string type = e["type"].get<std::string>();
    if (type == "optical_init") {
      reject_unknown(e, {"type"}, ctx);
      seq.elements.emplace_back(OpticalInit{});
    } else if (type == "mw_pulse") {
      reject_unknown(e, {"type", "frequency", "rabi", "phase", "duration"}, ctx);
      MwPulse p;
      p.frequency = quantity(e.at("frequency"), Dimension::Frequency, ctx + ".frequency");
      p.rabi = quantity(e.at("rabi"), Dimension::Frequency, ctx + ".rabi");
      p.phase = e.contains("phase") ? quantity(e["phase"], Dimension::Angle, ctx + ".phase") : 0.0;
      p.duration = quantity(e.at("duration"), Dimension::Time, ctx + ".duration");
      seq.elements.emplace_back(p);
    } else if (type == "wait") {
      reject_unknown(e, {"type", "duration"}, ctx);
      seq.elements.emplace_back(Wait{quantity(e.at("duration"), Dimension::Time, ctx + ".duration")});
    } else if (type == "readout") {
      reject_unknown(e, {"type"}, ctx);
      seq.elements.emplace_back(Readout{});
    } else {
      throw ConfigError(ctx + ": unknown element type '" + type + "'");
    }
  }
  seq.validate();
  return seq;
}

std::string sequence_to_json(const PulseSequence& seq) {
  json elems = json::array();
  for (const auto& e : seq.elements) {
    if (std::holds_alternative<OpticalInit>(e)) {
      elems.push_back({{"type", "optical_init"}});
    } else if (const auto* mw = std::get_if<MwPulse>(&e)) {
      elems.push_back({{"type", "mw_pulse"},
                       {"frequency", {mw->frequency, "Hz"}},
                       {"rabi", {mw->rabi, "Hz"}},
                       {"phase", {mw->phase, "rad"}},
                       {"duration", {mw->duration, "s"}}});
    } else if (const auto* w = std::get_if<Wait>(&e)) {
      elems.push_back({{"type", "wait"}, {"duration", {w->duration, "s"}}});
    } else {
      elems.push_back({{"type", "readout"}});
    }
  }
  return json{{"elements", elems}}.dump(2);
}

}  // namespace spinsim
