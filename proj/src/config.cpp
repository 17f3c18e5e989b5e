#include "spinsim/config.hpp"

#include <fstream>
#include <sstream>

#include "spinsim/units.hpp"
#include "spinsim/version.hpp"

#include <json.hpp>

namespace spinsim {

namespace {

using nlohmann::json;

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double quantity(const json& j, Dimension dim, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_string())
    throw ConfigError(what + ": expected [value, \"unit\"]");
  return convert(j[0].get<double>(), j[1].get<std::string>(), dim);
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
  }
}

MagneticField parse_field(const json& j) {
  reject_unknown(j, {"cartesian", "polar"}, "field");
  if (j.contains("cartesian") == j.contains("polar"))
    throw ConfigError("field: exactly one of 'cartesian' or 'polar' is required");
  if (j.contains("cartesian")) {
    const auto& c = j["cartesian"];
    reject_unknown(c, {"bx", "by", "bz"}, "field.cartesian");
    return MagneticField::cartesian(quantity(c.at("bx"), Dimension::Field, "field.bx"),
                                    quantity(c.at("by"), Dimension::Field, "field.by"),
                                    quantity(c.at("bz"), Dimension::Field, "field.bz"));
  }
  const auto& p = j["polar"];
  reject_unknown(p, {"magnitude", "theta", "phi"}, "field.polar");
  return MagneticField::polar(quantity(p.at("magnitude"), Dimension::Field, "field.magnitude"),
                              quantity(p.at("theta"), Dimension::Angle, "field.theta"),
                              p.contains("phi") ? quantity(p["phi"], Dimension::Angle, "field.phi") : 0.0);
}

PhysicalConstants parse_constants(const json& j) {
  if (j.is_string()) return constants_preset(j.get<std::string>());
  reject_unknown(j, {"preset", "mu_e", "mu_n", "h", "d_gs"}, "constants");
  PhysicalConstants c;
  if (j.contains("preset")) c = constants_preset(j["preset"].get<std::string>());
  if (j.contains("mu_e")) c.mu_e = quantity(j["mu_e"], Dimension::MagneticMoment, "constants.mu_e");
  if (j.contains("mu_n")) c.mu_n = quantity(j["mu_n"], Dimension::MagneticMoment, "constants.mu_n");
  if (j.contains("h")) c.h = quantity(j["h"], Dimension::Action, "constants.h");
  if (j.contains("d_gs")) c.d_gs = quantity(j["d_gs"], Dimension::Frequency, "constants.d_gs");
  c.validate();
  return c;
}

HyperfineTensor parse_hyperfine(const json& j) {
  reject_unknown(j, {"row_major", "unit"}, "hyperfine");
  if (!j.contains("row_major") || !j["row_major"].is_array() || j["row_major"].size() != 9)
    throw ConfigError("hyperfine: 'row_major' must be an array of 9 numbers");
  if (!j.contains("unit")) throw ConfigError("hyperfine: missing 'unit'");
  const double factor = unit_factor(j["unit"].get<std::string>(), Dimension::Frequency);
  HyperfineTensor t;
  for (int i = 0; i < 9; ++i) {
    if (!j["row_major"][i].is_number()) throw ConfigError("hyperfine: entries must be numbers");
    t(i / 3, i % 3) = j["row_major"][i].get<double>() * factor;
  }
  t.validate();
  return t;
}

SweepSpec parse_sweep(const json& j, Dimension dim) {
  reject_unknown(j, {"start", "stop", "points", "branch_span"}, "sweep");
  SweepSpec s;
  if (!j.contains("points") || !j["points"].is_number_integer())
    throw ConfigError("sweep: integer 'points' is required");
  s.points = j["points"].get<int>();
  if (s.points < 2) throw ConfigError("sweep: points must be >= 2");
  if (j.contains("branch_span")) {
    if (j.contains("start") || j.contains("stop"))
      throw ConfigError("sweep: 'branch_span' excludes 'start'/'stop'");
    s.branch_span = quantity(j["branch_span"], Dimension::Frequency, "sweep.branch_span");
    return s;
  }
  s.start = quantity(j.at("start"), dim, "sweep.start");
  s.stop = quantity(j.at("stop"), dim, "sweep.stop");
  if (!(s.stop > s.start)) throw ConfigError("sweep: stop must exceed start");
  return s;
}

}  // namespace

RunConfig::RunConfig() : seed(kDefaultSeed) { params = params_preset("paper-nv"); }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config '" + path + "' line " + std::to_string(line) + " column " +
                      std::to_string(col) + ": " + e.what());
  }

  reject_unknown(j, {"params", "experiment", "pulse", "dephasing", "seed", "output"}, "config");
  RunConfig cfg;

  if (!j.contains("params")) throw ConfigError("config: missing 'params'");
  {
    const auto& p = j["params"];
    reject_unknown(p, {"preset", "constants", "field", "hyperfine"}, "params");
    if (p.contains("preset")) {
      cfg.preset_name = p["preset"].get<std::string>();
      cfg.params = params_preset(*cfg.preset_name);
      if (p.contains("hyperfine"))
        throw ConfigError("params: a preset already fixes the hyperfine tensor");
      if (p.contains("constants")) cfg.params.constants = parse_constants(p["constants"]);
      if (p.contains("field")) cfg.params.field = parse_field(p["field"]);
    } else {
      if (!p.contains("field") || !p.contains("hyperfine"))
        throw ConfigError("params: need 'preset' or both 'field' and 'hyperfine'");
      if (p.contains("constants")) cfg.params.constants = parse_constants(p["constants"]);
      cfg.params.field = parse_field(p["field"]);
      cfg.params.hyperfine = parse_hyperfine(p["hyperfine"]);
    }
    cfg.params.validate();
  }

  if (j.contains("experiment")) {
    const auto& e = j["experiment"];
    reject_unknown(e, {"kind", "sweep", "steps", "p", "q"}, "experiment");
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "odmr") {
      cfg.kind = ExperimentKind::Odmr;
      cfg.sweep = parse_sweep(e.at("sweep"), Dimension::Frequency);
    } else if (kind == "echo") {
      cfg.kind = ExperimentKind::Echo;
      cfg.sweep = parse_sweep(e.at("sweep"), Dimension::Time);
    } else if (kind == "store") {
      cfg.kind = ExperimentKind::Store;
      cfg.sweep = parse_sweep(e.at("sweep"), Dimension::Time);
    } else if (kind == "polarize") {
      cfg.kind = ExperimentKind::Polarize;
      if (e.contains("steps")) {
        cfg.polarize_steps = e["steps"].get<int>();
        if (cfg.polarize_steps < 1) throw ConfigError("experiment: steps must be >= 1");
      }
    } else if (kind == "transfer") {
      cfg.kind = ExperimentKind::Transfer;
      auto amp = [&](const char* key) {
        const auto& a = e.at(key);
        if (!a.is_array() || a.size() != 2) throw ConfigError("experiment: amplitudes are [re, im]");
        return cplx(a[0].get<double>(), a[1].get<double>());
      };
      cfg.transfer_p = amp("p");
      cfg.transfer_q = amp("q");
      const double n2 = std::norm(cfg.transfer_p) + std::norm(cfg.transfer_q);
      if (std::abs(n2 - 1.0) > 1e-9)
        throw ConfigError("experiment: |p|^2 + |q|^2 must equal 1");
    } else {
      throw ConfigError("experiment: unknown kind '" + kind + "'");
    }
  }

  if (j.contains("pulse")) {
    const auto& p = j["pulse"];
    reject_unknown(p, {"rabi", "duration", "ideal"}, "pulse");
    if (p.contains("rabi")) cfg.pulse.rabi = quantity(p["rabi"], Dimension::Frequency, "pulse.rabi");
    if (p.contains("duration"))
      cfg.pulse.duration = quantity(p["duration"], Dimension::Time, "pulse.duration");
    if (p.contains("ideal")) cfg.pulse.ideal = p["ideal"].get<bool>();
    if (cfg.pulse.rabi < 0 || cfg.pulse.duration < 0)
      throw ConfigError("pulse: rabi and duration must be >= 0");
  }

  if (j.contains("dephasing")) {
    const auto& d = j["dephasing"];
    reject_unknown(d, {"electron_sigma", "nuclear_sigma", "samples"}, "dephasing");
    DephasingSpec spec;
    if (d.contains("electron_sigma"))
      spec.electron_sigma = quantity(d["electron_sigma"], Dimension::Frequency, "dephasing.electron_sigma");
    if (d.contains("nuclear_sigma"))
      spec.nuclear_sigma = quantity(d["nuclear_sigma"], Dimension::Frequency, "dephasing.nuclear_sigma");
    if (d.contains("samples")) spec.samples = d["samples"].get<int>();
    spec.validate();
    cfg.dephasing = spec;
  }

  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output")) cfg.output = j["output"].get<std::string>();
  if (cfg.dephasing) cfg.dephasing->seed = 0;  // the run seed is authoritative
  return cfg;
}

std::string params_to_json(const SystemParams& params) {
  json row = json::array();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) row.push_back(params.hyperfine(i, k));
  json j = {
      {"constants",
       {{"mu_e", {params.constants.mu_e, "J/T"}},
        {"mu_n", {params.constants.mu_n, "J/T"}},
        {"h", {params.constants.h, "J*s"}},
        {"d_gs", {params.constants.d_gs, "Hz"}}}},
      {"field",
       {{"cartesian",
         {{"bx", {params.field.bx, "T"}},
          {"by", {params.field.by, "T"}},
          {"bz", {params.field.bz, "T"}}}}}},
      {"hyperfine", {{"row_major", row}, {"unit", "Hz"}}},
  };
  return j.dump(2);
}

}  // namespace spinsim
