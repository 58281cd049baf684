#include "spdegal/config.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <json.hpp>

#include "spdegal/errors.hpp"
#include "spdegal/io.hpp"

namespace spdegal {

using json = nlohmann::json;

std::string_view to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::verify: return "verify";
    case Command::converge: return "converge";
    case Command::moments: return "moments";
    case Command::stability: return "stability";
    case Command::order: return "order";
    case Command::globality: return "globality";
  }
  return "?";
}

namespace {

std::optional<Command> command_from_string(const std::string& s) {
  for (Command c : {Command::simulate, Command::verify, Command::converge, Command::moments,
                    Command::stability, Command::order, Command::globality}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

class Reader {
 public:
  explicit Reader(bool strict) : strict_(strict) {}

  std::vector<std::string> errors;

  void error(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  // Returns the object at `key` or nullptr, reporting a non-object value.
  const json* section(const json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) return nullptr;
    if (!it->is_object()) {
      error(path, "expected an object");
      return nullptr;
    }
    return &*it;
  }

  void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!strict_) return;
    const std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [k, v] : obj.items()) {
      if (!known.count(k)) error(join(path, k), "unknown key");
    }
  }

  void number(const json& obj, const char* key, const std::string& path, double& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number()) return error(join(path, key), "expected a number");
    out = it->get<double>();
  }

  template <class Int>
  void integer(const json& obj, const char* key, const std::string& path, Int& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_number_integer()) return error(join(path, key), "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (!it->is_number_unsigned()) return error(join(path, key), "expected a non-negative integer");
      out = static_cast<Int>(it->get<std::uint64_t>());
    } else {
      out = static_cast<Int>(it->get<std::int64_t>());
    }
  }

  void string(const json& obj, const char* key, const std::string& path, std::string& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_string()) return error(join(path, key), "expected a string");
    out = it->get<std::string>();
  }

  // A number broadcasts to a one-element list.
  void numbers(const json& obj, const char* key, const std::string& path, std::vector<double>& out,
               bool allow_scalar) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (allow_scalar && it->is_number()) {
      out = {it->get<double>()};
      return;
    }
    if (!it->is_array()) return error(join(path, key), "expected an array of numbers");
    std::vector<double> v;
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number()) {
        return error(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
      }
      v.push_back((*it)[i].get<double>());
    }
    out = std::move(v);
  }

  void integers(const json& obj, const char* key, const std::string& path, std::vector<int>& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return;
    if (!it->is_array()) return error(join(path, key), "expected an array of integers");
    std::vector<int> v;
    for (std::size_t i = 0; i < it->size(); ++i) {
      if (!(*it)[i].is_number_integer()) {
        return error(join(path, key) + "[" + std::to_string(i) + "]", "expected an integer");
      }
      v.push_back((*it)[i].get<int>());
    }
    out = std::move(v);
  }

  bool mode(const json& v, const std::string& path, Mode& out) {
    if (!v.is_array() || v.size() < 2 || v.size() > 3) {
      error(path, "expected a wavevector of 2 or 3 integers");
      return false;
    }
    out = {0, 0, 0};
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        error(path, "expected a wavevector of 2 or 3 integers");
        return false;
      }
      out[i] = v[i].get<int>();
    }
    return true;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

 private:
  bool strict_;
};

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void read_model(Reader& r, const json& root, RunConfig& cfg) {
  const json* m = r.section(root, "model", "model");
  if (!m) {
    cfg.model = default_model(ModelKind::cbf, 2);
    return;
  }
  r.allow(*m, "model",
          {"kind", "dimension", "cutoff", "nu", "kappa", "kappa_theta", "nu_v", "gamma", "grad_div",
           "chi", "darcy", "forchheimer", "exponent", "coriolis", "buoyancy", "background"});
  std::string kind = "cbf";
  int dim = 2;
  r.string(*m, "kind", "model", kind);
  r.integer(*m, "dimension", "model", dim);
  ModelKind mk = ModelKind::cbf;
  try {
    mk = model_kind_from_string(kind);
  } catch (const ConfigError& e) {
    r.error("model.kind", e.what());
  }
  if (dim != 2 && dim != 3) {
    r.error("model.dimension", "must be 2 or 3");
    dim = 2;
  }
  ModelSpec& s = cfg.model;
  s = default_model(mk, dim);
  r.integer(*m, "cutoff", "model", cfg.cutoff);
  r.number(*m, "nu", "model", s.nu);
  r.number(*m, "kappa", "model", s.kappa);
  r.number(*m, "kappa_theta", "model", s.kappa_theta);
  r.number(*m, "nu_v", "model", s.nu_v);
  r.number(*m, "gamma", "model", s.gamma);
  r.number(*m, "grad_div", "model", s.grad_div);
  r.number(*m, "chi", "model", s.chi);
  r.number(*m, "darcy", "model", s.darcy);
  r.number(*m, "forchheimer", "model", s.forchheimer);
  r.number(*m, "exponent", "model", s.exponent);
  r.number(*m, "coriolis", "model", s.coriolis);
  std::vector<double> e;
  r.numbers(*m, "buoyancy", "model", e, false);
  if (!e.empty()) {
    if (e.size() != static_cast<std::size_t>(dim)) {
      r.error("model.buoyancy", "expected " + std::to_string(dim) + " components");
    } else {
      for (int i = 0; i < dim; ++i) s.buoyancy[i] = e[i];
    }
  }
  if (const auto it = m->find("background"); it != m->end()) {
    if (!it->is_array()) {
      r.error("model.background", "expected an array of {k, amplitude} objects");
    } else {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string p = "model.background[" + std::to_string(i) + "]";
        const json& b = (*it)[i];
        if (!b.is_object()) {
          r.error(p, "expected an object");
          continue;
        }
        r.allow(b, p, {"k", "amplitude"});
        CosineMode cm;
        if (!b.contains("k")) {
          r.error(p + ".k", "missing");
          continue;
        }
        if (!r.mode(b["k"], p + ".k", cm.k)) continue;
        r.number(b, "amplitude", p, cm.amplitude);
        s.background.push_back(cm);
      }
    }
  }
}

void read_noise(Reader& r, const json& root, RunConfig& cfg) {
  const json* n = r.section(root, "noise", "noise");
  if (!n) return;
  r.allow(*n, "noise", {"directions", "sigma", "gain", "fields"});
  r.integer(*n, "directions", "noise", cfg.noise.directions);
  r.numbers(*n, "sigma", "noise", cfg.noise.sigma, true);
  r.numbers(*n, "gain", "noise", cfg.noise.gain, true);
  if (const auto it = n->find("fields"); it != n->end()) {
    if (!it->is_array()) {
      r.error("noise.fields", "expected an array of field names");
    } else {
      for (const auto& f : *it) {
        if (!f.is_string()) {
          r.error("noise.fields", "expected an array of field names");
          break;
        }
        cfg.noise.fields.push_back(f.get<std::string>());
      }
    }
  }
}

void read_integrator(Reader& r, const json& root, RunConfig& cfg) {
  const json* g = r.section(root, "integrator", "integrator");
  if (!g) return;
  r.allow(*g, "integrator",
          {"scheme", "dt", "horizon", "level_radius", "state_stride", "halt_above"});
  std::string scheme(to_string(cfg.integrator.scheme));
  r.string(*g, "scheme", "integrator", scheme);
  try {
    cfg.integrator.scheme = scheme_from_string(scheme);
  } catch (const ConfigError& e) {
    r.error("integrator.scheme", e.what());
  }
  r.number(*g, "dt", "integrator", cfg.integrator.dt);
  r.number(*g, "horizon", "integrator", cfg.integrator.horizon);
  r.integer(*g, "level_radius", "integrator", cfg.level_radius);
  r.integer(*g, "state_stride", "integrator", cfg.integrator.state_stride);
  r.number(*g, "halt_above", "integrator", cfg.integrator.halt_above);
}

void read_initial(Reader& r, const json& root, RunConfig& cfg) {
  const json* i = r.section(root, "initial", "initial");
  if (!i) return;
  r.allow(*i, "initial", {"kind", "seed", "decay", "max_mu", "norm", "modes", "path"});
  InitialConfig& ic = cfg.initial;
  r.string(*i, "kind", "initial", ic.kind);
  r.integer(*i, "seed", "initial", ic.seed);
  r.number(*i, "decay", "initial", ic.decay);
  r.number(*i, "max_mu", "initial", ic.max_mu);
  r.number(*i, "norm", "initial", ic.norm);
  r.string(*i, "path", "initial", ic.path);
  if (const auto it = i->find("modes"); it != i->end()) {
    if (!it->is_array()) {
      r.error("initial.modes", "expected an array of mode objects");
      return;
    }
    for (std::size_t j = 0; j < it->size(); ++j) {
      const std::string p = "initial.modes[" + std::to_string(j) + "]";
      const json& e = (*it)[j];
      if (!e.is_object()) {
        r.error(p, "expected an object");
        continue;
      }
      r.allow(e, p, {"field", "component", "k", "re", "im"});
      ModeEntry me;
      r.string(e, "field", p, me.field);
      r.integer(e, "component", p, me.component);
      r.number(e, "re", p, me.re);
      r.number(e, "im", p, me.im);
      if (!e.contains("k")) {
        r.error(p + ".k", "missing");
        continue;
      }
      if (!r.mode(e["k"], p + ".k", me.k)) continue;
      ic.modes.push_back(me);
    }
  }
}

void read_experiment(Reader& r, const json& root, RunConfig& cfg) {
  if (const json* e = r.section(root, "ensemble", "ensemble")) {
    r.allow(*e, "ensemble", {"replicates"});
    r.integer(*e, "replicates", "ensemble", cfg.replicates);
  }
  if (const json* o = r.section(root, "output", "output")) {
    r.allow(*o, "output", {"dir"});
    r.string(*o, "dir", "output", cfg.out_dir);
  }
  const json* x = r.section(root, "experiment", "experiment");
  if (!x) return;
  r.allow(*x, "experiment",
          {"samples", "radii", "p", "deltas", "refinements", "paths", "cap", "thresholds", "M",
           "exit_times"});
  ExperimentConfig& ec = cfg.experiment;
  r.integer(*x, "samples", "experiment", ec.samples);
  r.integers(*x, "radii", "experiment", ec.radii);
  r.integer(*x, "p", "experiment", ec.p);
  r.numbers(*x, "deltas", "experiment", ec.deltas, false);
  r.integer(*x, "refinements", "experiment", ec.refinements);
  r.integer(*x, "paths", "experiment", ec.paths);
  r.number(*x, "cap", "experiment", ec.cap);
  r.numbers(*x, "thresholds", "experiment", ec.thresholds, false);
  r.number(*x, "M", "experiment", ec.M);
  r.numbers(*x, "exit_times", "experiment", ec.exit_times, false);
}

void check_semantics(Reader& r, const RunConfig& cfg) {
  for (const auto& e : validation_errors(cfg.model)) r.errors.push_back(e);
  if (cfg.cutoff < 1) r.error("model.cutoff", "must be >= 1");
  if (cfg.level_radius < 0 || cfg.level_radius > cfg.cutoff * 2) {
    r.error("integrator.level_radius", "must lie in [0, " + std::to_string(cfg.cutoff * 2) + "]");
  }
  if (cfg.replicates < 1) r.error("ensemble.replicates", "must be >= 1");
  if (cfg.out_dir.empty()) r.error("output.dir", "must not be empty");

  const NoiseConfig& nc = cfg.noise;
  const std::size_t K = nc.directions;
  if (nc.sigma.size() != 1 && nc.sigma.size() != K) {
    r.error("noise.sigma", "expected one value or one per direction");
  }
  if (nc.gain.size() != 1 && nc.gain.size() != K) {
    r.error("noise.gain", "expected one value or one per direction");
  }

  const InitialConfig& ic = cfg.initial;
  static const std::set<std::string> kinds{"random", "zero", "modes", "snapshot"};
  if (!kinds.count(ic.kind)) r.error("initial.kind", "must be random, zero, modes or snapshot");
  if (ic.kind == "snapshot" && ic.path.empty()) r.error("initial.path", "required for a snapshot");
  if (ic.kind == "random" && !(ic.norm >= 0.0 && std::isfinite(ic.norm))) {
    r.error("initial.norm", "must be >= 0 and finite");
  }
  if (!std::isfinite(ic.decay)) r.error("initial.decay", "must be finite");
  if (!(ic.max_mu >= 0.0)) r.error("initial.max_mu", "must be >= 0");

  const ExperimentConfig& ec = cfg.experiment;
  if (ec.samples < 1) r.error("experiment.samples", "must be >= 1");
  if (ec.radii.empty()) r.error("experiment.radii", "must not be empty");
  for (std::size_t i = 0; i < ec.radii.size(); ++i) {
    if (ec.radii[i] < 1 || (i > 0 && ec.radii[i] <= ec.radii[i - 1])) {
      r.error("experiment.radii", "must be positive and strictly increasing");
      break;
    }
  }
  if (ec.p != 4 && ec.p != 6 && ec.p != 8) r.error("experiment.p", "must be 4, 6 or 8");
  for (double d : ec.deltas) {
    if (!(d >= 0.0) || !std::isfinite(d)) r.error("experiment.deltas", "must be >= 0 and finite");
  }
  if (ec.refinements < 1) r.error("experiment.refinements", "must be >= 1");
  if (ec.paths < 1) r.error("experiment.paths", "must be >= 1");
  if (!(ec.cap > 0.0)) r.error("experiment.cap", "must be positive");
  if (!(ec.M > 0.0) || !std::isfinite(ec.M)) r.error("experiment.M", "must be positive and finite");
  for (double t : ec.thresholds) {
    if (!(t > 0.0)) r.error("experiment.thresholds", "must be positive");
  }
  for (double t : ec.exit_times) {
    if (!(t > 0.0) || t > cfg.integrator.horizon) {
      r.error("experiment.exit_times", "must lie in (0, horizon]");
    }
  }
  if (!r.errors.empty()) return;

  // Checks that need the assembled operators.
  try {
    const auto basis = make_basis(cfg);
    const EvolutionOperators ops(cfg.model, basis);
    std::set<std::string> names;
    for (const auto& f : ops.layout()) names.insert(f.name);
    for (const auto& f : nc.fields) {
      if (!names.count(f)) r.error("noise.fields", "unknown field '" + f + "'");
    }
    for (std::size_t j = 0; j < ic.modes.size(); ++j) {
      const ModeEntry& me = ic.modes[j];
      const std::string p = "initial.modes[" + std::to_string(j) + "]";
      const auto it = std::find_if(ops.layout().begin(), ops.layout().end(),
                                   [&](const FieldLayout& l) { return l.name == me.field; });
      if (it == ops.layout().end()) {
        r.error(p + ".field", "unknown field '" + me.field + "'");
      } else if (me.component < 0 || me.component >= it->components) {
        r.error(p + ".component", "out of range");
      }
      if (basis->index_of(me.k) == SpectralBasis::npos) r.error(p + ".k", "not a basis mode");
    }
    if (!r.errors.empty()) return;
    try {
      validate(make_integrator(cfg, *basis), ops);
    } catch (const ConfigError& e) {
      r.error("integrator", e.what());
    }
    if (K > 0) {
      try {
        validate(make_noise(cfg, ops), ops);
      } catch (const ConfigError& e) {
        r.error("noise", e.what());
      }
    }
  } catch (const ConfigError& e) {
    r.error("model", e.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& text, bool strict) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string detail = e.what();
    if (const auto pos = detail.find(": "); pos != std::string::npos) detail = detail.substr(pos + 2);
    throw ConfigError("syntax error at " + line_column(text, e.byte) + ": " + detail);
  }
  if (!root.is_object()) throw ConfigError("syntax error: top level must be an object");

  Reader r(strict);
  RunConfig cfg;
  r.allow(root, "",
          {"command", "seed", "model", "noise", "integrator", "initial", "ensemble", "experiment",
           "output"});
  std::string command = "simulate";
  r.string(root, "command", "", command);
  if (const auto c = command_from_string(command)) {
    cfg.command = *c;
  } else {
    r.error("command", "unknown command '" + command + "'");
  }
  r.integer(root, "seed", "", cfg.seed);
  read_model(r, root, cfg);
  read_noise(r, root, cfg);
  read_integrator(r, root, cfg);
  read_initial(r, root, cfg);
  read_experiment(r, root, cfg);
  check_semantics(r, cfg);

  if (!r.errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : r.errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path, bool strict) {
  return parse_config(read_text_file(path), strict);
}

std::shared_ptr<const SpectralBasis> make_basis(const RunConfig& cfg) {
  return std::make_shared<const SpectralBasis>(cfg.model.dim, cfg.cutoff);
}

NoiseSpec make_noise(const RunConfig& cfg, const EvolutionOperators& ops) {
  const NoiseConfig& nc = cfg.noise;
  std::vector<bool> mask;
  if (!nc.fields.empty()) {
    for (const auto& f : ops.layout()) {
      mask.push_back(std::find(nc.fields.begin(), nc.fields.end(), f.name) != nc.fields.end());
    }
  }
  NoiseSpec n = default_noise(ops, nc.directions, nc.sigma.front(), nc.gain.front(), mask);
  for (std::size_t k = 0; k < nc.directions; ++k) {
    if (nc.sigma.size() > 1) n.sigma[k] = nc.sigma[k];
    if (nc.gain.size() > 1) n.gain[k] = nc.gain[k];
  }
  return n;
}

IntegratorConfig make_integrator(const RunConfig& cfg, const SpectralBasis& basis) {
  IntegratorConfig ic = cfg.integrator;
  ic.level = cfg.level_radius > 0 ? basis.level_for_radius(cfg.level_radius) : GalerkinLevel{};
  if (cfg.level_radius > 0 && ic.level.n == 0) {
    throw ConfigError("integrator.level_radius: level contains no modes");
  }
  return ic;
}

StateVector make_initial(const RunConfig& cfg, const EvolutionOperators& ops) {
  const InitialConfig& ic = cfg.initial;
  if (ic.kind == "zero") return ops.zero_state();
  if (ic.kind == "random") {
    std::mt19937_64 rng(ic.seed);
    StateVector v = random_state(ops, rng, ic.decay, ic.max_mu);
    const double n = std::sqrt(ops.h2(v));
    if (n > 0.0) v *= ic.norm / n;
    return v;
  }
  if (ic.kind == "modes") {
    StateVector v = ops.zero_state();
    const SpectralBasis& b = ops.basis();
    for (const ModeEntry& me : ic.modes) {
      const std::size_t i = b.index_of(me.k);
      if (i == SpectralBasis::npos) throw ConfigError("initial.modes: mode outside the basis");
      Field& f = v.field(me.field);
      f.at(me.component, i) += cplx(me.re, me.im);
      f.at(me.component, b.conjugate(i)) += cplx(me.re, -me.im);
    }
    for (std::size_t f = 0; f < v.field_count(); ++f) {
      if (ops.layout()[f].solenoidal) leray_project_inplace(b, v.field(f));
    }
    return v;
  }
  if (ic.kind == "snapshot") {
    Snapshot s = read_snapshot(ic.path);
    if (s.kind != cfg.model.kind || s.dim != cfg.model.dim || s.cutoff != cfg.cutoff) {
      throw ConfigError("initial.path: snapshot model, dimension or cutoff differs from the run");
    }
    ops.require_roster(s.state, "initial snapshot");
    StateVector v = ops.zero_state();
    for (std::size_t f = 0; f < v.field_count(); ++f) v.field(f).data() = s.state.field(f).data();
    return v;
  }
  throw ConfigError("initial.kind: unsupported '" + ic.kind + "'");
}

}  // namespace spdegal
