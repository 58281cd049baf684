#include "spdegal/runner.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include <json.hpp>

#include "spdegal/analysis.hpp"
#include "spdegal/errors.hpp"
#include "spdegal/io.hpp"

namespace spdegal {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct Context {
  const RunConfig& cfg;
  unsigned threads;
  std::ostream& log;
  std::shared_ptr<const EvolutionOperators> ops;
  NoiseSpec noise;
  IntegratorConfig icfg;
  StateVector phi0;
  json summary;

  std::string path(const std::string& name) const { return (fs::path(cfg.out_dir) / name).string(); }

  std::vector<std::pair<std::string, std::string>> meta() const {
    auto m = standard_metadata(cfg.model, cfg.cutoff);
    m.emplace_back("command", std::string(to_string(cfg.command)));
    m.emplace_back("seed", std::to_string(cfg.seed));
    return m;
  }

  void save(const CsvWriter& csv, const std::string& name) {
    csv.save(path(name));
    summary["artifacts"].push_back(name);
    log << "wrote " << path(name) << "\n";
  }

  WienerPath path_for_run() const {
    return sample_path(cfg.seed, icfg.dt, icfg.steps(), noise.directions(), 0);
  }

  EnsembleSpec ensemble() const {
    EnsembleSpec e;
    e.ops = ops;
    e.noise = noise;
    e.phi0 = phi0;
    e.cfg = icfg;
    e.cfg.halt_above = std::min(icfg.halt_above, cfg.experiment.cap);
    e.replicates = cfg.replicates;
    e.seed = cfg.seed;
    e.threads = threads;
    return e;
  }
};

std::string flag(bool b) { return b ? "1" : "0"; }

json model_json(const ModelSpec& s, int cutoff) {
  return {{"kind", std::string(to_string(s.kind))},
          {"dimension", s.dim},
          {"cutoff", cutoff},
          {"exponent", s.exponent},
          {"darcy", s.darcy},
          {"forchheimer", s.forchheimer},
          {"coriolis", s.coriolis}};
}

void write_trajectory(Context& c, const Trajectory& tr, const std::string& name) {
  std::vector<std::string> cols{"t", "H2", "V2", "A2"};
  for (const auto& f : tr.field_names) cols.push_back("E_" + f);
  cols.push_back("functional");
  CsvWriter csv(c.meta(), cols);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    std::vector<double> row{tr.times[i], tr.h2[i], tr.v2[i], tr.a2[i]};
    for (const auto& e : tr.field_energy) row.push_back(e[i]);
    row.push_back(tr.functional[i]);
    csv.row(row);
  }
  c.save(csv, name);
}

int simulate(Context& c) {
  const Trajectory tr = integrate(*c.ops, c.noise, c.phi0, c.icfg, c.path_for_run());
  write_trajectory(c, tr, "trajectory.csv");
  write_snapshot(c.path("final.snap"), tr.final_state, c.cfg.model.kind, tr.times.back());
  c.summary["artifacts"].push_back("final.snap");
  c.log << "wrote " << c.path("final.snap") << "\n";
  for (std::size_t i = 0; i < tr.states.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "state_%06zu.snap", i);
    write_snapshot(c.path(name), tr.states[i], c.cfg.model.kind, tr.state_times[i]);
    c.summary["artifacts"].push_back(name);
  }
  json res{{"steps", tr.size() - 1},
           {"final_time", tr.times.back()},
           {"final_H2", tr.h2.back()},
           {"final_functional", tr.functional.back()}};
  if (tr.halt_time) res["halt_time"] = *tr.halt_time;

  const auto& ex = c.cfg.experiment;
  if (!ex.thresholds.empty()) {
    const StoppingTracker st = track_stopping(tr, ex.thresholds, ex.M, c.icfg.horizon);
    CsvWriter csv(c.meta(), {"threshold", "tau"});
    for (std::size_t i = 0; i < st.thresholds.size(); ++i) csv.row({st.thresholds[i], st.tau[i]});
    c.save(csv, "stopping.csv");
    res["stopping_bound"] = st.bound;
    res["stopping_member"] = st.member;
  }
  c.summary["result"] = res;
  return exit_code::ok;
}

int verify(Context& c) {
  const ConditionReport rep =
      check_conditions(*c.ops, c.noise, c.cfg.experiment.samples, c.cfg.seed);
  CsvWriter props(c.meta(), {"property", "hard", "passed", "worst", "tolerance", "checked"});
  for (const auto& p : rep.properties) {
    props.row_text({p.name, flag(p.hard), flag(p.passed), format_double(p.worst),
                    format_double(p.tolerance), std::to_string(p.checked)});
  }
  c.save(props, "conditions.csv");
  CsvWriter ratios(c.meta(), {"inequality", "max_ratio", "finite"});
  for (const auto& r : rep.ratios) {
    ratios.row_text({r.name, format_double(r.max_ratio), flag(r.finite)});
  }
  c.save(ratios, "ratios.csv");
  const bool ok = rep.all_hard_passed();
  c.summary["result"] = {{"all_hard_passed", ok},
                         {"lipschitz", rep.lipschitz.lipschitz},
                         {"growth", rep.lipschitz.growth},
                         {"sampled_lipschitz", rep.sampled_lipschitz}};
  return ok ? exit_code::ok : exit_code::property_failure;
}

int converge(Context& c) {
  const SpectralBasis& b = c.ops->basis();
  std::vector<GalerkinLevel> levels;
  for (int r : c.cfg.experiment.radii) levels.push_back(b.level_for_radius(r));
  const auto reps =
      galerkin_cauchy_study(*c.ops, c.noise, c.phi0, levels, c.icfg, c.path_for_run());
  CsvWriter csv(c.meta(), {"coarse_radius", "fine_radius", "coarse_n", "fine_n", "error_sup",
                           "error_int", "error", "truncated", "horizon"});
  json errors = json::array();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& r = reps[i];
    csv.row_text({std::to_string(c.cfg.experiment.radii[i]),
                  std::to_string(c.cfg.experiment.radii[i + 1]), std::to_string(r.coarse.n),
                  std::to_string(r.fine.n), format_double(r.error_sup), format_double(r.error_int),
                  format_double(r.error()), flag(r.truncated), format_double(r.horizon)});
    errors.push_back(r.error());
  }
  c.save(csv, "cauchy.csv");
  json ratios = json::array();
  for (std::size_t i = 1; i < reps.size(); ++i) ratios.push_back(reps[i - 1].error() / reps[i].error());
  c.summary["result"] = {{"errors", errors}, {"reduction_ratios", ratios}};
  return exit_code::ok;
}

int moments(Context& c) {
  const int p = c.cfg.experiment.p;
  CsvWriter csv(c.meta(), {"scale", "phi0_norm", "replicates", "estimate", "stderr", "sup_term",
                           "int_term", "c_hat", "half_estimate", "doubling_drift", "stopped"});
  std::vector<MomentReport> reps;
  for (double scale : {1.0, 2.0}) {
    EnsembleSpec e = c.ensemble();
    e.phi0 *= scale;
    MomentReport r = moment_estimate(e, p);
    csv.row({scale, r.phi0_norm, static_cast<double>(r.replicates), r.estimate, r.stderr_,
             r.sup_term, r.int_term, r.c_hat, r.half_estimate, r.doubling_drift,
             static_cast<double>(r.stopped)});
    reps.push_back(std::move(r));
  }
  c.save(csv, "moments.csv");
  CsvWriter samples(c.meta(), {"replicate", "sample"});
  for (std::size_t i = 0; i < reps[0].samples.size(); ++i) {
    samples.row({static_cast<double>(i), reps[0].samples[i]});
  }
  c.save(samples, "moment_samples.csv");
  const double c_drift = std::abs(reps[1].c_hat - reps[0].c_hat) / reps[0].c_hat;
  json res{{"p", p},
           {"estimate", reps[0].estimate},
           {"doubling_drift", reps[0].doubling_drift},
           {"c_hat", reps[0].c_hat},
           {"c_hat_scaled", reps[1].c_hat},
           {"c_hat_drift", c_drift}};

  const auto& ex = c.cfg.experiment;
  if (!ex.exit_times.empty()) {
    const auto probs = exit_probability(c.ensemble(), ex.M, ex.exit_times);
    CsvWriter exit(c.meta(), {"S", "probability", "stderr"});
    for (const auto& q : probs) exit.row({q.S, q.probability, q.stderr_});
    c.save(exit, "exit_probability.csv");
  }
  c.summary["result"] = res;
  return exit_code::ok;
}

int stability(Context& c) {
  const StateVector dir = default_direction(*c.ops);
  const WienerPath path = c.path_for_run();
  CsvWriter csv(c.meta(), {"delta", "sup_psi2", "sup_psi", "budget", "truncated", "horizon"});
  json sups = json::array();
  for (double d : c.cfg.experiment.deltas) {
    const StabilityReport r = stability_study(*c.ops, c.noise, c.phi0, d, dir, c.icfg, path);
    csv.row_text({format_double(d), format_double(r.sup_psi2), format_double(r.sup_psi()),
                  format_double(r.budget), flag(r.truncated), format_double(r.horizon)});
    sups.push_back(r.sup_psi());
  }
  c.save(csv, "stability.csv");
  c.summary["result"] = {{"sup_psi", sups}};
  return exit_code::ok;
}

int order(Context& c) {
  const auto& ex = c.cfg.experiment;
  const OrderReport r = strong_order_study(*c.ops, c.noise, c.phi0, c.icfg, ex.refinements,
                                           ex.paths, c.cfg.seed, c.threads);
  CsvWriter csv(c.meta(), {"dt", "error"});
  for (std::size_t i = 0; i < r.dts.size(); ++i) csv.row({r.dts[i], r.errors[i]});
  c.save(csv, "order.csv");
  c.summary["result"] = {{"order", r.order},
                         {"monotone", r.monotone},
                         {"reference_dt", r.reference_dt},
                         {"paths", r.paths},
                         {"warning", r.warning}};
  return exit_code::ok;
}

int globality(Context& c) {
  const GlobalityReport r = globality_experiment(c.ensemble(), c.cfg.experiment.cap);
  CsvWriter terminal(c.meta(), {"replicate", "terminal_functional"});
  for (std::size_t i = 0; i < r.terminal.size(); ++i) {
    terminal.row({static_cast<double>(i), r.terminal[i]});
  }
  c.save(terminal, "globality.csv");
  CsvWriter q(c.meta(), {"level", "functional_quantile"});
  for (std::size_t i = 0; i < r.quantile_levels.size(); ++i) {
    q.row({r.quantile_levels[i], r.functional_quantiles[i]});
  }
  c.save(q, "globality_quantiles.csv");
  c.summary["result"] = {{"dimension", r.dim},
                         {"replicates", r.replicates},
                         {"blowups", r.blowups},
                         {"divergences", r.divergences},
                         {"cap", r.cap},
                         {"blowup_fraction", r.blowup_fraction}};
  return exit_code::ok;
}

}  // namespace

int run(const RunConfig& cfg, unsigned threads, std::ostream& log) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());

  const auto basis = make_basis(cfg);
  Context c{cfg, std::max(1u, threads), log, nullptr, {}, {}, {}, {}};
  c.ops = std::make_shared<const EvolutionOperators>(cfg.model, basis);
  c.noise = cfg.noise.directions > 0 ? make_noise(cfg, *c.ops) : NoiseSpec{};
  c.icfg = make_integrator(cfg, *basis);
  validate(c.icfg, *c.ops);
  c.phi0 = make_initial(cfg, *c.ops);

  c.summary = {{"engine", std::string(kEngineName) + " " + kEngineVersion},
               {"generator", kGeneratorName},
               {"generator_version", kGeneratorVersion},
               {"command", std::string(to_string(cfg.command))},
               {"seed", cfg.seed},
               {"model", model_json(cfg.model, cfg.cutoff)},
               {"scheme", std::string(to_string(c.icfg.scheme))},
               {"dt", c.icfg.dt},
               {"horizon", c.icfg.horizon},
               {"noise_directions", c.noise.directions()},
               {"artifacts", json::array()}};

  int status = exit_code::ok;
  switch (cfg.command) {
    case Command::simulate: status = simulate(c); break;
    case Command::verify: status = verify(c); break;
    case Command::converge: status = converge(c); break;
    case Command::moments: status = moments(c); break;
    case Command::stability: status = stability(c); break;
    case Command::order: status = order(c); break;
    case Command::globality: status = globality(c); break;
  }
  c.summary["exit_code"] = status;
  write_text_file(c.path("summary.json"), c.summary.dump(2) + "\n");
  log << "wrote " << c.path("summary.json") << "\n";
  return status;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ArgumentError*>(&e) ||
      dynamic_cast<const TypeError*>(&e) || dynamic_cast<const ShapeError*>(&e)) {
    return exit_code::validation;
  }
  if (dynamic_cast<const DivergenceError*>(&e)) return exit_code::divergence;
  if (dynamic_cast<const IoError*>(&e) || dynamic_cast<const FormatError*>(&e)) return exit_code::io;
  return exit_code::other;
}

int run_guarded(const RunConfig& cfg, unsigned threads, std::ostream& log, std::ostream& err) {
  try {
    return run(cfg, threads, log);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace spdegal
