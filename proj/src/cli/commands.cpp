#include "qcool/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "parallel.hpp"
#include "qcool/channel.hpp"
#include "qcool/entanglement.hpp"
#include "qcool/limits.hpp"
#include "qcool/photonics.hpp"
#include "qcool/rng.hpp"
#include "qcool/tomography.hpp"

namespace qcool::cli {

namespace {

using Job = std::function<void(std::ostream& out, Format format, std::ostream& log)>;

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

double probability(const Config& cfg, const std::string& key) {
  const double v = cfg.get_double(key);
  require(v >= 0.0 && v <= 1.0, key, "must lie in [0, 1]");
  return v;
}

double excitation(const Config& cfg, const std::string& key) {
  const double v = cfg.get_double(key);
  require(v >= 0.0 && v <= 0.5, key, "p_T must lie in [0, 1/2]");
  return v;
}

ChannelParams channel_params(const Config& cfg) {
  const double s = probability(cfg, "p_s");
  const double l = probability(cfg, "p_l");
  require(s + l <= 1.0 + tol::kState, "p_s", "P_S + P_L must not exceed 1 (P_F = 1 - P_S - P_L)");
  return ChannelParams::from_success_loss(s, std::min(l, 1.0 - s));
}

TomographySettings tomography_settings(const Config& cfg, std::uint64_t seed) {
  TomographySettings settings;
  settings.shots_per_setting = cfg.get_u64("shots", 1000000);
  require(settings.shots_per_setting >= 1, "shots", "must be at least 1");
  const auto model = cfg.get_string("noise_model", "multinomial");
  if (model == "multinomial") {
    settings.noise_model = CountNoise::multinomial;
  } else if (model == "poisson") {
    settings.noise_model = CountNoise::poisson;
  } else {
    throw ConfigError("noise_model", "expected 'multinomial' or 'poisson'");
  }
  settings.seed = seed;
  return settings;
}

// ---------------------------------------------------------------- limits

const std::vector<std::string> kLimitsColumns{
    "p_T",  "P_S",  "P_L",  "P_TL",  "uncond_boundary", "cond_boundary", "uncond_ok",
    "cond_ok", "numeric_negativity", "feasible"};

std::vector<GridPoint> parse_points(const Config& cfg) {
  std::vector<GridPoint> points;
  const bool has_grid = cfg.has("grid.p_t") || cfg.has("grid.p_l") || cfg.has("grid.p_s");
  if (has_grid) {
    const auto ts = cfg.get_axis("grid.p_t");
    const auto ls = cfg.get_axis("grid.p_l");
    const auto ss = cfg.get_axis("grid.p_s");
    for (double l : ls) {
      for (double t : ts) {
        for (double s : ss) points.push_back({t, l, s});
      }
    }
  }
  if (cfg.has("points")) {
    std::istringstream is(cfg.get_string("points"));
    std::string item;
    while (std::getline(is, item, ';')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      Config one;
      one.set("points", item);
      const auto v = one.get_axis("points");
      require(v.size() == 3, "points", "each point must be 'p_T, P_L, P_S'");
      points.push_back({v[0], v[1], v[2]});
    }
  }
  for (const auto& p : points) {
    require(std::isfinite(p.p_t) && std::isfinite(p.p_l) && std::isfinite(p.p_s),
            has_grid ? "grid" : "points", "grid values must be finite");
  }
  return points;
}

Job prepare_limits(const RunConfig& rc) {
  auto points = parse_points(rc.params);
  const unsigned workers = rc.workers;
  return [points = std::move(points), workers](std::ostream& out, Format format, std::ostream&) {
    TableWriter table(out, format, kLimitsColumns);
    for (const auto& r : sweep_points(points, workers)) {
      table.row({r.p_t, r.p_s, r.p_l, r.p_tl, number(r.verdict.uncond_boundary_ps),
                 number(r.verdict.cond_boundary_ps), r.verdict.unconditional_ok,
                 r.verdict.conditional_ok, number(r.numeric_negativity), r.feasible});
    }
  };
}

// --------------------------------------------------------------- surface

const std::vector<std::string> kSurfaceColumns{
    "p_T", "P_L", "P_TL", "uncond_boundary", "cond_boundary", "uncond_numeric", "cond_numeric",
    "cond_numeric_status"};

struct SurfaceRow {
  double p_t, p_l, ub, cb, un, cn;
  std::string status;
};

Job prepare_surface(const RunConfig& rc) {
  const auto ts = rc.params.get_axis("grid.p_t");
  const auto ls = rc.params.get_axis("grid.p_l");
  for (double t : ts) require(t >= 0.0 && t <= 0.5, "grid.p_t", "p_T must lie in [0, 1/2]");
  for (double l : ls) require(l >= 0.0 && l < 1.0, "grid.p_l", "P_L must lie in [0, 1)");
  const unsigned workers = rc.workers;
  return [ts, ls, workers](std::ostream& out, Format format, std::ostream&) {
    std::vector<SurfaceRow> rows(ts.size() * ls.size());
    detail::parallel_for(rows.size(), workers, [&](std::size_t i) {
      const double l = ls[i / ts.size()];
      const double t = ts[i % ts.size()];
      SurfaceRow row{t, l, uncond_boundary(t), cond_boundary(t * l), NAN, NAN, "ok"};
      row.un = critical_ps_numeric(t, l, Route::unconditional);
      try {
        row.cn = critical_ps_numeric(t, l, Route::conditional);
      } catch (const NoBracketError& e) {
        row.status = e.outcome() == BracketOutcome::always_entangled ? "always_entangled"
                                                                      : "never_entangled";
      }
      rows[i] = row;
    });
    TableWriter table(out, format, kSurfaceColumns);
    for (const auto& r : rows) {
      table.row({r.p_t, r.p_l, r.p_t * r.p_l, r.ub, r.cb, number(r.un), number(r.cn), r.status});
    }
  };
}

// -------------------------------------------------------------- simulate

const std::vector<std::string> kSimulateColumns{
    "duration",        "n_triple",         "n_success",     "n_flip",
    "n_loss",          "P_S",              "P_F",           "P_L",
    "se_P_S",          "se_P_F",           "se_P_L",        "constraint_2PS_PL_minus_1",
    "constraint_se",   "ratio",            "model_ratio",   "empirical_loss_success_ratio",
    "analytic_P_S",    "analytic_P_F",     "analytic_P_L",  "model_P_S",
    "model_P_L",       "n_heralded",       "herald_fraction"};

RateConfig rate_config(const Config& cfg, const std::string& prefix = "") {
  RateConfig rc;
  rc.rate_singlet = cfg.get_double(prefix + "rates.singlet");
  rc.rate_singles = cfg.get_double(prefix + "rates.singles");
  rc.rate_noise = cfg.get_double(prefix + "rates.noise");
  rc.window = cfg.get_double(prefix + "window");
  rc.noise_excited = cfg.get_double(prefix + "noise.excited", 0.0);
  require(rc.rate_singlet >= 0.0 && std::isfinite(rc.rate_singlet), prefix + "rates.singlet",
          "must be a finite non-negative rate");
  require(rc.rate_singles >= 0.0 && std::isfinite(rc.rate_singles), prefix + "rates.singles",
          "must be a finite non-negative rate");
  require(rc.rate_noise >= 0.0 && std::isfinite(rc.rate_noise), prefix + "rates.noise",
          "must be a finite non-negative rate");
  require(rc.window > 0.0 && std::isfinite(rc.window), prefix + "window",
          "must be a positive number of seconds");
  require(rc.noise_excited >= 0.0 && rc.noise_excited <= 1.0, prefix + "noise.excited",
          "must lie in [0, 1]");
  return rc;
}

std::vector<Cell> simulate_row(const CoincidenceTally& t) {
  const auto emp = t.empirical();
  const auto [constraint, constraint_se] = t.photonic_constraint();
  const bool any = t.n_triple() > 0;
  auto prob = [any](double v) -> Cell { return any ? Cell{v} : Cell{}; };

  const double ratio = t.config.rate_singlet > 0.0 ? rate_ratio(t.config) : NAN;
  const double model = t.config.rate_singlet > 0.0 ? model_loss_success_ratio(t.config) : NAN;
  Cell a_s, a_f, a_l, m_s, m_l;
  if (std::isfinite(ratio)) {
    const auto analytic = params_from_ratio(ratio);
    const auto modelled = params_from_ratio(model);
    a_s = analytic.success;
    a_f = analytic.flip;
    a_l = analytic.loss;
    m_s = modelled.success;
    m_l = modelled.loss;
  }
  const double emp_ratio = emp.success > 0.0 ? emp.loss / emp.success : NAN;
  return {t.duration,
          t.n_triple(),
          t.n_success,
          t.n_flip,
          t.n_loss,
          prob(emp.success),
          prob(emp.flip),
          prob(emp.loss),
          prob(emp.se_success),
          prob(emp.se_flip),
          prob(emp.se_loss),
          any ? Cell{constraint} : Cell{},
          any ? Cell{constraint_se} : Cell{},
          number(ratio),
          number(model),
          number(emp_ratio),
          a_s,
          a_f,
          a_l,
          m_s,
          m_l,
          t.n_heralded(),
          any ? Cell{static_cast<double>(t.n_heralded()) / static_cast<double>(t.n_triple())}
              : Cell{}};
}

Job prepare_simulate(const RunConfig& rc) {
  const auto& cfg = rc.params;
  const RateConfig rates = rate_config(cfg);
  const double duration = cfg.get_double("duration");
  require(duration > 0.0 && std::isfinite(duration), "duration", "must be a positive number");
  const auto shards = static_cast<unsigned>(cfg.get_u64("shards", 1));
  require(shards >= 1, "shards", "must be at least 1");
  const std::string timetags = cfg.get_string("timetags", "");
  require(timetags.empty() || shards == 1, "timetags", "time-tag dumps require shards = 1");
  std::shared_ptr<std::ofstream> dump;
  if (!timetags.empty()) {
    dump = std::make_shared<std::ofstream>(timetags);
    require(static_cast<bool>(*dump), "timetags", "cannot open '" + timetags + "' for writing");
  }
  const auto seed = rc.seed;
  const unsigned workers = rc.workers;
  return [=](std::ostream& out, Format format, std::ostream& log) {
    for (const auto& w : rates.warnings()) log << "warning: " << w << '\n';
    CoincidenceTally tally;
    if (dump) {
      *dump << "# time_ps detector provenance\n";
      tally = simulate_streams(rates, duration, seed, [&](const Click& c) {
        *dump << c.time_ps << ' ' << to_string(c.detector) << ' ' << to_string(c.provenance)
              << '\n';
      });
      dump->flush();
    } else {
      tally = simulate_sharded(rates, duration, seed, shards, workers);
    }
    TableWriter table(out, format, kSimulateColumns);
    table.row(simulate_row(tally));
  };
}

// ------------------------------------------------------------------ tomo

const std::vector<std::string> kTomoColumns{
    "state",         "p_T",           "P_S",          "P_F",
    "P_L",           "shots",         "fidelity",     "negativity_true",
    "negativity_reconstructed",       "entangled_true", "entangled_reconstructed",
    "uncond_ok",     "cond_ok"};

DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "state_file", "cannot open '" + path + "'");
  Matrix m(4, 4);
  int row = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    require(row < 4, "state_file", "expected exactly 4 matrix rows");
    std::istringstream is(line);
    std::vector<double> v;
    std::string tok;
    while (is >> tok) v.push_back(parse_double("state_file", tok));
    require(v.size() == 8, "state_file", "each row needs 4 'real imag' pairs");
    for (int c = 0; c < 4; ++c) m(row, c) = Complex{v[2 * c], v[2 * c + 1]};
    ++row;
  }
  require(row == 4, "state_file", "expected exactly 4 matrix rows");
  try {
    return DensityMatrix(m, {2, 2});
  } catch (const std::invalid_argument& e) {
    throw ConfigError("state_file", e.what());
  }
}

Job prepare_tomo(const RunConfig& rc) {
  const auto& cfg = rc.params;
  const std::string kind = cfg.get_string("state", "conditional");
  std::optional<ChannelParams> params;
  std::optional<double> p_t;
  std::optional<DensityMatrix> truth;
  if (kind == "conditional" || kind == "unconditional") {
    p_t = excitation(cfg, "p_t");
    params = channel_params(cfg);
    const EnvironmentSpec env(*p_t);
    truth = kind == "conditional" ? conditional_state(*params, env).state
                                  : unconditional_state(params->success, env);
  } else if (kind == "singlet") {
    truth = singlet();
  } else if (kind == "mixed") {
    truth = DensityMatrix(0.25 * identity(4), {2, 2});
  } else if (kind == "file") {
    truth = read_state_file(cfg.get_string("state_file"));
  } else {
    throw ConfigError("state", "expected conditional, unconditional, singlet, mixed or file");
  }
  const auto settings = tomography_settings(cfg, rc.seed);
  const std::string counts_out = cfg.get_string("counts_out", "");
  std::shared_ptr<std::ofstream> counts_file;
  if (!counts_out.empty()) {
    counts_file = std::make_shared<std::ofstream>(counts_out);
    require(static_cast<bool>(*counts_file), "counts_out",
            "cannot open '" + counts_out + "' for writing");
  }
  return [=, truth = *truth](std::ostream& out, Format format, std::ostream&) {
    const auto counts = sample_counts(born_probabilities(truth), settings);
    if (counts_file) write_count_table(*counts_file, counts);
    const auto rec = reconstruct(counts);
    const auto t_report = analyze(truth);
    const auto r_report = analyze(rec);
    Cell uok;
    Cell cok;
    if (params && kind == "conditional") {
      const auto v = evaluate_limits(*p_t, params->success, params->loss);
      uok = v.unconditional_ok;
      cok = v.conditional_ok;
    } else if (params) {
      uok = evaluate_limits(*p_t, params->success, params->loss).unconditional_ok;
    }
    TableWriter table(out, format, kTomoColumns);
    table.row({kind, p_t ? Cell{*p_t} : Cell{}, params ? Cell{params->success} : Cell{},
               params ? Cell{params->flip} : Cell{}, params ? Cell{params->loss} : Cell{},
               settings.shots_per_setting, fidelity(truth, rec), t_report.negativity,
               r_report.negativity, t_report.entangled, r_report.entangled, uok, cok});
  };
}

// -------------------------------------------------------------- pipeline

const std::vector<std::string> kPipelineColumns{
    "scenario",        "p_T",           "ratio",           "model_ratio",
    "n_triple",        "P_S",           "P_F",             "P_L",
    "se_P_S",          "se_P_F",        "se_P_L",          "herald_fraction",
    "herald_weight",   "uncond_boundary", "cond_boundary", "expected_class",
    "negativity_uncond", "negativity_cond", "fidelity_cond", "class"};

struct Scenario {
  std::string name;
  RateConfig rates;
  double p_t;
  double duration;
};

std::vector<Scenario> parse_scenarios(const Config& cfg) {
  std::vector<Scenario> out;
  for (const auto& name : cfg.keys_with_prefix("scenario.")) {
    const std::string key = "scenario." + name;
    const auto v = cfg.get_numbers(key);
    require(v.size() == 6, key,
            "expected 'rate_singlet rate_singles rate_noise window p_T duration'");
    Scenario s{name, {}, v[4], v[5]};
    s.rates.rate_singlet = v[0];
    s.rates.rate_singles = v[1];
    s.rates.rate_noise = v[2];
    s.rates.window = v[3];
    require(v[0] > 0.0 && std::isfinite(v[0]), key, "rate_singlet must be positive");
    require(v[1] >= 0.0 && std::isfinite(v[1]), key, "rate_singles must be non-negative");
    require(v[2] >= 0.0 && std::isfinite(v[2]), key, "rate_noise must be non-negative");
    require(v[3] > 0.0 && std::isfinite(v[3]), key, "window must be positive");
    require(s.p_t >= 0.0 && s.p_t <= 0.5, key, "p_T must lie in [0, 1/2]");
    require(s.duration > 0.0 && std::isfinite(s.duration), key, "duration must be positive");
    out.push_back(std::move(s));
  }
  require(!out.empty(), "scenario", "at least one 'scenario.<name>' entry is required");
  return out;
}

Job prepare_pipeline(const RunConfig& rc) {
  const auto scenarios = parse_scenarios(rc.params);
  const auto settings = tomography_settings(rc.params, rc.seed);
  const auto shards = static_cast<unsigned>(rc.params.get_u64("shards", 8));
  require(shards >= 1, "shards", "must be at least 1");
  const auto seed = rc.seed;
  const unsigned workers = rc.workers;
  return [=](std::ostream& out, Format format, std::ostream& log) {
    std::vector<std::vector<Cell>> rows;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      const auto& sc = scenarios[i];
      for (const auto& w : sc.rates.warnings()) log << "warning: " << sc.name << ": " << w << '\n';
      RateConfig ground = sc.rates;
      ground.noise_excited = 0.0;
      RateConfig excited = sc.rates;
      excited.noise_excited = 1.0;
      const auto base = derive_seed(seed, i);
      const auto g = simulate_sharded(ground, sc.duration, derive_seed(base, 0), shards, workers);
      const auto e = simulate_sharded(excited, sc.duration, derive_seed(base, 1), shards, workers);
      const auto mixed = mix_detections(g, e, sc.p_t, derive_seed(base, 2));
      if (mixed.n_triple() == 0) {
        throw std::domain_error("scenario " + sc.name + " produced no heralded triples");
      }
      const auto emp = mixed.empirical();
      const auto params = emp.params();
      const EnvironmentSpec env(sc.p_t);
      const auto heralded = conditional_state(params, env);
      const auto uncond = unconditional_state(params.success, env);

      TomographySettings ts = settings;
      ts.seed = derive_seed(base, 3);
      const auto rec_uncond = reconstruct(sample_counts(born_probabilities(uncond), ts));
      ts.seed = derive_seed(base, 4);
      const auto rec_cond = reconstruct(sample_counts(born_probabilities(heralded.state), ts));

      const auto verdict = evaluate_limits(sc.p_t, params.success, params.loss);
      const auto expected = classify(verdict.unconditional_ok, verdict.conditional_ok);
      const auto measured = classify(is_entangled(rec_uncond), is_entangled(rec_cond));

      rows.push_back({sc.name, sc.p_t, rate_ratio(sc.rates), model_loss_success_ratio(sc.rates),
                 mixed.n_triple(), emp.success, emp.flip, emp.loss, emp.se_success, emp.se_flip,
                 emp.se_loss,
                 static_cast<double>(mixed.n_heralded()) / static_cast<double>(mixed.n_triple()),
                 heralded.weight, verdict.uncond_boundary_ps, verdict.cond_boundary_ps,
                 std::string(to_string(expected)), negativity(rec_uncond), negativity(rec_cond),
                 fidelity(heralded.state, rec_cond), std::string(to_string(measured))});
    }
    TableWriter table(out, format, kPipelineColumns);
    for (const auto& r : rows) table.row(r);
  };
}

Job prepare(const RunConfig& rc) {
  switch (rc.command) {
    case Command::limits:
      return prepare_limits(rc);
    case Command::surface:
      return prepare_surface(rc);
    case Command::simulate:
      return prepare_simulate(rc);
    case Command::tomo:
      return prepare_tomo(rc);
    case Command::pipeline:
      return prepare_pipeline(rc);
  }
  throw ConfigError("command", "unknown command");
}

}  // namespace

Command parse_command(const std::string& text) {
  if (text == "limits") return Command::limits;
  if (text == "surface") return Command::surface;
  if (text == "simulate") return Command::simulate;
  if (text == "tomo") return Command::tomo;
  if (text == "pipeline") return Command::pipeline;
  throw ConfigError("command", "expected limits, surface, simulate, tomo or pipeline, got '" +
                                   text + "'");
}

const char* to_string(Command c) {
  switch (c) {
    case Command::limits:
      return "limits";
    case Command::surface:
      return "surface";
    case Command::simulate:
      return "simulate";
    case Command::tomo:
      return "tomo";
    case Command::pipeline:
      return "pipeline";
  }
  return "unknown";
}

RunConfig make_run_config(Command command, Config params, const Overrides& overrides) {
  if (overrides.seed) params.set("seed", std::to_string(*overrides.seed));
  if (overrides.out) params.set("out", *overrides.out);
  if (overrides.format) params.set("format", *overrides.format);
  RunConfig rc;
  rc.command = command;
  rc.seed = params.get_u64("seed", 0);
  rc.out = params.get_string("out", "-");
  rc.format = parse_format(params.get_string("format", "csv"));
  const auto hw = std::max(1U, std::thread::hardware_concurrency());
  rc.workers = static_cast<unsigned>(params.get_u64("workers", hw));
  require(rc.workers >= 1, "workers", "must be at least 1");
  rc.params = std::move(params);
  return rc;
}

void run_to_stream(const RunConfig& config, std::ostream& out, std::ostream& log) {
  prepare(config)(out, config.format, log);
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    const Job job = prepare(config);
    if (config.out == "-") {
      job(std::cout, config.format, log);
      std::cout.flush();
    } else {
      std::ofstream file(config.out);
      require(static_cast<bool>(file), "out", "cannot open '" + config.out + "' for writing");
      job(file, config.format, log);
      file.flush();
      if (!file) {
        log << "error: failed writing '" << config.out << "'\n";
        return exit_status::io;
      }
    }
    return exit_status::ok;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return exit_status::config;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << '\n';
    return exit_status::numeric;
  }
}

}  // namespace qcool::cli
