// Copyright 2026 The qtraj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtraj/commands.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <limits>
#include <system_error>

#include "qtraj/analysis.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/master.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/unravel.hpp"

namespace qtraj {

namespace {

namespace fs = std::filesystem;

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) {
      throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
  }

  void close() {
    out_.close();
    if (!out_) {
      throw std::runtime_error("write to " + path_.string() + " failed");
    }
  }

  CsvWriter& field(std::string_view s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
  }
  CsvWriter& field(double x) { return field(format_double(x)); }
  CsvWriter& field(Complex z) { return field(z.real()).field(z.imag()); }
  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  fs::path path_;
  std::ofstream out_;
  bool first_ = true;
};

fs::path prepare_out_dir(const RunConfig& cfg) {
  fs::path dir(cfg.out_path);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  return dir;
}

void write_matrix_header(CsvWriter& w, Index dim) {
  w.field("t");
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      const std::string idx = std::to_string(r) + "_" + std::to_string(c);
      w.field("re_rho_" + idx).field("im_rho_" + idx);
    }
  }
  w.end_row();
}

void write_matrix_row(CsvWriter& w, double t, const CMatrix& rho) {
  w.field(t);
  for (Index r = 0; r < rho.rows(); ++r) {
    for (Index c = 0; c < rho.cols(); ++c) {
      w.field(rho(r, c));
    }
  }
  w.end_row();
}

struct NamedObservable {
  std::string name;
  OperatorMatrix op;
};

std::vector<NamedObservable> observables(const RunConfig& cfg, Index dim) {
  std::vector<NamedObservable> out;
  for (const auto& o : cfg.outputs) {
    if (const auto* obs = std::get_if<ObservableOutput>(&o)) {
      out.push_back({obs->name, build_observable(*obs, dim)});
    }
  }
  return out;
}

bool wants_states(const RunConfig& cfg) {
  const bool any_obs = std::any_of(cfg.outputs.begin(), cfg.outputs.end(),
                                   [](const OutputSpec& o) { return std::holds_alternative<ObservableOutput>(o); });
  const bool states = std::any_of(cfg.outputs.begin(), cfg.outputs.end(),
                                  [](const OutputSpec& o) { return std::holds_alternative<StatesOutput>(o); });
  return states || !any_obs;
}

int evolve_master(const RunConfig& cfg, std::ostream& log) {
  const LindbladModel model = build_model(cfg.model);
  const StateVector psi0 = build_initial_state(cfg.initial_state, model.dim());
  const MasterSeries series =
      rk4_evolve(model, projector(psi0), MasterEvolutionConfig(cfg.dt, cfg.t_final, cfg.record_every));
  const fs::path dir = prepare_out_dir(cfg);
  CsvWriter w(dir / "master.csv");
  write_matrix_header(w, model.dim());
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    write_matrix_row(w, series.times[i], series.states[i].matrix());
  }
  w.close();
  log << "evolve-master: wrote " << series.times.size() << " snapshots to " << (dir / "master.csv").string() << "\n";
  return kExitOk;
}

int trajectory(const RunConfig& cfg, int workers, std::ostream& log) {
  const LindbladModel model = build_model(cfg.model);
  const StateVector psi0 = build_initial_state(cfg.initial_state, model.dim());
  const TrajectoryConfig tcfg = trajectory_config(cfg, cfg.master_seed);
  const auto records = run_ensemble(model, psi0, tcfg, cfg.n_traj, cfg.master_seed, workers);
  const auto obs = observables(cfg, model.dim());
  const bool states = wants_states(cfg);
  const fs::path dir = prepare_out_dir(cfg);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    CsvWriter w(dir / ("trajectory_" + std::to_string(i) + ".csv"));
    w.field("t");
    if (states) {
      for (Index k = 0; k < model.dim(); ++k) {
        w.field("re_psi_" + std::to_string(k)).field("im_psi_" + std::to_string(k));
      }
    }
    for (const auto& o : obs) {
      w.field("re_" + o.name).field("im_" + o.name);
    }
    w.end_row();
    for (std::size_t s = 0; s < rec.times.size(); ++s) {
      w.field(rec.times[s]);
      if (states) {
        for (Index k = 0; k < model.dim(); ++k) {
          w.field(rec.states[s][k]);
        }
      }
      for (const auto& o : obs) {
        w.field(expectation(o.op, rec.states[s]));
      }
      w.end_row();
    }
    w.close();
    if (tcfg.method == Method::jump) {
      CsvWriter j(dir / ("jumps_" + std::to_string(i) + ".csv"));
      j.field("t").field("channel");
      j.end_row();
      for (const auto& ev : rec.jump_times) {
        j.field(ev.time).field(std::to_string(ev.channel));
        j.end_row();
      }
      j.close();
    }
  }
  log << "trajectory: wrote " << records.size() << " " << to_string(tcfg.method) << " trajectories to "
      << dir.string() << "\n";
  return kExitOk;
}

int ensemble(const RunConfig& cfg, int workers, std::ostream& log) {
  const LindbladModel model = build_model(cfg.model);
  const StateVector psi0 = build_initial_state(cfg.initial_state, model.dim());
  const TrajectoryConfig tcfg = trajectory_config(cfg, cfg.master_seed);
  const EnsembleMean mean = run_ensemble_mean(model, psi0, tcfg, cfg.n_traj, cfg.master_seed, workers);
  const fs::path dir = prepare_out_dir(cfg);
  {
    CsvWriter w(dir / "ensemble_mean.csv");
    write_matrix_header(w, model.dim());
    for (std::size_t i = 0; i < mean.times.size(); ++i) {
      write_matrix_row(w, mean.times[i], mean.states[i].matrix());
    }
    w.close();
  }
  const auto obs = observables(cfg, model.dim());
  if (!obs.empty()) {
    CsvWriter w(dir / "ensemble_observables.csv");
    w.field("t");
    for (const auto& o : obs) {
      w.field("re_" + o.name).field("im_" + o.name);
    }
    w.end_row();
    for (std::size_t i = 0; i < mean.times.size(); ++i) {
      w.field(mean.times[i]);
      for (const auto& o : obs) {
        w.field(Complex((o.op.matrix() * mean.states[i].matrix()).trace()));
      }
      w.end_row();
    }
    w.close();
  }
  log << "ensemble: averaged " << cfg.n_traj << " " << to_string(tcfg.method) << " trajectories into "
      << (dir / "ensemble_mean.csv").string() << "\n";
  return kExitOk;
}

int invariance_check(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.transform) {
    throw ConfigError("field 'transform': invariance-check needs a transform");
  }
  const Method method = trajectory_method(cfg);
  if (method == Method::jump) {
    throw ConfigError("field 'method': invariance-check supports qsd/heterodyne and homodyne only");
  }
  const LindbladModel model = build_model(cfg.model);
  const StateVector psi0 = build_initial_state(cfg.initial_state, model.dim());
  const RepresentationTransform transform(cfg.transform->mixing, cfg.transform->shifts);
  const TrajectoryConfig tcfg = trajectory_config(cfg, split_seed(cfg.master_seed, 0));
  const auto distances = compare_pathwise(model, transform, psi0, tcfg);

  const fs::path dir = prepare_out_dir(cfg);
  double max_distance = 0.0;
  {
    CsvWriter w(dir / "invariance.csv");
    w.field("t").field("trace_distance");
    w.end_row();
    for (const auto& p : distances) {
      w.field(p.time).field(p.distance);
      w.end_row();
      max_distance = std::max(max_distance, p.distance);
    }
    w.close();
  }

  const char* kind = transform.has_shifts() ? "shift" : "mixing";
  log << "invariance-check method=" << to_string(method) << " transform=" << kind
      << " max_distance=" << format_double(max_distance);
  if (method == Method::homodyne) {
    log << " bound=none status=report\n";
    return kExitOk;
  }
  const double bound = transform.has_shifts() ? cfg.invariance_constant * cfg.dt : 1e-10;
  const bool ok = max_distance <= bound;
  log << " bound=" << format_double(bound) << " status=" << (ok ? "pass" : "fail") << "\n";
  return ok ? kExitOk : kExitBoundViolated;
}

int poincare(const RunConfig& cfg, std::ostream& log) {
  const LindbladModel model = build_model(cfg.model);
  const StateVector psi0 = build_initial_state(cfg.initial_state, model.dim());
  std::optional<DrivePeriod> period;
  for (const auto& o : cfg.outputs) {
    if (const auto* p = std::get_if<PoincareOutput>(&o)) {
      period = p->period ? DrivePeriod(*p->period, p->phase_offset)
                         : duffing_drive_period(std::get<DuffingSpec>(cfg.model).drive_detuning, p->phase_offset);
      break;
    }
  }
  if (!period) {
    if (const auto* d = std::get_if<DuffingSpec>(&cfg.model)) {
      period = duffing_drive_period(d->drive_detuning);
    } else {
      throw ConfigError("field 'outputs': poincare needs a {\"type\": \"poincare\", \"period\": ...} entry");
    }
  }
  const TrajectoryConfig tcfg = trajectory_config(cfg, split_seed(cfg.master_seed, 0));
  const TrajectoryRecord rec = run_trajectory(model, psi0, tcfg);
  const PoincareSection section = poincare_sample(rec, *period, quadrature_x(model.dim()), quadrature_p(model.dim()));

  const fs::path dir = prepare_out_dir(cfg);
  CsvWriter w(dir / "poincare.csv");
  w.field("t").field("x").field("p");
  w.end_row();
  for (std::size_t i = 0; i < section.points.size(); ++i) {
    w.field(section.sample_times[i]).field(section.points[i].x).field(section.points[i].p);
    w.end_row();
  }
  w.close();
  log << "poincare: wrote " << section.points.size() << " points to " << (dir / "poincare.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

int run_command(Command command, const RunConfig& cfg, int workers, std::ostream& log) {
  switch (command) {
    case Command::evolve_master:
      return evolve_master(cfg, log);
    case Command::trajectory:
      return trajectory(cfg, workers, log);
    case Command::ensemble:
      return ensemble(cfg, workers, log);
    case Command::invariance_check:
      return invariance_check(cfg, log);
    case Command::poincare:
      return poincare(cfg, log);
  }
  return kExitError;
}

}  // namespace qtraj
