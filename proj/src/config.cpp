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

#include "qtraj/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qtraj/errors.hpp"
#include "qtraj/time_grid.hpp"

namespace qtraj {

namespace {

using json = nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& reason) {
  throw ConfigError("field '" + field + "': " + reason);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Reads keys from one JSON object and rejects any it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      field_error(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) {
      field_error(join(path_, key), "is required");
    }
    return j_.at(key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key) { return as_number(get(key), join(path_, key)); }

  double number_or(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, join(path_, key)) : fallback;
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    const json* v = find(key);
    if (!v) {
      return fallback;
    }
    if (!v->is_number_integer()) {
      field_error(join(path_, key), "expected an integer");
    }
    return v->get<std::int64_t>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) {
      field_error(join(path_, key), "expected a string");
    }
    return v.get<std::string>();
  }

  std::string path(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        field_error(join(path_, item.key()), "unknown field");
      }
    }
  }

  static double as_number(const json& v, const std::string& field) {
    if (!v.is_number()) {
      field_error(field, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      field_error(field, "must be finite");
    }
    return x;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Complex parse_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2) {
    field_error(field, "expected a [re, im] pair");
  }
  return {ObjectReader::as_number(v[0], field), ObjectReader::as_number(v[1], field)};
}

CVector parse_vector(const json& v, const std::string& field) {
  if (!v.is_array()) {
    field_error(field, "expected an array of [re, im] pairs");
  }
  CVector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    out(static_cast<Index>(i)) = parse_complex(v[i], field + "[" + std::to_string(i) + "]");
  }
  return out;
}

CMatrix parse_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) {
    field_error(field, "expected a non-empty array of rows");
  }
  const std::size_t rows = v.size();
  if (!v[0].is_array()) {
    field_error(field, "expected rows of [re, im] pairs");
  }
  const std::size_t cols = v[0].size();
  CMatrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!v[r].is_array() || v[r].size() != cols) {
      field_error(field, "row " + std::to_string(r) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Index>(r), static_cast<Index>(c)) =
          parse_complex(v[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return out;
}

json render_complex(Complex z) { return json::array({z.real(), z.imag()}); }

json render_vector(const CVector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(render_complex(v(i)));
  }
  return out;
}

json render_matrix(const CMatrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(render_complex(m(r, c)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

ModelSpec parse_model(const json& j) {
  ObjectReader r(j, "model");
  ModelSpec spec;
  if (r.has("builder")) {
    const std::string builder = r.string("builder");
    if (builder == "qubit_decay") {
      spec = QubitDecaySpec{r.number("gamma"), r.number_or("rabi", 0.0), r.number_or("detuning", 0.0)};
    } else if (builder == "driven_duffing") {
      DuffingSpec d;
      const json& fd = r.get("fock_dim");
      if (!fd.is_number_integer()) {
        field_error("model.fock_dim", "expected an integer");
      }
      d.fock_dim = fd.get<Index>();
      d.kappa = r.number("kappa");
      d.anharmonicity = r.number("anharmonicity");
      d.drive_amplitude = r.number("drive_amplitude");
      d.drive_detuning = r.number("drive_detuning");
      spec = d;
    } else {
      field_error("model.builder", "unknown builder '" + builder + "' (expected qubit_decay or driven_duffing)");
    }
  } else {
    ExplicitModelSpec e;
    e.hamiltonian = parse_matrix(r.get("hamiltonian"), "model.hamiltonian");
    const json* ops = r.find("lindblad_ops");
    if (ops) {
      if (!ops->is_array()) {
        field_error("model.lindblad_ops", "expected an array of matrices");
      }
      for (std::size_t k = 0; k < ops->size(); ++k) {
        e.lindblad_ops.push_back(parse_matrix((*ops)[k], "model.lindblad_ops[" + std::to_string(k) + "]"));
      }
    }
    spec = std::move(e);
  }
  r.finish();
  return spec;
}

json render_model(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QubitDecaySpec>) {
          return {{"builder", "qubit_decay"}, {"gamma", s.gamma}, {"rabi", s.rabi}, {"detuning", s.detuning}};
        } else if constexpr (std::is_same_v<T, DuffingSpec>) {
          return {{"builder", "driven_duffing"},          {"fock_dim", s.fock_dim},
                  {"kappa", s.kappa},                     {"anharmonicity", s.anharmonicity},
                  {"drive_amplitude", s.drive_amplitude}, {"drive_detuning", s.drive_detuning}};
        } else {
          json ops = json::array();
          for (const auto& op : s.lindblad_ops) {
            ops.push_back(render_matrix(op));
          }
          return {{"hamiltonian", render_matrix(s.hamiltonian)}, {"lindblad_ops", ops}};
        }
      },
      spec);
}

InitialStateSpec parse_initial_state(const json& j) {
  ObjectReader r(j, "initial_state");
  int forms = static_cast<int>(r.has("basis")) + static_cast<int>(r.has("amplitudes")) +
              static_cast<int>(r.has("coherent"));
  if (forms != 1) {
    field_error("initial_state", "give exactly one of basis, amplitudes, coherent");
  }
  InitialStateSpec spec;
  if (r.has("basis")) {
    const json& b = r.get("basis");
    if (!b.is_number_integer() || b.get<std::int64_t>() < 0) {
      field_error("initial_state.basis", "expected a non-negative integer");
    }
    spec = BasisStateSpec{b.get<Index>()};
  } else if (r.has("amplitudes")) {
    spec = AmplitudeStateSpec{parse_vector(r.get("amplitudes"), "initial_state.amplitudes")};
  } else {
    spec = CoherentStateSpec{parse_complex(r.get("coherent"), "initial_state.coherent")};
  }
  r.finish();
  return spec;
}

json render_initial_state(const InitialStateSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BasisStateSpec>) {
          return {{"basis", s.index}};
        } else if constexpr (std::is_same_v<T, AmplitudeStateSpec>) {
          return {{"amplitudes", render_vector(s.amplitudes)}};
        } else {
          return {{"coherent", render_complex(s.alpha)}};
        }
      },
      spec);
}

RunMethod parse_method(const std::string& s) {
  if (s == "master") return RunMethod::master;
  if (s == "qsd" || s == "heterodyne") return RunMethod::qsd;
  if (s == "homodyne") return RunMethod::homodyne;
  if (s == "jump") return RunMethod::jump;
  field_error("method", "unknown method '" + s + "' (expected master, qsd, heterodyne, homodyne or jump)");
}

OutputSpec parse_output(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type");
  OutputSpec out;
  if (type == "states") {
    out = StatesOutput{};
  } else if (type == "observable") {
    ObservableOutput o;
    o.name = r.string("name");
    if (o.name.empty() || o.name.find_first_of(", \"\n") != std::string::npos) {
      field_error(r.path("name"), "must be non-empty without commas, quotes, spaces or newlines");
    }
    if (const json* m = r.find("matrix")) {
      o.matrix = parse_matrix(*m, r.path("matrix"));
    }
    out = std::move(o);
  } else if (type == "poincare") {
    PoincareOutput p;
    if (const json* v = r.find("period")) {
      p.period = ObjectReader::as_number(*v, r.path("period"));
    }
    p.phase_offset = r.number_or("phase_offset", 0.0);
    out = p;
  } else {
    field_error(r.path("type"), "unknown output type '" + type + "' (expected states, observable or poincare)");
  }
  r.finish();
  return out;
}

json render_output(const OutputSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StatesOutput>) {
          return {{"type", "states"}};
        } else if constexpr (std::is_same_v<T, ObservableOutput>) {
          json j = {{"type", "observable"}, {"name", s.name}};
          if (s.matrix) {
            j["matrix"] = render_matrix(*s.matrix);
          }
          return j;
        } else {
          json j = {{"type", "poincare"}, {"phase_offset", s.phase_offset}};
          if (s.period) {
            j["period"] = *s.period;
          }
          return j;
        }
      },
      spec);
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

bool same_matrix(const CMatrix& a, const CMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_vector(const CVector& a, const CVector& b) { return a.size() == b.size() && (a.size() == 0 || a == b); }

void validate(const RunConfig& cfg) {
  LindbladModel model = [&] {
    try {
      return build_model(cfg.model);
    } catch (const InputError& e) {
      field_error("model", e.what());
    }
  }();
  try {
    build_initial_state(cfg.initial_state, model.dim());
  } catch (const InputError& e) {
    field_error("initial_state", e.what());
  }
  if (!(cfg.dt > 0.0)) {
    field_error("dt", "must be positive");
  }
  if (!(cfg.t_final > 0.0)) {
    field_error("t_final", "must be positive");
  }
  if (cfg.dt > cfg.t_final) {
    throw ConfigError("fields 'dt' and 't_final': dt must not exceed t_final");
  }
  try {
    step_count(cfg.dt, cfg.t_final);
  } catch (const InputError& e) {
    throw ConfigError(std::string("fields 'dt' and 't_final': ") + e.what());
  }
  if (cfg.record_every < 1) {
    field_error("record_every", "must be >= 1");
  }
  if (cfg.n_traj < 1) {
    field_error("n_traj", "must be >= 1");
  }
  if (!(cfg.invariance_constant > 0.0)) {
    field_error("invariance_constant", "must be positive");
  }
  if (cfg.transform) {
    const auto k = static_cast<Index>(model.channels());
    if (cfg.transform->mixing.rows() != k || cfg.transform->mixing.cols() != k) {
      field_error("transform.mixing", "must be " + std::to_string(k) + "x" + std::to_string(k) +
                                          " to match the model's Lindblad channel count, got " +
                                          std::to_string(cfg.transform->mixing.rows()) + "x" +
                                          std::to_string(cfg.transform->mixing.cols()));
    }
    if (cfg.transform->shifts.size() != k) {
      field_error("transform.shifts", "must have " + std::to_string(k) + " entries");
    }
    try {
      RepresentationTransform(cfg.transform->mixing, cfg.transform->shifts);
    } catch (const InputError& e) {
      field_error("transform", e.what());
    }
  }
  for (std::size_t i = 0; i < cfg.outputs.size(); ++i) {
    const std::string path = "outputs[" + std::to_string(i) + "]";
    if (const auto* o = std::get_if<ObservableOutput>(&cfg.outputs[i])) {
      try {
        build_observable(*o, model.dim());
      } catch (const InputError& e) {
        field_error(path, e.what());
      }
    } else if (const auto* p = std::get_if<PoincareOutput>(&cfg.outputs[i])) {
      if (!p->period && !std::holds_alternative<DuffingSpec>(cfg.model)) {
        field_error(path + ".period", "is required unless the model is driven_duffing");
      }
      try {
        if (p->period) {
          DrivePeriod(*p->period, p->phase_offset);
        } else {
          duffing_drive_period(std::get<DuffingSpec>(cfg.model).drive_detuning, p->phase_offset);
        }
      } catch (const InputError& e) {
        field_error(path, e.what());
      }
    }
  }
  if (cfg.out_path.empty()) {
    field_error("out_path", "must not be empty");
  }
}

}  // namespace

const char* to_string(RunMethod method) {
  switch (method) {
    case RunMethod::master:
      return "master";
    case RunMethod::qsd:
      return "qsd";
    case RunMethod::homodyne:
      return "homodyne";
    case RunMethod::jump:
      return "jump";
  }
  return "unknown";
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  const bool model_eq = std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T* y = std::get_if<T>(&b.model);
        if (!y) return false;
        if constexpr (std::is_same_v<T, QubitDecaySpec>) {
          return x.gamma == y->gamma && x.rabi == y->rabi && x.detuning == y->detuning;
        } else if constexpr (std::is_same_v<T, DuffingSpec>) {
          return x.fock_dim == y->fock_dim && x.kappa == y->kappa && x.anharmonicity == y->anharmonicity &&
                 x.drive_amplitude == y->drive_amplitude && x.drive_detuning == y->drive_detuning;
        } else {
          if (!same_matrix(x.hamiltonian, y->hamiltonian) || x.lindblad_ops.size() != y->lindblad_ops.size()) {
            return false;
          }
          for (std::size_t k = 0; k < x.lindblad_ops.size(); ++k) {
            if (!same_matrix(x.lindblad_ops[k], y->lindblad_ops[k])) return false;
          }
          return true;
        }
      },
      a.model);
  const bool state_eq = std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        const T* y = std::get_if<T>(&b.initial_state);
        if (!y) return false;
        if constexpr (std::is_same_v<T, BasisStateSpec>) {
          return x.index == y->index;
        } else if constexpr (std::is_same_v<T, AmplitudeStateSpec>) {
          return same_vector(x.amplitudes, y->amplitudes);
        } else {
          return x.alpha == y->alpha;
        }
      },
      a.initial_state);
  const bool transform_eq =
      a.transform.has_value() == b.transform.has_value() &&
      (!a.transform ||
       (same_matrix(a.transform->mixing, b.transform->mixing) && same_vector(a.transform->shifts, b.transform->shifts)));
  bool outputs_eq = a.outputs.size() == b.outputs.size();
  for (std::size_t i = 0; outputs_eq && i < a.outputs.size(); ++i) {
    outputs_eq = std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          const T* y = std::get_if<T>(&b.outputs[i]);
          if (!y) return false;
          if constexpr (std::is_same_v<T, StatesOutput>) {
            return true;
          } else if constexpr (std::is_same_v<T, ObservableOutput>) {
            return x.name == y->name && x.matrix.has_value() == y->matrix.has_value() &&
                   (!x.matrix || same_matrix(*x.matrix, *y->matrix));
          } else {
            return x.period == y->period && x.phase_offset == y->phase_offset;
          }
        },
        a.outputs[i]);
  }
  return model_eq && state_eq && transform_eq && outputs_eq && a.method == b.method && a.scheme == b.scheme &&
         a.dt == b.dt && a.t_final == b.t_final && a.record_every == b.record_every && a.n_traj == b.n_traj &&
         a.master_seed == b.master_seed && a.invariance_constant == b.invariance_constant &&
         a.out_path == b.out_path;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::string what = e.what();
    // Drop the library prefix "[json.exception.parse_error.101] ".
    if (auto pos = what.find("] "); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    throw ConfigError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                      what);
  }

  ObjectReader r(doc, "");
  RunConfig cfg;
  cfg.model = parse_model(r.get("model"));
  if (const json* s = r.find("initial_state")) {
    cfg.initial_state = parse_initial_state(*s);
  }
  cfg.method = parse_method(r.string("method"));
  if (const json* s = r.find("scheme")) {
    if (!s->is_string() || (*s != "euler" && *s != "split")) {
      field_error("scheme", "expected \"euler\" or \"split\"");
    }
    cfg.scheme = *s == "split" ? Scheme::split : Scheme::euler;
  }
  cfg.dt = r.number("dt");
  cfg.t_final = r.number("t_final");
  cfg.record_every = r.integer_or("record_every", 1);
  cfg.n_traj = r.integer_or("n_traj", 1);
  if (const json* s = r.find("master_seed")) {
    if (!s->is_number_unsigned()) {
      field_error("master_seed", "expected a non-negative 64-bit integer");
    }
    cfg.master_seed = s->get<std::uint64_t>();
  }
  if (const json* t = r.find("transform")) {
    ObjectReader tr(*t, "transform");
    TransformSpec spec;
    spec.mixing = parse_matrix(tr.get("mixing"), "transform.mixing");
    spec.shifts = parse_vector(tr.get("shifts"), "transform.shifts");
    tr.finish();
    cfg.transform = std::move(spec);
  }
  if (const json* outs = r.find("outputs")) {
    if (!outs->is_array()) {
      field_error("outputs", "expected an array");
    }
    for (std::size_t i = 0; i < outs->size(); ++i) {
      cfg.outputs.push_back(parse_output((*outs)[i], "outputs[" + std::to_string(i) + "]"));
    }
  }
  cfg.invariance_constant = r.number_or("invariance_constant", 10.0);
  if (const json* p = r.find("out_path")) {
    if (!p->is_string()) {
      field_error("out_path", "expected a string");
    }
    cfg.out_path = p->get<std::string>();
  }
  r.finish();
  validate(cfg);
  return cfg;
}

std::string render_config(const RunConfig& cfg) {
  json j;
  j["model"] = render_model(cfg.model);
  j["initial_state"] = render_initial_state(cfg.initial_state);
  j["method"] = to_string(cfg.method);
  j["scheme"] = to_string(cfg.scheme);
  j["dt"] = cfg.dt;
  j["t_final"] = cfg.t_final;
  j["record_every"] = cfg.record_every;
  j["n_traj"] = cfg.n_traj;
  j["master_seed"] = cfg.master_seed;
  if (cfg.transform) {
    j["transform"] = {{"mixing", render_matrix(cfg.transform->mixing)},
                      {"shifts", render_vector(cfg.transform->shifts)}};
  }
  json outs = json::array();
  for (const auto& o : cfg.outputs) {
    outs.push_back(render_output(o));
  }
  j["outputs"] = std::move(outs);
  j["invariance_constant"] = cfg.invariance_constant;
  j["out_path"] = cfg.out_path;
  return j.dump(2) + "\n";
}

LindbladModel build_model(const ModelSpec& spec) {
  return std::visit(
      [](const auto& s) -> LindbladModel {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QubitDecaySpec>) {
          return qubit_decay_model(s.gamma, s.rabi, s.detuning);
        } else if constexpr (std::is_same_v<T, DuffingSpec>) {
          return driven_duffing_model(s.fock_dim, s.kappa, s.anharmonicity, s.drive_amplitude, s.drive_detuning);
        } else {
          std::vector<OperatorMatrix> ops;
          for (const auto& op : s.lindblad_ops) {
            ops.emplace_back(op);
          }
          return LindbladModel(OperatorMatrix(s.hamiltonian), std::move(ops));
        }
      },
      spec);
}

StateVector build_initial_state(const InitialStateSpec& spec, Index dim) {
  return std::visit(
      [dim](const auto& s) -> StateVector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BasisStateSpec>) {
          return StateVector::basis(dim, s.index);
        } else if constexpr (std::is_same_v<T, AmplitudeStateSpec>) {
          if (s.amplitudes.size() != dim) {
            throw DimensionError("initial state has " + std::to_string(s.amplitudes.size()) +
                                 " amplitudes, model dim is " + std::to_string(dim));
          }
          return StateVector(s.amplitudes);
        } else {
          return coherent_state(dim, s.alpha);
        }
      },
      spec);
}

OperatorMatrix build_observable(const ObservableOutput& spec, Index dim) {
  if (spec.matrix) {
    OperatorMatrix op(*spec.matrix);
    if (op.dim() != dim) {
      throw DimensionError("observable '" + spec.name + "' has dim " + std::to_string(op.dim()) + ", model dim is " +
                           std::to_string(dim));
    }
    return op;
  }
  const std::string& n = spec.name;
  if (n == "identity") return OperatorMatrix::identity(dim);
  if (n == "number") return number_operator(dim);
  if (n == "x") return quadrature_x(dim);
  if (n == "p") return quadrature_p(dim);
  if (n == "sigma_x" || n == "sigma_y" || n == "sigma_z") {
    if (dim != 2) {
      throw DimensionError("observable '" + n + "' needs a two-level model");
    }
    return n == "sigma_x" ? pauli_x() : n == "sigma_y" ? pauli_y() : pauli_z();
  }
  throw InputError("unknown observable '" + n + "' (give a matrix or one of identity, number, x, p, sigma_x/y/z)");
}

Method trajectory_method(const RunConfig& cfg) {
  switch (cfg.method) {
    case RunMethod::qsd:
      return Method::qsd;
    case RunMethod::homodyne:
      return Method::homodyne;
    case RunMethod::jump:
      return Method::jump;
    case RunMethod::master:
      break;
  }
  throw ConfigError("field 'method': a trajectory method (qsd, heterodyne, homodyne, jump) is required here");
}

TrajectoryConfig trajectory_config(const RunConfig& cfg, std::uint64_t seed) {
  return TrajectoryConfig(cfg.dt, cfg.t_final, cfg.record_every, seed, trajectory_method(cfg), cfg.scheme);
}

}  // namespace qtraj
