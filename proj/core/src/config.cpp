#include "bbmlab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "bbmlab/errors.hpp"

namespace bbm {

PipelineKind parse_pipeline_kind(const std::string& name) {
  if (name == "direct") return PipelineKind::direct;
  if (name == "1d-bore") return PipelineKind::bore_1d;
  if (name == "2d-bore") return PipelineKind::bore_2d;
  throw ConfigError("unknown pipeline '" + name + "' (expected direct, 1d-bore or 2d-bore)", "pipeline");
}

std::string to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::direct: return "direct";
    case PipelineKind::bore_1d: return "1d-bore";
    case PipelineKind::bore_2d: return "2d-bore";
  }
  return "direct";
}

bool InitConfig::is_bore() const {
  return kind == "tanh" || kind == "smoothed-step" || kind == "custom-samples";
}

GridSpec RunConfig::line_grid() const {
  return grid.dim == 1 ? grid : GridSpec::line(grid.length[0], grid.points[0]);
}

void RunConfig::validate() const {
  grid.validate();
  params.validate();
  solver.validate(params, grid);
  ledger.validate();
  if (pipeline == PipelineKind::bore_2d && grid.dim != 2) {
    throw ConfigError("the 2d-bore pipeline needs a 2D grid", "grid");
  }
  if (pipeline == PipelineKind::bore_1d && grid.dim != 1) {
    throw ConfigError("the 1d-bore pipeline needs a 1D grid", "grid");
  }
  if (init.kind == "custom-samples" && !init.samples_file) {
    throw ConfigError("custom-samples needs a samples_file", "init.samples_file");
  }
}

namespace {

using nlohmann::json;

// Reads one table of the document, tracking which keys were used so that
// misspelled keys surface as errors instead of silently taking defaults.
class Section {
 public:
  Section(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (obj_ != nullptr && !obj_->is_object()) throw ConfigError("expected a table", path_);
  }

  bool present() const { return obj_ != nullptr; }
  bool has(const std::string& key) const { return obj_ != nullptr && obj_->contains(key); }

  double number(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ConfigError("missing required field", field(key));
    return as_number(*v, key);
  }
  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v == nullptr ? fallback : as_number(*v, key);
  }
  std::optional<double> optional_number(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return std::nullopt;
    return as_number(*v, key);
  }
  /// A number, or the string "inf".
  double exponent(const std::string& key, double fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (v->is_string() && v->get<std::string>() == "inf") return kInf;
    return as_number(*v, key);
  }
  std::size_t count(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ConfigError("missing required field", field(key));
    const double x = as_number(*v, key);
    if (x < 0.0 || x != std::floor(x)) throw ConfigError("expected a nonnegative integer", field(key));
    return static_cast<std::size_t>(x);
  }
  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError("expected true or false", field(key));
    return v->get<bool>();
  }
  std::string text(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) throw ConfigError("missing required field", field(key));
    if (!v->is_string()) throw ConfigError("expected a string", field(key));
    return v->get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : fallback;
  }
  std::vector<int> integers(const std::string& key) {
    const json* v = find(key);
    if (v == nullptr) return {};
    if (!v->is_array()) throw ConfigError("expected an array", field(key));
    std::vector<int> out;
    for (const json& e : *v) {
      if (!e.is_number_integer()) throw ConfigError("expected integers", field(key));
      out.push_back(e.get<int>());
    }
    return out;
  }
  Section child(const std::string& key) {
    const json* v = find(key);
    return Section(v, field(key));
  }
  void finish() const {
    if (obj_ == nullptr) return;
    for (const auto& [k, v] : obj_->items()) {
      if (!used_.count(k)) throw ConfigError("unknown field", field(k));
    }
  }

 private:
  const json* find(const std::string& key) {
    used_.insert(key);
    if (obj_ == nullptr) return nullptr;
    const auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }
  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw ConfigError("expected a number", field(key));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("expected a finite number", field(key));
    return x;
  }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* obj_;
  std::string path_;
  std::set<std::string> used_;
};

json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(toml_to_json(v));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  std::ostringstream os;
  if (const auto* v = node.as_date()) os << v->get();
  if (const auto* v = node.as_time()) os << v->get();
  if (const auto* v = node.as_date_time()) os << v->get();
  return os.str();
}

json exponent_json(double r) { return std::isinf(r) ? json("inf") : json(r); }

json make_echo(const RunConfig& c) {
  json grid = {{"dim", c.grid.dim}};
  if (c.grid.dim == 1) {
    grid["L"] = c.grid.length[0];
    grid["N"] = c.grid.points[0];
  } else {
    grid["Lx"] = c.grid.length[0];
    grid["Ly"] = c.grid.length[1];
    grid["Nx"] = c.grid.points[0];
    grid["Ny"] = c.grid.points[1];
  }
  json init = {{"kind", c.init.kind},         {"eta_minus", c.init.eta_minus},
               {"eta_plus", c.init.eta_plus}, {"u_minus", c.init.u_minus},
               {"u_plus", c.init.u_plus},     {"steepness", c.init.steepness},
               {"center", c.init.center},     {"amplitude", c.init.amplitude},
               {"width", c.init.width},       {"right_moving", c.init.right_moving}};
  if (c.init.samples_file) init["samples_file"] = c.init.samples_file->string();
  if (c.init.perturbation) {
    init["perturbation"] = {{"amplitude", c.init.perturbation->amplitude},
                            {"width", c.init.perturbation->width},
                            {"center", c.init.perturbation->center}};
  }
  json solver = {{"dt", c.solver.dt}, {"t_end", c.solver.t_end}, {"dealias", c.solver.dealias}};
  if (c.solver.friedrichs_m) solver["m"] = *c.solver.friedrichs_m;
  if (c.solver.max_steps) solver["max_steps"] = *c.solver.max_steps;
  return {
      {"pipeline", to_string(c.pipeline)},
      {"grid", grid},
      {"params",
       {{"b", c.params.b}, {"d", c.params.d}, {"eps", c.params.eps}, {"beta", c.params.beta},
        {"enforce_bbm_sum", c.params.enforce_bbm_sum}}},
      {"init", init},
      {"solver", solver},
      {"ledger",
       {{"stride", c.ledger.stride},
        {"s", c.ledger.s},
        {"r", exponent_json(c.ledger.r)},
        {"blocks", c.ledger.blocks},
        {"threshold_factor", c.ledger.threshold_factor},
        {"halt_on_threshold", c.ledger.halt_on_threshold},
        {"abort_on_leak", c.ledger.abort_on_leak},
        {"leak_tolerance", c.ledger.leak_tolerance}}},
      {"output", {{"svg", c.output.svg}, {"snapshots", c.output.snapshots}}},
  };
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a table");
  Section root(&doc, "");
  RunConfig c;
  c.pipeline = parse_pipeline_kind(root.text("pipeline"));

  Section grid = root.child("grid");
  if (!grid.present()) throw ConfigError("missing required table", "grid");
  const int dim = static_cast<int>(grid.number("dim", c.pipeline == PipelineKind::bore_2d ? 2 : 1));
  if (dim == 1) {
    c.grid = GridSpec::line(grid.number("L"), grid.count("N"));
  } else if (dim == 2) {
    c.grid = GridSpec::plane(grid.number("Lx"), grid.number("Ly"), grid.count("Nx"), grid.count("Ny"));
  } else {
    throw ConfigError("expected 1 or 2", "grid.dim");
  }
  grid.finish();

  Section params = root.child("params");
  if (!params.present()) throw ConfigError("missing required table", "params");
  c.params.b = params.number("b");
  c.params.d = params.number("d");
  c.params.eps = params.number("eps");
  c.params.beta = params.number("beta", 1.0);
  c.params.enforce_bbm_sum = params.boolean("enforce_bbm_sum", false);
  params.finish();

  Section init = root.child("init");
  if (!init.present()) throw ConfigError("missing required table", "init");
  c.init.kind = init.text("kind");
  const std::set<std::string> kinds{"tanh", "smoothed-step", "custom-samples", "gaussian", "sech2", "zero"};
  if (!kinds.count(c.init.kind)) {
    throw ConfigError("unknown kind '" + c.init.kind +
                          "' (expected tanh, smoothed-step, custom-samples, gaussian, sech2 or zero)",
                      "init.kind");
  }
  if (c.init.is_bore()) {
    c.init.eta_minus = init.number("eta_minus");
    c.init.eta_plus = init.number("eta_plus");
  }
  c.init.u_minus = init.number("u_minus", 0.0);
  c.init.u_plus = init.number("u_plus", 0.0);
  c.init.steepness = init.number("steepness", 1.0);
  c.init.center = init.number("center", 0.0);
  if (c.init.kind == "gaussian" || c.init.kind == "sech2") {
    c.init.amplitude = init.number("amplitude");
    c.init.width = init.number("width", 1.0);
  }
  c.init.right_moving = init.boolean("right_moving", false);
  if (init.has("samples_file")) {
    std::filesystem::path p = init.text("samples_file");
    c.init.samples_file = p.is_relative() ? base_dir / p : p;
  }
  Section pert = init.child("perturbation");
  if (pert.present()) {
    InitConfig::Perturbation p;
    p.amplitude = pert.number("amplitude");
    p.width = pert.number("width");
    p.center = pert.number("center", 0.0);
    c.init.perturbation = p;
  }
  pert.finish();
  init.finish();

  Section solver = root.child("solver");
  if (!solver.present()) throw ConfigError("missing required table", "solver");
  c.solver.dt = solver.number("dt");
  c.solver.t_end = solver.number("t_end");
  c.solver.friedrichs_m = solver.optional_number("m");
  if (solver.has("max_steps")) c.solver.max_steps = static_cast<long>(solver.count("max_steps"));
  c.solver.dealias = solver.boolean("dealias", true);
  solver.finish();

  Section ledger = root.child("ledger");
  c.ledger.stride = ledger.number("stride", c.ledger.stride);
  c.ledger.s = ledger.number("s", c.ledger.s);
  c.ledger.r = ledger.exponent("r", c.ledger.r);
  c.ledger.blocks = ledger.integers("blocks");
  c.ledger.threshold_factor = ledger.number("threshold_factor", c.ledger.threshold_factor);
  c.ledger.halt_on_threshold = ledger.boolean("halt_on_threshold", false);
  // Long bore runs radiate into the buffer by design; only direct runs abort.
  c.ledger.abort_on_leak = ledger.boolean("abort_on_leak", c.pipeline == PipelineKind::direct);
  c.ledger.leak_tolerance = ledger.number("leak_tolerance", c.ledger.leak_tolerance);
  ledger.finish();

  Section output = root.child("output");
  c.output.svg = output.boolean("svg", true);
  c.output.snapshots = output.boolean("snapshots", false);
  output.finish();
  root.finish();

  c.validate();
  c.echo = make_echo(c);
  return c;
}

RunConfig parse_config(const std::string& text, bool is_json, const std::string& origin,
                       const std::filesystem::path& base_dir) {
  nlohmann::json doc;
  if (is_json) {
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(origin + ": byte " + std::to_string(e.byte) + ": " + e.what());
    }
  } else {
    try {
      const toml::table table = toml::parse(text, origin);
      doc = toml_to_json(table);
    } catch (const toml::parse_error& e) {
      const auto& pos = e.source().begin;
      throw ConfigError(origin + ":" + std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                        std::string(e.description()));
    }
  }
  return config_from_json(doc, base_dir);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.extension() == ".json", path.string(), path.parent_path());
}

}  // namespace bbm
