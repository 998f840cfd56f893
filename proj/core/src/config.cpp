#include "benjamin/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "benjamin/errors.hpp"

namespace benjamin {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"run", {"N", "dt", "t0", "T_final", "sample_stride", "s", "nonlinear", "self_check", "fit_start", "fit_end",
               "output_dir", "seed"}},
      {"physics", {"alpha", "mu"}},
      {"gain", {"kind", "center", "width"}},
      {"feedback", {"law", "gain", "lambda", "a", "quad_nodes", "method", "period_T", "r0", "delta"}},
      {"initial", {"kind", "amplitude", "mode", "norm", "norm_s", "seed", "path"}},
      {"target", {"kind", "amplitude", "mode", "norm", "norm_s", "seed", "path"}},
      {"control", {"horizon", "tol", "max_iter", "small_norm", "max_damp_time", "damp_chunk", "damp_dt", "damp_lambda", "damp_horizon"}},
  };
  return keys;
}

template <class T>
T read(const pt::ptree& tree, const std::string& path, T fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(path, '.'));
  if (!node) return fallback;
  const auto value = node->get_value_optional<T>();
  if (!value) throw ConfigError("cannot parse '" + path + "' from '" + node->data() + "'");
  return *value;
}

bool read_bool(const pt::ptree& tree, const std::string& path, bool fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(path, '.'));
  if (!node) return fallback;
  const std::string v = node->data();
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("cannot parse '" + path + "' as a boolean from '" + v + "'");
}

InitialCondition read_profile(const pt::ptree& tree, const std::string& section, InitialCondition ic) {
  const std::string kind = read<std::string>(tree, section + ".kind", "");
  if (kind == "zero") ic.kind = InitialCondition::Kind::kZero;
  else if (kind == "cos") ic.kind = InitialCondition::Kind::kCosine;
  else if (kind == "sin") ic.kind = InitialCondition::Kind::kSine;
  else if (kind == "random") ic.kind = InitialCondition::Kind::kRandom;
  else if (kind == "file") ic.kind = InitialCondition::Kind::kFile;
  else if (!kind.empty()) throw ConfigError("unknown " + section + ".kind '" + kind + "'");
  ic.amplitude = read(tree, section + ".amplitude", ic.amplitude);
  ic.mode = read(tree, section + ".mode", ic.mode);
  ic.norm = read(tree, section + ".norm", ic.norm);
  ic.norm_s = read(tree, section + ".norm_s", ic.norm_s);
  ic.seed = read<std::uint64_t>(tree, section + ".seed", ic.seed);
  ic.path = read<std::string>(tree, section + ".path", ic.path);
  return ic;
}

std::string profile_kind(InitialCondition::Kind k) {
  switch (k) {
    case InitialCondition::Kind::kZero: return "zero";
    case InitialCondition::Kind::kCosine: return "cos";
    case InitialCondition::Kind::kSine: return "sin";
    case InitialCondition::Kind::kRandom: return "random";
    case InitialCondition::Kind::kFile: return "file";
  }
  return "?";
}

std::string method_name(AssemblyMethod m) {
  switch (m) {
    case AssemblyMethod::kExactKernel: return "exact";
    case AssemblyMethod::kSimpson: return "simpson";
    case AssemblyMethod::kGaussLegendre: return "gauss";
  }
  return "?";
}

AssemblyMethod parse_method(const std::string& s) {
  if (s == "exact") return AssemblyMethod::kExactKernel;
  if (s == "simpson") return AssemblyMethod::kSimpson;
  if (s == "gauss") return AssemblyMethod::kGaussLegendre;
  throw ConfigError("unknown feedback.method '" + s + "'");
}

std::string num(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

Config parse_config(std::istream& in, const Overrides& overrides) {
  // Trailing "; ..." or "# ..." comments are dropped; the INI reader only
  // understands whole-line ones.
  std::ostringstream text;
  std::string line;
  while (std::getline(in, line)) {
    for (std::size_t i = 1; i < line.size(); ++i) {
      if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
        line.erase(i);
        break;
      }
    }
    text << line << '\n';
  }
  std::istringstream clean(text.str());
  pt::ptree tree;
  try {
    pt::read_ini(clean, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() || key.find('.', dot + 1) != std::string::npos) {
      throw ConfigError("override '" + key + "' is not of the form section.key");
    }
    tree.put(pt::ptree::path_type(key, '.'), value);
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) throw ConfigError("key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
    }
  }

  Config cfg;
  RunConfig& r = cfg.run;
  r.N = read(tree, "run.N", r.N);
  r.dt = read(tree, "run.dt", r.dt);
  r.t0 = read(tree, "run.t0", r.t0);
  r.T_final = read(tree, "run.T_final", r.T_final);
  r.sample_stride = read(tree, "run.sample_stride", r.sample_stride);
  r.s = read(tree, "run.s", r.s);
  r.nonlinear = read_bool(tree, "run.nonlinear", r.nonlinear);
  r.self_check = read_bool(tree, "run.self_check", r.self_check);
  r.output_dir = read<std::string>(tree, "run.output_dir", r.output_dir);
  r.seed = read<std::uint64_t>(tree, "run.seed", r.seed);
  const bool has_start = tree.get_child_optional("run.fit_start").has_value();
  const bool has_end = tree.get_child_optional("run.fit_end").has_value();
  if (has_start || has_end) {
    const auto fallback = r.decay_window();
    r.fit_window = std::pair{read(tree, "run.fit_start", fallback.first), read(tree, "run.fit_end", fallback.second)};
  }

  r.params.alpha = read(tree, "physics.alpha", r.params.alpha);
  r.params.mu = read(tree, "physics.mu", r.params.mu);

  const std::string gain_kind = read<std::string>(tree, "gain.kind", "raised_cosine");
  if (gain_kind == "raised_cosine") r.gain.kind = GainSpec::Kind::kRaisedCosine;
  else if (gain_kind == "uniform") r.gain.kind = GainSpec::Kind::kUniform;
  else throw ConfigError("unknown gain.kind '" + gain_kind + "'");
  r.gain.center = read(tree, "gain.center", r.gain.center);
  r.gain.width = read(tree, "gain.width", r.gain.width);

  const std::string law = read<std::string>(tree, "feedback.law", "none");
  const double lambda = read(tree, "feedback.lambda", 1.0);
  const double a = read(tree, "feedback.a", 1.0);
  const AssemblyMethod method = parse_method(read<std::string>(tree, "feedback.method", "exact"));
  if (law == "none") {
    r.feedback = NoFeedback{};
  } else if (law == "ggstar") {
    r.feedback = DampingGGstar{read(tree, "feedback.gain", 1.0)};
  } else if (law == "klambda") {
    KLambda k;
    k.spec.lambda = lambda;
    k.spec.a = a;
    k.spec.quad_nodes = read(tree, "feedback.quad_nodes", k.spec.quad_nodes);
    k.spec.method = method;
    r.feedback = k;
  } else if (law == "timevarying") {
    TimeVarying tv;
    tv.spec.lambda = read(tree, "feedback.lambda", tv.spec.lambda);
    tv.spec.period_T = read(tree, "feedback.period_T", tv.spec.period_T);
    tv.spec.r0 = read(tree, "feedback.r0", tv.spec.r0);
    tv.spec.delta = read(tree, "feedback.delta", tv.spec.delta);
    tv.a = a;
    tv.method = method;
    r.feedback = tv;
  } else {
    throw ConfigError("unknown feedback.law '" + law + "'");
  }

  r.initial = read_profile(tree, "initial", r.initial);
  InitialCondition target;
  target.kind = InitialCondition::Kind::kSine;
  target.mode = 2;
  cfg.control.target = read_profile(tree, "target", target);

  ControlOptions& c = cfg.control;
  c.horizon = read(tree, "control.horizon", c.horizon);
  c.tol = read(tree, "control.tol", c.tol);
  c.max_iter = read(tree, "control.max_iter", c.max_iter);
  c.large.small_norm = read(tree, "control.small_norm", c.large.small_norm);
  c.large.max_damp_time = read(tree, "control.max_damp_time", c.large.max_damp_time);
  c.large.damp_chunk = read(tree, "control.damp_chunk", c.large.damp_chunk);
  c.large.damp_dt = read(tree, "control.damp_dt", c.large.damp_dt);
  c.large.damp_lambda = read(tree, "control.damp_lambda", c.large.damp_lambda);
  c.large.damp_horizon = read(tree, "control.damp_horizon", c.large.damp_horizon);
  c.large.control_time = c.horizon;
  c.large.picard_tol = c.tol;
  c.large.max_iter = c.max_iter;

  r.validate();
  if (!(c.horizon > 0.0) || !(c.tol > 0.0) || c.max_iter < 1) {
    throw ConfigError("control needs horizon > 0, tol > 0 and max_iter >= 1");
  }
  if (!(c.large.small_norm > 0.0) || !(c.large.damp_dt >= 0.0) || !(c.large.damp_chunk > 0.0) ||
      !(c.large.damp_lambda >= 0.0) || !(c.large.damp_horizon > 0.0)) {
    throw ConfigError("control damping parameters must be positive");
  }
  return cfg;
}

Config load_config(const std::string& path, const Overrides& overrides) {
  if (path.empty()) {
    std::istringstream empty;
    return parse_config(empty, overrides);
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in, overrides);
}

std::pair<std::string, std::string> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  const auto dot = text.find('.');
  if (eq == std::string::npos || dot == 0 || dot >= eq - 1) throw ConfigError("expected section.key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::pair<std::string, std::string>> describe(const Config& cfg) {
  const RunConfig& r = cfg.run;
  std::vector<std::pair<std::string, std::string>> kv = {
      {"run.N", std::to_string(r.N)},
      {"run.dt", num(r.dt)},
      {"run.t0", num(r.t0)},
      {"run.T_final", num(r.T_final)},
      {"run.sample_stride", std::to_string(r.sample_stride)},
      {"run.s", num(r.s)},
      {"run.nonlinear", r.nonlinear ? "true" : "false"},
      {"run.self_check", r.self_check ? "true" : "false"},
      {"run.fit_start", num(r.decay_window().first)},
      {"run.fit_end", num(r.decay_window().second)},
      {"run.output_dir", r.output_dir},
      {"run.seed", std::to_string(r.seed)},
      {"physics.alpha", num(r.params.alpha)},
      {"physics.mu", num(r.params.mu)},
      {"gain.kind", r.gain.kind == GainSpec::Kind::kUniform ? "uniform" : "raised_cosine"},
      {"gain.center", num(r.gain.center)},
      {"gain.width", num(r.gain.width)},
      {"feedback.law", feedback_name(r.feedback)},
  };
  if (const auto* d = std::get_if<DampingGGstar>(&r.feedback)) kv.emplace_back("feedback.gain", num(d->gain));
  if (const auto* k = std::get_if<KLambda>(&r.feedback)) {
    kv.emplace_back("feedback.lambda", num(k->spec.lambda));
    kv.emplace_back("feedback.a", num(k->spec.a));
    kv.emplace_back("feedback.quad_nodes", std::to_string(k->spec.quad_nodes));
    kv.emplace_back("feedback.method", method_name(k->spec.method));
  }
  if (const auto* tv = std::get_if<TimeVarying>(&r.feedback)) {
    kv.emplace_back("feedback.lambda", num(tv->spec.lambda));
    kv.emplace_back("feedback.period_T", num(tv->spec.period_T));
    kv.emplace_back("feedback.r0", num(tv->spec.r0));
    kv.emplace_back("feedback.delta", num(tv->spec.delta));
    kv.emplace_back("feedback.a", num(tv->a));
    kv.emplace_back("feedback.method", method_name(tv->method));
  }
  for (const auto& [section, ic] : {std::pair{"initial", r.initial}, std::pair{"target", cfg.control.target}}) {
    const std::string p = section;
    kv.emplace_back(p + ".kind", profile_kind(ic.kind));
    kv.emplace_back(p + ".amplitude", num(ic.amplitude));
    kv.emplace_back(p + ".mode", std::to_string(ic.mode));
    kv.emplace_back(p + ".norm", num(ic.norm));
    kv.emplace_back(p + ".norm_s", num(ic.norm_s));
    kv.emplace_back(p + ".seed", std::to_string(ic.seed));
    if (!ic.path.empty()) kv.emplace_back(p + ".path", ic.path);
  }
  const ControlOptions& c = cfg.control;
  kv.emplace_back("control.horizon", num(c.horizon));
  kv.emplace_back("control.tol", num(c.tol));
  kv.emplace_back("control.max_iter", std::to_string(c.max_iter));
  kv.emplace_back("control.small_norm", num(c.large.small_norm));
  kv.emplace_back("control.max_damp_time", num(c.large.max_damp_time));
  kv.emplace_back("control.damp_chunk", num(c.large.damp_chunk));
  kv.emplace_back("control.damp_dt", num(c.large.damp_dt));
  kv.emplace_back("control.damp_lambda", num(c.large.damp_lambda));
  kv.emplace_back("control.damp_horizon", num(c.large.damp_horizon));
  return kv;
}

}  // namespace benjamin
