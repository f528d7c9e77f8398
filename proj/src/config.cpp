#include "dpnls/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "dpnls/io.hpp"

namespace dpnls {

const std::string& reference_config() {
  static const std::string text = R"(# dpnls run configuration. Every key below shows its default.
# Flags of the form --set section.key=value override any key.

command: ""              # scatter | soliton | asymptote | evolve | verify | compare
output_dir: dpnls_out    # DPNLS_OUTPUT_DIR overrides this

# Exactly one data source (not needed by verify):
# source:
#   profile:
#     csv: ""            # file with rows x,re,im on a uniform grid; or a built-in:
#     kind: sech         # sech: A sech(x/width); gaussian: A exp(-(x-center)^2 + i chirp x^2)
#     amplitude: 1.0
#     width: 1.0
#     center: 0.0
#     chirp: 0.0
#     x_lo: -30.0
#     x_hi: 30.0
#     points: 6001
#   data: file.json      # scattering document (r samples and/or discrete data)
#   discrete:            # inline discrete data
#     - {z: [0.0, 1.0], order: 2, c0: [0.0, 0.0], c1: [1.0, 0.0]}

scatter:
  z_lo: -8.0             # real grid for r(z)
  z_hi: 8.0
  z_points: 801
  box: [-4.0, 0.05, 4.0, 4.0]   # zero search box: re_lo, im_lo, re_hi, im_hi
  find_zeros: true
  abs_tol: 1.0e-12       # Jost ODE tolerances
  rel_tol: 1.0e-12
  tail_tol: 1.0e-10      # relative |q0| at the grid ends
  zero_tol: 1.0e-6       # double-zero classification
  ratio_tol: 1.0e-6      # norming-constant proportionality check

soliton:
  x_lo: -20.0
  x_hi: 20.0
  x_points: 401
  t_lo: 0.0
  t_hi: 1.0
  t_points: 11

asymptote:
  cone: [-1.0, 1.0, -0.5, 0.5]  # x1, x2, v1, v2: x1 + v1 t <= x <= x2 + v2 t
  times: [20.0, 40.0, 80.0]
  x_points: 41           # samples across the cone at each time
  t_min: 5.0

evolve:
  lo: -125.66370614359172   # periodic domain [lo, hi) = [-40 pi, 40 pi)
  hi: 125.66370614359172
  modes: 4096
  dt: 1.0e-3
  save_times: [0.0, 1.0]

verify:
  criteria: [1, 2, 3, 4, 5, 6, 7]
  fixtures: ""           # default: the fixture directory of the build

compare:
  field_a: ""            # field directory written by evolve
  field_b: ""            # second field directory; empty compares against the soliton field
  x_lo: -20.0
  x_hi: 20.0
  scale_exponent: 0.0
)";
  return text;
}

namespace {

void merge(YAML::Node base, const YAML::Node& over) {
  if (!over.IsMap()) return;
  for (const auto& kv : over) {
    const auto key = kv.first.as<std::string>();
    if (kv.second.IsMap() && base[key] && base[key].IsMap())
      merge(base[key], kv.second);
    else
      base[key] = YAML::Clone(kv.second);
  }
}

void apply_override(YAML::Node root, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("override must look like key.path=value: " + spec);
  const std::string path = spec.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(spec.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw InputError("bad override value in '" + spec + "': " + e.what());
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string k; std::getline(ss, k, '.');) keys.push_back(k);
  std::vector<YAML::Node> chain{root};
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node next = chain.back()[keys[i]];
    if (!next || !next.IsMap()) {
      chain.back()[keys[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[keys[i]];
    }
    chain.push_back(next);
  }
  chain.back()[keys.back()] = value;
}

template <class T>
T get(const YAML::Node& n, const char* key, const std::string& where) {
  try {
    return n[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw InputError("config key " + where + "." + key + ": " + e.what());
  }
}

cplx get_c(const YAML::Node& n, const char* key) {
  const auto v = n[key];
  if (!v) return 0.0;
  if (!v.IsSequence() || v.size() != 2) throw InputError(std::string("config: expected [re, im] for ") + key);
  return {v[0].as<double>(), v[1].as<double>()};
}

RunConfig from_node(const YAML::Node& root) {
  RunConfig c;
  c.command = get<std::string>(root, "command", "");
  c.output_dir = get<std::string>(root, "output_dir", "");

  if (const auto src = root["source"]; src && !src.IsNull()) {
    if (const auto p = src["profile"]) {
      ProfileSource ps;
      ps.csv = p["csv"] ? p["csv"].as<std::string>() : "";
      if (p["kind"]) ps.kind = p["kind"].as<std::string>();
      if (p["amplitude"]) ps.amplitude = p["amplitude"].as<double>();
      if (p["width"]) ps.width = p["width"].as<double>();
      if (p["center"]) ps.center = p["center"].as<double>();
      if (p["chirp"]) ps.chirp = p["chirp"].as<double>();
      if (p["x_lo"]) ps.x_lo = p["x_lo"].as<double>();
      if (p["x_hi"]) ps.x_hi = p["x_hi"].as<double>();
      if (p["points"]) ps.points = p["points"].as<std::size_t>();
      c.profile = ps;
    }
    if (const auto d = src["data"]) c.data_file = d.as<std::string>();
    if (const auto list = src["discrete"]) {
      std::vector<DiscreteDatum> pts;
      for (const auto& e : list) {
        DiscreteDatum dd;
        dd.z = get_c(e, "z");
        dd.order = e["order"] ? e["order"].as<int>() : 2;
        dd.c0 = get_c(e, "c0");
        dd.c1 = get_c(e, "c1");
        pts.push_back(dd);
      }
      c.discrete = pts;
    }
  }

  const auto s = root["scatter"];
  c.scatter.z_lo = get<double>(s, "z_lo", "scatter");
  c.scatter.z_hi = get<double>(s, "z_hi", "scatter");
  c.scatter.z_points = get<std::size_t>(s, "z_points", "scatter");
  const auto box = get<std::vector<double>>(s, "box", "scatter");
  if (box.size() != 4) throw InputError("scatter.box needs four numbers");
  c.scatter.box = Box{cplx(box[0], box[1]), cplx(box[2], box[3])};
  c.scatter.find_zeros = get<bool>(s, "find_zeros", "scatter");
  c.scatter.jost.abs_tol = get<double>(s, "abs_tol", "scatter");
  c.scatter.jost.rel_tol = get<double>(s, "rel_tol", "scatter");
  c.scatter.jost.tail_tol = get<double>(s, "tail_tol", "scatter");
  c.scatter.zero_tol = get<double>(s, "zero_tol", "scatter");
  c.scatter.ratio_tol = get<double>(s, "ratio_tol", "scatter");

  const auto so = root["soliton"];
  c.soliton.x_lo = get<double>(so, "x_lo", "soliton");
  c.soliton.x_hi = get<double>(so, "x_hi", "soliton");
  c.soliton.x_points = get<std::size_t>(so, "x_points", "soliton");
  c.soliton.t_lo = get<double>(so, "t_lo", "soliton");
  c.soliton.t_hi = get<double>(so, "t_hi", "soliton");
  c.soliton.t_points = get<std::size_t>(so, "t_points", "soliton");

  const auto a = root["asymptote"];
  const auto cone = get<std::vector<double>>(a, "cone", "asymptote");
  if (cone.size() != 4) throw InputError("asymptote.cone needs four numbers");
  c.asymptote.cone = Cone{cone[0], cone[1], cone[2], cone[3]};
  c.asymptote.times = get<std::vector<double>>(a, "times", "asymptote");
  c.asymptote.x_points = get<std::size_t>(a, "x_points", "asymptote");
  c.asymptote.t_min = get<double>(a, "t_min", "asymptote");

  const auto e = root["evolve"];
  c.evolve.grid.lo = get<double>(e, "lo", "evolve");
  c.evolve.grid.hi = get<double>(e, "hi", "evolve");
  c.evolve.grid.modes = get<std::size_t>(e, "modes", "evolve");
  c.evolve.dt = get<double>(e, "dt", "evolve");
  c.evolve.save_times = get<std::vector<double>>(e, "save_times", "evolve");

  const auto v = root["verify"];
  c.verify.criteria = get<std::vector<int>>(v, "criteria", "verify");
  c.verify.fixtures = get<std::string>(v, "fixtures", "verify");

  const auto cmp = root["compare"];
  c.compare.field_a = get<std::string>(cmp, "field_a", "compare");
  c.compare.field_b = get<std::string>(cmp, "field_b", "compare");
  c.compare.x_lo = get<double>(cmp, "x_lo", "compare");
  c.compare.x_hi = get<double>(cmp, "x_hi", "compare");
  c.compare.scale_exponent = get<double>(cmp, "scale_exponent", "compare");
  return c;
}

}  // namespace

InitialProfile ProfileSource::build() const {
  if (!csv.empty()) return read_profile_csv(csv);
  const UniformGrid g = UniformGrid::span(x_lo, x_hi, points);
  if (kind == "sech") return sech_profile(amplitude, g, width);
  if (kind == "gaussian") return gaussian_profile(amplitude, g, center, chirp);
  throw InputError("unknown profile kind '" + kind + "' (sech or gaussian)");
}

ScatteringData RunConfig::load_data() const {
  if (data_file) return read_scattering(*data_file);
  if (discrete) return reflectionless_data(*discrete);
  throw InputError("this command needs scattering data (source.data or source.discrete)");
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"scatter", "soliton", "asymptote", "evolve", "verify", "compare"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw InputError("unknown command '" + command + "'");
  const int sources = (profile ? 1 : 0) + (data_file ? 1 : 0) + (discrete ? 1 : 0);
  if (sources > 1) throw InputError("give exactly one data source (profile, data or discrete)");
  const bool needs_source = command != "verify" && !(command == "compare" && !compare.field_b.empty());
  if (needs_source && sources == 0) throw InputError("command '" + command + "' needs a data source");
  if (command == "scatter" && !profile) throw InputError("scatter needs a profile source");

  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw InputError(std::string(name) + " must be positive");
  };
  positive(scatter.jost.abs_tol, "scatter.abs_tol");
  positive(scatter.jost.rel_tol, "scatter.rel_tol");
  positive(scatter.jost.tail_tol, "scatter.tail_tol");
  positive(scatter.zero_tol, "scatter.zero_tol");
  positive(scatter.ratio_tol, "scatter.ratio_tol");
  positive(evolve.dt, "evolve.dt");
  positive(asymptote.t_min, "asymptote.t_min");
  asymptote.cone.validate();
  evolve.grid.validate();
  if (scatter.z_points < 2 || !(scatter.z_hi > scatter.z_lo)) throw InputError("scatter z grid is empty");
  if (!(scatter.box.hi.real() > scatter.box.lo.real()) || !(scatter.box.hi.imag() > scatter.box.lo.imag()) ||
      !(scatter.box.lo.imag() > 0.0))
    throw InputError("scatter.box must be a nondegenerate box in the open upper half plane");
  if (soliton.x_points < 1 || soliton.t_points < 1) throw InputError("soliton grid is empty");
  if (discrete)
    for (const auto& d : *discrete) d.validate();
}

RunConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(reference_config());
    if (!yaml_text.empty()) {
      const YAML::Node user = YAML::Load(yaml_text);
      if (user && !user.IsNull() && !user.IsMap()) throw InputError("config must be a YAML mapping");
      merge(root, user);
    }
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(root, o);
  try {
    return from_node(root);
  } catch (const YAML::Exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

}  // namespace dpnls
