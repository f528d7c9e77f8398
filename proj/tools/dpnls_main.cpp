// dpnls: batch front end. Exit codes: 0 success, 1 acceptance failure, 2 input/config error.
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dpnls/acceptance.hpp"
#include "dpnls/asymptotics.hpp"
#include "dpnls/config.hpp"
#include "dpnls/io.hpp"

namespace fs = std::filesystem;
using namespace dpnls;

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> overrides;
  std::string output;
  std::string data;
  std::string profile_csv;
  bool quiet = false;
};

RunConfig resolve(const std::string& command, const Flags& f) {
  std::vector<std::string> ov = f.overrides;
  ov.insert(ov.begin(), "command=" + command);
  if (const char* env = std::getenv("DPNLS_OUTPUT_DIR"); env && *env) ov.insert(ov.begin() + 1, std::string("output_dir=") + env);
  if (!f.output.empty()) ov.push_back("output_dir=" + f.output);
  if (!f.data.empty()) ov.push_back("source.data=" + f.data);
  if (!f.profile_csv.empty()) ov.push_back("source.profile.csv=" + f.profile_csv);
  RunConfig c = f.config.empty() ? parse_config("", ov) : load_config(f.config, ov);
  c.validate();
  return c;
}

ScatteringData scatter_profile(const RunConfig& c, const InitialProfile& profile, bool quiet) {
  profile.check_tail(c.scatter.jost.tail_tol);
  ReflectionOptions ro;
  ro.jost = c.scatter.jost;
  ScatteringData sd =
      reflection_coefficient(profile, UniformGrid::span(c.scatter.z_lo, c.scatter.z_hi, c.scatter.z_points), ro);
  if (!c.scatter.find_zeros) return sd;
  ZeroSearchOptions zo;
  zo.tol = c.scatter.zero_tol;
  zo.jost = c.scatter.jost;
  const auto zeros = locate_zeros(profile, c.scatter.box, zo);
  NormingOptions no;
  no.jost = c.scatter.jost;
  no.ratio_tol = c.scatter.ratio_tol;
  for (std::size_t k = 0; k < zeros.size(); ++k) {
    std::vector<cplx> others;
    for (std::size_t j = 0; j < zeros.size(); ++j)
      if (j != k) others.push_back(zeros[j].z);
    sd.discrete.push_back(norming_constants(profile, zeros[k].z, zeros[k].multiplicity, others, no));
    if (!quiet)
      std::cout << "zero " << format_number(zeros[k].z.real()) << " + " << format_number(zeros[k].z.imag())
                << "i, multiplicity " << zeros[k].multiplicity << '\n';
  }
  return sd;
}

// Scattering data from whichever source the config names; profiles are scattered first.
ScatteringData scattering_of(const RunConfig& c, bool quiet) {
  if (c.profile) return scatter_profile(c, c.profile->build(), quiet);
  return c.load_data();
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 1) return {lo};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

int cmd_scatter(const RunConfig& c, bool quiet) {
  const ScatteringData sd = scatter_profile(c, c.profile->build(), quiet);
  const fs::path out(c.output_dir);
  write_scattering(out / "scattering.json", sd);
  write_reflection_csv(out / "reflection.csv", sd);
  if (!quiet)
    std::cout << sd.discrete.size() << " discrete point(s); wrote " << (out / "scattering.json").string() << '\n';
  return 0;
}

int cmd_soliton(const RunConfig& c, bool quiet) {
  const ScatteringData sd = c.load_data();
  const auto xs = linspace(c.soliton.x_lo, c.soliton.x_hi, c.soliton.x_points);
  const auto ts = linspace(c.soliton.t_lo, c.soliton.t_hi, c.soliton.t_points);
  std::vector<std::vector<cplx>> q(ts.size(), std::vector<cplx>(xs.size()));
  if (!sd.discrete.empty()) {
    const OrientedData data = OrientedData::all_lower(sd.discrete);
    data.validate();
    parallel_for(ts.size(), [&](std::size_t s) {
      for (std::size_t j = 0; j < xs.size(); ++j) q[s][j] = soliton_q(sd.discrete, xs[j], ts[s]);
    });
  }
  const fs::path path = fs::path(c.output_dir) / "soliton.csv";
  CsvWriter w(path, {"x", "t", "re_q", "im_q"});
  for (std::size_t s = 0; s < ts.size(); ++s)
    for (std::size_t j = 0; j < xs.size(); ++j) w.row({xs[j], ts[s], q[s][j].real(), q[s][j].imag()});
  w.close();
  if (!quiet) std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_asymptote(const RunConfig& c, bool quiet) {
  const ScatteringData sd = scattering_of(c, quiet);
  const Cone& cone = c.asymptote.cone;
  AsymptoticOptions opt;
  opt.t_min = c.asymptote.t_min;
  for (double t : c.asymptote.times) {
    if (!(t >= opt.t_min)) {
      std::ostringstream os;
      os << "t = " << t << " is below the asymptotic guard t_min = " << opt.t_min;
      throw DomainError(os.str());
    }
  }
  std::vector<std::vector<AsymptoticValue>> rows(c.asymptote.times.size());
  parallel_for(rows.size(), [&](std::size_t s) {
    const double t = c.asymptote.times[s];
    for (double x : linspace(cone.x1 + cone.v1 * t, cone.x2 + cone.v2 * t, c.asymptote.x_points))
      rows[s].push_back(q_asymptotic(x, t, sd, cone, opt));
  });
  const fs::path path = fs::path(c.output_dir) / "asymptote.csv";
  CsvWriter w(path, {"x", "t", "re_q_sol", "im_q_sol", "re_f", "im_f", "re_q_total", "im_q_total"});
  for (const auto& row : rows)
    for (const auto& v : row)
      w.row({v.x, v.t, v.q_sol_part.real(), v.q_sol_part.imag(), v.f_part.real(), v.f_part.imag(),
             v.q_total.real(), v.q_total.imag()});
  w.close();
  if (!quiet) std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int cmd_evolve(const RunConfig& c, bool quiet) {
  const PeriodicGrid& g = c.evolve.grid;
  std::vector<cplx> q0(g.modes);
  if (c.profile) {
    const InitialProfile p = c.profile->build();
    for (std::size_t j = 0; j < g.modes; ++j) q0[j] = p(g.x(j));
  } else {
    const ScatteringData sd = c.load_data();
    if (!sd.discrete.empty())
      for (std::size_t j = 0; j < g.modes; ++j) q0[j] = soliton_q(sd.discrete, g.x(j), 0.0);
  }
  SplitStepOptions so;
  so.dt = c.evolve.dt;
  const SpaceTimeField field = split_step(q0, g, c.evolve.save_times, so);
  const fs::path dir = fs::path(c.output_dir) / "field";
  write_field(dir, field);
  CsvWriter w(fs::path(c.output_dir) / "invariants.csv", {"t", "mass", "momentum", "energy"});
  const auto inv = conserved(field);
  for (std::size_t s = 0; s < inv.size(); ++s) w.row({field.t[s], inv[s].mass, inv[s].momentum, inv[s].energy});
  w.close();
  if (!quiet) std::cout << "wrote " << dir.string() << " (" << field.slices() << " slices)\n";
  return 0;
}

int cmd_compare(const RunConfig& c, bool quiet) {
  if (c.compare.field_a.empty()) throw InputError("compare needs compare.field_a");
  const SpaceTimeField a = read_field(c.compare.field_a);
  const RegionFn region = [&](double) { return std::pair{c.compare.x_lo, c.compare.x_hi}; };
  std::vector<ErrorRow> rows;
  if (!c.compare.field_b.empty()) {
    rows = compare(a, read_field(c.compare.field_b), region, c.compare.scale_exponent);
  } else {
    const ScatteringData sd = c.load_data();
    const FieldFn exact = [&](double x, double t) {
      return sd.discrete.empty() ? cplx(0.0) : soliton_q(sd.discrete, x, t);
    };
    rows = compare(a, exact, region, c.compare.scale_exponent);
  }
  const fs::path path = fs::path(c.output_dir) / "compare.csv";
  CsvWriter w(path, {"t", "linf", "l2"});
  for (const auto& r : rows) w.row({r.t, r.linf, r.l2});
  w.close();
  if (!quiet)
    for (const auto& r : rows)
      std::cout << "t " << format_number(r.t) << "  linf " << format_number(r.linf) << "  l2 " << format_number(r.l2)
                << '\n';
  return 0;
}

int cmd_verify(const RunConfig& c, bool quiet) {
  AcceptanceOptions opt;
  opt.fixtures = c.verify.fixtures.empty() ? default_fixture_dir() : fs::path(c.verify.fixtures);
  for (int id : c.verify.criteria)
    for (const auto& f : required_fixtures(id))
      if (!fs::exists(opt.fixtures / f)) throw InputError("missing fixture " + (opt.fixtures / f).string());
  std::vector<CriterionResult> results;
  for (int id : c.verify.criteria) {
    results.push_back(run_criterion(id, opt));
    if (!quiet) std::cout << format_result(results.back()) << std::endl;
  }
  const fs::path report = fs::path(c.output_dir) / "verify_report.json";
  fs::create_directories(report.parent_path());
  std::ofstream(report) << report_json(results) << '\n';
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  if (!quiet) std::cout << (all ? "all criteria pass" : "some criteria FAILED") << "; report " << report.string() << '\n';
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-pole focusing NLS: scattering, solitons, long-time asymptotics and a split-step oracle"};
  app.require_subcommand(0, 1);
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the reference configuration with all defaults");

  Flags flags;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", flags.config, "YAML configuration file")->check(CLI::ExistingFile);
    sub->add_option("--set", flags.overrides, "override a config key, e.g. --set scatter.z_points=401");
    sub->add_option("-o,--output", flags.output, "output directory (overrides config and DPNLS_OUTPUT_DIR)");
    sub->add_flag("-q,--quiet", flags.quiet, "suppress progress output");
  };
  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", flags.data, "scattering/discrete data JSON");
    sub->add_option("--profile-csv", flags.profile_csv, "initial profile x,re,im CSV");
  };

  struct Sub {
    const char* name;
    const char* help;
    bool data;
    int (*run)(const RunConfig&, bool);
  };
  const Sub subs[] = {
      {"scatter", "forward scattering of a profile: r(z), zeros of s11, norming constants", true, cmd_scatter},
      {"soliton", "soliton field on an (x, t) grid from discrete data", true, cmd_soliton},
      {"asymptote", "long-time asymptotic values across a cone", true, cmd_asymptote},
      {"evolve", "split-step evolution of a profile or soliton initial slice", true, cmd_evolve},
      {"verify", "run the acceptance suite and write a report", false, cmd_verify},
      {"compare", "per-slice errors between a stored field and a reference", true, cmd_compare},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> handles;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub);
    if (s.data) add_data(sub);
    handles.emplace_back(sub, &s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (print_config) {
    std::cout << reference_config();
    return 0;
  }

  for (const auto& [sub, s] : handles) {
    if (!sub->parsed()) continue;
    try {
      const RunConfig cfg = resolve(s->name, flags);
      if (flags.quiet) set_warning_sink([](const std::string&) {});
      return s->run(cfg, flags.quiet);
    } catch (const SpectralSingularityError& e) {
      std::cerr << "error: " << e.what() << " (z = " << format_number(e.z()) << ")\n";
      return 2;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  std::cout << app.help();
  return 0;
}
