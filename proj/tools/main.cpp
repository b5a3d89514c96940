// torusdyn: numerical laboratory for skew-product endomorphisms of T^2.
//
// Subcommands: sweep, bisect, orbit, ulam, phi-check, cones, trap-check,
// smooth.  Every run writes its artifacts plus manifest.json and
// resolved.cfg; re-running the same subcommand with `--config resolved.cfg`
// reproduces the outputs byte for byte.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "torusdyn/bifurcation.hpp"
#include "torusdyn/bump.hpp"
#include "torusdyn/cones.hpp"
#include "torusdyn/dynamics.hpp"
#include "torusdyn/io.hpp"
#include "torusdyn/transfer.hpp"

namespace td = torusdyn;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using KvMap = std::map<std::string, std::string>;

KvMap default_config() {
  return {
      {"family", "experimental"},
      {"params.m", "7"},
      {"params.a", "0"},
      {"params.delta", "0.01"},
      {"params.epsilon", "0.01"},
      {"orbit.burn_in", "1000"},
      {"orbit.length", "1000000"},
      {"orbit.seed", "1"},
      {"grid.nx", "256"},
      {"grid.ny", "256"},
      {"grid.cells", "4096"},
      {"grid.samples_per_cell", "64"},
      {"output.dir", "."},
      {"output.gamma", "0.5"},
      {"sweep.a_lo", "-0.02"},
      {"sweep.a_hi", "0.02"},
      {"sweep.step", "0.001"},
      {"bisect.lo", "-0.004"},
      {"bisect.hi", "0.004"},
      {"bisect.resolution", "0.0001"},
      {"smooth.a_center", "0.01"},
      {"smooth.h_list", "0.002,0.001,0.0005"},
      {"cones.grid", "64"},
      {"trap.grid", "4096"},
      {"expansion.n_max", "8"},
      {"expansion.grid", "4096"},
  };
}

double get_d(const KvMap& kv, const std::string& key) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(kv.at(key), &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not a number");
  }
  if (pos != kv.at(key).size())
    throw ConfigError("config: trailing junk in value of '" + key + "'");
  return v;
}

long get_l(const KvMap& kv, const std::string& key) {
  std::size_t pos = 0;
  long v;
  try {
    v = std::stol(kv.at(key), &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not an integer");
  }
  if (pos != kv.at(key).size())
    throw ConfigError("config: trailing junk in value of '" + key + "'");
  return v;
}

std::uint64_t get_u64(const KvMap& kv, const std::string& key) {
  try {
    return std::stoull(kv.at(key));
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' is not an integer");
  }
}

std::vector<double> get_dlist(const KvMap& kv, const std::string& key) {
  std::vector<double> out;
  std::istringstream ss(kv.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("config: key '" + key + "' is not a number list");
    }
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' is empty");
  return out;
}

void merge_config_file(KvMap& kv, const std::string& path) {
  KvMap file;
  try {
    file = td::parse_config_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(std::string(e.what()));
  }
  for (const auto& [k, v] : file) {
    if (!kv.count(k)) throw ConfigError("config: unknown key '" + k + "'");
    kv[k] = v;
  }
}

// The --config file is applied before CLI11 sees the flags, so explicit
// flags always win.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string s = argv[i];
    if (s == "--config" && i + 1 < argc) return argv[i + 1];
    if (s.rfind("--config=", 0) == 0) return s.substr(9);
  }
  return "";
}

std::string render_config(const KvMap& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

td::SkewSystem make_system(const KvMap& kv, double a) {
  const std::string& family = kv.at("family");
  int m = static_cast<int>(get_l(kv, "params.m"));
  double delta = get_d(kv, "params.delta");
  if (family == "experimental") return td::SkewSystem::experimental(a, delta, m);
  if (family == "theoretical")
    return td::SkewSystem::theoretical(m, get_d(kv, "params.epsilon"), a, delta);
  throw ConfigError("config: family must be 'theoretical' or 'experimental'");
}

td::FamilyFactory make_family(const KvMap& kv) {
  return [kv](double a) { return make_system(kv, a); };
}

td::OrbitSpec make_orbit_spec(const KvMap& kv) {
  td::OrbitSpec spec;
  spec.burn_in = get_l(kv, "orbit.burn_in");
  spec.length = get_l(kv, "orbit.length");
  spec.seed = get_u64(kv, "orbit.seed");
  return spec;
}

struct Emitter {
  std::filesystem::path dir;
  KvMap resolved;
  std::string subcommand;
  std::string config_path;
  bool quiet = false;

  void note(const std::string& msg) const {
    if (!quiet) std::printf("%s\n", msg.c_str());
  }

  std::string path(const std::string& name) const {
    return (dir / name).string();
  }

  void write_manifest(const json& results) const {
    json m;
    m["subcommand"] = subcommand;
    m["config"] = render_config(resolved);
    m["config_file"] = config_path;
    for (const auto& [k, v] : resolved) m["resolved"][k] = v;
    m["results"] = results;
    td::write_text_file(path("manifest.json"), m.dump(2) + "\n");
    td::write_text_file(path("resolved.cfg"), render_config(resolved));
  }
};

Emitter make_emitter(const KvMap& kv, const std::string& subcommand,
                     const std::string& config_path, bool quiet) {
  Emitter em;
  em.dir = kv.at("output.dir");
  em.resolved = kv;
  em.subcommand = subcommand;
  em.config_path = config_path;
  em.quiet = quiet;
  std::filesystem::create_directories(em.dir);
  return em;
}

int run_sweep(const KvMap& kv, const Emitter& em) {
  auto table = td::sweep(make_family(kv), kv.at("family"),
                         get_d(kv, "sweep.a_lo"), get_d(kv, "sweep.a_hi"),
                         get_d(kv, "sweep.step"), make_orbit_spec(kv));
  td::write_csv(td::to_csv(table), em.path("sweep.csv"));
  json res;
  res["rows"] = table.records.size();
  em.write_manifest(res);
  em.note("sweep: " + std::to_string(table.records.size()) + " rows -> " +
          em.path("sweep.csv"));
  return 0;
}

int run_bisect(const KvMap& kv, const Emitter& em) {
  auto sc = td::find_sign_change(make_family(kv), get_d(kv, "bisect.lo"),
                                 get_d(kv, "bisect.hi"),
                                 get_d(kv, "bisect.resolution"),
                                 make_orbit_spec(kv));
  json res;
  res["a0_bracket"] = {sc.lo, sc.hi};
  res["chi_at_lo"] = sc.chi_at_lo;
  res["chi_at_hi"] = sc.chi_at_hi;
  res["iterations"] = sc.iterations;
  res["noisy_midpoints"] = sc.noisy_midpoints;
  td::write_text_file(em.path("bisect.json"), res.dump(2) + "\n");
  em.write_manifest(res);
  em.note("bisect: a0 in [" + td::format_double(sc.lo) + ", " +
          td::format_double(sc.hi) + "]");
  return 0;
}

int run_orbit(const KvMap& kv, const Emitter& em) {
  td::SkewSystem F = make_system(kv, get_d(kv, "params.a"));
  int nx = static_cast<int>(get_l(kv, "grid.nx"));
  int ny = static_cast<int>(get_l(kv, "grid.ny"));
  td::DensityRaster raster = td::orbit_raster(F, make_orbit_spec(kv), nx, ny);
  td::write_pgm(raster, em.path("orbit.pgm"), get_d(kv, "output.gamma"));
  json res;
  res["total_points"] = raster.total;
  em.write_manifest(res);
  em.note("orbit: raster " + std::to_string(nx) + "x" + std::to_string(ny) +
          " -> " + em.path("orbit.pgm"));
  return 0;
}

int run_ulam(const KvMap& kv, const Emitter& em) {
  td::SkewSystem F = make_system(kv, get_d(kv, "params.a"));
  int nx = static_cast<int>(get_l(kv, "grid.nx"));
  int ny = static_cast<int>(get_l(kv, "grid.ny"));
  td::UlamOperator op =
      td::ulam_2d(F, nx, ny, static_cast<int>(get_l(kv, "grid.samples_per_cell")),
                  get_u64(kv, "orbit.seed"));
  td::SpectralReport rep = td::stationary_density(op);
  td::write_ulam(op, em.path("ulam.bin"));

  td::CsvTable density;
  density.header = {"x", "y", "density"};
  for (int j = 0; j < op.cells(); ++j)
    density.rows.push_back({td::format_double(op.center_x(j)),
                            td::format_double(op.center_y(j)),
                            td::format_double(rep.stationary[j] * op.cells())});
  td::write_csv(density, em.path("density.csv"));

  json res;
  res["leading"] = rep.leading;
  res["subleading_modulus"] = rep.subleading_modulus;
  res["iterations"] = rep.iterations;
  res["residual"] = rep.residual;
  res["slow_mixing"] = rep.slow_mixing;
  td::write_text_file(em.path("spectral.json"), res.dump(2) + "\n");
  em.write_manifest(res);
  em.note("ulam: |lambda_2| ~ " + td::format_double(rep.subleading_modulus));
  return 0;
}

int run_phi_check(const KvMap& kv, const Emitter& em) {
  auto bump = td::default_bump();
  auto report = td::validate_phi(*bump, 100000);
  td::CsvTable csv;
  csv.header = {"condition", "pass", "margin"};
  json res;
  for (const auto& c : report) {
    csv.rows.push_back(
        {c.name, c.pass ? "1" : "0", td::format_double(c.margin)});
    res[c.name] = {{"pass", c.pass}, {"margin", c.margin}};
  }
  td::write_csv(csv, em.path("phi_report.csv"));
  em.write_manifest(res);
  bool ok = td::all_pass(report);
  em.note(std::string("phi-check: ") + (ok ? "all conditions pass" : "FAIL"));
  if (!ok) {
    std::fprintf(stderr, "phi-check: bump profile validation failed\n");
    return 1;
  }
  (void)kv;
  return 0;
}

int run_cones(const KvMap& kv, const Emitter& em) {
  td::SkewSystem F = make_system(kv, get_d(kv, "params.a"));
  double c0 = td::min_cone_constant(F, 100000);
  td::ConeParams cone{c0, F.coupling()};
  auto rep =
      td::transversality_report(F, cone, static_cast<int>(get_l(kv, "cones.grid")));
  json res;
  res["c0"] = c0;
  res["cone_half_width"] = cone.half_width();
  res["max_transversal_count"] = rep.max_count;
  res["m_of_F"] = rep.normalized;
  res["det_floor_normalized"] = rep.det_floor_normalized;
  td::write_text_file(em.path("cones.json"), res.dump(2) + "\n");
  em.write_manifest(res);
  em.note("cones: m(F) = " + td::format_double(rep.normalized));
  return 0;
}

int run_trap_check(const KvMap& kv, const Emitter& em) {
  double a = get_d(kv, "params.a");
  double eps = get_d(kv, "params.epsilon");
  double delta = get_d(kv, "params.delta");
  td::SkewSystem F = td::SkewSystem::theoretical(
      static_cast<int>(get_l(kv, "params.m")), eps, a, delta);
  auto rep =
      td::check_trapping(F, eps, a, delta, static_cast<int>(get_l(kv, "trap.grid")));
  json res;
  res["holds"] = rep.holds;
  res["worst_margin"] = rep.worst_margin;
  td::write_text_file(em.path("trap.json"), res.dump(2) + "\n");
  em.write_manifest(res);
  em.note(std::string("trap-check: ") + (rep.holds ? "holds" : "violated") +
          ", worst margin " + td::format_double(rep.worst_margin));
  return 0;
}

int run_smooth(const KvMap& kv, const Emitter& em) {
  auto rows = td::smoothness_diagnostic(
      make_family(kv), get_d(kv, "smooth.a_center"), get_dlist(kv, "smooth.h_list"),
      [](double, double y) { return y; }, static_cast<int>(get_l(kv, "grid.nx")),
      static_cast<int>(get_l(kv, "grid.ny")),
      static_cast<int>(get_l(kv, "grid.samples_per_cell")),
      get_u64(kv, "orbit.seed"));
  td::CsvTable csv;
  csv.header = {"h", "value_minus", "value_center", "value_plus", "first_diff",
                "second_diff"};
  for (const auto& r : rows)
    csv.rows.push_back({td::format_double(r.h), td::format_double(r.value_minus),
                        td::format_double(r.value_center),
                        td::format_double(r.value_plus),
                        td::format_double(r.first_diff),
                        td::format_double(r.second_diff)});
  td::write_csv(csv, em.path("smooth.csv"));
  json res;
  res["rows"] = rows.size();
  em.write_manifest(res);
  em.note("smooth: " + std::to_string(rows.size()) + " step sizes -> " +
          em.path("smooth.csv"));
  return 0;
}

// Registers the shared configuration flags on a subcommand, each preset
// from the merged (defaults < config file) map so that only flags the user
// actually typed override it.
struct FlagBinding {
  std::string family;
  long m = 0, burn_in = 0, length = 0, nx = 0, ny = 0, cells = 0, samples = 0,
       cones_grid = 0, trap_grid = 0, exp_nmax = 0, exp_grid = 0;
  double a = 0, delta = 0, epsilon = 0, gamma = 0, a_lo = 0, a_hi = 0, step = 0,
         b_lo = 0, b_hi = 0, resolution = 0, a_center = 0;
  std::uint64_t seed = 0;
  std::string out_dir, h_list, config_path;

  void preset(const KvMap& kv) {
    family = kv.at("family");
    m = get_l(kv, "params.m");
    a = get_d(kv, "params.a");
    delta = get_d(kv, "params.delta");
    epsilon = get_d(kv, "params.epsilon");
    burn_in = get_l(kv, "orbit.burn_in");
    length = get_l(kv, "orbit.length");
    seed = get_u64(kv, "orbit.seed");
    nx = get_l(kv, "grid.nx");
    ny = get_l(kv, "grid.ny");
    cells = get_l(kv, "grid.cells");
    samples = get_l(kv, "grid.samples_per_cell");
    out_dir = kv.at("output.dir");
    gamma = get_d(kv, "output.gamma");
    a_lo = get_d(kv, "sweep.a_lo");
    a_hi = get_d(kv, "sweep.a_hi");
    step = get_d(kv, "sweep.step");
    b_lo = get_d(kv, "bisect.lo");
    b_hi = get_d(kv, "bisect.hi");
    resolution = get_d(kv, "bisect.resolution");
    a_center = get_d(kv, "smooth.a_center");
    h_list = kv.at("smooth.h_list");
    cones_grid = get_l(kv, "cones.grid");
    trap_grid = get_l(kv, "trap.grid");
    exp_nmax = get_l(kv, "expansion.n_max");
    exp_grid = get_l(kv, "expansion.grid");
  }

  void bind_common(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (key = value)");
    cmd->add_option("--family", family, "theoretical | experimental");
    cmd->add_option("--m", m, "base multiplier");
    cmd->add_option("--a", a, "fiber offset parameter a");
    cmd->add_option("--delta", delta, "coupling parameter delta");
    cmd->add_option("--epsilon", epsilon, "bump scale epsilon (theoretical)");
    cmd->add_option("--burn-in", burn_in, "discarded iterates");
    cmd->add_option("--length", length, "observed iterates");
    cmd->add_option("--seed", seed, "master RNG seed");
    cmd->add_option("--nx", nx, "grid cells in x");
    cmd->add_option("--ny", ny, "grid cells in y");
    cmd->add_option("--cells", cells, "1D grid cells");
    cmd->add_option("--samples-per-cell", samples, "Ulam samples per cell");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--gamma", gamma, "PGM gamma");
  }

  void writeback(KvMap& kv) const {
    kv["family"] = family;
    kv["params.m"] = std::to_string(m);
    kv["params.a"] = td::format_double(a);
    kv["params.delta"] = td::format_double(delta);
    kv["params.epsilon"] = td::format_double(epsilon);
    kv["orbit.burn_in"] = std::to_string(burn_in);
    kv["orbit.length"] = std::to_string(length);
    kv["orbit.seed"] = std::to_string(seed);
    kv["grid.nx"] = std::to_string(nx);
    kv["grid.ny"] = std::to_string(ny);
    kv["grid.cells"] = std::to_string(cells);
    kv["grid.samples_per_cell"] = std::to_string(samples);
    kv["output.dir"] = out_dir;
    kv["output.gamma"] = td::format_double(gamma);
    kv["sweep.a_lo"] = td::format_double(a_lo);
    kv["sweep.a_hi"] = td::format_double(a_hi);
    kv["sweep.step"] = td::format_double(step);
    kv["bisect.lo"] = td::format_double(b_lo);
    kv["bisect.hi"] = td::format_double(b_hi);
    kv["bisect.resolution"] = td::format_double(resolution);
    kv["smooth.a_center"] = td::format_double(a_center);
    kv["smooth.h_list"] = h_list;
    kv["cones.grid"] = std::to_string(cones_grid);
    kv["trap.grid"] = std::to_string(trap_grid);
    kv["expansion.n_max"] = std::to_string(exp_nmax);
    kv["expansion.grid"] = std::to_string(exp_grid);
  }
};

}  // namespace

int main(int argc, char** argv) {
  KvMap kv = default_config();
  bool quiet = false;
  bool show_config = false;

  try {
    std::string config_path = prescan_config_path(argc, argv);
    if (!config_path.empty()) merge_config_file(kv, config_path);

    FlagBinding fb;
    fb.preset(kv);

    CLI::App app{"numerical laboratory for skew products on the 2-torus"};
    app.require_subcommand(0, 1);
    app.add_flag("--quiet", quiet, "suppress the progress line");
    app.add_flag("--show-config", show_config,
                 "print the resolved configuration and exit");
    app.add_option("--config", fb.config_path, "config file (key = value)");

    CLI::App* c_sweep = app.add_subcommand("sweep", "chi_c over a grid of a");
    c_sweep->add_option("--a-lo", fb.a_lo, "sweep start");
    c_sweep->add_option("--a-hi", fb.a_hi, "sweep end");
    c_sweep->add_option("--step", fb.step, "sweep step");

    CLI::App* c_bisect =
        app.add_subcommand("bisect", "locate the sign change of chi_c");
    c_bisect
        ->add_option("--bracket", [&fb](const CLI::results_t& r) {
          fb.b_lo = std::stod(r.at(0));
          fb.b_hi = std::stod(r.at(1));
          return true;
        })
        ->expected(2)
        ->description("bracket endpoints lo hi");
    c_bisect->add_option("--resolution", fb.resolution, "bracket width target");

    CLI::App* c_orbit = app.add_subcommand("orbit", "orbit density raster");
    CLI::App* c_ulam =
        app.add_subcommand("ulam", "Ulam operator and stationary density");
    CLI::App* c_phi =
        app.add_subcommand("phi-check", "validate the bump profile");
    CLI::App* c_cones =
        app.add_subcommand("cones", "cone constant and transversality");
    c_cones->add_option("--grid", fb.cones_grid, "p-grid per axis");
    CLI::App* c_trap =
        app.add_subcommand("trap-check", "verify the trapping region");
    c_trap->add_option("--grid", fb.trap_grid, "grid points per axis");
    CLI::App* c_smooth =
        app.add_subcommand("smooth", "finite differences of a -> int psi d mu_a");
    c_smooth->add_option("--a-center", fb.a_center, "expansion point");
    c_smooth->add_option("--h-list", fb.h_list, "comma-separated step sizes");

    for (CLI::App* cmd : {c_sweep, c_bisect, c_orbit, c_ulam, c_phi, c_cones,
                          c_trap, c_smooth}) {
      fb.bind_common(cmd);
      cmd->add_flag("--quiet", quiet, "suppress the progress line");
      cmd->add_flag("--show-config", show_config,
                    "print the resolved configuration and exit");
    }

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) return app.exit(e);  // --help
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }

    fb.writeback(kv);

    if (show_config) {
      std::fputs(render_config(kv).c_str(), stdout);
      return 0;
    }

    CLI::App* chosen = nullptr;
    for (CLI::App* cmd : app.get_subcommands())
      chosen = cmd;
    if (!chosen) {
      std::fprintf(stderr, "error: a subcommand is required (see --help)\n");
      return 2;
    }

    Emitter em = make_emitter(kv, chosen->get_name(), config_path, quiet);
    const std::string& name = chosen->get_name();
    try {
      if (name == "sweep") return run_sweep(kv, em);
      if (name == "bisect") return run_bisect(kv, em);
      if (name == "orbit") return run_orbit(kv, em);
      if (name == "ulam") return run_ulam(kv, em);
      if (name == "phi-check") return run_phi_check(kv, em);
      if (name == "cones") return run_cones(kv, em);
      if (name == "trap-check") return run_trap_check(kv, em);
      if (name == "smooth") return run_smooth(kv, em);
      std::fprintf(stderr, "error: unknown subcommand '%s'\n", name.c_str());
      return 2;
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    } catch (const std::domain_error& e) {
      // rejected parameter combinations are config errors, not failures
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
