// thermoflux: command-line front end for the oscillator-ensemble library.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thermoflux/thermoflux.hpp"

namespace tf = thermoflux;
using json = nlohmann::ordered_json;

namespace {

struct Common {
  bool json_out = false;
  std::string output;
  std::string gnuplot;
  std::string units = "internal";
  std::uint64_t seed = 42;
  unsigned threads = 0;
  bool timings = false;
};

struct Physical {
  double a = 1.0;
  double beta = 1.0;
  double n = 1.0;
  std::string variant = "remark1";
};

/// Document assembled by every subcommand.
struct Report {
  json config = json::object();
  json results = json::object();
  json diagnostics = json::object();
};

double kb_factor(const Common& c, int power) {
  return c.units == "cgs" ? std::pow(tf::kBoltzmannCgs, power) : 1.0;
}

tf::DualVariant parse_variant(const std::string& v) {
  if (v == "symmetric") return tf::DualVariant::symmetric;
  if (v == "remark1") return tf::DualVariant::remark1;
  throw tf::DomainError("variant must be symmetric or remark1, got '" + v + "'");
}

tf::TomogramFamily parse_family(const std::string& f) {
  if (f == "consistent") return tf::TomogramFamily::consistent;
  if (f == "raw") return tf::TomogramFamily::raw;
  throw tf::DomainError("family must be consistent or raw, got '" + f + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void print_text(const json& j, const std::string& prefix, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const auto& v = it.value();
    if (v.is_object()) {
      print_text(v, key, os);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      for (std::size_t i = 0; i < v.size(); ++i) print_text(v[i], key + "[" + std::to_string(i) + "]", os);
    } else if (v.is_array()) {
      os << key << ":";
      for (const auto& e : v) {
        if (e.is_number()) os << ' ' << fmt(e.get<double>());
        else if (e.is_string()) os << ' ' << e.get<std::string>();
        else if (e.is_array()) {
          os << " [";
          for (std::size_t i = 0; i < e.size(); ++i) os << (i ? " " : "") << (e[i].is_string() ? e[i].get<std::string>() : e[i].dump());
          os << ']';
        } else os << ' ' << e.dump();
      }
      os << '\n';
    } else if (v.is_number_float()) {
      os << key << ": " << fmt(v.get<double>()) << '\n';
    } else if (v.is_string()) {
      os << key << ": " << v.get<std::string>() << '\n';
    } else {
      os << key << ": " << v.dump() << '\n';
    }
  }
}

void emit(const Common& c, const Report& r) {
  if (c.json_out) {
    json doc;
    doc["config"] = r.config;
    doc["results"] = r.results;
    doc["diagnostics"] = r.diagnostics;
    doc["version"] = tf::kVersion;
    std::cout << doc.dump(2) << '\n';
  } else {
    print_text(r.results, "", std::cout);
    if (!r.diagnostics.empty()) print_text(r.diagnostics, "diagnostics", std::cout);
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw tf::DomainError("cannot open output file '" + path + "'");
  return os;
}

void write_gnuplot(const Common& c, const std::string& kind, const std::string& xlabel,
                   const std::string& ylabel) {
  if (c.gnuplot.empty()) return;
  if (c.output.empty()) throw tf::DomainError("--gnuplot requires --output");
  auto os = open_output(c.gnuplot);
  os << "set datafile separator ','\n";
  if (kind == "grid") {
    os << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n"
       << "set view map\nset pm3d at b\nunset surface\n"
       << "splot '" << c.output << "' using 1:2:3 skip 1 with pm3d title ''\n";
  } else {
    os << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n"
       << "plot '" << c.output << "' using 1:2 skip 1 with lines title ''\n";
  }
}

json physical_config(const Physical& p) { return {{"a", p.a}, {"beta", p.beta}, {"N", p.n}}; }

void add_physical(CLI::App* sub, Physical& p, bool with_variant) {
  sub->add_option("--a", p.a, "oscillator level spacing a > 0")->capture_default_str();
  sub->add_option("--beta", p.beta, "inverse temperature beta > 0")->capture_default_str();
  sub->add_option("--N", p.n, "number of oscillators N > 0")->capture_default_str();
  if (with_variant)
    sub->add_option("--variant", p.variant, "duality closure: symmetric | remark1")->capture_default_str();
}

// ---------------------------------------------------------------- commands

Report run_stats(const Common& c, const Physical& p) {
  const tf::OscillatorEnsemble ens(p.a, p.n);
  const tf::ThermoState state{p.beta, tf::BetaSource::thermostat};
  const auto st = tf::energy_stats(state, ens);
  const auto alpha = tf::ManifoldPoint::from_beta(p.beta, p.a);
  const auto fl = tf::quasi_fluctuations(alpha, p.n);
  const double eps = alpha.epsilon();
  Report r;
  r.config = physical_config(p);
  r.config["units"] = c.units;
  r.results = {{"log_partition", tf::log_partition(state, ens)},
               {"mean", st.mean},
               {"variance", st.variance},
               {"epsilon", eps},
               {"lambda", alpha.lambda() / kb_factor(c, 1)},
               {"entropy", tf::entropy_stat(ens, st.mean) * kb_factor(c, 1)},
               {"s", tf::specific_entropy(eps, p.a).s * kb_factor(c, 1)},
               {"variance_eps", fl.variance_eps() * kb_factor(c, 1)},
               {"variance_beta", fl.variance_beta() * kb_factor(c, 1)},
               {"h", 2.0 / p.n * kb_factor(c, 1)},
               {"uncertainty_product", fl.variance_eps() * fl.variance_beta() * kb_factor(c, 2)}};
  if (c.units == "cgs") r.diagnostics["units"] = "k_B-bearing fields scaled by 1.3806488e-16 erg/K";
  return r;
}

Report run_cumulants(const Common& c, const Physical& p, int order, const std::string& kind, bool check) {
  const bool fluct = kind == "fluctuation";
  if (!fluct && kind != "energy") throw tf::DomainError("kind must be energy or fluctuation");
  const auto k = fluct ? tf::fluctuation_cumulants(p.beta, p.a, p.n, order)
                       : tf::energy_cumulants(p.beta, p.a, p.n, order);
  const tf::CoefficientTable table(order);
  Report r;
  r.config = physical_config(p);
  r.config["order"] = order;
  r.config["kind"] = kind;
  r.results["cumulants"] = k.values;
  json rows = json::array();
  for (int n = 1; n <= order; ++n) {
    json row = json::array();
    for (int m = 1; m <= n; ++m) row.push_back(tf::to_string(table(n, m)));
    rows.push_back(row);
  }
  r.results["coefficients"] = rows;
  if (check) {
    const auto ke = tf::energy_cumulants(p.beta, p.a, p.n, std::min(order, 8));
    std::vector<double> rel;
    for (int n = 1; n <= ke.order(); ++n)
      rel.push_back(std::abs(tf::log_partition_derivative(p.beta, p.a, p.n, n) - ke(n)) / std::abs(ke(n)));
    r.diagnostics["finite_difference_rel_error"] = rel;
  }
  if (!c.output.empty()) {
    auto os = open_output(c.output);
    os << "n,cumulant\n";
    for (int n = 1; n <= order; ++n) os << n << ',' << fmt(k(n)) << '\n';
    write_gnuplot(c, "line", "n", "cumulant");
  }
  return r;
}

Report run_dual(const Common&, const Physical& p) {
  const auto pair = tf::solve_dual(p.a, p.beta, p.n, parse_variant(p.variant));
  const auto rep = tf::verify_duality(pair);
  Report r;
  r.config = physical_config(p);
  r.config["variant"] = p.variant;
  r.results = {{"a_dual", pair.dual.a},
               {"beta_dual", pair.dual.beta},
               {"beta_a_dual", pair.dual.a * pair.dual.beta},
               {"mean_eps", rep.mean_eps},
               {"mean_eps_dual", rep.mean_eps_dual},
               {"variance_eps", rep.variance_eps},
               {"variance_eps_dual", rep.variance_eps_dual},
               {"scaled_variance_product", rep.scaled_variance_product}};
  r.diagnostics = {{"residuals", {pair.residuals[0], pair.residuals[1]}},
                   {"imposed_condition_residual", rep.imposed_condition_residual},
                   {"unphysical_spectrum", pair.unphysical_spectrum},
                   {"sign_law_holds", pair.sign_law_holds}};
  return r;
}

Report run_homotopy(const Common& c, const Physical& p, int points, int n0) {
  if (points < 2) throw tf::DomainError("homotopy needs at least 2 points");
  const auto path = tf::HomotopyPath::from_system(p.a, p.beta, p.n, parse_variant(p.variant));
  Report r;
  r.config = physical_config(p);
  r.config["variant"] = p.variant;
  r.config["points"] = points;
  r.config["n0"] = n0;
  json rows = json::array();
  std::ostringstream csv;
  csv << "t,a_t,beta_t,eps_t,v_t";
  for (int n = 2; n <= n0; ++n) csv << ",kappa_" << n;
  csv << '\n';
  int degenerate = 0;
  for (int i = 0; i < points; ++i) {
    const double t = 0.5 * std::numbers::pi * i / (points - 1);
    try {
      const auto pp = tf::path_params(path, t);
      const auto k = tf::path_cumulants(path, t, n0);
      json row = {{"t", t}, {"a", pp.a}, {"beta", pp.beta}, {"eps", pp.eps}, {"variance", pp.variance}};
      row["cumulants"] = std::vector<double>(k.values.begin() + 1, k.values.end());
      rows.push_back(row);
      csv << fmt(t) << ',' << fmt(pp.a) << ',' << fmt(pp.beta) << ',' << fmt(pp.eps) << ',' << fmt(pp.variance);
      for (int n = 2; n <= n0; ++n) csv << ',' << fmt(k(n));
      csv << '\n';
    } catch (const tf::DegeneratePoint&) {
      ++degenerate;
    }
  }
  r.results["path"] = rows;
  r.diagnostics["degenerate_points_skipped"] = degenerate;
  r.diagnostics["dual_formal"] = path.dual_formal();
  if (!c.output.empty()) {
    auto os = open_output(c.output);
    os << csv.str();
    write_gnuplot(c, "line", "t", "a_t");
  }
  return r;
}

Report run_tomogram(const Common& c, const Physical& p, int n0, double angle, int points,
                    const std::string& family) {
  const auto path = tf::HomotopyPath::from_system(p.a, p.beta, p.n, parse_variant(p.variant));
  if (!(angle >= 0.0 && angle < std::numbers::pi)) throw tf::DomainError("angle must lie in [0, pi)");
  const auto fam = parse_family(family);
  tf::CumulantVector k;
  Report r;
  if (fam == tf::TomogramFamily::consistent) {
    const auto forms = tf::fit_cumulant_forms(path, n0);
    k = forms.at(angle);
    r.diagnostics["projection_residual"] = forms.projection_residual;
  } else {
    k = tf::tomogram_cumulants(path, angle, n0);
  }
  const tf::Tomogram tomo(k, n0, angle);
  r.config = physical_config(p);
  r.config["variant"] = p.variant;
  r.config["n0"] = n0;
  r.config["angle"] = angle;
  r.config["family"] = family;
  r.results = {{"cumulants", tomo.cumulants()}, {"gamma", tomo.gamma()}, {"target_moments", tomo.target_moments()}};
  r.diagnostics["negativity_fraction"] = tomo.negativity_fraction();
  if (!c.output.empty()) {
    if (points < 2) throw tf::DomainError("tomogram needs at least 2 points");
    auto os = open_output(c.output);
    os << "z,density\n";
    const double half = 8.0 * std::sqrt(tomo.variance());
    for (int i = 0; i < points; ++i) {
      const double z = -half + 2.0 * half * i / (points - 1);
      os << fmt(z) << ',' << fmt(tomo.density(z)) << '\n';
    }
    write_gnuplot(c, "line", "z", "T(z)");
  }
  return r;
}

struct GridArgs {
  int n0 = 4;
  int n_theta = 64;
  int r_nodes = 96;
  int nx = 61;
  int ny = 61;
  double extent = 8.0;
  bool gaussian = false;
  std::string family = "consistent";
};

Report run_reconstruct(const Common& c, const Physical& p, const GridArgs& g) {
  Report r;
  r.config = physical_config(p);
  r.config["variant"] = p.variant;
  r.config["n0"] = g.gaussian ? 2 : g.n0;
  r.config["n_theta"] = g.n_theta;
  r.config["r_nodes"] = g.r_nodes;
  r.config["nx"] = g.nx;
  r.config["ny"] = g.ny;
  r.config["extent"] = g.extent;
  r.config["gaussian"] = g.gaussian;
  const double h = 2.0 / p.n;
  const tf::ReconstructionOptions opt{g.r_nodes, c.threads, 1e-6};
  std::vector<tf::Tomogram> family;
  tf::GridSpec spec;
  std::optional<tf::QuasiDensityGrid> exact;
  if (g.gaussian) {
    const auto alpha = tf::ManifoldPoint::from_beta(p.beta, p.a);
    const auto fl = tf::quasi_fluctuations(alpha, p.n);
    spec = tf::GridSpec::for_variances(fl.variance_eps(), fl.variance_beta(), g.nx, g.ny, g.extent);
    family = tf::gaussian_tomograms(fl.variance_eps(), fl.variance_beta(), g.n_theta);
    exact = tf::gaussian_limit(alpha, p.n, spec);
  } else {
    r.config["family"] = g.family;
    const auto path = tf::HomotopyPath::from_system(p.a, p.beta, p.n, parse_variant(p.variant));
    spec = tf::GridSpec::for_variances(path.variance(), path.variance_dual(), g.nx, g.ny, g.extent);
    const auto fam = parse_family(g.family);
    family = tf::homotopy_tomograms(path, g.n_theta, g.n0, fam);
    if (fam == tf::TomogramFamily::consistent)
      r.diagnostics["projection_residual"] = tf::fit_cumulant_forms(path, g.n0).projection_residual;
  }
  const auto grid = tf::reconstruct(family, h, spec, opt);
  const int nmax = g.gaussian ? 2 : g.n0;
  const auto mx = grid.x_moments(nmax), my = grid.y_moments(nmax);
  const auto& tx = family.front().target_moments();
  const auto& ty = family[family.size() / 2].target_moments();
  std::vector<double> ex, ey;
  for (int k = 0; k <= nmax; ++k) {
    ex.push_back(mx[static_cast<std::size_t>(k)] - tx[static_cast<std::size_t>(k)]);
    ey.push_back(my[static_cast<std::size_t>(k)] - ty[static_cast<std::size_t>(k)]);
  }
  r.results = {{"mass", grid.mass()}, {"x_moments", mx}, {"y_moments", my},
               {"x_moment_errors", ex}, {"y_moment_errors", ey}, {"max_abs", grid.max_abs()}};
  try {
    r.results["purity"] = tf::purity(grid);
  } catch (const tf::GridTooSmall& e) {
    r.diagnostics["purity"] = e.what();
  }
  if (exact) {
    double linf = 0.0;
    for (std::size_t i = 0; i < grid.values.size(); ++i) linf = std::max(linf, std::abs(grid.values[i] - exact->values[i]));
    r.results["linf_vs_closed_form"] = linf;
  }
  r.diagnostics["imaginary_residue"] = grid.diagnostics.imaginary_residue;
  r.diagnostics["negativity_fraction"] = grid.diagnostics.negativity_fraction;
  r.diagnostics["h"] = h * kb_factor(c, 1);
  if (!c.output.empty()) {
    auto os = open_output(c.output);
    tf::write_grid_csv(os, grid);
    write_gnuplot(c, "grid", "delta eps", "delta beta");
  }
  return r;
}

Report run_sample(const Common& c, const Physical& p, std::size_t sweeps, int order) {
  if (!(p.n >= 1.0) || p.n != std::floor(p.n)) throw tf::DomainError("sample requires an integer N >= 1");
  tf::SamplerConfig cfg{c.seed, sweeps, p.a, static_cast<std::uint64_t>(p.n), p.beta, c.threads};
  const auto run = tf::sample_energies(cfg);
  const auto est = tf::empirical_cumulants(run, order);
  const auto exact = tf::energy_cumulants(p.beta, p.a, p.n, order);
  std::vector<double> z;
  for (int n = 1; n <= order; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    z.push_back((est.estimates[i] - exact(n)) / est.standard_errors[i]);
  }
  Report r;
  r.config = physical_config(p);
  r.config["seed"] = c.seed;
  r.config["sweeps"] = sweeps;
  r.config["order"] = order;
  r.results = {{"k_statistics", est.estimates},
               {"standard_errors", est.standard_errors},
               {"exact", exact.values},
               {"z_scores", z}};
  if (!c.output.empty()) {
    auto os = open_output(c.output);
    tf::write_samples_csv(os, run);
  }
  return r;
}

Report run_verify(const Common& c, const std::string& suite, int& failures) {
  const tf::VerifyOptions opt{c.seed, c.threads};
  const auto suites = tf::all_suites();
  Report r;
  r.config = {{"suite", suite}, {"seed", c.seed}};
  json list = json::array();
  failures = 0;
  bool matched = false;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const std::string id = std::to_string(i + 1);
    if (suite != "all" && suite != id) continue;
    matched = true;
    const auto res = suites[i](opt);
    json metrics = json::object();
    for (const auto& m : res.metrics) metrics[m.name] = {{"value", m.value}, {"limit", m.limit}, {"ok", m.ok()}};
    json entry = {{"criterion", res.criterion}, {"name", res.name}, {"passed", res.passed()}, {"metrics", metrics}};
    if (c.timings) entry["seconds"] = res.seconds;
    list.push_back(entry);
    if (!res.passed()) ++failures;
    if (!c.json_out)
      std::printf("%s %2d %s\n", res.passed() ? "PASS" : "FAIL", res.criterion, res.name.c_str());
  }
  if (!matched) throw tf::DomainError("unknown suite '" + suite + "' (use all or 1..10)");
  r.results["suites"] = list;
  r.results["failures"] = failures;
  return r;
}

/// Inserts key=value pairs from a config file after the subcommand token,
/// skipping keys already given on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  auto it = std::find(args.begin(), args.end(), std::string("--config"));
  if (it == args.end()) return args;
  if (it + 1 == args.end()) throw tf::DomainError("--config requires a file name");
  const std::string path = *(it + 1);
  args.erase(it, it + 2);
  std::ifstream in(path);
  if (!in) throw tf::DomainError("cannot read config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw tf::DomainError("config line without '=': " + line);
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(args.begin(), args.end(), key) != args.end()) continue;
    extra.push_back(key);
    if (value != "true") extra.push_back(value);
  }
  static const std::vector<std::string> commands = {"stats",    "cumulants",   "dual",   "homotopy",
                                                    "tomogram", "reconstruct", "sample", "verify"};
  auto pos = std::find_if(args.begin() + 1, args.end(), [](const std::string& s) {
    return std::find(commands.begin(), commands.end(), s) != commands.end();
  });
  if (pos == args.end()) throw tf::DomainError("config file given without a subcommand");
  args.insert(pos + 1, extra.begin(), extra.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  Common common;
  Physical phys;
  CLI::App app{"thermoflux: oscillator-ensemble thermodynamics, duality and tomography"};
  app.set_version_flag("--version", tf::kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", common.json_out, "emit {config, results, diagnostics, version} as JSON");
  app.add_option("-o,--output", common.output, "CSV artifact path");
  app.add_option("--gnuplot", common.gnuplot, "write a gnuplot script for the CSV artifact");
  app.add_option("--units", common.units, "internal | cgs")->check(CLI::IsMember({"internal", "cgs"}))->capture_default_str();
  app.add_option("--seed", common.seed, "random seed")->capture_default_str();
  app.add_option("--threads", common.threads, "worker threads (default: THERMOFLUX_THREADS or all cores)");
  app.add_flag("--timings", common.timings, "include wall times in verify output");

  auto* stats = app.add_subcommand("stats", "mean, variance, entropy and fluctuation scales");
  add_physical(stats, phys, false);

  int order = 6;
  std::string kind = "energy";
  bool check = false;
  auto* cumulants = app.add_subcommand("cumulants", "exact cumulants and the c(n, m) table");
  add_physical(cumulants, phys, false);
  cumulants->add_option("--order", order, "highest order (1..20)")->capture_default_str();
  cumulants->add_option("--kind", kind, "energy | fluctuation")->capture_default_str();
  cumulants->add_flag("--check", check, "compare with finite differences of log Z");

  auto* dual = app.add_subcommand("dual", "solve the duality for (a', beta')");
  add_physical(dual, phys, true);

  int points = 17, n0 = 4;
  auto* homotopy = app.add_subcommand("homotopy", "parameters and cumulants along the homotopy");
  add_physical(homotopy, phys, true);
  homotopy->add_option("--points", points, "t-grid points on [0, pi/2]")->capture_default_str();
  homotopy->add_option("--n0", n0, "truncation degree (2..8)")->capture_default_str();

  double angle = 0.0;
  int tomo_points = 401;
  std::string family = "consistent";
  auto* tomogram = app.add_subcommand("tomogram", "Gram-Charlier tomogram at one angle");
  add_physical(tomogram, phys, true);
  tomogram->add_option("--n0", n0, "truncation degree (2..8)")->capture_default_str();
  tomogram->add_option("--angle", angle, "angle in [0, pi)")->capture_default_str();
  tomogram->add_option("--points", tomo_points, "CSV sample points")->capture_default_str();
  tomogram->add_option("--family", family, "consistent | raw")->capture_default_str();

  GridArgs grid;
  auto* reconstruct = app.add_subcommand("reconstruct", "tomographic reconstruction of R_N(x, y)");
  add_physical(reconstruct, phys, true);
  reconstruct->add_option("--n0", grid.n0, "truncation degree (2..8)")->capture_default_str();
  reconstruct->add_option("--n-theta", grid.n_theta, "angles on [0, pi)")->capture_default_str();
  reconstruct->add_option("--r-nodes", grid.r_nodes, "radial nodes per sign")->capture_default_str();
  reconstruct->add_option("--nx", grid.nx, "grid points in x")->capture_default_str();
  reconstruct->add_option("--ny", grid.ny, "grid points in y")->capture_default_str();
  reconstruct->add_option("--extent", grid.extent, "half-width in standard deviations")->capture_default_str();
  reconstruct->add_option("--family", grid.family, "consistent | raw")->capture_default_str();
  reconstruct->add_flag("--gaussian", grid.gaussian, "Gaussian-limit family instead of homotopy tomograms");

  std::size_t sweeps = 100000;
  int sample_order = 4;
  auto* sample = app.add_subcommand("sample", "Monte-Carlo energies and k-statistics");
  add_physical(sample, phys, false);
  sample->add_option("--sweeps", sweeps, "number of samples")->capture_default_str();
  sample->add_option("--order", sample_order, "k-statistics order (1..4)")->capture_default_str();

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--suite", suite, "all | 1..10")->capture_default_str();

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = merge_config(std::move(args));
    std::vector<const char*> cargs;
    for (const auto& s : args) cargs.push_back(s.c_str());
    try {
      app.parse(static_cast<int>(cargs.size()), const_cast<char**>(cargs.data()));
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }
    if (common.threads == 0) common.threads = tf::default_thread_count();

    Report report;
    int failures = 0;
    if (*stats) report = run_stats(common, phys);
    else if (*cumulants) report = run_cumulants(common, phys, order, kind, check);
    else if (*dual) report = run_dual(common, phys);
    else if (*homotopy) report = run_homotopy(common, phys, points, n0);
    else if (*tomogram) report = run_tomogram(common, phys, n0, angle, tomo_points, family);
    else if (*reconstruct) report = run_reconstruct(common, phys, grid);
    else if (*sample) report = run_sample(common, phys, sweeps, sample_order);
    else if (*verify) report = run_verify(common, suite, failures);
    if (!*verify || common.json_out) emit(common, report);
    return failures == 0 ? 0 : 1;
  } catch (const tf::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    if (common.json_out) std::cout << json{{"error", "config"}, {"message", e.what()}, {"version", tf::kVersion}}.dump(2) << '\n';
    return 2;
  } catch (const tf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    if (common.json_out)
      std::cout << json{{"error", "numerical"}, {"message", e.what()}, {"version", tf::kVersion}}.dump(2) << '\n';
    return 3;
  }
}
