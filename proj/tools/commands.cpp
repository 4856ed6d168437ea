#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <Eigen/LU>

#include "json.hpp"
#include "malab/csv.hpp"
#include "malab/errors.hpp"
#include "malab/expansion.hpp"
#include "malab/exterior_poisson.hpp"
#include "malab/quad_extract.hpp"
#include "malab/rate_fit.hpp"
#include "malab/source_catalog.hpp"

namespace malab::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ofstream open_out(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) throw InvalidArgument("cannot write " + (dir / name).string());
  return out;
}

void write_json(const fs::path& dir, const std::string& name, const json& j) {
  auto out = open_out(dir, name);
  out << j.dump(2) << '\n';
}

json fit_json(const rates::RateFitResult& f) {
  return {{"gamma", f.gamma},        {"p", f.p},
          {"coeff", f.coeff},        {"rms_residual", f.rms_residual},
          {"octaves", f.octaves},    {"samples_used", f.samples_used},
          {"zeros_dropped", f.zeros_dropped}};
}

std::vector<double> radii_from(const KeyValueDoc& c, const std::string& prefix, double lo, double hi,
                               int per_octave) {
  return rates::dyadic_radii(c.get_double(prefix + "r_min", lo), c.get_double(prefix + "r_max", hi),
                             static_cast<int>(c.get_int(prefix + "per_octave", per_octave)));
}

int exit_for(bool pass) { return pass ? kExitPass : kExitCertificate; }

}  // namespace

double tolerance_scale() {
  const char* env = std::getenv("MALAB_TOL_SCALE");
  if (!env || !*env) return 1.0;
  char* end = nullptr;
  const double s = std::strtod(env, &end);
  if (*end != '\0' || !(s > 0.0) || !std::isfinite(s))
    throw InvalidArgument("MALAB_TOL_SCALE must be a positive number");
  return s;
}

// ---------------------------------------------------------------------------

int cmd_radial_expand(const KeyValueDoc& c, const fs::path& out_dir) {
  const double scale = tolerance_scale();
  const auto profile = radial::RadialProfile::from_doc(c);
  const int J = static_cast<int>(c.get_int("J", 2));
  const radial::RadialSolution sol(profile);
  const auto constants = profile.force_constant
                             ? radial::ExpansionConstants::trivial()
                             : radial::compute_constants(sol, c.get_double("series_tol", 1e-12));
  const auto series = radial::expansion_series(profile, constants, J);

  std::vector<double> radii;
  for (double r : radii_from(c, "", 256.0, 65536.0, 4))
    if (r > constants.R) radii.push_back(r);
  if (radii.empty()) throw InvalidArgument("no requested radius exceeds the anchor radius R");
  const auto residual = radial::expansion_residual(sol, constants, radii, J);

  auto csv_out = open_out(out_dir, "radial_expand.csv");
  CsvWriter csv(csv_out, {"r", "u_numeric", "u_expansion", "residual"});
  std::vector<rates::Sample> samples;
  double worst_rel = 0.0;
  for (const auto& s : residual) {
    csv.row({s.r, sol.u(s.r), series.value(s.r), s.residual});
    samples.push_back({s.r, s.residual});
    worst_rel = std::max(worst_rel, std::abs(s.residual) / (s.r * s.r));
  }

  json summary;
  summary["command"] = "radial-expand";
  summary["profile"] = {{"n", profile.n},
                        {"zeta", profile.zeta.to_string()},
                        {"quad_tol", profile.quad_tol},
                        {"force_constant", profile.force_constant}};
  summary["J"] = J;
  summary["constants"] = {{"C0", num(constants.C0)}, {"C1", num(constants.C1)},
                          {"C2", num(constants.C2)}, {"C3", num(constants.C3)},
                          {"C4", num(constants.C4)}, {"C_R", num(constants.C_R)},
                          {"R", num(constants.R)}};
  summary["terms"] = json::array();
  for (const auto& t : series.terms)
    summary["terms"].push_back({{"coeff", t.coeff},
                                {"r_power", t.order.r_power.to_string()},
                                {"ln_power", t.order.ln_power}});

  bool pass = true;
  if (!series.first_omitted) {
    const double tol = 1e-8 * scale;
    pass = worst_rel <= tol;
    summary["first_omitted"] = nullptr;
    summary["residual_check"] = {{"max_relative_residual", worst_rel}, {"tol", tol}, {"pass", pass}};
  } else {
    const auto& fo = *series.first_omitted;
    rates::FitOptions opt;
    opt.max_log_power = static_cast<int>(c.get_int("max_log_power", std::max(2, fo.ln_power)));
    const auto fit = rates::fit_rate(samples, opt);
    const double tol = c.get_double("gamma_tol", 0.05) * scale;
    pass = std::abs(fit.gamma - fo.r_power_value()) <= tol && fit.p == fo.ln_power;
    summary["first_omitted"] = {{"r_power", fo.r_power.to_string()}, {"ln_power", fo.ln_power}};
    summary["fitted"] = fit_json(fit);
    summary["fitted"]["gamma_tol"] = tol;
    summary["fitted"]["pass"] = pass;
  }
  summary["pass"] = pass;
  write_json(out_dir, "summary.json", summary);
  return exit_for(pass);
}

// ---------------------------------------------------------------------------

namespace {

// Mode coefficients read from a CSV with columns k, m, r, b. Between nodes b
// is interpolated linearly in ln r; past the last node it follows the
// envelope shape r^-k1 (ln r)^k2 so the infinite tails stay defined.
struct FileModes {
  int n = 3;
  std::vector<double> grid;
  std::map<std::pair<int, int>, std::vector<double>> b;
};

FileModes read_modes(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open coefficient file '" + path + "'");
  const auto table = read_csv(in);
  const std::vector<std::string> want{"k", "m", "r", "b"};
  if (table.header.size() < 4 || !std::equal(want.begin(), want.end(), table.header.begin()))
    throw InvalidArgument("coefficient file must start with columns k, m, r, b");
  FileModes fm;
  fm.n = n;
  std::map<std::pair<int, int>, std::vector<std::pair<double, double>>> rows;
  for (const auto& row : table.rows)
    rows[{static_cast<int>(row[0]), static_cast<int>(row[1])}].push_back({row[2], row[3]});
  for (auto& [key, pts] : rows) {
    std::sort(pts.begin(), pts.end());
    std::vector<double> g, v;
    for (const auto& [r, b] : pts) {
      g.push_back(r);
      v.push_back(b);
    }
    if (fm.grid.empty()) fm.grid = g;
    if (g != fm.grid) throw InvalidArgument("all modes in the coefficient file must share one grid");
    fm.b[key] = v;
  }
  if (fm.grid.size() < 8) throw InvalidArgument("coefficient file grid is too short");
  return fm;
}

double interp_log(const std::vector<double>& grid, const std::vector<double>& v, double r, double k1,
                  double k2) {
  if (r <= grid.front()) return v.front();
  if (r >= grid.back()) {
    const double rl = grid.back();
    double s = std::pow(r / rl, -k1);
    if (k2 != 0.0 && rl > 1.0) s *= std::pow(std::log(r) / std::log(rl), k2);
    return v.back() * s;
  }
  const auto it = std::upper_bound(grid.begin(), grid.end(), r);
  const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
  const double t = std::log(r / grid[i]) / std::log(grid[i + 1] / grid[i]);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

}  // namespace

int cmd_poisson(const KeyValueDoc& c, const fs::path& out_dir) {
  const double scale = tolerance_scale();
  poisson::SolveOptions opt;
  opt.L = static_cast<int>(c.get_int("L", opt.L));
  opt.r_min = c.get_double("r_min", opt.r_min);
  opt.r_max = c.get_double("r_max", opt.r_max);
  opt.per_octave = static_cast<int>(c.get_int("per_octave", opt.per_octave));
  opt.mode.tail_tol = c.get_double("tail_tol", opt.mode.tail_tol);

  poisson::SourceSpec spec;
  std::optional<poisson::ExteriorSolution> solution;
  double min_captured = 1.0;
  if (c.has("coefficients")) {
    spec.name = c.get_string("coefficients");
    spec.n = static_cast<int>(c.get_int("n"));
    spec.k1 = c.get_double("k1");
    spec.k2 = c.get_double("k2", 0.0);
    spec.c0 = c.get_double("c0");
    auto fm = std::make_shared<FileModes>(read_modes(spec.name, spec.n));
    const auto basis = std::make_shared<sphere::Basis>(spec.n, opt.L);
    const double k1 = spec.k1, k2 = spec.k2;
    spec.g = [fm, basis, k1, k2](const poisson::Point& x) {
      const double r = x.norm();
      const Eigen::VectorXd y = basis->evaluate(x / r);
      double g = 0.0;
      for (const auto& [key, v] : fm->b)
        g += interp_log(fm->grid, v, r, k1, k2) * y(basis->index(key.first, key.second));
      return g;
    };
    spec.validate();
    poisson::check_envelope(spec, fm->grid, opt.L);
    std::vector<poisson::RadialModeSolution> modes;
    for (const auto& mode : basis->modes()) {
      const auto it = fm->b.find({mode.k, mode.m});
      poisson::RadialSource src;
      src.c0 = spec.c0;
      src.k1 = k1;
      src.k2 = k2;
      if (it == fm->b.end()) {
        src.b = [](double) { return 0.0; };
      } else {
        const std::vector<double>* v = &it->second;
        src.b = [fm, v, k1, k2](double r) { return interp_log(fm->grid, *v, r, k1, k2); };
      }
      auto sol = poisson::solve_radial_mode(spec.n, mode.k, src, fm->grid, opt.mode);
      sol.m = mode.m;
      modes.push_back(std::move(sol));
    }
    solution.emplace(poisson::reconstruct(spec.n, opt.L, std::move(modes)));
  } else {
    spec = poisson::catalog_source(c.get_string("source"));
    if (c.has("n") && c.get_int("n") != spec.n)
      throw InvalidArgument("source '" + spec.name + "' is defined for n = " + std::to_string(spec.n));
    auto res = poisson::solve_exterior(spec, opt);
    for (double f : res.field.captured_fraction) min_captured = std::min(min_captured, f);
    solution.emplace(std::move(res.solution));
  }
  const auto& v = *solution;

  {
    auto out = open_out(out_dir, "modes.csv");
    poisson::write_modes_csv(out, v);
  }

  const double lap_tol = c.get_double("laplacian_tol", 1e-6) * scale;
  const auto lap = poisson::laplacian_check(v, spec.g, static_cast<int>(c.get_int("directions", 8)),
                                            static_cast<int>(c.get_int("stride", 4)));
  double ode = 0.0, floor = 0.0, tail = 0.0;
  for (const auto& m : v.modes())
    for (std::size_t i = 0; i < m.grid.size(); ++i)
      floor = std::max(floor, std::abs(m.grid[i] * m.grid[i] * m.b[i]));
  floor *= 1e-10;
  for (const auto& m : v.modes()) {
    ode = std::max(ode, poisson::mode_ode_residual(spec.n, m, floor));
    tail = std::max(tail, m.tail_error);
  }

  const auto samples = poisson::dyadic_sup_samples(v);
  const auto decay = poisson::certify_decay(samples, spec.n, spec.k1, spec.k2);
  {
    auto out = open_out(out_dir, "decay.csv");
    CsvWriter csv(out, {"r", "sup_abs", "scaled"});
    for (std::size_t i = 0; i < decay.radii.size(); ++i)
      csv.row({decay.radii[i], samples[samples.size() - decay.radii.size() + i].sup_abs,
               decay.scaled[i]});
  }

  auto cert_json = [](const poisson::DecayCertificate& d) {
    return json{{"measured_C", num(d.measured_C)},
                {"k_log", d.k_log},
                {"top_octave_increase", d.top_octave_increase},
                {"allowed_increase", d.allowed_increase},
                {"octaves", d.octaves},
                {"pass", d.passed}};
  };

  const bool lap_pass = lap.max_relative_error <= lap_tol;
  bool pass = lap_pass && decay.passed;
  json summary;
  summary["command"] = "poisson";
  summary["source"] = {{"name", spec.name}, {"n", spec.n}, {"k1", spec.k1}, {"k2", spec.k2},
                       {"c0", spec.c0}};
  summary["grid"] = {{"L", opt.L},
                     {"r_min", v.r_min()},
                     {"r_max", v.r_max()},
                     {"nodes", v.grid().size()}};
  summary["laplacian"] = {{"max_relative_error", lap.max_relative_error},
                          {"worst_radius", lap.worst_radius},
                          {"points", lap.points},
                          {"tol", lap_tol},
                          {"pass", lap_pass}};
  summary["mode_ode_residual"] = ode;
  summary["tail_error_max"] = tail;
  summary["captured_fraction_min"] = min_captured;
  summary["decay"] = cert_json(decay);
  const int order = static_cast<int>(c.get_int("derivative_order", 0));
  if (order > 0) {
    summary["derivative_decay"] = json::array();
    for (const auto& d : poisson::certify_derivative_decay(v, order, spec.k1, spec.k2)) {
      summary["derivative_decay"].push_back(cert_json(d));
      pass = pass && d.passed;
    }
  }
  summary["pass"] = pass;
  write_json(out_dir, "summary.json", summary);
  return exit_for(pass);
}

// ---------------------------------------------------------------------------

int cmd_extract(const KeyValueDoc& c, const fs::path& out_dir) {
  const double scale = tolerance_scale();
  extract::OracleSpec os;
  os.profile = radial::RadialProfile::from_doc(c);
  const int n = os.profile.n;
  if (c.has("T")) {
    const auto t = c.get_doubles("T");
    if (static_cast<int>(t.size()) != n * n) throw InvalidArgument("T needs n*n row-major entries");
    os.T = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        t.data(), n, n);
  }
  if (c.has("x0")) {
    const auto x = c.get_doubles("x0");
    if (static_cast<int>(x.size()) != n) throw InvalidArgument("x0 needs n entries");
    os.x0 = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  }
  os.f_infinity = c.get_double("f_infinity", 1.0);
  auto sample = extract::radial_oracle(os);
  sample.domain_radius = c.get_double("domain_radius", sample.domain_radius);

  const Rational zeta = os.profile.zeta;
  extract::ExtractOptions eo;
  eo.M0 = c.get_double("M0", eo.M0);
  eo.K = static_cast<int>(c.get_int("K", extract::default_ladder_depth(zeta)));
  eo.n_rays = static_cast<int>(c.get_int("n_rays", 0));
  eo.mve_eps = c.get_double("mve_eps", eo.mve_eps);
  eo.cauchy_tol = c.get_double("cauchy_tol", eo.cauchy_tol) * scale;
  const double det_tol = c.get_double("det_tol", 1e-3) * scale;

  json summary;
  summary["command"] = "extract";
  summary["oracle"] = {{"n", n}, {"zeta", zeta.to_string()}, {"f_infinity", os.f_infinity}};

  extract::ExtractAResult ea;
  try {
    ea = extract::extract_A(sample, eo);
  } catch (const CertificationFailure& e) {
    summary["error"] = e.what();
    summary["pass"] = false;
    write_json(out_dir, "summary.json", summary);
    std::cerr << "certificate failed: " << e.what() << '\n';
    return kExitCertificate;
  }

  json A = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.push_back(ea.A(i, j));
  const double det_err = std::abs(ea.det_before - sample.f_infinity) / sample.f_infinity;
  const bool det_pass = det_err <= det_tol;
  summary["A"] = A;
  summary["det_A"] = ea.A.determinant();
  summary["det_before"] = ea.det_before;
  summary["det_check"] = {{"relative_error", det_err}, {"tol", det_tol}, {"pass", det_pass}};
  summary["cauchy_drift"] = ea.cauchy_drift;
  summary["ladder"] = {{"M0", eo.M0}, {"K", eo.K}, {"steps", ea.steps}};
  summary["minimum"] = std::vector<double>(ea.minimum.data(), ea.minimum.data() + n);

  std::optional<Eigen::VectorXd> b;
  bool pass = det_pass;
  const auto b_radii = c.has("b_radii") ? c.get_doubles("b_radii") : std::vector<double>{1e3, 1e4};
  try {
    const auto eb = extract::extract_b(sample, ea.A, b_radii, zeta.to_double(),
                                       c.get_double("b_drift_tol", 1e-2) * scale);
    summary["b"] = {{"resolvable", eb.resolvable}, {"message", eb.message}};
    if (eb.resolvable) {
      b = eb.b;
      summary["b"]["value"] = std::vector<double>(eb.b.data(), eb.b.data() + n);
      summary["b"]["drift"] = eb.drift;
    }
  } catch (const CertificationFailure& e) {
    summary["b"] = {{"resolvable", false}, {"message", e.what()}};
    pass = false;
  }

  const auto window = extract::default_rate_window(zeta);
  const auto radii = radii_from(c, "rate_", window.r_min, window.r_max, window.per_octave);
  const auto law = extract::predicted_rate(n, zeta);
  rates::FitOptions fo;
  fo.max_log_power = static_cast<int>(c.get_int("max_log_power", 2));
  const auto fit = extract::verify_rates(sample, ea.A, b, radii, fo);
  const double gamma_tol = c.get_double("gamma_tol", 0.05) * scale;
  const bool rate_match = std::abs(fit.gamma - law.gamma) <= gamma_tol && fit.p == law.p;
  summary["rates"] = {{"fitted", fit_json(fit)},
                      {"predicted", {{"gamma", law.gamma}, {"p", law.p}, {"gated", law.gated}}},
                      {"gamma_tol", gamma_tol},
                      {"match", rate_match}};
  if (law.gated) pass = pass && rate_match;
  {
    auto out = open_out(out_dir, "rates.csv");
    CsvWriter csv(out, {"r", "w"});
    const Eigen::VectorXd e = extract::generic_direction(n);
    for (double r : radii) {
      const Eigen::VectorXd x = r * e;
      double w = sample.u(x) - 0.5 * x.dot(ea.A * x);
      if (b) w -= b->dot(x);
      csv.row({r, w});
    }
  }
  {
    auto out = open_out(out_dir, "ladder.csv");
    std::vector<std::string> header{"level"};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) header.push_back("S" + std::to_string(i) + std::to_string(j));
    CsvWriter csv(out, header);
    for (std::size_t k = 0; k < ea.shapes.size(); ++k) {
      std::vector<double> row{ea.levels[k]};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) row.push_back(ea.shapes[k](i, j));
      csv.row(row);
    }
  }
  summary["pass"] = pass;
  write_json(out_dir, "summary.json", summary);
  return exit_for(pass);
}

}  // namespace malab::cli
