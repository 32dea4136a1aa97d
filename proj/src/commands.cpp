#include "swme/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "swme/field_io.hpp"

namespace swme {

std::string tool_version() { return SWME_VERSION; }

void CliOverrides::apply(Config& cfg) const {
  if (out) cfg.set("output", "dir", *out);
  if (resolution) cfg.set("scenario", "resolution", std::to_string(*resolution));
  if (variant) cfg.set("model", "variant", *variant);
  if (order) cfg.set("model", "order", std::to_string(*order));
  if (cfl) cfg.set("solver", "cfl", fmt(*cfl));
  if (seed) cfg.set("run", "seed", std::to_string(*seed));
}

namespace {

std::string run_tag(const RunConfig& rc) {
  return scenario_name(rc.scenario.name) + "_" + variant_name(rc.variant.tag) + "_N" +
         std::to_string(rc.N);
}

}  // namespace

int cmd_simulate(const std::string& config_path, const CliOverrides& ov, std::ostream& log,
                 std::ostream& err) {
  Config cfg;
  RunConfig rc;
  try {
    cfg = Config::load(config_path);
    ov.apply(cfg);
    rc = run_config_from(cfg);
    std::filesystem::create_directories(rc.out_dir);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string tag = run_tag(rc);
  const std::string vname = variant_name(rc.variant.tag);
  SnapshotWriter snaps(rc.out_dir, vname, tag);
  CutLineWriter cuts(rc.out_dir, tag);
  ConservationMonitor mon;
  std::vector<Observer*> obs{&cuts, &mon};
  if (rc.write_snapshots) obs.push_back(&snaps);
  RunResult res;
  try {
    FieldState init = initial_field(rc.scenario, rc.N);
    res = run(init, rc.solver_config(), obs);
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  double hmin = 1e300, hmax = -1e300;
  for (std::size_t c = 0; c < res.state.grid.cells(); ++c) {
    hmin = std::min(hmin, res.state.U[c * res.state.m()]);
    hmax = std::max(hmax, res.state.U[c * res.state.m()]);
  }
  const std::string base = (std::filesystem::path(rc.out_dir) / tag).string();
  {
    std::ofstream f(base + "_conservation.csv");
    mon.write(f);
  }
  std::ofstream rep(base + "_run.txt");
  rep << "# swme simulate version=" << tool_version() << " config_hash=" << hex64(cfg.hash())
      << " seed=" << rc.seed << "\n";
  rep << cfg.serialize() << "\n";
  rep << "steps=" << res.steps << " t=" << fmt(res.state.time) << "\n";
  rep << "h_min=" << fmt(hmin) << " h_max=" << fmt(hmax) << "\n";
  rep << "mass_relative_drift=" << fmt(mon.max_relative_drift()) << "\n";
  rep << "max_stiffness=" << fmt(res.max_stiffness) << "\n";
  for (const auto& w : res.warnings) rep << "warning: " << w << "\n";
  log << tag << ": " << res.steps << " steps to t=" << fmt(res.state.time)
      << ", h in [" << fmt(hmin) << ", " << fmt(hmax) << "], mass drift "
      << fmt(mon.max_relative_drift()) << "\n";
  for (const auto& w : res.warnings) log << "warning: " << w << "\n";
  return kExitOk;
}

PrimitiveState random_state(int N, std::mt19937_64& rng, double g, double h_lo, double h_hi) {
  std::uniform_real_distribution<double> hd(h_lo, h_hi), u(-1.0, 1.0);
  PrimitiveState V = PrimitiveState::rest(N, hd(rng), g);
  V.um = u(rng);
  V.vm = u(rng);
  for (int i = 0; i < N; ++i) {
    V.alpha[i] = u(rng);
    V.beta[i] = u(rng);
  }
  return V;
}

std::optional<Hyperbolicity> expected_class(Variant v, int N, bool corner, double beta1) {
  if (v == Variant::Custom) return std::nullopt;
  if (v == Variant::SWME && N > 1) return std::nullopt;
  if (v == Variant::GloballyHyperbolic && N >= 2) return Hyperbolicity::Hyperbolic;
  if (corner && beta1 != 0.0) return Hyperbolicity::WeaklyHyperbolic;
  return Hyperbolicity::Hyperbolic;
}

namespace {

int severity(Hyperbolicity h) {
  switch (h) {
    case Hyperbolicity::Hyperbolic: return 0;
    case Hyperbolicity::WeaklyHyperbolic: return 1;
    case Hyperbolicity::NonHyperbolic: return 2;
  }
  return 2;
}

}  // namespace

CertifyRow certify_one(Variant v, int N, const CertifyOptions& opt) {
  CertifyRow row;
  row.variant = v;
  row.N = N;
  Model model(v, N);
  std::seed_seq seq{opt.seed, static_cast<unsigned>(v), static_cast<unsigned>(N)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  MatrixAssembler assembler = [&model](const PrimitiveState& W) {
    MatrixPair p;
    model.matrices(W, p.A.entries, p.B.entries);
    p.B.direction = Direction::Y;
    return p;
  };
  const auto dirs = certification_angles(opt.directions);
  row.min_gap = std::numeric_limits<double>::infinity();
  const auto expect_random = expected_class(v, N, false, 0.0);
  for (int s = 0; s < opt.samples; ++s) {
    PrimitiveState V = s % 2 ? random_state(N, rng, 1.0, 0.02, 0.2) : random_state(N, rng);
    for (int a = 0; a < opt.angles; ++a) {
      InvarianceResidual r = invariance_residual(V, assembler, angle(rng));
      row.max_invariance = std::max(row.max_invariance, r.max() / r.scale);
    }
    auto reports = certify_hyperbolicity(V, model, dirs);
    Hyperbolicity worst = Hyperbolicity::Hyperbolic;
    for (const auto& r : reports) {
      if (severity(r.classification) > severity(worst)) worst = r.classification;
      if (!r.complex_detected)
        row.min_gap = std::min(row.min_gap, r.min_gap / (1.0 + r.spectral_radius));
      row.max_shortcut_deviation = std::max(row.max_shortcut_deviation, r.shortcut_deviation);
    }
    if (worst == Hyperbolicity::NonHyperbolic) ++row.complex_states;
    if (severity(worst) > severity(row.worst_random)) row.worst_random = worst;
    if (expect_random && worst != *expect_random)
      row.contradictions.push_back("random state " + std::to_string(s) + " classified " +
                                   hyperbolicity_name(worst) + ", expected " +
                                   hyperbolicity_name(*expect_random));
  }
  for (double b1 : {0.0, 0.5}) {
    PrimitiveState V = random_state(N, rng);
    V.alpha[0] = 0.0;
    V.beta[0] = b1;
    Eigen::MatrixXd A;
    model.matrix_x(V, A);
    SpectralReport rep = spectral_report(A, 0.0);
    CornerResult c;
    c.beta1 = b1;
    c.classification = rep.classification;
    double best = 1e300;
    for (const auto& cl : rep.clusters)
      if (std::abs(cl.value - V.um) < best) {
        best = std::abs(cl.value - V.um);
        c.geometric_um = cl.geometric;
        c.algebraic_um = cl.algebraic;
      }
    row.corners.push_back(c);
    auto e = expected_class(v, N, true, b1);
    if (e && c.classification != *e)
      row.contradictions.push_back("corner beta_1=" + fmt(b1) + " classified " +
                                   hyperbolicity_name(c.classification) + ", expected " +
                                   hyperbolicity_name(*e));
  }
  return row;
}

std::string format_certify_row(const CertifyRow& r) {
  std::ostringstream os;
  os << "variant=" << variant_name(r.variant) << " N=" << r.N
     << " invariance=" << fmt(r.max_invariance) << " random=" << hyperbolicity_name(r.worst_random)
     << " complex_states=" << r.complex_states << " min_gap=" << fmt(r.min_gap)
     << " shortcut_dev=" << fmt(r.max_shortcut_deviation);
  for (const auto& c : r.corners)
    os << " corner(beta_1=" << fmt(c.beta1) << ")=" << hyperbolicity_name(c.classification) << "["
       << c.geometric_um << "/" << c.algebraic_um << "]";
  os << " status=" << (r.contradictions.empty() ? "ok" : "CONTRADICTION");
  for (const auto& c : r.contradictions) os << "\n  ! " << c;
  return os.str();
}

int cmd_certify(const CertifyOptions& opt, const std::string& out_path, std::ostream& log,
                std::ostream& err) {
  Config echo;
  std::string vs, ns;
  for (Variant v : opt.variants) vs += (vs.empty() ? "" : ",") + variant_name(v);
  for (int n : opt.orders) ns += (ns.empty() ? "" : ",") + std::to_string(n);
  echo.set("certify", "variants", vs);
  echo.set("certify", "orders", ns);
  echo.set("certify", "samples", std::to_string(opt.samples));
  echo.set("certify", "angles", std::to_string(opt.angles));
  echo.set("certify", "directions", std::to_string(opt.directions));
  echo.set("certify", "seed", std::to_string(opt.seed));
  std::ostringstream rep;
  rep << "# swme certify version=" << tool_version() << " config_hash=" << hex64(echo.hash())
      << " seed=" << opt.seed << "\n";
  bool contradiction = false;
  try {
    for (Variant v : opt.variants)
      for (int N : opt.orders) {
        CertifyRow row = certify_one(v, N, opt);
        contradiction = contradiction || !row.contradictions.empty();
        const std::string line = format_certify_row(row);
        rep << line << "\n";
        log << line << "\n";
      }
  } catch (const std::exception& e) {
    err << "certification failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kExitConfig;
    }
    f << rep.str();
  }
  if (contradiction) {
    err << "classification contradicts the theorem table\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_build_closure(int N, const std::vector<std::string>& targets, const std::string& out_path,
                      std::ostream& log, std::ostream& err) {
  BuiltClosure built;
  std::vector<ClosureTarget> parsed;
  try {
    if (N < 1) throw std::invalid_argument("order must be >= 1");
    for (const auto& t : targets) parsed.push_back(parse_closure_target(t, N));
    built = build_closure(N, parsed, "Custom");
  } catch (const SingularMatch& e) {
    err << "closure matching failed: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "closure target error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::ostringstream os;
  os << "# swme build-closure version=" << tool_version() << "\n";
  os << built.spec.serialize();
  os << "partner blocks of the last block row (c1..c6 of the y-direction block)\n";
  for (int j = 1; j <= N + 1; ++j) {
    const auto& a = built.exact.at(N + 1, j);
    if (a.is_zero()) continue;
    const std::array<Rational, 6> b{-a.c[4], -a.c[5], -a.c[3], a.c[2], a.c[0], a.c[1]};
    os << "  (" << N + 1 << "," << j << "):";
    for (const auto& x : b) os << " " << format_rational(x);
    os << "\n";
  }
  // spectrum and invariance at a reference state with alpha_1 != 0
  PrimitiveState V = PrimitiveState::rest(N, 1.0, 1.0);
  V.um = 0.1;
  V.vm = -0.05;
  V.alpha[0] = 0.5;
  V.beta[0] = 0.25;
  Model model(ModelVariant::make_custom(built.closure), N);
  os << "reference state h=1 g=1 u_m=0.1 v_m=-0.05 alpha_1=0.5 beta_1=0.25\n";
  double inv = 0.0;
  for (double th : certification_angles(8)) {
    auto r = invariance_residual(
        V,
        [&model](const PrimitiveState& W) {
          MatrixPair p;
          model.matrices(W, p.A.entries, p.B.entries);
          return p;
        },
        th);
    inv = std::max(inv, r.max() / r.scale);
  }
  os << "invariance_residual " << fmt(inv) << "\n";
  os << serialize_reports(certify_hyperbolicity(V, model, {0.0, std::numbers::pi / 4, std::numbers::pi / 2}));
  if (out_path.empty()) {
    log << os.str();
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kExitConfig;
    }
    f << os.str();
    log << "wrote " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_eigen_table(const ModelVariant& v, const PrimitiveState& V, const std::string& out_path,
                    std::ostream& log, std::ostream& err) {
  std::ostringstream os;
  try {
    const int N = V.order();
    Model model(v, N);
    Eigen::MatrixXd A;
    model.matrix_x(V, A);
    NumericSpectrum ns = numeric_eigen(A);
    auto an = analytic_eigenvalues(v, V);
    os << "# swme eigen-table version=" << tool_version() << " variant=" << variant_name(v.tag)
       << " N=" << N << " h=" << fmt(V.h) << " g=" << fmt(V.g) << " u_m=" << fmt(V.um)
       << " alpha_1=" << fmt(V.alpha[0]) << " beta_1=" << fmt(V.beta[0]) << "\n";
    os << "index,analytic,numeric_real,numeric_imag,abs_diff\n";
    double dev = 0.0;
    for (std::size_t k = 0; k < ns.eigenvalues.size(); ++k) {
      const auto z = ns.eigenvalues[k];
      os << k << "," << (an ? fmt((*an)[k]) : "NA") << "," << fmt(z.real()) << "," << fmt(z.imag())
         << ",";
      if (an) {
        const double d = std::abs(z - std::complex<double>((*an)[k], 0.0));
        dev = std::max(dev, d);
        os << fmt(d);
      } else {
        os << "NA";
      }
      os << "\n";
    }
    os << "# max_deviation=" << (an ? fmt(dev) : "NA")
       << " classification=" << hyperbolicity_name(classify(ns)) << "\n";
  } catch (const std::exception& e) {
    err << "eigen-table failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  if (out_path.empty()) {
    log << os.str();
  } else {
    std::ofstream f(out_path);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return kExitConfig;
    }
    f << os.str();
  }
  return kExitOk;
}

namespace {

std::vector<int> parse_orders(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      out.push_back(std::stoi(item));
    } else {
      const int a = std::stoi(item.substr(0, dash)), b = std::stoi(item.substr(dash + 1));
      if (b < a) throw std::invalid_argument("empty order range " + item);
      for (int n = a; n <= b; ++n) out.push_back(n);
    }
  }
  for (int n : out)
    if (n < 1) throw std::invalid_argument("orders must be >= 1");
  return out;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Shallow water moment models: simulation, certification and closures"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);

  std::string config_path;
  CliOverrides ov;
  auto* sim = app.add_subcommand("simulate", "Run a scenario from a config file");
  sim->add_option("--config", config_path, "Config file")->required();
  sim->add_option("--out", ov.out, "Output directory");
  sim->add_option("--resolution", ov.resolution, "Cells per axis");
  sim->add_option("--variant", ov.variant, "Model variant");
  sim->add_option("--order", ov.order, "Number of moments N");
  sim->add_option("--cfl", ov.cfl, "CFL number");
  sim->add_option("--seed", ov.seed, "Seed");

  std::vector<std::string> cert_variants{"SWME", "HSWME", "BetaHSWME", "GloballyHyperbolic",
                                         "GeneralClosureExample"};
  std::string cert_orders = "1-5", cert_out;
  CertifyOptions copt;
  int cert_seed = 1;
  auto* cert = app.add_subcommand("certify", "Invariance and hyperbolicity sweep");
  cert->add_option("--variant", cert_variants, "Variants to certify")->capture_default_str();
  cert->add_option("--order", cert_orders, "Orders, e.g. 1-5,8")->capture_default_str();
  cert->add_option("--samples", copt.samples, "Random states per (variant, N)")->capture_default_str();
  cert->add_option("--angles", copt.angles, "Random angles per state")->capture_default_str();
  cert->add_option("--directions", copt.directions, "Certification directions")->capture_default_str();
  cert->add_option("--seed", cert_seed, "Seed")->capture_default_str();
  cert->add_option("--out", cert_out, "Report file");

  int bc_order = 2;
  std::vector<std::string> bc_targets{"lobatto"};
  std::string bc_out;
  auto* bc = app.add_subcommand("build-closure", "Match a last row to a target polynomial");
  bc->add_option("--order", bc_order, "Number of moments N")->required();
  bc->add_option("--target", bc_targets,
                 "lobatto | default | legendre | shift:<c> | a22:<c0,..> | a11:<c0,..>")
      ->capture_default_str();
  bc->add_option("--out", bc_out, "Output file");

  std::string et_variant = "HSWME", et_out;
  int et_order = 1;
  double et_h = 1.0, et_g = 1.0, et_u = 0.0, et_v = 0.0, et_a = 1.0, et_b = 0.0;
  auto* et = app.add_subcommand("eigen-table", "Analytic and numeric eigenvalues of A");
  et->set_help_flag("--help", "Print this help message and exit");
  et->add_option("--variant", et_variant)->capture_default_str();
  et->add_option("--order", et_order)->capture_default_str();
  et->add_option("--h", et_h)->capture_default_str();
  et->add_option("--g", et_g)->capture_default_str();
  et->add_option("--u", et_u)->capture_default_str();
  et->add_option("--v", et_v)->capture_default_str();
  et->add_option("--alpha", et_a, "alpha_1")->capture_default_str();
  et->add_option("--beta", et_b, "beta_1")->capture_default_str();
  et->add_option("--out", et_out, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*sim) return cmd_simulate(config_path, ov, std::cout, std::cerr);
  if (*cert) {
    try {
      for (const auto& v : cert_variants) copt.variants.push_back(parse_variant(v));
      copt.orders = parse_orders(cert_orders);
      if (cert_seed < 0 || copt.samples < 0 || copt.angles < 0 || copt.directions < 1)
        throw std::invalid_argument("counts must be non-negative");
      copt.seed = static_cast<unsigned>(cert_seed);
    } catch (const std::exception& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitConfig;
    }
    return cmd_certify(copt, cert_out, std::cout, std::cerr);
  }
  if (*bc) return cmd_build_closure(bc_order, bc_targets, bc_out, std::cout, std::cerr);
  if (*et) {
    ModelVariant mv;
    PrimitiveState V;
    try {
      mv = parse_variant(et_variant);
      if (et_order < 1) throw std::invalid_argument("order must be >= 1");
      if (!(et_h > 0.0) || !(et_g > 0.0)) throw std::invalid_argument("h and g must be positive");
      V = PrimitiveState::rest(et_order, et_h, et_g);
      V.um = et_u;
      V.vm = et_v;
      V.alpha[0] = et_a;
      V.beta[0] = et_b;
    } catch (const std::exception& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitConfig;
    }
    return cmd_eigen_table(mv, V, et_out, std::cout, std::cerr);
  }
  return kExitConfig;
}

}  // namespace swme
