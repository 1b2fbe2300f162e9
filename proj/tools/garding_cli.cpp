// garding: command-line front end. Reports are JSON (schema 1) or CSV.
// Exit status: 0 success, 1 numerical failure or negative verdict, 2 usage.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "garding/garding.hpp"

namespace {

using nlohmann::json;
using namespace garding;

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(text);
  while (std::getline(ss, token, ',')) {
    const auto b = token.find_first_not_of(" \t");
    const auto e = token.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError(std::string("empty entry in ") + what + " list '" + text + "'");
    token = token.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      throw UsageError(std::string("cannot parse '") + token + "' in " + what);
    }
    if (used != token.size() || !std::isfinite(v)) throw UsageError(std::string("cannot parse '") + token + "' in " + what);
    out.push_back(v);
  }
  if (out.empty() || (!text.empty() && text.back() == ','))
    throw UsageError(std::string("malformed ") + what + " list '" + text + "'");
  return out;
}

std::vector<double> read_list_file(const std::string& path, const char* what) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open " + path);
  std::stringstream buf;
  buf << is.rdbuf();
  std::string text = buf.str();
  for (auto& c : text)
    if (c == '\n' || c == '\r' || c == ' ' || c == '\t') c = ',';
  std::string squeezed;
  for (char c : text)
    if (!(c == ',' && (squeezed.empty() || squeezed.back() == ','))) squeezed.push_back(c);
  while (!squeezed.empty() && squeezed.back() == ',') squeezed.pop_back();
  return parse_list(squeezed, what);
}

struct Output {
  std::string path;
  std::string format = "json";
};

void emit(const Output& out, const json& report, const std::string& csv) {
  const std::string text = out.format == "csv" ? csv : report.dump(2) + "\n";
  if (out.path.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(out.path);
    if (!os) throw UsageError("cannot open " + out.path + " for writing");
    os << text;
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

// Coefficients from --coeffs (a_k) or --alpha (Lovelock couplings alpha_k).
CoeffVector coefficients(const std::string& coeffs, const std::string& alpha, int n) {
  if (coeffs.empty() == alpha.empty()) throw UsageError("give exactly one of --coeffs and --alpha");
  if (!coeffs.empty()) return CoeffVector(parse_list(coeffs, "coefficient"));
  return alpha_to_a(LovelockCoeffs(n, parse_list(alpha, "alpha")));
}

// ---------------------------------------------------------------- check-cone

struct ConeArgs {
  std::string lambda, lambda_file;
  double tau = 0.0;
};

int run_check_cone(const ConeArgs& a, const Output& out) {
  if (a.lambda.empty() == a.lambda_file.empty()) throw UsageError("give exactly one of --lambda and --lambda-file");
  const ConePoint x(a.lambda.empty() ? read_list_file(a.lambda_file, "lambda") : parse_list(a.lambda, "lambda"));
  const int k = cone_membership(x, a.tau);
  json report{{"schema", 1}, {"command", "check-cone"}, {"n", x.n()}, {"tau", a.tau}, {"k", k}};
  report["lambda"] = vec_json(x.vector());
  report["sigma"] = x.sigmas();
  std::string csv = "k,sigma_k,in_gamma_k\n";
  for (int j = 0; j <= x.n(); ++j) csv += std::to_string(j) + "," + num(x.sigma(j)) + "," + (j <= k ? "1" : "0") + "\n";
  emit(out, report, csv);
  return kOk;
}

// ---------------------------------------------------------- check-concavity

struct ConcavityArgs {
  std::string coeffs, alpha;
  int n = 0;
  std::optional<double> power;
  bool log = false;
  std::string loglog;
  int iterlog = 0;
  std::string shifts;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  double tau = 1e-9;
  bool certificate_only = false;
};

Concavifier choose_concavifier(const ConcavityArgs& a, const CoeffVector& coeffs) {
  const int chosen = (a.power ? 1 : 0) + (a.log ? 1 : 0) + (a.loglog.empty() ? 0 : 1) + (a.iterlog > 0 ? 1 : 0);
  if (chosen > 1) throw UsageError("choose at most one of --power, --log, --loglog, --iterlog");
  if (a.power) return Concavifier::power(*a.power);
  if (a.log) return Concavifier::log();
  if (!a.loglog.empty()) {
    if (a.loglog == "auto") {
      if (!(coeffs[0] > 0)) throw UsageError("--loglog auto needs a_0 > 0");
      return Concavifier::loglog(1.0 - std::log(coeffs[0]));
    }
    return Concavifier::loglog(parse_list(a.loglog, "loglog shift").at(0));
  }
  if (a.iterlog > 0) {
    std::vector<double> shifts = a.shifts.empty() ? std::vector<double>(static_cast<std::size_t>(a.iterlog), 0.0)
                                                   : parse_list(a.shifts, "shift");
    return Concavifier::iterlog(a.iterlog, shifts);
  }
  int q = coeffs.p();
  while (q > 0 && coeffs[q] == 0.0) --q;
  return Concavifier::power(1.0 / std::max(q, 1));
}

json certificate_table(const CoeffVector& coeffs, int n) {
  json t{{"p2", nullptr}, {"kurtz", nullptr}, {"walsh", nullptr}, {"tail", nullptr}};
  if (!coeffs.non_negative()) return t;
  if (coeffs.p() == 2) t["p2"] = p2_criterion(coeffs[0], coeffs[1], coeffs[2], n);
  t["kurtz"] = kurtz_certificate(coeffs);
  t["walsh"] = walsh_certificate(coeffs, n);
  t["tail"] = real_rooted_tail_certificate(coeffs);
  return t;
}

json witness_json(const ConcavityWitness& w) {
  return {{"x", vec_json(w.x.vector())}, {"direction", vec_json(w.u)}, {"rayleigh", w.rayleigh}, {"sample", w.sample}};
}

int run_check_concavity(const ConcavityArgs& a, const Output& out) {
  if (a.n < 1) throw UsageError("--n must be positive");
  const CoeffVector coeffs = coefficients(a.coeffs, a.alpha, a.n);
  detail::require_degree_fits(coeffs, a.n, "check-concavity");
  const Concavifier F = choose_concavifier(a, coeffs);
  json report{{"schema", 1}, {"command", "check-concavity"}, {"n", a.n}, {"concavifier", F.name()}, {"seed", a.seed}};
  report["coeffs"] = std::vector<double>(coeffs.values().begin(), coeffs.values().end());

  if (a.certificate_only) {
    if (!coeffs.non_negative()) throw UsageError("certificates need non-negative coefficients");
    report["certificates"] = certificate_table(coeffs, a.n);
    const auto cert = concavity_certificate(F, coeffs, a.n);
    report["certificate"] = cert ? json(*cert) : json(nullptr);
    report["sampling"] = nullptr;
    std::string csv = "certificate,holds\n";
    for (const auto& [name, v] : report["certificates"].items()) csv += name + "," + (v.is_null() ? "" : v.dump()) + "\n";
    emit(out, report, csv);
    return cert ? kOk : kFailure;
  }

  SamplingOptions opt;
  opt.tau_psd = a.tau;
  ConcavityVerdict v;
  const bool loglog_p2 = F.kind() == ConcavifierKind::LogLog && coeffs.p() <= 2 && coeffs.non_negative() && coeffs[0] > 0;
  if (loglog_p2) {
    const double b = coeffs.p() >= 1 ? coeffs[1] : 0.0, c = coeffs.p() >= 2 ? coeffs[2] : 0.0;
    const auto rep = loglog_concavifier_check(coeffs[0], b, c, F.shifts().front(), a.n, a.samples, a.seed, opt);
    v = rep.verdict;
    report["loglog"] = {{"s", F.shifts().front()},
                        {"delta", rep.delta},
                        {"phi_floor", rep.phi_floor},
                        {"det_sign_mismatches", rep.det_sign_mismatches},
                        {"phi_nonpositive", rep.phi_nonpositive}};
  } else {
    v = sample_concavity(F, coeffs, a.n, a.samples, a.seed, opt);
  }
  report["certificates"] = certificate_table(coeffs, a.n);
  report["certificate"] = v.certificate ? json(*v.certificate) : json(nullptr);
  report["sampling"] = {{"verdict", to_string(v.status)}, {"samples", v.samples}, {"skipped", v.skipped}, {"unconfirmed", v.unconfirmed}};
  if (v.witness) report["witness"] = witness_json(*v.witness);

  std::string csv = "sample,in_domain,lambda_max_ratio,bracket_norm,x\n";
  if (out.format == "csv") {
    for (std::size_t i = 0; i < a.samples; ++i) {
      const ConePoint x = cone_sample(a.n, a.seed, i, opt);
      const auto pc = detail::check_point(F, coeffs, x, opt.tau_psd);
      std::string xs;
      for (int j = 0; j < x.n(); ++j) xs += (j ? ";" : "") + num(x[j]);
      csv += std::to_string(i) + "," + (pc.in_domain ? "1" : "0") + "," + num(pc.ratio) + "," + num(pc.norm) + "," + xs + "\n";
    }
  }
  emit(out, report, csv);
  return concave_status(v.status) ? kOk : kFailure;
}

// ---------------------------------------------------------------- factorize

struct FactorizeArgs {
  std::string coeffs, alpha;
  int n = 0;
};

int run_factorize(const FactorizeArgs& a, const Output& out) {
  if (a.n < 1) throw UsageError("--n must be positive");
  const CoeffVector coeffs = coefficients(a.coeffs, a.alpha, a.n);
  const auto f = concircular_factorize(coeffs, a.n);
  json nu = json::array();
  std::string csv = "index,nu_re,nu_im\n";
  for (std::size_t i = 0; i < f.nu.size(); ++i) {
    nu.push_back({{"re", f.nu[i].real()}, {"im", f.nu[i].imag()}});
    csv += std::to_string(i) + "," + num(f.nu[i].real()) + "," + num(f.nu[i].imag()) + "\n";
  }
  const auto fbar = diagonal_restriction(coeffs, a.n);
  std::vector<double> fbar_coeffs;
  for (int k = 0; k <= coeffs.p(); ++k) fbar_coeffs.push_back(fbar.coeff(k).get_d());
  json report{{"schema", 1}, {"command", "factorize"}, {"n", a.n}, {"all_real", f.all_real}, {"nu", nu}};
  report["coeffs"] = std::vector<double>(coeffs.values().begin(), coeffs.values().end());
  report["diagonal_restriction"] = fbar_coeffs;
  report["scale"] = f.scale ? json(*f.scale) : json(nullptr);
  emit(out, report, csv);
  return kOk;
}

// ------------------------------------------------------------ lovelock-eval

struct LovelockArgs {
  std::string model = "constant-curvature";
  double kappa = 1.0;
  int n = 0;
  std::optional<int> k;
  std::string schouten;
  std::uint64_t seed = 0;
};

RiemannTensor build_model(const LovelockArgs& a) {
  if (a.model == "constant-curvature") return RiemannTensor::constant_curvature(a.n, a.kappa);
  if (a.model == "schouten") {
    const auto v = parse_list(a.schouten, "schouten");
    if (static_cast<int>(v.size()) != a.n * a.n) throw UsageError("--schouten needs n*n row-major entries");
    return riemann_from_schouten(SchoutenMatrix(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), a.n, a.n)));
  }
  if (a.model == "random") {
    // sum of three Kulkarni-Nomizu products of seeded symmetric matrices
    RiemannTensor r(a.n);
    for (int t = 0; t < 3; ++t) {
      Eigen::MatrixXd h(a.n, a.n), g(a.n, a.n);
      auto rng = SplitMix64::stream(a.seed, static_cast<std::size_t>(t));
      for (int i = 0; i < a.n; ++i)
        for (int j = 0; j <= i; ++j) {
          h(i, j) = h(j, i) = rng.normal();
          g(i, j) = g(j, i) = rng.normal();
        }
      r = r + RiemannTensor::kulkarni_nomizu(h, g);
    }
    return r;
  }
  throw UsageError("unknown --model '" + a.model + "' (constant-curvature, schouten, random)");
}

int run_lovelock_eval(const LovelockArgs& a, const Output& out) {
  if (a.n < 1) throw UsageError("--n must be positive");
  const RiemannTensor R = build_model(a);
  const bool conformally_flat = a.model != "random";
  const int top = lovelock_top_degree(a.n);
  if (a.k && (*a.k < 0 || *a.k > top)) throw UsageError("--k must lie in [0, floor((n+1)/2)]");
  const int k_lo = a.k ? *a.k : 0, k_hi = a.k ? *a.k : top;

  std::optional<ConePoint> lambda;
  if (conformally_flat && a.n >= 3) lambda = schouten_eigenvalues(schouten(R));
  json table = json::array();
  std::string csv = "k,value,closed_form,lcf_sigma\n";
  bool ok = true;
  for (int k = k_lo; k <= k_hi; ++k) {
    const auto c = detail::kronecker_contraction(std::vector<const RiemannTensor*>(static_cast<std::size_t>(k), &R));
    json row{{"k", k}, {"value", c.value}, {"closed_form", nullptr}, {"lcf_sigma", nullptr}};
    const double tol = 1e-10 * std::max(1.0, c.magnitude);
    std::string closed_s, lcf_s;
    if (k <= 3) {
      const double closed = lovelock_closed_form(R, k);
      row["closed_form"] = closed;
      row["closed_form_residual"] = std::abs(closed - c.value);
      closed_s = num(closed);
      if (2 * k <= a.n) ok = ok && std::abs(closed - c.value) <= tol;
    }
    if (lambda && 2 * k <= a.n) {
      const double s = lovelock_sigma_factor(a.n, k) * lambda->sigma(k);
      row["lcf_sigma"] = s;
      row["lcf_residual"] = std::abs(s - c.value);
      lcf_s = num(s);
      ok = ok && std::abs(s - c.value) <= tol;
    }
    table.push_back(row);
    csv += std::to_string(k) + "," + num(c.value) + "," + closed_s + "," + lcf_s + "\n";
  }
  json report{{"schema", 1}, {"command", "lovelock-eval"}, {"model", a.model}, {"n", a.n}, {"table", table}, {"identities_hold", ok}};
  if (a.model == "constant-curvature") report["kappa"] = a.kappa;
  if (a.model == "random") report["seed"] = a.seed;
  emit(out, report, csv);
  return ok ? kOk : kFailure;
}

// -------------------------------------------------------------------- solve

struct SolveArgs {
  std::string coeffs, alpha;
  int n = 3;
  int grid = 16;
  double length = 2 * std::numbers::pi;
  std::optional<double> E;
  std::string u0 = "one";
  double amplitude = 0.05;
  double background_scalar = 0.0;
  std::string field_out = "solution.field";
  SolverConfig cfg;
};

int run_solve(const SolveArgs& a, const Output& out) {
  const CoeffVector coeffs = coefficients(a.coeffs, a.alpha, a.n);
  const PeriodicGrid grid(a.n, std::vector<int>(static_cast<std::size_t>(a.n), a.grid),
                          std::vector<double>(static_cast<std::size_t>(a.n), a.length));
  std::optional<GridSchoutenField> background;
  if (a.background_scalar != 0.0)
    background = GridSchoutenField::constant(grid, Eigen::MatrixXd::Identity(a.n, a.n) * (a.background_scalar / a.n));
  const GridSchoutenField* bg = background ? &*background : nullptr;

  const bool manufactured = a.u0 == "manufactured";
  GridField u0(grid, 1.0);
  GridField E(grid, a.E.value_or(1.0));
  std::optional<GridField> ustar;
  if (manufactured) {
    if (a.E) std::cerr << "garding solve: --u0 manufactured prescribes E from the manufactured factor; --E is ignored\n";
    ustar = manufactured_conformal_factor(grid, a.amplitude);
    E = prescription_residual(*ustar, coeffs, GridField(grid), bg);
  } else if (a.u0 != "one") {
    u0 = read_field(a.u0).field;
    if (!(u0.grid() == grid)) throw UsageError("--u0 field does not match --n/--grid/--length");
  }

  json report{{"schema", 1}, {"command", "solve"}, {"n", a.n}, {"grid", a.grid}, {"length", a.length}};
  report["coeffs"] = std::vector<double>(coeffs.values().begin(), coeffs.values().end());
  report["target"] = manufactured ? json("manufactured") : json(a.E.value_or(1.0));
  report["background_scalar"] = a.background_scalar;
  json log = json::array();
  std::string csv = "iteration,residual,damping,krylov_iterations\n";
  SolverConfig cfg = a.cfg;
  cfg.observer = [&](const NewtonStep& s) {
    log.push_back({{"iteration", s.iteration}, {"residual", s.residual}, {"damping", s.damping}, {"krylov_iterations", s.krylov_iterations}});
    csv += std::to_string(s.iteration) + "," + num(s.residual) + "," + num(s.damping) + "," + std::to_string(s.krylov_iterations) + "\n";
  };
  int status = kOk;
  try {
    const auto rep = newton_solve(coeffs, E, u0, cfg, bg);
    write_field(a.field_out, rep.u, "u");
    report["converged"] = true;
    report["iterations"] = rep.iterations;
    report["residual"] = rep.residual;
    report["field"] = a.field_out;
    if (ustar) report["manufactured"] = {{"amplitude", a.amplitude}, {"error", (rep.u - *ustar).sup_norm()}};
  } catch (const NumericalError& e) {
    report["converged"] = false;
    report["residual"] = e.last_residual();
    report["error"] = e.what();
    status = kFailure;
  } catch (const PositivityError& e) {
    report["converged"] = false;
    report["error"] = e.what();
    status = kFailure;
  }
  report["log"] = log;
  emit(out, report, csv);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Garding-cone concavity, Lovelock identities and conformal prescription toolkit"};
  app.require_subcommand(1);
  Output out;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output,-o", out.path, "write the report here instead of stdout");
    sub->add_option("--format", out.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  ConeArgs cone;
  auto* c_cone = app.add_subcommand("check-cone", "largest k with lambda in Gamma_k");
  c_cone->add_option("--lambda", cone.lambda, "comma-separated eigenvalues");
  c_cone->add_option("--lambda-file", cone.lambda_file, "file with eigenvalues (comma or whitespace separated)");
  c_cone->add_option("--tau", cone.tau, "membership threshold for sigma_k");
  add_output(c_cone);

  ConcavityArgs conc;
  double power = 0;
  auto* c_conc = app.add_subcommand("check-concavity", "certificates and sampled Hessian verdict for F o f_a");
  c_conc->add_option("--coeffs", conc.coeffs, "a_0,...,a_p");
  c_conc->add_option("--alpha", conc.alpha, "Lovelock couplings alpha_0,...,alpha_p");
  c_conc->add_option("--n", conc.n, "dimension")->required();
  auto* power_opt = c_conc->add_option("--power", power, "F = sgn(alpha) t^alpha");
  c_conc->add_flag("--log", conc.log, "F = ln t");
  c_conc->add_option("--loglog", conc.loglog, "F = ln(s + ln t); a number or 'auto' for s = 1 - ln a_0");
  c_conc->add_option("--iterlog", conc.iterlog, "depth of the iterated logarithm");
  c_conc->add_option("--shifts", conc.shifts, "iterated-logarithm shifts");
  c_conc->add_option("--samples", conc.samples, "Hessian probes");
  c_conc->add_option("--seed", conc.seed, "sampling seed");
  c_conc->add_option("--tau", conc.tau, "relative eigenvalue threshold");
  c_conc->add_flag("--certificate-only", conc.certificate_only, "skip sampling");
  add_output(c_conc);

  FactorizeArgs fact;
  auto* c_fact = app.add_subcommand("factorize", "concircular factorization of the Lovelock sum");
  c_fact->add_option("--coeffs", fact.coeffs, "a_0,...,a_p");
  c_fact->add_option("--alpha", fact.alpha, "Lovelock couplings alpha_0,...,alpha_p");
  c_fact->add_option("--n", fact.n, "dimension")->required();
  add_output(c_fact);

  LovelockArgs love;
  int love_k = -1;
  auto* c_love = app.add_subcommand("lovelock-eval", "Lovelock products and identity residuals");
  c_love->add_option("--model", love.model, "constant-curvature, schouten or random");
  c_love->add_option("--kappa", love.kappa, "sectional curvature");
  c_love->add_option("--n", love.n, "dimension")->required();
  auto* love_k_opt = c_love->add_option("--k", love_k, "single order k (default: all)");
  c_love->add_option("--schouten", love.schouten, "n*n row-major Schouten matrix");
  c_love->add_option("--seed", love.seed, "seed of the random model");
  add_output(c_love);

  SolveArgs solve;
  double E = 1.0;
  auto* c_solve = app.add_subcommand("solve", "Newton solve of f_a(lambda(u^{4/(n-2)} delta)) = E on the flat torus");
  c_solve->add_option("--coeffs", solve.coeffs, "a_0,...,a_p");
  c_solve->add_option("--alpha", solve.alpha, "Lovelock couplings alpha_0,...,alpha_p");
  c_solve->add_option("--n", solve.n, "dimension (3 or 4)");
  c_solve->add_option("--grid", solve.grid, "points per axis");
  c_solve->add_option("--length", solve.length, "period per axis");
  auto* E_opt = c_solve->add_option("--E", E, "constant target");
  c_solve->add_option("--u0", solve.u0, "one, manufactured, or a field file");
  c_solve->add_option("--amplitude", solve.amplitude, "amplitude of the manufactured factor");
  c_solve->add_option("--background-scalar", solve.background_scalar, "constant background scalar curvature");
  c_solve->add_option("--field-out", solve.field_out, "where to write the solution field");
  c_solve->add_option("--newton-tol", solve.cfg.newton_tol, "residual sup-norm tolerance");
  c_solve->add_option("--max-newton", solve.cfg.max_newton, "Newton iteration cap");
  add_output(c_solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*c_cone) return run_check_cone(cone, out);
    if (*c_conc) {
      if (*power_opt) conc.power = power;
      return run_check_concavity(conc, out);
    }
    if (*c_fact) return run_factorize(fact, out);
    if (*c_love) {
      if (*love_k_opt) love.k = love_k;
      return run_lovelock_eval(love, out);
    }
    if (*c_solve) {
      if (*E_opt) solve.E = E;
      return run_solve(solve, out);
    }
  } catch (const UsageError& e) {
    std::cerr << "garding: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "garding: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "garding: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "garding: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
