#include "geodint/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodint/error.hpp"
#include "geodint/oracle.hpp"
#include "geodint/registry.hpp"
#include "geodint/verify.hpp"

namespace geodint::cli {

using json = nlohmann::json;

namespace {

double parse_number(std::string_view token) {
  const std::string s(token);
  if (s.empty() || s.find_first_of(" \t") != std::string::npos) {
    throw Error(ErrorKind::Config, "malformed number: '" + s + "'");
  }
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorKind::Config, "malformed number: '" + s + "'");
  }
  return v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RefPolicy::Tag parse_policy(std::string_view p) {
  if (p == "current") return RefPolicy::Tag::Current;
  if (p == "next") return RefPolicy::Tag::Next;
  if (p == "midpoint") return RefPolicy::Tag::Midpoint;
  if (p == "fixed") return RefPolicy::Tag::Fixed;
  throw Error(ErrorKind::Config, "unknown policy: " + std::string(p));
}

Vector fixed_point_for(const HamiltonianSystem& sys, const std::optional<Vector>& ref_point) {
  if (ref_point) return *ref_point;
  if (sys.equilibria.empty()) {
    throw Error(ErrorKind::Config, sys.name + " has no equilibrium; give the fixed reference with --ref-point");
  }
  return sys.equilibria.front();
}

// Everything the subcommands share.
struct Options {
  std::string problem;
  std::string scheme;
  std::optional<std::string> policy;
  bool locally_exact = false;
  std::optional<std::string> ref_point;
  std::optional<double> h;
  std::optional<std::string> schedule_file;
  std::optional<long long> steps;
  std::optional<double> T;
  std::optional<std::string> y0;
  double tol = 1e-13;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
  std::string format;
  std::optional<std::string> h_list;
  std::string suite;
};

struct Setup {
  Problem problem;
  Scheme scheme;
  Vector y0;
  SolverConfig cfg;
};

Setup make_setup(const Options& o) {
  Setup s{make_problem(o.problem), {}, {}, {}};
  std::optional<Vector> ref;
  if (o.ref_point) ref = parse_vector(*o.ref_point);
  s.scheme = resolve_scheme(o.scheme, s.problem.system, o.policy, o.locally_exact, ref);
  s.y0 = o.y0 ? parse_vector(*o.y0) : s.problem.y0;
  require_dim(s.y0.size(), s.problem.system.dim(), "--y0");
  s.cfg.tol = o.tol;
  validate(s.cfg);
  validate(s.scheme, s.problem.system.dim());
  if (!applicable(s.scheme.rule, s.problem.system)) {
    throw Error(ErrorKind::Config, std::string("scheme ") + to_string(s.scheme.rule) + " does not apply to " +
                                       s.problem.system.name);
  }
  return s;
}

std::vector<double> make_schedule(const Options& o) {
  if (o.schedule_file) {
    if (o.h || o.steps || o.T) throw Error(ErrorKind::Config, "--schedule excludes --h, --steps and --T");
    std::ifstream in(*o.schedule_file);
    if (!in) throw Error(ErrorKind::Config, "cannot read schedule " + *o.schedule_file);
    std::vector<double> sched;
    std::string tok;
    while (in >> tok) sched.push_back(parse_number(tok));
    if (sched.empty()) throw Error(ErrorKind::Config, "schedule " + *o.schedule_file + " is empty");
    return sched;
  }
  if (!o.h) throw Error(ErrorKind::Config, "give --h or --schedule");
  const double h = *o.h;
  if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::Config, "--h must be positive");
  if (o.steps.has_value() == o.T.has_value()) throw Error(ErrorKind::Config, "give exactly one of --steps and --T");
  long long n = 0;
  if (o.steps) {
    n = *o.steps;
  } else {
    const double ratio = *o.T / h;
    n = std::llround(ratio);
    if (!(std::abs(ratio - static_cast<double>(n)) <= 1e-9 * std::max(1.0, std::abs(ratio)))) {
      throw Error(ErrorKind::Config, "--T must be an integer multiple of --h");
    }
  }
  if (n <= 0) throw Error(ErrorKind::Config, "the run needs at least one step");
  return std::vector<double>(static_cast<std::size_t>(n), h);
}

// Output target: the --output file or the given stream.
class Sink {
 public:
  Sink(const std::optional<std::string>& path, std::ostream& fallback) : os_(&fallback) {
    if (path) {
      file_ = std::make_unique<std::ofstream>(*path, std::ios::binary);
      if (!*file_) throw Error(ErrorKind::Config, "cannot write " + *path);
      os_ = file_.get();
    }
  }
  std::ostream& os() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void check_format(const std::string& f) {
  if (f != "csv" && f != "json") throw Error(ErrorKind::Config, "unknown format: " + f);
}

int cmd_integrate(const Options& o, std::ostream& out, std::ostream& err) {
  const Setup s = make_setup(o);
  const std::vector<double> sched = make_schedule(o);
  const std::string format = o.format.empty() ? "csv" : o.format;
  check_format(format);
  const HamiltonianSystem& sys = s.problem.system;
  Sink sink(o.output, out);
  std::ostream& os = sink.os();

  json records = json::array();
  auto emit = [&](std::size_t n, double t, const Vector& y, int iters, double residual) {
    const double H = sys.H(y);
    if (format == "csv") {
      os << n << ',' << num(t);
      for (double v : y) os << ',' << num(v);
      os << ',' << num(H) << ',' << iters << ',' << num(residual) << '\n';
    } else {
      records.push_back({{"n", n}, {"t", t}, {"y", std::vector<double>(y.begin(), y.end())}, {"H", H},
                         {"iters", iters}, {"residual", residual}});
    }
  };
  if (format == "csv") {
    os << "n,t";
    for (std::size_t i = 1; i <= sys.m; ++i) os << ",x" << i;
    for (std::size_t i = 1; i <= sys.m; ++i) os << ",p" << i;
    os << ",H,iters,residual\n";
  }
  emit(0, 0.0, s.y0, 0, 0.0);

  auto header = [&]() {
    return json{{"problem", sys.name},
                {"scheme", to_string(s.scheme.rule)},
                {"locally_exact", s.scheme.locally_exact},
                {"policy", to_string(s.scheme.policy.tag)}};
  };
  try {
    integrate(s.scheme, sys, s.y0, sched, s.cfg,
              [&](std::size_t n, double t, const Vector& y, const StepReport& rep) {
                emit(n, t, y, rep.iterations, rep.residual);
              });
  } catch (const StepError& e) {
    if (format == "csv") {
      os << "# failure,n=" << e.index() << ",kind=" << to_string(e.kind()) << ",iters=" << e.iterations()
         << ",residual=" << num(e.residual()) << ",message=\"" << e.what() << "\"\n";
    } else {
      json doc = header();
      doc["records"] = std::move(records);
      doc["failure"] = {{"n", e.index()},
                        {"kind", to_string(e.kind())},
                        {"iters", e.iterations()},
                        {"residual", e.residual()},
                        {"message", e.what()}};
      os << doc.dump(2) << '\n';
    }
    os.flush();
    err << "geodint: step " << e.index() << " failed: " << e.what() << '\n';
    return 2;
  }
  if (format == "json") {
    json doc = header();
    doc["records"] = std::move(records);
    os << doc.dump(2) << '\n';
  }
  os.flush();
  return 0;
}

int cmd_order(const Options& o, std::ostream& out) {
  const Setup s = make_setup(o);
  if (!o.h_list) throw Error(ErrorKind::Config, "need ≥ 4 step sizes");
  const std::vector<double> hs = parse_list(*o.h_list);
  if (hs.size() < 4) throw Error(ErrorKind::Config, "need ≥ 4 step sizes");
  if (!o.T) throw Error(ErrorKind::Config, "order needs --T");
  const std::string format = o.format.empty() ? "json" : o.format;
  check_format(format);
  const OrderEstimate est = convergence_order(s.scheme, s.problem.system, s.y0, *o.T, hs, s.cfg);
  Sink sink(o.output, out);
  std::ostream& os = sink.os();
  if (format == "csv") {
    os << "h,error\n";
    for (const auto& [h, e] : est.errors) os << num(h) << ',' << num(e) << '\n';
    os << "# slope," << num(est.slope) << ",fit_residual," << num(est.fit_residual) << '\n';
  } else {
    json errors = json::array();
    for (const auto& [h, e] : est.errors) errors.push_back({h, e});
    const json doc{{"problem", s.problem.system.name},
                   {"scheme", to_string(s.scheme.rule)},
                   {"locally_exact", s.scheme.locally_exact},
                   {"policy", to_string(s.scheme.policy.tag)},
                   {"slope", est.slope},
                   {"errors", errors},
                   {"fit_residual", est.fit_residual},
                   {"points_used", est.points_used},
                   {"reliable", est.reliable()}};
    os << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_drift(const Options& o, std::ostream& out) {
  const Setup s = make_setup(o);
  const std::vector<double> sched = make_schedule(o);
  const std::string format = o.format.empty() ? "json" : o.format;
  check_format(format);
  const Trajectory tr = integrate(s.scheme, s.problem.system, s.y0, sched, s.cfg);
  const DriftReport d = energy_drift_detail(tr, s.problem.system);
  Sink sink(o.output, out);
  std::ostream& os = sink.os();
  if (format == "csv") {
    os << "drift,argmax_step\n" << num(d.drift) << ',' << d.argmax_step << '\n';
  } else {
    const json doc{{"problem", s.problem.system.name},
                   {"scheme", to_string(s.scheme.rule)},
                   {"locally_exact", s.scheme.locally_exact},
                   {"policy", to_string(s.scheme.policy.tag)},
                   {"steps", sched.size()},
                   {"drift", d.drift},
                   {"argmax_step", d.argmax_step}};
    os << doc.dump(2) << '\n';
  }
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites = verify::suite_names();
  } else {
    suites.push_back(o.suite);
  }
  Sink sink(o.output, out);
  std::ostream& os = sink.os();
  bool all = true;
  for (const std::string& name : suites) {
    const verify::SuiteReport rep = verify::run_suite(name, o.seed);
    os << "suite " << rep.suite << " seed " << rep.seed << '\n';
    for (const verify::Check& c : rep.checks) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " (limit %.1e)", c.limit);
      os << (c.passed ? "  pass  " : "  FAIL  ") << c.name << ": " << c.detail << buf << '\n';
    }
    os << (rep.passed() ? "suite passed\n" : "suite FAILED\n");
    all = all && rep.passed();
  }
  return all ? 0 : 1;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::DomainViolation:
    case ErrorKind::NotSymmetric: return 1;
    default: return 2;
  }
}

}  // namespace

Vector parse_vector(std::string_view text) {
  const std::vector<double> v = parse_list(text);
  return Vector(std::span<const double>(v));
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Scheme resolve_scheme(std::string_view name, const HamiltonianSystem& sys, const std::optional<std::string>& policy,
                      bool locally_exact, const std::optional<Vector>& ref_point) {
  Scheme s;
  const Rule gr_rule = sys.m == 1 ? Rule::GR1D_Symmetric : Rule::GRmulti_Symmetric;
  if (name == "gr") {
    s = Scheme{gr_rule, RefPolicy::current(), false};
  } else if (name == "mod-gr") {
    s = Scheme{gr_rule, RefPolicy::fixed(fixed_point_for(sys, ref_point)), true};
  } else if (name == "gr-lex") {
    s = Scheme{gr_rule, RefPolicy::current(), true};
  } else if (name == "gr-slex") {
    s = Scheme{gr_rule, RefPolicy::midpoint(), true};
  } else if (const auto rule = rule_from_string(name)) {
    s = Scheme{*rule, default_policy(*rule), locally_exact || *rule == Rule::ExponentialEuler};
  } else {
    throw Error(ErrorKind::Config, "unknown scheme: " + std::string(name));
  }
  if (policy) {
    const RefPolicy::Tag tag = parse_policy(*policy);
    s.policy = tag == RefPolicy::Tag::Fixed ? RefPolicy::fixed(fixed_point_for(sys, ref_point)) : RefPolicy{tag, {}};
    s.locally_exact = true;
  }
  return s;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Locally exact and energy-preserving integrators for ODEs"};
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  Options o;

  auto add_run_options = [&](CLI::App* sub, bool stepping) {
    sub->add_option("--problem", o.problem, "registry problem")->required();
    sub->add_option("--scheme", o.scheme, "rule name or alias gr, mod-gr, gr-lex, gr-slex")->required();
    sub->add_option("--policy", o.policy, "reference point: current, next, midpoint, fixed");
    sub->add_flag("--locally-exact", o.locally_exact, "use the locally exact coefficient");
    sub->add_option("--ref-point", o.ref_point, "fixed reference point, comma separated");
    sub->add_option("--y0", o.y0, "initial state, comma separated");
    sub->add_option("--tol", o.tol, "solver tolerance");
    sub->add_option("--output", o.output, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json");
    sub->add_option("--seed", o.seed, "seed (unused by deterministic runs)");
    sub->add_option("--T", o.T, "final time");
    if (stepping) {
      sub->add_option("--h", o.h, "constant step size");
      sub->add_option("--schedule", o.schedule_file, "file of step sizes");
      sub->add_option("--steps", o.steps, "number of steps");
    }
  };

  CLI::App* integ = app.add_subcommand("integrate", "integrate one trajectory and write every step");
  add_run_options(integ, true);
  CLI::App* order = app.add_subcommand("order", "fit the convergence order against a reference solution");
  add_run_options(order, false);
  order->add_option("--h-list", o.h_list, "step sizes, comma separated");
  CLI::App* drift = app.add_subcommand("drift", "maximum relative energy drift of one trajectory");
  add_run_options(drift, true);
  CLI::App* ver = app.add_subcommand("verify", "run a seeded property suite");
  ver->add_option("suite", o.suite, "linear, local-exactness, theta-form, gradient-identity, reversibility, "
                                    "fixed-points or all")
      ->required();
  ver->add_option("--seed", o.seed, "random seed");
  ver->add_option("--output", o.output, "output file (default stdout)");
  CLI::App* lp = app.add_subcommand("list-problems", "registry problems");
  CLI::App* ls = app.add_subcommand("list-schemes", "rule names and aliases");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream os_out, os_err;
    const int code = app.exit(e, os_out, os_err);
    err << os_err.str() << os_out.str();
    return code == 0 ? 0 : 1;
  }

  try {
    if (integ->parsed()) return cmd_integrate(o, out, err);
    if (order->parsed()) return cmd_order(o, out);
    if (drift->parsed()) return cmd_drift(o, out);
    if (ver->parsed()) return cmd_verify(o, out);
    if (lp->parsed()) {
      for (const std::string& n : problem_names()) out << n << "  " << make_problem(n).description << '\n';
      return 0;
    }
    if (ls->parsed()) {
      for (Rule r : all_rules()) out << to_string(r) << '\n';
      out << "gr\nmod-gr\ngr-lex\ngr-slex\n";
      return 0;
    }
  } catch (const StepError& e) {
    err << "geodint: step " << e.index() << " failed: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "geodint: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return 1;
}

}  // namespace geodint::cli
