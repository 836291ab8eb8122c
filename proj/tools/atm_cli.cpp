// Command-line front end for the approximate Taylor library.
//
// Exit status: 0 success, 1 numerical failure, 2 usage error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atm.hpp"
#include "atm/format.hpp"
#include "atm/io.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNumericalFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes to the named file, or to stdout when the path is empty.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw UsageError("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

atm::ProblemSpec problem_spec(const std::string& name, const std::vector<double>& u0,
                              const std::vector<std::string>& params) {
  atm::ProblemSpec spec{name, std::nullopt, {}};
  if (!u0.empty()) spec.u0 = u0;
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + kv + "'");
    try {
      spec.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--param value is not a number: '" + kv + "'");
    }
  }
  return spec;
}

atm::NamedProblem load_problem(const atm::ProblemSpec& spec) {
  try {
    return atm::make_problem(spec);
  } catch (const std::logic_error& e) {
    throw UsageError(e.what());
  }
}

void write_trajectory(std::ostream& os, const atm::Trajectory<double>& traj, std::size_t dim, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& p : traj) {
      nlohmann::ordered_json u = nlohmann::ordered_json::array();
      for (double x : p.u) u.push_back(atm::format_real(x));
      j.push_back({{"t", atm::format_real(p.t)}, {"u", std::move(u)}});
    }
    os << j.dump(1) << '\n';
    return;
  }
  os << 't';
  for (std::size_t c = 1; c <= dim; ++c) os << ",u_" << c;
  os << '\n';
  for (const auto& p : traj) {
    os << atm::format_real(p.t);
    for (double x : p.u) os << ',' << atm::format_real(x);
    os << '\n';
  }
}

struct CommonFlags {
  std::string problem;
  int order = 4;
  double h = 0.1;
  double t_end = 1.0;
  std::vector<double> u0;
  std::vector<std::string> params;
  std::string out;
  std::string format = "csv";
};

void add_problem_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->set_help_flag("--help", "Print this help message and exit");  // -h would clash with --h
  cmd->add_option("--problem", f.problem, "Built-in problem")
      ->required()
      ->check(CLI::IsMember(atm::problem_names()));
  cmd->add_option("-R,--order", f.order, "Method order R")->check(CLI::Range(1, 32));
  cmd->add_option("--h", f.h, "Step size (initial step size for convergence)")->check(CLI::PositiveNumber);
  cmd->add_option("--t-end", f.t_end, "Final time")->check(CLI::NonNegativeNumber);
  cmd->add_option("--u0", f.u0, "Initial state override, comma separated")->delimiter(',');
  cmd->add_option("--param", f.params, "Problem parameter override key=value (repeatable)");
  cmd->add_option("--out", f.out, "Output path (stdout when omitted)");
}

int run_integrate(const CommonFlags& f) {
  const auto named = load_problem(problem_spec(f.problem, f.u0, f.params));
  std::size_t n_steps = 0;
  try {
    n_steps = atm::steps_to(f.t_end, f.h);
  } catch (const atm::DomainError& e) {
    throw UsageError(e.what());
  }
  Sink sink(f.out);
  try {
    const auto traj = atm::integrate(named.problem, f.h, n_steps, f.order);
    write_trajectory(sink.stream(), traj, named.problem.dim, f.format);
    return kOk;
  } catch (const atm::IntegrationFailure<double>& e) {
    write_trajectory(sink.stream(), e.partial(), named.problem.dim, f.format);
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
}

int run_convergence(const CommonFlags& f, int levels) {
  const auto named = load_problem(problem_spec(f.problem, f.u0, f.params));
  atm::ConvergenceReport rep;
  try {
    rep = atm::run_convergence(named.name, named.problem, f.order, f.h, levels, f.t_end);
  } catch (const atm::DomainError& e) {
    throw UsageError(e.what());
  }
  if (f.out.empty()) {
    if (f.format == "json") {
      std::cout << atm::convergence_json(rep).dump(2) << '\n';
    } else {
      atm::write_convergence_csv(std::cout, rep);
    }
  } else {
    Sink csv(f.out + ".csv");
    atm::write_convergence_csv(csv.stream(), rep);
    Sink json(f.out + ".json");
    json.stream() << atm::convergence_json(rep).dump(2) << '\n';
  }
  return kOk;
}

int run_tableau(int order, const std::string& format, const std::string& out) {
  const auto tab = atm::build_tableau(order);
  const auto rep = atm::structural_report(tab);
  auto j = atm::tableau_json(tab);
  j["report"] = atm::report_json(rep);
  const std::string text = atm::render_tableau_text(tab) + '\n' + atm::render_report_text(rep);
  if (out.empty()) {
    std::cout << (format == "text" ? text : j.dump(2) + '\n');
  } else {
    Sink json(out);
    json.stream() << j.dump(2) << '\n';
    Sink txt(out + ".txt");
    txt.stream() << text;
  }
  return kOk;
}

int run_stability(int order, const std::vector<double>& window, std::size_t nx, std::size_t ny,
                  const std::string& out) {
  if (window.size() != 4) throw UsageError("--window expects re_min,re_max,im_min,im_max");
  atm::StabilityGrid grid;
  try {
    grid = atm::region_scan(order, {window[0], window[1], window[2], window[3]}, nx, ny);
  } catch (const atm::DomainError& e) {
    throw UsageError(e.what());
  }
  Sink raster(out + "_raster.csv");
  atm::write_raster_csv(raster.stream(), grid);
  Sink boundary(out + "_boundary.csv");
  atm::write_boundary_csv(boundary.stream(), grid);
  std::cout << "real_stability_interval: " << atm::format_fixed(atm::real_stability_interval(order), 8) << '\n'
            << "inside: " << grid.inside_count() << " of " << nx * ny << '\n'
            << "boundary points: " << grid.boundary.size() << '\n';
  return kOk;
}

int run_stencil(int p, int q) {
  const auto st = atm::derive_stencil(p, q);
  if (!st.satisfies_moments(2 * st.s())) {
    std::cerr << "error: moment conditions failed for p=" << p << ", q=" << q << '\n';
    return kNumericalFailure;
  }
  for (int i = -st.s(); i <= st.s(); ++i) std::cout << (i > -st.s() ? ", " : "") << i << ": " << atm::to_string(st[i]);
  std::cout << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate Taylor ODE integrators: integration, convergence, tableaux, stability, stencils"};
  app.require_subcommand(1);

  CommonFlags integrate_flags;
  auto* integrate = app.add_subcommand("integrate", "Integrate a built-in problem and write the trajectory");
  add_problem_flags(integrate, integrate_flags);
  integrate->get_option("--h")->required();
  integrate->get_option("--t-end")->required();
  integrate->add_option("--format", integrate_flags.format)->check(CLI::IsMember({"csv", "json"}));

  CommonFlags conv_flags;
  int levels = 5;
  auto* convergence = app.add_subcommand("convergence", "Observed order of accuracy under step halving");
  add_problem_flags(convergence, conv_flags);
  convergence->add_option("--levels", levels, "Number of step sizes h, h/2, ...")->check(CLI::Range(2, 30));
  convergence->add_option("--format", conv_flags.format, "stdout format when --out is omitted")
      ->check(CLI::IsMember({"csv", "json"}));

  int tab_order = 4;
  std::string tab_format = "json";
  std::string tab_out;
  auto* tableau = app.add_subcommand("tableau", "Butcher array of the order-R method with structural checks");
  tableau->add_option("-R,--order", tab_order)->check(CLI::Range(1, 12));
  tableau->add_option("--format", tab_format)->check(CLI::IsMember({"json", "text"}));
  tableau->add_option("--out", tab_out, "JSON path; the text rendering goes to <out>.txt");

  int stab_order = 4;
  std::vector<double> window{-4.0, 2.0, -4.0, 4.0};
  std::size_t resolution = 201;
  std::size_t nx = 0, ny = 0;
  std::string stab_out = "stability";
  auto* stability = app.add_subcommand("stability", "Absolute stability raster and boundary");
  stability->add_option("-R,--order", stab_order)->check(CLI::Range(1, 32));
  stability->add_option("--window", window, "re_min,re_max,im_min,im_max")->delimiter(',')->expected(4);
  stability->add_option("--resolution", resolution, "Samples per axis")->check(CLI::Range(2, 4096));
  stability->add_option("--nx", nx, "Samples along Re (overrides --resolution)")->check(CLI::Range(2, 4096));
  stability->add_option("--ny", ny, "Samples along Im (overrides --resolution)")->check(CLI::Range(2, 4096));
  stability->add_option("--out", stab_out, "Prefix for <out>_raster.csv and <out>_boundary.csv");

  int p = 1, q = 1;
  auto* stencil = app.add_subcommand("stencil", "Print an exact centered finite-difference stencil");
  stencil->add_option("-p,--derivative", p, "Derivative order p")->required()->check(CLI::Range(1, 32));
  stencil->add_option("-q,--accuracy", q, "Half accuracy order q")->required()->check(CLI::Range(1, 32));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*integrate) return run_integrate(integrate_flags);
    if (*convergence) return run_convergence(conv_flags, levels);
    if (*tableau) return run_tableau(tab_order, tab_format, tab_out);
    if (*stability) return run_stability(stab_order, window, nx ? nx : resolution, ny ? ny : resolution, stab_out);
    if (*stencil) return run_stencil(p, q);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const atm::StepFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsage;
}
