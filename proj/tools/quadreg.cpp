// quadreg command-line front end.
//
// Exit codes: 0 success, 1 acceptance failure (or other runtime error),
// 2 size limit, 3 parse error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "quadreg/birkhoff.hpp"
#include "quadreg/erdos.hpp"
#include "quadreg/errors.hpp"
#include "quadreg/parallel.hpp"
#include "quadreg/polytope.hpp"
#include "quadreg/qot.hpp"
#include "quadreg/regpath.hpp"
#include "quadreg/reproduce.hpp"
#include "quadreg/serialize.hpp"

using namespace quadreg;

namespace {

constexpr int kExitAcceptance = 1;
constexpr int kExitSizeLimit = 2;
constexpr int kExitParse = 3;

struct Options {
  std::size_t n = 0;
  std::size_t d = 0;
  bool simplex = false;
  bool birkhoff = false;
  bool exact = false;
  std::string eta;
  std::string delta;
  std::string grid;
  std::string cost;
  std::string entry = "1,1";
  std::string only;
  double tol = kWolfeDefaultTolerance;
  std::string out;
  std::string format = "json";
  int threads = 0;
  bool no_timestamp = false;
};

// Writes to --out if given, else stdout.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw std::runtime_error("cannot write " + o.out);
  f << text;
}

std::string read_text(const std::string& arg) {
  // Inline JSON when it looks like an array; otherwise a file path.
  if (!arg.empty() && arg.front() == '[') return arg;
  std::ifstream f(arg);
  if (!f) throw ParseError("cannot read cost file: " + arg);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Rational parse_eta(const std::string& text) {
  if (text.empty()) throw ParseError("--eta is required");
  const Rational eta = parse_rational(text);
  if (sgn(eta) <= 0) throw ParseError("--eta must be positive");
  return eta;
}

std::vector<Rational> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ParseError("--grid expects lo:hi:steps");
  const Rational lo = parse_rational(parts[0]);
  const Rational hi = parse_rational(parts[1]);
  long steps = 0;
  try {
    steps = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw ParseError("--grid steps must be an integer");
  }
  if (steps < 1 || hi < lo) throw ParseError("--grid needs lo <= hi and steps >= 1");
  std::vector<Rational> out;
  if (steps == 1) return {lo};
  for (long k = 0; k < steps; ++k) out.push_back(lo + (hi - lo) * make_rational(k, steps - 1));
  return out;
}

std::pair<std::size_t, std::size_t> parse_entry(const std::string& text, std::size_t n) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("--entry expects i,j (1-based)");
  try {
    const long i = std::stol(text.substr(0, comma));
    const long j = std::stol(text.substr(comma + 1));
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n)
      throw ParseError("--entry outside the cost matrix");
    return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
  } catch (const std::logic_error&) {
    throw ParseError("--entry expects integers i,j");
  }
}

DiscreteOTProblem problem_from(const Options& o) {
  if (o.cost.empty()) return counterexample_cost();
  return make_problem(parse_matrix_json(read_text(o.cost)));
}

// ---------------------------------------------------------------------------

int cmd_faces(const Options& o) {
  const auto faces = enumerate_faces(o.n);
  const auto poly = birkhoff_polytope(o.n);
  std::vector<char> centered(faces.size()), relint(faces.size());
  const auto count = static_cast<std::ptrdiff_t>(faces.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto u = static_cast<std::size_t>(k);
    const auto ref = to_face_ref(faces[u], poly);
    const auto x = affine_projection_origin(ref);
    centered[u] = contains(ref, x);
    relint[u] = centered[u] && relint_contains(ref, x);
  }
  Json arr = Json::array();
  std::size_t n_centered = 0, n_boundary = 0;
  for (std::size_t k = 0; k < faces.size(); ++k) {
    Json j = face_to_json(faces[k], centered[k]);
    j["projection_in_relint"] = static_cast<bool>(relint[k]);
    j["canonical_form"] = support_rows(canonical_form(faces[k]));
    arr.push_back(std::move(j));
    n_centered += centered[k] ? 1 : 0;
    n_boundary += centered[k] && !relint[k] ? 1 : 0;
  }
  if (!o.out.empty()) emit(o, arr.dump(2) + "\n");
  std::cout << "faces=" << faces.size() << " centered=" << n_centered << " boundary=" << n_boundary << "\n";
  return 0;
}

void print_certificate(const MonotonicityCertificate& cert) {
  std::cout << (cert.verdict == Verdict::Monotone ? "Monotone" : "NotMonotone") << "\n";
  if (cert.verdict == Verdict::Monotone) return;
  if (!cert.condition_i_holds) {
    std::cout << "reason: min-norm point not in the relative interior\n";
    return;
  }
  std::cout << "reason: face with affine-hull origin projection outside the face\n";
}

int cmd_check_monotone(const Options& o) {
  if (o.simplex) {
    const auto simplex = unit_simplex(o.d);
    print_certificate(check_monotone(simplex, simplex_faces(simplex)));
    return 0;
  }
  if (o.n <= 4) {
    const auto poly = birkhoff_polytope(o.n);
    std::vector<FaceRef> faces;
    const auto bfaces = enumerate_faces(o.n);
    for (const auto& f : bfaces) faces.push_back(to_face_ref(f, poly));
    const auto cert = check_monotone(poly, faces);
    print_certificate(cert);
    if (cert.witness_index) {
      std::cout << "witness:\n";
      for (const auto& r : bfaces[*cert.witness_index].support.rows()) std::cout << "  " << r << "\n";
    }
    return 0;
  }
  // N >= 5: the special face alone refutes monotonicity.
  const auto poly = birkhoff_polytope(o.n);
  const auto special = special_face(o.n);
  const auto cert = check_monotone(poly, {FaceRef::whole(poly), to_face_ref(special, poly)});
  print_certificate(cert);
  if (cert.witness_index) {
    std::cout << "witness:\n";
    const auto& s = *cert.witness_index == 0 ? SupportMatrix::all_ones(o.n) : special.support;
    for (const auto& r : s.rows()) std::cout << "  " << r << "\n";
  }
  return 0;
}

int cmd_trace(const Options& o) {
  const PathPolytope pp = o.simplex ? PathPolytope::simplex(o.d)
                          : o.birkhoff ? PathPolytope::birkhoff(o.n)
                                       : PathPolytope::transport(o.n);
  RatVec c;
  if (o.cost.empty()) {
    if (o.simplex || o.n != 5) throw ParseError("--cost is required");
    c = counterexample_cost().cost.flat();
  } else {
    c = parse_vector_json(read_text(o.cost));
  }
  if (c.size() != pp.polytope.dim()) throw ParseError("cost length does not match the polytope dimension");
  const auto path = trace_path_exact(pp, c);
  const auto cm = check_c_monotone(path);
  if (o.format == "csv") {
    if (o.grid.empty()) throw ParseError("--format csv needs --grid");
    emit(o, path_grid_csv(path, parse_grid(o.grid)));
  } else {
    Json j = path_to_json(path);
    j["c_monotone"] = cm.monotone;
    if (cm.witness) {
      j["witness"] = {{"eta_lost", to_string(cm.witness->eta_lost)},
                      {"eta_regained", to_string(cm.witness->eta_regained)},
                      {"coordinate", cm.witness->index}};
    }
    emit(o, j.dump(2) + "\n");
  }
  std::cerr << "segments=" << path.segments.size() << " c_monotone=" << (cm.monotone ? "true" : "false")
            << " fallback=" << (path.fallback_used ? "true" : "false") << "\n";
  return 0;
}

int cmd_softmin(const Options& o) {
  if (o.cost.empty()) throw ParseError("--cost is required");
  const RatVec c = parse_vector_json(read_text(o.cost));
  const auto range = softmin_delta_range(c);
  Json j;
  if (!o.delta.empty()) {
    const double delta = std::stod(o.delta);
    const auto x = solve_eulerian(unit_simplex(c.size()), c, delta, o.tol);
    Json w = Json::array();
    for (double v : x) w.push_back(v);
    j["delta"] = delta;
    j["weights"] = w;
  } else {
    const Rational eta = parse_eta(o.eta);
    j["eta"] = to_string(eta);
    j["weights"] = to_json(softmin(c, eta));
  }
  j["delta_min"] = range.delta_min;
  j["delta_max"] = range.delta_max;
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_qot_solve(const Options& o) {
  const auto p = problem_from(o);
  const Rational eta = parse_eta(o.eta);
  Json j;
  j["N"] = p.n;
  j["eta"] = to_string(eta);
  const auto poly = transport_polytope(p.n);
  if (o.exact) {
    const auto gamma = solve_qot_exact(p, eta);
    j["gamma"] = to_json(gamma);
    j["marginals_exact"] = has_uniform_marginals(gamma);
    j["vi_residual"] = to_string(variational_inequality_residual(poly, qot_target(p, eta), gamma.flat()).value);
  } else {
    const auto gamma = solve_qot(p, eta.get_d(), o.tol);
    if (o.format == "csv") {
      std::ostringstream os;
      for (std::size_t i = 0; i < p.n; ++i) {
        for (std::size_t jj = 0; jj < p.n; ++jj) os << (jj ? "," : "") << format_double(gamma(i, jj), 12);
        os << "\n";
      }
      emit(o, os.str());
      return 0;
    }
    Json rows = Json::array();
    for (std::size_t i = 0; i < p.n; ++i) {
      Json row = Json::array();
      for (std::size_t jj = 0; jj < p.n; ++jj) row.push_back(gamma(i, jj));
      rows.push_back(row);
    }
    j["gamma"] = rows;
    j["marginals_ok"] = has_uniform_marginals(gamma, 1e-10);
    const auto target = to_double(qot_target(p, eta));
    j["vi_residual"] = variational_inequality_residual(poly, target, gamma.weights).value;
  }
  emit(o, j.dump(2) + "\n");
  return 0;
}

int cmd_weight_curve(const Options& o) {
  const auto p = problem_from(o);
  const auto [i, j] = parse_entry(o.entry, p.n);
  std::vector<double> grid;
  if (o.grid.empty()) {
    grid = default_reg_grid();
  } else {
    for (const auto& q : parse_grid(o.grid)) grid.push_back(q.get_d());
  }
  emit(o, weight_curve_csv(weight_curve(p, i, j, grid, o.tol)));
  return 0;
}

int cmd_erdos(const Options& o) {
  const auto records = enumerate_erdos(o.n);
  if (!o.out.empty()) emit(o, erdos_to_json(records).dump(2) + "\n");
  std::set<SupportMatrix> orbits;
  if (o.n <= 5) {
    for (const auto& r : records) orbits.insert(canonical_form(r.face_support));
  }
  std::cout << "erdos=" << records.size() << " orbits=" << orbits.size() << "\n";
  return 0;
}

int cmd_reproduce(const Options& o) {
  ReproduceOptions ro;
  if (!o.only.empty()) ro.only = o.only;
  if (!o.cost.empty()) ro.cost = parse_matrix_json(read_text(o.cost));
  ro.out_dir = o.out.empty() ? "." : o.out;
  ro.timestamp = !o.no_timestamp;
  const auto report = reproduce(ro);
  for (const auto& it : report.items) {
    std::cout << (it.pass ? "PASS " : "FAIL ") << it.criterion << " " << it.id << "\n";
  }
  if (!report.all_pass) {
    for (const auto& it : report.items) {
      if (!it.pass) std::cerr << "failed item: " << it.id << "\n";
    }
    return kExitAcceptance;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratically regularised linear programs over polytopes"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "worker threads (default: QUADREG_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "floating-point tolerance")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "output file (directory for reproduce-paper)");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--no-timestamp", o.no_timestamp, "omit timestamps and timings from reports");

  auto* faces = app.add_subcommand("faces", "enumerate Birkhoff faces (N <= 4)");
  faces->add_option("--n", o.n, "matrix size")->required();

  auto* mono = app.add_subcommand("check-monotone", "monotonicity certificate");
  mono->add_option("--n", o.n, "Birkhoff polytope size");
  mono->add_flag("--simplex", o.simplex, "use the unit simplex");
  mono->add_option("--d", o.d, "simplex dimension");

  auto* trace = app.add_subcommand("trace", "exact regularisation path");
  trace->add_flag("--simplex", o.simplex, "use the unit simplex");
  trace->add_option("--d", o.d, "simplex dimension");
  trace->add_option("--n", o.n, "matrix size; N = 5 without --cost uses the 5 x 5 counterexample");
  trace->add_flag("--birkhoff", o.birkhoff, "use Pi_N instead of Gamma_N");
  trace->add_option("--cost", o.cost, "JSON cost file or inline JSON array");
  trace->add_option("--grid", o.grid, "lo:hi:steps, steps points over eta");

  auto* soft = app.add_subcommand("softmin", "sparse soft-min");
  soft->add_option("--cost", o.cost, "JSON cost vector or file")->required();
  soft->add_option("--eta", o.eta, "regularisation parameter (exact rational)");
  soft->add_option("--delta", o.delta, "norm budget (Eulerian form)");

  auto* qot = app.add_subcommand("qot-solve", "regularised optimal transport");
  qot->add_option("--cost", o.cost, "JSON cost matrix or file (default: 5 x 5 counterexample)");
  qot->add_option("--eta", o.eta, "regularisation parameter")->required();
  qot->add_flag("--exact", o.exact, "exact rational projection");

  auto* wc = app.add_subcommand("weight-curve", "entry weight against 1/(2 eta)");
  wc->add_option("--cost", o.cost, "JSON cost matrix or file (default: 5 x 5 counterexample)");
  wc->add_option("--entry", o.entry, "i,j (1-based)");
  wc->add_option("--grid", o.grid, "lo:hi:steps over 1/(2 eta)");

  auto* erdos = app.add_subcommand("erdos", "Erdos matrices (N <= 4)");
  erdos->add_option("--n", o.n, "matrix size")->required();

  auto* repro = app.add_subcommand("reproduce-paper", "run the reproduction suite");
  repro->add_option("--only", o.only)->check(CLI::IsMember(reproduce_item_ids()));
  repro->add_option("--cost", o.cost, "replacement 5x5 cost");

  for (auto* sub : {faces, mono, trace, soft, qot, wc, erdos, repro}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    configure_threads(o.threads > 0 ? std::optional<int>(o.threads) : std::nullopt);
    if (*faces) return cmd_faces(o);
    if (*mono) return cmd_check_monotone(o);
    if (*trace) return cmd_trace(o);
    if (*soft) return cmd_softmin(o);
    if (*qot) return cmd_qot_solve(o);
    if (*wc) return cmd_weight_curve(o);
    if (*erdos) return cmd_erdos(o);
    if (*repro) return cmd_reproduce(o);
  } catch (const SizeLimit& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return kExitSizeLimit;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
