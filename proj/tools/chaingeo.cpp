// chaingeo: command-line front end for finite chain geometries.

#include <chrono>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chaingeo/chaingeo.hpp"
#include "report.hpp"

namespace {

using namespace chaingeo;
using chaingeo::cli::report;

constexpr int exit_violation = 2;
constexpr int exit_usage = 64;

report num(const bigint& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
    return v.convert_to<long long>();
  return v.str();
}

report lambda_array(const lambda_values& l) { return report::array({l.l0, l.l1, l.l2, l.l3}); }

std::vector<point_id> parse_set(const std::string& text) {
  std::vector<point_id> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      const long long v = std::stoll(tok, &used);
      if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
      out.push_back(static_cast<point_id>(v));
    } catch (const std::exception&) {
      throw error(error_code::bad_spec, "bad point id '" + tok + "' in --set");
    }
  }
  return out;
}

report point_pair(const algebra& r, const point& p) {
  return format_element(r, p.a) + " " + format_element(r, p.b);
}

/// The proven statement a violation contradicts, for diagnostics.
std::string statement_for(error_code c) {
  switch (c) {
    case error_code::orbit_count_mismatch:
      return "point count of P(R): v = q^d + q^delta (local), v >= 2q^d - r*, each point distant from q^d points";
    case error_code::solve_failed:
      return "GL_2(R) is transitive on triples of mutually distant points";
    case error_code::chain_count_mismatch:
      return "lambda_0 = v q^(d-1) r* lambda_3 / (q^2 - 1)";
    case error_code::lambda_mismatch:
      return "lambda_1 = q^(d-1) r* lambda_3/(q-1), lambda_2 = r* lambda_3/(q-1), lambda_3 = r*/#N";
    case error_code::design_violation:
      return "local chain geometries are 3-(q^delta, q+1, lambda_3) divisible designs on q^d + q^delta points";
    case error_code::polynomial_mismatch:
      return "expansion of the Glynn bound at x = 2q^2 - q + t";
    case error_code::counterexample_found:
      return "minimum blocking sets for delta = d-1 are exactly the parallel classes";
    case error_code::not_coplanar:
    case error_code::tangent_plane:
    case error_code::model_violation:
      return "model correspondences (quadric model, residue map, lifting)";
    default:
      return "";
  }
}

struct common_opts {
  std::string ring;
  std::string format = "text";
  unsigned jobs = 1;
  bool timing = false;
  bool json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, common_opts& o, bool ring_required = true) {
  auto* opt = cmd->add_option("--ring", o.ring, "ring spec, e.g. \"gf(2)[t]/(t^2)\"");
  if (ring_required) opt->required();
  cmd->add_option("--format", o.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1u, 256u));
}

geometry load(const common_opts& o, bool verify = true) {
  return geometry(algebra_from_spec(o.ring), o.jobs, verify);
}

report ring_summary(const std::string& spec, const algebra& r) {
  report out;
  out["ring"] = spec;
  out["q"] = r.q();
  out["d"] = r.dim();
  out["r_star"] = r.unit_count();
  out["local"] = r.is_local();
  out["delta"] = r.is_local() ? report(*r.delta()) : report(nullptr);
  out["commutative"] = r.is_commutative();
  return out;
}

std::string canonical_spec(const std::string& text) { return ring_spec::parse(text).to_string(); }

int cmd_info(const common_opts& o) {
  const geometry g = load(o, false);
  report out = ring_summary(canonical_spec(o.ring), g.ring());
  const auto& l = g.lambdas();
  out["v"] = g.v();
  out["chains"] = g.chains().size();
  out["normalizer"] = g.ring().normalizer_order();
  out["lambda_formula"] = lambda_array(l.formula);
  out["lambda_counted"] = lambda_array(l.empirical);
  out["pair_count_M"] = l.pair_count;
  const bool ok = l.agrees() && g.chains().size() == l.formula.l0;
  out["agree"] = ok;
  cli::emit(std::cout, out, o.json());
  if (!ok) {
    std::cerr << "violation: " << statement_for(error_code::lambda_mismatch) << '\n';
    return exit_violation;
  }
  return 0;
}

int cmd_points(const common_opts& o) {
  const algebra r = algebra_from_spec(o.ring);
  const projective_line line(std::make_shared<const algebra>(r));
  if (o.json()) {
    report out;
    out["v"] = line.size();
    out["points"] = report::array();
    for (const auto& p : line.points()) out["points"].push_back(point_pair(r, p));
    cli::emit(std::cout, out, true);
  } else {
    std::cout << "v=" << line.size() << '\n';
    for (const auto& p : line.points())
      std::cout << format_element(r, p.a) << ' ' << format_element(r, p.b) << '\n';
  }
  return 0;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw error(error_code::bad_file, "cannot write " + path);
  f << content;
}

int cmd_chains(const common_opts& o, const std::string& out_path) {
  const geometry g = load(o);
  const std::string text = format_incidence(incidence::from_geometry(g));
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  write_file(out_path, text);
  report out;
  out["v"] = g.v();
  out["b"] = g.chains().size();
  out["k"] = g.q() + 1;
  out["out"] = out_path;
  cli::emit(std::cout, out, o.json());
  return 0;
}

report published_moebius(const algebra& r) {
  // Sigma(K, F) with F a field of degree 2 or 3 over K.
  if (!r.is_local() || *r.delta() != 0 || (r.dim() != 2 && r.dim() != 3)) return nullptr;
  const auto t = moebius_bound_table(r.q());
  return num(r.dim() == 2 ? t.plane : t.solid);
}

int cmd_bounds(const common_opts& o) {
  const geometry g = load(o);
  report out = ring_summary(canonical_spec(o.ring), g.ring());
  out["v"] = g.v();
  out["lambda"] = lambda_array(g.lambdas().formula);
  out["trivial"] = num(bound_trivial(g));
  out["elf"] = num(geometry_bound_elf(g));
  const auto gl = geometry_bound_glynn(g);
  out["glynn"] = gl ? num(*gl) : report(nullptr);
  out["moebius_published"] = published_moebius(g.ring());
  cli::emit(std::cout, out, o.json());
  return 0;
}

int cmd_glynn(unsigned q, unsigned d, unsigned delta, const common_opts& o) {
  const glynn_polynomial poly(q, d, delta);
  const bigint b = glynn_bound(q, d, delta);
  report out;
  out["q"] = q;
  out["d"] = d;
  out["delta"] = delta;
  const bigint v = ipow(bigint(q), d) + ipow(bigint(q), delta);
  out["scan_start"] = num(ceil_div(v, bigint(q) + 1));
  out["bound"] = num(b);
  out["P_at_bound"] = num(poly(b));
  out["P_below_bound"] = num(poly(b - 1));
  if (delta == 0 && d == 2) out["published"] = num(moebius_bound_table(q).plane);
  if (delta == 0 && d == 3) {
    out["published"] = num(moebius_bound_table(q).solid);
    out["identity_check"] = num(glynn_polynomial_check_3d(q, (b - (2 * bigint(q) * q - q)).convert_to<long long>()));
    report cross = report::object();
    for (const auto& c : glynn_crossovers(25)) {
      const std::string key = "plus" + std::to_string(c.offset + 2);
      cross[key] = {{"published_from", c.published_threshold}, {"computed_from", c.computed}};
    }
    out["crossovers_q_le_25"] = cross;
  }
  cli::emit(std::cout, out, o.json());
  return 0;
}

struct search_flags {
  std::string incidence_path;
  std::optional<std::size_t> max_size;
  bool all_minima = false;
  bool no_theory = false;
};

int cmd_search(const common_opts& o, const search_flags& f) {
  report out;
  search_result res;
  std::optional<geometry> g;
  if (!f.incidence_path.empty()) {
    const incidence inc = read_incidence(f.incidence_path);
    search_options so;
    so.max_size = f.max_size;
    so.all_minima = f.all_minima;
    so.jobs = o.jobs;
    res = min_hitting_set(inc, so);
    out["incidence"] = f.incidence_path;
    out["v"] = inc.v;
    out["b"] = inc.blocks.size();
  } else {
    g.emplace(load(o));
    min_blocking_options mo;
    mo.max_size = f.max_size;
    mo.all_minima = f.all_minima;
    mo.jobs = o.jobs;
    mo.use_theory_bounds = !f.no_theory;
    res = min_blocking(*g, mo);
    out["ring"] = canonical_spec(o.ring);
    out["v"] = g->v();
    out["b"] = g->chains().size();
  }
  if (!res.found) {
    out["min"] = nullptr;
    out["searched_up_to"] = f.max_size ? report(*f.max_size) : report(nullptr);
    cli::emit(std::cout, out, o.json());
    return 0;
  }
  out["min"] = res.size;
  out["witness"] = res.witness;
  if (f.all_minima) {
    out["minima_count"] = res.minima.size();
    out["minimum"] = res.minima;
    if (g && g->ring().is_local() && *g->ring().delta() + 1 == g->ring().dim()) {
      auto classes = g->line().parallel_classes();
      std::sort(classes.begin(), classes.end());
      const bool holds = classes == res.minima;
      out["parallel_classes_are_minima"] = holds;
      if (!holds) {
        cli::emit(std::cout, out, o.json());
        std::cerr << "violation: " << statement_for(error_code::counterexample_found) << '\n';
        return exit_violation;
      }
    }
  }
  cli::emit(std::cout, out, o.json());
  return 0;
}

report checks_report(const blocking_report& rep) {
  report arr = report::array();
  for (const auto& c : rep.checks)
    arr.push_back({{"name", c.name}, {"lhs", num(c.lhs)}, {"relation", c.relation}, {"rhs", num(c.rhs)},
                   {"holds", c.holds}});
  return arr;
}

int cmd_verify(const common_opts& o, const std::string& incidence_path, const std::string& set_text) {
  const auto set = parse_set(set_text);
  report out;
  blocking_report rep;
  if (!incidence_path.empty()) {
    rep = check_blocking(read_incidence(incidence_path), set);
    out["incidence"] = incidence_path;
  } else {
    const geometry g = load(o);
    rep = is_blocking(g, set);
    out["ring"] = canonical_spec(o.ring);
  }
  out["set"] = rep.set;
  out["x"] = rep.distribution.x;
  out["blocking"] = rep.is_blocking;
  out["first_missed_chain"] = rep.first_missed_chain ? report(*rep.first_missed_chain) : report(nullptr);
  out["n"] = rep.distribution.n;
  if (incidence_path.empty()) {
    out["check"] = checks_report(rep);
    out["bound_trivial"] = num(rep.bound_trivial);
    out["bound_elf"] = num(rep.bound_elf);
    out["bound_glynn"] = rep.bound_glynn ? num(*rep.bound_glynn) : report(nullptr);
  }
  cli::emit(std::cout, out, o.json());
  if (!rep.checks_hold()) {
    std::cerr << "violation: double counting over (point set, chain) incidences\n";
    return exit_violation;
  }
  return 0;
}

int cmd_lift(const common_opts& o, const std::string& set_text, bool use_minimum) {
  const geometry g = load(o);
  const auto res = residue_field(g.ring());
  std::vector<point_id> down;
  const geometry residue(res.residue, o.jobs);
  if (use_minimum) down = min_blocking(residue).witness;
  else down = parse_set(set_text);
  const auto rep = lift_blocking(g, down, o.jobs);
  report out;
  out["ring"] = canonical_spec(o.ring);
  out["v"] = g.v();
  out["residue_q_power"] = residue.ring().dim();
  out["residue_v"] = residue.v();
  report pts = report::array();
  for (const auto& p : residue.line().points()) pts.push_back(point_pair(residue.ring(), p));
  out["residue_points"] = pts;
  out["downstairs"] = rep.downstairs;
  out["x"] = rep.downstairs.size();
  out["fiber"] = rep.fiber_size;
  out["size"] = rep.lifted.size();
  out["set"] = rep.lifted;
  out["blocking"] = rep.report.is_blocking;
  out["chains_map_to_chains"] = rep.chains_map_to_chains;
  out["fibers_are_parallel_classes"] = rep.fibers_are_parallel_classes;
  cli::emit(std::cout, out, o.json());
  return 0;
}

int cmd_quadric(unsigned q, const std::string& check, const std::string& emit_what, const common_opts& o) {
  const std::string spec = "gf(" + std::to_string(q) + ") x gf(" + std::to_string(q) + ")";
  const geometry g(algebra_from_spec(spec), o.jobs);
  const quadric_model m(g);
  const field& k = m.base();
  auto digits = [&](const coords4& x) {
    std::string s;
    for (int i = 0; i < 4; ++i) s += (i ? " " : "") + element_token(x[i], k.order());
    return s;
  };
  if (emit_what == "points") {
    for (point_id p = 0; p < g.v(); ++p) std::cout << digits(m.psi(p)) << '\n';
    return 0;
  }
  if (emit_what == "rulings") {
    const auto fam = m.ruling_lines();
    for (int f = 0; f < 2; ++f)
      for (const auto& l : fam[f]) {
        std::cout << "family=" << f << " ids=";
        for (std::size_t i = 0; i < l.size(); ++i) std::cout << (i ? "," : "") << l[i];
        std::cout << " points=";
        for (std::size_t i = 0; i < l.size(); ++i) std::cout << (i ? ";" : "") << digits(m.psi(l[i]));
        std::cout << '\n';
      }
    return 0;
  }
  if (check != "all") throw error(error_code::bad_spec, "--check accepts only 'all'");
  const auto rows = check_quadric_model(g);
  bool all = true;
  report out;
  out["q"] = q;
  out["v"] = g.v();
  out["chains"] = g.chains().size();
  report table = report::array();
  for (const auto& r : rows) {
    table.push_back({{"name", r.name}, {"result", r.pass ? "pass" : "fail"}, {"detail", r.detail}});
    all = all && r.pass;
  }
  if (o.json()) {
    out["checks"] = table;
    out["all_pass"] = all;
    cli::emit(std::cout, out, true);
  } else {
    std::cout << "q=" << q << "\nv=" << g.v() << "\nchains=" << g.chains().size() << '\n';
    for (const auto& r : rows)
      std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << (r.detail.empty() ? "" : "  (" + r.detail + ")")
                << '\n';
    std::cout << "all_pass=" << (all ? "true" : "false") << '\n';
  }
  if (!all) {
    std::cerr << "violation: " << statement_for(error_code::model_violation) << '\n';
    return exit_violation;
  }
  return 0;
}

int cmd_export(const common_opts& o, const std::string& what, const std::string& out_path) {
  std::string text;
  if (what == "algebra") {
    text = format_structure_constants(algebra_from_spec(o.ring));
  } else if (what == "points") {
    const algebra r = algebra_from_spec(o.ring);
    const projective_line line(std::make_shared<const algebra>(r));
    std::ostringstream s;
    for (const auto& p : line.points()) s << format_element(r, p.a) << ' ' << format_element(r, p.b) << '\n';
    text = s.str();
  } else if (what == "incidence") {
    text = format_incidence(incidence::from_geometry(load(o)));
  } else {  // json
    const geometry g = load(o);
    report out = ring_summary(canonical_spec(o.ring), g.ring());
    out["v"] = g.v();
    out["lambda"] = lambda_array(g.lambdas().formula);
    report pts = report::array();
    for (const auto& p : g.line().points()) pts.push_back(point_pair(g.ring(), p));
    out["points"] = pts;
    out["chains"] = g.chains();
    text = out.dump(2) + "\n";
  }
  if (out_path.empty() || out_path == "-") std::cout << text;
  else write_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chaingeo: finite chain geometries, their chains and blocking sets"};
  app.require_subcommand(1);
  common_opts o;
  app.add_flag("--timing", o.timing, "print wall time to stderr");

  auto* info = app.add_subcommand("info", "point count, units, locality and lambda table");
  add_common(info, o);
  auto* points = app.add_subcommand("points", "canonical point representatives");
  add_common(points, o);

  std::string out_path;
  auto* chains = app.add_subcommand("chains", "write the chain incidence file");
  add_common(chains, o);
  chains->add_option("--out", out_path, "output path (stdout if omitted)");

  auto* bounds = app.add_subcommand("bounds", "lower bounds for blocking sets");
  add_common(bounds, o);

  unsigned gq = 0, gd = 0, gdelta = 0;
  auto* glynn = app.add_subcommand("glynn", "exact Glynn-polynomial bound for local parameters");
  glynn->add_option("--q", gq)->required();
  glynn->add_option("--d", gd)->required();
  glynn->add_option("--delta", gdelta)->required();
  glynn->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));

  search_flags sf;
  std::size_t max_size = 0;
  auto* search = app.add_subcommand("search", "exact minimum blocking set");
  add_common(search, o, false);
  search->add_option("--incidence", sf.incidence_path, "generic mode: incidence file instead of a ring");
  auto* max_opt = search->add_option("--max-size", max_size, "give up above this size");
  search->add_flag("--all-minima", sf.all_minima, "list every minimum blocking set");
  search->add_flag("--no-theory-bounds", sf.no_theory, "search without the counting lower bounds");

  std::string set_text, inc_path;
  auto* verify = app.add_subcommand("verify", "check a point set and its intersection numbers");
  add_common(verify, o, false);
  verify->add_option("--incidence", inc_path, "generic mode: incidence file instead of a ring");
  verify->add_option("--set", set_text, "comma-separated point ids")->required();

  bool use_minimum = false;
  auto* lift = app.add_subcommand("lift", "lift a blocking set of the residue geometry");
  add_common(lift, o);
  auto* lift_set = lift->add_option("--set", set_text, "point ids in the residue geometry");
  auto* lift_min = lift->add_flag("--minimum", use_minimum, "lift the least minimum blocking set downstairs");
  lift_set->excludes(lift_min);

  unsigned qq = 0;
  std::string check = "all", emit_what;
  auto* quadric = app.add_subcommand("quadric", "the hyperbolic quadric model of gf(q) x gf(q)");
  quadric->add_option("--q", qq)->required();
  quadric->add_option("--check", check, "correspondences to check (all)");
  quadric->add_option("--emit", emit_what, "points or rulings")->check(CLI::IsMember({"points", "rulings"}));
  quadric->add_option("--format", o.format)->check(CLI::IsMember({"text", "json"}));
  quadric->add_option("--jobs", o.jobs);

  std::string what = "json";
  auto* exp = app.add_subcommand("export", "dump points, incidence, structure constants or JSON");
  add_common(exp, o);
  exp->add_option("--what", what)->check(CLI::IsMember({"points", "incidence", "algebra", "json"}));
  exp->add_option("--out", out_path, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  const auto started = std::chrono::steady_clock::now();
  struct timer {
    const common_opts& o;
    std::chrono::steady_clock::time_point t0;
    ~timer() {
      if (o.timing)
        std::cerr << "wall_time=" << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()
                  << "s\n";
    }
  } report_time{o, started};

  try {
    if (*info) return cmd_info(o);
    if (*points) return cmd_points(o);
    if (*chains) return cmd_chains(o, out_path);
    if (*bounds) return cmd_bounds(o);
    if (*glynn) return cmd_glynn(gq, gd, gdelta, o);
    if (*search) {
      if (o.ring.empty() == sf.incidence_path.empty()) {
        std::cerr << "search: give exactly one of --ring or --incidence\n";
        return exit_usage;
      }
      if (*max_opt) sf.max_size = max_size;
      return cmd_search(o, sf);
    }
    if (*verify) {
      if (o.ring.empty() == inc_path.empty()) {
        std::cerr << "verify: give exactly one of --ring or --incidence\n";
        return exit_usage;
      }
      return cmd_verify(o, inc_path, set_text);
    }
    if (*lift) {
      if (!use_minimum && set_text.empty()) {
        std::cerr << "lift: give --set or --minimum\n";
        return exit_usage;
      }
      return cmd_lift(o, set_text, use_minimum);
    }
    if (*quadric) return cmd_quadric(qq, check, emit_what, o);
    if (*exp) return cmd_export(o, what, out_path);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (is_violation(e.code())) {
      std::cerr << "violation: " << statement_for(e.code()) << '\n';
      return exit_violation;
    }
    return e.code() == error_code::bad_file ? 1 : exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_usage;
}
