// lorentz-lab: command-line front end.
//
// Exit codes: 0 pass, 1 mathematical failure or negative verdict, 2 I/O or
// parse error, 3 precondition violation.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "lorentz/io.hpp"
#include "lorentz/lorentz.hpp"

using namespace lorentz;
using io::json;
using io::real;

namespace {

enum Exit { kPass = 0, kFail = 1, kIo = 2, kPrecondition = 3 };

struct Common {
  std::string path;
  std::string out;
  std::optional<double> tol_eps, tol_busemann, tol_parallel, tol_null, tol_curvature;
};

io::SpaceFile load(const Common& c) {
  io::SpaceFile f = io::load_space(c.path);
  if (c.tol_eps) {
    f.tol.eps = *c.tol_eps;
    // rebuild the model spaces with the overridden epsilon
    if (auto* m = std::get_if<MinkowskiSpace>(&f.space)) {
      MinkowskiSpace n(f.tol.eps);
      n.set_segments(m->segments());
      if (m->has_strip()) {
        const auto xs = m->strip_xs();
        n.set_strip(xs.front(), xs.back(), xs.size() > 1 ? xs[1] - xs[0] : 1.0, *m->time_grid());
      }
      f.space = n;
    } else if (auto* p = std::get_if<ProductSpace>(&f.space)) {
      std::optional<TimeGrid> g;
      if (p->time_grid()) g = *p->time_grid();
      ProductSpace n(p->factor(), g, f.tol.eps);
      n.set_vertical_segments(p->vertical_segments());
      f.space = n;
    }
  }
  if (c.tol_busemann) f.tol.busemann = c.tol_busemann;
  if (c.tol_parallel) f.tol.parallel = c.tol_parallel;
  if (c.tol_null) f.tol.null = c.tol_null;
  if (c.tol_curvature) f.tol.curvature = c.tol_curvature;
  return f;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("space", c.path, "space file (JSON)")->required();
  sub->add_option("--out", c.out, "write the report to this file as well");
  sub->add_option("--tol-eps", c.tol_eps, "causal/timelike boundary tolerance");
  sub->add_option("--tol-busemann", c.tol_busemann, "Busemann error tolerance");
  sub->add_option("--tol-parallel", c.tol_parallel, "parallelity tolerance");
  sub->add_option("--tol-null", c.tol_null, "null-step threshold");
  sub->add_option("--tol-curvature", c.tol_curvature, "curvature comparison tolerance");
}

int emit(const Common& c, json report, int code, double seconds) {
  report["exit_code"] = code;
  report["wall_time_s"] = real(seconds);
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!c.out.empty()) io::write_atomic(c.out, text);
  return code;
}

template <class P>
json chain_json(const Chain<P>& chain) {
  json a = json::array();
  for (const auto& p : chain) a.push_back(io::point_json(p));
  return a;
}

std::string cell(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

/// A sample of points: all ids, the declared strip, or the product grid.
std::vector<PointId> sample_of(const FiniteLorentzSpace& s) {
  std::vector<PointId> v(s.size());
  for (PointId i = 0; i < s.size(); ++i) v[i] = i;
  return v;
}
std::vector<MinkowskiPoint> sample_of(const MinkowskiSpace& s) { return s.sample_points(); }
std::vector<ProductPoint> sample_of(const ProductSpace& s) { return s.sample_points(); }

template <class P>
std::vector<P> thin(const std::vector<P>& v, std::size_t max) {
  if (v.size() <= max || max == 0) return v;
  std::vector<P> out;
  const double step = double(v.size()) / double(max);
  for (std::size_t k = 0; k < max; ++k) out.push_back(v[std::size_t(double(k) * step)]);
  return out;
}

template <LorentzQuery S>
Chain<PointOf<S>> maximizer_of(const S& space, const PointOf<S>& a, const PointOf<S>& b) {
  return lorentz::detail::maximizer(space, a, b);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(io::read_real(json(item), "list"));
  return out;
}

/// "a:b:step" or a comma list.
std::vector<double> parse_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) return parse_list(s);
  std::stringstream ss(s);
  std::string a, b, h;
  std::getline(ss, a, ':');
  std::getline(ss, b, ':');
  std::getline(ss, h, ':');
  const double lo = io::read_real(json(a), "grid"), hi = io::read_real(json(b), "grid"),
               st = io::read_real(json(h), "grid");
  if (!(st > 0.0) || hi < lo) throw StructuralError("invalid grid '" + s + "'");
  std::vector<double> out;
  const auto k0 = long(std::ceil(lo / st - 1e-9)), k1 = long(std::floor(hi / st + 1e-9));
  for (long k = k0; k <= k1; ++k) out.push_back(double(k) * st);
  return out;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

json validate_report(const ValidationReport& r) {
  json axioms = json::array();
  for (const auto& a : r.axioms) axioms.push_back({{"name", a.name}, {"passed", a.passed}, {"witness", a.witness}});
  return axioms;
}

int cmd_validate(const Common& c, std::size_t max_sample) {
  const auto t0 = std::chrono::steady_clock::now();
  const io::SpaceFile f = load(c);
  json rep{{"command", "validate"}, {"space", c.path}, {"kind", f.kind}};
  ValidationReport vr;
  std::size_t points = 0;
  std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space)>;
        if constexpr (std::is_same_v<S, FiniteLorentzSpace>) {
          vr = validate_axioms(space, f.tol.eps);
          points = space.size();
        } else {
          const auto sample = thin(sample_of(space), max_sample);
          if (sample.empty()) throw PreconditionError("space declares no sample (strip or grid) to validate");
          vr = validate_axioms(materialize(space, std::span<const PointOf<S>>(sample)), f.tol.eps);
          points = sample.size();
        }
      },
      f.space);
  rep["points_checked"] = points;
  rep["axioms"] = validate_report(vr);
  rep["passed"] = vr.passed();
  return emit(c, rep, vr.passed() ? kPass : kFail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// ---------------------------------------------------------------------------
// tau
// ---------------------------------------------------------------------------

int cmd_tau(const Common& c, const std::string& from, const std::string& to, bool intrinsic) {
  const auto t0 = std::chrono::steady_clock::now();
  const io::SpaceFile f = load(c);
  json rep{{"command", "tau"}, {"space", c.path}, {"kind", f.kind}};
  std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space)>;
        using P = PointOf<S>;
        const P a = io::parse_point_arg<P>(from), b = io::parse_point_arg<P>(to);
        io::check_point(space, a);
        io::check_point(space, b);
        rep["from"] = io::point_json(a);
        rep["to"] = io::point_json(b);
        rep["tau"] = real(space.tau(a, b));
        rep["causal"] = space.causal(a, b);
        rep["timelike"] = space.timelike(a, b);
        if (!space.causal(a, b)) rep["note"] = "points are not causally related from -> to; tau is 0";
        if (intrinsic) {
          if (!space.causal(a, b)) {
            rep["intrinsic"] = real(0.0);
            return;
          }
          if constexpr (std::is_same_v<S, FiniteLorentzSpace>) {
            const auto m = maximize_tau(space, a, b);
            rep["intrinsic"] = real(m.value);
            rep["chain"] = chain_json(m.chain);
            rep["tie_count"] = m.tie_count;
            rep["intrinsic_defect"] = real(m.intrinsic_defect);
          } else {
            const auto m = space.realizer(a, b);
            rep["intrinsic"] = real(chain_lengths(space, m).tau_length);
            rep["chain"] = chain_json(m);
          }
        }
      },
      f.space);
  return emit(c, rep, kPass, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// ---------------------------------------------------------------------------
// curvature
// ---------------------------------------------------------------------------

int cmd_curvature(const Common& c, const std::string& bound, std::size_t samples, std::uint64_t seed,
                  const std::string& csv) {
  const auto t0 = std::chrono::steady_clock::now();
  const io::SpaceFile f = load(c);
  if (bound != "lower0" && bound != "upper0" && bound != "monotonicity")
    throw StructuralError("--bound must be lower0, upper0 or monotonicity");
  json rep{{"command", "curvature"}, {"space", c.path}, {"kind", f.kind}, {"bound", bound}, {"seed", seed}};
  const double eps = f.tol.curvature.value_or(kEps);
  bool pass = true;
  std::ostringstream rows;
  rows << "triangle,worst_defect\n";
  std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space)>;
        using P = PointOf<S>;
        const auto sample = sample_of(space);
        if (sample.size() < 3) throw PreconditionError("space declares no sample to draw triangles from");
        const auto tris = sample_timelike_triangles(space, sample, samples, seed);
        if (tris.empty()) throw PreconditionError("no timelike triangles found in the sample");
        rep["triangles"] = tris.size();
        if (bound == "monotonicity") {
          double worst = 0.0;
          std::size_t failures = 0;
          for (std::size_t k = 0; k < tris.size(); ++k) {
            const auto& v = tris[k];
            const auto r = test_monotonicity_comparison(space, maximizer_of(space, v[0], v[1]),
                                                        maximizer_of(space, v[0], v[2]), CurvatureBound::lower,
                                                        f.tol.curvature.value_or(1e-7));
            worst = std::max(worst, r.max_violation);
            failures += !r.pass;
            rows << k << "," << io::real_string(r.max_violation) << "\n";
          }
          pass = failures == 0;
          rep["worst_defect"] = real(worst);
          rep["failures"] = failures;
          return;
        }
        std::vector<SampledTriangle<P>> st;
        for (const auto& v : tris)
          st.push_back({{maximizer_of(space, v[0], v[1]), maximizer_of(space, v[1], v[2]), maximizer_of(space, v[0], v[2])}});
        const auto kind = bound == "lower0" ? CurvatureBound::lower : CurvatureBound::upper;
        for (std::size_t k = 0; k < st.size(); ++k) {
          const auto one = test_curvature(space, std::vector<SampledTriangle<P>>{st[k]}, kind, eps);
          rows << k << "," << io::real_string(one.worst_defect) << "\n";
        }
        const auto r = test_curvature(space, st, kind, eps);
        pass = r.pass;
        rep["worst_defect"] = real(r.worst_defect);
        rep["pairs"] = r.pairs;
        if (r.witness) {
          const auto& w = *r.witness;
          const auto& t = tris[w.triangle];
          rep["witness"] = {{"triangle", w.triangle},
                            {"vertices", {io::point_json(t[0]), io::point_json(t[1]), io::point_json(t[2])}},
                            {"side_p", w.side_p},
                            {"index_p", w.index_p},
                            {"side_q", w.side_q},
                            {"index_q", w.index_q},
                            {"tau", real(w.tau)},
                            {"tau_bar", real(w.tau_bar)}};
        }
      },
      f.space);
  rep["passed"] = pass;
  if (!csv.empty()) io::write_atomic(csv, rows.str());
  return emit(c, rep, pass ? kPass : kFail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// ---------------------------------------------------------------------------
// asymptote
// ---------------------------------------------------------------------------

int cmd_asymptote(const Common& c, const std::string& line_path, const std::string& from, const std::string& dir,
                  const std::string& horizons_s, double knot_step, double extent) {
  const auto t0 = std::chrono::steady_clock::now();
  const io::SpaceFile f = load(c);
  if (dir != "future" && dir != "past") throw StructuralError("--direction must be future or past");
  const auto horizons = horizons_s.empty() ? geometric_horizons() : parse_list(horizons_s);
  json rep{{"command", "asymptote"}, {"space", c.path}, {"kind", f.kind}, {"direction", dir}};
  bool ok = true;
  std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space)>;
        using P = PointOf<S>;
        const auto line = io::load_line(space, line_path);
        const P p = io::parse_point_arg<P>(from);
        io::check_point(space, p);
        AsymptoteOptions opt;
        opt.knot_step = knot_step;
        opt.extent = extent;
        opt.mesh = f.mesh;
        opt.tol_null = f.tol.null;
        const auto r = build_asymptote(space, line, p, dir == "future" ? Direction::future : Direction::past,
                                       horizons, opt);
        rep["from"] = io::point_json(p);
        json fam = json::array();
        for (const auto& m : r.family)
          fam.push_back({{"horizon", real(m.horizon)}, {"chain_length", m.chain.size()}});
        rep["family"] = fam;
        rep["limit"] = chain_json(r.limit);
        json params = json::array();
        for (double s : r.limit_params) params.push_back(real(s));
        rep["limit_params"] = params;
        rep["stable"] = r.stable;
        rep["max_movement"] = real(r.max_movement);
        rep["is_timelike"] = r.is_timelike;
        rep["min_step_tau"] = real(r.min_step_tau);
        ok = r.is_timelike;
        const double tol = f.tol.busemann.value_or(5e-2);
        if (dir == "future") {
          const auto b = busemann_value(space, line, p, horizons, tol);
          rep["busemann"] = {{"value", real(b.value)}, {"error_bound", real(b.error_bound)}};
          if (!b.within_tolerance) {
            rep["warning"] = "horizons too short: Busemann error bound exceeds tolerance";
            std::cerr << "warning: Busemann error bound " << b.error_bound << " exceeds " << tol << "\n";
          }
        }
      },
      f.space);
  return emit(c, rep, ok ? kPass : kFail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

int cmd_split(const Common& c, const std::string& line_path, const std::string& grid_s, const std::string& plot,
              double knot_step_opt, double window, std::size_t c_stride) {
  const auto t0 = std::chrono::steady_clock::now();
  const io::SpaceFile f = load(c);
  json rep{{"command", "split"}, {"space", c.path}, {"kind", f.kind}};
  bool ok = true;
  std::visit(
      [&](const auto& space) {
        using S = std::decay_t<decltype(space)>;
        using P = PointOf<S>;
        if constexpr (std::is_same_v<S, FiniteLorentzSpace>) {
          throw PreconditionError("split needs a Minkowski or product space");
        } else {
          const auto gamma = io::load_line(space, line_path);
          const auto times = parse_grid(grid_s);
          SliceOptions so;
          so.line.mesh = f.mesh;
          so.line.knot_step = knot_step_opt > 0.0 ? knot_step_opt
                                                  : (gamma.size() > 1 ? gamma.tau_params[1] - gamma.tau_params[0] : 0.25);
          so.line.s_min = -window;
          so.line.s_max = window;
          so.line.busemann_tol = f.tol.busemann.value_or(5e-2);
          so.parallel_tol = f.tol.parallel;
          so.c_stride = c_stride;
          for (double t : times)
            if (std::abs(t) > window) throw PreconditionError("time grid exceeds the asymptote window");
          // seeds: the sample level closest to t = 0 inside I(gamma); probes: sample points at map times
          std::vector<P> inside, seeds, probes;
          double t_seed = std::numeric_limits<double>::infinity();
          for (const P& x : sample_of(space)) {
            if (!in_i_gamma(space, gamma, x) || std::abs(x.t) > window) continue;
            inside.push_back(x);
            if (std::abs(x.t) < std::abs(t_seed) - 1e-12) t_seed = x.t;
            for (double s : times)
              if (std::abs(x.t - s) <= 1e-9) probes.push_back(x);
          }
          for (const P& x : inside)
            if (std::abs(x.t - t_seed) <= 1e-12) seeds.push_back(x);
          if (seeds.empty()) throw PreconditionError("no sample point lies in I(gamma)");
          auto slice = extract_slice(space, gamma, seeds, so);
          const auto res = build_splitting_map(space, slice, times, probes);
          const auto& sl = res.slice;
          const double bound = 2.0 * (f.mesh + so.line.busemann_tol);
          json members = json::array(), d = json::array();
          for (const auto& m : sl.members) members.push_back(io::point_json(m));
          for (const auto& row : sl.d) {
            json r = json::array();
            for (double v : row) r.push_back(real(v));
            d.push_back(r);
          }
          rep["slice"] = {{"members", members},
                          {"d_S", d},
                          {"metric_ok", sl.metric_ok},
                          {"asymmetry", real(sl.asymmetry)},
                          {"triangle_excess", real(sl.triangle_excess)},
                          {"busemann_error", real(sl.busemann_error)},
                          {"footpoint_busemann", real(sl.footpoint_busemann)},
                          {"parallel_tol", real(sl.parallel_tol)},
                          {"nonparallel_pairs", sl.nonparallel_pairs}};
          json table = json::array();
          for (const auto& row : res.map) table.push_back(chain_json(row));
          json tj = json::array();
          for (double t : times) tj.push_back(real(t));
          rep["map"] = {{"times", tj}, {"table", table}};
          rep["verification"] = {{"tau_defect", real(res.tau_defect)},
                                 {"bound", real(bound)},
                                 {"leq_mismatches", res.leq_mismatches},
                                 {"injective", res.injective},
                                 {"bijective", res.bijective},
                                 {"probes", res.probes},
                                 {"unmatched_probes", res.unmatched_probes},
                                 {"achronal_violations", res.achronal_violations}};
          if constexpr (std::is_same_v<S, ProductSpace>) {
            double distortion = 0.0;
            for (std::size_t i = 0; i < sl.size(); ++i)
              for (std::size_t j = 0; j < sl.size(); ++j)
                distortion = std::max(distortion, std::abs(sl.d[i][j] - space.factor().distance(sl.members[i].x, sl.members[j].x)));
            rep["verification"]["distortion"] = real(distortion);
            ok = ok && distortion <= bound;
          } else if constexpr (std::is_same_v<S, MinkowskiSpace>) {
            double distortion = 0.0;
            for (std::size_t i = 0; i < sl.size(); ++i)
              for (std::size_t j = 0; j < sl.size(); ++j)
                distortion = std::max(distortion, std::abs(sl.d[i][j] - std::abs(sl.members[i].x - sl.members[j].x)));
            rep["verification"]["distortion"] = real(distortion);
            ok = ok && distortion <= bound;
          }
          if (sl.size() >= 4) {
            const auto q = check_slice_alexandrov(sl);
            rep["alexandrov"] = {{"nonneg_curvature", q.nonneg_curvature},
                                 {"worst_excess", real(q.worst_defect)},
                                 {"quadruples", q.quadruples},
                                 {"degenerate_skipped", q.degenerate_skipped}};
          }
          ok = ok && sl.metric_ok && res.tau_defect <= bound && res.leq_mismatches == 0 && res.bijective &&
               res.achronal_violations == 0;
          if (!plot.empty()) {
            std::ostringstream csv;
            csv << "time,point_t,point_x,busemann,slice_id,d_row\n";
            for (std::size_t k = 0; k < times.size(); ++k)
              for (std::size_t i = 0; i < sl.size(); ++i) {
                const json pj = io::point_json(res.map[k][i]);
                csv << io::real_string(times[k]) << "," << cell(pj[0]) << "," << cell(pj[1]) << ","
                    << io::real_string(times[k]) << "," << i << ",";
                for (std::size_t j = 0; j < sl.size(); ++j) csv << (j ? ";" : "") << io::real_string(sl.d[i][j]);
                csv << "\n";
              }
            io::write_atomic(plot, csv.str());
          }
        }
      },
      f.space);
  rep["passed"] = ok;
  return emit(c, rep, ok ? kPass : kFail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lorentz-lab: synthetic Lorentzian geometry at desk scale"};
  app.require_subcommand(1);

  Common vc, tc, cc, ac, sc;
  std::size_t max_sample = 400;
  auto* v = app.add_subcommand("validate", "check the pre-length space axioms");
  add_common(v, vc);
  v->add_option("--max-sample", max_sample, "validate at most this many sample points (model spaces)");

  std::string from, to;
  bool intrinsic = false;
  auto* t = app.add_subcommand("tau", "time separation between two points");
  add_common(t, tc);
  t->add_option("--from", from, "first point")->required();
  t->add_option("--to", to, "second point")->required();
  t->add_flag("--intrinsic", intrinsic, "also compute the longest chain");

  std::string bound = "lower0", csv;
  std::size_t samples = 100;
  std::uint64_t seed = 0;
  auto* cu = app.add_subcommand("curvature", "triangle or monotonicity comparison");
  add_common(cu, cc);
  cu->add_option("--bound", bound, "lower0 | upper0 | monotonicity");
  cu->add_option("--samples", samples, "number of sampled triangles");
  cu->add_option("--seed", seed, "sampler seed");
  cu->add_option("--csv", csv, "per-triangle defect CSV");

  std::string line_a, from_a, dir = "future", horizons;
  double knot_step = 0.25, extent = 4.0;
  auto* as = app.add_subcommand("asymptote", "asymptote to a line through a point");
  add_common(as, ac);
  as->add_option("--line", line_a, "line file")->required();
  as->add_option("--from", from_a, "footpoint")->required();
  as->add_option("--direction", dir, "future | past");
  as->add_option("--horizons", horizons, "comma-separated horizons (default 1,2,...,128)");
  as->add_option("--knot-step", knot_step, "tau spacing of limit knots");
  as->add_option("--extent", extent, "tau extent of the limit chain");

  std::string line_s, grid = "-1:1:0.5", plot;
  double split_step = 0.0, window = 2.0;
  std::size_t c_stride = 1;
  auto* sp = app.add_subcommand("split", "spacelike slice and splitting map");
  add_common(sp, sc);
  sp->add_option("--line", line_s, "line file")->required();
  sp->add_option("--t-grid", grid, "times of the map table, a:b:step or a list");
  sp->add_option("--plot", plot, "CSV of map points with Busemann value, slice id and d_S row");
  sp->add_option("--knot-step", split_step, "knot spacing of asymptotic lines (default: line spacing)");
  sp->add_option("--window", window, "asymptotic lines cover Busemann parameters [-w, w]");
  sp->add_option("--c-stride", c_stride, "stride of the c-function grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kIo;
  }

  try {
    if (*v) return cmd_validate(vc, max_sample);
    if (*t) return cmd_tau(tc, from, to, intrinsic);
    if (*cu) return cmd_curvature(cc, bound, samples, seed, csv);
    if (*as) return cmd_asymptote(ac, line_a, from_a, dir, horizons, knot_step, extent);
    if (*sp) return cmd_split(sc, line_s, grid, plot, split_step, window, c_stride);
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kFail;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kPrecondition;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kIo;
}
