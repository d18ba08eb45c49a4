#include "fwg/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <random>

#include "fwg/io.hpp"

namespace fwg::cli {
namespace {

WeightedSample fig2_sample() {
  return WeightedSample::from_rows(
      {{0, 1}, {1, 1}, {1, 0}, {0, -1}, {-1, -1}, {-1, 0}},
      {1, 3, 1, 3, 1, 3});
}

struct Options {
  std::string gauge_path;
  std::string sample_path;
  std::string out_dir;
  std::string svg_path;
  double tol = kTol;
  std::uint64_t seed = 0;
  int threads = 1;
};

void emit(const Options& opt, std::ostream& out, const std::string& name,
          const std::string& text) {
  if (opt.out_dir.empty()) {
    out << text;
  } else {
    io::write_file(opt.out_dir + "/" + name, text);
  }
}

int cmd_gauge_info(const Options& opt, std::ostream& out) {
  auto g = io::gauge_from_json_file(opt.gauge_path, opt.tol);
  emit(opt, out, "gauge_info.json", io::dump(io::gauge_info_json(g)));
  return 0;
}

int cmd_solve(const Options& opt, std::ostream& out) {
  auto g = io::gauge_from_json_file(opt.gauge_path, opt.tol);
  auto s = sample_from_csv(opt.sample_path);
  FWSolution sol = g.polyhedral() ? solve_fw_lp(g.p(), s)
                                  : solve_fw_subgradient(*g.black_box, s);
  emit(opt, out, "solution.json", io::dump(io::solution_to_json(sol)));
  return 0;
}

int cmd_robust(const Options& opt, std::ostream& out, double fraction,
               double kappa_fraction, bool breakdown, int trials,
               double resolution) {
  auto g = io::gauge_from_json_file(opt.gauge_path, opt.tol);
  auto s = sample_from_csv(opt.sample_path);
  const auto& p = g.p();
  io::Json j;

  if (breakdown) {
    double est = robust::breakdown_estimate(p, s, resolution);
    j["mode"] = "breakdown";
    j["estimate"] = io::jnum(est);
    j["closed_form"] = io::jnum(1.0 / (1.0 + p.skewness()));
    j["resolution"] = io::jnum(resolution);
  } else if (kappa_fraction >= 0) {
    auto base = solve_fw_lp_point(p, s);
    double w_C = kappa_fraction * s.total_weight();
    double kappa = robust::kappa_bound(p, s, w_C, base.first);
    j["mode"] = "kappa";
    j["fraction"] = io::jnum(kappa_fraction);
    j["corrupted_weight"] = io::jnum(w_C);
    j["kappa"] = io::jnum(kappa);
    j["base_optimizer"] = io::vec_to_json(base.first);
  } else {
    auto base = solve_fw_lp_point(p, s);
    auto order = robust::greedy_corruption_order(s, base.first);
    robust::CorruptionPlan plan;
    plan.direction = p.skew_dir();
    double w = 0.0;
    for (int i : order) {
      if (w + s.weights[i] <= fraction * s.total_weight() + 1e-12) {
        plan.indices.push_back(i);
        w += s.weights[i];
      }
    }
    const std::vector<int>& C = plan.indices;
    double threshold = 1.0 / (1.0 + p.skewness());
    if (w > threshold * s.total_weight()) {
      auto res = robust::escape_experiment(p, s, C, plan.direction);
      j["mode"] = "escape";
      j["fraction"] = io::jnum(fraction);
      j["corrupted_weight"] = io::jnum(w);
      j["result"] = io::escape_to_json(res);
      emit(opt, out, "robust.json", io::dump(j));
      emit(opt, out, "escape_trace.csv", io::escape_trace_csv(res));
      return 0;
    }
    auto rep = robust::verify_lower_bound(p, s, C, trials, opt.seed, opt.threads);
    j["mode"] = "verify";
    j["fraction"] = io::jnum(fraction);
    j["result"] = io::report_to_json(rep);
  }
  emit(opt, out, "robust.json", io::dump(j));
  return 0;
}

int cmd_hull(const Options& opt, std::ostream& out, bool want_cl) {
  auto g = io::gauge_from_json_file(opt.gauge_path, opt.tol);
  auto s = sample_from_csv(opt.sample_path);
  const auto& p = g.p();

  cells::Region hull = cells::elementary_hull(p, s.points);
  io::Json j;
  if (want_cl) {
    cl::CLRegion region = cl::contamination_locus(p, s);
    j = io::cl_to_json(region);
    emit(opt, out, "cl.json", io::dump(j));
    if (!opt.svg_path.empty())
      io::write_file(opt.svg_path, io::svg_render(s, hull, &region));
  } else {
    j = io::region_to_json(hull);
    emit(opt, out, "ehull.json", io::dump(j));
    if (!opt.svg_path.empty())
      io::write_file(opt.svg_path, io::svg_render(s, hull, nullptr));
  }
  return 0;
}

struct Reproduction {
  bool pass = true;
  std::string lines;

  void check(const std::string& what, const std::string& expected,
             const std::string& actual, bool ok) {
    lines += std::string(ok ? "  ok   " : "  FAIL ") + what + ": expected " +
             expected + ", got " + actual + "\n";
    pass = pass && ok;
  }
};

int reproduce(const std::string& id, double rho, std::ostream& out) {
  Reproduction r;
  if (id == "fig2-ehull") {
    auto g = tropical_gauge(2);
    auto s = fig2_sample();
    auto hull = cells::elementary_hull(g, s.points);
    Matrix hex(6, 2);
    hex << 0, 1, 1, 1, 1, 0, 0, -1, -1, -1, -1, 0;
    double area = 0.0;
    bool inside = true;
    for (const auto& c : hull.cells) {
      if (c.dim == 2) {
        const auto& V = c.vertices;
        for (size_t i = 0; i < V.size(); ++i) {
          const auto& a = V[i];
          const auto& b = V[(i + 1) % V.size()];
          area += 0.5 * (a[0] * b[1] - a[1] * b[0]);
        }
      }
      for (const auto& v : c.vertices)
        if (tropical_gauge(2).eval(v) > 3.01) inside = false;  // coarse guard
    }
    r.check("hull area", "3", fmt_sig(area, 12), std::abs(area - 3.0) < 1e-9);
    r.check("cells inside hexagon", "true", inside ? "true" : "false", inside);
  } else if (id == "fig2-cl") {
    auto g = tropical_gauge(2);
    auto s = fig2_sample();
    auto region = cl::contamination_locus(g, s);
    int segs = 0, pts = 0, twod = 0;
    for (int idx : region.accepted) {
      const auto& c = region.complex.cells[idx];
      if (c.dim == 1) ++segs;
      if (c.dim == 0) ++pts;
      if (c.dim == 2) ++twod;
    }
    r.check("segments", "3", std::to_string(segs), segs == 3);
    r.check("endpoints+origin", "4", std::to_string(pts), pts == 4);
    r.check("2-dimensional cells", "0", std::to_string(twod), twod == 0);
    r.check("connected", "true", region.connected ? "true" : "false",
            region.connected);
  } else if (id == "appendix-w6") {
    auto s = fig2_sample();
    Vector a = make_vector({0.25, 0.5});
    auto bal = cl::tropical_median_check(s.with_point(a, 6.0), a);
    r.check("lower-left interior weight", "7", fmt_sig(bal.interior[0], 12),
            std::abs(bal.interior[0] - 7.0) < 1e-12);
    r.check("w_A/3", "6", fmt_sig(bal.total_weight / 3.0, 12),
            std::abs(bal.total_weight / 3.0 - 6.0) < 1e-12);
    r.check("balanced", "false", bal.balanced ? "true" : "false", !bal.balanced);
  } else if (id == "appendix-w5") {
    auto s = fig2_sample();
    Vector a = make_vector({0.0, 0.5});  // open segment towards weight 1
    auto bal = cl::tropical_median_check(s.with_point(a, 5.0), a);
    std::vector<double> interior(bal.interior.begin(), bal.interior.end());
    std::sort(interior.begin(), interior.end());
    bool int_ok = interior[0] == 1 && interior[1] == 4 && interior[2] == 4;
    std::vector<double> incl;
    for (int k = 0; k < 3; ++k) incl.push_back(bal.interior[k] + bal.m_weight);
    std::sort(incl.begin(), incl.end());
    bool incl_ok = incl[0] == 6 && incl[1] == 9 && incl[2] == 9;
    r.check("interior weights", "{1,4,4}",
            "{" + fmt_sig(interior[0], 12) + "," + fmt_sig(interior[1], 12) +
                "," + fmt_sig(interior[2], 12) + "}",
            int_ok);
    r.check("interior+self weights", "{6,9,9}",
            "{" + fmt_sig(incl[0], 12) + "," + fmt_sig(incl[1], 12) + "," +
                fmt_sig(incl[2], 12) + "}",
            incl_ok);
    r.check("w_A/3", "17/3", fmt_sig(bal.total_weight / 3.0, 12),
            std::abs(bal.total_weight - 17.0) < 1e-12);
    r.check("balanced", "true", bal.balanced ? "true" : "false", bal.balanced);
  } else if (id == "euclid-3pt") {
    Vector a = make_vector({0, 0}), b = make_vector({2, 0}),
           m = make_vector({1, 1});
    auto w = euclid_three_point_witness(a, b, m, rho);
    r.check("verified", "true", w.verified ? "true" : "false", w.verified);
    r.check("w_c < w_a + w_b", "true", w.w_c < 2 ? "true" : "false", w.w_c < 2);
    r.check("residual <= 1e-8", "true", fmt_sig(w.residual, 3),
            w.residual <= 1e-8);
  } else if (id == "quantile-cl") {
    auto interval = cl::quantile_cl({0, 1, 2, 3, 4}, {1, 1, 1, 1, 1}, 0.25);
    r.check("interval", "[0,1]",
            "[" + fmt_sig(interval.first, 12) + "," +
                fmt_sig(interval.second, 12) + "]",
            interval.first == 0.0 && interval.second == 1.0);
  } else if (id == "quantile-1d") {
    auto g = quantile_gauge(0.25);
    // one corrupted unit point out of five: weight 1/5 < b = 1/4
    auto s = WeightedSample::from_rows({{0}, {1}, {2}, {3}, {4}},
                                       {1, 1, 1, 1, 1});
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1e6, 1e6);
    bool contained = true;
    for (int t = 0; t < 50; ++t) {
      WeightedSample c = s;
      c.points(t % 5, 0) = U(rng);
      auto sol = solve_fw_lp_point(g, c);
      if (sol.first[0] < -1e-9 || sol.first[0] > 4.0 + 1e-9) contained = false;
    }
    r.check("optimizers stay in conv(A)", "true", contained ? "true" : "false",
            contained);
  } else if (id == "separable-box") {
    std::vector<double> bs{0.25, 0.4};
    auto g = separable_gauge(bs);
    // one corrupted unit point out of five: weight 1/5 < 1/(1+sigma) = 1/4
    auto s = WeightedSample::from_rows(
        {{0, 0}, {1, 3}, {2, 1}, {0.5, 2}, {1.5, 0.5}}, {1, 1, 1, 1, 1});
    auto box = robust::separable_box_bound(bs, s);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-1e5, 1e5);
    bool contained = true;
    for (int t = 0; t < 200; ++t) {
      WeightedSample c = s;
      int idx = t % 5;
      c.points(idx, 0) = U(rng);
      c.points(idx, 1) = U(rng);
      auto sol = solve_fw_lp_point(g, c);
      for (int k = 0; k < 2; ++k)
        if (sol.first[k] < box.lo[k] - 1e-9 || sol.first[k] > box.hi[k] + 1e-9)
          contained = false;
    }
    r.check("corrupted optimizers stay in the box", "true",
            contained ? "true" : "false", contained);
  } else if (id == "skew-line") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> U(-5, 5);
    bool all = true;
    std::vector<PolyhedralGauge> gauges{tropical_gauge(2), quantile_gauge(0.25)};
    Matrix diamond(4, 2);
    diamond << 1, 0, 0, 1, -1, 0, 0, -1;
    gauges.push_back(PolyhedralGauge::from_primal(diamond));
    for (int t = 0; t < 50; ++t) {
      const auto& g = gauges[t % gauges.size()];
      int n = 3 + static_cast<int>(std::floor(std::abs(U(rng)))) % 10;
      std::vector<double> taus;
      for (int i = 0; i < n; ++i) taus.push_back(U(rng));
      std::sort(taus.begin(), taus.end());
      Vector base = Vector::Zero(g.dim());
      for (int k = 0; k < g.dim(); ++k) base[k] = U(rng);
      if (!skew_line_fw_check(g, taus, base)) all = false;
    }
    r.check("50 random skew-line instances", "all optimal",
            all ? "all optimal" : "failure", all);
  } else {
    throw InvalidInput("reproduce: unknown id '" + id + "'");
  }

  out << (r.pass ? "PASS " : "FAIL ") << id << "\n" << r.lines;
  return r.pass ? 0 : 4;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Fermat-Weber problems under polyhedral gauge distances"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--tol", opt.tol, "activity tolerance override");
  app.add_option("--seed", opt.seed, "seed for randomized experiments");
  app.add_option("--threads", opt.threads, "worker threads for trials");
  app.add_option("--out", opt.out_dir, "output directory (default: stdout)");

  auto* info = app.add_subcommand("gauge-info", "inspect a gauge descriptor");
  info->add_option("--gauge", opt.gauge_path, "gauge JSON file")->required();

  auto* solve = app.add_subcommand("solve", "solve a Fermat-Weber instance");
  solve->add_option("--gauge", opt.gauge_path, "gauge JSON file")->required();
  solve->add_option("--sample", opt.sample_path, "sample CSV file")->required();

  auto* rob = app.add_subcommand("robust", "corruption experiments");
  rob->add_option("--gauge", opt.gauge_path, "gauge JSON file")->required();
  rob->add_option("--sample", opt.sample_path, "sample CSV file")->required();
  double fraction = -1, kappa_fraction = -1, resolution = 0.01;
  bool breakdown = false;
  int trials = 200;
  auto* f_opt = rob->add_option("--fraction", fraction,
                                "corrupted weight fraction to experiment at");
  auto* k_opt = rob->add_option("--kappa", kappa_fraction,
                                "corrupted weight fraction for the kappa bound");
  auto* b_opt = rob->add_flag("--breakdown", breakdown,
                              "estimate the breakdown fraction by bisection");
  f_opt->excludes(k_opt)->excludes(b_opt);
  k_opt->excludes(b_opt);
  rob->add_option("--trials", trials, "number of corruption trials");
  rob->add_option("--resolution", resolution, "bisection resolution");

  auto* hull = app.add_subcommand("hull", "elementary hull / contamination locus");
  hull->add_option("--gauge", opt.gauge_path, "gauge JSON file")->required();
  hull->add_option("--sample", opt.sample_path, "sample CSV file")->required();
  bool want_ehull = false, want_cl = false;
  auto* eh_opt = hull->add_flag("--ehull", want_ehull, "elementary hull");
  auto* cl_opt = hull->add_flag("--cl", want_cl, "contamination locus");
  eh_opt->excludes(cl_opt);
  hull->add_option("--svg", opt.svg_path, "write an SVG rendering");

  auto* rep = app.add_subcommand("reproduce", "re-run a worked example");
  std::string repro_id;
  double rho = 1.0;
  rep->add_option("id", repro_id, "example id")->required();
  rep->add_option("--rho", rho, "displacement parameter");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*info) return cmd_gauge_info(opt, out);
    if (*solve) return cmd_solve(opt, out);
    if (*rob) {
      if (!breakdown && fraction < 0 && kappa_fraction < 0)
        throw InvalidInput("robust: one of --fraction/--kappa/--breakdown required");
      return cmd_robust(opt, out, fraction, kappa_fraction, breakdown, trials,
                        resolution);
    }
    if (*hull) {
      if (!want_ehull && !want_cl)
        throw InvalidInput("hull: one of --ehull/--cl required");
      return cmd_hull(opt, out, want_cl);
    }
    if (*rep) return reproduce(repro_id, rho, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace fwg::cli
