#include "densepack/cli.hpp"

#include "densepack/analysis.hpp"
#include "densepack/errors.hpp"
#include "densepack/io.hpp"
#include "densepack/lattices.hpp"
#include "densepack/optimizer.hpp"
#include "densepack/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#ifndef DENSEPACK_VERSION
#define DENSEPACK_VERSION "0.0.0"
#endif

namespace densepack {

namespace {

using io::json;

int thread_budget() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("DENSEPACK_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("DENSEPACK_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  return n;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <class F>
void parallel_for(std::size_t count, int threads, F&& body) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(fail_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < std::min<int>(threads, static_cast<int>(count)); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Run {
  std::vector<std::string> argv;
  std::map<std::string, std::string> inputs;  // path -> digest
  json tolerances = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json load(const std::string& path) {
    const std::string text = io::read_text(path);
    inputs[path] = io::digest(text);
    try {
      return json::parse(text);
    } catch (const json::exception& e) {
      throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
  }

  json manifest() const {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json in = json::object();
    for (const auto& [p, d] : inputs) in[p] = json{{"fnv1a64", d}};
    return json{{"command", argv},
                {"inputs", in},
                {"tolerances", tolerances},
                {"version", DENSEPACK_VERSION},
                {"wall_time_s", secs}};
  }

  // Writes data to `path` (plus a sidecar manifest) or to `out`.
  void emit_json(json data, const std::string& path, std::ostream& out) const {
    if (path.empty()) {
      out << data.dump(2) << "\n";
      return;
    }
    const std::string mpath = path + ".manifest.json";
    data["manifest"] = std::filesystem::path(mpath).filename().string();
    io::write_text(path, data.dump(2) + "\n");
    io::write_text(mpath, manifest().dump(2) + "\n");
  }

  void emit_text(const std::string& text, const std::string& path, std::ostream& out) const {
    if (path.empty()) {
      out << text;
      return;
    }
    const std::string mpath = path + ".manifest.json";
    io::write_text(path, "# manifest: " + std::filesystem::path(mpath).filename().string() + "\n" + text);
    io::write_text(mpath, manifest().dump(2) + "\n");
  }
};

std::vector<Eigen::VectorXd> directions(const std::vector<std::string>& specs, int d) {
  std::vector<Eigen::VectorXd> out;
  if (specs.empty()) {
    for (int l = 0; l < d; ++l) out.push_back(Eigen::VectorXd::Unit(d, l));
    return out;
  }
  for (const auto& s : specs) {
    auto v = io::parse_vector(s);
    if (v.size() != d) throw InvalidInput("flux direction '" + s + "' has the wrong dimension");
    out.push_back(unit_direction(v));
  }
  return out;
}

PeriodicGraph graph_for(Run& run, const Configuration& config, const std::string& graph_path, double facet_tol) {
  if (graph_path.empty()) return build_delaunay(config, {facet_tol});
  return with_geometry(io::graph_from_json(run.load(graph_path), config.dim()), config);
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete network energies and optimal packings of equal balls on a flat torus", "densepack"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(DENSEPACK_VERSION));

  Run run;
  for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);
  std::string output;
  double facet_tol = 1e-9, touch_tol = 1e-8, tol = 1e-10;
  std::uint64_t seed = 1;

  auto add_output = [&](CLI::App* sub) { sub->add_option("--output,-o", output, "Write the result to FILE (plus FILE.manifest.json)"); };

  // lattice
  auto* lat = app.add_subcommand("lattice", "Generate a reference lattice with its graph class");
  std::string family = "zd", config_out, class_out;
  int m = 1, d = 2;
  lat->add_option("--family", family, "zd | a2 | fcc | hcp")->required();
  lat->add_option("--m", m, "Repetitions per cell direction")->capture_default_str();
  lat->add_option("--d", d, "Dimension (zd only)")->capture_default_str();
  lat->add_option("--config-out", config_out, "Also write the configuration alone");
  lat->add_option("--class-out", class_out, "Also write the graph class alone");
  add_output(lat);

  // delaunay
  auto* del = app.add_subcommand("delaunay", "Periodic Delaunay graph of a configuration");
  std::string input;
  del->add_option("--input,--config", input, "Configuration JSON")->required();
  del->add_option("--facet-tol", facet_tol, "Relative facet measure threshold")->capture_default_str();
  add_output(del);

  // flux
  auto* flx = app.add_subcommand("flux", "Flux coefficient sweep as CSV");
  int fd = 2, fp = 2;
  double fr = 1.0, rel_tol = 1e-10;
  std::string deltas, method = "main";
  flx->add_option("--d", fd, "Dimension")->required();
  flx->add_option("--p", fp, "Exponent")->required();
  flx->add_option("--r", fr, "Ball radius")->capture_default_str();
  flx->add_option("--delta", deltas, "Comma-separated gaps")->required();
  flx->add_option("--method", method, "main | quad | hyp")->capture_default_str();
  flx->add_option("--rel-tol", rel_tol, "Quadrature relative tolerance")->capture_default_str();
  add_output(flx);

  // energy and bounds share options
  std::string config_path, graph_path, t_list;
  int p = 2;
  std::vector<std::string> xis;
  double amplitude = 1.0;
  auto* en = app.add_subcommand("energy", "Minimal discrete energy for each flux direction");
  auto* bd = app.add_subcommand("bounds", "Lower bound on the discrete energy");
  for (auto* sub : {en, bd}) {
    sub->add_option("--config", config_path, "Configuration JSON")->required();
    sub->add_option("--p", p, "Exponent")->required();
    sub->add_option("--xi", xis, "Flux direction, e.g. \"0,1\" (repeatable; default: every axis)");
    sub->add_option("--graph", graph_path, "Use this graph instead of building one");
    sub->add_option("--amplitude", amplitude, "Scale of the external potential jump")->capture_default_str();
    sub->add_option("--facet-tol", facet_tol, "Relative facet measure threshold")->capture_default_str();
    sub->add_option("--tol", tol, "Solver tolerance")->capture_default_str();
    add_output(sub);
  }
  bd->add_option("--t", t_list, "Potentials to bound (default: the minimizer)");

  // optimize
  auto* opt = app.add_subcommand("optimize", "Stationary centers and packing inside a graph class");
  std::string class_path, basis_path;
  int restarts = 0;
  opt->add_option("--class", class_path, "Graph class JSON")->required();
  opt->add_option("--basis", basis_path, "Basis JSON")->required();
  opt->add_option("--tol", tol, "Solver tolerance")->capture_default_str();
  opt->add_option("--facet-tol", facet_tol, "Relative facet measure threshold")->capture_default_str();
  opt->add_option("--restarts", restarts, "Perturbed restarts for the spread check")->capture_default_str();
  opt->add_option("--seed", seed, "Seed for perturbed restarts")->capture_default_str();
  add_output(opt);

  // pack
  auto* pk = app.add_subcommand("pack", "Best packing of a class over scanned bases");
  std::string scan_path;
  pk->add_option("--class", class_path, "Graph class JSON")->required();
  pk->add_option("--basis-scan", scan_path, "Scan JSON: {\"bases\": [...]} or {\"grid\": {...}}")->required();
  pk->add_option("--facet-tol", facet_tol, "Relative facet measure threshold")->capture_default_str();
  pk->add_option("--touch-tol", touch_tol, "Relative touching threshold")->capture_default_str();
  add_output(pk);

  // percolation
  auto* pc = app.add_subcommand("percolation", "Percolation chains of touching balls");
  pc->add_option("--config", config_path, "Configuration JSON")->required();
  pc->add_option("--touch-tol", touch_tol, "Relative touching threshold")->capture_default_str();
  add_output(pc);

  // verify
  auto* vf = app.add_subcommand("verify", "Run the built-in reference checks");
  add_output(vf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (lat->parsed()) {
      const Family f = parse_family(family);
      const LatticeSpec spec{f, m, f == Family::Z ? d : f == Family::A2 ? 2 : 3};
      const auto data = generate(spec);
      const json cfg = io::to_json(data.config);
      const json cls = io::to_json(data.cls);
      if (!config_out.empty()) run.emit_json(cfg, config_out, out);
      if (!class_out.empty()) run.emit_json(cls, class_out, out);
      run.emit_json(json{{"family", to_string(spec.family)},
                         {"m", spec.m},
                         {"config", cfg},
                         {"class", cls},
                         {"r_touch", data.r_touch},
                         {"density", packing_density(data.config)}},
                    output, out);
    } else if (del->parsed()) {
      run.tolerances = {{"facet_tol", facet_tol}};
      const auto config = io::config_from_json(run.load(input));
      run.emit_json(io::to_json(build_delaunay(config, {facet_tol})), output, out);
    } else if (flx->parsed()) {
      run.tolerances = {{"rel_tol", rel_tol}};
      const FluxModel model(fd, fp, fr);
      std::ostringstream csv;
      csv << "delta,value\n";
      for (double delta : io::parse_list(deltas)) {
        double v;
        if (method == "main") v = g0_main(model, delta);
        else if (method == "quad") v = g0_quadrature(model, delta, rel_tol);
        else if (method == "hyp") v = g0_hypergeometric(model, delta);
        else throw InvalidInput("unknown method '" + method + "' (expected main, quad or hyp)");
        csv << fmt17(delta) << "," << fmt17(v) << "\n";
      }
      run.emit_text(csv.str(), output, out);
    } else if (en->parsed() || bd->parsed()) {
      run.tolerances = {{"facet_tol", facet_tol}, {"solver_tol", tol}};
      const auto config = io::config_from_json(run.load(config_path));
      check_non_overlapping(config);
      const auto graph = graph_for(run, config, graph_path, facet_tol);
      const FluxModel model(config.dim(), p, config.radius);
      const auto dirs = directions(xis, config.dim());
      MinimizeOptions mo;
      mo.tol = tol;
      if (en->parsed()) {
        std::vector<EnergyReport> reps(dirs.size());
        parallel_for(dirs.size(), thread_budget(), [&](std::size_t i) {
          reps[i] = minimize_potentials(graph, model, dirs[i], config.basis, mo, amplitude);
          if (model.regime() == Regime::power) {
            const auto br = lower_bound(graph, model, {dirs[i], reps[i].t_opt, amplitude}, config.basis);
            if (br.defined) {
              reps[i].bound = br.bound;
              reps[i].equality_gap = br.equality_gap;
            }
          }
        });
        json results = json::array();
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& r : reps) {
          results.push_back(io::to_json(r));
          lo = std::min(lo, r.sigma);
          hi = std::max(hi, r.sigma);
        }
        run.emit_json(json{{"p", p},
                           {"regime", to_string(model.regime())},
                           {"normalization", "1/(2|Q0|) times the sum over directed neighbor pairs"},
                           {"volume", config.basis.volume()},
                           {"results", results},
                           {"sigma_min", lo},
                           {"sigma_max", hi},
                           {"sigma_spread", hi - lo}},
                      output, out);
      } else {
        json results = json::array();
        for (const auto& xi : dirs) {
          PotentialField field{xi, Eigen::VectorXd(), amplitude};
          if (t_list.empty()) {
            field.t = minimize_potentials(graph, model, xi, config.basis, mo, amplitude).t_opt;
          } else {
            field.t = io::parse_vector(t_list);
          }
          json r = io::to_json(lower_bound(graph, model, field, config.basis));
          r["xi"] = io::to_json(xi);
          r["t"] = io::to_json(field.t);
          results.push_back(r);
        }
        run.emit_json(json{{"p", p}, {"results", results}}, output, out);
      }
    } else if (opt->parsed()) {
      run.tolerances = {{"solver_tol", tol}, {"facet_tol", facet_tol}};
      const auto cls = io::class_from_json(run.load(class_path));
      const auto basis = io::basis_from_json(run.load(basis_path));
      const auto spread = maximize_spread(cls, basis, restarts, seed);
      const auto pack = pack_in_class(cls, basis, facet_tol);
      json data = io::to_json(pack);
      data["spread"] = spread.value;
      data["restart_spreads"] = spread.restarts;
      if (pack.class_violation) {
        data["warning"] = "class_violation: the realized Delaunay graph differs from the class";
        err << "warning: class_violation (realized Delaunay graph differs from the class)\n";
      }
      run.emit_json(data, output, out);
    } else if (pk->parsed()) {
      run.tolerances = {{"facet_tol", facet_tol}, {"touch_tol", touch_tol}};
      const auto cls = io::class_from_json(run.load(class_path));
      const json scan = run.load(scan_path);
      std::vector<Eigen::MatrixXd> bases;
      try {
        if (scan.contains("bases")) {
          for (const auto& b : scan.at("bases")) bases.push_back(io::basis_from_json(json{{"basis", b}}).matrix());
        } else if (scan.contains("grid")) {
          const auto& g = scan.at("grid");
          auto angles = g.at("angles_deg").get<std::vector<double>>();
          for (auto& a : angles) a *= std::numbers::pi / 180.0;
          bases = planar_basis_grid(angles, g.at("ratios").get<std::vector<double>>());
          if (cls.d != 2) throw InvalidInput("the angle/ratio grid is planar; the class has d != 2");
        } else {
          throw InvalidInput("scan file needs a \"bases\" list or a \"grid\" object");
        }
      } catch (const json::exception& e) {
        throw InvalidInput(std::string("malformed scan file: ") + e.what());
      }
      const auto res = scan_bases(cls, bases, facet_tol, touch_tol, thread_budget());
      json entries = json::array();
      for (const auto& e : res.entries) {
        json j{{"valid", e.valid}};
        if (e.basis) j["basis"] = e.basis->rows();
        if (e.valid) {
          j["density"] = e.density;
          j["class_violation"] = e.class_violation;
          j["percolation"] = io::to_json(e.percolation);
          j["accepted"] = e.accepted;
        } else {
          j["error"] = e.error;
        }
        entries.push_back(j);
      }
      json data{{"entries", entries}, {"best", res.best}};
      if (res.best >= 0) {
        data["best_pack"] = io::to_json(pack_in_class(cls, *res.entries[static_cast<std::size_t>(res.best)].basis, facet_tol));
      }
      run.emit_json(data, output, out);
    } else if (pc->parsed()) {
      run.tolerances = {{"touch_tol", touch_tol}};
      const auto config = io::config_from_json(run.load(config_path));
      json data = io::to_json(detect_percolation(config, touch_tol));
      json hints = json::array();
      for (const auto& h : densify_hint(config, touch_tol)) hints.push_back(io::to_json(h));
      data["densify_hints"] = hints;
      run.emit_json(data, output, out);
    } else if (vf->parsed()) {
      std::ostringstream table;
      const bool ok = print_verification(run_verification(), table);
      run.emit_text(table.str(), output, out);
      return ok ? 0 : 3;
    }
    return 0;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

int dispatch(int argc, const char* const* argv) { return dispatch(argc, argv, std::cout, std::cerr); }

}  // namespace densepack
