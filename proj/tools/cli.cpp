#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cayspec/complex.hpp"
#include "cayspec/error.hpp"
#include "cayspec/experiments.hpp"
#include "cayspec/f2_expansion.hpp"
#include "cayspec/fourier.hpp"
#include "cayspec/garland.hpp"
#include "cayspec/group.hpp"
#include "cayspec/homology.hpp"
#include "cayspec/random.hpp"
#include "cayspec/report.hpp"
#include "cayspec/spectral.hpp"

namespace cayspec::cli {

namespace {

// Size caps hit while building a complex are a property of the requested
// configuration, so they are reported with the validation exit code.
struct ValidationFailure {
  Error error;
};

struct Globals {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string out = "-";
  std::string format = "json";
  double tol = 1e-9;
};

struct Params {
  std::string group;
  std::string set;
  std::size_t k = 1;
  int j = 0;
  std::string kind = "full";
  std::string method = "auto";
  std::vector<std::string> dump_d;
  std::uint64_t prime = kDefaultPrime;
  std::size_t sample = 5;
  double eps = 0.5;
  std::size_t m = 0;
  bool auto_m = false;
  std::size_t trials = 1;
};

std::size_t default_threads() {
  if (const char* env = std::getenv("CAYSPEC_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

GroupPtr load_group(const std::string& spec) { return std::make_shared<const GroupTable>(parse_group_spec(spec)); }

Subset parse_set(const GroupTable& G, const std::string& text, std::uint64_t seed) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, "--set is required");
  if (text == "all") return full_subset(G);
  if (text.rfind("random:", 0) == 0) {
    std::size_t m = 0;
    try {
      m = std::stoul(text.substr(7));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "bad random subset size in '" + text + "'");
    }
    return sample_subset(G, m, seed);
  }
  std::vector<Element> elems;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::ParseError, "bad element '" + tok + "' in --set");
    elems.push_back(static_cast<Element>(std::stoul(tok)));
  }
  return make_subset(G, std::move(elems));
}

ComplexHandle make_handle(const GroupPtr& G, std::size_t k, Subset A) {
  try {
    return build_complex(G, k, std::move(A));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SizeCap) throw ValidationFailure{e};
    throw;
  }
}

LaplacianKind parse_kind(const std::string& s) {
  if (s == "full") return LaplacianKind::Full;
  if (s == "lower") return LaplacianKind::Lower;
  if (s == "upper") return LaplacianKind::Upper;
  throw Error(ErrorCode::InvalidArgument, "unknown Laplacian kind '" + s + "'");
}

GapMethod parse_method(const std::string& s) {
  if (s == "auto") return GapMethod::Auto;
  if (s == "dense") return GapMethod::Dense;
  if (s == "iter") return GapMethod::Iterative;
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + s + "'");
}

void require_json(const Globals& g, const std::string& sub) {
  if (g.format != "json") throw Error(ErrorCode::InvalidArgument, "format '" + g.format + "' not supported by " + sub);
}

Json clusters_json(const std::vector<linalg::Cluster>& cs) {
  Json a = Json::array();
  for (const auto& c : cs) a.push_back({{"value", c.value}, {"multiplicity", c.multiplicity}});
  return a;
}

std::string kind_name(LaplacianKind k) {
  switch (k) {
    case LaplacianKind::Full: return "full";
    case LaplacianKind::Lower: return "lower";
    case LaplacianKind::Upper: return "upper";
  }
  return "full";
}

// Echo of every option given on the command line, plus the global options
// that affect results. --threads and --out never change the report.
Json config_echo(const CLI::App& sub, const Globals& g) {
  Json cfg = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "threads" || name == "out" || opt->count() == 0) continue;
    if (opt->get_type_size() == 0) {
      cfg[name] = true;
      continue;
    }
    const auto& res = opt->results();
    if (res.size() == 1) {
      cfg[name] = res.front();
    } else {
      cfg[name] = res;
    }
  }
  cfg["seed"] = std::to_string(g.seed);
  cfg["tol"] = format_number(g.tol);
  cfg["format"] = g.format;
  return cfg;
}

struct Command {
  CLI::App* app = nullptr;
  std::function<Json()> run_json;
  // Optional non-JSON emission (csv); receives the manifest.
  std::function<std::string(const RunManifest&)> run_text;
};

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Balanced Cayley complexes: spectra, Fourier norms, homology and experiments", "cayspec"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(version()));

  Globals g;
  g.threads = default_threads();
  app.add_option("--seed", g.seed, "Base random seed");
  app.add_option("--threads", g.threads, "Worker threads (default $CAYSPEC_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output path, '-' for stdout");
  app.add_option("--format", g.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", g.tol, "Solver tolerance")->check(CLI::PositiveNumber);

  Params p;
  std::map<std::string, Command> commands;
  auto add = [&](const std::string& name, const std::string& help) -> CLI::App* {
    CLI::App* sub = app.add_subcommand(name, help);
    commands[name].app = sub;
    return sub;
  };
  auto group_opt = [&](CLI::App* sub) { sub->add_option("--group", p.group, "Group spec")->required(); };
  auto k_opt = [&](CLI::App* sub) { sub->add_option("--k", p.k, "Complex dimension")->required()->check(CLI::PositiveNumber); };
  auto set_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--set", p.set, "Generator set: comma list, 'all' or 'random:m'");
    if (required) o->required();
  };

  // build
  {
    auto* sub = add("build", "Build Y_{A,k} and summarize it");
    group_opt(sub);
    k_opt(sub);
    set_opt(sub, true);
    sub->add_option("--dump-d", p.dump_d, "Write d_j as text: <j> <path>")->expected(2);
    commands["build"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto h = make_handle(G, p.k, parse_set(*G, p.set, g.seed));
      Json cells = Json::array();
      for (int j = 0; j <= static_cast<int>(p.k); ++j) cells.push_back(h.dim(j));
      const auto dc = degree_check(h);
      Json r{{"cells_per_dim", cells}, {"degree_ok", dc.ok}, {"k", p.k}, {"generators", h.generators().elements()}};
      if (dc.counterexample) r["degree_counterexample"] = {{"cell", *dc.counterexample}, {"degree", dc.degree}};
      if (!p.dump_d.empty()) {
        int j = 0;
        try {
          j = std::stoi(p.dump_d[0]);
        } catch (const std::exception&) {
          throw Error(ErrorCode::ParseError, "--dump-d expects an integer degree");
        }
        if (j < -1 || j >= static_cast<int>(p.k))
          throw Error(ErrorCode::InvalidArgument, "--dump-d degree must lie in [-1, k-1]");
        std::ostringstream text;
        h.coboundary(j).write_text(text);
        write_output(p.dump_d[1], text.str(), out);
        r["dumped"] = {{"j", j}, {"path", p.dump_d[1]}};
      }
      return r;
    };
  }

  // spectrum
  {
    auto* sub = add("spectrum", "Full spectrum of L_j (A = G unless --set is given)");
    group_opt(sub);
    k_opt(sub);
    sub->add_option("--j", p.j, "Cochain degree")->required();
    sub->add_option("--kind", p.kind, "full, lower or upper")->check(CLI::IsMember({"full", "lower", "upper"}));
    set_opt(sub, false);
    auto compute = [&] {
      const auto G = load_group(p.group);
      const Subset A = p.set.empty() ? full_subset(*G) : parse_set(*G, p.set, g.seed);
      const bool full = A.size() == G->order();
      const auto h = make_handle(G, p.k, A);
      const auto kind = parse_kind(p.kind);
      auto spec = full_spectrum(h, p.j, kind);
      Json r{{"j", p.j}, {"k", p.k}, {"kind", kind_name(kind)}, {"spectrum", spec}};
      r["clusters"] = clusters_json(linalg::cluster_sorted(spec, multiplicity_gap(G->order())));
      if (full && kind == LaplacianKind::Full) {
        const auto expected = ygk_expected_spectrum(G->order(), p.k, p.j, kind);
        r["expected"] = clusters_json(expected);
        std::vector<double> flat;
        for (const auto& c : expected) flat.insert(flat.end(), c.multiplicity, c.value);
        double dev = flat.size() == spec.size() ? 0.0 : INFINITY;
        for (std::size_t i = 0; std::isfinite(dev) && i < flat.size(); ++i)
          dev = std::max(dev, std::abs(flat[i] - spec[i]));
        r["max_deviation"] = dev;
        r["matches"] = dev <= kSpectrumTol;
      }
      return r;
    };
    commands["spectrum"].run_json = compute;
    commands["spectrum"].run_text = [compute](const RunManifest&) {
      const Json r = compute();
      std::string csv = "index,value\n";
      std::size_t i = 0;
      for (const auto& v : r["spectrum"]) csv += std::to_string(i++) + "," + format_number(v.get<double>()) + "\n";
      return csv;
    };
  }

  // gap
  {
    auto* sub = add("gap", "Spectral gap mu_{k-1} and the |A| - k nu(A) bound");
    group_opt(sub);
    k_opt(sub);
    set_opt(sub, true);
    sub->add_option("--method", p.method, "auto, dense or iter")->check(CLI::IsMember({"auto", "dense", "iter"}));
    commands["gap"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto h = make_handle(G, p.k, parse_set(*G, p.set, g.seed));
      const auto b = gap_lower_bound(h, g.tol, parse_method(p.method), g.seed);
      return Json{{"gap", b.mu},         {"bound", b.bound},         {"nu", b.nu},
                  {"holds", b.holds},    {"slack", b.slack},         {"method", b.report.method},
                  {"residual", b.report.residual}, {"iterations", b.report.iterations}};
    };
  }

  // nu
  {
    auto* sub = add("nu", "Fourier norm nu(A)");
    group_opt(sub);
    set_opt(sub, true);
    commands["nu"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto A = parse_set(*G, p.set, g.seed);
      const auto r = nu(*G, A, g.tol, g.seed);
      return Json{{"nu", r.nu},
                  {"method", r.method},
                  {"solver", r.solver},
                  {"iterations", r.iterations},
                  {"residual", r.residual},
                  {"set", A.elements()}};
    };
  }

  // dsum
  {
    auto* sub = add("dsum", "Sum of irreducible degrees D(G)");
    group_opt(sub);
    commands["dsum"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto r = dsum(*G, g.seed);
      return Json{{"dsum", r.dsum}, {"classes", r.classes}, {"degree_vector", r.degree_vector}};
    };
  }

  // betti
  {
    auto* sub = add("betti", "Reduced Betti numbers over GF(p)");
    group_opt(sub);
    k_opt(sub);
    set_opt(sub, true);
    sub->add_option("--prime", p.prime, "Prime modulus below 2^32");
    commands["betti"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto h = make_handle(G, p.k, parse_set(*G, p.set, g.seed));
      const auto b = betti(h, p.prime);
      return Json{{"betti", b.betti}, {"ranks", b.ranks}, {"dims", b.dims}, {"prime", b.prime}};
    };
  }

  // verify-ygk
  {
    auto* sub = add("verify-ygk", "Compare the spectra of Y_{G,k} with the closed forms");
    group_opt(sub);
    k_opt(sub);
    commands["verify-ygk"].run_json = [&] {
      const auto G = load_group(p.group);
      // Builds through make_handle first so oversized requests fail as validation errors.
      make_handle(G, p.k, full_subset(*G));
      const auto r = verify_ygk_spectra(*G, p.k);
      Json checks = Json::array();
      for (const auto& c : r.checks)
        checks.push_back({{"j", c.j},
                          {"kind", kind_name(c.kind)},
                          {"expected_count", c.expected_count},
                          {"computed_count", c.computed_count},
                          {"deviation", c.deviation},
                          {"ok", c.ok}});
      return Json{{"ok", r.ok}, {"max_deviation", r.max_deviation}, {"checks", checks}};
    };
  }

  // links
  {
    auto* sub = add("links", "Link graphs, C_A and the Garland bound");
    group_opt(sub);
    k_opt(sub);
    set_opt(sub, true);
    sub->add_option("--sample", p.sample, "Number of random links to check");
    commands["links"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto h = make_handle(G, p.k, parse_set(*G, p.set, g.seed));
      const auto gb = garland_bound(h, p.sample, g.seed);
      bool iso_ok = true;
      std::size_t iso_checked = 0;
      if (p.k >= 2) {
        const std::size_t taus = h.dim(static_cast<int>(p.k) - 2);
        Rng rng(g.seed);
        const std::size_t count = std::min(p.sample, taus);
        for (std::size_t s = 0; s < count; ++s) {
          const auto tau = static_cast<CellId>(p.sample >= taus ? s : rng.below(taus));
          iso_ok = iso_ok && link_isomorphism(h, tau, false).edges_match;
          ++iso_checked;
        }
      } else {
        iso_ok = link_graph(h, 0).edges == build_CA(*G, h.generators()).edges;
        iso_checked = 1;
      }
      return Json{{"lambda2_CA", gb.lambda_CA},
                  {"links_checked", gb.links_checked},
                  {"max_link_deviation", gb.max_link_deviation},
                  {"iso_ok", iso_ok},
                  {"iso_checked", iso_checked},
                  {"garland_bound", gb.bound}};
    };
  }

  // expansion
  {
    auto* sub = add("expansion", "Exact F_2 coboundary expansion h_j by enumeration");
    group_opt(sub);
    k_opt(sub);
    set_opt(sub, true);
    sub->add_option("--j", p.j, "Cochain degree")->required();
    commands["expansion"].run_json = [&] {
      const auto G = load_group(p.group);
      const auto h = make_handle(G, p.k, parse_set(*G, p.set, g.seed));
      const auto r = h_constant(h, p.j);
      Json hj = r.den == 0 ? Json(nullptr) : Json{{"num", r.num}, {"den", r.den}};
      return Json{{"h", hj},
                  {"h_value", r.value()},
                  {"witness", r.witness.to_string()},
                  {"enumerated", r.enumerated},
                  {"cosets", r.cosets},
                  {"j", p.j}};
    };
  }

  // experiment
  {
    auto* sub = add("experiment", "Random m-subset trials of mu_{k-1} against (1-eps) m");
    group_opt(sub);
    k_opt(sub);
    sub->add_option("--eps", p.eps, "Relative gap threshold in (0,1)")->required();
    auto* m_opt = sub->add_option("--m", p.m, "Subset size")->check(CLI::PositiveNumber);
    auto* am = sub->add_flag("--auto-m", p.auto_m, "Use ceil(9 k^2 ln D / eps^2), clamped to n");
    m_opt->excludes(am);
    sub->add_option("--trials", p.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    auto run = [&, m_opt] {
      if (m_opt->count() == 0 && !p.auto_m) throw Error(ErrorCode::InvalidArgument, "one of --m or --auto-m is required");
      ExperimentConfig cfg;
      cfg.group_spec = p.group;
      cfg.k = p.k;
      cfg.eps = p.eps;
      if (m_opt->count() > 0) cfg.m = p.m;
      cfg.trials = p.trials;
      cfg.seed = g.seed;
      cfg.threads = g.threads;
      return run_experiment(cfg);
    };
    commands["experiment"].run_json = [run] { return to_json(run()); };
    commands["experiment"].run_text = [run, &g](const RunManifest& manifest) {
      const auto res = run();
      // CSV has no room for the manifest; it goes next to the file.
      if (!g.out.empty() && g.out != "-") {
        Json mj = manifest.to_json();
        mj["warnings"] = res.warnings;
        write_output(g.out + ".manifest.json", dump_stable(mj), std::cerr);
      }
      return experiment_csv(res);
    };
  }

  auto report_error = [&err](const std::string& code, const std::string& detail) {
    err << Json{{"error", code}, {"detail", detail}}.dump() << "\n";
  };

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error("UsageError", e.what());
    err << app.help();
    return kExitValidation;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen->get_help_ptr() != nullptr && chosen->get_help_ptr()->count() > 0) {
    out << chosen->help();
    return kExitOk;
  }
  const std::string name = chosen->get_name();
  Command& cmd = commands.at(name);

  try {
    RunManifest manifest;
    manifest.config = config_echo(*chosen, g);
    manifest.command = reproduction_command(name, manifest.config);
    manifest.group = p.group;
    const auto start = std::chrono::steady_clock::now();
    std::string text;
    if (g.format == "json") {
      Json report = cmd.run_json();
      manifest.timing["total"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      report["manifest"] = manifest.to_json();
      text = dump_stable(report);
    } else {
      if (!cmd.run_text) require_json(g, name);
      text = cmd.run_text(manifest);
    }
    write_output(g.out, text, out);
    return kExitOk;
  } catch (const ValidationFailure& v) {
    report_error(std::string(to_string(v.error.code())), v.error.detail());
    return kExitValidation;
  } catch (const Error& e) {
    report_error(std::string(to_string(e.code())), e.detail());
    return is_computational(e.code()) ? kExitComputational : kExitValidation;
  } catch (const std::exception& e) {
    report_error("Internal", e.what());
    return kExitComputational;
  }
}

}  // namespace cayspec::cli
