// Copyright 2026 The catsize Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// catsize: command-line front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 invalid flags, 3 domain
// error, 4 oracle sizing or truncation limit, 5 file I/O.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "catsize/envelope.hpp"

namespace {

using catsize::CatStateSpec;
using catsize::Complex;
using catsize::Json;
using catsize::StateFamily;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kInvalid = 2, kDomain = 3, kSizing = 4, kIo = 5 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Flag parsing

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) {
    throw catsize::InvalidArgument("cannot parse " + what + " from '" + s + "'");
  }
  return v;
}

/// "RE" or "RE,IM".
Complex parse_complex(const std::string& s, const std::string& what) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) return {parse_double(s, what), 0.0};
  return {parse_double(s.substr(0, comma), what), parse_double(s.substr(comma + 1), what)};
}

struct GridSpec {
  double min = 0.0, max = 0.0;
  int steps = 0;
};

/// "min:max:steps"
GridSpec parse_grid(const std::string& s) {
  const auto a = s.find(':');
  const auto b = a == std::string::npos ? a : s.find(':', a + 1);
  if (b == std::string::npos) throw catsize::InvalidArgument("--grid expects min:max:steps");
  GridSpec g;
  g.min = parse_double(s.substr(0, a), "grid min");
  g.max = parse_double(s.substr(a + 1, b - a - 1), "grid max");
  const double steps = parse_double(s.substr(b + 1), "grid steps");
  if (!(g.max > g.min) || steps < 2 || steps != std::floor(steps) || steps > 1e5) {
    throw catsize::InvalidArgument("--grid needs min < max and an integer step count >= 2");
  }
  g.steps = static_cast<int>(steps);
  return g;
}

struct Slice {
  int mode = -1;  ///< fixed mode, 0-based
  Complex value;
};

/// "gammaK=RE[,IM]"
Slice parse_slice(const std::string& s) {
  const auto eq = s.find('=');
  if (s.rfind("gamma", 0) != 0 || eq == std::string::npos) {
    throw catsize::InvalidArgument("--slice expects gammaK=RE[,IM]");
  }
  const double k = parse_double(s.substr(5, eq - 5), "slice mode");
  if (k < 1 || k != std::floor(k)) throw catsize::InvalidArgument("slice mode index starts at 1");
  return {static_cast<int>(k) - 1, parse_complex(s.substr(eq + 1), "slice value")};
}

StateFamily parse_family(const std::string& s) {
  if (s == "omega") return StateFamily::kOmega;
  if (s == "hcs" || s == "hcs2") return StateFamily::kHcs;
  if (s == "even-cat") return StateFamily::kEvenCat;
  if (s == "odd-cat") return StateFamily::kOddCat;
  if (s == "product-coherent") return StateFamily::kProductCoherent;
  throw catsize::InvalidArgument("unknown state '" + s + "'");
}

catsize::GeneratorFamily parse_generators(const std::string& s) {
  using catsize::GeneratorKind;
  if (s == "all") {
    return catsize::GeneratorFamily::of({GeneratorKind::kBoundedLocal, GeneratorKind::kQuadrature,
                                         GeneratorKind::kNumber, GeneratorKind::kSpinSandwich});
  }
  catsize::GeneratorFamily f;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "bounded") f.kinds.push_back(GeneratorKind::kBoundedLocal);
    else if (item == "quadrature") f.kinds.push_back(GeneratorKind::kQuadrature);
    else if (item == "number") f.kinds.push_back(GeneratorKind::kNumber);
    else if (item == "spin-sandwich") f.kinds.push_back(GeneratorKind::kSpinSandwich);
    else throw catsize::InvalidArgument("unknown generator kind '" + item + "'");
  }
  if (f.kinds.empty()) throw catsize::InvalidArgument("--family is empty");
  return f;
}

catsize::CollapseProblem parse_problem(const std::string& s) {
  using catsize::CollapseProblem;
  if (s == "branch-vs-branch") return CollapseProblem::kBranchVsBranch;
  if (s == "cat-vs-mixed") return CollapseProblem::kCatVsMixed;
  if (s == "cat-vs-branch") return CollapseProblem::kCatVsBranch;
  throw catsize::InvalidArgument("unknown collapse problem '" + s + "'");
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw catsize::InvalidArgument(std::string(flag) + " is required for this measure");
  return *v;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------
// Flag storage

struct Globals {
  int threads = 0;
  std::uint64_t seed = 0;
  std::string out;
};

struct MeasureFlags {
  int modes = 1;
  std::string alpha;
  std::optional<double> delta, lambda;
  std::string family = "bounded";
  std::string state = "omega";
  bool no_oracle = false;
};

struct SimulateFlags {
  int modes = 1;
  std::string alpha;
  long trials = 10000;
  std::optional<double> lambda;
  std::string problem = "branch-vs-branch";
};

struct WignerFlags {
  std::string state = "even-cat";
  std::string alpha;
  std::optional<int> modes;
  std::string slice;
  std::string grid;
  std::string format = "csv";
  bool features = false;
};

// ---------------------------------------------------------------------------
// Commands

int run_measure(const std::string& sub, const MeasureFlags& f, const Globals& g,
                catsize::Envelope& env) {
  using catsize::Measure;
  CatStateSpec spec{parse_family(f.state), f.modes, parse_complex(f.alpha, "--alpha"), {}};
  spec.validate();
  Json& in = env.inputs();
  in["measure"] = sub;
  in["state"] = to_string(spec.family);
  in["modes"] = spec.modes;
  in["alpha"] = catsize::to_json(spec.alpha);

  catsize::MeasureResult r;
  if (sub == "branch-dist") {
    in["delta"] = require(f.delta, "--delta");
    r = catsize::branch_dist_size(spec, *f.delta);
  } else if (sub == "branch-dist-real") {
    in["delta"] = require(f.delta, "--delta");
    r = catsize::branch_dist_size_real(spec, *f.delta);
  } else if (sub == "rqfi") {
    const auto fam = parse_generators(f.family);
    in["family"] = fam.name();
    in["oracle_check"] = !f.no_oracle;
    catsize::RqfiOptions opt;
    opt.oracle_check = !f.no_oracle;
    r = catsize::rqfi_size(spec, fam, opt);
  } else if (sub == "marquardt") {
    in["oracle_check"] = !f.no_oracle;
    r = catsize::marquardt_size(spec, !f.no_oracle);
  } else if (sub == "distill") {
    r = catsize::distillation_size(spec);
  } else if (sub == "mode-loss") {
    in["lambda"] = require(f.lambda, "--lambda");
    r = catsize::mode_loss_size(spec, *f.lambda);
  } else if (sub == "wigner-empirical") {
    catsize::WignerEmpiricalOptions opt;
    opt.threads = g.threads;
    r = catsize::wigner_empirical_size(spec, opt);
  } else {
    throw catsize::InvalidArgument("unknown measure '" + sub + "'");
  }
  env.results() = catsize::to_json(r);
  return kOk;
}

catsize::Check within_3se(std::string name, double observed, double expected, double se) {
  return catsize::make_check(std::move(name), observed, expected, 3.0 * se);
}

double bernoulli_se(double p, long trials) { return std::sqrt(p * (1.0 - p) / trials); }

int run_simulate(const std::string& sub, const SimulateFlags& f, const Globals& g,
                 catsize::Envelope& env) {
  const Complex alpha = parse_complex(f.alpha, "--alpha");
  if (f.trials < 1) throw catsize::InvalidArgument("--trials must be >= 1");
  Json& in = env.inputs();
  in["simulation"] = sub;
  Json& res = env.results();
  if (sub == "distill") {
    in["modes"] = f.modes;
    in["alpha"] = catsize::to_json(alpha);
    in["trials"] = f.trials;
    in["seed"] = g.seed;
    const auto s = catsize::simulate_distillation(f.modes, alpha, f.trials, g.seed, g.threads);
    const double expected = catsize::distill_expected_n(f.modes, alpha);
    std::vector<double> pm;
    for (int m = 1; m <= f.modes; ++m) pm.push_back(catsize::distill_pm(m, f.modes, alpha));
    res["n"] = catsize::to_json(s.n);
    res["first_e1"] = s.first_e1;
    res["no_e1"] = s.no_e1;
    res["expected_mean"] = expected;
    res["first_e1_probability"] = pm;
    res["max_norm_deviation"] = s.max_norm_deviation;
    env.add_check(within_3se("mean-vs-closed-form", s.n.mean, expected, s.n.std_error));
    for (int m = 1; m <= std::min(3, f.modes); ++m) {
      const double freq = static_cast<double>(s.first_e1[m - 1]) / f.trials;
      env.add_check(within_3se("first-e1-at-" + std::to_string(m), freq, pm[m - 1],
                               bernoulli_se(pm[m - 1], f.trials)));
    }
  } else if (sub == "mode-loss") {
    const double lambda = require(f.lambda, "--lambda");
    in["modes"] = f.modes;
    in["alpha"] = catsize::to_json(alpha);
    in["lambda"] = lambda;
    in["trials"] = f.trials;
    in["seed"] = g.seed;
    const auto s = catsize::simulate_mode_loss(f.modes, alpha, lambda, f.trials, g.seed, g.threads);
    const double exact = catsize::mode_loss_offdiag_exact(f.modes, lambda, alpha);
    const double expected_loss = catsize::mode_loss_offdiag(f.modes, lambda, alpha);
    const double ghz = catsize::ghz_mode_loss_offdiag(f.modes, lambda);
    res["omega"] = catsize::to_json(s.omega);
    res["ghz"] = catsize::to_json(s.ghz);
    res["binomial_average"] = exact;
    res["expected_loss_form"] = expected_loss;
    res["ghz_reference"] = ghz;
    env.add_check(within_3se("omega-vs-binomial-average", s.omega.mean, exact, s.omega.std_error));
    env.add_check(within_3se("omega-vs-expected-loss-form", s.omega.mean, expected_loss,
                             s.omega.std_error));
    env.add_check(within_3se("ghz-vs-reference", s.ghz.mean, ghz, s.ghz.std_error));
  } else if (sub == "collapse") {
    const auto problem = parse_problem(f.problem);
    in["problem"] = f.problem;
    in["alpha"] = catsize::to_json(alpha);
    in["trials"] = f.trials;
    in["seed"] = g.seed;
    const auto s = catsize::simulate_branch_collapse(alpha, f.trials, g.seed, problem, g.threads);
    res["problem"] = to_string(s.problem);
    res["indicator"] = s.indicator;
    res["stats"] = catsize::to_json(s.stats);
    res["first_outcome_frequency"] = s.first_outcome_frequency;
    res["mean_fidelity_matched"] = s.mean_fidelity_matched;
    res["min_fidelity_matched"] = s.min_fidelity_matched;
    Json exact = Json::object();
    for (const auto& [k, v] : s.exact) exact[k] = v;
    res["born_probabilities"] = exact;
    if (problem == catsize::CollapseProblem::kCatVsBranch) {
      const auto ratio = [&](const char* hit, const char* miss) {
        const long a = s.stats.count(hit), b = s.stats.count(miss);
        return a + b > 0 ? Json(static_cast<double>(a) / static_cast<double>(a + b)) : Json(nullptr);
      };
      res["final_alpha_frequency"] = s.stats.mean;
      res["cat_outcome_frequency"] = s.first_outcome_frequency;
      res["final_alpha_given_cat_frequency"] = ratio("cat/alpha", "cat/-alpha");
      res["final_alpha_given_branch_frequency"] = ratio("branch/alpha", "branch/-alpha");
    }
    const double p = s.exact.at(s.indicator);
    env.add_check(within_3se(s.indicator + "-vs-born", s.stats.mean, p, bernoulli_se(p, f.trials)));
  } else {
    throw catsize::InvalidArgument("unknown simulation '" + sub + "'");
  }
  return kOk;
}

int run_wigner(const WignerFlags& f, const Globals& g, catsize::Envelope& env) {
  using catsize::diagonal_axis;
  using catsize::mode_axis;
  const StateFamily fam = parse_family(f.state);
  const Complex alpha = parse_complex(f.alpha, "--alpha");
  int modes = f.modes.value_or(fam == StateFamily::kHcs || fam == StateFamily::kOmega ? 2 : 1);
  if (f.state == "hcs2" && modes != 2) throw catsize::InvalidArgument("hcs2 has two modes");
  const CatStateSpec spec{fam, modes, alpha, {}};
  spec.validate();
  const GridSpec gs = parse_grid(f.grid);
  if (f.format != "csv" && f.format != "json") throw catsize::InvalidArgument("--format is csv or json");

  Json& in = env.inputs();
  in["state"] = f.state;
  in["modes"] = modes;
  in["alpha"] = catsize::to_json(alpha);
  in["grid"] = Json{{"min", gs.min}, {"max", gs.max}, {"steps", gs.steps}};

  Json slice_spec = Json::object();
  catsize::WignerGrid grid;
  if (!f.slice.empty()) {
    const Slice sl = parse_slice(f.slice);
    if (modes != 2 || sl.mode > 1) throw catsize::InvalidArgument("--slice needs a two-mode state");
    const int swept = 1 - sl.mode;
    in["slice"] = Json{{"fixed_mode", sl.mode + 1}, {"value", catsize::to_json(sl.value)}};
    slice_spec = Json{{"kind", "single-mode-plane"},
                      {"swept_mode", swept + 1},
                      {"fixed_mode", sl.mode + 1},
                      {"fixed_value", catsize::to_json(sl.value)}};
    if (fam == StateFamily::kHcs && sl.mode == 1) {
      grid = catsize::wigner_hcs2_slice(alpha, sl.value, gs.min, gs.max, gs.steps, g.threads);
    } else {
      std::vector<Complex> origin(2, 0.0);
      origin[sl.mode] = sl.value;
      grid = catsize::wigner_grid(spec, origin,
                                  {mode_axis(swept, 2, false, gs.min, gs.max, gs.steps),
                                   mode_axis(swept, 2, true, gs.min, gs.max, gs.steps)},
                                  g.threads);
    }
  } else if (modes == 1) {
    slice_spec = Json{{"kind", "single-mode-plane"}, {"swept_mode", 1}};
    grid = catsize::wigner_grid(spec, {0.0},
                                {mode_axis(0, 1, false, gs.min, gs.max, gs.steps),
                                 mode_axis(0, 1, true, gs.min, gs.max, gs.steps)},
                                g.threads);
  } else {
    const double phase = std::arg(alpha);
    slice_spec = Json{{"kind", "diagonal-plane"}, {"phase", phase}};
    grid = catsize::wigner_grid(spec, std::vector<Complex>(modes, 0.0),
                                {diagonal_axis(modes, false, gs.min, gs.max, gs.steps, phase),
                                 diagonal_axis(modes, true, gs.min, gs.max, gs.steps, phase)},
                                g.threads);
  }
  in["format"] = f.format;
  in["features"] = f.features;

  Json& res = env.results();
  res["convention"] = grid.convention;
  res["slice_spec"] = slice_spec;
  Json axes = Json::array();
  for (const auto& a : grid.axes) axes.push_back(catsize::to_json(a));
  res["axes"] = axes;
  res["points"] = grid.values.size();
  double lo = grid.values.front(), hi = grid.values.front();
  for (double v : grid.values) lo = std::min(lo, v), hi = std::max(hi, v);
  res["min_value"] = lo;
  res["max_value"] = hi;

  if (f.features) {
    const auto feats = catsize::extract_features(grid);
    Json fj = catsize::to_json(feats);
    std::optional<double> expected;
    for (const auto& a : grid.axes) {
      if (const auto w = catsize::expected_fringe_wavelength(grid, a)) {
        expected = expected ? std::min(*expected, *w) : *w;
      }
    }
    fj["expected_fringe_wavelength"] = expected ? Json(*expected) : Json(nullptr);
    if (!feats.peaks.empty()) {
      // The swept-plane origin is the grid point nearest the fixed origin.
      const double step = std::max(grid.axes[0].step(), grid.axes[1].step());
      const auto& top = feats.peaks.front().location;
      double dist2 = 0.0;
      for (std::size_t m = 0; m < top.size(); ++m) dist2 += std::norm(top[m] - grid.origin[m]);
      fj["top_peak_at_origin"] = std::sqrt(dist2) <= step;
    }
    res["features"] = fj;
  }
  if (!g.out.empty()) {
    std::ostringstream text;
    if (f.format == "csv") {
      catsize::write_csv(grid, text);
    } else {
      text << catsize::grid_to_json(grid, slice_spec).dump() << '\n';
    }
    write_file(g.out, text.str());
    res["grid_file"] = g.out;
  }
  return kOk;
}

int run_verify(const std::string& suite, const Globals& g, catsize::Envelope& env) {
  catsize::VerifyOptions opt;
  if (suite == "fast") opt.suite = catsize::Suite::kFast;
  else if (suite == "full") opt.suite = catsize::Suite::kFull;
  else throw catsize::InvalidArgument("--suite is fast or full");
  opt.seed = g.seed;
  opt.threads = g.threads;
  env.inputs()["suite"] = suite;
  env.inputs()["seed"] = g.seed;
  long passed = 0, failed = 0, skipped = 0;
  for (const auto& c : catsize::run_verify(opt)) {
    env.add_check(c);
    if (c.status == catsize::CheckStatus::kPass) ++passed;
    else if (c.status == catsize::CheckStatus::kFail) ++failed;
    else ++skipped;
  }
  env.results() = Json{{"suite", suite}, {"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  if (failed == 0) return kOk;
  for (const auto& c : env.checks()) {
    if (c.status == catsize::CheckStatus::kFail) {
      std::cerr << "catsize: check failed: " << c.name << (c.note.empty() ? "" : " (" + c.note + ")")
                << '\n';
    }
  }
  return kVerifyFailed;
}

std::string echo_command(int argc, char** argv) {
  std::string s = "catsize";
  for (int i = 1; i < argc; ++i) s += std::string(" ") + argv[i];
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cat-size measures, trajectory simulations and phase-space grids for "
               "photonic coherent-state superpositions."};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(catsize::kToolVersion));

  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", g.seed, "64-bit seed for Monte Carlo and random test points");
  app.add_option("--out", g.out, "Output file (grid for wigner, envelope otherwise)");

  // measure
  MeasureFlags mf;
  auto* measure = app.add_subcommand("measure", "Evaluate one cat-size measure");
  measure->require_subcommand(1);
  const char* measures[] = {"branch-dist", "branch-dist-real", "rqfi", "marquardt",
                            "distill",     "mode-loss",        "wigner-empirical"};
  for (const char* name : measures) {
    auto* s = measure->add_subcommand(name, std::string("Measure: ") + name);
    s->add_option("--modes", mf.modes, "Number of modes N")->check(CLI::PositiveNumber);
    s->add_option("--alpha", mf.alpha, "Coherent amplitude RE or RE,IM")->required();
    s->add_option("--state", mf.state, "omega | hcs | even-cat | odd-cat");
    if (std::string(name).starts_with("branch-dist")) {
      s->add_option("--delta", mf.delta, "Discrimination error budget in (0, 1/2)")->required();
    }
    if (std::string(name) == "mode-loss") {
      s->add_option("--lambda", mf.lambda, "Per-mode loss probability")->required();
    }
    if (std::string(name) == "rqfi") {
      s->add_option("--family", mf.family,
                    "Comma list of bounded, quadrature, number, spin-sandwich, or all");
    }
    if (std::string(name) == "rqfi" || std::string(name) == "marquardt") {
      s->add_flag("--no-oracle", mf.no_oracle, "Skip the joint Fock-space cross-check");
    }
  }

  // simulate
  SimulateFlags sf;
  auto* simulate = app.add_subcommand("simulate", "Run seeded Monte Carlo trajectories");
  simulate->require_subcommand(1);
  for (const char* name : {"distill", "mode-loss", "collapse"}) {
    auto* s = simulate->add_subcommand(name, std::string("Simulation: ") + name);
    s->add_option("--alpha", sf.alpha, "Coherent amplitude RE or RE,IM")->required();
    s->add_option("--trials", sf.trials, "Number of trajectories")->check(CLI::PositiveNumber);
    if (std::string(name) != "collapse") {
      s->add_option("--modes", sf.modes, "Number of modes N")->check(CLI::PositiveNumber);
    }
    if (std::string(name) == "mode-loss") {
      s->add_option("--lambda", sf.lambda, "Per-mode loss probability")->required();
    }
    if (std::string(name) == "collapse") {
      s->add_option("--problem", sf.problem, "branch-vs-branch | cat-vs-mixed | cat-vs-branch");
    }
  }

  // wigner
  WignerFlags wf;
  auto* wigner = app.add_subcommand("wigner", "Evaluate a Wigner function on a grid");
  wigner->add_option("--state", wf.state, "even-cat | odd-cat | omega | hcs2 | product-coherent");
  wigner->add_option("--alpha", wf.alpha, "Coherent amplitude RE or RE,IM")->required();
  wigner->add_option("--modes", wf.modes, "Number of modes")->check(CLI::PositiveNumber);
  wigner->add_option("--slice", wf.slice, "Fix one mode of a two-mode state: gammaK=RE[,IM]");
  wigner->add_option("--grid", wf.grid, "min:max:steps per axis")->required();
  wigner->add_option("--format", wf.format, "Grid file format: csv | json");
  wigner->add_flag("--features", wf.features, "Extract peaks, fringe wavelength and separation");

  // verify
  std::string suite = "fast";
  auto* verify = app.add_subcommand("verify", "Run the oracle cross-validation suite");
  verify->add_option("--suite", suite, "fast | full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  catsize::Envelope env(echo_command(argc, argv));
  int rc = kOk;
  try {
    if (measure->parsed()) {
      for (auto* s : measure->get_subcommands()) rc = run_measure(s->get_name(), mf, g, env);
    } else if (simulate->parsed()) {
      for (auto* s : simulate->get_subcommands()) rc = run_simulate(s->get_name(), sf, g, env);
    } else if (wigner->parsed()) {
      rc = run_wigner(wf, g, env);
    } else {
      rc = run_verify(suite, g, env);
    }
    const std::string text = env.finish().dump(2) + "\n";
    if (!g.out.empty() && !wigner->parsed()) write_file(g.out, text);
    std::cout << text;
  } catch (const catsize::InvalidArgument& e) {
    std::cerr << "catsize: invalid argument: " << e.what() << '\n';
    return kInvalid;
  } catch (const catsize::DomainError& e) {
    std::cerr << "catsize: domain error: " << e.what() << '\n';
    return kDomain;
  } catch (const catsize::SizingError& e) {
    std::cerr << "catsize: sizing limit: " << e.what() << '\n';
    return kSizing;
  } catch (const catsize::TruncationError& e) {
    std::cerr << "catsize: truncation limit: " << e.what() << " (tail mass " << e.tail_mass() << ")\n";
    return kSizing;
  } catch (const IoError& e) {
    std::cerr << "catsize: I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const catsize::Error& e) {
    std::cerr << "catsize: error: " << e.what() << '\n';
    return kDomain;
  }
  return rc;
}
