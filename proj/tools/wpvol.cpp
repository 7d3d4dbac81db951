// Command-line front end for the wpvol library.

#include "wpvol/acceptance.hpp"
#include "wpvol/bounds.hpp"
#include "wpvol/geodesics.hpp"
#include "wpvol/report.hpp"
#include "wpvol/trace.hpp"
#include "wpvol/volume.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace wpvol;

enum Exit : int {
  kOk = 0,
  kFailed = 1,  // a check or the verify suite reported a failure
  kUsage = 2,
  kBudget = 3,
  kIntegrity = 4,
  kTolerance = 5,
};

enum class Out { kText, kCsv, kJson };

struct Globals {
  std::string out = "text";
  std::string cache_path;
  int precision = static_cast<int>(kDefaultPrecision);
  std::uint64_t seed = 1;
  int max_g = 10;
  int max_n = 6;
  std::size_t max_cache_entries = 10'000'000;
  double max_wall = 0.0;  // seconds, 0 = unlimited

  Out mode() const {
    if (out == "csv") return Out::kCsv;
    if (out == "json") return Out::kJson;
    return Out::kText;
  }
  Budget budget() const {
    Budget b;
    b.max_g = max_g;
    b.max_n = max_n;
    b.max_cache_entries = max_cache_entries;
    if (max_wall > 0.0) {
      b.max_wall = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(max_wall));
    }
    return b;
  }
};

std::string mpfr_string(const Interval& v) { return format_double(v.mid()); }

std::string float_of(const Pi2Scalar& v) { return format_double(v.to_double()); }

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << '\n'; }

void emit_table(const Table& t, Out mode) {
  if (mode == Out::kJson) {
    std::cout << t.to_json().dump(2) << '\n';
  } else {
    std::cout << t.to_csv();
  }
}

void emit_report(const SweepReport& r, Out mode) {
  if (mode == Out::kJson) {
    std::cout << r.to_json().dump(2) << '\n';
  } else {
    std::cout << r.to_csv();
  }
}

std::vector<double> parse_grid(const std::string& spec) {
  // start:stop:step
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() != 3) throw std::invalid_argument("grid must be start:stop:step");
  return uniform_grid(parts[0], parts[1], parts[2]);
}

std::vector<std::pair<int, int>> parse_types(const std::vector<std::string>& items) {
  std::vector<std::pair<int, int>> types;
  for (const auto& it : items) {
    const auto colon = it.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("type must be g:n, got '" + it + "'");
    types.emplace_back(std::stoi(it.substr(0, colon)), std::stoi(it.substr(colon + 1)));
  }
  return types;
}

std::vector<Rational> parse_lengths(const std::vector<std::string>& items) {
  std::vector<Rational> out;
  for (const auto& s : items) out.push_back(quantize_length(s));
  return out;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot read " + path);
  return nlohmann::json::parse(is);
}

// ---------------------------------------------------------------------------

int cmd_tau(const IntersectionEngine& engine, Out mode, int g, int n, std::vector<int> d) {
  if (d.empty()) d.assign(static_cast<std::size_t>(n), 0);
  if (static_cast<int>(d.size()) != n) throw std::invalid_argument("--d must list exactly n indices");
  const Pi2Scalar v = engine.tau(g, n, d);
  switch (mode) {
    case Out::kText: std::cout << v.to_string() << '\n'; break;
    case Out::kCsv: {
      Table t;
      t.columns = {"g", "n", "d", "value", "value_float"};
      t.add_row({std::to_string(g), std::to_string(n), format_index(d), v.to_string(), float_of(v)});
      emit_table(t, mode);
      break;
    }
    case Out::kJson:
      print_json({{"g", g}, {"n", n}, {"d", d}, {"value", v.to_json()}, {"exact", v.to_string()},
                  {"float", float_of(v)}});
      break;
  }
  return kOk;
}

int cmd_volume(const IntersectionEngine& engine, Out mode, int g, int n) {
  const Pi2Scalar v = volume_any(engine, g, n);
  switch (mode) {
    case Out::kText: std::cout << v.to_string() << '\n'; break;
    case Out::kCsv: {
      Table t;
      t.columns = {"g", "n", "volume", "volume_float"};
      t.add_row({std::to_string(g), std::to_string(n), v.to_string(), float_of(v)});
      emit_table(t, mode);
      break;
    }
    case Out::kJson:
      print_json({{"g", g}, {"n", n}, {"value", v.to_json()}, {"exact", v.to_string()}, {"float", float_of(v)}});
      break;
  }
  return kOk;
}

int cmd_volume_poly(const IntersectionEngine& engine, Out mode, int g, int n) {
  const VolumePolynomial p = volume_polynomial(engine, g, n);
  if (mode == Out::kJson) {
    std::cout << p.to_json().dump(2) << '\n';
    return kOk;
  }
  Table t;
  t.columns = {"d", "coeff", "coeff_float"};
  for (const auto& [d, c] : p.coeffs()) t.add_row({format_index(d), c.to_string(), float_of(c)});
  emit_table(t, mode);
  return kOk;
}

int cmd_ratios(const IntersectionEngine& engine, Out mode, int gmax, int nmax) {
  const BandConstants k = BandConstants::compute();
  Table t;
  t.columns = {"g", "n", "ratio_exact", "ratio", "in_band"};
  for (int g = 1; g <= gmax; ++g) {
    for (int n = 0; n <= nmax; ++n) {
      if (2 * g - 2 + n <= 0) continue;
      Pi2Scalar num = volume_any(engine, g, n);
      num *= Rational(2 * g - 2 + n);
      const ExactRatio r = divide_by(num, volume(engine, g, n + 1));
      const Interval ri = r.enclose();
      const bool in = certainly_less(k.b0, ri) && certainly_less(ri, k.b1);
      t.add_row({std::to_string(g), std::to_string(n), r.to_string(), mpfr_string(ri), in ? "true" : "false"});
    }
  }
  emit_table(t, mode);
  return kOk;
}

struct SweepArgs {
  std::string check = "monotonicity";
  int gmin = 0;
  int gmax = 5;
  int nmin = 1;
  int nmax = 3;
  int k = 1;
  std::string c;
  std::vector<std::string> types;
  std::string grid = "0:20:0.5";
  std::vector<int> ns = {0, 1, 2};
};

int cmd_bounds_sweep(const IntersectionEngine& engine, Out mode, const SweepArgs& a) {
  const KeySweep sweep{a.gmin, a.gmax, a.nmin, a.nmax};
  std::optional<Interval> c;
  if (!a.c.empty()) c = Interval(parse_rational(a.c));
  std::vector<std::pair<int, int>> types = parse_types(a.types);
  if (types.empty()) {
    for (int g = 2; g <= 6; ++g) {
      for (int n = 1; n <= 2; ++n) types.emplace_back(g, n);
    }
  }
  SweepReport r;
  if (a.check == "monotonicity") {
    r = monotonicity_sweep(engine, sweep);
  } else if (a.check == "decay") {
    r = decay_sweep(engine, sweep, c);
  } else if (a.check == "inup") {
    r = estimate_inup_constant(engine, sweep);
  } else if (a.check == "volume-decay") {
    r = check_volume_decay(engine, a.k, types, parse_grid(a.grid));
  } else if (a.check == "sum-products") {
    r = check_sum_products(engine, a.gmax);
  } else if (a.check == "band") {
    r = band_sweep(engine, a.gmax, a.nmax);
  } else if (a.check == "ratio-trend") {
    r = ratio_trend(engine, a.ns, 2, a.gmax);
  } else if (a.check == "genus-shift") {
    r = genus_shift_trend(engine, a.ns, 3, a.gmax);
  } else if (a.check == "sinh") {
    r = sinh_sweep(engine, types, parse_grid(a.grid));
  } else {
    throw std::invalid_argument("unknown check '" + a.check + "'");
  }
  emit_report(r, mode);
  return r.passed ? kOk : kFailed;
}

int cmd_expect(const IntersectionEngine& engine, Out mode, int g, const std::vector<std::string>& Ls,
               std::optional<double> eps) {
  ExpectationEngine ee(engine);
  Table t;
  t.columns = {"g", "L", "e_nsep_exact", "e_nsep", "e_sep_upper", "e_sep_exactconst", "y1", "y2_upper", "li_half"};
  if (eps) t.columns.push_back("chebyshev");
  for (const Rational& L : parse_lengths(Ls)) {
    const ExpectationRecord r = ee.record(g, L);
    std::vector<std::string> row = {std::to_string(g),
                                    to_string(L),
                                    r.e_nsep.to_string(),
                                    format_double(r.e_nsep.to_double()),
                                    format_double(r.e_sep_upper.to_double()),
                                    format_double(r.e_sep_exactconst.to_double()),
                                    format_double(r.y1.to_double()),
                                    format_double(r.y2_upper.to_double()),
                                    format_double(r.li_half)};
    if (eps) {
      const ChebyshevResult c = ee.chebyshev_bound(g, L, *eps);
      row.push_back(c.clamped ? "clamped" : format_double(c.value));
    }
    t.add_row(std::move(row));
  }
  emit_table(t, mode);
  return kOk;
}

int cmd_crossover(const IntersectionEngine& engine, Out mode, int g, const std::vector<std::string>& Ls) {
  ExpectationEngine ee(engine);
  std::vector<Rational> grid;
  if (Ls.empty()) {
    for (int i = 1; i <= 26; ++i) grid.emplace_back(i, 2);
  } else {
    grid = parse_lengths(Ls);
  }
  emit_table(crossover_report(g, ee.crossover_table(g, grid)), mode);
  return kOk;
}

struct PgtArgs {
  std::string spectrum;
  std::string spectral;
  std::vector<double> t = {100.0, 1000.0};
  std::optional<double> pa_A;
  std::vector<double> pa_grid = {0.0, 1.0, 2.0, 5.0, 10.0};
  std::optional<double> trace_T;
  double trace_eps = 0.1;
};

int cmd_pgt(Out mode, const PgtArgs& a) {
  const LengthSpectrum spec = LengthSpectrum::from_json(read_json(a.spectrum));
  SpectralData sd;
  if (!a.spectral.empty()) sd = SpectralData::from_json(read_json(a.spectral));
  SweepReport rep;
  rep.name = "pgt";
  rep.table.columns = {"t", "pi_t", "li_t", "small_sum", "er", "er_minus_small", "envelope_3_4", "envelope_5_6",
                       "H", "psi", "nu"};
  for (double t : a.t) {
    const PgtError e = pgt_error(spec, sd, t);
    const GeometricSums s = geometric_sums(spec, std::log(t));
    rep.table.add_row({format_double(t), format_double(e.pi_t), format_double(e.li_t), format_double(e.small_sum),
                       format_double(e.er), format_double(e.er_minus_small), format_double(e.envelope_3_4),
                       format_double(e.envelope_5_6), format_double(s.H), format_double(s.psi),
                       format_double(s.nu)});
  }
  rep.note("genus", std::to_string(spec.genus));
  rep.note("primitives", std::to_string(spec.entries.size()));
  rep.note("systole", format_double(spec.systole()));
  if (a.pa_A) {
    const PAResult pa = condition_PA(sd, spec.genus, *a.pa_A, a.pa_grid);
    rep.note("PA_A", format_double(*a.pa_A));
    rep.note("PA_holds", pa.holds ? "true" : "false");
    rep.note("PA_worst_T", format_double(pa.worst_T));
    rep.note("PA_worst_ratio", format_double(pa.worst_ratio));
    rep.passed = pa.holds;
  }
  if (a.trace_T) {
    const TraceBalance tb =
        trace_balance(sd, spec, spec.genus, *a.trace_T, a.trace_eps, BumpFamily::smoothing());
    rep.note("trace_T", format_double(*a.trace_T));
    rep.note("trace_eps", format_double(a.trace_eps));
    rep.note("trace_spectral", format_double(tb.spectral));
    rep.note("trace_spectral_tail_bound", format_double(tb.spectral_tail_bound));
    rep.note("trace_identity", format_double(tb.identity));
    rep.note("trace_geometric", format_double(tb.geometric));
    rep.note("trace_residual", format_double(tb.residual));
    for (const auto& w : tb.warnings) rep.note("warning", w);
  }
  emit_report(rep, mode);
  return kOk;
}

int cmd_spectrum_gen(Out mode, const SyntheticOptions& opt) {
  const LengthSpectrum s = synthetic_spectrum(opt);
  if (mode == Out::kCsv) {
    Table t;
    t.columns = {"length", "multiplicity"};
    for (const auto& [l, m] : s.entries) t.add_row({format_double(l), std::to_string(m)});
    std::cout << "# synthetic: Poisson model with unoriented density e^l/(2l)\n";
    emit_table(t, mode);
  } else {
    nlohmann::ordered_json j;
    j["synthetic"] = true;
    j["seed"] = opt.seed;
    const nlohmann::json body = s.to_json();
    j["genus"] = body["genus"];
    j["entries"] = body["entries"];
    std::cout << j.dump(2) << '\n';
  }
  return kOk;
}

int cmd_verify(const IntersectionEngine& engine, Out mode, const std::string& suite, std::uint64_t seed) {
  AcceptanceOptions opt;
  opt.seed = seed;
  const AcceptanceReport rep = run_suite(suite, engine, opt);
  if (mode == Out::kJson) {
    print_json(rep.to_json());
  } else if (mode == Out::kCsv) {
    Table t;
    t.columns = {"criterion", "title", "passed", "facts"};
    for (const auto& c : rep.criteria) {
      std::string facts;
      for (const auto& [k, v] : c.facts) facts += (facts.empty() ? "" : "; ") + k + "=" + v;
      t.add_row({std::to_string(c.id), c.title, c.passed ? "true" : "false", facts});
    }
    emit_table(t, mode);
  } else {
    std::cout << rep.to_text();
  }
  return rep.passed() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weil-Petersson volumes, intersection numbers, geodesic counts and trace-formula tools"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals gl;
  app.add_option("--out", gl.out, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
  app.add_option("--cache", gl.cache_path, "Cache file: loaded if present, saved on exit");
  app.add_option("--precision", gl.precision, "Interval precision in bits")->check(CLI::Range(53, 4096));
  app.add_option("--seed", gl.seed, "Seed for random sweeps and synthetic spectra");
  app.add_option("--max-g", gl.max_g, "Largest admitted genus");
  app.add_option("--max-n", gl.max_n, "Largest admitted number of boundaries");
  app.add_option("--max-cache-entries", gl.max_cache_entries, "Cache size limit");
  app.add_option("--max-wall", gl.max_wall, "Wall-time limit per command in seconds (0 = none)");

  int g = 0;
  int n = 0;
  std::vector<int> d;
  auto* tau = app.add_subcommand("tau", "Intersection number [tau_d]_{g,n}");
  tau->add_option("--g", g)->required();
  tau->add_option("--n", n)->required();
  tau->add_option("--d", d, "Indices, comma separated (default all zero)")->delimiter(',');

  auto* vol = app.add_subcommand("volume", "V_{g,n}; n = 0 gives the closed volume");
  vol->add_option("--g", g)->required();
  vol->add_option("--n", n)->required();

  auto* poly = app.add_subcommand("volume-poly", "Coefficients of V_{g,n}(x) in the x_i^2");
  poly->add_option("--g", g)->required();
  poly->add_option("--n", n)->required();

  int gmax = 8;
  int nmax = 4;
  auto* ratios = app.add_subcommand("ratios", "(2g-2+n) V_{g,n} / V_{g,n+1} against the band");
  ratios->add_option("--gmax", gmax);
  ratios->add_option("--nmax", nmax);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("bounds-sweep", "Inequality sweeps");
  sweep->add_option("--check", sw.check)
      ->check(CLI::IsMember({"monotonicity", "decay", "inup", "volume-decay", "sum-products", "band", "ratio-trend",
                             "genus-shift", "sinh"}));
  sweep->add_option("--gmin", sw.gmin);
  sweep->add_option("--gmax", sw.gmax);
  sweep->add_option("--nmin", sw.nmin);
  sweep->add_option("--nmax", sw.nmax);
  sweep->add_option("--k", sw.k, "Decay order for volume-decay");
  sweep->add_option("--c", sw.c, "Decay constant override (rational)");
  sweep->add_option("--types", sw.types, "g:n pairs for volume-decay and sinh")->delimiter(',');
  sweep->add_option("--grid", sw.grid, "start:stop:step");
  sweep->add_option("--ns", sw.ns, "n values for the trends")->delimiter(',');

  std::vector<std::string> Ls;
  std::optional<double> eps;
  auto* expect = app.add_subcommand("expect", "Expected counts of geodesics of length <= L over M_g");
  expect->add_option("--g", g)->required();
  expect->add_option("--L", Ls, "Lengths, quantized to 1/100")->required()->delimiter(',');
  expect->add_option("--eps", eps, "Also report the Chebyshev bound");

  auto* cross = app.add_subcommand("crossover", "E[N_nsep] against Li(e^L)/2");
  cross->add_option("--g", g)->required();
  cross->add_option("--L", Ls, "Lengths (default 0.5..13 step 0.5)")->delimiter(',');

  PgtArgs pa;
  auto* pgt = app.add_subcommand("pgt", "Prime geodesic error terms on a length spectrum");
  pgt->add_option("--spectrum", pa.spectrum, "LengthSpectrum JSON")->required();
  pgt->add_option("--spectral", pa.spectral, "SpectralData JSON");
  pgt->add_option("--t", pa.t)->delimiter(',');
  pgt->add_option("--pa-A", pa.pa_A, "Check condition P_A with this A");
  pgt->add_option("--pa-grid", pa.pa_grid)->delimiter(',');
  pgt->add_option("--trace-T", pa.trace_T, "Trace-formula balance with window T");
  pgt->add_option("--trace-eps", pa.trace_eps);

  SyntheticOptions so;
  auto* gen = app.add_subcommand("spectrum-gen", "Synthetic length spectrum (Poisson model)");
  gen->add_option("--g", so.genus);
  gen->add_option("--lmin", so.min_length);
  gen->add_option("--lmax", so.max_length);
  gen->add_option("--bin", so.bin_width);

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Acceptance suite");
  verify->add_option("--suite", suite)->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const Out mode = gl.mode();
  std::shared_ptr<MemoCache> cache;
  bool save_cache = false;
  int status = kOk;
  try {
    set_working_precision(gl.precision);
    cache = std::make_shared<MemoCache>(gl.max_cache_entries);
    if (!gl.cache_path.empty() && std::filesystem::exists(gl.cache_path)) cache->load(gl.cache_path);
    save_cache = !gl.cache_path.empty();
    const IntersectionEngine engine(cache, gl.budget());
    so.seed = gl.seed;

    if (*tau) {
      status = cmd_tau(engine, mode, g, n, d);
    } else if (*vol) {
      status = cmd_volume(engine, mode, g, n);
    } else if (*poly) {
      status = cmd_volume_poly(engine, mode, g, n);
    } else if (*ratios) {
      status = cmd_ratios(engine, mode, gmax, nmax);
    } else if (*sweep) {
      status = cmd_bounds_sweep(engine, mode, sw);
    } else if (*expect) {
      status = cmd_expect(engine, mode, g, Ls, eps);
    } else if (*cross) {
      status = cmd_crossover(engine, mode, g, Ls);
    } else if (*pgt) {
      status = cmd_pgt(mode, pa);
    } else if (*gen) {
      status = cmd_spectrum_gen(mode, so);
    } else if (*verify) {
      status = cmd_verify(engine, mode, suite, gl.seed);
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kBudget;
  } catch (const IntegrityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIntegrity;
  } catch (const ToleranceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kTolerance;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    status = kUsage;
  }

  if (save_cache && cache) {
    try {
      cache->save(gl.cache_path);
    } catch (const std::exception& e) {
      std::cerr << "error: cannot save cache: " << e.what() << '\n';
      if (status == kOk) status = kFailed;
    }
  }
  return status;
}
