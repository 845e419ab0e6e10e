// Command-line driver: cardinality tables, error sweeps, sparse detection and
// direct access to lattices, frequency sets and coefficient tables.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlfft/tlfft.hpp"

using namespace tlfft;

namespace {

struct Options {
  std::string config;
  std::string transform = "algebraic";
  std::string c = "1";
  std::string set = "hc";
  double beta = 0.95;
  std::string p = "2";
  std::size_t d = 2;
  double N = 4;
  int nmin = 2;
  int nmax = 0;
  std::string mode = "plain";
  double q = 2, alpha = 1, gamma = 1;
  std::string lattice = "single";
  double mrl_c = 30, mrl_n = 30, mrl_delta = 0.5;
  std::size_t sparsity = 100;
  double threshold = 1e-6;
  int rounds = 1;
  std::int64_t kmax = 32;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string experiment = "sweep";
  std::string out, svg;
  bool json_out = false;
  bool timing = false;
};

double parse_real(const std::string& s) {
  if (s == "inf" || s == "infinity") return INFINITY;
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) throw InputError("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) v.push_back(parse_real(item));
  if (v.empty()) throw InputError("empty list");
  return v;
}

TransformD make_transform(const Options& o) {
  const auto kind = parse_transform_kind(o.transform);
  const auto cs = parse_list(o.c);
  if (cs.size() == 1) return TransformD::uniform(kind, cs[0], o.d);
  if (cs.size() != o.d) throw InputError("--c needs one value or exactly d values");
  std::vector<Transform1D> comps;
  for (double c : cs) comps.emplace_back(kind, c);
  return TransformD(comps);
}

SetKind set_kind(const std::string& s) {
  if (s == "hc") return SetKind::hc;
  if (s == "lp") return SetKind::lp;
  if (s == "grid") return SetKind::grid;
  throw InputError("unknown set '" + s + "'");
}

double set_param(const Options& o) { return set_kind(o.set) == SetKind::lp ? parse_real(o.p) : o.beta; }

SmoothingMode::Kind mode_kind(const std::string& s) {
  if (s == "plain") return SmoothingMode::Kind::plain;
  if (s == "fejer") return SmoothingMode::Kind::fejer;
  if (s == "riesz") return SmoothingMode::Kind::riesz;
  throw InputError("unknown mode '" + s + "'");
}

MultipleSearchOptions multiple_options(const Options& o) {
  MultipleSearchOptions m;
  m.c_param = o.mrl_c;
  m.n_param = o.mrl_n;
  m.delta = o.mrl_delta;
  m.seed = derive_seed(o.seed, "cli/multiple");
  return m;
}

// Writes to --out when given, otherwise to stdout.
template <class F>
void emit(const Options& o, F&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot open " + o.out);
  write(f);
}

void warn_size_bound(const FrequencySet& I) {
  if (!size_bound_hypothesis(I))
    std::cerr << "warning: |I| <= 8 or max|k| > |I|; the M <= |I|^2 size bound is not guaranteed\n";
}

int cmd_table1(const Options& o) {
  struct Row {
    std::string descriptor;
    std::size_t card = 0;
    std::int64_t M = 0;
  };
  std::vector<Row> rows;
  std::vector<FrequencySet> sets;
  for (double beta : {0.5, 1.0, 2.0}) sets.push_back(hyperbolic_cross(2, 4, beta));
  for (double p : {double(INFINITY), 10.0, 2.0, 1.0}) sets.push_back(lp_ball(2, 4, p));
  for (const auto& I : sets) {
    SearchStats stats;
    const auto lat = search_single(I, SingleSearchOptions{.seed = o.seed}, &stats);
    rows.push_back({I.descriptor()->describe(), I.size(), lat.size()});
    std::cerr << rows.back().descriptor << ": " << stats.candidates_tried << " sizes tried, M/|I| = "
              << static_cast<double>(lat.size()) / static_cast<double>(I.size()) << "\n";
  }
  emit(o, [&](std::ostream& os) {
    if (o.json_out) {
      json j = json::array();
      for (const auto& r : rows)
        j.push_back({{"descriptor", r.descriptor}, {"card_I", r.card}, {"M", r.M},
                     {"ratio", static_cast<double>(r.card) / static_cast<double>(r.M)}});
      os << j.dump(2) << "\n";
      return;
    }
    os << "descriptor,card_I,M,ratio\n";
    for (const auto& r : rows)
      os << csv_field(r.descriptor) << "," << r.card << "," << r.M << ","
         << format_double(static_cast<double>(r.card) / static_cast<double>(r.M)) << "\n";
  });
  return 0;
}

int cmd_sweep(const Options& o) {
  SweepSpec spec;
  spec.experiment = o.experiment;
  spec.transform = make_transform(o);
  spec.set = set_kind(o.set);
  spec.param = set_param(o);
  const int nmax = o.nmax > 0 ? o.nmax : default_nmax(o.d);
  if (o.nmin < 1 || o.nmin > nmax) throw InputError("need 1 <= nmin <= nmax");
  for (int n = o.nmin; n <= nmax; ++n) spec.levels.push_back(n);
  spec.mode = mode_kind(o.mode);
  spec.q = o.q;
  spec.alpha = o.alpha;
  spec.gamma = o.gamma;
  spec.lattice = o.lattice == "multiple" ? LatticeKind::multiple : LatticeKind::single;
  if (o.lattice != "single" && o.lattice != "multiple") throw InputError("unknown lattice '" + o.lattice + "'");
  spec.multiple = multiple_options(o);
  spec.seed = o.seed;
  spec.workers = o.workers;
  spec.timing = o.timing;
  const auto rows = run_sweep(spec, runge_sampler(), [](const ExperimentRecord& r) {
    std::cerr << r.descriptor << " |I|=" << r.card_I << " M=" << r.M << " rel_err=" << r.rel_err
              << (r.error.empty() ? "" : " error: " + r.error) << "\n";
  });
  emit(o, [&](std::ostream& os) {
    if (o.json_out) {
      json j = json::array();
      for (const auto& r : rows) j.push_back(to_json(r));
      os << j.dump(2) << "\n";
    } else {
      write_csv(os, rows);
    }
  });
  if (!o.svg.empty()) {
    std::ofstream f(o.svg, std::ios::binary);
    if (!f) throw InputError("cannot open " + o.svg);
    f << render_svg(rows, spec.experiment + " " + describe(spec.transform));
  }
  const auto fit = fit_loglog_slope(rows);
  std::cerr << "slope vs N: " << fit.slope << " over " << fit.used << " rows\n";
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.verified || !r.error.empty();
  if (failed == rows.size()) return 1;
  return failed ? 2 : 0;
}

int cmd_sparse(const Options& o) {
  SparseConfig cfg;
  cfg.d = o.d;
  cfg.N = static_cast<std::int64_t>(std::llround(o.N));
  cfg.s = o.sparsity;
  cfg.threshold_rel = o.threshold;
  cfg.seed = o.seed;
  cfg.detection_rounds = o.rounds;
  const auto res = detect(runge_sampler(), make_transform(o), cfg);
  for (const auto& st : res.steps)
    std::cerr << "step " << st.dims << ": " << st.candidates << " candidates, M=" << st.M << ", " << st.detected
              << " kept\n";
  json report{{"d", cfg.d},
              {"N", cfg.N},
              {"sparsity", cfg.s},
              {"threshold", cfg.threshold_rel},
              {"seed", cfg.seed},
              {"support_size", res.support.size()},
              {"total_samples", res.total_samples}};
  json steps = json::array();
  for (const auto& st : res.steps)
    steps.push_back({{"dims", st.dims}, {"candidates", st.candidates}, {"M", st.M}, {"detected", st.detected}});
  report["steps"] = steps;
  report["coefficients"] = to_json(res.coeffs);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw InputError("cannot open " + o.out);
    write_csv(f, res.coeffs);
  }
  std::cout << report.dump(o.json_out ? 2 : -1) << "\n";
  return 0;
}

int cmd_lattice(const Options& o) {
  const auto I = make_set(set_kind(o.set), o.d, o.N, set_param(o));
  warn_size_bound(I);
  json j{{"descriptor", I.descriptor()->describe()}, {"card_I", I.size()}};
  if (o.lattice == "multiple") {
    const auto m = search_multiple(I, multiple_options(o));
    std::cerr << m.components.size() << " components, sum M/|I| = "
              << static_cast<double>(m.total_size()) / static_cast<double>(I.size()) << "\n";
    j["lattice"] = to_json(m);
    j["M"] = m.total_size();
    j["verification"] = m.covers_all();
  } else if (o.lattice == "single") {
    SearchStats stats;
    const auto lat = search_single(I, SingleSearchOptions{.seed = o.seed}, &stats);
    std::cerr << stats.candidates_tried << " sizes tried, " << stats.z_trials
              << " generator trials, M/|I| = " << static_cast<double>(lat.size()) / static_cast<double>(I.size())
              << "\n";
    j["lattice"] = to_json(lat);
    j["M"] = lat.size();
    j["verification"] = is_reconstructing(lat, I);
  } else {
    throw InputError("unknown lattice '" + o.lattice + "'");
  }
  emit(o, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  return j["verification"].get<bool>() ? 0 : 1;
}

int cmd_freqset(const Options& o) {
  const auto I = make_set(set_kind(o.set), o.d, o.N, set_param(o));
  std::cerr << I.descriptor()->describe() << ": " << I.size() << " frequencies\n";
  emit(o, [&](std::ostream& os) {
    if (o.json_out)
      os << to_json(I).dump(2) << "\n";
    else
      write_csv(os, I);
  });
  return 0;
}

int cmd_coeffs(const Options& o) {
  const auto cs = parse_list(o.c);
  if (cs.size() != 1) throw InputError("coeffs takes a single --c");
  const auto rows = oracle_table(Transform1D(parse_transform_kind(o.transform), cs[0]), o.kmax);
  double worst = 0;
  for (const auto& r : rows) worst = std::max(worst, r.abs_diff);
  std::cerr << "max |exact - quadrature| = " << worst << "\n";
  emit(o, [&](std::ostream& os) {
    if (o.json_out) {
      json j = json::array();
      for (const auto& r : rows)
        j.push_back({{"k", r.k}, {"exact", r.exact}, {"quadrature", r.quadrature}, {"abs_diff", r.abs_diff}});
      os << j.dump(2) << "\n";
    } else {
      write_csv(os, rows);
    }
  });
  return 0;
}

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + json_scalar(e);
    return s;
  }
  return v.dump();
}

// Fills options not given on the command line from the config document.
void apply_config(CLI::App& sub, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open config " + path);
  const auto doc = json::parse(f);
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw InputError("config key '" + key + "' is not an option of this command");
    }
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      if (value.is_boolean() && !value.get<bool>()) continue;
      opt->add_result(std::string("true"));
    } else {
      opt->add_result(json_scalar(value));
    }
    opt->run_callback();
  }
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "JSON file of option values; flags win");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--out", o.out, "output file instead of stdout");
  sub->add_flag("--json", o.json_out, "JSON output");
}

void add_transform(CLI::App* sub, Options& o) {
  sub->add_option("--transform", o.transform, "algebraic|logarithmic|error|tangens");
  sub->add_option("--c", o.c, "transform parameter, or one per dimension");
}

void add_set(CLI::App* sub, Options& o, bool level) {
  sub->add_option("--set", o.set, "hc|lp|grid");
  sub->add_option("--beta", o.beta, "hyperbolic cross exponent");
  sub->add_option("--p", o.p, "lp norm index (inf allowed)");
  sub->add_option("--d", o.d, "dimension");
  if (level) sub->add_option("--N", o.N, "set level");
}

void add_lattice(CLI::App* sub, Options& o) {
  sub->add_option("--lattice", o.lattice, "single|multiple");
  sub->add_option("--mrl-c", o.mrl_c, "multiple lattice constant c");
  sub->add_option("--mrl-n", o.mrl_n, "multiple lattice constant n");
  sub->add_option("--mrl-delta", o.mrl_delta, "multiple lattice failure probability");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transformed rank-1 lattice FFT toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* table1 = app.add_subcommand("table1", "cardinalities and lattice sizes for d=2, N=4");
  add_common(table1, o);

  auto* sweep = app.add_subcommand("sweep", "relative error over a range of levels N");
  add_common(sweep, o);
  add_transform(sweep, o);
  add_set(sweep, o, false);
  add_lattice(sweep, o);
  sweep->add_option("--nmin", o.nmin, "first level");
  sweep->add_option("--nmax", o.nmax, "last level (default depends on d)");
  sweep->add_option("--mode", o.mode, "plain|fejer|riesz");
  sweep->add_option("--q", o.q, "smoothing norm index");
  sweep->add_option("--alpha", o.alpha, "Riesz exponent");
  sweep->add_option("--gamma", o.gamma, "Riesz inner exponent");
  sweep->add_option("--svg", o.svg, "log-log plot");
  sweep->add_option("--experiment", o.experiment, "experiment id");
  sweep->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  sweep->add_flag("--timing", o.timing, "record wall seconds");

  auto* sparse = app.add_subcommand("sparse", "detect a sparse support of the Runge product");
  add_common(sparse, o);
  add_transform(sparse, o);
  sparse->add_option("--d", o.d, "dimension");
  sparse->add_option("--N", o.N, "search grid [-N, N]^d");
  sparse->add_option("--sparsity", o.sparsity, "maximal support size");
  sparse->add_option("--threshold", o.threshold, "relative detection threshold");
  sparse->add_option("--rounds", o.rounds, "detection rounds");

  auto* lattice = app.add_subcommand("lattice", "search a reconstructing lattice");
  add_common(lattice, o);
  add_set(lattice, o, true);
  add_lattice(lattice, o);

  auto* freqset = app.add_subcommand("freqset", "list a frequency set");
  add_common(freqset, o);
  add_set(freqset, o, true);

  auto* coeffs = app.add_subcommand("coeffs", "closed-form against quadrature coefficients of 1-D Runge");
  add_common(coeffs, o);
  add_transform(coeffs, o);
  coeffs->add_option("--kmax", o.kmax, "largest |k|");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!o.config.empty()) apply_config(*sub, o.config);
    if (sub == table1) return cmd_table1(o);
    if (sub == sweep) return cmd_sweep(o);
    if (sub == sparse) return cmd_sparse(o);
    if (sub == lattice) return cmd_lattice(o);
    if (sub == freqset) return cmd_freqset(o);
    return cmd_coeffs(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
