#pragma once

// Error sweeps over growing frequency sets, log-log slope fits and SVG plots.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tlfft/freqsets.hpp"
#include "tlfft/io.hpp"
#include "tlfft/lattice.hpp"
#include "tlfft/tfft.hpp"
#include "tlfft/transforms.hpp"

namespace tlfft {

enum class LatticeKind { single, multiple };

struct SweepSpec {
  std::string experiment = "sweep";
  TransformD transform = TransformD::uniform(TransformKind::algebraic, 1.0, 2);
  SetKind set = SetKind::hc;
  double param = 1.0;  ///< beta for hc, p for lp
  std::vector<double> levels;
  SmoothingMode::Kind mode = SmoothingMode::Kind::plain;
  double q = 2.0, alpha = 1.0, gamma = 1.0;
  LatticeKind lattice = LatticeKind::single;
  MultipleSearchOptions multiple{};
  SingleSearchOptions single{};
  std::uint64_t seed = 0;
  unsigned workers = 0;  ///< 0 picks hardware concurrency
  bool timing = false;   ///< keep wall seconds; off keeps output byte-stable
};

/// Default sweep maxima per dimension: 120, 60, 30, 18 for d = 2..5.
inline int default_nmax(std::size_t d) {
  switch (d) {
    case 1: return 240;
    case 2: return 120;
    case 3: return 60;
    case 4: return 30;
    case 5: return 18;
    default: return 8;
  }
}

inline std::string describe(const TransformD& t) {
  std::string out;
  const auto& c = t.components();
  const bool uniform = std::all_of(c.begin(), c.end(), [&](const Transform1D& x) { return x == c.front(); });
  for (std::size_t j = 0; j < (uniform ? 1 : c.size()); ++j) {
    if (j) out += ";";
    out += std::string(to_string(c[j].kind())) + "(c=" + format_double(c[j].c()) + ")";
  }
  return out;
}

inline FrequencySet make_set(SetKind kind, std::size_t d, double N, double param) {
  switch (kind) {
    case SetKind::hc: return hyperbolic_cross(d, N, param);
    case SetKind::lp: return lp_ball(d, N, param);
    case SetKind::grid: return full_grid(d, static_cast<std::int64_t>(N));
    case SetKind::custom: break;
  }
  throw InputError("sweeps need a generated set kind");
}

/// One sweep row at level N. Failures are recorded in the row, never thrown.
inline ExperimentRecord sweep_row(const SweepSpec& spec, const Sampler& h, double N) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.experiment = spec.experiment;
  rec.transform = describe(spec.transform);
  rec.d = spec.transform.dim();
  rec.N = N;
  rec.beta_or_p = spec.param;
  rec.seed = spec.seed;
  rec.lattice = spec.lattice == LatticeKind::single ? "single" : "multiple";
  SmoothingMode mode{spec.mode, spec.q, spec.alpha, spec.gamma, N};
  rec.mode = mode.name();
  try {
    const auto I = make_set(spec.set, rec.d, N, spec.param);
    rec.descriptor = I.descriptor()->describe();
    rec.card_I = I.size();
    ExperimentRecord r;
    if (spec.lattice == LatticeKind::single) {
      auto opt = spec.single;
      opt.seed = derive_seed(spec.seed, "lattice/single");
      r = roundtrip_error(h, I, search_single(I, opt), spec.transform, mode);
    } else {
      auto opt = spec.multiple;
      opt.seed = derive_seed(spec.seed, "lattice/multiple/" + format_double(N));
      r = roundtrip_error_multiple(h, I, search_multiple(I, opt), spec.transform, mode);
    }
    rec.M = r.M;
    rec.abs_err = r.abs_err;
    rec.rel_err = r.rel_err;
    rec.rel_defined = r.rel_defined;
    rec.verified = r.verified;
  } catch (const std::exception& e) {
    rec.verified = false;
    rec.error = e.what();
  }
  rec.seconds = spec.timing ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() : 0.0;
  return rec;
}

/// Runs all levels on a small worker pool; rows come back in level order.
inline std::vector<ExperimentRecord> run_sweep(const SweepSpec& spec, const Sampler& h,
                                               const std::function<void(const ExperimentRecord&)>& progress = {}) {
  const std::size_t n = spec.levels.size();
  std::vector<ExperimentRecord> rows(n);
  unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
  if (!h.concurrent) workers = 1;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      rows[i] = sweep_row(spec, h, spec.levels[i]);
      if (progress) progress(rows[i]);
    }
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) rows[i] = sweep_row(spec, h, spec.levels[i]);
    });
  pool.clear();
  if (progress)
    for (const auto& r : rows) progress(r);
  return rows;
}

struct SlopeFit {
  double slope = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
};

/// Least-squares fit of log(rel_err) against log(x) where x is N or |I|.
/// Rows that failed, were not verified, or have no positive error are skipped.
inline SlopeFit fit_loglog_slope(const std::vector<ExperimentRecord>& rows, bool against_card = false) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  SlopeFit fit;
  for (const auto& r : rows) {
    if (!r.error.empty() || !r.verified || !r.rel_defined || !(r.rel_err > 0.0)) continue;
    const double x = std::log(against_card ? static_cast<double>(r.card_I) : r.N), y = std::log(r.rel_err);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++fit.used;
  }
  if (fit.used < 2) return fit;
  const double n = static_cast<double>(fit.used);
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

/// Log-log plot of rel_err against |I|; unverified rows are drawn hollow.
inline std::string render_svg(const std::vector<ExperimentRecord>& rows, const std::string& title) {
  const double W = 640, H = 440, L = 70, R = 20, T = 40, B = 50;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& r : rows) {
    if (!r.error.empty() || !(r.rel_err > 0.0) || r.card_I == 0) continue;
    xmin = std::min(xmin, std::log10(static_cast<double>(r.card_I)));
    xmax = std::max(xmax, std::log10(static_cast<double>(r.card_I)));
    ymin = std::min(ymin, std::log10(r.rel_err));
    ymax = std::max(ymax, std::log10(r.rel_err));
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
     << title << "</text>\n";
  if (!(xmin <= xmax)) return os.str() + "</svg>\n";
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);
  auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };
  os << "<g stroke=\"#ccc\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double e = xmin; e <= xmax; e += 1)
    os << "<line x1=\"" << px(e) << "\" y1=\"" << T << "\" x2=\"" << px(e) << "\" y2=\"" << H - B << "\"/>"
       << "<text x=\"" << px(e) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" stroke=\"none\">1e"
       << e << "</text>\n";
  for (double e = ymin; e <= ymax; e += 1)
    os << "<line x1=\"" << L << "\" y1=\"" << py(e) << "\" x2=\"" << W - R << "\" y2=\"" << py(e) << "\"/>"
       << "<text x=\"" << L - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\" stroke=\"none\">1e" << e
       << "</text>\n";
  os << "</g>\n<text x=\"" << W / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">|I|</text>\n"
     << "<text x=\"16\" y=\"" << H / 2 << "\" transform=\"rotate(-90 16 " << H / 2
     << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">relative error</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (const auto& r : rows)
    if (r.error.empty() && r.rel_err > 0.0)
      os << px(std::log10(static_cast<double>(r.card_I))) << "," << py(std::log10(r.rel_err)) << " ";
  os << "\"/>\n";
  for (const auto& r : rows)
    if (r.error.empty() && r.rel_err > 0.0)
      os << "<circle cx=\"" << px(std::log10(static_cast<double>(r.card_I))) << "\" cy=\""
         << py(std::log10(r.rel_err)) << "\" r=\"3\" stroke=\"#1f77b4\" fill=\""
         << (r.verified ? "#1f77b4" : "white") << "\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace tlfft
