#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"
#include "tlfft/experiment.hpp"
#include "tlfft/io.hpp"

using namespace tlfft;

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(format_double(INFINITY), "inf");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
  EXPECT_EQ(format_double(NAN), "nan");
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(gen) * std::pow(10.0, i % 40 - 20);
    EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
  }
}

TEST(Json, TransformRoundTrip) {
  const TransformD T({Transform1D(TransformKind::algebraic, 0.3), Transform1D(TransformKind::error, 2)});
  EXPECT_EQ(transform_from_json(to_json(T)), T);
  const auto one = transform_from_json(json{{"kind", "tan"}, {"c", 1.5}}, 3);
  EXPECT_EQ(one, TransformD::uniform(TransformKind::tangens, 1.5, 3));
  EXPECT_THROW(transform_from_json(json{{"kind", "tan"}}), InputError);
  EXPECT_THROW(transform_from_json(to_json(T), 3), InputError);
}

TEST(Json, FrequencySetRoundTrip) {
  for (const auto& I : {hyperbolic_cross(2, 4, 0.95), lp_ball(3, 2, INFINITY), full_grid(2, 2),
                        FrequencySet::from_rows({{5, -7}, {0, 1}})}) {
    const auto back = frequency_set_from_json(json::parse(to_json(I).dump()));
    EXPECT_EQ(back.rows(), I.rows());
    EXPECT_EQ(back.descriptor().has_value(), I.descriptor().has_value());
    if (I.descriptor()) {
      const auto regen = frequency_set_from_json(json::parse(to_json(I, false).dump()));
      EXPECT_EQ(regen.rows(), I.rows());
    } else {
      EXPECT_THROW(frequency_set_from_json(json::parse(to_json(I, false).dump())), InputError);
    }
  }
  const auto lazy = to_json(full_grid(12, 4));
  EXPECT_EQ(lazy["cardinality"].get<std::uint64_t>(), 282429536481ull);
  EXPECT_EQ(to_json(lp_ball(2, 4, INFINITY))["descriptor"]["p"], "inf");
  EXPECT_THROW(frequency_set_from_json(json{{"dim", 2}, {"freqs", {{1, 2, 3}}}}), InputError);
}

TEST(Json, LatticeRoundTrip) {
  const Rank1Lattice lat({1, 3}, 31);
  EXPECT_EQ(to_json(lat).dump(), R"({"M":31,"z":[1,3]})");
  EXPECT_EQ(lattice_from_json(to_json(lat)), lat);
  const auto I = hyperbolic_cross(2, 8, 1);
  const auto m = search_multiple(I);
  const auto back = multiple_lattice_from_json(json::parse(to_json(m).dump()));
  EXPECT_EQ(back.components, m.components);
  EXPECT_EQ(back.assignment, m.assignment);
}

TEST(Json, CoefficientsAreBinaryExact) {
  std::mt19937_64 gen(2);
  const auto I = hyperbolic_cross(2, 6, 0.9);
  const CoefficientMap c(I, oracle::random_coefficients(gen, I.size()), Provenance::quadrature);
  const auto back = coefficients_from_json(json::parse(to_json(c).dump()));
  EXPECT_EQ(back.values, c.values);
  EXPECT_EQ(back.freqs.rows(), c.freqs.rows());
  EXPECT_EQ(back.provenance, Provenance::quadrature);
  EXPECT_THROW(parse_provenance("guess"), InputError);
}

TEST(Json, RecordFields) {
  ExperimentRecord r;
  r.rel_defined = false;
  r.beta_or_p = INFINITY;
  const auto j = to_json(r);
  EXPECT_TRUE(j["rel_err"].is_null());
  EXPECT_EQ(j["beta_or_p"], "inf");
  EXPECT_FALSE(j.contains("error"));
}

TEST(Csv, RecordLayout) {
  ExperimentRecord r;
  r.experiment = "x";
  r.transform = "algebraic(c=1)";
  r.descriptor = "hc(N=2,beta=0.95)";
  r.d = 2;
  r.N = 2;
  r.beta_or_p = 0.95;
  r.card_I = 21;
  r.M = 23;
  r.abs_err = 0.25;
  r.rel_err = 0.5;
  r.error = "a,b";
  std::ostringstream os;
  write_csv(os, std::vector<ExperimentRecord>{r});
  EXPECT_EQ(os.str(),
            "descriptor,d,N,beta_or_p,card_I,M,mode,abs_err,rel_err,seconds,experiment,transform,lattice,verified,seed,"
            "error\n\"hc(N=2,beta=0.95)\",2,2,0.95,21,23,plain,0.25,0.5,0,x,algebraic(c=1),single,true,0,\"a,b\"\n");
}

TEST(Csv, OtherTables) {
  std::ostringstream a, b, c;
  write_csv(a, FrequencySet::from_rows({{0, 1}, {-1, 2}}));
  EXPECT_EQ(a.str(), "k1,k2\n-1,2\n0,1\n");
  write_csv(b, CoefficientMap(FrequencySet::from_rows({{3}}), {{0.5, -0.25}}, Provenance::exact));
  EXPECT_EQ(b.str(), "k1,re,im\n3,0.5,-0.25\n");
  write_csv(c, std::vector<OracleRow>{{2, 0.1, 0.1, 0}});
  EXPECT_EQ(c.str(), "k,exact,quadrature,abs_diff\n2,0.1,0.1,0\n");
}

namespace {

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.experiment = "unit";
  spec.transform = TransformD::uniform(TransformKind::algebraic, 1, 2);
  spec.set = SetKind::hc;
  spec.param = 0.95;
  spec.levels = {2, 4, 8, 16, 32};
  return spec;
}

}  // namespace

TEST(Sweep, RowsInOrderAndByteStable) {
  auto spec = small_sweep();
  spec.workers = 3;
  const auto rows = run_sweep(spec, runge_sampler());
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].N, spec.levels[i]);
    EXPECT_TRUE(rows[i].verified);
    EXPECT_TRUE(rows[i].error.empty());
    EXPECT_EQ(rows[i].seconds, 0.0);
  }
  EXPECT_EQ(rows[0].card_I, 21u);
  EXPECT_GT(rows[0].rel_err, rows[4].rel_err);
  spec.workers = 1;
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, run_sweep(spec, runge_sampler()));
  EXPECT_EQ(a.str(), b.str());
}

TEST(Sweep, MultipleLatticeRows) {
  auto spec = small_sweep();
  spec.levels = {2, 6};
  spec.lattice = LatticeKind::multiple;
  const auto rows = run_sweep(spec, runge_sampler());
  for (const auto& r : rows) {
    EXPECT_EQ(r.lattice, "multiple");
    EXPECT_TRUE(r.verified);
    EXPECT_GT(r.M, static_cast<std::int64_t>(r.card_I));
  }
}

TEST(Sweep, FailuresAreRecorded) {
  auto spec = small_sweep();
  spec.single.cap_factor = 0.001;
  const auto r = sweep_row(spec, runge_sampler(), 4);
  EXPECT_FALSE(r.verified);
  EXPECT_FALSE(r.error.empty());
}

TEST(Sweep, SmoothingModeInRows) {
  auto spec = small_sweep();
  spec.set = SetKind::lp;
  spec.param = 2;
  spec.transform = TransformD::uniform(TransformKind::logarithmic, 1, 2);
  spec.mode = SmoothingMode::Kind::fejer;
  spec.levels = {10};
  const auto rows = run_sweep(spec, runge_sampler());
  EXPECT_EQ(rows[0].mode, "fejer");
  EXPECT_EQ(rows[0].descriptor, "lp(N=10,p=2)");
}

TEST(SlopeFit, ExcludesUnverifiedRows) {
  std::vector<ExperimentRecord> rows;
  for (double N : {2.0, 4.0, 8.0, 16.0}) {
    ExperimentRecord r;
    r.N = N;
    r.card_I = static_cast<std::size_t>(N * N);
    r.rel_err = 1.0 / N;
    rows.push_back(r);
  }
  ExperimentRecord bad;
  bad.N = 32;
  bad.rel_err = 100;
  bad.verified = false;
  rows.push_back(bad);
  ExperimentRecord failed = bad;
  failed.verified = true;
  failed.error = "boom";
  rows.push_back(failed);
  const auto fit = fit_loglog_slope(rows);
  EXPECT_EQ(fit.used, 4u);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(fit_loglog_slope(rows, true).slope, -0.5, 1e-12);
  EXPECT_TRUE(std::isnan(fit_loglog_slope({}).slope));
}

TEST(Svg, Render) {
  std::vector<ExperimentRecord> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].card_I = static_cast<std::size_t>(10 * (i + 1));
    rows[i].rel_err = std::pow(10.0, -i);
  }
  rows[2].verified = false;
  const auto svg = render_svg(rows, "test");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("fill=\"white\"/>\n</svg>"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
  EXPECT_EQ(render_svg({}, "empty").find("polyline"), std::string::npos);
}

TEST(Experiment, Describe) {
  EXPECT_EQ(describe(TransformD::uniform(TransformKind::tangens, 0.8, 3)), "tangens(c=0.8)");
  EXPECT_EQ(describe(TransformD({Transform1D(TransformKind::algebraic, 1), Transform1D(TransformKind::error, 2)})),
            "algebraic(c=1);error(c=2)");
  EXPECT_EQ(default_nmax(2), 120);
  EXPECT_EQ(default_nmax(5), 18);
}
