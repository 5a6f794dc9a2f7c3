#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "qi/bounds.hpp"
#include "qi/errors.hpp"
#include "qi/pc_receiver.hpp"
#include "qi/sweep.hpp"

namespace qi {
namespace {

std::map<Receiver, double> rates(const ScenarioParams& sc) {
  std::map<Receiver, double> out;
  for (Receiver r : all_receivers()) out[r] = receiver_rate(r, sc).per_mode_rate;
  return out;
}

TEST(Receivers, LabelsRoundTrip) {
  for (Receiver r : all_receivers()) EXPECT_EQ(parse_receiver(to_string(r)), r);
  EXPECT_FALSE(parse_receiver("QI+XYZ").has_value());
  EXPECT_EQ(comparison_receivers().size(), 6u);
  EXPECT_EQ(to_string(Receiver::kQiHetCcb), "QI+Het+CCB");
}

TEST(Receivers, RatesAtReferenceScenario) {
  const ScenarioParams sc;
  auto r = rates(sc);
  EXPECT_NEAR(r[Receiver::kQiPc], 2.3575929806957360e-6, 1e-18);
  EXPECT_NEAR(r[Receiver::kQiCalPc], 2.3027656169736765e-6, 1e-18);
  EXPECT_NEAR(r[Receiver::kQiHetPc], 1.1627852893770358e-6, 1e-18);
  EXPECT_NEAR(r[Receiver::kCsQcb], 1.2196936161606467e-6, 1e-20);
  EXPECT_NEAR(r[Receiver::kCsHom], 0.01 * 0.01 / 82.0, 1e-20);
  EXPECT_EQ(receiver_rate(Receiver::kQiPc, sc).kind, RateKind::kSnr);
  EXPECT_EQ(receiver_rate(Receiver::kQiQcb, sc).kind, RateKind::kChernoff);
}

TEST(Receivers, PerModeRateOrdering) {
  for (double nb : {5.0, 20.0, 100.0}) {
    ScenarioParams sc;
    sc.n_background = nb;
    auto r = rates(sc);
    EXPECT_GE(r[Receiver::kQiPc], r[Receiver::kQiCalPc]);
    EXPECT_GE(r[Receiver::kQiCalPc], r[Receiver::kQiHetPc]);
    EXPECT_GE(r[Receiver::kCsQcb], r[Receiver::kQiHetCcb]);
    EXPECT_GE(r[Receiver::kQiQcb], r[Receiver::kQiPc]);
    EXPECT_GE(r[Receiver::kQiPc], r[Receiver::kCsQcb]);
    EXPECT_GE(r[Receiver::kCsQcb], r[Receiver::kCsHom]);
    EXPECT_LE(r[Receiver::kQiQbb], r[Receiver::kQiQcb]);
  }
}

TEST(Sweep, HeaderAndSingleRow) {
  SweepSpec spec;
  spec.m_values = {1000};
  spec.receivers = {Receiver::kQiPc};
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].m, 1000);
  EXPECT_NEAR(rows[0].p_error, 0.5 * std::erfc(std::sqrt(1000 * 2.3575929806957360e-6)), 1e-15);
  std::ostringstream os;
  write_sweep_csv(os, rows);
  std::string header;
  std::istringstream is(os.str());
  std::getline(is, header);
  EXPECT_EQ(header, kSweepCsvHeader);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("QI+PC,1000,", 0), 0u);
  EXPECT_NE(line.find(",snr"), std::string::npos);
}

TEST(Sweep, RowOrderAndInvariants) {
  SweepSpec spec;
  spec.m_values = log_spaced_uses(0, 8, 17);
  spec.receivers = all_receivers();
  const auto rows = run_sweep(spec);
  ASSERT_EQ(rows.size(), spec.m_values.size() * spec.receivers.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    EXPECT_EQ(row.receiver, spec.receivers[i / spec.m_values.size()]);
    EXPECT_EQ(row.m, spec.m_values[i % spec.m_values.size()]);
    EXPECT_LE(row.p_error, 0.5);
    EXPECT_GE(row.p_error, 0.0);
    EXPECT_GE(row.exponent, std::log(2.0) - 1e-15);
    EXPECT_NEAR(row.exponent, -std::log(row.p_error), 1e-9 * row.exponent + 1e-300);
    if (i % spec.m_values.size() > 0) {
      EXPECT_LE(row.p_error, rows[i - 1].p_error);
    }
  }
}

TEST(Sweep, ExponentOrderingAtEveryM) {
  SweepSpec spec;
  spec.m_values = log_spaced_uses(0, 8, 33);
  spec.receivers = all_receivers();
  const auto rows = run_sweep(spec);
  const std::size_t n = spec.m_values.size();
  auto at = [&](Receiver r, std::size_t k) {
    for (std::size_t i = 0; i < spec.receivers.size(); ++i)
      if (spec.receivers[i] == r) return rows[i * n + k].exponent;
    return 0.0;
  };
  for (std::size_t k = 0; k < n; ++k) {
    EXPECT_GE(at(Receiver::kQiPc, k), at(Receiver::kQiCalPc, k));
    EXPECT_GE(at(Receiver::kQiCalPc, k), at(Receiver::kQiHetPc, k));
    EXPECT_GE(at(Receiver::kQiQcb, k), at(Receiver::kCsQcb, k));
    EXPECT_GE(at(Receiver::kCsQcb, k), at(Receiver::kQiHetCcb, k));
    EXPECT_GE(at(Receiver::kQiPc, k), at(Receiver::kCsHom, k));
    EXPECT_GT(at(Receiver::kQiCalPc, k), at(Receiver::kCsQcb, k));
    EXPECT_GT(at(Receiver::kCsHom, k), at(Receiver::kQiHetPc, k));
  }
}

TEST(Sweep, ChernoffRowSitsBelowExactHomodyneExponent) {
  // ln 2 + M r against M h + ln(pi M h) / 2 + ln 2 with r - h ~ 2e-10: the bound
  // row stays below the exact homodyne row for every M up to 1e8, although the
  // per-mode rates order the other way.
  SweepSpec spec;
  spec.m_values = {1, 1000, 100000000};
  spec.receivers = {Receiver::kCsQcb, Receiver::kCsHom};
  const auto rows = run_sweep(spec);
  EXPECT_GT(rows[0].per_mode_rate, rows[3].per_mode_rate);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(rows[k].exponent, rows[3 + k].exponent);
}

TEST(Sweep, NoReturnGivesHalfEverywhere) {
  SweepSpec spec;
  spec.scenario.kappa = 0.0;
  spec.m_values = {1, 100, 100000000};
  spec.receivers = all_receivers();
  for (const auto& row : run_sweep(spec)) {
    EXPECT_DOUBLE_EQ(row.p_error, 0.5) << to_string(row.receiver);
    EXPECT_EQ(row.per_mode_rate, 0.0);
  }
}

TEST(Sweep, LargeMStaysFinite) {
  SweepSpec spec;
  spec.scenario.kappa = 1.0;
  spec.scenario.n_background = 0.1;
  spec.m_values = {1000000000000LL};
  spec.receivers = all_receivers();
  for (const auto& row : run_sweep(spec)) {
    EXPECT_TRUE(std::isfinite(row.exponent));
    EXPECT_GT(row.exponent, 1e6);
  }
}

TEST(Sweep, Validation) {
  SweepSpec spec;
  spec.receivers = {Receiver::kQiPc};
  spec.m_values = {};
  EXPECT_THROW(run_sweep(spec), InvalidArgument);
  spec.m_values = {10, 10};
  EXPECT_THROW(run_sweep(spec), InvalidArgument);
  spec.m_values = {0, 10};
  EXPECT_THROW(run_sweep(spec), InvalidArgument);
  spec.m_values = {1};
  spec.receivers = {};
  EXPECT_THROW(run_sweep(spec), InvalidArgument);
  spec.receivers = {Receiver::kQiPc};
  spec.scenario.c_mode = CorrelationMode::kExplicit;
  spec.scenario.c_value = 0.5;
  EXPECT_THROW(run_sweep(spec), InvalidArgument);
}

TEST(Scenario, CorrelationModes) {
  ScenarioParams sc;
  EXPECT_NEAR(sc.resolved_corr(), 0.20099751242241780540, 1e-16);
  sc.c_mode = CorrelationMode::kDirect;
  EXPECT_NEAR(sc.resolved_corr(), 0.02, 1e-17);
  sc.c_mode = CorrelationMode::kExplicit;
  sc.c_value = 0.1;
  EXPECT_EQ(sc.resolved_corr(), 0.1);
}

TEST(LogSpacedUses, Values) {
  const auto m = log_spaced_uses(0, 8, 17);
  ASSERT_EQ(m.size(), 17u);
  EXPECT_EQ(m.front(), 1);
  EXPECT_EQ(m[1], 3);
  EXPECT_EQ(m[2], 10);
  EXPECT_EQ(m.back(), 100000000);
  const auto dedup = log_spaced_uses(0, 0.1, 5);
  EXPECT_EQ(dedup, (std::vector<long long>{1}));
  EXPECT_THROW(log_spaced_uses(2, 1, 3), InvalidArgument);
  EXPECT_THROW(log_spaced_uses(0, 19, 3), InvalidArgument);
}

TEST(FormatDouble, FixedWidthScientific) {
  EXPECT_EQ(format_double(0.5), "5.0000000000000000e-01");
  EXPECT_EQ(format_double(-0.0), "0.0000000000000000e+00");
  EXPECT_EQ(format_double(2.3575929806957360e-6), "2.3575929806957360e-06");
}

}  // namespace
}  // namespace qi
