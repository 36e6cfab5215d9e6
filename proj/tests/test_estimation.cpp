#include <doctest.h>

#include <cmath>

#include "measkit/estimation.hpp"
#include "measkit/rng.hpp"
#include "oracles.hpp"

using namespace measkit;

namespace {

PauliString P(const std::string& text) {
  return parse_pauli(text, static_cast<std::uint32_t>(text.size()));
}

MeasurementGroup make_group(std::vector<PauliString> paulis,
                            std::vector<double> coeffs) {
  MeasurementGroup g;
  g.paulis = std::move(paulis);
  g.coeffs = std::move(coeffs);
  synthesize_group(g, GroupingContext{});
  return g;
}

double dense_group_variance(const DensityMatrix& rho,
                            std::span<const double> coeffs,
                            std::span<const PauliString> paulis) {
  double var = 0.0;
  std::vector<double> means(paulis.size());
  for (std::size_t j = 0; j < paulis.size(); ++j) {
    means[j] = (oracles::dense_pauli(paulis[j]) * rho.matrix()).trace().real();
  }
  for (std::size_t j = 0; j < paulis.size(); ++j) {
    for (std::size_t k = 0; k < paulis.size(); ++k) {
      const double cross = (oracles::dense_pauli(paulis[k]) *
                            oracles::dense_pauli(paulis[j]) * rho.matrix())
                               .trace()
                               .real();
      var += coeffs[j] * coeffs[k] * (cross - means[j] * means[k]);
    }
  }
  return var;
}

}  // namespace

TEST_CASE("relative error bound forward and inverse") {
  CHECK(relative_error_bound(0.01, 1) == doctest::Approx(0.01));
  CHECK(relative_error_bound(0.0, 10) == 0.0);
  CHECK(relative_error_bound(0.1, 2) == doctest::Approx(0.19));
  CHECK(invert_error_bound(0.003, 0.01) == doctest::Approx(3.345).epsilon(1e-3));
  CHECK(std::isinf(invert_error_bound(0.0, 0.01)));
  CHECK_THROWS_AS(relative_error_bound(1.0, 1), ArgumentError);
  CHECK_THROWS_AS(invert_error_bound(0.01, 1.5), ArgumentError);
}

TEST_CASE("group variance basics") {
  // Eigenstate of a singleton has zero variance.
  MeasurementGroup z = make_group({P("Z")}, {0.7});
  CHECK(group_variance(DensityMatrix(1), z) == doctest::Approx(0.0));

  // |+> maximizes a Z singleton's variance at coeff^2.
  CVector plus(2);
  plus << 1.0, 1.0;
  const DensityMatrix plus_state = DensityMatrix::pure(1, plus);
  MeasurementGroup z_unit = make_group({P("Z")}, {1.0});
  CHECK(group_variance(plus_state, z_unit) == doctest::Approx(1.0));
}

TEST_CASE("unit-coefficient singleton variance lies in [0, 1]") {
  auto rng = make_engine(61);
  for (int t = 0; t < 100; ++t) {
    const auto n = static_cast<std::uint32_t>(1 + uniform_below(rng, 4));
    const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
    const PauliString p(n, rng() & mask, rng() & mask);
    MeasurementGroup g = make_group({p}, {1.0});
    const double v = group_variance(random_pure_state(n, rng()), g);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("group variance matches the dense double sum") {
  auto rng = make_engine(62);
  for (int t = 0; t < 30; ++t) {
    const auto n = static_cast<std::uint32_t>(2 + uniform_below(rng, 3));
    const auto size = static_cast<std::uint32_t>(2 + uniform_below(rng, 3));
    std::vector<PauliString> paulis = sample_commuting_set(rng, n, size);
    std::vector<double> coeffs;
    for (std::size_t i = 0; i < paulis.size(); ++i) {
      coeffs.push_back(uniform01(rng) * 2.0 - 1.0);
    }
    const DensityMatrix rho = random_pure_state(n, rng());
    const double direct = variance_of_terms(
        rho, coeffs, std::span<const PauliString>(paulis));
    const double dense = dense_group_variance(rho, coeffs, paulis);
    CHECK(direct == doctest::Approx(dense).epsilon(1e-10));
  }
}

TEST_CASE("noiseless bias vanishes") {
  auto rng = make_engine(63);
  const DensityMatrix rho = random_pure_state(4, 17);
  std::vector<MeasurementGroup> groups;
  groups.push_back(make_group({P("XXII"), P("XIYY")}, {0.4, -0.2}));
  groups.push_back(make_group({P("ZZZZ")}, {1.1}));
  std::vector<GroupMeasurement> ms;
  for (const auto& g : groups) {
    ms.push_back(measure_group(rho, g, NoiseChannelSpec::ideal()));
  }
  const BiasReport report = bias_report(ms, groups);
  CHECK(report.total == doctest::Approx(0.0).epsilon(1e-9));
  for (double b : report.per_group) {
    CHECK(b == doctest::Approx(0.0).epsilon(1e-9));
  }
  (void)rng;
}

TEST_CASE("validation-mode per-term bias follows the closed form") {
  auto rng = make_engine(64);
  const double p = 0.05;
  for (int t = 0; t < 15; ++t) {
    const auto n = static_cast<std::uint32_t>(2 + uniform_below(rng, 4));
    MeasurementGroup g;
    g.paulis = sample_commuting_set(rng, n, 4);
    g.coeffs.assign(g.paulis.size(), 1.0);
    synthesize_group(g, GroupingContext{});
    const DensityMatrix rho = random_pure_state(n, rng());
    const GroupMeasurement m =
        measure_group(rho, g, NoiseChannelSpec::validation(p));
    const double factor = std::pow(1.0 - p, m.n_2q) - 1.0;
    for (std::size_t j = 0; j < g.paulis.size(); ++j) {
      if (g.paulis[j].is_identity()) continue;
      const double expected_bias = factor * m.ideal[j];
      CHECK(m.noisy[j] - m.ideal[j] ==
            doctest::Approx(expected_bias).epsilon(1e-9));
    }
  }
}

TEST_CASE("shot allocation closed forms") {
  const double vars[] = {4.0, 1.0};
  const ShotAllocation a = allocate_shots_budget(vars, 300.0);
  CHECK(a.fractional[0] == doctest::Approx(200.0));
  CHECK(a.fractional[1] == doctest::Approx(100.0));
  CHECK(a.shots == std::vector<long long>{200, 100});

  const ShotAllocation t = allocate_shots_target(vars, 1.0);
  CHECK(t.total == doctest::Approx(9.0));

  const double equal[] = {2.0, 2.0, 2.0, 2.0};
  const ShotAllocation e = allocate_shots_budget(equal, 100.0);
  CHECK(e.shots == std::vector<long long>{25, 25, 25, 25});

  const double with_zero[] = {4.0, 0.0, 1.0};
  const ShotAllocation z = allocate_shots_budget(with_zero, 300.0);
  CHECK(z.shots == std::vector<long long>{200, 0, 100});

  const double zeros[] = {0.0, 0.0};
  const ShotAllocation warn = allocate_shots_budget(zeros, 10.0);
  CHECK(warn.all_zero);
  CHECK(warn.shots == std::vector<long long>{0, 0});
}

TEST_CASE("rounding preserves the total exactly") {
  auto rng = make_engine(65);
  for (int t = 0; t < 200; ++t) {
    const auto l = static_cast<std::size_t>(1 + uniform_below(rng, 8));
    std::vector<double> vars;
    for (std::size_t i = 0; i < l; ++i) vars.push_back(uniform01(rng) * 10.0);
    const double budget = 1.0 + static_cast<double>(uniform_below(rng, 5000));
    const ShotAllocation a = allocate_shots_budget(vars, budget);
    if (a.all_zero) continue;
    long long total = 0;
    for (long long s : a.shots) total += s;
    CHECK(total == static_cast<long long>(budget));
    double frac_total = 0;
    for (double f : a.fractional) frac_total += f;
    CHECK(frac_total == doctest::Approx(budget).epsilon(1e-9));
  }
}

TEST_CASE("both allocation formulations are proportionally identical") {
  auto rng = make_engine(66);
  for (int t = 0; t < 50; ++t) {
    const auto l = static_cast<std::size_t>(2 + uniform_below(rng, 6));
    std::vector<double> vars;
    for (std::size_t i = 0; i < l; ++i) vars.push_back(uniform01(rng) * 5.0 + 0.01);
    const ShotAllocation budget = allocate_shots_budget(vars, 1000.0);
    const ShotAllocation target = allocate_shots_target(vars, 0.2);
    for (std::size_t i = 0; i < l; ++i) {
      CHECK(budget.fractional[i] / budget.total ==
            doctest::Approx(target.fractional[i] / target.total).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed-form allocation beats random feasible allocations") {
  auto rng = make_engine(67);
  for (int t = 0; t < 20; ++t) {
    const auto l = static_cast<std::size_t>(2 + uniform_below(rng, 7));
    std::vector<double> vars;
    for (std::size_t i = 0; i < l; ++i) vars.push_back(uniform01(rng) * 4.0 + 0.05);
    const double budget = 500.0;
    const ShotAllocation a = allocate_shots_budget(vars, budget);
    double optimal = 0.0;
    for (std::size_t i = 0; i < l; ++i) optimal += vars[i] / a.fractional[i];
    for (int trial = 0; trial < 500; ++trial) {
      // Random positive weights normalized to the same budget.
      std::vector<double> w(l);
      double sum = 0.0;
      for (double& x : w) {
        x = uniform01(rng) + 1e-3;
        sum += x;
      }
      double value = 0.0;
      for (std::size_t i = 0; i < l; ++i) {
        value += vars[i] / (budget * w[i] / sum);
      }
      CHECK(optimal <= value + 1e-9);
    }
  }
}

TEST_CASE("mse composes bias and allocated variance") {
  EstimatorReport report;
  report.group_variances = {1.0};
  report.total_bias = 0.0;
  ShotAllocation alloc;
  alloc.fractional = {100.0};
  alloc.shots = {100};
  alloc.total = 100.0;
  CHECK(mse(report, alloc) == doctest::Approx(0.01));

  report.total_bias = 0.25;
  alloc.fractional = {1e18};
  CHECK(mse(report, alloc) == doctest::Approx(0.0625).epsilon(1e-6));

  report.group_variances = {4.0, 1.0};
  report.total_bias = 0.0;
  alloc.fractional = {200.0, 100.0};
  CHECK(mse(report, alloc) == doctest::Approx(0.03));

  alloc.fractional = {200.0, 0.0};
  CHECK(std::isinf(mse(report, alloc)));
}

TEST_CASE("noiseless estimator mean is kernel independent") {
  auto rng = make_engine(68);
  std::vector<Term> terms;
  const std::uint64_t mask = (std::uint64_t{1} << 4) - 1;
  for (int i = 0; i < 18; ++i) {
    terms.push_back(
        {uniform01(rng) * 2.0 - 1.0, PauliString(4, rng() & mask, rng() & mask)});
  }
  const WeightedObservable obs(4, std::move(terms));
  const DensityMatrix rho = random_pure_state(4, 4242);

  double reference = 0.0;
  for (const Term& t : obs.terms()) {
    reference += t.coeff * expectation(rho, t.pauli);
  }

  GroupingContext context{device_preset("forte", 4), 0.01};
  for (const char* name : {"qwc", "fc", "hec", "galic"}) {
    const auto kernel = make_kernel(name);
    auto groups = sorted_insertion(obs, *kernel, context);
    for (auto& g : groups) synthesize_group(g, context);
    const EstimatorReport report =
        run_estimation(groups, rho, NoiseChannelSpec::ideal());
    CHECK(report.estimator_value == doctest::Approx(reference).epsilon(1e-9));
    CHECK(report.total_bias == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("sample variance dominates the variance sum") {
  auto rng = make_engine(69);
  const WeightedObservable obs(
      3, {{0.9, P("ZZI")}, {0.5, P("XXI")}, {-0.3, P("IYY")}, {0.2, P("ZIZ")}});
  GroupingContext context{device_preset("torino", 3), 0.01};
  auto groups = sorted_insertion(obs, QwcKernel{}, context);
  for (auto& g : groups) synthesize_group(g, context);
  const DensityMatrix rho = random_pure_state(3, rng());
  const EstimatorReport report =
      run_estimation(groups, rho, NoiseChannelSpec::device(context.device->noise));
  double var_sum = 0.0;
  for (double v : report.group_variances) var_sum += v;
  CHECK(report.sample_variance >= var_sum - 1e-12);
}

TEST_CASE("threaded estimation matches the serial path bit for bit") {
  auto rng = make_engine(70);
  std::vector<Term> terms;
  const std::uint64_t mask = (std::uint64_t{1} << 4) - 1;
  for (int i = 0; i < 14; ++i) {
    terms.push_back(
        {uniform01(rng) * 2.0 - 1.0, PauliString(4, rng() & mask, rng() & mask)});
  }
  const WeightedObservable obs(4, std::move(terms));
  GroupingContext context{device_preset("torino", 4), 0.01};
  auto groups = sorted_insertion(obs, GalicKernel{}, context);
  for (auto& g : groups) synthesize_group(g, context);
  const DensityMatrix rho = random_pure_state(4, 555);
  const NoiseChannelSpec noise = NoiseChannelSpec::device(context.device->noise);
  const EstimatorReport serial = run_estimation(groups, rho, noise, {}, {}, 1);
  const EstimatorReport parallel = run_estimation(groups, rho, noise, {}, {}, 4);
  CHECK(serial.estimator_value == parallel.estimator_value);
  CHECK(serial.sample_variance == parallel.sample_variance);
  CHECK(serial.total_bias == parallel.total_bias);
}
