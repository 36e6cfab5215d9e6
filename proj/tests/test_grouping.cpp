#include <doctest.h>

#include <cmath>

#include "measkit/grouping.hpp"
#include "measkit/rng.hpp"

using namespace measkit;

namespace {

PauliString P(const std::string& text) {
  return parse_pauli(text, static_cast<std::uint32_t>(text.size()));
}

std::vector<PauliString> PS(std::initializer_list<const char*> texts) {
  std::vector<PauliString> out;
  for (const char* t : texts) out.push_back(P(t));
  return out;
}

GroupingContext preset_context(const char* name, std::uint32_t n,
                               double eps = 0.01) {
  return GroupingContext{device_preset(name, n), eps};
}

std::vector<std::string> group_texts(const MeasurementGroup& g) {
  std::vector<std::string> out;
  for (const PauliString& p : g.paulis) out.push_back(render_pauli(p));
  return out;
}

}  // namespace

TEST_CASE("qwc kernel") {
  QwcKernel qwc;
  GroupingContext none;
  CHECK(qwc.accepts(PS({"XXYY", "XIIY"}), none));
  CHECK_FALSE(qwc.accepts(PS({"XXZZ", "ZZXX"}), none));
  CHECK(qwc.accepts(PS({"YZXI"}), none));
}

TEST_CASE("fc kernel") {
  FcKernel fc;
  GroupingContext none;
  CHECK(fc.accepts(PS({"YYYY", "XXYY", "YYXX", "XXXX"}), none));
  CHECK_FALSE(fc.accepts(PS({"ZIII", "XXYY"}), none));
  CHECK(fc.accepts(PS({"ZIII"}), none));
}

TEST_CASE("hec kernel follows the coupling graph") {
  HecKernel hec;

  // Any qwc set is fine on any graph: no entangling gates at all.
  GroupingContext sparse{
      DeviceModel{"line", CouplingGraph(4, {{0, 1}, {1, 2}, {2, 3}}),
                  preset_noise("torino")},
      0.01};
  CHECK(hec.accepts(PS({"XXII", "XIYY"}), sparse));

  // The four-qubit fc example on a complete graph.
  GroupingContext complete{device_preset("aria1", 4), 0.01};
  CHECK(hec.accepts(PS({"YYYY", "XXYY", "YYXX", "XXXX"}), complete));

  // A synthesis edge (0,2) is absent from the path 0-1-2.
  GroupingContext path{
      DeviceModel{"path", CouplingGraph(3, {{0, 1}, {1, 2}}),
                  preset_noise("torino")},
      0.01};
  CHECK_FALSE(hec.accepts(PS({"XIX", "ZIZ"}), path));

  // Non-commuting input is rejected, not an error.
  CHECK_FALSE(hec.accepts(PS({"XI", "ZI"}), complete));

  GroupingContext missing;
  CHECK_THROWS_AS(hec.accepts(PS({"XX"}), missing), ConfigError);
}

TEST_CASE("galic kernel thresholds per device") {
  GalicKernel galic;

  // Aria1: rhs = ln(0.99)/ln(0.914) < 1, so any entangling set rejects.
  GroupingContext aria = preset_context("aria1", 4);
  CHECK_FALSE(galic.accepts(PS({"XXZZ", "ZZXX"}), aria));
  CHECK_FALSE(galic.accepts(PS({"XX", "ZZ"}), preset_context("aria1", 2)));
  CHECK(galic.accepts(PS({"XXYY", "XIIY"}), aria));  // qwc set
  CHECK(galic.accepts(PS({"YXZI"}), aria));          // singleton

  // Forte: rhs = ln(0.99)/ln(0.99) = 1 exactly; N_AC = 2 at distance 1
  // sits exactly on the bound, N_AC = 3 exceeds it.
  GroupingContext forte = preset_context("forte", 4);
  CHECK(galic.accepts(PS({"XXII", "ZZII"}), forte));
  CHECK_FALSE(galic.accepts(PS({"XXXI", "ZZII", "IZZI"}), forte));

  // Torino heavy-hex: adjacent anticommuting pair passes, distance-2
  // pair fails (lhs 4 > rhs ~3.345).
  GroupingContext torino = preset_context("torino", 8);
  const DeviceModel& device = *torino.device;
  REQUIRE(device.graph.has_edge(0, 1));
  CHECK(galic.accepts(PS({"XXIIIIII", "ZZIIIIII"}), torino));
  REQUIRE(device.graph.distance(0, 2) == 2);
  CHECK(galic.accepts(PS({"XIXIIIII", "ZIZIIIII"}), torino) ==
        false);

  GroupingContext no_eps{device_preset("forte", 2), std::nullopt};
  CHECK_THROWS_AS(galic.accepts(PS({"XX"}), no_eps), ConfigError);
}

TEST_CASE("galic accepts everything at zero gate error") {
  GalicKernel galic;
  DeviceModel perfect = device_preset("torino", 4);
  perfect.noise.p_2q = 0.0;
  GroupingContext context{perfect, 0.01};
  CHECK(galic.accepts(PS({"XXZZ", "ZZXX"}), context));
  CHECK(galic.accepts(PS({"YYYY", "XXYY", "YYXX", "XXXX"}), context));
}

TEST_CASE("galic collapses to fc in the zero-noise limit") {
  DeviceModel perfect = device_preset("torino", 6);
  perfect.noise.p_2q = 0.0;
  GroupingContext context{perfect, 0.01};
  const GalicKernel galic;
  const FcKernel fc;
  CHECK(check_partial_order(galic, fc, context, 2000, 71).violations.empty());
  CHECK(check_partial_order(fc, galic, context, 2000, 72).violations.empty());
}

TEST_CASE("galic fails closed on disconnected anticommuting qubits") {
  GalicKernel galic;
  DeviceModel split{"split", CouplingGraph(4, {{0, 1}, {2, 3}}),
                    preset_noise("torino")};
  split.noise.p_2q = 1e-9;  // generous budget, still rejected
  GroupingContext context{split, 0.01};
  CHECK_FALSE(galic.accepts(PS({"XIXI", "ZIZI"}), context));
}

TEST_CASE("sorted insertion follows the greedy trace") {
  const WeightedObservable obs(
      2, {{0.5, P("ZZ")}, {0.4, P("XX")}, {0.3, P("ZI")}});
  GroupingContext none;

  const auto qwc_groups = sorted_insertion(obs, QwcKernel{}, none);
  REQUIRE(qwc_groups.size() == 2);
  CHECK(group_texts(qwc_groups[0]) == std::vector<std::string>{"ZZ", "ZI"});
  CHECK(group_texts(qwc_groups[1]) == std::vector<std::string>{"XX"});
  CHECK(qwc_groups[0].coeffs == std::vector<double>{0.5, 0.3});

  const auto fc_groups = sorted_insertion(obs, FcKernel{}, none);
  REQUIRE(fc_groups.size() == 2);
  CHECK(group_texts(fc_groups[0]) == std::vector<std::string>{"ZZ", "XX"});
  CHECK(group_texts(fc_groups[1]) == std::vector<std::string>{"ZI"});
}

TEST_CASE("sorted insertion on a single term yields one singleton") {
  const WeightedObservable obs(3, {{-0.7, P("XYZ")}});
  const auto groups = sorted_insertion(obs, FcKernel{}, GroupingContext{});
  REQUIRE(groups.size() == 1);
  CHECK(group_texts(groups[0]) == std::vector<std::string>{"XYZ"});
}

TEST_CASE("sorted insertion partitions the observable exactly") {
  auto rng = make_engine(55);
  GroupingContext forte = preset_context("forte", 5);
  for (const char* name : {"qwc", "fc", "galic"}) {
    const auto kernel = make_kernel(name);
    for (int t = 0; t < 10; ++t) {
      std::vector<Term> terms;
      const std::uint64_t mask = (std::uint64_t{1} << 5) - 1;
      for (int i = 0; i < 25; ++i) {
        terms.push_back(
            {uniform01(rng) * 2.0 - 1.0, PauliString(5, rng() & mask, rng() & mask)});
      }
      const WeightedObservable obs(5, std::move(terms));
      const auto groups = sorted_insertion(obs, *kernel, forte);
      std::size_t covered = 0;
      for (const auto& g : groups) {
        covered += g.paulis.size();
        REQUIRE(pairwise_fully_commuting(g.paulis));
        CHECK_FALSE(g.paulis.empty());
      }
      CHECK(covered == obs.size());
      // Every term appears exactly once.
      std::vector<std::string> seen;
      for (const auto& g : groups) {
        for (const auto& p : g.paulis) seen.push_back(render_pauli(p));
      }
      std::sort(seen.begin(), seen.end());
      CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
  }
}

TEST_CASE("equal-coefficient fc example collapses to a single group") {
  const WeightedObservable obs(4, {{0.25, P("YYYY")},
                                   {0.25, P("XXYY")},
                                   {0.25, P("YYXX")},
                                   {0.25, P("XXXX")}});
  const auto groups = sorted_insertion(obs, FcKernel{}, GroupingContext{});
  REQUIRE(groups.size() == 1);
  CHECK(group_texts(groups[0]) ==
        std::vector<std::string>{"YYYY", "XXYY", "YYXX", "XXXX"});
}

TEST_CASE("stable tie-break preserves input order") {
  const WeightedObservable obs(
      2, {{0.5, P("XI")}, {0.5, P("IZ")}, {0.5, P("ZI")}});
  const auto groups = sorted_insertion(obs, QwcKernel{}, GroupingContext{});
  REQUIRE(!groups.empty());
  CHECK(group_texts(groups[0]) == std::vector<std::string>{"XI", "IZ"});
}

TEST_CASE("kernel validity: accepted groups fully commute, singletons pass") {
  auto rng = make_engine(56);
  GroupingContext context = preset_context("torino", 6);
  for (const char* name : {"qwc", "fc", "hec", "galic"}) {
    const auto kernel = make_kernel(name);
    for (int t = 0; t < 300; ++t) {
      const auto n = static_cast<std::uint32_t>(2 + uniform_below(rng, 5));
      const auto size = static_cast<std::uint32_t>(1 + uniform_below(rng, 6));
      const auto set = sample_commuting_set(rng, n, size);
      if (kernel->accepts(set, context)) {
        CHECK(pairwise_fully_commuting(set));
      }
      const std::vector<PauliString> singleton = {set.front()};
      CHECK(kernel->accepts(singleton, context));
      if (pairwise_qubitwise_commuting(set)) {
        CHECK(kernel->accepts(set, context));
      }
    }
  }
}

TEST_CASE("partial order spot checks") {
  GroupingContext context = preset_context("torino", 6);
  const QwcKernel qwc;
  const FcKernel fc;
  const GalicKernel galic;
  const HecKernel hec;

  CHECK(check_partial_order(qwc, galic, context, 500, 1).violations.empty());
  CHECK(check_partial_order(galic, fc, context, 500, 2).violations.empty());
  CHECK(check_partial_order(qwc, hec, context, 500, 3).violations.empty());
  CHECK(check_partial_order(hec, fc, context, 500, 4).violations.empty());

  // fc <= qwc fails as soon as an fc-only set is sampled.
  const auto report = check_partial_order(fc, qwc, context, 2000, 5);
  CHECK_FALSE(report.violations.empty());
}

TEST_CASE("synthesize_group fills circuits and measured forms") {
  MeasurementGroup group;
  group.paulis = PS({"XXZZ", "ZZXX"});
  group.coeffs = {1.0, 0.5};
  GroupingContext context = preset_context("torino", 4);
  synthesize_group(group, context);
  REQUIRE(group.circuit.has_value());
  REQUIRE(group.routed_circuit.has_value());
  CHECK(group.final_permutation.size() == 4);
  REQUIRE(group.measured_forms.size() == 2);
  for (const SignedPauli& z : group.measured_forms) {
    CHECK(z.is_z_type());
  }
  for (const Gate& g : group.routed_circuit->gates()) {
    if (is_two_qubit(g.kind)) {
      CHECK(context.device->graph.has_edge(g.q0, g.q1));
    }
  }
}
