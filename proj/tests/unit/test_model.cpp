#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "eadarp/model.hpp"
#include "fixtures.hpp"

using namespace eadarp;

namespace {

// K=2, n=16, one station, two destinations; every node on the unit grid.
std::string a2_16_like(int stations = 1) {
  std::ostringstream os;
  const int n = 16;
  os << "# a2-16 shaped\n2 " << n << ' ' << stations << " 2 1440\n";
  os << "14.85 0.055 0.055 0.1 0.75 0.25\n";
  os << "0 origin 0 0 0 0 0 1440 0\n";
  for (int i = 1; i <= n; ++i) os << i << " pickup " << i % 5 << ' ' << i / 5 << " 3 1 0 1440 30\n";
  for (int i = 1; i <= n; ++i) os << n + i << " dropoff " << (i + 2) % 5 << ' ' << i / 4 << " 3 -1 0 1440 0\n";
  int id = 2 * n + 1;
  os << id++ << " origin 1 1 0 0 0 1440 0\n";
  os << id++ << " destination 0 0 0 0 0 1440 0\n";
  os << id++ << " destination 4 4 0 0 0 1440 0\n";
  for (int s = 0; s < stations; ++s) os << id++ << " station 2 2 0 0 0 1440 0\n";
  return os.str();
}

}  // namespace

TEST(Parse, BatteryInTimeUnits) {
  const Instance inst = parse_instance(a2_16_like());
  EXPECT_NEAR(inst.full_recharge(), 270.0, 1e-9);
  EXPECT_EQ(inst.num_vehicles(), 2);
  EXPECT_EQ(inst.num_requests(), 16);
  EXPECT_EQ(inst.capacity(0), 3);
  EXPECT_NEAR(inst.final_recharge_bound(), 0.9 * 270.0, 1e-9);
  // alpha == beta: recharging an arc takes as long as driving it.
  EXPECT_NEAR(inst.recharge(1, 17), inst.travel(1, 17), 1e-12);
}

TEST(Parse, PairingUsesNPlusI) {
  const Instance inst = parse_instance(a2_16_like());
  EXPECT_EQ(inst.dropoff_of(1), 17);
  EXPECT_EQ(inst.pickup_of(17), 1);
  EXPECT_EQ(inst.node(17).load, -inst.node(1).load);
  EXPECT_TRUE(inst.is_pickup(16));
  EXPECT_TRUE(inst.is_dropoff(32));
  EXPECT_FALSE(inst.is_user(33));
}

TEST(Parse, ZeroStations) {
  const Instance inst = parse_instance(a2_16_like(0));
  EXPECT_TRUE(inst.stations().empty());
  EXPECT_GT(inst.full_recharge(), 0);
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(Parse, ErrorsCarryLineNumbers) {
  std::string text = a2_16_like();
  // Break the pairing of request 3: dropoff 19 gets load -2.
  const auto pos = text.find("\n19 dropoff");
  ASSERT_NE(pos, std::string::npos);
  const auto end = text.find('\n', pos + 1);
  std::string line = text.substr(pos + 1, end - pos - 1);
  line.replace(line.find(" -1 "), 4, " -2 ");
  text.replace(pos + 1, end - pos - 1, line);
  try {
    parse_instance(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unpaired request"), std::string::npos) << e.what();
    EXPECT_GT(e.line(), 3);
  }

  EXPECT_THROW(parse_instance("2 1 0 2\n"), ParseError);
  try {
    parse_instance("1 1 0 1 100\n1 1 1 0.1 0.75 0.25\n0 origin 0 0 0 0 0 100 0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("node count"), std::string::npos);
  }
}

TEST(Parse, CommaSeparatedAndCapacityLine) {
  const std::string text =
      "1,1,0,1,100\n"
      "10,1,1,0.1,0.75,0.25\n"
      "2\n"
      "0,origin,0,0,0,0,0,100,0\n"
      "1,pickup,1,0,0,2,0,100,20\n"
      "2,dropoff,2,0,0,-2,0,100,0\n"
      "3,destination,0,0,0,0,0,100,0\n";
  const Instance inst = parse_instance(text);
  EXPECT_EQ(inst.capacity(0), 2);
  EXPECT_EQ(inst.node(1).load, 2);
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(Parse, ExplicitMatrix) {
  const std::string text =
      "1 1 0 1 100\n"
      "10 1 1 0.1 0.75 0.25\n"
      "0 origin 0 0 0 0 0 100 0\n"
      "1 pickup 0 0 0 1 0 100 20\n"
      "2 dropoff 0 0 0 -1 0 100 0\n"
      "3 destination 0 0 0 0 0 100 0\n"
      "MATRIX\n"
      "0 1 2 3\n1 0 1 2\n2 1 0 1\n3 2 1 0\n";
  const Instance inst = parse_instance(text);
  EXPECT_DOUBLE_EQ(inst.travel(0, 3), 3);
  EXPECT_DOUBLE_EQ(inst.travel(2, 1), 1);
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(Emit, RoundTrip) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorSpec spec;
    spec.requests = 1 + static_cast<int>(seed % 6);
    spec.stations = static_cast<int>(seed % 3);
    spec.time_resolution = seed % 2 ? 0.5 : 0;
    const Instance a = generate_instance(spec, seed);
    const Instance b = parse_instance(emit_instance(a), a.name());
    EXPECT_EQ(a.data(), b.data()) << "seed " << seed;
  }
}

TEST(Generate, Deterministic) {
  GeneratorSpec spec;
  spec.vehicles = 2;
  spec.requests = 2;
  spec.stations = 1;
  spec.destinations = 2;
  EXPECT_EQ(generate_instance(spec, 7).data(), generate_instance(spec, 7).data());
  EXPECT_NE(generate_instance(spec, 7).data(), generate_instance(spec, 8).data());
}

TEST(Generate, RejectsEmpty) {
  GeneratorSpec spec;
  spec.requests = 0;
  EXPECT_THROW(generate_instance(spec, 1), std::invalid_argument);
  spec.requests = 2;
  spec.vehicles = 0;
  EXPECT_THROW(generate_instance(spec, 1), std::invalid_argument);
}

TEST(Generate, ClampsWithWarnings) {
  GeneratorSpec spec;
  spec.destinations = 1;  // fewer than K
  std::vector<std::string> warnings;
  const Instance inst = generate_instance(spec, 3, &warnings);
  EXPECT_FALSE(warnings.empty());
  EXPECT_TRUE(validate_instance(inst).empty());
}

TEST(Validate, GeneratedInstancesAreClean) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorSpec spec;
    spec.vehicles = 1 + static_cast<int>(seed % 3);
    spec.destinations = spec.vehicles + static_cast<int>(seed % 2);
    spec.requests = 1 + static_cast<int>(seed % 8);
    spec.stations = static_cast<int>(seed % 4);
    spec.time_resolution = seed % 3 == 0 ? 1.0 : 0.0;
    const auto diag = validate_instance(generate_instance(spec, seed));
    EXPECT_TRUE(diag.empty()) << "seed " << seed << ": " << (diag.empty() ? "" : diag.front());
  }
}

TEST(Validate, TriangleInequality) {
  const Instance inst = fx::Builder(1, 1)
                            .origin(0, 0)
                            .pickup(0, 0, 0, 100, 50)
                            .dropoff(0, 0, 0, 100)
                            .destination(0, 0)
                            .matrix({{0, 1, 10, 1}, {1, 0, 1, 1}, {10, 1, 0, 1}, {1, 1, 1, 0}})
                            .build();
  const auto diag = validate_instance(inst);
  bool found = false;
  for (const auto& d : diag) found |= d.find("triangle inequality violated at (0,1,2)") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Validate, OriginCount) {
  auto b = fx::Builder(2, 1).origin(0, 0).pickup(1, 0, 0, 100, 50).dropoff(2, 0, 0, 100).destination(0, 0).destination(1, 1);
  const auto diag = validate_instance(b.build());
  bool found = false;
  for (const auto& d : diag) found |= d.find("origin depot count") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Validate, WindowAndPairing) {
  auto b = fx::Builder(1, 1).origin(0, 0).pickup(1, 0, 50, 10, 50).dropoff(2, 0, 0, 100).destination(0, 0);
  const auto diag = validate_instance(b.build());
  bool found = false;
  for (const auto& d : diag) found |= d.find("time window e > l at node 1") != std::string::npos;
  EXPECT_TRUE(found);
}

TEST(Transform, WithGamma) {
  const Instance inst = fx::tiny(2);
  const Instance g = with_gamma(inst, 0.7);
  EXPECT_DOUBLE_EQ(g.gamma(), 0.7);
  EXPECT_NEAR(g.final_recharge_bound(), 0.3 * g.full_recharge(), 1e-9);
  EXPECT_EQ(g.num_nodes(), inst.num_nodes());
}

TEST(Transform, ReplicateStations) {
  const Instance inst = fx::tiny(4, 2, 3, 2);
  const Instance r = replicate_stations(inst, 3);
  ASSERT_EQ(r.stations().size(), 6u);
  EXPECT_EQ(r.num_nodes(), inst.num_nodes() + 4);
  EXPECT_TRUE(validate_instance(r).empty());
  for (std::size_t s = 0; s < 2; ++s) {
    const int a = inst.stations()[s];
    for (std::size_t c = 0; c < r.stations().size(); ++c) {
      const int b = r.stations()[c];
      if (r.node(b).x == inst.node(a).x && r.node(b).y == inst.node(a).y) {
        EXPECT_NEAR(r.travel(0, b), inst.travel(0, a), 1e-12);
      }
    }
  }
}
