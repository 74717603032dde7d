#include <doctest.h>

#include <random>
#include <string>

#include "fieldmech/model_config.hpp"

using namespace fieldmech;

namespace {

const char* kMinimal = R"(
[grid]
dims = 9
spacing = 0.25

[particle]
charge = 0.0
mass = 1.0

[potential]
V = 0.5*r^2
)";

std::string with_line(const std::string& base, const std::string& extra) {
  return base + "\n" + extra + "\n";
}

}  // namespace

TEST_CASE("minimal file parses with documented defaults") {
  ModelConfig c = parse_model(kMinimal);
  CHECK(c.dims[0] == 9);
  CHECK(c.dims[1] == 9);
  CHECK(c.dims[2] == 9);
  CHECK(c.spacing == 0.25);
  CHECK(c.charge == 0.0);
  CHECK(c.mass == 1.0);
  CHECK(c.gauge == GaugeKind::Poincare);
  CHECK(c.scheme == IntegratorScheme::Leapfrog);
  CHECK(c.eps0 == 1.0);
  CHECK(c.mu0 == 1.0);
  CHECK(c.dt == 1e-3);
  CHECK(c.steps == 100);
  CHECK(c.quadrature_nodes == 64);
  CHECK(!c.potential.empty());
  CHECK(c.potential.eval_at(Vec3{0, 0, 2.0}) == 2.0);
  Grid g = c.make_grid();
  CHECK(g.nx() == 9);
  CHECK(g.spacing() == 0.25);
}

TEST_CASE("dims accepts one value or three") {
  ModelConfig c = parse_model(
      "[grid]\ndims = 9 11 13\nspacing = 0.5\n"
      "[particle]\ncharge = 0\nmass = 1\n[potential]\nV = r^2\n");
  CHECK(c.dims[0] == 9);
  CHECK(c.dims[1] == 11);
  CHECK(c.dims[2] == 13);
  CHECK_THROWS_AS(parse_model("[grid]\ndims = 9 11\nspacing = 0.5\n"
                              "[particle]\ncharge = 0\nmass = 1\n"
                              "[potential]\nV = r^2\n"),
                  ParseError);
}

TEST_CASE("round trip: serialize then parse reproduces every field") {
  ModelConfig c = parse_model(kMinimal);
  c.gauge = GaugeKind::Coulomb;
  c.scheme = IntegratorScheme::RK4;
  c.charge = -1.5;
  c.mass = 2.25;
  c.position = Vec3{0.125, -0.25, 0.0625};
  c.momentum = Vec3{0.01, 0.02, -0.03};
  c.dt = 2.5e-5;
  c.steps = 1234;
  c.eps0 = 2.0;
  c.mu0 = 0.5;
  c.poisson_tol = 1e-9;
  c.fd_step = 1e-6;
  c.quadrature_nodes = 128;
  ModelConfig back = parse_model(serialize_model(c));
  CHECK(back == c);

  SUBCASE("field expressions survive") {
    ModelConfig ce = c;
    ce.fields.from_expressions = true;
    for (int i = 0; i < 3; ++i) ce.fields.electric[i] = ExprAst::parse("0");
    ce.fields.magnetic[0] = ExprAst::parse("0");
    ce.fields.magnetic[1] = ExprAst::parse("0");
    ce.fields.magnetic[2] = ExprAst::parse("0.1*exp(-r^2)");
    ModelConfig be = parse_model(serialize_model(ce));
    CHECK(be == ce);
  }

  SUBCASE("presets survive") {
    ModelConfig cp = c;
    cp.fields.preset = FieldInit::Preset::Wavepacket;
    ModelConfig bp = parse_model(serialize_model(cp));
    CHECK(bp == cp);
  }
}

TEST_CASE("digest is stable and sensitive") {
  ModelConfig c = parse_model(kMinimal);
  std::uint64_t d1 = config_digest(c);
  CHECK(config_digest(c) == d1);
  ModelConfig c2 = c;
  c2.charge = 1.0;
  CHECK(config_digest(c2) != d1);
  c2.charge = c.charge;
  c2.eps0 = 3.0;
  CHECK(config_digest(c2) != d1);
}

TEST_CASE("missing required keys are all named at once") {
  try {
    parse_model("[grid]\ndims = 9\n");
    FAIL("expected Error");
  } catch (const Error& e) {
    std::string w = e.what();
    CHECK(w.find("grid.spacing") != std::string::npos);
    CHECK(w.find("particle.charge") != std::string::npos);
    CHECK(w.find("particle.mass") != std::string::npos);
    CHECK(w.find("potential.V") != std::string::npos);
    CHECK(w.find("grid.dims") == std::string::npos);  // present, not listed
  }
}

TEST_CASE("structural errors carry line positions") {
  // duplicate key
  try {
    parse_model("[grid]\ndims = 9\ndims = 11\nspacing = 0.5\n"
                "[particle]\ncharge = 0\nmass = 1\n[potential]\nV = r\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("duplicate key 'dims'") !=
          std::string::npos);
    CHECK(e.line == 3);
  }

  CHECK_THROWS_AS(parse_model("dims = 9\n"), ParseError);  // outside section
  CHECK_THROWS_AS(parse_model("[grid\ndims = 9\n"), ParseError);
  CHECK_THROWS_AS(parse_model("[]\n"), ParseError);
  CHECK_THROWS_AS(parse_model("[grid]\n= 9\n"), ParseError);
  CHECK_THROWS_AS(parse_model("[grid]\ndims\n"), ParseError);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[nosuch]\nkey = 1")),
                  ParseError);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[grid]\nbogus = 1")),
                  ParseError);
}

TEST_CASE("value validation") {
  // expression-valued keys reject malformed expressions with positions
  try {
    parse_model("[grid]\ndims = 9\nspacing = 0.25\n[particle]\ncharge = 0\n"
                "mass = 1\n[potential]\nV = 0.5*k^2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 8);
    CHECK(std::string(e.what()).find("unknown identifier 'k'") !=
          std::string::npos);
  }

  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[grid]\ndims2 = 1")),
                  ParseError);
  // numeric validation
  auto bad = [&](const std::string& section_line) {
    std::string text = kMinimal;
    size_t pos = text.find("mass = 1.0");
    text.replace(pos, 10, section_line);
    return text;
  };
  CHECK_THROWS_AS(parse_model(bad("mass = 0.0")), Error);
  CHECK_THROWS_AS(parse_model(bad("mass = -2.0")), Error);
  CHECK_THROWS_AS(parse_model(bad("mass = abc")), ParseError);

  CHECK_THROWS_AS(
      parse_model(with_line(kMinimal, "[numerics]\nquadrature_nodes = 4")),
      Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[numerics]\neps0 = 0")),
                  Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[numerics]\nmu0 = -1")),
                  Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[evolve]\ndt = 0")), Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[evolve]\nsteps = 0")),
                  Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[gauge]\nkind = landau")),
                  Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[evolve]\nscheme = euler")),
                  Error);
  CHECK_THROWS_AS(parse_model(with_line(kMinimal, "[fields]\npreset = blob")),
                  Error);
  // even dims rejected by the grid rules
  CHECK_THROWS_AS(parse_model("[grid]\ndims = 8\nspacing = 0.25\n"
                              "[particle]\ncharge = 0\nmass = 1\n"
                              "[potential]\nV = r\n"),
                  Error);
}

TEST_CASE("field section consistency rules") {
  CHECK_THROWS_AS(
      parse_model(with_line(
          kMinimal, "[fields]\npreset = wavepacket\nEx = 0")),
      Error);  // preset and expressions at once
  CHECK_THROWS_AS(
      parse_model(with_line(kMinimal, "[fields]\nEx = 0\nEy = 0")),
      Error);  // needs all six components
  ModelConfig ok = parse_model(with_line(
      kMinimal,
      "[fields]\nEx = 0\nEy = 0\nEz = 0\nBx = 0\nBy = 0\nBz = 0.1"));
  CHECK(ok.fields.from_expressions);
  CHECK(!ok.fields.magnetic[2].empty());
}

TEST_CASE("charged particle must start inside the safe region") {
  std::string text = kMinimal;
  size_t pos = text.find("charge = 0.0");
  text.replace(pos, 12, "charge = 1.0\nposition = 1.5 0 0");
  CHECK_THROWS_AS(parse_model(text), Error);
  // neutral particle may sit anywhere finite
  std::string neutral = kMinimal;
  pos = neutral.find("charge = 0.0");
  neutral.replace(pos, 12, "charge = 0.0\nposition = 1.5 0 0");
  ModelConfig c = parse_model(neutral);
  CHECK(c.position.x == 1.5);
}

TEST_CASE("parse_model_file reports missing paths") {
  CHECK_THROWS_AS(parse_model_file("/nonexistent/path/to.model"), Error);
}

TEST_CASE("parser survives fuzzed input without crashing") {
  std::mt19937_64 rng(424242);
  const std::string alphabet =
      "[]gridparticlefieldsevolve\n=.0123456789 -+*/^#potentialV\tspcingmsd";
  std::uniform_int_distribution<int> len(0, 120);
  std::uniform_int_distribution<size_t> ch(0, alphabet.size() - 1);
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) s += alphabet[ch(rng)];
    try {
      parse_model(s);
    } catch (const Error&) {
      // ParseError or Error are the only acceptable outcomes
    }
  }
  CHECK(true);
}
