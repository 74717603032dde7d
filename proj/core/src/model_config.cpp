#include "fieldmech/model_config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace fieldmech {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Line {
  int number;
  std::string section;
  std::string key;
  std::string value;
  int value_col;  // 1-based column where the value text starts
};

std::string trim(std::string_view s, int* lead = nullptr) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace((unsigned char)s[b])) ++b;
  while (e > b && std::isspace((unsigned char)s[e - 1])) --e;
  if (lead) *lead = (int)b;
  return std::string(s.substr(b, e - b));
}

std::vector<double> parse_reals(const Line& ln, size_t want) {
  std::istringstream is(ln.value);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  std::string rest;
  if (!is.eof() && (is.clear(), is >> rest, !rest.empty()))
    throw ParseError("'" + ln.key + "' expects numbers, got '" + rest + "'",
                     ln.number, ln.value_col);
  if (out.size() != want)
    throw ParseError("'" + ln.key + "' expects " + std::to_string(want) +
                         " value(s), got " + std::to_string(out.size()),
                     ln.number, ln.value_col);
  return out;
}

double parse_real(const Line& ln) { return parse_reals(ln, 1)[0]; }

std::int64_t parse_int(const Line& ln) {
  double v = parse_real(ln);
  if (v != std::floor(v) || std::fabs(v) > 9e15)
    throw ParseError("'" + ln.key + "' expects an integer", ln.number,
                     ln.value_col);
  return (std::int64_t)v;
}

}  // namespace

bool ModelConfig::operator==(const ModelConfig& o) const {
  if (dims != o.dims || spacing != o.spacing || charge != o.charge ||
      mass != o.mass || gauge != o.gauge ||
      quadrature_nodes != o.quadrature_nodes ||
      poisson_tol != o.poisson_tol || rank_tol != o.rank_tol ||
      fd_step != o.fd_step || eps0 != o.eps0 || mu0 != o.mu0 ||
      dt != o.dt || steps != o.steps || scheme != o.scheme)
    return false;
  for (int a = 0; a < 3; ++a)
    if (position[a] != o.position[a] || momentum[a] != o.momentum[a])
      return false;
  if (!potential.structurally_equal(o.potential)) return false;
  if (fields.preset != o.fields.preset ||
      fields.from_expressions != o.fields.from_expressions)
    return false;
  if (fields.from_expressions) {
    for (int a = 0; a < 3; ++a) {
      if (!fields.electric[a].structurally_equal(o.fields.electric[a]) ||
          !fields.magnetic[a].structurally_equal(o.fields.magnetic[a]))
        return false;
    }
  }
  return true;
}

const char* gauge_name(GaugeKind k) {
  return k == GaugeKind::Coulomb ? "coulomb" : "poincare";
}
const char* scheme_name(IntegratorScheme s) {
  return s == IntegratorScheme::Leapfrog ? "leapfrog" : "rk4";
}
const char* preset_name(FieldInit::Preset p) {
  switch (p) {
    case FieldInit::Preset::Zero: return "zero";
    case FieldInit::Preset::Wavepacket: return "wavepacket";
    case FieldInit::Preset::Bound: return "bound";
  }
  return "?";
}

ModelConfig parse_model(std::string_view text) {
  // Pass 1: split into (section, key, value) records with positions.
  std::vector<Line> lines;
  {
    std::string section;
    int number = 0;
    size_t start = 0;
    while (start <= text.size()) {
      size_t nl = text.find('\n', start);
      std::string_view raw = text.substr(
          start, nl == std::string_view::npos ? text.size() - start
                                              : nl - start);
      ++number;
      std::string_view body = raw.substr(0, raw.find('#'));
      int lead = 0;
      std::string t = trim(body, &lead);
      if (!t.empty()) {
        if (t.front() == '[') {
          if (t.back() != ']')
            throw ParseError("unterminated section header", number, lead + 1);
          section = t.substr(1, t.size() - 2);
          if (section.empty())
            throw ParseError("empty section name", number, lead + 1);
        } else {
          size_t eq = body.find('=');
          if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", number, lead + 1);
          if (section.empty())
            throw ParseError("key outside any [section]", number, lead + 1);
          std::string key = trim(body.substr(0, eq));
          if (key.empty())
            throw ParseError("empty key", number, lead + 1);
          int vlead = 0;
          std::string value = trim(body.substr(eq + 1), &vlead);
          lines.push_back(
              {number, section, key, value, (int)eq + 1 + vlead + 1});
        }
      }
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
  }

  ModelConfig c;
  std::map<std::string, int> seen;  // "section.key" -> line
  bool has_dims = false, has_spacing = false, has_charge = false,
       has_mass = false, has_potential = false;
  bool preset_set = false;
  int expr_fields = 0;

  for (const Line& ln : lines) {
    std::string full = ln.section + "." + ln.key;
    if (auto it = seen.find(full); it != seen.end())
      throw ParseError("duplicate key '" + ln.key + "' (first on line " +
                           std::to_string(it->second) + ")",
                       ln.number, 1);
    seen[full] = ln.number;

    auto expr = [&] { return ExprAst::parse(ln.value, ln.number, ln.value_col); };

    if (ln.section == "grid") {
      if (ln.key == "dims") {
        std::istringstream is(ln.value);
        std::vector<double> d;
        double v;
        while (is >> v) d.push_back(v);
        std::string rest;
        if (!is.eof() && (is.clear(), is >> rest, !rest.empty()))
          throw ParseError("'dims' expects integers, got '" + rest + "'",
                           ln.number, ln.value_col);
        if (d.size() == 1) d = {d[0], d[0], d[0]};
        if (d.size() != 3)
          throw ParseError("'dims' expects 1 or 3 integers", ln.number,
                           ln.value_col);
        for (double x : d)
          if (x != std::floor(x) || x < 1 || x > 1024)
            throw ParseError("'dims' entries must be integers in [1, 1024]",
                             ln.number, ln.value_col);
        c.dims = {(int)d[0], (int)d[1], (int)d[2]};
        has_dims = true;
      } else if (ln.key == "spacing") {
        c.spacing = parse_real(ln);
        has_spacing = true;
      } else {
        throw ParseError("unknown [grid] key '" + ln.key + "'", ln.number, 1);
      }
    } else if (ln.section == "particle") {
      if (ln.key == "charge") { c.charge = parse_real(ln); has_charge = true; }
      else if (ln.key == "mass") { c.mass = parse_real(ln); has_mass = true; }
      else if (ln.key == "position") {
        auto v = parse_reals(ln, 3);
        c.position = {v[0], v[1], v[2]};
      } else if (ln.key == "momentum") {
        auto v = parse_reals(ln, 3);
        c.momentum = {v[0], v[1], v[2]};
      } else {
        throw ParseError("unknown [particle] key '" + ln.key + "'", ln.number,
                         1);
      }
    } else if (ln.section == "potential") {
      if (ln.key == "V") { c.potential = expr(); has_potential = true; }
      else throw ParseError("unknown [potential] key '" + ln.key + "'",
                            ln.number, 1);
    } else if (ln.section == "gauge") {
      if (ln.key == "kind") {
        if (ln.value == "coulomb") c.gauge = GaugeKind::Coulomb;
        else if (ln.value == "poincare") c.gauge = GaugeKind::Poincare;
        else throw ParseError("gauge kind must be 'coulomb' or 'poincare'",
                              ln.number, ln.value_col);
      } else {
        throw ParseError("unknown [gauge] key '" + ln.key + "'", ln.number, 1);
      }
    } else if (ln.section == "numerics") {
      if (ln.key == "quadrature_nodes") c.quadrature_nodes = (int)parse_int(ln);
      else if (ln.key == "poisson_tol") c.poisson_tol = parse_real(ln);
      else if (ln.key == "rank_tol") c.rank_tol = parse_real(ln);
      else if (ln.key == "fd_step") c.fd_step = parse_real(ln);
      else if (ln.key == "eps0") c.eps0 = parse_real(ln);
      else if (ln.key == "mu0") c.mu0 = parse_real(ln);
      else throw ParseError("unknown [numerics] key '" + ln.key + "'",
                            ln.number, 1);
    } else if (ln.section == "integrator") {
      if (ln.key == "dt") c.dt = parse_real(ln);
      else if (ln.key == "steps") c.steps = parse_int(ln);
      else if (ln.key == "scheme") {
        if (ln.value == "leapfrog") c.scheme = IntegratorScheme::Leapfrog;
        else if (ln.value == "rk4") c.scheme = IntegratorScheme::RK4;
        else throw ParseError("scheme must be 'leapfrog' or 'rk4'", ln.number,
                              ln.value_col);
      } else {
        throw ParseError("unknown [integrator] key '" + ln.key + "'",
                         ln.number, 1);
      }
    } else if (ln.section == "fields") {
      if (ln.key == "preset") {
        if (ln.value == "zero") c.fields.preset = FieldInit::Preset::Zero;
        else if (ln.value == "wavepacket")
          c.fields.preset = FieldInit::Preset::Wavepacket;
        else if (ln.value == "bound")
          c.fields.preset = FieldInit::Preset::Bound;
        else throw ParseError(
            "preset must be 'zero', 'wavepacket', or 'bound'", ln.number,
            ln.value_col);
        preset_set = true;
      } else if (ln.key.size() == 2 &&
                 (ln.key[0] == 'E' || ln.key[0] == 'B') &&
                 (ln.key[1] == 'x' || ln.key[1] == 'y' || ln.key[1] == 'z')) {
        int a = ln.key[1] - 'x';
        (ln.key[0] == 'E' ? c.fields.electric : c.fields.magnetic)[a] = expr();
        ++expr_fields;
      } else {
        throw ParseError("unknown [fields] key '" + ln.key + "'", ln.number,
                         1);
      }
    } else {
      throw ParseError("unknown section [" + ln.section + "]", ln.number, 1);
    }
  }

  // Required keys, then semantic checks.
  std::string missing;
  auto need = [&](bool ok, const char* name) {
    if (!ok) missing += missing.empty() ? name : std::string(", ") + name;
  };
  need(has_dims, "grid.dims");
  need(has_spacing, "grid.spacing");
  need(has_charge, "particle.charge");
  need(has_mass, "particle.mass");
  need(has_potential, "potential.V");
  if (!missing.empty()) throw Error("missing required key(s): " + missing);

  if (expr_fields > 0 && preset_set)
    throw Error("[fields] sets both a preset and component expressions");
  if (expr_fields > 0) {
    if (expr_fields != 6)
      throw Error("[fields] expressions need all six of Ex Ey Ez Bx By Bz");
    c.fields.from_expressions = true;
  }

  if (c.mass <= 0 || !std::isfinite(c.mass)) throw Error("mass must be > 0");
  if (c.quadrature_nodes < 8) throw Error("quadrature_nodes must be >= 8");
  if (c.poisson_tol <= 0 || c.rank_tol <= 0 || c.fd_step <= 0)
    throw Error("tolerances and fd_step must be > 0");
  if (c.eps0 <= 0 || !std::isfinite(c.eps0) || c.mu0 <= 0 ||
      !std::isfinite(c.mu0))
    throw Error("eps0 and mu0 must be > 0");
  if (c.dt <= 0 || !std::isfinite(c.dt)) throw Error("dt must be > 0");
  if (c.steps < 1) throw Error("steps must be >= 1");
  if (!c.position.finite() || !c.momentum.finite())
    throw Error("particle state must be finite");

  Grid g = c.make_grid();  // validates dims and spacing
  if (c.charge != 0.0 && !g.in_safe_region(c.position))
    throw Error("charged particle position leaves the interior safe region");

  return c;
}

ModelConfig parse_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string serialize_model(const ModelConfig& c) {
  std::ostringstream out;
  out << "[grid]\n"
      << "dims = " << c.dims[0] << " " << c.dims[1] << " " << c.dims[2] << "\n"
      << "spacing = " << fmt(c.spacing) << "\n\n"
      << "[particle]\n"
      << "charge = " << fmt(c.charge) << "\n"
      << "mass = " << fmt(c.mass) << "\n"
      << "position = " << fmt(c.position.x) << " " << fmt(c.position.y) << " "
      << fmt(c.position.z) << "\n"
      << "momentum = " << fmt(c.momentum.x) << " " << fmt(c.momentum.y) << " "
      << fmt(c.momentum.z) << "\n\n"
      << "[potential]\n"
      << "V = " << c.potential.pretty() << "\n\n"
      << "[gauge]\n"
      << "kind = " << gauge_name(c.gauge) << "\n\n"
      << "[numerics]\n"
      << "quadrature_nodes = " << c.quadrature_nodes << "\n"
      << "poisson_tol = " << fmt(c.poisson_tol) << "\n"
      << "rank_tol = " << fmt(c.rank_tol) << "\n"
      << "fd_step = " << fmt(c.fd_step) << "\n"
      << "eps0 = " << fmt(c.eps0) << "\n"
      << "mu0 = " << fmt(c.mu0) << "\n\n"
      << "[integrator]\n"
      << "dt = " << fmt(c.dt) << "\n"
      << "steps = " << c.steps << "\n"
      << "scheme = " << scheme_name(c.scheme) << "\n\n"
      << "[fields]\n";
  if (c.fields.from_expressions) {
    const char* en[3] = {"Ex", "Ey", "Ez"};
    const char* bn[3] = {"Bx", "By", "Bz"};
    for (int a = 0; a < 3; ++a)
      out << en[a] << " = " << c.fields.electric[a].pretty() << "\n";
    for (int a = 0; a < 3; ++a)
      out << bn[a] << " = " << c.fields.magnetic[a].pretty() << "\n";
  } else {
    out << "preset = " << preset_name(c.fields.preset) << "\n";
  }
  return out.str();
}

std::uint64_t config_digest(const ModelConfig& c) {
  std::string s = serialize_model(c);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace fieldmech
