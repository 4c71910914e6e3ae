#include "ibcsym/io/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ibcsym/io/output.hpp"

namespace ibcsym::io {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

const std::vector<std::string> commands{"symmetry", "field",   "streamlines", "simulate",
                                        "lattice",  "potential", "boundary"};

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (!s.empty() && s.back() == ',') out.push_back("");
  return out;
}

struct Entry {
  std::string key;
  std::string value;
  std::size_t line;
};

double to_double(const Entry& e, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(e.line, "expected a number for '" + e.key + "', got '" + text + "'");
  return v;
}

double number(const Entry& e) { return to_double(e, e.value); }

std::uint64_t unsigned_int(const Entry& e) {
  std::uint64_t v = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (e.value.empty() || ec != std::errc() || ptr != last)
    throw ConfigError(e.line, "expected a non-negative integer for '" + e.key + "', got '" +
                                  e.value + "'");
  return v;
}

std::vector<double> numbers(const Entry& e, std::size_t expected = 0) {
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_double(e, item));
  if (expected > 0 && out.size() != expected)
    throw ConfigError(e.line, "'" + e.key + "' expects " + std::to_string(expected) +
                                  " comma-separated numbers, got " + std::to_string(out.size()));
  if (out.empty()) throw ConfigError(e.line, "'" + e.key + "' expects a list of numbers");
  return out;
}

void require(bool ok, const Entry& e, const std::string& what) {
  if (!ok) throw ConfigError(e.line, "'" + e.key + "' " + what);
}

using Handler = std::function<void(const Entry&)>;

struct Schema {
  std::map<std::string, Handler> keys;
  std::set<std::string> repeatable;
};

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& command) {
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError(0, "unknown command '" + command + "'");
  RunConfig cfg;
  cfg.command = command;
  cfg.text = std::string(text);

  // Group entries by section, keeping line numbers.
  std::map<std::string, std::vector<Entry>> sections;
  std::map<std::string, std::size_t> section_line;
  std::string current;
  std::size_t line_no = 0;
  std::stringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section_line.count(current)) throw ConfigError(line_no, "duplicate section [" + current + "]");
      section_line[current] = line_no;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    if (current.empty()) throw ConfigError(line_no, "key outside of any section");
    Entry e{trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)),
            line_no};
    if (e.key.empty()) throw ConfigError(line_no, "empty key");
    sections[current].push_back(std::move(e));
  }

  std::map<std::string, Schema> schemas;
  ModelSection model;

  schemas["run"].keys = {{"seed", [&](const Entry& e) { cfg.seed = unsigned_int(e); }}};

  auto add_source = [&](const Entry& e, bool polar) {
    const auto v = numbers(e, 5);
    const cplx g = polar ? std::polar(v[0], v[1]) : cplx(v[0], v[1]);
    const Vec3 x(v[2], v[3], v[4]);
    if (g == cplx(0.0)) throw ConfigError(e.line, "charges must be nonzero");
    for (std::size_t k = 0; k < model.sources.size(); ++k)
      if (model.sources[k].position == x) throw ConfigError(e.line, "sources must be pairwise distinct");
    model.sources.push_back({x, g});
    model.source_lines.push_back(e.line);
  };
  schemas["model"].keys = {
      {"m", [&](const Entry& e) { model.m = number(e); require(model.m > 0, e, "must be positive"); }},
      {"E0", [&](const Entry& e) { model.E0 = number(e); require(model.E0 >= 0, e, "must be non-negative"); }},
      {"hbar", [&](const Entry& e) { model.hbar = number(e); require(model.hbar > 0, e, "must be positive"); }},
      {"charge", [&](const Entry& e) { add_source(e, false); }},
      {"charge_polar", [&](const Entry& e) { add_source(e, true); }},
  };
  schemas["model"].repeatable = {"charge", "charge_polar"};

  auto& sym = cfg.symmetry;
  schemas["symmetry"].keys = {
      {"tol", [&](const Entry& e) { sym.tol = number(e); require(sym.tol > 0, e, "must be positive"); }},
      {"ibc", [&](const Entry& e) {
         const auto v = numbers(e, 5);
         sym.ibc.push_back({v[0], v[1], v[2], v[3], v[4]});
       }},
  };
  schemas["symmetry"].repeatable = {"ibc"};

  auto& f = cfg.field;
  schemas["field"].keys = {
      {"xmin", [&](const Entry& e) { f.xmin = number(e); }},
      {"xmax", [&](const Entry& e) { f.xmax = number(e); }},
      {"ymin", [&](const Entry& e) { f.ymin = number(e); }},
      {"ymax", [&](const Entry& e) { f.ymax = number(e); }},
      {"z", [&](const Entry& e) { f.z = number(e); }},
      {"nx", [&](const Entry& e) { f.nx = unsigned_int(e); require(f.nx >= 1, e, "must be at least 1"); }},
      {"ny", [&](const Entry& e) { f.ny = unsigned_int(e); require(f.ny >= 1, e, "must be at least 1"); }},
  };

  auto& st = cfg.streamlines;
  schemas["streamlines"].keys = {
      {"seed", [&](const Entry& e) {
         const auto v = numbers(e, 3);
         st.seeds.emplace_back(v[0], v[1], v[2]);
       }},
      {"seed_source", [&](const Entry& e) { st.seed_source = unsigned_int(e); require(st.seed_source >= 1, e, "is 1-based"); }},
      {"count", [&](const Entry& e) { st.count = unsigned_int(e); require(st.count >= 1, e, "must be at least 1"); }},
      {"radius", [&](const Entry& e) { st.radius = number(e); require(st.radius > 0, e, "must be positive"); }},
      {"max_arc_length", [&](const Entry& e) { st.max_arc_length = number(e); require(st.max_arc_length > 0, e, "must be positive"); }},
      {"eps_absorb", [&](const Entry& e) { st.eps_absorb = number(e); require(st.eps_absorb >= 0, e, "must be non-negative"); }},
      {"rtol", [&](const Entry& e) { st.rtol = number(e); require(st.rtol > 0, e, "must be positive"); }},
  };
  schemas["streamlines"].repeatable = {"seed"};

  auto& sim = cfg.simulate;
  schemas["simulate"].keys = {
      {"mode", [&](const Entry& e) {
         sim.mode = e.value;
         require(sim.mode == "equivariance" || sim.mode == "reversal" || sim.mode == "trajectories", e,
                 "must be one of equivariance, reversal, trajectories");
       }},
      {"runs", [&](const Entry& e) { sim.runs = unsigned_int(e); require(sim.runs >= 1, e, "must be at least 1"); }},
      {"t_max", [&](const Entry& e) { sim.t_max = number(e); require(sim.t_max > 0, e, "must be positive"); }},
      {"sample_times", [&](const Entry& e) {
         sim.sample_times = numbers(e);
         for (double t : sim.sample_times) require(t >= 0, e, "must be non-negative");
       }},
      {"reference_samples", [&](const Entry& e) { sim.reference_samples = unsigned_int(e); require(sim.reference_samples >= 100, e, "must be at least 100"); }},
      {"significance", [&](const Entry& e) { sim.significance = number(e); require(sim.significance > 0 && sim.significance < 1, e, "must lie in (0, 1)"); }},
      {"rtol", [&](const Entry& e) { sim.rtol = number(e); require(sim.rtol > 0, e, "must be positive"); }},
      {"dt_max", [&](const Entry& e) { sim.dt_max = number(e); require(sim.dt_max > 0, e, "must be positive"); }},
      {"frame_dt", [&](const Entry& e) { sim.frame_dt = number(e); require(sim.frame_dt > 0, e, "must be positive"); }},
      {"min_events", [&](const Entry& e) { sim.min_events = unsigned_int(e); }},
      {"z_critical", [&](const Entry& e) { sim.z_critical = number(e); require(sim.z_critical > 0, e, "must be positive"); }},
  };

  auto& lat = cfg.lattice;
  bool lattice_sources_given = false;
  schemas["lattice"].keys = {
      {"L", [&](const Entry& e) { lat.L = unsigned_int(e); require(lat.L >= 2, e, "must be at least 2"); }},
      {"a", [&](const Entry& e) { lat.a = number(e); require(lat.a > 0, e, "must be positive"); }},
      {"n_max", [&](const Entry& e) { lat.n_max = unsigned_int(e); require(lat.n_max >= 1, e, "must be at least 1"); }},
      {"m", [&](const Entry& e) { lat.m = number(e); require(lat.m > 0, e, "must be positive"); }},
      {"E0", [&](const Entry& e) { lat.E0 = number(e); }},
      {"hbar", [&](const Entry& e) { lat.hbar = number(e); require(lat.hbar > 0, e, "must be positive"); }},
      {"source", [&](const Entry& e) {
         if (!lattice_sources_given) lat.sources.clear();
         lattice_sources_given = true;
         const auto v = numbers(e, 3);
         require(v[0] >= 0 && std::floor(v[0]) == v[0], e, "site must be a non-negative integer");
         lat.sources.emplace_back(static_cast<std::size_t>(v[0]), cplx(v[1], v[2]));
       }},
      {"checks", [&](const Entry& e) {
         lat.checks = split_list(e.value);
         for (const auto& c : lat.checks)
           require(c == "hermitian" || c == "gauge" || c == "T" || c == "ground" || c == "reversal" ||
                       c == "bell",
                   e, "entries must be among hermitian, gauge, T, ground, reversal, bell");
       }},
      {"t", [&](const Entry& e) { lat.t = number(e); require(lat.t >= 0, e, "must be non-negative"); }},
      {"chains", [&](const Entry& e) { lat.chains = unsigned_int(e); require(lat.chains >= 1, e, "must be at least 1"); }},
      {"dt", [&](const Entry& e) { lat.dt = number(e); require(lat.dt > 0, e, "must be positive"); }},
      {"theta_grid", [&](const Entry& e) { lat.theta_grid = unsigned_int(e); require(lat.theta_grid >= 1, e, "must be at least 1"); }},
      {"gauge_thetas", [&](const Entry& e) { lat.gauge_thetas = unsigned_int(e); require(lat.gauge_thetas >= 1, e, "must be at least 1"); }},
  };
  schemas["lattice"].repeatable = {"source"};

  auto& bd = cfg.boundary;
  auto complex_pair = [](const Entry& e) {
    const auto v = numbers(e, 2);
    return cplx(v[0], v[1]);
  };
  schemas["boundary"].keys = {
      {"thetas", [&](const Entry& e) { bd.thetas = numbers(e); }},
      {"points", [&](const Entry& e) { bd.points = unsigned_int(e); require(bd.points >= 4, e, "must be at least 4"); }},
      {"m", [&](const Entry& e) { bd.m = number(e); require(bd.m > 0, e, "must be positive"); }},
      {"hbar", [&](const Entry& e) { bd.hbar = number(e); require(bd.hbar > 0, e, "must be positive"); }},
      {"alpha0", [&](const Entry& e) { bd.alpha0 = complex_pair(e); }},
      {"beta0", [&](const Entry& e) { bd.beta0 = complex_pair(e); }},
      {"alpha1", [&](const Entry& e) { bd.alpha1 = complex_pair(e); }},
      {"beta1", [&](const Entry& e) { bd.beta1 = complex_pair(e); }},
      {"t_max", [&](const Entry& e) { bd.t_max = number(e); require(bd.t_max > 0, e, "must be positive"); }},
      {"steps", [&](const Entry& e) { bd.steps = unsigned_int(e); require(bd.steps >= 1, e, "must be at least 1"); }},
      {"packet_center", [&](const Entry& e) { bd.packet_center = number(e); }},
      {"packet_width", [&](const Entry& e) { bd.packet_width = number(e); require(bd.packet_width > 0, e, "must be positive"); }},
      {"packet_k", [&](const Entry& e) { bd.packet_k = number(e); }},
      {"witness", [&](const Entry& e) {
         const auto v = numbers(e, 6);
         const cplx a(v[0], v[1]), b(v[2], v[3]), p(v[4], v[5]);
         require(a != cplx(0.0) || b != cplx(0.0), e, "needs (alpha, beta) != (0, 0)");
         require(p != cplx(0.0), e, "needs psi(q) != 0");
         bd.witnesses.emplace_back(a, b, p);
       }},
  };
  schemas["boundary"].repeatable = {"witness"};

  schemas["potential"];  // no keys; uses [model]

  for (const auto& [name, entries] : sections) {
    auto it = schemas.find(name);
    if (it == schemas.end()) throw ConfigError(section_line[name], "unknown section [" + name + "]");
    std::set<std::string> seen;
    for (const auto& e : entries) {
      auto h = it->second.keys.find(e.key);
      if (h == it->second.keys.end())
        throw ConfigError(e.line, "unknown key '" + e.key + "' in section [" + name + "]");
      if (!it->second.repeatable.count(e.key) && !seen.insert(e.key).second)
        throw ConfigError(e.line, "duplicate key '" + e.key + "'");
      h->second(e);
    }
  }

  if (sections.count("model")) {
    if (model.sources.empty())
      throw ConfigError(section_line["model"], "at least one source is required");
    try {
      ChargeSystem(model.sources, model.m, model.E0, model.hbar);
    } catch (const std::invalid_argument& err) {
      throw ConfigError(section_line["model"], err.what());
    }
    cfg.model = model;
  }
  cfg.has_lattice = sections.count("lattice") > 0;
  cfg.has_boundary = sections.count("boundary") > 0;

  if (bd.beta0 == cplx(0.0) && bd.alpha0 == cplx(0.0))
    throw ConfigError(section_line["boundary"], "boundary condition at x = 0 has alpha = beta = 0");
  if (bd.beta1 == cplx(0.0) && bd.alpha1 == cplx(0.0))
    throw ConfigError(section_line["boundary"], "boundary condition at x = 1 has alpha = beta = 0");
  {
    std::set<std::size_t> sites;
    for (const auto& [site, g] : lat.sources) {
      if (site >= lat.L) throw ConfigError(section_line["lattice"], "source site out of range");
      if (!sites.insert(site).second) throw ConfigError(section_line["lattice"], "source sites must be distinct");
    }
  }

  const bool needs_model = command == "field" || command == "streamlines" || command == "simulate" ||
                           command == "potential" || (command == "symmetry" && sym.ibc.empty());
  if (needs_model && !cfg.model)
    throw ConfigError(0, "command '" + command + "' requires a [model] section");
  if (command == "streamlines" && cfg.model && cfg.streamlines.seeds.empty() &&
      cfg.streamlines.seed_source > cfg.model->sources.size())
    throw ConfigError(section_line["streamlines"], "seed_source exceeds the number of sources");
  if (command == "simulate" && cfg.model && cfg.model->E0 <= 0.0)
    throw ConfigError(section_line["model"], "simulate requires E0 > 0");
  return cfg;
}

ChargeSystem RunConfig::charge_system() const {
  if (!model) throw ConfigError(0, "no [model] section");
  return ChargeSystem(model->sources, model->m, model->E0, model->hbar);
}

std::vector<std::pair<std::string, std::string>> RunConfig::effective_parameters() const {
  std::vector<std::pair<std::string, std::string>> p;
  auto num = [](double v) { return format_double(v); };
  auto cnum = [&](cplx v) { return num(v.real()) + "," + num(v.imag()); };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + num(v[k]);
    return s;
  };
  p.emplace_back("run.seed", std::to_string(seed));
  if (model && command != "lattice" && command != "boundary") {
    p.emplace_back("model.m", num(model->m));
    p.emplace_back("model.E0", num(model->E0));
    p.emplace_back("model.hbar", num(model->hbar));
    for (const auto& s : model->sources)
      p.emplace_back("model.charge", cnum(s.charge) + "," + num(s.position.x()) + "," +
                                         num(s.position.y()) + "," + num(s.position.z()));
  }
  if (command == "symmetry") {
    p.emplace_back("symmetry.tol", num(symmetry.tol));
    for (const auto& s : symmetry.ibc)
      p.emplace_back("symmetry.ibc", list({s.theta, s.alpha, s.beta, s.gamma, s.delta}));
  } else if (command == "field") {
    p.emplace_back("field.xmin", num(field.xmin));
    p.emplace_back("field.xmax", num(field.xmax));
    p.emplace_back("field.ymin", num(field.ymin));
    p.emplace_back("field.ymax", num(field.ymax));
    p.emplace_back("field.z", num(field.z));
    p.emplace_back("field.nx", std::to_string(field.nx));
    p.emplace_back("field.ny", std::to_string(field.ny));
  } else if (command == "streamlines") {
    for (const auto& s : streamlines.seeds) p.emplace_back("streamlines.seed", list({s.x(), s.y(), s.z()}));
    p.emplace_back("streamlines.seed_source", std::to_string(streamlines.seed_source));
    p.emplace_back("streamlines.count", std::to_string(streamlines.count));
    p.emplace_back("streamlines.radius", num(streamlines.radius));
    p.emplace_back("streamlines.max_arc_length", num(streamlines.max_arc_length));
    p.emplace_back("streamlines.eps_absorb", num(streamlines.eps_absorb));
    p.emplace_back("streamlines.rtol", num(streamlines.rtol));
  } else if (command == "simulate") {
    p.emplace_back("simulate.mode", simulate.mode);
    p.emplace_back("simulate.runs", std::to_string(simulate.runs));
    p.emplace_back("simulate.t_max", num(simulate.t_max));
    p.emplace_back("simulate.sample_times", list(simulate.sample_times));
    p.emplace_back("simulate.reference_samples", std::to_string(simulate.reference_samples));
    p.emplace_back("simulate.significance", num(simulate.significance));
    p.emplace_back("simulate.rtol", num(simulate.rtol));
    p.emplace_back("simulate.dt_max", num(simulate.dt_max));
    if (simulate.mode == "trajectories") p.emplace_back("simulate.frame_dt", num(simulate.frame_dt));
    p.emplace_back("simulate.min_events", std::to_string(simulate.min_events));
    p.emplace_back("simulate.z_critical", num(simulate.z_critical));
  } else if (command == "lattice") {
    p.emplace_back("lattice.L", std::to_string(lattice.L));
    p.emplace_back("lattice.a", num(lattice.a));
    p.emplace_back("lattice.n_max", std::to_string(lattice.n_max));
    p.emplace_back("lattice.m", num(lattice.m));
    p.emplace_back("lattice.E0", num(lattice.E0));
    p.emplace_back("lattice.hbar", num(lattice.hbar));
    for (const auto& [site, g] : lattice.sources)
      p.emplace_back("lattice.source", std::to_string(site) + "," + cnum(g));
    std::string checks;
    for (std::size_t k = 0; k < lattice.checks.size(); ++k) checks += (k ? "," : "") + lattice.checks[k];
    p.emplace_back("lattice.checks", checks);
    p.emplace_back("lattice.t", num(lattice.t));
    p.emplace_back("lattice.chains", std::to_string(lattice.chains));
    p.emplace_back("lattice.dt", num(lattice.dt));
    p.emplace_back("lattice.theta_grid", std::to_string(lattice.theta_grid));
    p.emplace_back("lattice.gauge_thetas", std::to_string(lattice.gauge_thetas));
  } else if (command == "boundary") {
    p.emplace_back("boundary.thetas", list(boundary.thetas));
    p.emplace_back("boundary.points", std::to_string(boundary.points));
    p.emplace_back("boundary.m", num(boundary.m));
    p.emplace_back("boundary.hbar", num(boundary.hbar));
    p.emplace_back("boundary.alpha0", cnum(boundary.alpha0));
    p.emplace_back("boundary.beta0", cnum(boundary.beta0));
    p.emplace_back("boundary.alpha1", cnum(boundary.alpha1));
    p.emplace_back("boundary.beta1", cnum(boundary.beta1));
    p.emplace_back("boundary.t_max", num(boundary.t_max));
    p.emplace_back("boundary.steps", std::to_string(boundary.steps));
    p.emplace_back("boundary.packet_center", num(boundary.packet_center));
    p.emplace_back("boundary.packet_width", num(boundary.packet_width));
    p.emplace_back("boundary.packet_k", num(boundary.packet_k));
    for (const auto& [a, b, q] : boundary.witnesses)
      p.emplace_back("boundary.witness", cnum(a) + "," + cnum(b) + "," + cnum(q));
  }
  return p;
}

}  // namespace ibcsym::io
