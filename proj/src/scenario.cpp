// Copyright 2026 The mcg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcg/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcg/error.hpp"

namespace mcg {

using nlohmann::json;

namespace {

// Collects schema problems with their JSON path while walking the document.
class Reader {
 public:
  std::vector<Issue> issues;

  void fail(const std::string& path, const std::string& msg) {
    issues.push_back({ErrorCode::kSchemaError, path, msg});
  }

  const json* field(const json& obj, const std::string& key,
                    const std::string& path, bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
      if (required) fail(join(path, key), "missing required field");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& obj, const std::string& key,
                               const std::string& path, bool required) {
    const json* v = field(obj, key, path, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      fail(join(path, key), "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::size_t> count(const json& obj, const std::string& key,
                                   const std::string& path, bool required) {
    const json* v = field(obj, key, path, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      fail(join(path, key), "expected a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::size_t>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key,
                                    const std::string& path, bool required) {
    const json* v = field(obj, key, path, required);
    if (v == nullptr) return std::nullopt;
    if (!v->is_string()) {
      fail(join(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  // Number broadcast to `n` entries, or an array of exactly `n` numbers.
  std::optional<std::vector<double>> vector(const json& v,
                                            const std::string& path,
                                            std::size_t n) {
    if (v.is_number()) return std::vector<double>(n, v.get<double>());
    if (!v.is_array()) {
      fail(path, "expected a number or an array of numbers");
      return std::nullopt;
    }
    if (v.size() != n) {
      fail(path, "expected " + std::to_string(n) + " entries, got " +
                     std::to_string(v.size()));
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number()) {
        fail(path + "[" + std::to_string(k) + "]", "expected a number");
        return std::nullopt;
      }
      out.push_back(v[k].get<double>());
    }
    return out;
  }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }
  static std::string at(const std::string& path, std::size_t k) {
    return path + "[" + std::to_string(k) + "]";
  }
};

std::optional<RatioKind> ratio_kind(const std::string& s) {
  if (s == "sqrt") return RatioKind::kSqrt;
  if (s == "log") return RatioKind::kLog;
  return std::nullopt;
}

std::string_view form_name(CostForm f) {
  switch (f) {
    case CostForm::kQuadratic: return "quadratic";
    case CostForm::kRatioSqrt: return "ratio_sqrt";
    case CostForm::kRatioLog: return "ratio_log";
    case CostForm::kComposite: return "composite";
  }
  return "quadratic";
}

CostFunction read_cost(Reader& r, const json& p, const std::string& path,
                       std::size_t q) {
  CostFunction f;
  if (!p.is_object()) {
    r.fail(path, "expected an object");
    return f;
  }
  f.quadratic.b.assign(q, 0.0);
  if (const json* quad = r.field(p, "quadratic", path, false)) {
    const std::string qp = Reader::join(path, "quadratic");
    f.quadratic.a = r.number(*quad, "a", qp, false).value_or(0.0);
    f.quadratic.c = r.number(*quad, "c", qp, false).value_or(0.0);
    if (const json* b = r.field(*quad, "b", qp, false)) {
      if (auto v = r.vector(*b, Reader::join(qp, "b"), q)) f.quadratic.b = *v;
    }
  }
  if (const json* ratios = r.field(p, "ratios", path, false)) {
    const std::string rp = Reader::join(path, "ratios");
    if (!ratios->is_array()) {
      r.fail(rp, "expected an array");
    } else {
      for (std::size_t k = 0; k < ratios->size(); ++k) {
        const std::string ep = Reader::at(rp, k);
        const json& e = (*ratios)[k];
        RatioTerm t;
        if (auto kind = r.string(e, "kind", ep, true)) {
          if (auto rk = ratio_kind(*kind)) {
            t.kind = *rk;
          } else {
            r.fail(Reader::join(ep, "kind"), "expected \"sqrt\" or \"log\"");
          }
        }
        t.alpha = r.number(e, "alpha", ep, true).value_or(0.0);
        t.beta = r.number(e, "beta", ep, true).value_or(1.0);
        t.gamma = r.number(e, "gamma", ep, true).value_or(0.0);
        t.delta = r.number(e, "delta", ep, true).value_or(1.0);
        f.ratios.push_back(t);
      }
    }
  }
  if (const json* cs = r.field(p, "couplings", path, false)) {
    const std::string cp = Reader::join(path, "couplings");
    if (!cs->is_array()) {
      r.fail(cp, "expected an array");
    } else {
      for (std::size_t k = 0; k < cs->size(); ++k) {
        const std::string ep = Reader::at(cp, k);
        const json& e = (*cs)[k];
        Coupling c;
        const auto cl = r.count(e, "cluster", ep, true);
        const auto pl = r.count(e, "player", ep, true);
        if (cl && *cl == 0) r.fail(Reader::join(ep, "cluster"), "indices are one-based");
        if (pl && *pl == 0) r.fail(Reader::join(ep, "player"), "indices are one-based");
        c.target = {cl.value_or(1) - 1, pl.value_or(1) - 1};
        c.coeff = r.number(e, "coeff", ep, true).value_or(0.0);
        f.couplings.push_back(c);
      }
    }
  }
  if (auto form = r.string(p, "form", path, false)) {
    if (*form != form_name(f.form())) {
      r.fail(Reader::join(path, "form"),
             "declared form '" + *form + "' does not match its terms ('" +
                 std::string(form_name(f.form())) + "')");
    }
  }
  return f;
}

UndirectedGraph read_graph(Reader& r, const json& g, const std::string& path) {
  UndirectedGraph out;
  if (!g.is_object()) {
    r.fail(path, "expected an object");
    return out;
  }
  out.vertices = r.count(g, "vertices", path, true).value_or(0);
  if (const json* edges = r.field(g, "edges", path, true)) {
    const std::string ep = Reader::join(path, "edges");
    if (!edges->is_array()) {
      r.fail(ep, "expected an array of [u, v] or [u, v, weight]");
      return out;
    }
    for (std::size_t k = 0; k < edges->size(); ++k) {
      const json& e = (*edges)[k];
      const bool ok = e.is_array() && (e.size() == 2 || e.size() == 3) &&
                      e[0].is_number_integer() && e[1].is_number_integer() &&
                      e[0].get<long long>() >= 1 && e[1].get<long long>() >= 1 &&
                      (e.size() == 2 || e[2].is_number());
      if (!ok) {
        r.fail(Reader::at(ep, k),
               "expected [u, v] or [u, v, weight] with one-based vertices");
        continue;
      }
      out.edges.push_back({e[0].get<std::size_t>() - 1,
                           e[1].get<std::size_t>() - 1,
                           e.size() == 3 ? e[2].get<double>() : 1.0});
    }
  }
  return out;
}

json graph_json(const UndirectedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges) edges.push_back({e.u + 1, e.v + 1, e.weight});
  return {{"vertices", g.vertices}, {"edges", edges}};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

Scenario parse_scenario_json(const json& doc) {
  Reader r;
  Scenario s;
  if (!doc.is_object()) {
    r.fail("", "scenario must be a JSON object");
    throw ScenarioError(std::move(r.issues));
  }
  s.name = r.string(doc, "name", "", false).value_or("");
  s.description = r.string(doc, "description", "", false).value_or("");

  // game
  if (const json* g = r.field(doc, "game", "", true)) {
    s.game.q = r.count(*g, "decision_dim", "game", false).value_or(1);
    s.game.order = r.count(*g, "order", "game", true).value_or(1);
    if (const json* cl = r.field(*g, "clusters", "game", true)) {
      if (!cl->is_array()) {
        r.fail("game.clusters", "expected an array");
      } else {
        for (std::size_t j = 0; j < cl->size(); ++j) {
          const std::string cp = Reader::at("game.clusters", j);
          ClusterSpec c;
          c.label = r.string((*cl)[j], "label", cp, false).value_or("");
          if (const json* ps = r.field((*cl)[j], "players", cp, true)) {
            if (!ps->is_array()) {
              r.fail(Reader::join(cp, "players"), "expected an array");
            } else {
              for (std::size_t i = 0; i < ps->size(); ++i) {
                c.players.push_back(read_cost(
                    r, (*ps)[i], Reader::at(Reader::join(cp, "players"), i),
                    s.game.q));
              }
            }
          }
          s.game.clusters.push_back(std::move(c));
        }
      }
    }
  }
  const std::size_t qbar = s.game.stacked_dim();

  // topology
  if (const json* t = r.field(doc, "topology", "", true)) {
    if (const json* g = r.field(*t, "global", "topology", true)) {
      s.topology.global = read_graph(r, *g, "topology.global");
    }
    if (const json* cs = r.field(*t, "clusters", "topology", true)) {
      if (!cs->is_array()) {
        r.fail("topology.clusters", "expected an array");
      } else {
        for (std::size_t j = 0; j < cs->size(); ++j) {
          s.topology.clusters.push_back(
              read_graph(r, (*cs)[j], Reader::at("topology.clusters", j)));
        }
      }
    }
  }

  // gains
  if (const json* g = r.field(doc, "gains", "", true)) {
    if (const json* k = r.field(*g, "k", "gains", false)) {
      if (k->is_array()) {
        if (auto v = r.vector(*k, "gains.k", k->size())) s.gains.k = *v;
      } else {
        r.fail("gains.k", "expected an array");
      }
    }
    s.gains.epsilon = r.number(*g, "epsilon", "gains", true).value_or(1.0);
    s.gains.mu = r.number(*g, "mu", "gains", false);
    s.gains.kappa1 = r.number(*g, "kappa1", "gains", true).value_or(1.0);
    s.gains.kappa2 = r.number(*g, "kappa2", "gains", true).value_or(1.0);
  }

  // assumptions
  s.assumptions.box = Box::uniform(qbar, -10.0, 10.0);
  if (const json* a = r.field(doc, "assumptions", "", false)) {
    s.assumptions.omega = r.number(*a, "omega", "assumptions", false);
    s.assumptions.theta = r.number(*a, "theta", "assumptions", false);
    s.assumptions.samples =
        r.count(*a, "samples", "assumptions", false).value_or(200);
    if (const json* b = r.field(*a, "box", "assumptions", false)) {
      const auto lo = r.field(*b, "lo", "assumptions.box", true);
      const auto hi = r.field(*b, "hi", "assumptions.box", true);
      if (lo && hi) {
        auto vlo = r.vector(*lo, "assumptions.box.lo", qbar);
        auto vhi = r.vector(*hi, "assumptions.box.hi", qbar);
        if (vlo && vhi) s.assumptions.box = Box{*vlo, *vhi};
      }
    }
  }

  // integrator
  if (const json* in = r.field(doc, "integrator", "", false)) {
    auto& c = s.integrator;
    const std::string ip = "integrator";
    c.dt = r.number(*in, "dt", ip, false).value_or(c.dt);
    c.t_final = r.number(*in, "t_final", ip, false).value_or(c.t_final);
    c.record_every =
        r.count(*in, "record_every", ip, false).value_or(c.record_every);
    c.seed = r.count(*in, "seed", ip, false).value_or(c.seed);
    c.stop_tol = r.number(*in, "stop_tol", ip, false).value_or(c.stop_tol);
    c.stop_window =
        r.count(*in, "stop_window", ip, false).value_or(c.stop_window);
    if (const json* b = r.field(*in, "init_box", ip, false)) {
      if (auto v = r.vector(*b, "integrator.init_box", 2)) {
        c.init_lo = (*v)[0];
        c.init_hi = (*v)[1];
      }
    }
    if (const json* x0 = r.field(*in, "x0", ip, false)) {
      if (auto v = r.vector(*x0, "integrator.x0", qbar)) c.x0 = *v;
    }
    if (const json* y0 = r.field(*in, "y0", ip, false)) {
      if (auto v = r.vector(*y0, "integrator.y0", qbar)) {
        for (double e : *v) {
          if (e != 0.0) {
            r.issues.push_back(
                {ErrorCode::kValidationError, "integrator.y0",
                 "the consensus variable must start at y(0) = 0; nonzero "
                 "initial values are not allowed by the algorithm"});
            break;
          }
        }
      }
    }
  }

  if (!r.issues.empty()) throw ScenarioError(std::move(r.issues));
  auto issues = validate_scenario(s);
  if (!issues.empty()) throw ScenarioError(std::move(issues));
  return s;
}

std::vector<Issue> validate_scenario(const Scenario& s) {
  std::vector<Issue> out;
  auto add = [&out](const std::string& path, const std::string& msg) {
    out.push_back({ErrorCode::kValidationError, path, msg});
  };
  for (auto& p : validate_game(s.game)) add("game", p);
  if (!out.empty()) return out;

  bool topo_ok = true;
  for (auto& p : validate_topology(s.topology, s.game)) {
    add("topology", p);
    topo_ok = false;
  }
  for (auto& p : validate_log_domain(s.game, s.assumptions.box)) {
    add("assumptions.box", p);
  }

  const auto& g = s.gains;
  bool gains_ok = true;
  if (g.k.size() + 1 != s.game.order) {
    add("gains.k", "order " + std::to_string(s.game.order) + " needs " +
                       std::to_string(s.game.order - 1) +
                       " feedback coefficients, got " +
                       std::to_string(g.k.size()));
    gains_ok = false;
  } else if (!is_hurwitz(companion_matrix(g.k))) {
    add("gains.k", "characteristic polynomial has roots outside the open left "
                   "half plane");
  }
  if (!(g.epsilon > 0.0)) add("gains.epsilon", "must be > 0");
  if (g.mu && !(*g.mu > 0.0)) add("gains.mu", "must be > 0");
  if (!(g.kappa1 > 0.0)) add("gains.kappa1", "must be > 0");
  if (!(g.kappa2 > 0.0)) add("gains.kappa2", "must be > 0");
  gains_ok = gains_ok && g.epsilon > 0.0 && g.kappa2 > 0.0;

  const auto& a = s.assumptions;
  if (a.omega && !(*a.omega > 0.0)) add("assumptions.omega", "must be > 0");
  if (a.theta && !(*a.theta > 0.0)) add("assumptions.theta", "must be > 0");
  if (a.samples < 2) add("assumptions.samples", "must be >= 2");
  for (std::size_t d = 0; d < a.box.lo.size() && d < a.box.hi.size(); ++d) {
    if (!(a.box.hi[d] > a.box.lo[d])) {
      add("assumptions.box", "box is degenerate in coordinate " +
                                 std::to_string(d + 1));
      break;
    }
  }

  const auto& c = s.integrator;
  if (!(c.dt > 0.0)) add("integrator.dt", "must be > 0");
  if (!(c.t_final >= c.dt)) add("integrator.t_final", "must be >= dt");
  if (c.record_every == 0) add("integrator.record_every", "must be >= 1");
  if (c.stop_window == 0) add("integrator.stop_window", "must be >= 1");
  if (!(c.init_hi >= c.init_lo)) add("integrator.init_box", "needs lo <= hi");
  if (c.x0 && c.x0->size() != s.game.stacked_dim()) {
    add("integrator.x0", "must have q-bar entries");
  }
  if (topo_ok && gains_ok && c.dt > 0.0) {
    try {
      const ClosedLoop loop(s.game, s.topology, s.gains);
      if (c.dt > loop.stability_cap()) {
        add("integrator.dt", "dt = " + std::to_string(c.dt) +
                                 " exceeds the stability cap " +
                                 std::to_string(loop.stability_cap()));
      }
    } catch (const Error& e) {
      add("topology", e.what());
    }
  }
  return out;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError(
        {{ErrorCode::kSchemaError, "", "cannot open " + path.string()}});
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError({{ErrorCode::kSchemaError, "", e.what()}});
  }
  return parse_scenario_json(doc);
}

json to_json(const Scenario& s) {
  json clusters = json::array();
  for (const auto& c : s.game.clusters) {
    json players = json::array();
    for (const auto& f : c.players) {
      json ratios = json::array();
      for (const auto& t : f.ratios) {
        ratios.push_back({{"kind", t.kind == RatioKind::kSqrt ? "sqrt" : "log"},
                          {"alpha", t.alpha},
                          {"beta", t.beta},
                          {"gamma", t.gamma},
                          {"delta", t.delta}});
      }
      json couplings = json::array();
      for (const auto& cp : f.couplings) {
        couplings.push_back({{"cluster", cp.target.cluster + 1},
                             {"player", cp.target.player + 1},
                             {"coeff", cp.coeff}});
      }
      players.push_back(
          {{"form", form_name(f.form())},
           {"quadratic",
            {{"a", f.quadratic.a}, {"b", f.quadratic.b}, {"c", f.quadratic.c}}},
           {"ratios", ratios},
           {"couplings", couplings}});
    }
    clusters.push_back({{"label", c.label}, {"players", players}});
  }
  json cluster_graphs = json::array();
  for (const auto& g : s.topology.clusters) cluster_graphs.push_back(graph_json(g));

  const auto& c = s.integrator;
  return {
      {"name", s.name},
      {"description", s.description},
      {"game",
       {{"decision_dim", s.game.q},
        {"order", s.game.order},
        {"clusters", clusters}}},
      {"topology",
       {{"global", graph_json(s.topology.global)},
        {"clusters", cluster_graphs}}},
      {"gains",
       {{"k", s.gains.k},
        {"epsilon", s.gains.epsilon},
        {"mu", opt(s.gains.mu)},
        {"kappa1", s.gains.kappa1},
        {"kappa2", s.gains.kappa2}}},
      {"assumptions",
       {{"omega", opt(s.assumptions.omega)},
        {"theta", opt(s.assumptions.theta)},
        {"box", {{"lo", s.assumptions.box.lo}, {"hi", s.assumptions.box.hi}}},
        {"samples", s.assumptions.samples}}},
      {"integrator",
       {{"dt", c.dt},
        {"t_final", c.t_final},
        {"record_every", c.record_every},
        {"seed", c.seed},
        {"init_box", {c.init_lo, c.init_hi}},
        {"x0", opt(c.x0)},
        {"stop_tol", c.stop_tol},
        {"stop_window", c.stop_window}}},
  };
}

void write_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kInvalidArgument, "cannot write " + path.string());
  }
  out << to_json(s).dump(2) << '\n';
}

std::string config_hash(const Scenario& s) {
  const std::string text = to_json(s).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mcg
