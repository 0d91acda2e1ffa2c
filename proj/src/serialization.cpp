#include "qssp/serialization.hpp"

#include "qssp/error.hpp"

#include <set>
#include <string>

namespace qssp::serialization {
namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::string require_string(const json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

const json& require_array(const json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "' must be an array");
  return v;
}

std::int64_t require_int(const json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer()) throw ParseError(std::string("field '") + key + "' must be an integer");
  return v.get<std::int64_t>();
}

double require_number(const json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number()) throw ParseError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

json capacity_to_json(Capacity c) {
  if (c.is_unbounded()) return "unbounded";
  return c.value();
}

Capacity capacity_from_json(const json& j, std::string_view field) {
  if (j.is_string() && j.get<std::string>() == "unbounded") return Capacity::unbounded();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Capacity{j.get<std::int64_t>()};
  throw ParseError("field '" + std::string(field) +
                   "' must be a non-negative integer or \"unbounded\"");
}

// --- channel ----------------------------------------------------------------

namespace {

template <class F>
void for_each_channel_field(channel::ChannelParams& p, F&& f) {
  f("wavelength", p.wavelength);
  f("pump_power", p.pump_power);
  f("rep_rate", p.rep_rate);
  f("eta_s", p.eta_s);
  f("eta_g", p.eta_g);
  f("r_s", p.r_s);
  f("r_g", p.r_g);
  f("t_A", p.t_A);
  f("theta_e", p.theta_e);
  f("P_d_day", p.P_d_day);
  f("P_d_night", p.P_d_night);
  f("eta_zenith_atm", p.eta_zenith_atm);
}

}  // namespace

json to_json(const channel::ChannelParams& p) {
  json out = json::object();
  auto copy = p;
  for_each_channel_field(copy, [&](const char* key, double& v) { out[key] = v; });
  return out;
}

channel::ChannelParams channel_params_from_json(const json& j, channel::ChannelParams base) {
  if (!j.is_object()) throw ParseError("channel parameters must be a JSON object");
  std::set<std::string> known;
  for_each_channel_field(base, [&](const char* key, double& v) {
    known.insert(key);
    if (j.contains(key)) v = require_number(j, key);
  });
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ParseError("unknown channel parameter '" + key + "'");
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("channel parameters: ") + e.what());
  }
  return base;
}

// --- instance / assignment --------------------------------------------------

json to_json(const scheduler::QsspInstance& inst) {
  json out;
  out["satellites"] = json::array();
  for (const auto& s : inst.satellites()) {
    out["satellites"].push_back({{"id", s.id}, {"transmitters", s.transmitters}});
  }
  out["stations"] = json::array();
  for (const auto& g : inst.stations()) {
    out["stations"].push_back({{"id", g.id}, {"receivers", capacity_to_json(g.receivers)}});
  }
  out["pairs"] = json::array();
  for (const auto& p : inst.pairs()) {
    out["pairs"].push_back({{"id", p.id},
                            {"a", inst.stations()[static_cast<std::size_t>(p.station_a)].id},
                            {"b", inst.stations()[static_cast<std::size_t>(p.station_b)].id},
                            {"max_connections", capacity_to_json(p.max_connections)}});
  }
  out["weights"] = json::array();
  for (const auto& [k, w] : inst.weights()) {
    out["weights"].push_back({{"satellite", inst.satellites()[static_cast<std::size_t>(k.satellite)].id},
                              {"pair", inst.pairs()[static_cast<std::size_t>(k.pair)].id},
                              {"weight", w}});
  }
  return out;
}

scheduler::QsspInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance must be a JSON object");
  scheduler::QsspInstance::Builder b;
  auto optional_array = [&](const char* key) -> const json& {
    static const json empty = json::array();
    return j.contains(key) ? require_array(j, key) : empty;
  };
  for (const auto& s : optional_array("satellites")) {
    b.satellite(require_string(s, "id"), require_int(s, "transmitters"));
  }
  for (const auto& g : optional_array("stations")) {
    b.station(require_string(g, "id"), capacity_from_json(require(g, "receivers"), "receivers"));
  }
  for (const auto& p : optional_array("pairs")) {
    b.pair(require_string(p, "id"), require_string(p, "a"), require_string(p, "b"),
           capacity_from_json(require(p, "max_connections"), "max_connections"));
  }
  for (const auto& w : optional_array("weights")) {
    b.weight(require_string(w, "satellite"), require_string(w, "pair"), require_number(w, "weight"));
  }
  try {
    return b.build();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

json to_json(const scheduler::QsspInstance& inst, const scheduler::Assignment& a) {
  json out;
  out["objective"] = a.objective;
  out["assignment"] = json::array();
  for (const auto& [k, x] : a.x) {
    out["assignment"].push_back({{"satellite", inst.satellites()[static_cast<std::size_t>(k.satellite)].id},
                                 {"pair", inst.pairs()[static_cast<std::size_t>(k.pair)].id},
                                 {"x", x},
                                 {"weight", inst.weight(k)}});
  }
  return out;
}

scheduler::Assignment assignment_from_json(const scheduler::QsspInstance& inst, const json& j) {
  scheduler::Assignment a;
  for (const auto& e : require_array(j, "assignment")) {
    const auto sat = require_string(e, "satellite");
    const auto pair = require_string(e, "pair");
    const auto i = inst.satellite_index(sat);
    const auto p = inst.pair_index(pair);
    if (!i) throw ParseError("unknown satellite '" + sat + "'");
    if (!p) throw ParseError("unknown pair '" + pair + "'");
    const auto x = require_int(e, "x");
    if (x != 0) a.x[{*i, *p}] += x;
  }
  a.objective = scheduler::objective(inst, a);
  return a;
}

// --- hypergraphs ------------------------------------------------------------

scheduler::ThreeDMInstance hypergraph_from_json(const json& j) {
  scheduler::ThreeDMInstance h;
  auto names = [&](const char* key) {
    std::vector<std::string> out;
    for (const auto& v : require_array(j, key)) {
      if (!v.is_string()) throw ParseError(std::string("'") + key + "' entries must be strings");
      out.push_back(v.get<std::string>());
    }
    return out;
  };
  h.v1 = names("V1");
  h.v2 = names("V2");
  h.v3 = names("V3");
  for (const auto& e : require_array(j, "edges")) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string() ||
        !e[2].is_string()) {
      throw ParseError("each hyperedge must be an array of three vertex names");
    }
    h.edges.push_back({e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<std::string>()});
  }
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid hypergraph: ") + e.what());
  }
  return h;
}

json to_json(const scheduler::ThreeDMInstance& h) {
  json edges = json::array();
  for (const auto& e : h.edges) edges.push_back({e[0], e[1], e[2]});
  return {{"V1", h.v1}, {"V2", h.v2}, {"V3", h.v3}, {"edges", edges}};
}

json to_json(const scheduler::ThreeDMInstance& h, const scheduler::Reduction& r) {
  json out;
  out["instance"] = to_json(r.instance);
  out["correspondence"] = json::array();
  for (std::size_t k = 0; k < h.edges.size(); ++k) {
    const auto& c = r.correspondence[k];
    out["correspondence"].push_back(
        {{"hyperedge", {h.edges[k][0], h.edges[k][1], h.edges[k][2]}},
         {"satellite", r.instance.satellites()[static_cast<std::size_t>(c.satellite)].id},
         {"pair", r.instance.pairs()[static_cast<std::size_t>(c.pair)].id}});
  }
  return out;
}

}  // namespace qssp::serialization
