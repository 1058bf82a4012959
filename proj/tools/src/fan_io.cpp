#include "fan_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace stackheight::cli {

using nlohmann::json;

FanFormatError::FanFormatError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what), line_(line), column_(column) {}

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw FanFormatError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + e.what(),
                         line, column);
  }
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) throw FanFormatError(std::string("missing field '") + name + "'");
  return obj.at(name);
}

std::vector<std::int64_t> int_array(const json& v, const std::string& what) {
  if (!v.is_array()) throw FanFormatError(what + " must be an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw FanFormatError(what + " must be an array of integers");
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

}  // namespace

StackyFan parse_fan(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw FanFormatError("fan file must be a JSON object");
  StackyFan fan;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw FanFormatError("'name' must be a string");
    fan.name = doc["name"].get<std::string>();
  }
  const json& rank = field(doc, "rig_rank");
  if (!rank.is_number_integer()) throw FanFormatError("'rig_rank' must be an integer");
  fan.rig_rank = rank.get<int>();
  if (doc.contains("torsion_orders")) fan.torsion_orders = int_array(doc["torsion_orders"], "'torsion_orders'");

  const json& rays = field(doc, "rays");
  if (!rays.is_array()) throw FanFormatError("'rays' must be an array");
  std::map<std::string, std::size_t> index;
  for (const auto& r : rays) {
    Ray ray;
    const json& id = field(r, "id");
    if (!id.is_string()) throw FanFormatError("ray 'id' must be a string");
    ray.id = id.get<std::string>();
    ray.b = int_array(field(r, "b"), "ray 'b'");
    if (r.contains("torsion")) ray.torsion = int_array(r["torsion"], "ray 'torsion'");
    index.emplace(ray.id, fan.rays.size());
    fan.rays.push_back(std::move(ray));
  }

  const json& cones = field(doc, "max_cones");
  if (!cones.is_array()) throw FanFormatError("'max_cones' must be an array");
  for (const auto& c : cones) {
    if (!c.is_array()) throw FanFormatError("each maximal cone must be an array of ray ids");
    std::vector<std::size_t> cone;
    for (const auto& id : c) {
      if (!id.is_string()) throw FanFormatError("each maximal cone must be an array of ray ids");
      auto it = index.find(id.get<std::string>());
      cone.push_back(it == index.end() ? fan.rays.size() : it->second);
    }
    fan.max_cones.push_back(std::move(cone));
  }
  return fan;
}

StackyFan load_fan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read fan file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_fan(buf.str());
}

json fan_to_json(const StackyFan& fan) {
  json doc = json::object();
  doc["name"] = fan.name;
  doc["rig_rank"] = fan.rig_rank;
  doc["torsion_orders"] = fan.torsion_orders;
  doc["rays"] = json::array();
  for (const auto& r : fan.rays) {
    json ray = {{"id", r.id}, {"b", r.b}};
    if (!r.torsion.empty()) ray["torsion"] = r.torsion;
    doc["rays"].push_back(ray);
  }
  doc["max_cones"] = json::array();
  for (const auto& c : fan.max_cones) {
    json cone = json::array();
    for (auto i : c) cone.push_back(i < fan.rays.size() ? fan.rays[i].id : std::string("?"));
    doc["max_cones"].push_back(cone);
  }
  return doc;
}

StackyFan normalize(const StackyFan& fan) {
  StackyFan out = fan;
  for (auto& c : out.max_cones) std::sort(c.begin(), c.end());
  std::sort(out.max_cones.begin(), out.max_cones.end());
  return out;
}

RaisedVector parse_raised(const Fan& fan, const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_array()) throw FanFormatError("raised vector must be a JSON array");
  const std::size_t n = fan.num_rays() + fan.num_twisted();
  if (doc.size() != n)
    throw FanFormatError("raised vector needs " + std::to_string(n) + " entries (" +
                         std::to_string(fan.num_rays()) + " rays, " + std::to_string(fan.num_twisted()) +
                         " twisted sectors)");
  std::vector<Rational> entries;
  for (const auto& v : doc) {
    if (v.is_string())
      entries.push_back(parse_rational(v.get<std::string>()));
    else if (v.is_number())
      entries.push_back(parse_rational(v.dump()));
    else
      throw FanFormatError("raised vector entries must be numbers or rational strings");
  }
  return RaisedVector(fan.num_rays(), std::move(entries));
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json number(double v) {
  if (!std::isfinite(v)) return format_number(v);
  return std::stod(format_number(v));
}

json rational_json(const Rational& q) { return to_string(q); }

}  // namespace stackheight::cli
