// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/project_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tagplan::io {

using json = nlohmann::ordered_json;
using model::ProjectSchemaError;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw ProjectSchemaError(path + ": " + why);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double get_number(const json& obj, const std::string& key, double fallback,
                  const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return as_number(obj.at(key), path + "." + key);
}

int get_int(const json& obj, const std::string& key, int fallback, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

geom::Vec2 as_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "expected [x, y]");
  return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

geom::Polygon as_polygon(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() < 3) fail(path, "expected an array of at least 3 [x, y] points");
  geom::Polygon p;
  for (std::size_t i = 0; i < v.size(); ++i)
    p.pts.push_back(as_point(v[i], path + "[" + std::to_string(i) + "]"));
  return p;
}

std::vector<double> as_number_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

spatial::Pose parse_transform(const json& v, const std::string& path) {
  const json& rot = require(v, "rotation", path);
  if (!rot.is_array() || rot.size() != 9) fail(path + ".rotation", "expected 9 numbers, row-major");
  const json& tr = require(v, "translation", path);
  if (!tr.is_array() || tr.size() != 3) fail(path + ".translation", "expected 3 numbers");
  spatial::Pose p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      p.C(i, j) = as_number(rot[static_cast<std::size_t>(3 * i + j)], path + ".rotation");
  for (int i = 0; i < 3; ++i) p.r(i) = as_number(tr[static_cast<std::size_t>(i)], path + ".translation");
  return p;
}

}  // namespace

model::ProjectSpec parse_project(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ProjectSchemaError(std::string("JSON parse error: ") + e.what());
  }
  if (!root.is_object()) throw ProjectSchemaError("top level: expected an object");

  model::ProjectSpec spec;
  spec.name = root.value("name", std::string("project"));
  if (root.contains("origin")) spec.origin = as_point(root.at("origin"), "origin");

  // Camera.
  const json& cam = require(root, "camera", "");
  sensing::CameraModel& c = spec.camera;
  c.fu = as_number(require(cam, "fu", "camera"), "camera.fu");
  c.fv = as_number(require(cam, "fv", "camera"), "camera.fv");
  c.cu = as_number(require(cam, "cu", "camera"), "camera.cu");
  c.cv = as_number(require(cam, "cv", "camera"), "camera.cv");
  c.width = as_number(require(cam, "width", "camera"), "camera.width");
  c.height = as_number(require(cam, "height", "camera"), "camera.height");
  c.dov = get_number(cam, "dov", 8.0, "camera");
  c.sl_min = get_number(cam, "sl_min", 20.0, "camera");
  c.near_z = get_number(cam, "near_z", 0.01, "camera");
  c.t_cv = cam.contains("t_cv") ? parse_transform(cam.at("t_cv"), "camera.t_cv")
                                : sensing::forward_camera_extrinsics();
  spec.noise.sigma_px = get_number(cam, "sigma_px", 1.0, "camera");

  // Planning parameters.
  const json planning = root.value("planning", json::object());
  valuation::PlanningParams& pp = spec.planning;
  pp.cell_size = get_number(planning, "cell_size", 0.5, "planning");
  pp.delta_theta_deg = get_number(planning, "delta_theta", 20.0, "planning");
  pp.d_res = get_number(planning, "d_res", 0.3, "planning");
  if (planning.contains("tag_sizes"))
    pp.tag_sizes = as_number_list(planning.at("tag_sizes"), "planning.tag_sizes");
  if (planning.contains("metric")) {
    if (!planning.at("metric").is_string()) fail("planning.metric", "expected a string");
    try {
      pp.metric = sensing::metric_from_string(planning.at("metric").get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("planning.metric", e.what());
    }
  }
  pp.max_tags_per_phase = get_int(planning, "max_tags_per_phase", 0, "planning");
  if (planning.contains("normalize")) {
    if (!planning.at("normalize").is_boolean()) fail("planning.normalize", "expected a boolean");
    pp.normalize = planning.at("normalize").get<bool>();
  }

  // Cost parameters (cost is disabled when the block is absent).
  if (root.contains("cost")) {
    spec.cost_enabled = true;
    const json& cost = root.at("cost");
    valuation::CostParams& cp = spec.cost;
    if (cost.contains("enabled")) {
      if (!cost.at("enabled").is_boolean()) fail("cost.enabled", "expected a boolean");
      spec.cost_enabled = cost.at("enabled").get<bool>();
    }
    cp.s_min = get_number(cost, "s_min", 0.06, "cost");
    cp.p_c = get_number(cost, "p_c", 0.02, "cost");
    if (cost.contains("alpha")) {
      cp.alpha = as_number_list(cost.at("alpha"), "cost.alpha");
    } else if (pp.tag_sizes.size() == 1) {
      cp.alpha = {1.0};
    } else {
      fail("cost.alpha", "required when several tag sizes are available");
    }
    cp.lambda_rmv = get_number(cost, "lambda_rmv", 1.0, "cost");
    cp.lambda_rpl = get_number(cost, "lambda_rpl", 0.0, "cost");
    cp.k_wear = get_int(cost, "k_wear", 1000, "cost");
  }

  // GA parameters.
  const json gaj = root.value("ga", json::object());
  ga::GaParams& gp = spec.ga;
  gp.population = get_int(gaj, "population", 50, "ga");
  gp.max_iters = get_int(gaj, "max_iters", 5000, "ga");
  if (gaj.contains("crossover")) {
    if (!gaj.at("crossover").is_string()) fail("ga.crossover", "expected a string");
    try {
      gp.crossover = ga::crossover_from_string(gaj.at("crossover").get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("ga.crossover", e.what());
    }
  }
  if (gaj.contains("mutation")) {
    if (!gaj.at("mutation").is_string()) fail("ga.mutation", "expected a string");
    try {
      gp.mutation = ga::mutation_from_string(gaj.at("mutation").get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("ga.mutation", e.what());
    }
  }
  gp.mutation_rate = get_number(gaj, "mutation_rate", -1.0, "ga");
  gp.elitism = get_int(gaj, "elitism", 2, "ga");
  gp.stall_window = get_int(gaj, "stall_window", 0, "ga");
  gp.seed = static_cast<std::uint64_t>(get_int(gaj, "seed", 0, "ga"));

  // Phases.
  const json& phases = require(root, "phases", "");
  if (!phases.is_array() || phases.empty()) fail("phases", "expected a non-empty array");
  for (std::size_t pi = 0; pi < phases.size(); ++pi) {
    const std::string path = "phases[" + std::to_string(pi) + "]";
    const json& ph = phases[pi];
    if (!ph.is_object()) fail(path, "expected an object");
    model::PhaseSpec ps;
    ps.name = ph.value("name", std::string());

    for (const char* key : {"obstacles", "no_fly"}) {
      if (!ph.contains(key)) continue;
      const json& arr = ph.at(key);
      if (!arr.is_array()) fail(path + "." + key, "expected an array of polygons");
      auto& target = std::string(key) == "obstacles" ? ps.obstacles : ps.no_fly;
      for (std::size_t i = 0; i < arr.size(); ++i)
        target.push_back(as_polygon(arr[i], path + "." + key + "[" + std::to_string(i) + "]"));
    }

    const json& rois = require(ph, "rois", path);
    if (!rois.is_array() || rois.empty()) fail(path + ".rois", "expected a non-empty array");
    for (std::size_t i = 0; i < rois.size(); ++i) {
      const std::string rpath = path + ".rois[" + std::to_string(i) + "]";
      scene::Roi roi;
      if (rois[i].is_array()) {
        roi.polygon = as_polygon(rois[i], rpath);
      } else {
        roi.polygon = as_polygon(require(rois[i], "polygon", rpath), rpath + ".polygon");
        roi.importance = get_number(rois[i], "importance", 1.0, rpath);
      }
      ps.rois.push_back(std::move(roi));
    }

    if (ph.contains("installable")) {
      const json& inst = ph.at("installable");
      if (!inst.is_array()) fail(path + ".installable", "expected an array of [polygon, edge]");
      for (std::size_t i = 0; i < inst.size(); ++i) {
        const json& e = inst[i];
        const std::string epath = path + ".installable[" + std::to_string(i) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
          fail(epath, "expected [polygon index, edge index]");
        ps.installable.push_back({e[0].get<int>(), e[1].get<int>()});
      }
    }

    if (ph.contains("flight_altitudes"))
      ps.flight_altitudes = as_number_list(ph.at("flight_altitudes"), path + ".flight_altitudes");
    if (ph.contains("install_heights"))
      ps.install_heights = as_number_list(ph.at("install_heights"), path + ".install_heights");

    spec.phases.push_back(std::move(ps));
  }

  spec.content_hash = content_hash(spec);
  return spec;
}

model::ProjectSpec load_project(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProjectSchemaError("cannot open project file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_project(ss.str());
}

namespace {

json polygon_json(const geom::Polygon& p) {
  json arr = json::array();
  for (const geom::Vec2& v : p.pts) arr.push_back({v.x, v.y});
  return arr;
}

}  // namespace

std::string canonical_json(const model::ProjectSpec& spec, bool table_scope) {
  json root;
  root["name"] = spec.name;
  root["origin"] = {spec.origin.x, spec.origin.y};

  json cam;
  cam["fu"] = spec.camera.fu;
  cam["fv"] = spec.camera.fv;
  cam["cu"] = spec.camera.cu;
  cam["cv"] = spec.camera.cv;
  cam["width"] = spec.camera.width;
  cam["height"] = spec.camera.height;
  cam["dov"] = spec.camera.dov;
  cam["sl_min"] = spec.camera.sl_min;
  cam["near_z"] = spec.camera.near_z;
  json rot = json::array();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) rot.push_back(spec.camera.t_cv.C(i, j));
  cam["t_cv"] = {{"rotation", rot},
                 {"translation", {spec.camera.t_cv.r(0), spec.camera.t_cv.r(1), spec.camera.t_cv.r(2)}}};
  cam["sigma_px"] = spec.noise.sigma_px;
  root["camera"] = cam;

  json planning;
  planning["cell_size"] = spec.planning.cell_size;
  planning["delta_theta"] = spec.planning.delta_theta_deg;
  planning["d_res"] = spec.planning.d_res;
  planning["tag_sizes"] = spec.planning.tag_sizes;
  planning["metric"] = sensing::to_string(spec.planning.metric);
  planning["max_tags_per_phase"] = spec.planning.max_tags_per_phase;
  planning["normalize"] = spec.planning.normalize;
  root["planning"] = planning;

  if (!table_scope) {
    json cost;
    cost["enabled"] = spec.cost_enabled;
    cost["s_min"] = spec.cost.s_min;
    cost["p_c"] = spec.cost.p_c;
    cost["alpha"] = spec.cost.alpha;
    cost["lambda_rmv"] = spec.cost.lambda_rmv;
    cost["lambda_rpl"] = spec.cost.lambda_rpl;
    cost["k_wear"] = spec.cost.k_wear;
    root["cost"] = cost;

    json gaj;
    gaj["population"] = spec.ga.population;
    gaj["max_iters"] = spec.ga.max_iters;
    gaj["crossover"] = static_cast<int>(spec.ga.crossover);
    gaj["mutation"] = static_cast<int>(spec.ga.mutation);
    gaj["mutation_rate"] = spec.ga.mutation_rate;
    gaj["elitism"] = spec.ga.elitism;
    gaj["stall_window"] = spec.ga.stall_window;
    gaj["seed"] = spec.ga.seed;
    root["ga"] = gaj;
  }

  json phases = json::array();
  for (const model::PhaseSpec& ps : spec.phases) {
    json ph;
    ph["name"] = ps.name;
    json obstacles = json::array();
    for (const geom::Polygon& p : ps.obstacles) obstacles.push_back(polygon_json(p));
    ph["obstacles"] = obstacles;
    json rois = json::array();
    for (const scene::Roi& r : ps.rois)
      rois.push_back({{"polygon", polygon_json(r.polygon)}, {"importance", r.importance}});
    ph["rois"] = rois;
    json no_fly = json::array();
    for (const geom::Polygon& p : ps.no_fly) no_fly.push_back(polygon_json(p));
    ph["no_fly"] = no_fly;
    json inst = json::array();
    for (const scene::InstallableEdge& e : ps.installable)
      inst.push_back({e.polygon_index, e.edge_index});
    ph["installable"] = inst;
    ph["flight_altitudes"] = ps.flight_altitudes;
    ph["install_heights"] = ps.install_heights;
    phases.push_back(std::move(ph));
  }
  root["phases"] = phases;
  return root.dump();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t content_hash(const model::ProjectSpec& spec) {
  return fnv1a64(canonical_json(spec, false));
}

std::uint64_t table_hash(const model::ProjectSpec& spec) {
  return fnv1a64(canonical_json(spec, true));
}

}  // namespace tagplan::io
