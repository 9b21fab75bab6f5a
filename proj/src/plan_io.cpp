// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/plan_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tagplan::io {

using json = nlohmann::ordered_json;

PlanFile build_plan(const model::ProjectModel& m, const ga::Chromosome& c, double utility,
                    double cost, double score, std::uint64_t seed) {
  PlanFile plan;
  plan.project_hash = m.spec.content_hash;
  plan.seed = seed;
  plan.metric = sensing::to_string(m.spec.planning.metric);
  plan.utility = utility;
  plan.cost = cost;
  plan.score = score;
  plan.chromosome = c;

  const valuation::ChangeCounts counts = valuation::count_changes(m, c, m.spec.cost.k_wear);
  plan.placements = counts.placements;
  plan.removals = counts.removals;
  plan.replacements = counts.replacements;

  for (std::size_t pi = 0; pi < m.n_phases(); ++pi) {
    PlanPhase phase;
    phase.phase = static_cast<int>(pi);
    phase.name = m.phases[pi].name;
    for (std::size_t si = 0; si < m.n_slots(); ++si) {
      const bool feasible = m.feasible(pi, si);
      const int g = feasible ? c.genes[m.gene_index(pi, si)] : 0;
      const bool prev_feasible = pi > 0 && m.feasible(pi - 1, si);
      const int prev = prev_feasible ? c.genes[m.gene_index(pi - 1, si)] : 0;

      const auto make_tag = [&](int size_value, const std::string& action) {
        const sensing::ActiveSlot as = m.active_slot(si, size_value);
        PlanTag tag;
        tag.location = static_cast<int>(si);
        tag.anchor = as.option.anchor;
        tag.normal = as.option.normal;
        tag.height = as.height;
        tag.size = as.size;
        tag.action = action;
        return tag;
      };

      if (g > 0) {
        if (prev == 0) {
          phase.tags.push_back(make_tag(g, "place"));
        } else if (g != prev) {
          phase.tags.push_back(make_tag(prev, "remove"));
          phase.tags.push_back(make_tag(g, "place"));
        } else {
          phase.tags.push_back(make_tag(g, "keep"));
        }
      } else if (prev > 0 && feasible) {
        phase.tags.push_back(make_tag(prev, "remove"));
      }
    }
    plan.phases.push_back(std::move(phase));
  }
  return plan;
}

std::string plan_to_json(const PlanFile& plan) {
  json root;
  root["version"] = plan.version;
  root["tool_version"] = plan.tool_version;
  root["project_hash"] = plan.project_hash;
  root["seed"] = plan.seed;
  root["metric"] = plan.metric;
  root["scores"] = {{"utility", plan.utility}, {"cost", plan.cost}, {"score", plan.score}};
  root["counts"] = {{"placements", plan.placements},
                    {"removals", plan.removals},
                    {"replacements", plan.replacements}};
  root["genes"] = plan.chromosome.genes;

  json phases = json::array();
  for (const PlanPhase& p : plan.phases) {
    json tags = json::array();
    for (const PlanTag& t : p.tags) {
      tags.push_back({{"location", t.location},
                      {"anchor", {t.anchor.x, t.anchor.y}},
                      {"normal", {t.normal.x, t.normal.y}},
                      {"height", t.height},
                      {"size", t.size},
                      {"action", t.action}});
    }
    phases.push_back({{"phase", p.phase}, {"name", p.name}, {"tags", tags}});
  }
  root["phases"] = phases;
  return root.dump(2) + "\n";
}

PlanFile plan_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw model::ProjectSchemaError(std::string("plan JSON parse error: ") + e.what());
  }
  try {
    PlanFile plan;
    plan.version = root.at("version").get<int>();
    plan.tool_version = root.at("tool_version").get<std::string>();
    plan.project_hash = root.at("project_hash").get<std::uint64_t>();
    plan.seed = root.at("seed").get<std::uint64_t>();
    plan.metric = root.at("metric").get<std::string>();
    plan.utility = root.at("scores").at("utility").get<double>();
    plan.cost = root.at("scores").at("cost").get<double>();
    plan.score = root.at("scores").at("score").get<double>();
    plan.placements = root.at("counts").at("placements").get<std::vector<long>>();
    plan.removals = root.at("counts").at("removals").get<long>();
    plan.replacements = root.at("counts").at("replacements").get<long>();
    plan.chromosome.genes = root.at("genes").get<std::vector<std::uint8_t>>();
    for (const json& p : root.at("phases")) {
      PlanPhase phase;
      phase.phase = p.at("phase").get<int>();
      phase.name = p.value("name", std::string());
      for (const json& t : p.at("tags")) {
        PlanTag tag;
        tag.location = t.at("location").get<int>();
        tag.anchor = {t.at("anchor")[0].get<double>(), t.at("anchor")[1].get<double>()};
        tag.normal = {t.at("normal")[0].get<double>(), t.at("normal")[1].get<double>()};
        tag.height = t.at("height").get<double>();
        tag.size = t.at("size").get<double>();
        tag.action = t.at("action").get<std::string>();
        phase.tags.push_back(std::move(tag));
      }
      plan.phases.push_back(std::move(phase));
    }
    return plan;
  } catch (const json::exception& e) {
    throw model::ProjectSchemaError(std::string("plan schema error: ") + e.what());
  }
}

void save_plan(const PlanFile& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write plan file: " + path);
  out << plan_to_json(plan);
}

PlanFile load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw model::ProjectSchemaError("cannot open plan file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return plan_from_json(ss.str());
}

}  // namespace tagplan::io
