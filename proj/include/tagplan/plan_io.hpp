// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tagplan/ga.hpp"
#include "tagplan/project_model.hpp"
#include "tagplan/valuation.hpp"

namespace tagplan::io {

inline constexpr const char* kToolVersion = "0.1.0";

struct PlanTag {
  int location = 0;  // slot id
  geom::Vec2 anchor;
  geom::Vec2 normal;
  double height = 0.0;
  double size = 0.0;
  std::string action;  // place | keep | remove
};

struct PlanPhase {
  int phase = 0;
  std::string name;
  std::vector<PlanTag> tags;
};

struct PlanFile {
  int version = 1;
  std::string tool_version = kToolVersion;
  std::uint64_t project_hash = 0;
  std::uint64_t seed = 0;
  std::string metric = "trace";
  double utility = 0.0;
  double cost = 0.0;
  double score = 0.0;
  std::vector<long> placements;
  long removals = 0;
  long replacements = 0;
  ga::Chromosome chromosome;
  std::vector<PlanPhase> phases;
};

/// Derives the per-phase place/keep/remove actions and summary counts from a
/// chromosome.
PlanFile build_plan(const model::ProjectModel& m, const ga::Chromosome& c, double utility,
                    double cost, double score, std::uint64_t seed);

std::string plan_to_json(const PlanFile& plan);
PlanFile plan_from_json(const std::string& text);
void save_plan(const PlanFile& plan, const std::string& path);
PlanFile load_plan(const std::string& path);

}  // namespace tagplan::io
