// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <string>

#include "tagplan/project_model.hpp"

namespace tagplan::io {

/// Parses and validates a project file (see docs in README). Throws
/// model::ProjectSchemaError with a field path on any schema violation.
model::ProjectSpec parse_project(const std::string& json_text);
model::ProjectSpec load_project(const std::string& path);

/// Canonical serialization of the parsed spec; equal specs hash equal
/// regardless of input formatting. With `table_scope` set, the GA and cost
/// blocks are omitted (they do not affect the FIM table).
std::string canonical_json(const model::ProjectSpec& spec, bool table_scope = false);

/// FNV-1a 64-bit over the canonical serialization.
std::uint64_t content_hash(const model::ProjectSpec& spec);
std::uint64_t table_hash(const model::ProjectSpec& spec);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace tagplan::io
