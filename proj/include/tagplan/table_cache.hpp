// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <string>

#include "tagplan/valuation.hpp"

namespace tagplan::io {

/// Binary FIM cache, little-endian, keyed by the table-scope content hash.
void save_table_cache(const valuation::FimTable& table, std::uint64_t hash,
                      const std::string& path);

/// Loads a cache into `table` when the file exists and its hash matches;
/// returns false (leaving the table untouched) otherwise.
bool load_table_cache(valuation::FimTable& table, std::uint64_t hash, const std::string& path);

}  // namespace tagplan::io
