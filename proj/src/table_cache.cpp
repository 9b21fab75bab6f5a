// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/table_cache.hpp"

#include <cstring>
#include <fstream>

namespace tagplan::io {

namespace {

constexpr char kMagic[4] = {'T', 'F', 'I', 'M'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return static_cast<bool>(in);
}

}  // namespace

void save_table_cache(const valuation::FimTable& table, std::uint64_t hash,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write FIM cache: " + path);
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, hash);
  put(out, static_cast<std::uint32_t>(table.phase_data().size()));
  for (const auto& pd : table.phase_data()) {
    put(out, static_cast<std::uint64_t>(pd.pose_offset.size()));
    out.write(reinterpret_cast<const char*>(pd.pose_offset.data()),
              static_cast<std::streamsize>(pd.pose_offset.size() * sizeof(std::uint32_t)));
    put(out, static_cast<std::uint64_t>(pd.entries.size()));
    for (const auto& e : pd.entries) {
      put(out, e.slot);
      put(out, e.size_value);
      out.write(reinterpret_cast<const char*>(e.fim.data()),
                static_cast<std::streamsize>(e.fim.size() * sizeof(float)));
    }
  }
}

bool load_table_cache(valuation::FimTable& table, std::uint64_t hash, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) return false;
  std::uint32_t version = 0;
  std::uint64_t file_hash = 0;
  if (!get(in, version) || version != kVersion) return false;
  if (!get(in, file_hash) || file_hash != hash) return false;

  std::uint32_t n_phases = 0;
  if (!get(in, n_phases)) return false;
  std::vector<valuation::FimTable::PhaseData> phases(n_phases);
  for (auto& pd : phases) {
    std::uint64_t n_offsets = 0;
    if (!get(in, n_offsets)) return false;
    pd.pose_offset.resize(n_offsets);
    in.read(reinterpret_cast<char*>(pd.pose_offset.data()),
            static_cast<std::streamsize>(n_offsets * sizeof(std::uint32_t)));
    if (!in) return false;
    std::uint64_t n_entries = 0;
    if (!get(in, n_entries)) return false;
    pd.entries.resize(n_entries);
    for (auto& e : pd.entries) {
      if (!get(in, e.slot)) return false;
      if (!get(in, e.size_value)) return false;
      in.read(reinterpret_cast<char*>(e.fim.data()),
              static_cast<std::streamsize>(e.fim.size() * sizeof(float)));
      if (!in) return false;
    }
  }
  table.adopt(std::move(phases));
  return true;
}

}  // namespace tagplan::io
