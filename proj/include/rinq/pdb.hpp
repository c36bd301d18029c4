// Copyright 2026 The rinq Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

// Legacy PDB text parsing and C-alpha extraction.
//
// Records are read by fixed column (1-based, inclusive), never by splitting on
// whitespace, because neighbouring fields may abut:
//
//   atom name 13-16   altLoc 17   resName 18-20   chainID 22
//   resSeq 23-26      iCode 27    x 31-38  y 39-46  z 47-54
//   occupancy 55-60
//
// Only ATOM records are kept. HETATM, ANISOU, TER and the rest are skipped.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "rinq/error.hpp"

namespace rinq {

using Vec3 = std::array<double, 3>;

struct ResidueId {
  char chain_id = ' ';
  int res_seq = 0;
  std::optional<char> insertion_code;

  friend auto operator<=>(const ResidueId& a, const ResidueId& b) {
    // Residues without an insertion code precede 27A, 27B, ...
    return std::tuple(a.chain_id, a.res_seq, a.insertion_code.value_or('\0')) <=>
           std::tuple(b.chain_id, b.res_seq, b.insertion_code.value_or('\0'));
  }
  friend bool operator==(const ResidueId&, const ResidueId&) = default;
};

struct ResidueRecord {
  ResidueId id;
  std::string res_name;
  Vec3 ca_position{};

  char chain_id() const noexcept { return id.chain_id; }
  int res_seq() const noexcept { return id.res_seq; }

  // "A:6:CYS", or "A:27B:GLY" with an insertion code.
  std::string label() const {
    std::string s(1, id.chain_id);
    s += ':';
    s += std::to_string(id.res_seq);
    if (id.insertion_code) s += *id.insertion_code;
    s += ':';
    s += res_name;
    return s;
  }

  friend bool operator==(const ResidueRecord&, const ResidueRecord&) = default;
};

struct AtomRecord {
  std::string name;
  char alt_loc = ' ';
  std::string res_name;
  ResidueId residue;
  Vec3 position{};
  double occupancy = 1.0;
  std::size_t line = 0;  // 1-based source line
};

struct StructureModel {
  std::string pdb_id;
  int model_number = 1;
  std::vector<AtomRecord> atoms;  // file order
};

namespace detail {

inline std::string_view column(std::string_view line, std::size_t first, std::size_t last) {
  // first/last are 1-based inclusive; short lines yield a truncated or empty view.
  if (line.size() < first) return {};
  const std::size_t begin = first - 1;
  return line.substr(begin, std::min(last, line.size()) - begin);
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline char column_char(std::string_view line, std::size_t col) {
  return line.size() >= col ? line[col - 1] : ' ';
}

inline std::optional<double> parse_real(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

inline std::optional<int> parse_int(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
  return v;
}

inline bool record_is(std::string_view line, std::string_view name) {
  const auto rec = trim(column(line, 1, 6));
  return rec == name;
}

inline AtomRecord parse_atom_line(std::string_view line, std::size_t line_no) {
  AtomRecord a;
  a.line = line_no;
  a.name = std::string(trim(column(line, 13, 16)));
  a.alt_loc = column_char(line, 17);
  a.res_name = std::string(trim(column(line, 18, 20)));
  a.residue.chain_id = column_char(line, 22);
  const auto seq = parse_int(column(line, 23, 26));
  if (!seq) throw ParseError(line_no, "malformed residue sequence number");
  a.residue.res_seq = *seq;
  if (const char icode = column_char(line, 27); icode != ' ') a.residue.insertion_code = icode;
  static constexpr std::array<std::pair<std::size_t, std::size_t>, 3> xyz{
      {{31, 38}, {39, 46}, {47, 54}}};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto v = parse_real(column(line, xyz[k].first, xyz[k].second));
    if (!v) throw ParseError(line_no, "malformed coordinate in columns " +
                                          std::to_string(xyz[k].first) + "-" +
                                          std::to_string(xyz[k].second));
    a.position[k] = *v;
  }
  // Occupancy is frequently blank in hand-written files; treat it as full.
  a.occupancy = parse_real(column(line, 55, 60)).value_or(1.0);
  return a;
}

}  // namespace detail

/// Parses PDB text into one StructureModel per MODEL record. A file without
/// MODEL records produces a single model numbered 1.
inline std::vector<StructureModel> parse_pdb(std::string_view text) {
  if (text.empty()) throw EmptyStructureError("empty PDB input");

  std::string pdb_id;
  std::vector<StructureModel> models;
  bool in_model = false;
  std::size_t atom_count = 0;
  std::size_t line_no = 0;

  auto current = [&]() -> StructureModel& {
    if (models.empty()) models.push_back(StructureModel{{}, 1, {}});
    return models.back();
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;

    if (detail::record_is(line, "HEADER")) {
      pdb_id = std::string(detail::trim(detail::column(line, 63, 66)));
    } else if (detail::record_is(line, "MODEL")) {
      const auto serial = detail::parse_int(detail::column(line, 11, 14));
      int number = serial.value_or(static_cast<int>(models.size()) + 1);
      // An implicit model that never received atoms is replaced, not kept.
      if (!in_model && !models.empty() && models.back().atoms.empty()) models.pop_back();
      models.push_back(StructureModel{{}, number, {}});
      in_model = true;
    } else if (detail::record_is(line, "ENDMDL")) {
      in_model = false;
    } else if (detail::record_is(line, "ATOM")) {
      current().atoms.push_back(detail::parse_atom_line(line, line_no));
      ++atom_count;
    }
  }

  if (atom_count == 0) throw EmptyStructureError("no ATOM records in PDB input");
  for (auto& m : models) m.pdb_id = pdb_id;
  return models;
}

/// One record per residue that has a CA atom, sorted by (chain, resSeq, iCode).
/// Alternate CA locations resolve to the highest occupancy, first in file on ties.
inline std::vector<ResidueRecord> extract_ca(const StructureModel& model,
                                             std::optional<char> chain_filter = std::nullopt) {
  std::map<ResidueId, const AtomRecord*> chosen;
  for (const AtomRecord& atom : model.atoms) {
    if (atom.name != "CA") continue;
    if (chain_filter && atom.residue.chain_id != *chain_filter) continue;
    auto [it, inserted] = chosen.try_emplace(atom.residue, &atom);
    if (!inserted && atom.occupancy > it->second->occupancy) it->second = &atom;
  }
  std::vector<ResidueRecord> out;
  out.reserve(chosen.size());
  for (const auto& [id, atom] : chosen)
    out.push_back(ResidueRecord{id, atom->res_name, atom->position});
  return out;
}

/// Selects a model by number; throws UsageError when absent.
inline const StructureModel& select_model(const std::vector<StructureModel>& models,
                                          int model_number = 1) {
  for (const auto& m : models)
    if (m.model_number == model_number) return m;
  // Files whose MODEL serials start elsewhere still honour "first model".
  if (model_number == 1 && !models.empty()) return models.front();
  throw UsageError("model " + std::to_string(model_number) + " not present in structure");
}

}  // namespace rinq
