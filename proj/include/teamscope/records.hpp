#pragma once

// Plain-text artifact formats shared by the CLI stages: NDJSON profiles and
// roles, partition JSON, and CSV tables. Numbers are written in shortest
// round-trip form so outputs are byte-stable.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teamscope/activity_graph.hpp"
#include "teamscope/roles.hpp"
#include "teamscope/statement_parser.hpp"

namespace teamscope {

std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

std::string profile_to_json(const ActivityProfile& p);
ActivityProfile profile_from_json(std::string_view line);
void write_profiles(const std::filesystem::path& path, std::span<const ActivityProfile> profiles);
std::vector<ActivityProfile> read_profiles(const std::filesystem::path& path);

std::string coverage_to_json(const CoverageReport& report);

struct PartitionArtifact {
  Partition partition;
  std::optional<double> agreement;  // Rand index against the reference clusters
  std::optional<double> reference_q;
  std::uint64_t seed = 0;
  double resolution = 1.0;
  std::string unit = "author_paper";
  std::string assignment = "reference";  // which map `roles` uses: reference | detected
  RoleMap roles{};
};

std::string partition_to_json(const PartitionArtifact& a);
void write_partition(const std::filesystem::path& path, const PartitionArtifact& a);
// Reads the activity -> role map used for role assignment.
RoleMap read_partition_roles(const std::filesystem::path& path);

std::string role_to_json(const RoleAssignment& r);
RoleAssignment role_from_json(std::string_view line);
void write_roles(const std::filesystem::path& path, std::span<const RoleAssignment> roles);
std::vector<RoleAssignment> read_roles(const std::filesystem::path& path);

// Header paper_id,n,n_lead,lratio,tall,source; defined L-ratios only.
void write_lratio_csv(const std::filesystem::path& path, std::span<const LRatio> lratios);
std::vector<LRatio> read_lratio_csv(const std::filesystem::path& path);

// Minimal RFC 4180 CSV: quoted fields may contain commas, quotes and newlines.
std::string csv_escape(std::string_view field);
std::string csv_row(std::span<const std::string> fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index; throws DataError naming the column if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source);
CsvTable read_csv(const std::filesystem::path& path);

// Empty or "NA" cells are missing; anything else must parse as a number.
std::optional<double> parse_cell(std::string_view cell, std::string_view column);

}  // namespace teamscope
