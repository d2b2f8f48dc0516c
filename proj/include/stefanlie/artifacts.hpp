#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "stefanlie/fd_oracle.hpp"
#include "stefanlie/invariance.hpp"
#include "stefanlie/material.hpp"
#include "stefanlie/self_similar.hpp"
#include "stefanlie/travelling_wave.hpp"

// CSV and text artifacts. Every file starts with
//   # stefanlie <version> config=<16 hex digits>
// and carries no timestamps, so identical configs give identical bytes.
namespace stefanlie::artifacts {

std::string_view tool_version();

std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t value);

// Scientific notation with 15 significant digits and a '.' separator,
// independent of the global locale.
std::string number(double value);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> notes;  // extra '#' lines after the header line
};

std::string header_line(const std::string& config_hash);
std::string render_csv(const Table& table, const std::string& config_hash);
void write_text(const std::filesystem::path& path, const std::string& body);

// Travelling wave: profile sampled on [0, delta*] and a tail of tail_lengths
// decay lengths 1/mu in the linearising coordinate.
Table tw_profile(const TravellingWaveSolution& sol, const MaterialSpec& spec, int liquid_points = 101,
                 int solid_points = 200, double tail_lengths = 12.0);
Table tw_summary(const TravellingWaveSolution& sol);

Table ss_profile(const SelfSimilarSolution& sol, const MaterialSpec& spec, int liquid_points = 101,
                 int solid_points = 200);
Table ss_summary(const SelfSimilarSolution& sol);

Table snapshots(const std::vector<Snapshot>& snaps, const MaterialSpec& spec);

// One row per (family, item, condition, eps).
Table residuals(const std::vector<InvarianceReport>& reports);

// Plain-text table of item verdicts per family.
std::string report_text(const std::vector<InvarianceReport>& reports);

}  // namespace stefanlie::artifacts
