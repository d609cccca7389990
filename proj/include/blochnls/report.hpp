// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "blochnls/band_checks.hpp"
#include "blochnls/convergence.hpp"
#include "blochnls/effective_nls.hpp"
#include "blochnls/lattice.hpp"
#include "blochnls/townes.hpp"

namespace blochnls
{

// CSV tables: comma separated, '.' decimal, one header row, round-trip precision.
std::string band_csv(const BandTable &table);
std::string convergence_csv(const ConvergenceReport &report);
std::string error_series_csv(const ErrorSeries &series);
std::string profile_csv(const RadialProfile &profile);

// |u| on every `stride`-th grid point, preceded by '#' lines with t, dx and the box.
std::string snapshot_csv(const ComplexField &u, int stride);

std::string params_text(const EffectiveNlsParams &params);
std::string params_json(const EffectiveNlsParams &params);
std::string metadata_text(const ConvergenceReport &report);

/// |u| along the grid line through `through` parallel to axis `axis`
/// (nearest grid line). Returns coordinates and values.
std::pair<std::vector<double>, std::vector<double>> line_slice(const ComplexField &u, int axis,
                                                               const std::vector<double> &through);

void write_text_file(const std::filesystem::path &path, const std::string &content);

/// convergence.csv, convergence.svg, metadata.txt and one error series per eps.
std::vector<std::filesystem::path> emit_report(const ConvergenceReport &report, const std::filesystem::path &dir);

}  // namespace blochnls
