// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "revemb/embedding.hpp"
#include "revemb/estimation.hpp"

namespace revemb {

enum class FileFormat { Csv, Json };

/// Matrix file parsing. CSV: n lines of n comma-separated decimals
/// (blank lines and lines starting with '#' are skipped). JSON: an
/// object whose "matrix" key holds an n x n array of numbers. When no
/// format is given it is inferred from the file extension (.json means
/// JSON, anything else CSV).
Matrix parse_matrix_file(const std::string &path,
                         std::optional<FileFormat> format = {});
Matrix parse_matrix_csv(std::istream &in);
Matrix parse_matrix_json(std::istream &in);

/// Trajectory files hold one 0-based state index per line ('#' comments
/// and blank lines are skipped). The state-space size is 1 + max index
/// unless n_states overrides it, in which case violating indices raise
/// IndexOutOfRangeError.
Trajectory parse_trajectory_file(const std::string &path, double interval,
                                 std::optional<int> n_states = {});
Trajectory parse_trajectory(std::istream &in, double interval,
                            std::optional<int> n_states = {});

void write_trajectory(std::ostream &out, const Trajectory &traj);

/// Serializes an embeddability report. JSON is the full machine-readable
/// object; CSV emits '#'-prefixed metadata lines followed by the
/// generator rows (when present), so the generator can be re-read with
/// parse_matrix_file. All numbers carry 17 significant digits, enough to
/// reproduce the double exactly.
std::string emit_report(const EmbeddingReport &report,
                        FileFormat format = FileFormat::Json);

/// Exit-code mapping: 0 for Embeddable, 1 for any negative verdict.
/// (Errors exit with 2 at the CLI level.)
int exit_code(const EmbeddingReport &report);

/// A double with 17 significant digits (lossless round trip).
std::string format_double(double v);
std::string json_escape(const std::string &s);

} // namespace revemb
