#pragma once

#include <string>
#include <vector>

#include "nlcd/field.hpp"
#include "nlcd/metrics.hpp"
#include "nlcd/verification.hpp"

namespace nlcd {

// Full-precision float formatting shared by every CSV writer ("%.17g").
std::string format_full(double v);

// Compact formatting for filenames and log lines ("%g").
std::string format_short(double v);

void ensure_dir(const std::string& path);

// Header "x,u", one row per node.
void write_snapshot_csv(const std::string& path, const FieldState& state);

// Reads a two-column snapshot back; throws ConfigParse on malformed content.
FieldState read_snapshot_csv(const std::string& path);

// One row per time: errors to w^R and w, derivative norms, GN diagnostic at
// p = 1, 2, inf, plus the L1/log(2+t) ratio column.
void write_norms_csv(const std::string& path, const std::vector<NormReport>& reports);

// Header "name,passed,measured,bound,tolerance,context".
void write_checks_csv(const std::string& path, const std::vector<CheckResult>& checks);

// Per-check "PASS name ..." / "FAIL name ..." lines for standard output.
std::string checks_summary(const std::vector<CheckResult>& checks);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace nlcd
