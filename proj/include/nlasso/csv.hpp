#pragma once

#include <string>
#include <vector>

namespace nlasso {

struct TrialRecord;

/// Shortest-of-17-significant-digits decimal rendering; doubles written
/// this way parse back bit exactly.
std::string csv_double(double value);

/// Writes via a temp file in the same directory plus rename, so readers
/// never observe a half-written file. Throws IoFailure.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_whole_file(const std::string& path);

/// Parses a results CSV produced by emit_results. Throws ParseFailure
/// naming the offending line.
std::vector<TrialRecord> read_results_csv(const std::string& path);

} // namespace nlasso
