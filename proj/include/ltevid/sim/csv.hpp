#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ltevid/sim/sweep.hpp"

namespace ltevid::sim {

/// Column names in RunRecord order.
const std::vector<std::string>& csv_columns();

/// %.6g, with "inf", "-inf" and "nan" spelled out.
std::string format_number(double v);

/// Comment lines (each written as "# " + line), header row, one row per record.
void write_csv(std::ostream& out, const std::vector<RunRecord>& records, const std::vector<std::string>& comments = {});

/// Atomic write (temporary file, then rename). ContractError when records is
/// empty, IoError when the file cannot be written.
void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path,
              const std::vector<std::string>& comments = {});

/// Skips comment lines; ConfigError when the header or a row is malformed.
std::vector<RunRecord> parse_csv(std::istream& in);
std::vector<RunRecord> read_csv(const std::filesystem::path& path);

/// Header comments for a sweep: config echo, metric parameters, baselines.
std::vector<std::string> run_header(const ExperimentConfig& cfg, const metrics::MetricParams& params,
                                    const std::vector<VideoBaseline>& baselines);

}  // namespace ltevid::sim
