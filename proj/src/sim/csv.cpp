#include "ltevid/sim/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ltevid/errors.hpp"

namespace ltevid::sim {
namespace {

double parse_double(const std::string& s, std::size_t line) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad number '" + s + "'", line);
    return v;
}

std::uint64_t parse_unsigned(const std::string& s, std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("bad integer '" + s + "'", line);
    return v;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols{
        "video",         "ebno_db",      "harq_max",      "modulation",          "code_rate",
        "seed",          "blocks_total", "blocks_failed", "residual_ber",        "blocking_mean",
        "blocking_log10_mean", "blur_mean", "psnr_mean_db", "ssim_mean",         "wall_time_s",
    };
    return cols;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<RunRecord>& records, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    const auto& cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : records) {
        out << r.video << ',' << format_number(r.ebno_db) << ',' << r.harq_max << ',' << r.modulation << ','
            << r.code_rate << ',' << r.seed << ',' << r.blocks_total << ',' << r.blocks_failed << ','
            << format_number(r.residual_ber) << ',' << format_number(r.blocking_mean) << ','
            << format_number(r.blocking_log10_mean) << ',' << format_number(r.blur_mean) << ','
            << format_number(r.psnr_mean_db) << ',' << format_number(r.ssim_mean) << ','
            << format_number(r.wall_time_s) << '\n';
    }
}

void emit_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path,
              const std::vector<std::string>& comments) {
    if (records.empty()) throw ContractError("no records to write");
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        write_csv(out, records, comments);
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::vector<RunRecord> parse_csv(std::istream& in) {
    std::vector<RunRecord> out;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_row(line);
        if (!header) {
            if (cells != csv_columns()) throw ConfigError("unexpected CSV header", lineno);
            header = true;
            continue;
        }
        if (cells.size() != csv_columns().size()) throw ConfigError("wrong number of CSV fields", lineno);
        RunRecord r;
        r.video = cells[0];
        r.ebno_db = parse_double(cells[1], lineno);
        r.harq_max = static_cast<int>(parse_unsigned(cells[2], lineno));
        r.modulation = cells[3];
        r.code_rate = cells[4];
        r.seed = parse_unsigned(cells[5], lineno);
        r.blocks_total = parse_unsigned(cells[6], lineno);
        r.blocks_failed = parse_unsigned(cells[7], lineno);
        r.residual_ber = parse_double(cells[8], lineno);
        r.blocking_mean = parse_double(cells[9], lineno);
        r.blocking_log10_mean = parse_double(cells[10], lineno);
        r.blur_mean = parse_double(cells[11], lineno);
        r.psnr_mean_db = parse_double(cells[12], lineno);
        r.ssim_mean = parse_double(cells[13], lineno);
        r.wall_time_s = parse_double(cells[14], lineno);
        out.push_back(std::move(r));
    }
    if (!header) throw ConfigError("CSV has no header row");
    return out;
}

std::vector<RunRecord> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    return parse_csv(in);
}

std::vector<std::string> run_header(const ExperimentConfig& cfg, const metrics::MetricParams& params,
                                    const std::vector<VideoBaseline>& baselines) {
    std::vector<std::string> out{"ltevid sweep"};
    for (const auto& l : cfg.describe()) out.push_back("config: " + l);
    for (const auto& l : params.describe()) out.push_back("metric: " + l);
    for (const auto& b : baselines)
        out.push_back("baseline: " + b.name + " blocking_mean=" + format_number(b.report.blocking.mean) +
                      " blocking_log10_mean=" + format_number(b.report.blocking_log10.mean) +
                      " blur_mean=" + format_number(b.report.blur.mean));
    return out;
}

}  // namespace ltevid::sim
