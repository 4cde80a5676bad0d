#include "marmab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace marmab {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

template <class T>
T parse_number(const std::string& cell, const std::filesystem::path& path, long line) {
  T value{};
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": bad number '" + cell + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void write_seed_csv(const std::filesystem::path& path, const std::vector<RunRecord>& records,
                    const std::string& config_hash, bool partial) {
  auto out = open_out(path);
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << kSeedHeader << '\n';
  for (const auto& r : records) {
    out << r.seed << ',' << r.t << ',' << format_double(r.instant_reward) << ',' << format_double(r.cumulative_reward)
        << ',' << format_double(r.mean_cumulative_reward) << ',' << format_double(r.epsilon) << ','
        << r.lambda_index << '\n';
  }
  if (partial) out << kPartialMarker << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<RunRecord> read_seed_csv(const std::filesystem::path& path, bool* partial) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<RunRecord> out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  if (partial) *partial = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (partial && line == kPartialMarker) *partial = true;
      continue;
    }
    if (!header_seen) {
      if (line != kSeedHeader) throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 7) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 7 columns");
    RunRecord r;
    r.seed = parse_number<std::uint64_t>(cells[0], path, line_no);
    r.t = parse_number<long>(cells[1], path, line_no);
    r.instant_reward = parse_number<double>(cells[2], path, line_no);
    r.cumulative_reward = parse_number<double>(cells[3], path, line_no);
    r.mean_cumulative_reward = parse_number<double>(cells[4], path, line_no);
    r.epsilon = parse_number<double>(cells[5], path, line_no);
    r.lambda_index = parse_number<int>(cells[6], path, line_no);
    out.push_back(r);
  }
  if (!header_seen) throw std::runtime_error(path.string() + ": missing header");
  return out;
}

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows,
                         const std::string& config_hash) {
  auto out = open_out(path);
  if (!config_hash.empty()) out << "# config_hash=" << config_hash << '\n';
  out << kAggregateHeader << '\n';
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.mean) << ',' << format_double(r.p25) << ',' << format_double(r.p75) << ','
        << r.n_seeds << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<AggregateRow> read_aggregate_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<AggregateRow> out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kAggregateHeader) throw std::runtime_error(path.string() + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 5) throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected 5 columns");
    out.push_back({parse_number<long>(cells[0], path, line_no), parse_number<double>(cells[1], path, line_no),
                   parse_number<double>(cells[2], path, line_no), parse_number<double>(cells[3], path, line_no),
                   parse_number<std::size_t>(cells[4], path, line_no)});
  }
  return out;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::vector<AggregateRow> aggregate_series(const std::vector<std::vector<double>>& per_seed) {
  if (per_seed.empty()) return {};
  const std::size_t len = per_seed.front().size();
  for (const auto& s : per_seed) {
    if (s.size() != len) throw std::invalid_argument("aggregate_series: series lengths differ");
  }
  std::vector<AggregateRow> out;
  out.reserve(len);
  std::vector<double> col(per_seed.size());
  for (std::size_t k = 0; k < len; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < per_seed.size(); ++i) {
      col[i] = per_seed[i][k];
      sum += col[i];
    }
    out.push_back({static_cast<long>(k + 1), sum / static_cast<double>(col.size()), percentile(col, 0.25),
                   percentile(col, 0.75), col.size()});
  }
  return out;
}

std::vector<double> moving_average(const std::vector<double>& series, std::size_t window) {
  if (window == 0) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(series.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < series.size(); ++k) {
    sum += series[k];
    if (k >= window) sum -= series[k - window];
    out[k] = sum / static_cast<double>(std::min(window, k + 1));
  }
  return out;
}

}  // namespace marmab
