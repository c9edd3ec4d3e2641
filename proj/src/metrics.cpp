#include "semadapt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "semadapt/text.hpp"

namespace semadapt {

const std::vector<std::string>& metrics_columns() {
  static const std::vector<std::string> cols = {
      "phase",   "agent",   "seed",    "index",  "mean_reward",           "mean_utility",
      "air_overhead_ms", "ric_ms", "hit_rate", "lambda1", "lambda2", "shield_fallback_count",
      "overshoot_ms"};
  return cols;
}

void write_metrics_header(std::ostream& out) {
  const auto& cols = metrics_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void write_metrics_row(std::ostream& out, const MetricsRow& r) {
  out << r.phase << ',' << r.agent << ',' << r.seed << ',' << r.index << ','
      << format_double(r.mean_reward) << ',' << format_double(r.mean_utility) << ','
      << format_double(r.air_overhead_ms) << ',' << format_double(r.ric_ms) << ','
      << format_double(r.hit_rate) << ',' << format_double(r.lambda1) << ','
      << format_double(r.lambda2) << ',' << r.shield_fallback_count << ','
      << format_double(r.overshoot_ms) << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::vector<MetricsRow> read_metrics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty metrics file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const std::string& name : metrics_columns()) {
    if (!col.count(name)) throw std::runtime_error("metrics header lacks column '" + name + "'");
  }

  std::vector<MetricsRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " cells");
    }
    auto get = [&](const char* name) -> const std::string& { return cells[col.at(name)]; };
    try {
      MetricsRow r;
      r.phase = get("phase");
      r.agent = get("agent");
      r.seed = std::stoull(get("seed"));
      r.index = std::stoi(get("index"));
      r.mean_reward = parse_double(get("mean_reward"));
      r.mean_utility = parse_double(get("mean_utility"));
      r.air_overhead_ms = parse_double(get("air_overhead_ms"));
      r.ric_ms = parse_double(get("ric_ms"));
      r.hit_rate = parse_double(get("hit_rate"));
      r.lambda1 = parse_double(get("lambda1"));
      r.lambda2 = parse_double(get("lambda2"));
      r.shield_fallback_count = std::stoi(get("shield_fallback_count"));
      r.overshoot_ms = parse_double(get("overshoot_ms"));
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void write_shield_log(std::ostream& out, const std::vector<ShieldLogRow>& rows) {
  out << "phase,index,frame,proposed,executed,limit_drops,budget_drops,fallback_chain\n";
  for (const ShieldLogRow& r : rows) {
    out << r.phase << ',' << r.index << ',' << r.frame << ',' << r.proposed << ',' << r.executed
        << ',' << r.limit_drops << ',' << r.budget_drops << ',' << r.fallback_chain << '\n';
  }
}

void FrameAccumulator::add(double reward, double utility, double air_ms, double ric_ms,
                           double overshoot_ms, int adaptations, int hits, bool fallback) {
  ++frames_;
  reward_ += reward;
  utility_ += utility;
  air_ += air_ms;
  ric_ += ric_ms;
  overshoot_ += overshoot_ms;
  adaptations_ += adaptations;
  hits_ += hits;
  if (fallback) ++fallbacks_;
}

void FrameAccumulator::fill(MetricsRow& row) const {
  const double n = frames_ > 0 ? static_cast<double>(frames_) : 1.0;
  row.mean_reward = reward_ / n;
  row.mean_utility = utility_ / n;
  row.air_overhead_ms = air_ / n;
  row.ric_ms = ric_ / n;
  row.overshoot_ms = overshoot_ / n;
  row.hit_rate = adaptations_ > 0 ? static_cast<double>(hits_) / static_cast<double>(adaptations_)
                                  : 1.0;
  row.shield_fallback_count = fallbacks_;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Moments describe(std::span<const double> values) {
  Moments m;
  m.n = values.size();
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - m.mean) * (v - m.mean);
    m.std = std::sqrt(sq / static_cast<double>(m.n - 1));
    m.se = m.std / std::sqrt(static_cast<double>(m.n));
  }
  m.p95 = percentile(std::vector<double>(values.begin(), values.end()), 0.95);
  return m;
}

}  // namespace semadapt
