#include "wlanagg/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "wlanagg/svg.hpp"

namespace wlanagg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEps = 1e-12;

void put_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

void put_int(std::string& out, unsigned long long v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

// Free-text fields are kept comma-free so the format needs no quoting.
std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

double parse_double(const std::string& s) {
  if (s == "nan" || s == "-nan") return kNaN;
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) throw std::runtime_error("bad number in CSV: " + s);
  return v;
}

unsigned long long parse_ull(const std::string& s) {
  unsigned long long v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) throw std::runtime_error("bad integer in CSV: " + s);
  return v;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      out.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::string row_id(const ComparisonRow& r) {
  return r.sweep_name + "/p" + std::to_string(r.point_index) + "/r" +
         std::to_string(r.replication) + "/s" + std::to_string(r.station);
}

}  // namespace

const char* const kComparisonCsvHeader =
    "sweep,point,axis_value,replication,seed,config_hash,station,regime,"
    "model_clamped,model_n_bar,model_n_unclamped,model_fluct_std,"
    "model_delay_bound,model_mean_round,sim_mean_agg,sim_std_agg,"
    "sim_mean_delay,sim_p95_delay,sim_mean_airtime,sim_mean_round,"
    "sim_throughput,sim_blocked,rel_err_agg,abs_err_agg,rel_err_std,flag";

std::string rows_to_csv(std::span<const ComparisonRow> rows) {
  std::string out = kComparisonCsvHeader;
  out += '\n';
  for (const ComparisonRow& r : rows) {
    out += sanitize(r.sweep_name);
    out += ',';
    put_int(out, r.point_index);
    out += ',';
    put_double(out, r.axis_value);
    out += ',';
    put_int(out, r.replication);
    out += ',';
    put_int(out, r.seed);
    out += ',';
    out += sanitize(r.config_hash);
    out += ',';
    put_int(out, static_cast<unsigned long long>(r.station));
    out += ',';
    out += sanitize(r.regime);
    out += ',';
    out += r.model_clamped ? '1' : '0';
    out += ',';
    put_double(out, r.model_n_bar);
    out += ',';
    put_double(out, r.model_n_unclamped);
    out += ',';
    put_double(out, r.model_fluct_std);
    out += ',';
    put_double(out, r.model_delay_bound);
    out += ',';
    put_double(out, r.model_mean_round);
    out += ',';
    put_double(out, r.sim_mean_agg);
    out += ',';
    put_double(out, r.sim_std_agg);
    out += ',';
    put_double(out, r.sim_mean_delay);
    out += ',';
    put_double(out, r.sim_p95_delay);
    out += ',';
    put_double(out, r.sim_mean_airtime);
    out += ',';
    put_double(out, r.sim_mean_round);
    out += ',';
    put_double(out, r.sim_throughput);
    out += ',';
    put_int(out, r.sim_blocked);
    out += ',';
    put_double(out, r.rel_err_agg);
    out += ',';
    put_double(out, r.abs_err_agg);
    out += ',';
    put_double(out, r.rel_err_std);
    out += ',';
    out += sanitize(r.flag);
    out += '\n';
  }
  return out;
}

std::vector<ComparisonRow> rows_from_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("rows CSV: empty input");
  if (line != kComparisonCsvHeader) {
    throw std::runtime_error("rows CSV: unexpected header");
  }
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 26) throw std::runtime_error("rows CSV: bad column count");
    ComparisonRow r;
    r.sweep_name = f[0];
    r.point_index = parse_ull(f[1]);
    r.axis_value = parse_double(f[2]);
    r.replication = parse_ull(f[3]);
    r.seed = parse_ull(f[4]);
    r.config_hash = f[5];
    r.station = static_cast<int>(parse_ull(f[6]));
    r.regime = f[7];
    r.model_clamped = f[8] == "1";
    r.model_n_bar = parse_double(f[9]);
    r.model_n_unclamped = parse_double(f[10]);
    r.model_fluct_std = parse_double(f[11]);
    r.model_delay_bound = parse_double(f[12]);
    r.model_mean_round = parse_double(f[13]);
    r.sim_mean_agg = parse_double(f[14]);
    r.sim_std_agg = parse_double(f[15]);
    r.sim_mean_delay = parse_double(f[16]);
    r.sim_p95_delay = parse_double(f[17]);
    r.sim_mean_airtime = parse_double(f[18]);
    r.sim_mean_round = parse_double(f[19]);
    r.sim_throughput = parse_double(f[20]);
    r.sim_blocked = parse_ull(f[21]);
    r.rel_err_agg = parse_double(f[22]);
    r.abs_err_agg = parse_double(f[23]);
    r.rel_err_std = parse_double(f[24]);
    r.flag = f[25];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ComparisonRow> load_rows_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return rows_from_csv_text(ss.str());
}

SweepSummary summarize(std::span<const ComparisonRow> rows, const Thresholds& th) {
  SweepSummary s;
  if (rows.empty()) throw std::invalid_argument("summarize: no rows");
  s.sweep_name = rows.front().sweep_name;
  s.rows = rows.size();

  double sum_agg = 0.0, sum_std = 0.0;
  std::size_t n_agg = 0, n_std = 0;
  for (const ComparisonRow& r : rows) {
    if (!r.flag.empty()) {
      ++s.flagged;
      continue;
    }
    if (std::isfinite(r.rel_err_agg)) {
      s.max_rel_err_agg = std::max(s.max_rel_err_agg, r.rel_err_agg);
      sum_agg += r.rel_err_agg;
      ++n_agg;
      if (r.rel_err_agg > th.agg_rel && r.abs_err_agg > th.agg_abs) {
        s.violations.push_back({row_id(r),
            "aggregation error " + std::to_string(r.rel_err_agg * 100) + "% (" +
            std::to_string(r.abs_err_agg) + " pkts) exceeds thresholds"});
      }
    }
    if (std::isfinite(r.rel_err_std)) {
      s.max_rel_err_std = std::max(s.max_rel_err_std, r.rel_err_std);
      sum_std += r.rel_err_std;
      ++n_std;
      if (r.rel_err_std > th.std_rel) {
        s.violations.push_back({row_id(r),
            "fluctuation std error " + std::to_string(r.rel_err_std * 100) +
            "% exceeds threshold"});
      }
    }
    if (th.check_delay && std::isfinite(r.sim_mean_delay) &&
        std::isfinite(r.model_delay_bound)) {
      const double upper = r.model_delay_bound + r.sim_mean_airtime;
      if (r.sim_mean_delay > upper * (1.0 + kEps)) {
        s.violations.push_back({row_id(r), "mean delay exceeds bound + airtime"});
      }
      if (r.regime == "linear" &&
          r.sim_mean_delay < th.delay_lower_factor * r.model_delay_bound) {
        s.violations.push_back({row_id(r), "mean delay implausibly below bound"});
      }
    }
  }
  s.mean_rel_err_agg = n_agg ? sum_agg / n_agg : 0.0;
  s.mean_rel_err_std = n_std ? sum_std / n_std : 0.0;
  s.pass = s.violations.empty();
  return s;
}

std::string SweepSummary::to_text() const {
  std::ostringstream out;
  out << "sweep: " << sweep_name << "\n"
      << "rows: " << rows << " (flagged: " << flagged << ")\n";
  out.precision(4);
  out << "aggregation rel err: mean " << mean_rel_err_agg * 100 << "%, max "
      << max_rel_err_agg * 100 << "%\n";
  out << "fluct-std rel err (linear regime): mean " << mean_rel_err_std * 100
      << "%, max " << max_rel_err_std * 100 << "%\n";
  if (violations.empty()) {
    out << "result: PASS\n";
  } else {
    out << "result: FAIL (" << violations.size() << " violations)\n";
    for (const Violation& v : violations) {
      out << "  " << v.scenario_id << ": " << v.what << "\n";
    }
  }
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

struct PointAgg {
  double axis = 0.0;
  double model = kNaN;
  std::vector<double> sims;
};

// One model line + one sim marker series per station for the chosen
// columns. Sim markers average replications; error bars are the
// across-replication std.
void add_series(std::vector<PlotSeries>& series, std::span<const ComparisonRow> rows,
                double ComparisonRow::*model_col, double ComparisonRow::*sim_col) {
  std::map<int, std::map<std::size_t, PointAgg>> by_station;
  for (const ComparisonRow& r : rows) {
    if (!r.flag.empty()) continue;
    PointAgg& pa = by_station[r.station][r.point_index];
    pa.axis = r.axis_value;
    pa.model = r.*model_col;
    if (std::isfinite(r.*sim_col)) pa.sims.push_back(r.*sim_col);
  }
  for (auto& [station, points] : by_station) {
    PlotSeries model_s, sim_s;
    model_s.label = "model s" + std::to_string(station);
    model_s.line = true;
    sim_s.label = "sim s" + std::to_string(station);
    for (auto& [pi, pa] : points) {
      model_s.x.push_back(pa.axis);
      model_s.y.push_back(pa.model);
      if (!pa.sims.empty()) {
        double mean = 0.0;
        for (double v : pa.sims) mean += v;
        mean /= pa.sims.size();
        double var = 0.0;
        for (double v : pa.sims) var += (v - mean) * (v - mean);
        sim_s.x.push_back(pa.axis);
        sim_s.y.push_back(mean);
        sim_s.yerr.push_back(pa.sims.size() > 1
                                 ? std::sqrt(var / (pa.sims.size() - 1))
                                 : 0.0);
      }
    }
    series.push_back(std::move(model_s));
    series.push_back(std::move(sim_s));
  }
}

bool any_finite(std::span<const ComparisonRow> rows, double ComparisonRow::*col) {
  return std::any_of(rows.begin(), rows.end(), [col](const ComparisonRow& r) {
    return r.flag.empty() && std::isfinite(r.*col);
  });
}

}  // namespace

SweepSummary emit_report(std::span<const ComparisonRow> rows,
                         const Thresholds& thresholds, const std::string& out_dir,
                         const std::string& name) {
  if (rows.empty()) throw std::invalid_argument("emit_report: no rows");
  std::filesystem::create_directories(out_dir);
  const std::string stem = out_dir + "/" + name;

  write_file(stem + "_rows.csv", rows_to_csv(rows));

  const std::string axis = "axis value";
  {
    PlotSpec plot;
    plot.title = name + ": mean aggregation";
    plot.x_label = axis;
    plot.y_label = "packets per frame";
    add_series(plot.series, rows, &ComparisonRow::model_n_bar,
               &ComparisonRow::sim_mean_agg);
    write_file(stem + "_agg.svg", render_svg(plot));
  }
  if (any_finite(rows, &ComparisonRow::model_fluct_std) ||
      any_finite(rows, &ComparisonRow::sim_std_agg)) {
    PlotSpec plot;
    plot.title = name + ": aggregation fluctuation std";
    plot.x_label = axis;
    plot.y_label = "packets";
    add_series(plot.series, rows, &ComparisonRow::model_fluct_std,
               &ComparisonRow::sim_std_agg);
    write_file(stem + "_std.svg", render_svg(plot));
  }
  if (any_finite(rows, &ComparisonRow::sim_mean_delay)) {
    PlotSpec plot;
    plot.title = name + ": mean packet delay vs bound";
    plot.x_label = axis;
    plot.y_label = "seconds";
    add_series(plot.series, rows, &ComparisonRow::model_delay_bound,
               &ComparisonRow::sim_mean_delay);
    write_file(stem + "_delay.svg", render_svg(plot));
  }

  SweepSummary summary = summarize(rows, thresholds);
  write_file(stem + "_summary.txt", summary.to_text());
  return summary;
}

}  // namespace wlanagg
