#include "fedsim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "fedsim/textio.hpp"

namespace fedsim {

PlotFormat plot_format_from_name(const std::string& name) {
  if (name == "svg") return PlotFormat::kSvg;
  if (name == "gnuplot") return PlotFormat::kGnuplot;
  throw std::invalid_argument("unknown plot format: " + name);
}

namespace {

struct Series {
  std::string label;
  std::vector<double> x, y;
};

struct Chart {
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<Series> series;
};

// Accepts per-seed column names and their aggregate *_mean variants.
std::size_t column_or_mean(const CsvTable& table, const std::string& name) {
  if (table.has_column(name)) return table.column(name);
  return table.column(name + "_mean");
}

void append_series(Chart& chart, const CsvTable& table,
                   const std::string& x_col, const std::string& y_col,
                   const std::string& label) {
  Series s;
  s.label = label;
  const auto xi = column_or_mean(table, x_col);
  const auto yi = column_or_mean(table, y_col);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    s.x.push_back(table.number(r, xi));
    s.y.push_back(table.number(r, yi));
  }
  chart.series.push_back(std::move(s));
}

// One series per distinct value of a grouping column, in first-seen order.
void append_grouped_series(Chart& chart, const CsvTable& table,
                           const std::string& group_col,
                           const std::string& x_col, const std::string& y_col,
                           const std::string& label_prefix) {
  const auto gi = table.column(group_col);
  const auto xi = column_or_mean(table, x_col);
  const auto yi = column_or_mean(table, y_col);
  std::vector<std::string> order;
  std::map<std::string, Series> grouped;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string& key = table.rows[r][gi];
    if (!grouped.count(key)) {
      order.push_back(key);
      grouped[key].label = label_prefix + key;
    }
    grouped[key].x.push_back(table.number(r, xi));
    grouped[key].y.push_back(table.number(r, yi));
  }
  for (const auto& key : order) chart.series.push_back(std::move(grouped[key]));
}

Chart build_chart(const CsvTable& table, Recipe kind) {
  Chart chart;
  switch (kind) {
    case Recipe::kDriftVsH:
      chart = {"local steps H", "bias / drift", true, true, {}};
      append_series(chart, table, "H", "squared_mean_bias",
                    "squared_mean_bias");
      append_series(chart, table, "H", "mean_square_bias", "mean_square_bias");
      append_series(chart, table, "H", "drift", "drift");
      append_series(chart, table, "H", "quadratic_bound", "quadratic_bound");
      break;
    case Recipe::kDissimilaritySweep:
      chart = {"local steps H", "mean-square bias", true, true, {}};
      append_grouped_series(chart, table, "eps_var", "H", "mean_square_bias",
                            "mean_square eps_var=");
      break;
    case Recipe::kConvergenceCompare:
      chart = {"round", "dist_sq", false, true, {}};
      append_grouped_series(chart, table, "algorithm", "round", "dist_sq", "");
      break;
    case Recipe::kScalingNM: {
      chart = {"total samples n*M", "drift at optimum", true, true, {}};
      Series s;
      s.label = "drift";
      const auto ni = table.column("samples_per_client");
      const auto mi = table.column("num_clients");
      const auto di = column_or_mean(table, "drift");
      for (std::size_t r = 0; r < table.rows.size(); ++r) {
        s.x.push_back(table.number(r, ni) * table.number(r, mi));
        s.y.push_back(table.number(r, di));
      }
      // Sort by x so the polyline reads left to right.
      std::vector<std::size_t> idx(s.x.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a,
                                                   std::size_t b) {
        return s.x[a] < s.x[b];
      });
      Series sorted;
      sorted.label = s.label;
      for (std::size_t i : idx) {
        sorted.x.push_back(s.x[i]);
        sorted.y.push_back(s.y[i]);
      }
      chart.series.push_back(std::move(sorted));
      break;
    }
    case Recipe::kBoundCheck:
      chart = {"round", "dist_sq", false, true, {}};
      if (table.has_column("dist_sq_mean") || table.has_column("dist_sq")) {
        append_series(chart, table, "round", "dist_sq", "measured mean");
      }
      if (table.has_column("bound"))
        append_series(chart, table, "round", "bound", "bound");
      break;
  }
  return chart;
}

constexpr const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#e377c2", "#7f7f7f"};

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void write_svg(const Chart& chart, const std::filesystem::path& out_path) {
  // Collect drawable points (log axes drop non-positive values).
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  bool any = false;
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!chart.log_x || x > 0) &&
           (!chart.log_y || y > 0);
  };
  for (const auto& s : chart.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const double x = chart.log_x ? std::log10(s.x[i]) : s.x[i];
      const double y = chart.log_y ? std::log10(s.y[i]) : s.y[i];
      if (!any) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        any = true;
      }
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  if (!any)
    throw std::invalid_argument("no drawable points for the chart");
  if (x_hi == x_lo) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (y_hi == y_lo) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }

  const double width = 640, height = 480;
  const double ml = 80, mr = 20, mt = 20, mb = 55;
  auto px = [&](double x) {
    const double v = chart.log_x ? std::log10(x) : x;
    return ml + (v - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  auto py = [&](double y) {
    const double v = chart.log_y ? std::log10(y) : y;
    return height - mb - (v - y_lo) / (y_hi - y_lo) * (height - mt - mb);
  };

  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + out_path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Axes.
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\""
      << width - mr << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";

  // Ticks: decades on log axes, five even stops on linear ones.
  auto ticks_for = [](bool log_axis, double lo, double hi) {
    std::vector<double> ticks;
    if (log_axis) {
      for (int k = static_cast<int>(std::ceil(lo - 1e-9));
           k <= static_cast<int>(std::floor(hi + 1e-9)); ++k)
        ticks.push_back(std::pow(10.0, k));
      if (ticks.empty()) ticks.push_back(std::pow(10.0, 0.5 * (lo + hi)));
    } else {
      for (int k = 0; k <= 4; ++k) ticks.push_back(lo + (hi - lo) * k / 4.0);
    }
    return ticks;
  };
  for (double tx : ticks_for(chart.log_x, x_lo, x_hi)) {
    const double x = px(tx);
    out << "<line x1=\"" << x << "\" y1=\"" << height - mb << "\" x2=\"" << x
        << "\" y2=\"" << height - mb + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << height - mb + 18
        << "\" text-anchor=\"middle\">" << short_number(tx) << "</text>\n";
  }
  for (double ty : ticks_for(chart.log_y, y_lo, y_hi)) {
    const double y = py(ty);
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">" << short_number(ty) << "</text>\n";
  }
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">" << chart.x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">" << chart.y_label << "</text>\n";

  // Series polylines and legend.
  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(*kPalette))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      if (usable(s.x[i], s.y[i]))
        out << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
    out << "\"/>\n";
    const double ly = mt + 16 + 16 * static_cast<double>(si);
    out << "<rect x=\"" << width - mr - 170 << "\" y=\"" << ly - 9
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    out << "<text x=\"" << width - mr - 155 << "\" y=\"" << ly << "\">"
        << s.label << "</text>\n";
  }
  out << "</svg>\n";
  if (!out) throw std::runtime_error("write failed: " + out_path.string());
}

void write_gnuplot(const Chart& chart, Recipe kind,
                   const std::filesystem::path& out_path) {
  std::ofstream out(out_path);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + out_path.string());
  out << "# plot data: " << recipe_name(kind) << "\n";
  out << "# x: " << chart.x_label << (chart.log_x ? " (log)" : "") << "\n";
  out << "# y: " << chart.y_label << (chart.log_y ? " (log)" : "") << "\n";
  out << "# suggested: plot for [i=0:" << chart.series.size() - 1
      << "] FILE index i using 1:2 with lines title columnheader(1)\n";
  for (std::size_t si = 0; si < chart.series.size(); ++si) {
    const auto& s = chart.series[si];
    if (si) out << "\n\n";
    out << "\"" << s.label << "\"\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << format_double(s.x[i]) << ' ' << format_double(s.y[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + out_path.string());
}

}  // namespace

void emit_plotdata(const std::filesystem::path& csv_path, Recipe kind,
                   PlotFormat format, const std::filesystem::path& out_path) {
  const CsvTable table = CsvTable::read(csv_path);
  if (table.rows.empty())
    throw std::invalid_argument("csv has no data rows: " + csv_path.string());
  const Chart chart = build_chart(table, kind);
  if (chart.series.empty())
    throw std::invalid_argument("csv yields no plottable series: " +
                                csv_path.string());
  if (format == PlotFormat::kSvg)
    write_svg(chart, out_path);
  else
    write_gnuplot(chart, kind, out_path);
}

}  // namespace fedsim
