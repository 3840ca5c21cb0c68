#include "binpose/pipeline/plots.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "binpose/errors.h"
#include "binpose/util/number_format.h"

namespace binpose::pipeline {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string Escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed two-decimal formatting keeps the SVG text stable.
std::string Num(double v) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << (std::abs(v) < 0.005 ? 0.0 : v);
  return os.str();
}

std::string Tick(double v) {
  std::string s = util::FormatDouble(std::round(v * 1000.0) / 1000.0);
  return s;
}

}  // namespace

std::string LineChartSvg(const std::vector<Series>& series, const ChartSpec& spec) {
  const double left = 56, right = 120, top = 32, bottom = 44;
  const double pw = spec.width - left - right, ph = spec.height - top - bottom;

  double x_min = 0.0, x_max = 1.0;
  double y_min = spec.y_min, y_max = spec.y_max;
  bool any = false;
  double dy_min = 0.0, dy_max = 0.0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        x_min = x_max = s.x[i];
        dy_min = dy_max = s.y[i];
        any = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      dy_min = std::min(dy_min, s.y[i]);
      dy_max = std::max(dy_max, s.y[i]);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) {
    y_min = std::min(0.0, dy_min);
    y_max = dy_max > y_min ? dy_max * 1.1 : y_min + 1.0;
  }
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
    << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << Num(left + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"14\">" << Escape(spec.title) << "</text>\n";

  // Axes and ticks.
  o << "<g stroke=\"black\" stroke-width=\"1\">\n"
    << "<line x1=\"" << Num(left) << "\" y1=\"" << Num(top + ph) << "\" x2=\"" << Num(left + pw)
    << "\" y2=\"" << Num(top + ph) << "\"/>\n"
    << "<line x1=\"" << Num(left) << "\" y1=\"" << Num(top) << "\" x2=\"" << Num(left)
    << "\" y2=\"" << Num(top + ph) << "\"/>\n</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = y_min + (y_max - y_min) * i / 5.0;
    o << "<line x1=\"" << Num(left - 4) << "\" y1=\"" << Num(py(y)) << "\" x2=\"" << Num(left)
      << "\" y2=\"" << Num(py(y)) << "\" stroke=\"black\"/>"
      << "<text x=\"" << Num(left - 6) << "\" y=\"" << Num(py(y) + 3)
      << "\" text-anchor=\"end\">" << Tick(y) << "</text>\n";
  }
  const int x_steps = static_cast<int>(std::min(10.0, x_max - x_min));
  for (int i = 0; i <= std::max(1, x_steps); ++i) {
    const double x = x_min + (x_max - x_min) * i / std::max(1, x_steps);
    o << "<line x1=\"" << Num(px(x)) << "\" y1=\"" << Num(top + ph) << "\" x2=\"" << Num(px(x))
      << "\" y2=\"" << Num(top + ph + 4) << "\" stroke=\"black\"/>"
      << "<text x=\"" << Num(px(x)) << "\" y=\"" << Num(top + ph + 16)
      << "\" text-anchor=\"middle\">" << Tick(x) << "</text>\n";
  }
  o << "<text x=\"" << Num(left + pw / 2) << "\" y=\"" << Num(spec.height - 8)
    << "\" text-anchor=\"middle\">" << Escape(spec.x_label) << "</text>\n"
    << "<text x=\"14\" y=\"" << Num(top + ph / 2) << "\" text-anchor=\"middle\" "
    << "transform=\"rotate(-90 14 " << Num(top + ph / 2) << ")\">" << Escape(spec.y_label)
    << "</text>\n</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    o << "<g fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\">\n";
    if (s.x.size() > 1) {
      o << "<polyline points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        o << (i ? " " : "") << Num(px(s.x[i])) << ',' << Num(py(s.y[i]));
      }
      o << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      o << "<circle cx=\"" << Num(px(s.x[i])) << "\" cy=\"" << Num(py(s.y[i]))
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    o << "</g>\n";
    const double ly = top + 14.0 * k + 6;
    o << "<line x1=\"" << Num(left + pw + 10) << "\" y1=\"" << Num(ly) << "\" x2=\""
      << Num(left + pw + 26) << "\" y2=\"" << Num(ly) << "\" stroke=\"" << color
      << "\" stroke-width=\"2\"/>"
      << "<text x=\"" << Num(left + pw + 30) << "\" y=\"" << Num(ly + 4)
      << "\" font-family=\"sans-serif\" font-size=\"10\">" << Escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

namespace {

std::vector<Series> PerObject(const std::vector<IterationReport>& reports, bool recall) {
  std::vector<Series> out;
  for (const auto& r : reports) {
    for (const auto& o : r.objects) {
      auto it = std::find_if(out.begin(), out.end(),
                             [&](const Series& s) { return s.label == o.object_id; });
      if (it == out.end()) {
        out.push_back({o.object_id, {}, {}});
        it = out.end() - 1;
      }
      it->x.push_back(r.iteration);
      it->y.push_back(recall ? o.recall : static_cast<double>(o.selected));
    }
  }
  return out;
}

}  // namespace

std::string RecallChartSvg(const std::vector<IterationReport>& reports) {
  std::vector<Series> series = PerObject(reports, true);
  Series mean{"mean", {}, {}};
  for (const auto& r : reports) {
    mean.x.push_back(r.iteration);
    mean.y.push_back(r.mean_recall);
  }
  series.push_back(std::move(mean));
  ChartSpec spec;
  spec.title = "ADD(-S) recall";
  spec.x_label = "iteration";
  spec.y_label = "recall";
  spec.y_min = 0.0;
  spec.y_max = 1.0;
  return LineChartSvg(series, spec);
}

std::string SelectedChartSvg(const std::vector<IterationReport>& reports) {
  ChartSpec spec;
  spec.title = "Selected pseudo labels";
  spec.x_label = "iteration";
  spec.y_label = "selected";
  return LineChartSvg(PerObject(reports, false), spec);
}

void EmitPlots(const std::vector<IterationReport>& reports, const std::filesystem::path& dir) {
  if (reports.empty()) throw PreconditionError("EmitPlots: no reports");
  for (const auto& [name, text] :
       {std::pair{"recall.svg", RecallChartSvg(reports)},
        std::pair{"selected.svg", SelectedChartSvg(reports)}}) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError((dir / name).string(), "cannot open for writing");
    out << text;
  }
}

}  // namespace binpose::pipeline
