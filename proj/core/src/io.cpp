#include "sle/io.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace sle::io {

void write_trace_csv(std::ostream& out, const TracePath& trace) {
  out << "t,re,im\n" << std::setprecision(17);
  for (std::size_t k = 0; k < trace.points.size(); ++k)
    out << trace.times[k] << ',' << trace.points[k].real() << ',' << trace.points[k].imag()
        << '\n';
}

void write_survival_csv(std::ostream& out, const SurvivalEstimate& est) {
  out << "s,prob,stderr\n" << std::setprecision(17);
  for (std::size_t j = 0; j < est.s_grid.size(); ++j)
    out << est.s_grid[j] << ',' << est.probs[j] << ',' << est.stderrs[j] << '\n';
}

void write_box_count_csv(std::ostream& out, const BoxCountTable& table) {
  out << "eps,count\n" << std::setprecision(17);
  for (std::size_t j = 0; j < table.eps_list.size(); ++j)
    out << table.eps_list[j] << ',' << table.counts[j] << '\n';
}

void write_trace_svg(std::ostream& out, const TracePath& trace, double pixels) {
  double x0 = 0.0, x1 = 0.0, y1 = 0.0;
  for (const Complex& p : trace.points) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y1 = std::max(y1, p.imag());
  }
  const double span = std::max({x1 - x0, y1, 1e-12});
  const double pad = 0.05 * span;
  const double scale = pixels / (span + 2.0 * pad);
  const double width = (x1 - x0 + 2.0 * pad) * scale;
  const double height = (y1 + 2.0 * pad) * scale;
  auto sx = [&](double x) { return (x - x0 + pad) * scale; };
  auto sy = [&](double y) { return height - (y + pad) * scale; };

  out << std::setprecision(6);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<line x1=\"0\" y1=\"" << sy(0.0) << "\" x2=\"" << width << "\" y2=\"" << sy(0.0)
      << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1\" points=\"";
  for (const Complex& p : trace.points) out << sx(p.real()) << ',' << sy(p.imag()) << ' ';
  out << "\"/>\n</svg>\n";
}

}  // namespace sle::io
