#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace hpade::cli {

namespace {

constexpr double kWidth = 640.0, kHeight = 400.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;

struct Pt {
  double n;
  double y;  ///< log10 value
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

std::vector<Pt> positive(const std::vector<int>& ns, const std::vector<double>& v) {
  std::vector<Pt> out;
  for (std::size_t i = 0; i < ns.size() && i < v.size(); ++i)
    if (v[i] > 0.0 && std::isfinite(v[i])) out.push_back({static_cast<double>(ns[i]), std::log10(v[i])});
  return out;
}

}  // namespace

std::string render_svg(const SeriesRecord& s, const std::string& title) {
  const std::vector<Pt> data = positive(s.n, s.value);
  const std::vector<Pt> fit = positive(s.n, s.reference);
  std::vector<Pt> guide;
  if (s.predicted_rate && *s.predicted_rate > 0.0 && !data.empty())
    for (const Pt& p : data) guide.push_back({p.n, data.front().y + (p.n - data.front().n) * std::log10(*s.predicted_rate)});

  double nlo = s.n.empty() ? 0.0 : s.n.front(), nhi = s.n.empty() ? 1.0 : s.n.back();
  if (nhi <= nlo) nhi = nlo + 1.0;
  double ylo = 0.0, yhi = 0.0;
  bool any = false;
  for (const std::vector<Pt>* set : std::initializer_list<const std::vector<Pt>*>{&data, &fit, &guide})
    for (const Pt& p : *set) {
      ylo = any ? std::min(ylo, p.y) : p.y;
      yhi = any ? std::max(yhi, p.y) : p.y;
      any = true;
    }
  ylo = std::floor(ylo);
  yhi = std::ceil(yhi);
  if (yhi <= ylo) yhi = ylo + 1.0;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto x = [&](double n) { return kLeft + (n - nlo) / (nhi - nlo) * pw; };
  auto y = [&](double v) { return kTop + (yhi - std::clamp(v, ylo, yhi)) / (yhi - ylo) * ph; };
  auto polyline = [&](const std::vector<Pt>& pts, const std::string& style) {
    if (pts.size() < 2) return std::string();
    std::string out = "<polyline fill=\"none\" " + style + " points=\"";
    for (const Pt& p : pts) out += num(x(p.n)) + "," + num(y(p.y)) + " ";
    return out + "\"/>\n";
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) + "</text>\n";
  svg += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  const double ystep = std::max(1.0, std::ceil((yhi - ylo) / 8.0));
  for (double v = ylo; v <= yhi + 1e-9; v += ystep) {
    svg += "<line x1=\"" + num(kLeft) + "\" x2=\"" + num(kLeft + pw) + "\" y1=\"" + num(y(v)) + "\" y2=\"" + num(y(v)) +
           "\" stroke=\"#ddd\"/>\n";
    svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y(v) + 4) + "\" text-anchor=\"end\">1e" +
           std::to_string(static_cast<int>(v)) + "</text>\n";
  }
  const double xstep = std::max(1.0, std::ceil((nhi - nlo) / 10.0));
  for (double n = nlo; n <= nhi + 1e-9; n += xstep)
    svg += "<text x=\"" + num(x(n)) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
           std::to_string(static_cast<int>(n)) + "</text>\n";
  svg += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">n</text>\n";

  svg += polyline(guide, "stroke=\"#c33\" stroke-dasharray=\"2,4\"");
  svg += polyline(fit, "stroke=\"#888\" stroke-dasharray=\"6,4\"");
  svg += polyline(data, "stroke=\"#1f5fa8\" stroke-width=\"1.5\"");
  for (const Pt& p : data)
    svg += "<circle cx=\"" + num(x(p.n)) + "\" cy=\"" + num(y(p.y)) + "\" r=\"2.5\" fill=\"#1f5fa8\"/>\n";

  const double lx = kLeft + 10, ly = kTop + 14;
  svg += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" fill=\"#1f5fa8\">measured</text>\n";
  svg += "<text x=\"" + num(lx) + "\" y=\"" + num(ly + 14) + "\" fill=\"#888\">fit</text>\n";
  if (!guide.empty())
    svg += "<text x=\"" + num(lx) + "\" y=\"" + num(ly + 28) + "\" fill=\"#c33\">predicted slope</text>\n";
  return svg + "</svg>\n";
}

void write_svg(const std::filesystem::path& path, const SeriesRecord& s, const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render_svg(s, title);
}

}  // namespace hpade::cli
