#include "gridsurf/svg.hpp"

#include <sstream>

namespace gridsurf {

namespace {

struct Canvas {
  std::ostringstream body;
  int cell, margin, cols, rows;

  Canvas(const SvgStyle& st, int p, int q) : cell(st.cell), margin(st.margin), cols(p), rows(q) {}

  // grid coordinates: x for columns (theta), y for rows (phi, upward)
  double px(double v) const { return margin + (v + 0.5) * cell; }
  double py(double h) const { return margin + (rows - 0.5 - h) * cell; }

  std::string finish() {
    int w = 2 * margin + cols * cell;
    int h = 2 * margin + rows * cell;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << cols * cell
       << "\" height=\"" << rows * cell
       << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << body.str();
    os << "</svg>\n";
    return os.str();
  }

  void line(double x1, double y1, double x2, double y2, const char* color, double width,
            const char* dash = nullptr) {
    body << "<line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
         << "\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"";
    if (dash) body << " stroke-dasharray=\"" << dash << "\"";
    body << "/>\n";
  }

  void grid_lines() {
    for (int v = 0; v < cols; ++v)
      line(px(v), py(rows - 0.5) - 0.5 * cell, px(v), py(-0.5) + 0.5 * cell, "#cccccc", 0.8);
    for (int h = 0; h < rows; ++h)
      line(px(-0.5) + 0.5 * cell - cell * 0.5, py(h), px(cols - 0.5) + 0.0 + 0.5 * cell, py(h),
           "#cccccc", 0.8);
  }

  // a possibly wrapping arc drawn as one or two straight pieces
  void hline(int row, int from, int to, const char* color, double width) {
    if (from <= to) {
      line(px(from), py(row), px(to), py(row), color, width);
    } else {
      line(px(from), py(row), px(cols - 0.5) + 0.5 * cell, py(row), color, width);
      line(margin, py(row), px(to), py(row), color, width);
    }
  }
  void vline(int col, int from, int to, const char* color, double width) {
    if (from <= to) {
      line(px(col), py(from), px(col), py(to), color, width);
    } else {
      line(px(col), py(from), px(col), margin, color, width);
      line(px(col), py(-0.5) - 0.0 + 0.5 * cell + rows * cell - cell, px(col), py(to), color,
           width);
      // simpler: draw to the bottom edge
    }
  }
};

void hatch_rect(Canvas& cv, const SurfaceDiagram& pi, const Rect& r) {
  // draw the rectangle outline and hatch, handling wrap by splitting into
  // grid-aligned spans
  auto spans = [&](int from, int to, int n) {
    std::vector<std::pair<int, int>> out;
    if (from <= to) out.push_back({from, to});
    else {
      out.push_back({from, n - 1});
      out.push_back({0, to});
    }
    return out;
  };
  for (auto [x1, x2] : spans(r.vl, r.vr, pi.cols)) {
    for (auto [y1, y2] : spans(r.hb, r.ht, pi.rows)) {
      double a = cv.px(x1), b = cv.px(x2), c = cv.py(y2), d = cv.py(y1);
      cv.body << "<rect x=\"" << a << "\" y=\"" << c << "\" width=\"" << (b - a)
              << "\" height=\"" << (d - c)
              << "\" fill=\"#dddddd\" fill-opacity=\"0.45\" stroke=\"#555555\" stroke-width=\"0.7\"/>\n";
    }
  }
}

}  // namespace

std::string render_svg(const SurfaceDiagram& pi, const SvgStyle& style) {
  SurfaceInfo info = validate_surface(pi);
  Canvas cv(style, pi.cols, pi.rows);
  cv.grid_lines();
  for (const auto& r : pi.rects) hatch_rect(cv, pi, r);
  if (style.draw_dividing) {
    // plus diagonals green (bottom-left to top-right), minus red
    for (const auto& r : pi.rects) {
      cv.line(cv.px(r.vl), cv.py(r.hb), cv.px(r.vr), cv.py(r.ht), "green", 1.4);
      cv.line(cv.px(r.vr), cv.py(r.hb), cv.px(r.vl), cv.py(r.ht), "red", 1.4);
    }
  }
  // boundary vertices
  for (const auto& rec : info.vertices) {
    if (rec.multiplicity != 1) continue;
    cv.body << "<circle cx=\"" << cv.px(rec.pos.v) << "\" cy=\"" << cv.py(rec.pos.h)
            << "\" r=\"2.5\" fill=\"black\"/>\n";
  }
  return cv.finish();
}

std::string render_svg(const LinkDiagram& R, const SvgStyle& style) {
  validate_link(R);
  Canvas cv(style, R.cols, R.rows);
  cv.grid_lines();
  auto comps = link_components(R);
  // horizontal edges under, vertical edges over: draw rows first, then
  // columns with a white casing
  std::map<int, std::pair<int, int>> byrow, bycol;
  for (const auto& comp : comps) {
    int m = static_cast<int>(comp.size());
    for (int i = 0; i < m; ++i) {
      GridPoint a = comp[static_cast<size_t>(i)], b = comp[static_cast<size_t>((i + 1) % m)];
      if (a.h == b.h) byrow[a.h] = {std::min(a.v, b.v), std::max(a.v, b.v)};
      else bycol[a.v] = {std::min(a.h, b.h), std::max(a.h, b.h)};
    }
  }
  for (auto& [row, span] : byrow)
    cv.line(cv.px(span.first), cv.py(row), cv.px(span.second), cv.py(row), "black", 2.0);
  for (auto& [col, span] : bycol) {
    cv.line(cv.px(col), cv.py(span.first), cv.px(col), cv.py(span.second), "white", 5.0);
    cv.line(cv.px(col), cv.py(span.first), cv.px(col), cv.py(span.second), "black", 2.0);
  }
  for (const auto& p : R.vertices)
    cv.body << "<circle cx=\"" << cv.px(p.v) << "\" cy=\"" << cv.py(p.h)
            << "\" r=\"2.5\" fill=\"black\"/>\n";
  return cv.finish();
}

std::string render_svg(const EnhancedMirrorDiagram& em, const SvgStyle& style) {
  validate_mirror(em.m);
  Canvas cv(style, em.m.cols, em.m.rows);
  // occupied levels across the square
  for (int v = 0; v < em.m.cols; ++v)
    cv.line(cv.px(v), cv.py(em.m.rows - 0.5) + 0.5 * style.cell, cv.px(v),
            cv.py(-0.5) - 0.5 * style.cell + style.cell, "#888888", 1.0);
  for (int h = 0; h < em.m.rows; ++h)
    cv.line(style.margin, cv.py(h), style.margin + em.m.cols * style.cell, cv.py(h), "#888888",
            1.0);
  double d = style.cell * 0.3;
  for (const auto& [p, t] : em.m.mirrors) {
    double x = cv.px(p.v), y = cv.py(p.h);
    if (t == DiagType::Slash) cv.line(x - d, y + d, x + d, y - d, "red", 2.2);
    else cv.line(x - d, y - d, x + d, y + d, "green", 2.2);
  }
  return cv.finish();
}

}  // namespace gridsurf
