#include "gridsurf/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace gridsurf {

namespace {

struct Lines {
  std::vector<std::pair<int, std::vector<std::string>>> rows;  // (line no, tokens)
};

Lines tokenize(const std::string& text) {
  Lines out;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    no++;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (!toks.empty()) out.rows.push_back({no, toks});
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

int to_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) fail(line, "not an integer: " + s);
    return v;
  } catch (const std::exception&) {
    fail(line, "not an integer: " + s);
  }
}

}  // namespace

LinkDiagram parse_link(const std::string& text) {
  Lines ls = tokenize(text);
  if (ls.rows.empty()) throw Error("empty input");
  auto& [hline, head] = ls.rows[0];
  if (head.size() != 3 || head[0] != "link") fail(hline, "expected `link <p> <q>`");
  LinkDiagram R;
  R.cols = to_int(head[1], hline);
  R.rows = to_int(head[2], hline);
  for (size_t i = 1; i < ls.rows.size(); ++i) {
    auto& [no, toks] = ls.rows[i];
    if (toks[0] == "orient") {
      for (size_t j = 1; j < toks.size(); ++j) {
        if (toks[j] == "+") R.orientation.push_back(1);
        else if (toks[j] == "-") R.orientation.push_back(-1);
        else fail(no, "orientation flag must be + or -");
      }
      continue;
    }
    if (toks.size() != 2) fail(no, "expected `v h`");
    R.vertices.push_back({to_int(toks[0], no), to_int(toks[1], no)});
  }
  std::sort(R.vertices.begin(), R.vertices.end());
  validate_link(R);
  return R;
}

std::string serialize_link(const LinkDiagram& R) {
  std::ostringstream os;
  os << "link " << R.cols << ' ' << R.rows << '\n';
  auto vs = R.vertices;
  std::sort(vs.begin(), vs.end());
  for (const auto& p : vs) os << p.v << ' ' << p.h << '\n';
  if (R.oriented()) {
    os << "orient";
    for (int8_t o : R.orientation) os << (o > 0 ? " +" : " -");
    os << '\n';
  }
  return os.str();
}

SurfaceDiagram parse_surface(const std::string& text) {
  Lines ls = tokenize(text);
  if (ls.rows.empty()) throw Error("empty input");
  auto& [hline, head] = ls.rows[0];
  if (head.size() != 3 || head[0] != "surface") fail(hline, "expected `surface <p> <q>`");
  SurfaceDiagram pi;
  pi.cols = to_int(head[1], hline);
  pi.rows = to_int(head[2], hline);
  for (size_t i = 1; i < ls.rows.size(); ++i) {
    auto& [no, toks] = ls.rows[i];
    if (toks.size() != 4) fail(no, "expected `vL vR hB hT`");
    pi.rects.push_back(
        {to_int(toks[0], no), to_int(toks[1], no), to_int(toks[2], no), to_int(toks[3], no)});
  }
  validate_surface(pi);
  return pi;
}

std::string serialize_surface(const SurfaceDiagram& pi) {
  std::ostringstream os;
  os << "surface " << pi.cols << ' ' << pi.rows << '\n';
  for (const auto& r : pi.rects) os << r.vl << ' ' << r.vr << ' ' << r.hb << ' ' << r.ht << '\n';
  return os.str();
}

DividingCode parse_code(const std::string& text) {
  Lines ls = tokenize(text);
  if (ls.rows.empty()) throw Error("empty input");
  auto& [hline, head] = ls.rows[0];
  if (head.size() != 2 || head[0] != "code") fail(hline, "expected `code <n>`");
  DividingCode c;
  c.n = to_int(head[1], hline);
  for (size_t i = 1; i < ls.rows.size(); ++i) {
    auto& [no, toks] = ls.rows[i];
    if (toks[0] != "+" && toks[0] != "-") fail(no, "expected `+ ...` or `- ...`");
    CodeComponent comp;
    for (size_t j = 1; j < toks.size(); ++j) comp.points.push_back(to_int(toks[j], no));
    if (comp.points.empty()) fail(no, "empty component");
    if (comp.points.size() >= 2 && comp.points.front() == comp.points.back()) {
      comp.closed = true;
      comp.points.pop_back();
    }
    (toks[0] == "+" ? c.plus : c.minus).push_back(std::move(comp));
  }
  validate_code(c);
  return c;
}

std::string serialize_code(const DividingCode& c) {
  std::ostringstream os;
  os << "code " << c.n << '\n';
  auto put = [&](const char* tag, const std::vector<CodeComponent>& comps) {
    for (const auto& comp : comps) {
      os << tag;
      for (int p : comp.points) os << ' ' << p;
      if (comp.closed) os << ' ' << comp.points.front();
      os << '\n';
    }
  };
  put("+", c.plus);
  put("-", c.minus);
  return os.str();
}

EnhancedMirrorDiagram parse_mirror(const std::string& text) {
  Lines ls = tokenize(text);
  if (ls.rows.empty()) throw Error("empty input");
  auto& [hline, head] = ls.rows[0];
  if (head.size() != 3 || head[0] != "mirror") fail(hline, "expected `mirror <p> <q>`");
  EnhancedMirrorDiagram em;
  em.m.cols = to_int(head[1], hline);
  em.m.rows = to_int(head[2], hline);
  std::vector<std::tuple<int, int, std::string>> holes;
  for (size_t i = 1; i < ls.rows.size(); ++i) {
    auto& [no, toks] = ls.rows[i];
    if (toks[0] == "hole") {
      if (toks.size() != 4) fail(no, "expected `hole <v> <h> <port>`");
      holes.push_back({to_int(toks[1], no), to_int(toks[2], no), toks[3]});
      continue;
    }
    if (toks.size() != 3) fail(no, "expected `v h /` or `v h \\`");
    DiagType t;
    if (toks[2] == "/") t = DiagType::Slash;
    else if (toks[2] == "\\") t = DiagType::Back;
    else fail(no, "mirror type must be / or \\");
    GridPoint p{to_int(toks[0], no), to_int(toks[1], no)};
    if (!em.m.mirrors.emplace(p, t).second) fail(no, "duplicate mirror");
  }
  validate_mirror(em.m);
  auto circuits = trace_circuits(em.m);
  for (auto& [v, h, port] : holes) {
    Port pt = port_from_name(port);
    bool found = false;
    for (const auto& c : circuits)
      for (const auto& ev : c.events)
        if (ev.at == GridPoint{v, h} && (ev.a == pt || ev.b == pt)) {
          em.holes.insert(c.key);
          found = true;
        }
    if (!found) throw Error("hole transit not found at " + std::to_string(v) + "," + std::to_string(h));
  }
  return em;
}

std::string serialize_mirror(const EnhancedMirrorDiagram& em) {
  std::ostringstream os;
  os << "mirror " << em.m.cols << ' ' << em.m.rows << '\n';
  for (const auto& [p, t] : em.m.mirrors)
    os << p.v << ' ' << p.h << ' ' << (t == DiagType::Slash ? '/' : '\\') << '\n';
  auto circuits = trace_circuits(em.m);
  for (const auto& c : circuits) {
    if (!em.holes.count(c.key) || c.bare) continue;
    os << "hole " << c.events[0].at.v << ' ' << c.events[0].at.h << ' '
       << port_name(c.events[0].a) << '\n';
  }
  return os.str();
}

namespace {

const char* kind_name(MirrorMove::Kind k) {
  using K = MirrorMove::Kind;
  switch (k) {
    case K::Extension: return "ext";
    case K::Elimination: return "elim";
    case K::BypassAdd: return "bypass-add";
    case K::BypassRemove: return "bypass-remove";
    case K::Slide: return "slide";
    case K::BridgeAdd: return "bridge-add";
    case K::BridgeRemove: return "bridge-remove";
    case K::Twist: return "twist";
    case K::Jump: return "jump";
    case K::WrinkleCreate: return "wrinkle-create";
    case K::WrinkleReduce: return "wrinkle-reduce";
    case K::DoubleSplit: return "double-split";
    case K::DoubleMerge: return "double-merge";
    case K::Split: return "split";
    case K::Merge: return "merge";
  }
  return "?";
}

MirrorMove::Kind kind_from_name(const std::string& s, int line) {
  using K = MirrorMove::Kind;
  if (s == "ext") return K::Extension;
  if (s == "elim") return K::Elimination;
  if (s == "bypass-add") return K::BypassAdd;
  if (s == "bypass-remove") return K::BypassRemove;
  if (s == "slide") return K::Slide;
  if (s == "bridge-add") return K::BridgeAdd;
  if (s == "bridge-remove") return K::BridgeRemove;
  if (s == "twist") return K::Twist;
  if (s == "jump") return K::Jump;
  if (s == "wrinkle-create") return K::WrinkleCreate;
  if (s == "wrinkle-reduce") return K::WrinkleReduce;
  if (s == "double-split") return K::DoubleSplit;
  if (s == "double-merge") return K::DoubleMerge;
  if (s == "split") return K::Split;
  if (s == "merge") return K::Merge;
  fail(line, "unknown move kind: " + s);
}

const char* corner_name(CornerRole c) {
  switch (c) {
    case CornerRole::BL: return "BL";
    case CornerRole::BR: return "BR";
    case CornerRole::TR: return "TR";
    case CornerRole::TL: return "TL";
  }
  return "?";
}

CornerRole corner_from_name(const std::string& s, int line) {
  if (s == "BL") return CornerRole::BL;
  if (s == "BR") return CornerRole::BR;
  if (s == "TR") return CornerRole::TR;
  if (s == "TL") return CornerRole::TL;
  fail(line, "unknown corner: " + s);
}

}  // namespace

std::string serialize_move(const MirrorMove& mv) {
  std::ostringstream os;
  os << kind_name(mv.kind);
  os << " axis=" << (mv.axis == LevelAxis::Vertical ? 'v' : 'h');
  os << " level=" << mv.level << " gap=" << mv.gap << " host=" << mv.host;
  os << " mtype=" << (mv.mtype == DiagType::Slash ? '/' : '\\');
  os << " rect=" << mv.x1 << ',' << mv.x2 << ',' << mv.y1 << ',' << mv.y2;
  os << " corner=" << corner_name(mv.corner);
  os << " fresh=" << mv.fresh << " dir=" << mv.dir;
  os << " back=" << mv.back_pos << " slash=" << mv.slash_pos;
  os << " stype=" << mv.stype << " spos=" << mv.spos << " cgap=" << mv.cgap;
  if (!mv.essential_pick.empty()) os << " pick=" << mv.essential_pick;
  return os.str();
}

std::string serialize_script(const std::vector<MirrorMove>& script) {
  std::ostringstream os;
  for (const auto& mv : script) os << serialize_move(mv) << '\n';
  return os.str();
}

std::vector<MirrorMove> parse_script(const std::string& text,
                                     std::vector<std::pair<size_t, std::string>>* checkpoints) {
  Lines ls = tokenize(text);
  std::vector<MirrorMove> out;
  for (auto& [no, toks] : ls.rows) {
    if (toks[0] == "check") {
      if (toks.size() != 2) fail(no, "expected `check <canonical>`");
      if (checkpoints) checkpoints->push_back({out.size(), toks[1]});
      continue;
    }
    MirrorMove mv;
    mv.kind = kind_from_name(toks[0], no);
    for (size_t i = 1; i < toks.size(); ++i) {
      auto eq = toks[i].find('=');
      if (eq == std::string::npos) fail(no, "expected key=value: " + toks[i]);
      std::string key = toks[i].substr(0, eq), val = toks[i].substr(eq + 1);
      if (key == "axis") mv.axis = val == "v" ? LevelAxis::Vertical : LevelAxis::Horizontal;
      else if (key == "level") mv.level = to_int(val, no);
      else if (key == "gap") mv.gap = to_int(val, no);
      else if (key == "host") mv.host = to_int(val, no);
      else if (key == "mtype") mv.mtype = val == "/" ? DiagType::Slash : DiagType::Back;
      else if (key == "rect") {
        std::istringstream rs(val);
        std::string part;
        int vals[4];
        for (int k = 0; k < 4; ++k) {
          if (!std::getline(rs, part, ',')) fail(no, "rect needs four entries");
          vals[k] = to_int(part, no);
        }
        mv.x1 = vals[0];
        mv.x2 = vals[1];
        mv.y1 = vals[2];
        mv.y2 = vals[3];
      } else if (key == "corner") mv.corner = corner_from_name(val, no);
      else if (key == "fresh") mv.fresh = to_int(val, no);
      else if (key == "dir") mv.dir = to_int(val, no);
      else if (key == "back") mv.back_pos = to_int(val, no);
      else if (key == "slash") mv.slash_pos = to_int(val, no);
      else if (key == "stype") mv.stype = to_int(val, no);
      else if (key == "spos") mv.spos = to_int(val, no);
      else if (key == "cgap") mv.cgap = to_int(val, no);
      else if (key == "pick") mv.essential_pick = val;
      else fail(no, "unknown parameter: " + key);
    }
    out.push_back(mv);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << content;
}

}  // namespace gridsurf
