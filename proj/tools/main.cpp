// Command-line front end: validation, invariants, realization search,
// mirror-diagram moves and the full verification pipeline.
//
// Exit codes: 0 = success / expectation met, 1 = expectation failed,
// 2 = input error.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "gridsurf/io.hpp"
#include "gridsurf/pipeline.hpp"
#include "gridsurf/realize.hpp"
#include "gridsurf/svg.hpp"

using namespace gridsurf;

namespace {

enum class FileKind { Link, Surface, Code, Mirror, Unknown };

FileKind sniff(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "link") return FileKind::Link;
    if (word == "surface") return FileKind::Surface;
    if (word == "code") return FileKind::Code;
    if (word == "mirror") return FileKind::Mirror;
    return FileKind::Unknown;
  }
  return FileKind::Unknown;
}

int cmd_validate(const std::string& path) {
  std::string text = read_file(path);
  switch (sniff(text)) {
    case FileKind::Link:
      validate_link(parse_link(text));
      std::cout << "valid link diagram\n";
      return 0;
    case FileKind::Surface: {
      SurfaceDiagram pi = parse_surface(text);
      SurfaceInfo info = validate_surface(pi);
      std::cout << "valid surface diagram: " << pi.rects.size() << " rectangles, "
                << info.vertices.size() << " vertices, " << (pi.cols + pi.rows)
                << " occupied levels, " << info.boundary_vertices << " boundary vertices\n";
      return 0;
    }
    case FileKind::Code:
      validate_code(parse_code(text));
      std::cout << "valid dividing code\n";
      return 0;
    case FileKind::Mirror:
      validate_enhanced(parse_mirror(text));
      std::cout << "valid mirror diagram\n";
      return 0;
    default:
      std::cerr << "unrecognized input kind\n";
      return 2;
  }
}

int cmd_info(const std::string& path) {
  std::string text = read_file(path);
  switch (sniff(text)) {
    case FileKind::Link: {
      LinkDiagram R = parse_link(text);
      if (!R.oriented()) R = orient_canonically(R);
      LinkReport rep = analyze_link(R);
      std::cout << "components=" << rep.components.size() << " vertices=" << rep.vertex_count
                << " writhe=" << rep.writhe << " tb_plus=" << rep.tb_plus
                << " tb_minus=" << rep.tb_minus << '\n';
      for (size_t i = 0; i < rep.components.size(); ++i)
        std::cout << "component " << i << ": vertices=" << rep.components[i].vertices.size()
                  << " tb_plus=" << rep.components[i].tb_plus
                  << " tb_minus=" << rep.components[i].tb_minus << '\n';
      return 0;
    }
    case FileKind::Surface: {
      SurfaceDiagram pi = parse_surface(text);
      SurfaceClass cls = classify_surface(pi);
      std::cout << "rectangles=" << cls.rect_count << " vertices=" << cls.vertex_count
                << " levels=" << cls.level_count << " euler=" << cls.euler
                << " boundary_components=" << cls.boundary_components
                << " orientable=" << (cls.orientable ? "yes" : "no") << " genus=" << cls.genus
                << '\n';
      BoundaryLink bl = boundary_link(pi);
      for (size_t i = 0; i < bl.tb_plus_rel.size(); ++i)
        std::cout << "boundary " << i << ": tb_plus_rel=" << bl.tb_plus_rel[i]
                  << " tb_minus_rel=" << bl.tb_minus_rel[i] << '\n';
      auto bigons = detect_bigons(pi);
      for (const auto& b : bigons)
        std::cout << "bigon: rectangles " << (b.rect_a + 1) << " and " << (b.rect_b + 1)
                  << (b.reducible_admissibly ? " (admissibly reducible)" : " (not admissibly reducible)")
                  << '\n';
      return 0;
    }
    case FileKind::Mirror: {
      EnhancedMirrorDiagram em = parse_mirror(text);
      auto circuits = trace_circuits(em.m);
      std::cout << "levels=" << (em.m.cols + em.m.rows) << " mirrors=" << em.m.mirrors.size()
                << " euler=" << mirror_euler(em.m) << " circuits=" << circuits.size() << '\n';
      for (const auto& c : circuits)
        std::cout << "circuit " << c.key << ": hits=" << (c.hits_back + c.hits_slash)
                  << " tb_plus=" << c.tb_plus() << " tb_minus=" << c.tb_minus()
                  << (c.simple ? " simple" : "") << (em.holes.count(c.key) ? " hole" : "")
                  << '\n';
      return 0;
    }
    default:
      std::cerr << "info expects a link, surface or mirror file\n";
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rectangular diagram calculus for links, surfaces and mirror diagrams"};
  app.require_subcommand(1);

  std::string path, path2, out_path, boundary_path, key, mode;
  long budget = 50'000'000;
  int jobs = 1;
  bool stats = false;

  auto* validate = app.add_subcommand("validate", "validate a diagram or code file");
  validate->add_option("file", path)->required();

  auto* info = app.add_subcommand("info", "invariants of a diagram");
  info->add_option("file", path)->required();

  auto* code = app.add_subcommand("code", "dividing code operations");
  auto* extract = code->add_subcommand("extract", "canonic code of a surface diagram");
  extract->add_option("file", path)->required();
  auto* isocheck = code->add_subcommand("isocheck", "test two codes for isomorphism");
  isocheck->add_option("first", path)->required();
  isocheck->add_option("second", path2)->required();

  auto* realize = app.add_subcommand("realize", "enumerate realizations of a dividing code");
  realize->add_option("file", path)->required();
  realize->add_option("--boundary", boundary_path, "link diagram filter (up to exchange)");
  realize->add_option("--budget", budget, "search node budget");
  realize->add_option("--jobs", jobs, "parallel workers");
  realize->add_flag("--stats", stats, "print machine-readable statistics");
  realize->add_option("--out", out_path, "write realizations to files <out>.N");

  auto* link = app.add_subcommand("link", "link diagram operations");
  auto* closure = link->add_subcommand("closure", "exchange closure size");
  closure->add_option("file", path)->required();
  closure->add_option("--budget", budget);
  auto* rigid = link->add_subcommand("rigid", "rigidity test");
  rigid->add_option("file", path)->required();

  auto* mirror = app.add_subcommand("mirror", "mirror diagram operations");
  auto* circuits_cmd = mirror->add_subcommand("circuits", "boundary circuits");
  circuits_cmd->add_option("file", path)->required();
  auto* move_cmd = mirror->add_subcommand("move", "apply a move script");
  move_cmd->add_option("file", path)->required();
  move_cmd->add_option("script", path2)->required();
  move_cmd->add_option("--out", out_path);
  auto* decomp = mirror->add_subcommand("decompose", "decompose a move into a target type");
  decomp->add_option("file", path)->required();
  decomp->add_option("script", path2, "single-move script")->required();
  int target_type = 1;
  decomp->add_option("--type", target_type, "target type 1 or 2");
  auto* route_cmd = mirror->add_subcommand("route", "validate a splitting route");
  route_cmd->add_option("file", path)->required();
  route_cmd->add_option("route", key, "mirrors v,h;v,h;... terminal axis:level:gap")->required();

  auto* render = app.add_subcommand("render", "render a diagram to SVG");
  render->add_option("file", path)->required();
  render->add_option("--out", out_path, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify-script", "replay and neatness-check a script");
  verify->add_option("file", path)->required();
  verify->add_option("script", path2)->required();
  std::vector<std::string> protected_keys;
  verify->add_option("--protect", protected_keys, "protected circuit keys");

  auto* sixtwo = app.add_subcommand("sixtwo", "run the distinguishing pipeline");
  std::string r2_path;
  sixtwo->add_option("--r2", r2_path, "reference 16-vertex rigid diagram")->required();
  sixtwo->add_option("--budget", budget);
  sixtwo->add_option("--jobs", jobs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(path);
    if (*info) return cmd_info(path);
    if (*extract) {
      SurfaceDiagram pi = parse_surface(read_file(path));
      std::cout << serialize_code(extract_code(pi));
      return 0;
    }
    if (*isocheck) {
      DividingCode a = parse_code(read_file(path));
      DividingCode b = parse_code(read_file(path2));
      auto bij = code_isomorphic(a, b);
      if (!bij) {
        std::cout << "not isomorphic\n";
        return 1;
      }
      std::cout << "isomorphic:";
      for (int p = 1; p <= a.n; ++p) std::cout << ' ' << p << "->" << (*bij)[static_cast<size_t>(p)];
      std::cout << '\n';
      return 0;
    }
    if (*realize) {
      DividingCode c = parse_code(read_file(path));
      RealizeOptions opts;
      opts.node_budget = budget;
      opts.jobs = jobs;
      if (!boundary_path.empty()) opts.boundary_filter = parse_link(read_file(boundary_path));
      RealizeResult res = enumerate_realizations(c, opts);
      if (stats) {
        std::cout << "nodes=" << res.stats.nodes << '\n'
                  << "raw=" << res.stats.solutions_raw << '\n'
                  << "complete=" << (res.stats.complete ? 1 : 0) << '\n';
        if (!res.stats.unrealizable_reason.empty())
          std::cout << "unrealizable=" << res.stats.unrealizable_reason << '\n';
      }
      std::cout << "count=" << res.realizations.size() << '\n';
      for (size_t i = 0; i < res.realizations.size(); ++i) {
        if (!out_path.empty())
          write_file(out_path + "." + std::to_string(i + 1),
                     serialize_surface(res.realizations[i]));
        else
          std::cout << serialize_surface(res.realizations[i]);
      }
      if (!res.stats.complete) return 1;
      return 0;
    }
    if (*closure) {
      LinkDiagram R = parse_link(read_file(path));
      ClosureResult cr = exchange_closure(R, budget);
      std::cout << "closure=" << cr.canonical_forms.size() << " rigid="
                << (cr.is_rigid ? 1 : 0) << " complete=" << (cr.complete ? 1 : 0) << '\n';
      return cr.complete ? 0 : 1;
    }
    if (*rigid) {
      LinkDiagram R = parse_link(read_file(path));
      bool is_rigid = exchange_moves(R).empty();
      std::cout << (is_rigid ? "rigid" : "not rigid") << '\n';
      return is_rigid ? 0 : 1;
    }
    if (*circuits_cmd) {
      EnhancedMirrorDiagram em = parse_mirror(read_file(path));
      for (const auto& c : trace_circuits(em.m)) {
        std::cout << c.key << ": ";
        if (c.bare) std::cout << "bare level";
        else
          for (const auto& ev : c.events)
            std::cout << '(' << ev.at.v << ',' << ev.at.h << ')';
        std::cout << " tb_plus=" << c.tb_plus() << " tb_minus=" << c.tb_minus()
                  << (em.holes.count(c.key) ? " hole" : "") << '\n';
      }
      return 0;
    }
    if (*move_cmd) {
      EnhancedMirrorDiagram em = parse_mirror(read_file(path));
      auto script = parse_script(read_file(path2), nullptr);
      for (const auto& mv : script) em = apply_mirror_move(em, mv).diagram;
      std::string text = serialize_mirror(em);
      if (out_path.empty()) std::cout << text;
      else write_file(out_path, text);
      return 0;
    }
    if (*decomp) {
      EnhancedMirrorDiagram em = parse_mirror(read_file(path));
      auto script = parse_script(read_file(path2), nullptr);
      if (script.size() != 1) {
        std::cerr << "decompose expects a single-move script\n";
        return 2;
      }
      ScriptResult sr = decompose_move(em, script[0], target_type);
      std::cout << serialize_script(sr.script);
      return 0;
    }
    if (*route_cmd) {
      EnhancedMirrorDiagram em = parse_mirror(read_file(path));
      // route grammar: v,h;v,h;...@axis:level:gap[:double][:t1]
      SplittingRoute r;
      auto at = key.find('@');
      if (at == std::string::npos) {
        std::cerr << "route must contain @axis:level:gap\n";
        return 2;
      }
      std::string mirrors = key.substr(0, at), term = key.substr(at + 1);
      std::istringstream ms(mirrors);
      std::string item;
      while (std::getline(ms, item, ';')) {
        auto comma = item.find(',');
        r.mirrors.push_back(
            {std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1))});
      }
      std::istringstream ts(term);
      std::string ax, lvl, gp, flag;
      std::getline(ts, ax, ':');
      std::getline(ts, lvl, ':');
      std::getline(ts, gp, ':');
      if (std::getline(ts, flag, ':')) {
        if (flag == "double") r.double_headed = true;
        else if (flag == "t1") r.rtype = 1;
      }
      if (std::getline(ts, flag, ':') && flag == "t1") r.rtype = 1;
      r.p_axis = ax == "v" ? LevelAxis::Vertical : LevelAxis::Horizontal;
      r.p_level = std::stoi(lvl);
      r.p_gap = std::stoi(gp);
      validate_splitting_route(em.m, r);
      std::cout << "valid route\n";
      return 0;
    }
    if (*render) {
      std::string text = read_file(path);
      std::string svg;
      switch (sniff(text)) {
        case FileKind::Link: svg = render_svg(parse_link(text)); break;
        case FileKind::Surface: svg = render_svg(parse_surface(text)); break;
        case FileKind::Mirror: svg = render_svg(parse_mirror(text)); break;
        default:
          std::cerr << "render expects a link, surface or mirror file\n";
          return 2;
      }
      if (out_path.empty()) std::cout << svg;
      else write_file(out_path, svg);
      return 0;
    }
    if (*verify) {
      EnhancedMirrorDiagram em = parse_mirror(read_file(path));
      std::vector<std::pair<size_t, std::string>> checkpoints;
      auto script = parse_script(read_file(path2), &checkpoints);
      std::set<std::string> prot(protected_keys.begin(), protected_keys.end());
      NeatReport rep = check_neat(em, script, prot);
      // checkpoint verification
      bool checks_ok = true;
      {
        EnhancedMirrorDiagram cur = em;
        size_t ci = 0;
        for (size_t i = 0; i <= script.size(); ++i) {
          while (ci < checkpoints.size() && checkpoints[ci].first == i) {
            if (canonical_form(cur.m) != checkpoints[ci].second) checks_ok = false;
            ci++;
          }
          if (i < script.size()) cur = apply_mirror_move(cur, script[i]).diagram;
        }
      }
      std::cout << "replay_ok=" << (rep.replay_ok ? 1 : 0) << '\n'
                << "checkpoints_ok=" << (checks_ok ? 1 : 0) << '\n'
                << "neat=" << (rep.neat ? 1 : 0) << '\n'
                << "almost_neat=" << (rep.almost_neat ? 1 : 0) << '\n';
      if (!rep.violation.empty()) std::cout << "violation=" << rep.violation << '\n';
      for (size_t i = 0; i < rep.tb_ledger.size(); ++i) {
        std::cout << "step " << i << ':';
        for (const auto& [k, tb] : rep.tb_ledger[i])
          std::cout << ' ' << k << "=(" << tb.first << ',' << tb.second << ')';
        std::cout << '\n';
      }
      return rep.replay_ok && checks_ok ? 0 : 1;
    }
    if (*sixtwo) {
      FixtureSet fx;
      fx.code_a = builtin_code_a();
      fx.code_b = builtin_code_b();
      fx.r2 = parse_link(read_file(r2_path));
      PipelineReport rep = run_sixtwo_pipeline(fx, budget, jobs);
      std::cout << rep.log;
      if (!rep.distinguished) {
        std::cerr << "pipeline failed: " << rep.failure << '\n';
        return 1;
      }
      std::cout << "distinguished\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
