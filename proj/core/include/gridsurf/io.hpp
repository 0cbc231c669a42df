#pragma once

#include <iosfwd>
#include <string>

#include "gridsurf/divcode.hpp"
#include "gridsurf/link.hpp"
#include "gridsurf/mirror.hpp"
#include "gridsurf/surface.hpp"

namespace gridsurf {

// Line-oriented text formats, UTF-8, '#' comments, whitespace-insensitive
// fields. Parse errors carry line numbers.
//
//   link <p> <q>       one `v h` pair per vertex; optional `orient + - ...`
//   surface <p> <q>    one `vL vR hB hT` line per rectangle
//   code <n>           `+ a b c ...` / `- a b c ...` component lines; a
//                      closed component repeats its first label at the end
//   mirror <p> <q>     `v h /` or `v h \` mirror lines; optional
//                      `hole <v> <h> <port>` lines naming a circuit transit

LinkDiagram parse_link(const std::string& text);
std::string serialize_link(const LinkDiagram& R);

SurfaceDiagram parse_surface(const std::string& text);
std::string serialize_surface(const SurfaceDiagram& pi);

DividingCode parse_code(const std::string& text);
std::string serialize_code(const DividingCode& c);

EnhancedMirrorDiagram parse_mirror(const std::string& text);
std::string serialize_mirror(const EnhancedMirrorDiagram& em);

// Move scripts: one move per line, named parameters, `check <canonical-hex>`
// checkpoint lines.
std::vector<MirrorMove> parse_script(const std::string& text,
                                     std::vector<std::pair<size_t, std::string>>* checkpoints);
std::string serialize_script(const std::vector<MirrorMove>& script);
std::string serialize_move(const MirrorMove& mv);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gridsurf
