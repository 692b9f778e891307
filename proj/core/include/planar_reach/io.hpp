#pragma once

#include <iosfwd>
#include <string>

#include "planar_reach/plane_graph.hpp"

namespace planar_reach {

// Text instance format:
//   line 1: "n m"
//   next m lines: "tail head" (edge ids are the 0-based line order)
//   next n lines: clockwise dart ring of vertex i, tokens "e<id>+" (dart at
//     the edge's tail) / "e<id>-" (dart at its head); an empty line is an
//     isolated vertex
// '#' starts a comment; a comment-only line does not count as a ring line.
PlaneMultigraph read_instance(std::istream& in);
PlaneMultigraph read_instance_file(const std::string& path);

void write_instance(std::ostream& out, const PlaneMultigraph& g);
void write_instance_file(const std::string& path, const PlaneMultigraph& g);

}  // namespace planar_reach
