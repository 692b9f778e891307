#include "planar_reach/io.hpp"

#include <fstream>
#include <sstream>

namespace planar_reach {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  std::string s = pos == std::string::npos ? line : line.substr(0, pos);
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  return s;
}

bool next_data_line(std::istream& in, std::string& out, bool allow_blank) {
  std::string line;
  while (std::getline(in, line)) {
    bool had_comment = line.find('#') != std::string::npos;
    std::string s = strip_comment(line);
    if (s.empty() && (had_comment || !allow_blank)) continue;  // skip comment/blank
    out = s;
    return true;
  }
  return false;
}

}  // namespace

PlaneMultigraph read_instance(std::istream& in) {
  std::string line;
  require(next_data_line(in, line, false), Err::ParseError, "missing header line");
  std::istringstream hdr(line);
  long long n = -1, m = -1;
  hdr >> n >> m;
  require(n >= 0 && m >= 0, Err::ParseError, "bad header: expected 'n m'");

  std::vector<PlaneMultigraph::Edge> edges(m);
  for (long long i = 0; i < m; ++i) {
    require(next_data_line(in, line, false), Err::ParseError, "missing edge line");
    std::istringstream es(line);
    long long t = -1, h = -1;
    es >> t >> h;
    require(t >= 0 && t < n && h >= 0 && h < n, Err::ParseError, "edge endpoint out of range");
    edges[i] = {static_cast<VId>(t), static_cast<VId>(h)};
  }

  std::vector<std::vector<Dart>> rings(n);
  for (long long v = 0; v < n; ++v) {
    require(next_data_line(in, line, true), Err::ParseError, "missing ring line");
    std::istringstream rs(line);
    std::string tok;
    while (rs >> tok) {
      require(tok.size() >= 3 && tok.front() == 'e', Err::ParseError,
              "bad dart token '" + tok + "'");
      char side = tok.back();
      require(side == '+' || side == '-', Err::ParseError, "bad dart side in '" + tok + "'");
      long long id = -1;
      try {
        id = std::stoll(tok.substr(1, tok.size() - 2));
      } catch (...) {
        fail(Err::ParseError, "bad edge id in '" + tok + "'");
      }
      require(id >= 0 && id < m, Err::ParseError, "dart edge id out of range");
      rings[v].push_back(side == '+' ? tail_dart(static_cast<EId>(id))
                                     : head_dart(static_cast<EId>(id)));
    }
  }
  return PlaneMultigraph::build_from_rotation(static_cast<int>(n), std::move(edges),
                                              std::move(rings));
}

PlaneMultigraph read_instance_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Err::ParseError, "cannot open " + path);
  return read_instance(in);
}

void write_instance(std::ostream& out, const PlaneMultigraph& g) {
  require(g.edge_count() == g.edge_slots(), Err::PreconditionViolated,
          "cannot serialize a graph with removed edge slots");
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (EId e = 0; e < g.edge_slots(); ++e) out << g.tail(e) << ' ' << g.head(e) << '\n';
  for (VId v = 0; v < g.vertex_count(); ++v) {
    const auto& r = g.ring(v);
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << ' ';
      out << 'e' << edge_of(r[i]) << (is_head_side(r[i]) ? '-' : '+');
    }
    out << '\n';
  }
}

void write_instance_file(const std::string& path, const PlaneMultigraph& g) {
  std::ofstream out(path);
  require(out.good(), Err::ParseError, "cannot open " + path + " for writing");
  write_instance(out, g);
}

}  // namespace planar_reach
