#include "magma/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "magma/domain.hpp"

namespace magma {

namespace {
std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void save_field_csv(const GridField& u, const std::string& path) {
  const Grid& g = u.grid();
  nlohmann::json header = {
      {"domain", g.domain().to_json()},
      {"n", g.nodes_per_axis()},
      {"h", g.h()},
      {"format", "magma-field-1"},
  };

  std::ofstream out(path);
  if (!out) throw InvalidArgument("save_field_csv: cannot open " + path);
  out << "# " << header.dump() << "\n";
  out << "i,j,x,y,u\n";
  for (int m = 0; m < g.size(); ++m) {
    Point p = g.point(m);
    out << g.lattice_i(m) << ',' << g.lattice_j(m) << ',' << fmt17(p.x) << ','
        << fmt17(p.y) << ',' << fmt17(u[m]) << "\n";
  }
  if (!out) throw InvalidArgument("save_field_csv: write failed: " + path);
}

GridField load_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("load_field_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line) || line.size() < 2 || line[0] != '#')
    throw InvalidArgument("load_field_csv: missing JSON header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line.substr(1));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("load_field_csv: bad header: ") +
                          e.what());
  }
  if (!header.contains("domain") || !header.contains("n"))
    throw InvalidArgument("load_field_csv: header lacks domain or n");

  auto g = Grid::make(ConvexDomain::from_json(header["domain"]),
                      header["n"].get<int>());
  std::vector<double> vals(g->size());
  std::vector<char> seen(g->size(), 0);

  // Skip the column-name row if present.
  std::streampos after_header = in.tellg();
  if (std::getline(in, line) && line.rfind("i,", 0) != 0) in.seekg(after_header);

  int filled = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int i = 0, j = 0;
    double x = 0, y = 0, v = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf", &i, &j, &x, &y, &v) != 5)
      throw InvalidArgument("load_field_csv: malformed row: " + line);
    int m = g->at(i, j);
    if (m < 0)
      throw InvalidArgument("load_field_csv: row names a non-interior node");
    if (seen[m])
      throw InvalidArgument("load_field_csv: duplicate node in file");
    seen[m] = 1;
    vals[m] = v;
    ++filled;
  }
  if (filled != g->size())
    throw InvalidArgument("load_field_csv: file covers " +
                          std::to_string(filled) + " of " +
                          std::to_string(g->size()) + " nodes");
  return GridField(g, std::move(vals));
}

}  // namespace magma
