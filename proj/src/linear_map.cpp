#include "jlopt/linear_map.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "jlopt/error.hpp"
#include "text_io.hpp"

namespace jlopt {

LinearMap::LinearMap(RowMatrix entries) : a_(std::move(entries)) {
  if (a_.rows() == 0 || a_.cols() == 0) throw PreconditionError("linear map needs m, n >= 1");
  if (!a_.allFinite()) throw PreconditionError("linear map has non-finite entries");
}

void write_text(std::ostream& out, const LinearMap& map, const HeaderFields& extra) {
  out << "jlmap v1 m=" << map.rows() << " n=" << map.cols();
  for (const auto& [key, value] : extra) out << ' ' << key << '=' << value;
  out << '\n';
  const auto& a = map.matrix();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j) out << ',';
      out << detail::format_real(a(i, j));
    }
    out << '\n';
  }
}

LinearMap read_linear_map(std::istream& in, HeaderFields* extra) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty map file", 1);
  auto fields = detail::parse_header(line, "jlmap", "v1");
  if (!fields.contains("m") || !fields.contains("n")) throw ParseError("header lacks m= or n=", 1);
  const std::size_t m = detail::parse_count(fields["m"], 1);
  const std::size_t n = detail::parse_count(fields["n"], 1);
  fields.erase("m");
  fields.erase("n");
  if (m == 0 || n == 0) throw ParseError("m and n must be >= 1", 1);
  if (n > kMaxCoordinates / m) throw SizeError("declared map exceeds size limit");

  RowMatrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lineno = i + 2;
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(m) + " rows", lineno);
    const auto cells = detail::split(detail::trim(line), ',');
    if (cells.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " values, found " + std::to_string(cells.size()), lineno);
    }
    for (std::size_t j = 0; j < n; ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = detail::parse_real(cells[j], lineno);
    }
  }
  if (extra) *extra = std::move(fields);
  if (!a.allFinite()) throw ParseError("map has non-finite entries", 0);
  return LinearMap(std::move(a));
}

LinearMap load_linear_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open map '" + path + "'");
  return read_linear_map(in);
}

void save_linear_map(const std::string& path, const LinearMap& map, const HeaderFields& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  write_text(out, map, extra);
  if (!out) throw PreconditionError("write to '" + path + "' failed");
}

}  // namespace jlopt
