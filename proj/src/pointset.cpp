#include "jlopt/pointset.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "jlopt/error.hpp"
#include "text_io.hpp"

namespace jlopt {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::basis: return "basis";
    case Role::gaussian: return "gaussian";
    case Role::origin: return "origin";
  }
  return "?";
}

Role role_from_string(std::string_view text) {
  if (text == "basis") return Role::basis;
  if (text == "gaussian") return Role::gaussian;
  if (text == "origin") return Role::origin;
  throw ParseError("unknown role tag '" + std::string(text) + "'", 0);
}

namespace {

void check_size(std::size_t n, std::size_t count) {
  if (n == 0) throw PreconditionError("point set dimension must be >= 1");
  if (count != 0 && n > kMaxCoordinates / count) {
    throw SizeError("point set of " + std::to_string(count) + " x " + std::to_string(n) +
                    " exceeds the " + std::to_string(kMaxCoordinates) + "-coordinate limit");
  }
}

void fill_gaussian_rows(RowMatrix& points, Eigen::Index first_row, std::size_t k, Seed seed,
                        std::uint64_t index_offset) {
  const auto n = points.cols();
  for (std::size_t i = 0; i < k; ++i) {
    NormalSampler normal(child(seed, i + index_offset));
    auto row = points.row(first_row + static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < n; ++j) row(j) = normal();
  }
}

}  // namespace

PointSet::PointSet(std::size_t dim, RowMatrix points, std::vector<Role> roles)
    : dim_(dim), points_(std::move(points)), roles_(std::move(roles)) {
  check_size(dim_, roles_.size());
  if (static_cast<std::size_t>(points_.rows()) != roles_.size()) {
    throw DimensionError("point count " + std::to_string(points_.rows()) + " != role count " +
                         std::to_string(roles_.size()));
  }
  if (!roles_.empty() && static_cast<std::size_t>(points_.cols()) != dim_) {
    throw DimensionError("point length " + std::to_string(points_.cols()) + " != dim " +
                         std::to_string(dim_));
  }
  if (roles_.empty()) points_.resize(0, static_cast<Eigen::Index>(dim_));
  if (!points_.allFinite()) throw PreconditionError("point set contains non-finite coordinates");
  for (std::size_t i = 0; i < roles_.size(); ++i) {
    if (roles_[i] != Role::basis) continue;
    const auto row = points_.row(static_cast<Eigen::Index>(i));
    Eigen::Index hot = 0;
    const bool unit = row.maxCoeff(&hot) == 1.0 && row.cwiseAbs().sum() == 1.0;
    if (!unit) {
      throw PreconditionError("point " + std::to_string(i) + " is tagged basis but is not a standard unit vector");
    }
  }
}

bool PointSet::operator==(const PointSet& other) const {
  return dim_ == other.dim_ && roles_ == other.roles_ && points_ == other.points_;
}

PointSet standard_basis(std::size_t n) {
  check_size(n, n);
  RowMatrix pts = RowMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return PointSet(n, std::move(pts), std::vector<Role>(n, Role::basis));
}

PointSet simplex(std::size_t n) {
  check_size(n, n + 1);
  const auto dim = static_cast<Eigen::Index>(n);
  RowMatrix pts = RowMatrix::Zero(dim + 1, dim);
  pts.bottomRows(dim).setIdentity();
  std::vector<Role> roles(n + 1, Role::basis);
  roles[0] = Role::origin;
  return PointSet(n, std::move(pts), std::move(roles));
}

PointSet gaussian_vectors(std::size_t n, std::size_t k, Seed seed) {
  check_size(n, k);
  RowMatrix pts(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
  fill_gaussian_rows(pts, 0, k, seed, 0);
  return PointSet(n, std::move(pts), std::vector<Role>(k, Role::gaussian));
}

PointSet hard_instance(std::size_t n, std::size_t k, Seed seed) {
  check_size(n, n + k);
  const auto dim = static_cast<Eigen::Index>(n);
  RowMatrix pts(dim + static_cast<Eigen::Index>(k), dim);
  pts.topRows(dim).setIdentity();
  fill_gaussian_rows(pts, dim, k, seed, 0);
  std::vector<Role> roles(n + k, Role::gaussian);
  std::fill_n(roles.begin(), n, Role::basis);
  return PointSet(n, std::move(pts), std::move(roles));
}

PointSet subspace_gaussian(std::size_t n, std::size_t d, std::size_t k, Seed seed) {
  check_size(n, k);
  if (d == 0 || d > n) throw PreconditionError("subspace dimension must lie in [1, n]");
  const auto dim = static_cast<Eigen::Index>(n);
  const auto sub = static_cast<Eigen::Index>(d);

  RowMatrix frame(dim, sub);
  NormalSampler normal(child(seed, 0));
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < sub; ++j) frame(i, j) = normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(dim, sub);

  RowMatrix coeffs(static_cast<Eigen::Index>(k), sub);
  fill_gaussian_rows(coeffs, 0, k, seed, 1);
  RowMatrix pts = coeffs * basis.transpose();
  return PointSet(n, std::move(pts), std::vector<Role>(k, Role::gaussian));
}

std::size_t default_gaussian_count(std::size_t n, double gamma) {
  return static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), 2.0 + gamma)));
}

// ---- text format ------------------------------------------------------------

void write_text(std::ostream& out, const PointSet& set, const HeaderFields& extra) {
  out << "jlps v1 n=" << set.dim() << " N=" << set.size();
  for (const auto& [key, value] : extra) out << ' ' << key << '=' << value;
  out << '\n';
  const auto& pts = set.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      if (j) out << ',';
      out << detail::format_real(pts(i, j));
    }
    out << '\n';
  }
  out << "roles=";
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out << ',';
    out << to_string(set.role(i));
  }
  out << '\n';
}

PointSet read_text(std::istream& in, HeaderFields* extra) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty point set file", 1);
  auto fields = detail::parse_header(line, "jlps", "v1");
  if (!fields.contains("n") || !fields.contains("N")) throw ParseError("header lacks n= or N=", 1);
  const std::size_t n = detail::parse_count(fields["n"], 1);
  const std::size_t count = detail::parse_count(fields["N"], 1);
  fields.erase("n");
  fields.erase("N");
  if (n == 0) throw ParseError("n must be >= 1", 1);
  if (count != 0 && n > kMaxCoordinates / count) throw SizeError("declared point set exceeds size limit");

  RowMatrix pts(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
  std::size_t lineno = 1;
  for (std::size_t i = 0; i < count; ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw ParseError("expected " + std::to_string(count) + " point rows", lineno);
    const auto cells = detail::split(detail::trim(line), ',');
    if (cells.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " values, found " + std::to_string(cells.size()), lineno);
    }
    for (std::size_t j = 0; j < n; ++j) {
      pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = detail::parse_real(cells[j], lineno);
    }
  }
  ++lineno;
  if (!std::getline(in, line)) throw ParseError("missing roles= footer", lineno);
  const auto footer = detail::trim(line);
  if (!footer.starts_with("roles=")) throw ParseError("missing roles= footer", lineno);
  std::vector<Role> roles;
  const auto body = footer.substr(6);
  if (!body.empty()) {
    for (auto tag : detail::split(body, ',')) {
      try {
        roles.push_back(role_from_string(detail::trim(tag)));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    }
  }
  if (roles.size() != count) {
    throw ParseError("roles footer lists " + std::to_string(roles.size()) + " tags for " +
                     std::to_string(count) + " points", lineno);
  }
  if (extra) *extra = std::move(fields);
  try {
    return PointSet(n, std::move(pts), std::move(roles));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), 0);
  }
}

// ---- binary format ----------------------------------------------------------

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const U bits = std::bit_cast<U>(value);
  char bytes[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes, sizeof bytes);
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  unsigned char bytes[sizeof(U)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof bytes)) throw ParseError("truncated binary point set", 0);
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

void write_binary(std::ostream& out, const PointSet& set) {
  out.write("JLPS", 4);
  put_le<std::uint32_t>(out, 1);
  put_le<std::uint64_t>(out, set.dim());
  put_le<std::uint64_t>(out, set.size());
  const auto& pts = set.points();
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j) put_le<double>(out, pts(i, j));
  for (Role r : set.roles()) out.put(static_cast<char>(r));
}

PointSet read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != "JLPS") throw ParseError("missing JLPS magic", 0);
  if (get_le<std::uint32_t>(in) != 1) throw ParseError("unsupported JLPS version", 0);
  const auto n = get_le<std::uint64_t>(in);
  const auto count = get_le<std::uint64_t>(in);
  if (n == 0) throw ParseError("n must be >= 1", 0);
  if (count != 0 && n > kMaxCoordinates / count) throw SizeError("declared point set exceeds size limit");
  RowMatrix pts(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < pts.rows(); ++i)
    for (Eigen::Index j = 0; j < pts.cols(); ++j) pts(i, j) = get_le<double>(in);
  std::vector<Role> roles(count);
  for (auto& r : roles) {
    const int tag = in.get();
    if (tag < 0 || tag > 2) throw ParseError("bad role byte in binary point set", 0);
    r = static_cast<Role>(tag);
  }
  try {
    return PointSet(n, std::move(pts), std::move(roles));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), 0);
  }
}

PointSet load_point_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open point set '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  in.clear();
  in.seekg(0);
  if (std::string_view(magic, 4) == "JLPS") return read_binary(in);
  return read_text(in);
}

void save_point_set(const std::string& path, const PointSet& set, bool binary, const HeaderFields& extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write '" + path + "'");
  if (binary) {
    write_binary(out, set);
  } else {
    write_text(out, set, extra);
  }
  if (!out) throw PreconditionError("write to '" + path + "' failed");
}

}  // namespace jlopt
