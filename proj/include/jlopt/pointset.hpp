#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jlopt/rng.hpp"

namespace jlopt {

using Vector = Eigen::VectorXd;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Role : unsigned char { basis = 0, gaussian = 1, origin = 2 };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);

// Point sets larger than this many coordinates are rejected.
inline constexpr std::size_t kMaxCoordinates = 10'000'000;

// A dimension plus N points stored as the rows of an N x dim matrix, each
// carrying a role tag.
class PointSet {
 public:
  PointSet(std::size_t dim, RowMatrix points, std::vector<Role> roles);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return roles_.size(); }
  bool empty() const noexcept { return roles_.empty(); }

  const RowMatrix& points() const noexcept { return points_; }
  const std::vector<Role>& roles() const noexcept { return roles_; }

  Vector point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }
  Role role(std::size_t i) const { return roles_.at(i); }

  bool operator==(const PointSet& other) const;

 private:
  std::size_t dim_;
  RowMatrix points_;
  std::vector<Role> roles_;
};

PointSet standard_basis(std::size_t n);

// Origin followed by e_1..e_n.
PointSet simplex(std::size_t n);

// k points with iid N(0,1) coordinates; point i is drawn from the stream
// child(seed, i).
PointSet gaussian_vectors(std::size_t n, std::size_t k, Seed seed);

// e_1..e_n followed by gaussian_vectors(n, k, seed).
PointSet hard_instance(std::size_t n, std::size_t k, Seed seed);

// k gaussian points confined to a random d-dimensional subspace of R^n.
// The subspace basis comes from child(seed, 0) and point i from
// child(seed, i + 1).
PointSet subspace_gaussian(std::size_t n, std::size_t d, std::size_t k, Seed seed);

// Default gaussian count used by the CLI: round(n^(2 + gamma)).
std::size_t default_gaussian_count(std::size_t n, double gamma = 0.0);

// ---- serialization -------------------------------------------------------

// Extra `key=value` header tokens (no whitespace in keys or values).
using HeaderFields = std::map<std::string, std::string>;

// Text format:
//   jlps v1 n=<n> N=<N> [key=value ...]
//   one CSV row per point, 17 significant digits
//   roles=<comma-separated tags>
void write_text(std::ostream& out, const PointSet& set, const HeaderFields& extra = {});
PointSet read_text(std::istream& in, HeaderFields* extra = nullptr);

// Binary little-endian format:
//   "JLPS" | u32 version=1 | u64 n | u64 N | N*n f64 row-major | N u8 roles
void write_binary(std::ostream& out, const PointSet& set);
PointSet read_binary(std::istream& in);

// Loads either format, sniffing the magic bytes.
PointSet load_point_set(const std::string& path);
void save_point_set(const std::string& path, const PointSet& set, bool binary,
                    const HeaderFields& extra = {});

}  // namespace jlopt
