#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "jlopt/pointset.hpp"

namespace jlopt {

// A dense m x n real matrix acting on R^n.
class LinearMap {
 public:
  explicit LinearMap(RowMatrix entries);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(a_.cols()); }
  const RowMatrix& matrix() const noexcept { return a_; }

  // m > n is legal but worth calling out in reports.
  bool wider_than_tall() const noexcept { return a_.rows() > a_.cols(); }

  bool operator==(const LinearMap& other) const { return a_ == other.a_; }

 private:
  RowMatrix a_;
};

// Format:
//   jlmap v1 m=<m> n=<n> [key=value ...]
//   m CSV rows of n values, 17 significant digits
void write_text(std::ostream& out, const LinearMap& map, const HeaderFields& extra = {});
LinearMap read_linear_map(std::istream& in, HeaderFields* extra = nullptr);

LinearMap load_linear_map(const std::string& path);
void save_linear_map(const std::string& path, const LinearMap& map, const HeaderFields& extra = {});

}  // namespace jlopt
