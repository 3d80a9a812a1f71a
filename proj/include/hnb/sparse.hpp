#ifndef HNB_SPARSE_HPP
#define HNB_SPARSE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <complex>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hnb {

using Index = std::int64_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

enum class OpTag { generic, B, Bk, Bprime, J, Jprime, Ak, Dk };

inline const char* to_string(OpTag t) {
  switch (t) {
    case OpTag::B: return "B";
    case OpTag::Bk: return "Bk";
    case OpTag::Bprime: return "Bprime";
    case OpTag::J: return "J";
    case OpTag::Jprime: return "Jprime";
    case OpTag::Ak: return "Ak";
    case OpTag::Dk: return "Dk";
    default: return "generic";
  }
}

// CSR real sparse matrix. Duplicate (row,col) triplets are summed at build
// time; explicit zeros are dropped. Immutable after construction, so matvec
// can be called concurrently.
class SparseLinearOperator {
 public:
  SparseLinearOperator() = default;

  SparseLinearOperator(Index nrows, Index ncols, std::vector<Triplet> triplets,
                       OpTag tag = OpTag::generic)
      : nrows_(nrows), ncols_(ncols), tag_(tag) {
    if (nrows < 0 || ncols < 0) throw std::invalid_argument("negative dimension");
    for (const auto& t : triplets)
      if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
        throw std::out_of_range("triplet index out of range");
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(static_cast<std::size_t>(nrows) + 1, 0);
    std::size_t i = 0;
    while (i < triplets.size()) {
      std::size_t j = i;
      double v = 0.0;
      while (j < triplets.size() && triplets[j].row == triplets[i].row &&
             triplets[j].col == triplets[i].col) {
        v += triplets[j].value;
        ++j;
      }
      if (v != 0.0) {
        col_.push_back(triplets[i].col);
        val_.push_back(v);
        ++row_ptr_[static_cast<std::size_t>(triplets[i].row) + 1];
      }
      i = j;
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(nrows); ++r)
      row_ptr_[r + 1] += row_ptr_[r];
  }

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  Index nnz() const { return static_cast<Index>(val_.size()); }
  OpTag tag() const { return tag_; }

  double coeff(Index r, Index c) const {
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      if (col_[p] == c) return val_[p];
    return 0.0;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    check_cols(x.size());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nrows_);
    for (Index r = 0; r < nrows_; ++r) {
      double acc = 0.0;
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        acc += val_[p] * x[col_[p]];
      y[r] = acc;
    }
    return y;
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const {
    check_cols(x.size());
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(nrows_);
    for (Index r = 0; r < nrows_; ++r) {
      std::complex<double> acc = 0.0;
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        acc += val_[p] * x[col_[p]];
      y[r] = acc;
    }
    return y;
  }

  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nrows_, ncols_);
    for (Index r = 0; r < nrows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        M(r, col_[p]) += val_[p];
    return M;
  }

  SparseLinearOperator transposed() const {
    std::vector<Triplet> ts;
    ts.reserve(val_.size());
    for (Index r = 0; r < nrows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        ts.push_back({col_[p], r, val_[p]});
    return SparseLinearOperator(ncols_, nrows_, std::move(ts), tag_);
  }

  // coordinate-triplet text: "# rows cols nnz tag" header, then "row col value"
  void write_coord(std::ostream& os) const {
    os << "# " << nrows_ << ' ' << ncols_ << ' ' << nnz() << ' ' << to_string(tag_) << '\n';
    for (Index r = 0; r < nrows_; ++r)
      for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
        os << r << ' ' << col_[p] << ' ' << val_[p] << '\n';
  }

  const std::vector<std::size_t>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_indices() const { return col_; }
  const std::vector<double>& values() const { return val_; }

 private:
  void check_cols(Eigen::Index xn) const {
    if (xn != ncols_) throw std::invalid_argument("matvec: size mismatch");
  }

  Index nrows_ = 0;
  Index ncols_ = 0;
  OpTag tag_ = OpTag::generic;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<Index> col_;
  std::vector<double> val_;
};

}  // namespace hnb

#endif
