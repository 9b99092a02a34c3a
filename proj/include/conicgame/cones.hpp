#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace conicgame {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Rejection of malformed input (shape mismatch, bad parameters, bad files).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BlockKind { Orthant, Psd };

struct ConeBlock {
  BlockKind kind = BlockKind::Orthant;
  int size = 1;  // vector length for Orthant, matrix side for Psd

  static ConeBlock orthant(int n) { return make(BlockKind::Orthant, n); }
  static ConeBlock psd(int m) { return make(BlockKind::Psd, m); }
  static ConeBlock make(BlockKind kind, int size);

  // Number of coordinates the block occupies.
  int dim() const { return kind == BlockKind::Orthant ? size : size * (size + 1) / 2; }
  // Barrier degree: number of eigenvalues.
  int degree() const { return size; }

  friend bool operator==(const ConeBlock&, const ConeBlock&) = default;
};

// Ordered product of orthant and PSD blocks. PSD blocks are stored with svec
// coordinates, so the coordinate dot product is the trace inner product and
// every block is self-dual.
class ConeProduct {
 public:
  ConeProduct() = default;
  explicit ConeProduct(std::vector<ConeBlock> blocks);

  static ConeProduct orthant(int n) { return ConeProduct({ConeBlock::orthant(n)}); }
  static ConeProduct psd(int m) { return ConeProduct({ConeBlock::psd(m)}); }

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  int total_dim() const { return total_dim_; }
  int degree() const;
  int offset(std::size_t block) const { return offsets_[block]; }
  bool empty() const { return blocks_.empty(); }

  // Concatenation (this × other).
  ConeProduct times(const ConeProduct& other) const;

  friend bool operator==(const ConeProduct& a, const ConeProduct& b) { return a.blocks_ == b.blocks_; }

 private:
  std::vector<ConeBlock> blocks_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
};

// Side m of a PSD block whose svec length is n; throws when n is not triangular.
int triangular_side(Eigen::Index n);

Vector svec(const Matrix& m);
Matrix smat(const Eigen::Ref<const Vector>& v);

double min_eig(const ConeBlock& block, const Eigen::Ref<const Vector>& v);
double max_eig(const ConeBlock& block, const Eigen::Ref<const Vector>& v);

// Smallest min_eig across blocks.
double cone_margin(const ConeProduct& k, const Eigen::Ref<const Vector>& v);

inline constexpr double kMembershipTol = 1e-9;

// Tolerances are applied per block relative to max(1, max|v_blk|).
bool in_cone(const ConeProduct& k, const Eigen::Ref<const Vector>& v, double tol = kMembershipTol);
bool in_interior(const ConeProduct& k, const Eigen::Ref<const Vector>& v, double tol = kMembershipTol);

// All-ones on orthant blocks, svec(I) on PSD blocks.
Vector canonical_interior(const ConeProduct& k);

// Euclidean projection onto the cone (eigenvalue clipping on PSD blocks).
Vector project(const ConeProduct& k, const Eigen::Ref<const Vector>& v);

void require_dim(const ConeProduct& k, const Eigen::Ref<const Vector>& v, const char* what);

}  // namespace conicgame
