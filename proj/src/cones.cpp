#include "conicgame/cones.hpp"

#include <cmath>
#include <numbers>


namespace conicgame {

namespace {

constexpr double kSymTol = 1e-12;

Eigen::SelfAdjointEigenSolver<Matrix> eig_of(const Eigen::Ref<const Vector>& v, bool vectors) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(smat(v), vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

double block_scale(const Eigen::Ref<const Vector>& v) {
  return v.size() == 0 ? 1.0 : std::max(1.0, v.cwiseAbs().maxCoeff());
}

}  // namespace

ConeBlock ConeBlock::make(BlockKind kind, int size) {
  if (size < 1) throw InputError("cone block size must be >= 1, got " + std::to_string(size));
  return ConeBlock{kind, size};
}

ConeProduct::ConeProduct(std::vector<ConeBlock> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InputError("cone product needs at least one block");
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (b.size < 1) throw InputError("cone block size must be >= 1");
    offsets_.push_back(total_dim_);
    total_dim_ += b.dim();
  }
}

int ConeProduct::degree() const {
  int d = 0;
  for (const auto& b : blocks_) d += b.degree();
  return d;
}

ConeProduct ConeProduct::times(const ConeProduct& other) const {
  std::vector<ConeBlock> all = blocks_;
  all.insert(all.end(), other.blocks_.begin(), other.blocks_.end());
  return ConeProduct(std::move(all));
}

int triangular_side(Eigen::Index n) {
  const auto m = static_cast<Eigen::Index>(std::llround((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0));
  if (n < 1 || m * (m + 1) / 2 != n) {
    throw InputError("length " + std::to_string(n) + " is not m(m+1)/2 for any m");
  }
  return static_cast<int>(m);
}

Vector svec(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw InputError("svec needs a non-empty square matrix");
  const Eigen::Index n = m.rows();
  Vector out(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double a = m(i, j);
      const double b = m(j, i);
      if (std::abs(a - b) > kSymTol * (1.0 + std::abs(a))) throw InputError("svec needs a symmetric matrix");
      out(k++) = (i == j) ? a : std::numbers::sqrt2 * 0.5 * (a + b);
    }
  }
  return out;
}

Matrix smat(const Eigen::Ref<const Vector>& v) {
  const int n = triangular_side(v.size());
  Matrix m(n, n);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double x = v(k++);
      if (i == j) {
        m(i, i) = x;
      } else {
        m(i, j) = m(j, i) = x / std::numbers::sqrt2;
      }
    }
  }
  return m;
}

double min_eig(const ConeBlock& block, const Eigen::Ref<const Vector>& v) {
  if (v.size() != block.dim()) throw InputError("min_eig: dimension mismatch");
  if (block.kind == BlockKind::Orthant) return v.minCoeff();
  if (block.size == 1) return v(0);
  return eig_of(v, false).eigenvalues()(0);
}

double max_eig(const ConeBlock& block, const Eigen::Ref<const Vector>& v) {
  if (v.size() != block.dim()) throw InputError("max_eig: dimension mismatch");
  if (block.kind == BlockKind::Orthant) return v.maxCoeff();
  if (block.size == 1) return v(0);
  const auto ev = eig_of(v, false).eigenvalues();
  return ev(ev.size() - 1);
}

void require_dim(const ConeProduct& k, const Eigen::Ref<const Vector>& v, const char* what) {
  if (v.size() != k.total_dim()) {
    throw InputError(std::string(what) + ": dimension " + std::to_string(v.size()) + " does not match cone dimension " +
                     std::to_string(k.total_dim()));
  }
}

double cone_margin(const ConeProduct& k, const Eigen::Ref<const Vector>& v) {
  require_dim(k, v, "cone_margin");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const auto& blk = k.blocks()[b];
    m = std::min(m, min_eig(blk, v.segment(k.offset(b), blk.dim())));
  }
  return m;
}

bool in_cone(const ConeProduct& k, const Eigen::Ref<const Vector>& v, double tol) {
  require_dim(k, v, "in_cone");
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const auto& blk = k.blocks()[b];
    const auto seg = v.segment(k.offset(b), blk.dim());
    if (min_eig(blk, seg) < -tol * block_scale(seg)) return false;
  }
  return true;
}

bool in_interior(const ConeProduct& k, const Eigen::Ref<const Vector>& v, double tol) {
  require_dim(k, v, "in_interior");
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const auto& blk = k.blocks()[b];
    const auto seg = v.segment(k.offset(b), blk.dim());
    if (!(min_eig(blk, seg) > tol * block_scale(seg))) return false;
  }
  return true;
}

Vector canonical_interior(const ConeProduct& k) {
  Vector e = Vector::Zero(k.total_dim());
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const auto& blk = k.blocks()[b];
    if (blk.kind == BlockKind::Orthant) {
      e.segment(k.offset(b), blk.dim()).setOnes();
    } else {
      e.segment(k.offset(b), blk.dim()) = svec(Matrix::Identity(blk.size, blk.size));
    }
  }
  return e;
}

Vector project(const ConeProduct& k, const Eigen::Ref<const Vector>& v) {
  require_dim(k, v, "project");
  Vector out(v.size());
  for (std::size_t b = 0; b < k.blocks().size(); ++b) {
    const auto& blk = k.blocks()[b];
    const auto seg = v.segment(k.offset(b), blk.dim());
    if (blk.kind == BlockKind::Orthant) {
      out.segment(k.offset(b), blk.dim()) = seg.cwiseMax(0.0);
    } else {
      const auto es = eig_of(seg, true);
      const Vector clipped = es.eigenvalues().cwiseMax(0.0);
      out.segment(k.offset(b), blk.dim()) = svec(es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose());
    }
  }
  return out;
}

}  // namespace conicgame
