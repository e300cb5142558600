#include "tme/svd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

namespace tme {

CMatrix SchmidtDecomposition::reconstruct(std::size_t count) const {
  if (signal_modes.empty()) return {};
  count = std::min(count, size());
  const auto rows = static_cast<Eigen::Index>(signal_modes.front().size());
  const auto cols = static_cast<Eigen::Index>(idler_modes.front().size());
  CMatrix out = CMatrix::Zero(rows, cols);
  for (std::size_t k = 0; k < count; ++k) {
    out.noalias() += (mode_numbers[k] * pairing[k]) * signal_modes[k].values() *
                     idler_modes[k].values().transpose();
  }
  return out;
}

SchmidtDecomposition schmidt_decompose(const JointSpectralAmplitude& jsa, ModeRequest request) {
  if (request.kind == ModeRequest::Kind::Count && request.count == 0) {
    throw std::invalid_argument("mode count must be at least 1");
  }
  if (!(request.relative_threshold >= 0.0)) {
    throw std::invalid_argument("relative threshold must be non-negative");
  }
  if (!jsa.values().allFinite()) {
    throw std::runtime_error("cannot factor a kernel with non-finite entries");
  }
  const double ws = jsa.signal_grid().weight();
  const double wi = jsa.idler_grid().weight();
  const CMatrix weighted = std::sqrt(ws * wi) * jsa.values();

  Eigen::BDCSVD<CMatrix> svd(weighted, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw std::runtime_error("singular value factorization failed");

  const auto& s = svd.singularValues();
  const std::size_t rank = static_cast<std::size_t>(s.size());
  std::size_t keep = rank;
  switch (request.kind) {
    case ModeRequest::Kind::All: break;
    case ModeRequest::Kind::Count: keep = std::min(request.count, rank); break;
    case ModeRequest::Kind::AboveThreshold: {
      keep = 0;
      const double cutoff = s.size() ? request.relative_threshold * s[0] : 0.0;
      while (keep < rank && s[static_cast<Eigen::Index>(keep)] >= cutoff &&
             s[static_cast<Eigen::Index>(keep)] > 0.0) {
        ++keep;
      }
      break;
    }
  }

  SchmidtDecomposition out;
  out.scale_G = jsa.scale_G();
  const double unscale_s = 1.0 / std::sqrt(ws);
  const double unscale_i = 1.0 / std::sqrt(wi);
  for (std::size_t k = 0; k < keep; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    // weighted = U S V^H, so F = sum s_k (U_k / sqrt(ws)) (conj(V_k) / sqrt(wi))^T.
    CVector u = svd.matrixU().col(kk) * unscale_s;
    CVector v = svd.matrixV().col(kk).conjugate() * unscale_i;
    const cplx ru = phase_convention_factor(u);
    const cplx rv = phase_convention_factor(v);
    out.mode_numbers.push_back(s[kk]);
    out.signal_modes.push_back(make_mode(jsa.signal_grid(), u));
    out.idler_modes.push_back(make_mode(jsa.idler_grid(), v));
    // u v^T = (ru u)(rv v)^T / (ru rv)
    out.pairing.push_back(std::conj(ru * rv));
  }
  return out;
}

double mode_fidelity(const SpectralAmplitude& a, const SpectralAmplitude& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("fidelity across different grids");
  if (std::abs(norm(a) - 1.0) > 1e-8 || std::abs(norm(b) - 1.0) > 1e-8) {
    throw std::invalid_argument("fidelity needs unit-norm inputs");
  }
  return std::min(1.0, std::norm(inner(a, b)));
}

double kernel_residual(const JointSpectralAmplitude& jsa, const CMatrix& approx) {
  if (approx.rows() != jsa.values().rows() || approx.cols() != jsa.values().cols()) {
    throw std::invalid_argument("approximation shape does not match kernel");
  }
  return std::sqrt(jsa.signal_grid().weight() * jsa.idler_grid().weight()) *
         (jsa.values() - approx).norm();
}

}  // namespace tme
