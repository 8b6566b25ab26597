#pragma once

#include <memory>
#include <vector>

#include "krylovlab/models.hpp"

namespace klab {

enum class InnerKind { InfiniteTemperature, Microcanonical };

/// Operator-space inner product used by the Lanczos engine.
///
/// InfiniteTemperature: (A|B) = Tr(A^dag B) / D.
/// Microcanonical:      (A|B) = (1/N) sum_{n in window} <n| A^dag B |n>,
/// where the window collects the eigenstates of H with eigenvalue in
/// [energy - half_width, energy + half_width]. Window indices refer to the
/// ascending eigenvalue order of `spectrum`.
struct InnerProductSpec {
  InnerKind kind = InnerKind::InfiniteTemperature;

  std::shared_ptr<const SpectralDecomposition> spectrum;
  double energy = 0.0;
  double half_width = 0.0;
  std::vector<Eigen::Index> window_states;

  Eigen::Index window_count() const { return static_cast<Eigen::Index>(window_states.size()); }

  static InnerProductSpec infinite_temperature() { return {}; }
};

/// Throws a domain error naming the nearest eigenvalue when the window is empty.
InnerProductSpec microcanonical_inner_spec(std::shared_ptr<const SpectralDecomposition> spectrum,
                                           double energy, double half_width);

}  // namespace klab
