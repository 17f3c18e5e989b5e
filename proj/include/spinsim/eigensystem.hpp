#pragma once

#include <array>
#include <optional>

#include "spinsim/params.hpp"
#include "spinsim/types.hpp"

namespace spinsim {

// Electron manifold tags. Values index internal arrays.
enum class Manifold : int { MinusOne = 0, Zero = 1, PlusOne = 2 };
inline int manifold_ms(Manifold m) { return static_cast<int>(m) - 1; }

// Nuclear doublet branch within a manifold, ordered by energy.
enum class Branch : int { Lower = 0, Upper = 1 };

struct QuantizationAxes {
  Vec3 axis_0;     // nuclear quantization axis, electron in |0'>
  Vec3 axis_1;     // nuclear quantization axis, electron in |1>
  double delta;    // angle between the axes, degrees, in [0, 90]
  double a, b;     // |+> = a |dn> + b e^{i phi} |up>, a,b >= 0, a^2+b^2 = 1
  double phi;      // relative phase, rad
};

// Eigensystem of the 6x6 Hamiltonian with electron-manifold bookkeeping.
// Eigenvectors are phase-fixed (largest component real positive) so that all
// downstream constructions are deterministic.
class EigenSystem {
 public:
  explicit EigenSystem(const Matrix6cd& h, double degeneracy_tol_hz = 1.0);

  const Vector6d& energies() const { return energies_; }
  const Matrix6cd& states() const { return states_; }

  // any eigenvalue pair closer than the tolerance
  bool degenerate() const { return degenerate_; }
  // every manifold got exactly two states by electron-character overlap
  bool labeling_ok() const { return labeling_ok_; }

  Manifold label(int k) const { return labels_[k]; }
  // eigenstate index of (manifold, branch); throws NumericError when labeling failed
  int index(Manifold m, Branch br) const;
  double energy(Manifold m, Branch br) const { return energies_[index(m, br)]; }
  Vector6cd state(Manifold m, Branch br) const { return states_.col(index(m, br)); }

  // orthonormal nuclear spinor basis of a manifold (bare mI basis), ordered
  // (lower, upper) by branch energy
  const std::array<Vector2cd, 2>& nuclear_basis(Manifold m) const;

  // energy difference of the two nuclear branches within a manifold
  double doublet_splitting(Manifold m) const;

  // Bloch axis of the lower branch's nuclear spinor
  Vec3 nuclear_axis(Manifold m) const;

  // drive frequency from the 0' doublet center to (manifold, branch)
  double transition_frequency(Manifold to, Branch br) const;

  // mixing amplitudes of a dressed state onto the bare electron basis:
  // returns (|<0|k>|, |<+1|k>|, |<-1|k>|) summed over the nucleus, for the
  // lower branch of the given manifold
  Vec3 bare_mixing(Manifold m) const;

  QuantizationAxes quantization_axes() const;

 private:
  Vector6d energies_;
  Matrix6cd states_;
  std::array<Manifold, 6> labels_;
  std::array<std::array<int, 2>, 3> index_;  // [manifold][branch]
  std::array<std::array<Vector2cd, 2>, 3> nuclear_basis_;
  bool degenerate_ = false;
  bool labeling_ok_ = true;
};

// convenience: diagonalize the Hamiltonian of params
EigenSystem eigensystem(const SystemParams& params);

// exact nuclear doublet splitting, Hz; errors on degenerate manifolds
double nuclear_doublet_splitting(const EigenSystem& eigs, Manifold m);

// printed linear sum A13C = sum_nu alpha_{z,nu}. Note this is not the
// vector-norm doublet splitting; the difference is quantified in tests.
double secular_splitting(const HyperfineTensor& hyperfine);

}  // namespace spinsim
