#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cising/curve.hpp"
#include "cising/linalg.hpp"
#include "cising/schedule.hpp"

namespace cising {

// The compressed register operators. Orientations are fixed against the
// matchgate-compiled rotations and the statevector oracle; see
// docs/SIGN_CONVENTIONS.md.
//
//   r0: I (x) [[cos 2dt, -sin 2dt], [sin 2dt, cos 2dt]] on the last qubit.
//   rl: fixed points at indices 1 and d, cos x on the diagonal, +sin x at
//       (2k+1, 2k) and -sin x at (2k, 2k+1), 1-based interleaved pairs.
//   ud: diagonal phase gate, all ones except entry (d, d) = e^{ix}.

enum class Rotor { r0, rl, ud };

struct StructuredRotation {
    Rotor kind;
    int qubits;    // register width m
    double angle;  // r0: 2*dt, rl/ud: x = 2*J(l)*dt

    std::size_t dim() const { return std::size_t{1} << qubits; }
    RealMatrix to_real_dense() const;  // r0, rl only
    ComplexMatrix to_dense() const;
};

StructuredRotation build_r0(int m, double dt);
StructuredRotation build_rl(int m, double x);
StructuredRotation build_ud(int mhat, double x);

/// Pairing unitary used by the width-reduction identities: V = 1/sqrt2 *
/// sum_k (alpha_k |k><k| + beta_k |d-k+1><k|), alpha_k = (-1)^{k+1},
/// beta_k = (-1)^k for k <= d/2, alpha_k = beta_k = -i above. Unitarity is
/// checked on construction.
ComplexMatrix build_v(int m);
/// Test hook: V with the k=1 coefficient sign flipped (breaks unitarity).
ComplexMatrix build_v_tampered(int m);

/// Operation counters for the structured-apply path.
struct ApplyStats {
    std::uint64_t scalar_ops = 0;
    std::uint64_t rows_touched = 0;
    std::uint64_t steps = 0;
};

// In-place left multiplication A <- Rot * A (or Rot^T * A). Each rotor
// touches every row of A O(1) times, so one apply is O(d^2).
void apply_left(const StructuredRotation& rot, RealMatrix& a, bool transposed,
                ApplyStats* stats = nullptr);
void apply_left(const StructuredRotation& rot, ComplexMatrix& a, bool transposed,
                ApplyStats* stats = nullptr);
/// (e^{i alpha Z})^(x)m applied on the left: row r picks up the phase
/// e^{i alpha (m - 2 popcount(r))}.
void apply_collective_z_left(ComplexMatrix& a, double alpha, int m, ApplyStats* stats = nullptr);

struct NoiseSpec {
    bool enabled = false;
    double max_angle = 0.0;  // per-step rotation angle drawn uniformly from [0, max_angle]
    std::uint64_t seed = 0;
};

/// Incremental compressed evolution. Owns the accumulated operator product
/// and a step cursor; advance_to() applies ramp steps, magnetization() reads
/// the current value without disturbing the product.
class CompressedState {
  public:
    enum class Mode { m_register, mhat_register };

    CompressedState(const IsingSpec& spec, const TrotterSchedule& sched, Mode mode,
                    NoiseSpec noise = {});

    void advance_to(int step);
    double magnetization() const;

    int cursor() const { return cursor_; }
    Mode mode() const { return mode_; }
    std::size_t dim() const;
    const ApplyStats& stats() const { return stats_; }
    const std::vector<double>& noise_angles() const { return noise_angles_; }

    /// max|P P^T - I| of the accumulated product (P^T -> P+ in mhat mode).
    double unitarity_residual() const;

    const RealMatrix& rotation_product() const { return rot_; }
    const ComplexMatrix& w_product() const { return w_; }

  private:
    IsingSpec spec_;
    TrotterSchedule sched_;
    Mode mode_;
    NoiseSpec noise_;
    RealMatrix rot_;     // m_register mode: accumulated SO(2n) product
    ComplexMatrix w_;    // mhat_register mode: accumulated unitary
    StructuredRotation r0_;
    int cursor_ = 0;
    std::mt19937_64 rng_;
    std::vector<double> noise_angles_;
    ApplyStats stats_;
};

/// One-pass sweep on m = log2(n)+1 qubits; one magnetization value per
/// checkpoint, M(0) = +1.
MagnetizationCurve compressed_evolution_m(const IsingSpec& spec, const TrotterSchedule& sched,
                                          const std::vector<double>& j_checkpoints);

/// One-pass sweep on mhat = log2(n) qubits, optionally with a collective
/// Z-rotation error of fresh random angle after every step.
MagnetizationCurve compressed_evolution_mhat(const IsingSpec& spec, const TrotterSchedule& sched,
                                             const std::vector<double>& j_checkpoints,
                                             const NoiseSpec& noise = {});

enum class Tamper { none, flip_r0_sign, flip_v_sign };

struct AppendixBReport {
    struct Item {
        std::string identity;
        double residual;
        bool pass;
    };
    std::vector<Item> items;
    double tol;
    bool all_pass;
};

/// Verifies the width-reduction identity chain on m qubits for the given
/// step angles: (a) V unitary; (b) V R0 V+ block structure; (c) V Rl V+
/// block structure with Tl = Ud Rl^T and Sl = X Tl* X; (d) V S V+ =
/// -Z_1 (x) S; (e) W_1 = X W_0* X for the accumulated products; (f) the
/// m-register and mhat-register magnetizations agree.
AppendixBReport verify_appendix_b(int m, const std::vector<double>& step_angles, double dt,
                                  double tol = 1e-10, Tamper tamper = Tamper::none);

/// Test hook used by the verification suite's negative controls.
StructuredRotation build_r0_oriented(int m, double dt, bool flip_sign);

}  // namespace cising
