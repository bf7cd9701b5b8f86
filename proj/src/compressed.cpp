#include "cising/compressed.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cising/indexing.hpp"

namespace cising {

namespace {

const cplx kI{0.0, 1.0};

double uniform01(std::mt19937_64& rng) {
    // Top 53 bits -> [0, 1); fixed mapping so noisy runs are platform-stable.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

StructuredRotation build_r0(int m, double dt) {
    if (m < 1) throw std::invalid_argument("build_r0: m must be >= 1");
    return StructuredRotation{Rotor::r0, m, 2.0 * dt};
}

StructuredRotation build_r0_oriented(int m, double dt, bool flip_sign) {
    return build_r0(m, flip_sign ? -dt : dt);
}

StructuredRotation build_rl(int m, double x) {
    if (m < 1) throw std::invalid_argument("build_rl: m must be >= 1");
    return StructuredRotation{Rotor::rl, m, x};
}

StructuredRotation build_ud(int mhat, double x) {
    if (mhat < 1) throw std::invalid_argument("build_ud: mhat must be >= 1");
    return StructuredRotation{Rotor::ud, mhat, x};
}

RealMatrix StructuredRotation::to_real_dense() const {
    const std::size_t d = dim();
    const double c = std::cos(angle), s = std::sin(angle);
    RealMatrix r(d, d);
    switch (kind) {
        case Rotor::r0:
            for (std::size_t k = 0; k < d / 2; ++k) {
                r(2 * k, 2 * k) = c;
                r(2 * k, 2 * k + 1) = -s;
                r(2 * k + 1, 2 * k) = s;
                r(2 * k + 1, 2 * k + 1) = c;
            }
            return r;
        case Rotor::rl:
            for (std::size_t i = 0; i < d; ++i) r(i, i) = c;
            r(0, 0) += 1.0 - c;
            r(d - 1, d - 1) += 1.0 - c;
            for (std::size_t k = 1; k < d / 2; ++k) {
                r(2 * k, 2 * k - 1) = s;   // |2k+1><2k|, 1-based
                r(2 * k - 1, 2 * k) = -s;  // -|2k><2k+1|
            }
            return r;
        case Rotor::ud:
            throw std::invalid_argument("to_real_dense: phase gate is not real");
    }
    throw std::logic_error("unreachable");
}

ComplexMatrix StructuredRotation::to_dense() const {
    if (kind == Rotor::ud) {
        ComplexMatrix u = ComplexMatrix::identity(dim());
        u(dim() - 1, dim() - 1) = std::exp(kI * angle);
        return u;
    }
    return to_complex(to_real_dense());
}

ComplexMatrix build_v(int m) {
    if (m < 2) throw std::invalid_argument("build_v: m must be >= 2");
    const std::size_t d = std::size_t{1} << m;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    ComplexMatrix v(d, d);
    for (std::size_t k = 1; k <= d; ++k) {
        cplx alpha, beta;
        if (k <= d / 2) {
            alpha = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^{k+1}
            beta = -alpha;                      // (-1)^k
        } else {
            alpha = beta = -kI;
        }
        v(k - 1, k - 1) += alpha * inv_sqrt2;
        v(d - k, k - 1) += beta * inv_sqrt2;  // |d-k+1><k|
    }
    const double resid = unitarity_residual(v);
    if (resid > 1e-12) {
        std::ostringstream os;
        os << "build_v: unitarity residual " << resid << " signals a transcription bug";
        throw std::runtime_error(os.str());
    }
    return v;
}

ComplexMatrix build_v_tampered(int m) {
    ComplexMatrix v = build_v(m);
    v(0, 0) = -v(0, 0);
    return v;
}

namespace {

// Givens update of two rows: (r1, r2) <- (c r1 - s r2, s r1 + c r2).
template <typename T>
void rotate_rows(T* r1, T* r2, std::size_t cols, double c, double s, ApplyStats* stats) {
    for (std::size_t j = 0; j < cols; ++j) {
        const T a = r1[j], b = r2[j];
        r1[j] = c * a - s * b;
        r2[j] = s * a + c * b;
    }
    if (stats) {
        stats->scalar_ops += 4 * cols;
        stats->rows_touched += 2;
    }
}

template <typename T>
void apply_left_impl(const StructuredRotation& rot, Matrix<T>& a, bool transposed,
                     ApplyStats* stats) {
    const std::size_t d = rot.dim();
    if (a.rows() != d) throw std::invalid_argument("apply_left: dimension mismatch");
    const std::size_t cols = a.cols();
    const double c = std::cos(rot.angle);
    const double s = transposed ? -std::sin(rot.angle) : std::sin(rot.angle);
    switch (rot.kind) {
        case Rotor::r0:
            for (std::size_t k = 0; k < d / 2; ++k) {
                rotate_rows(a.row(2 * k), a.row(2 * k + 1), cols, c, s, stats);
            }
            return;
        case Rotor::rl:
            // rows 0 and d-1 are fixed points of the rotation
            for (std::size_t k = 1; k < d / 2; ++k) {
                rotate_rows(a.row(2 * k - 1), a.row(2 * k), cols, c, s, stats);
            }
            if (stats) stats->rows_touched += 2;
            return;
        case Rotor::ud:
            throw std::invalid_argument("apply_left: phase gate requires a complex matrix");
    }
}

}  // namespace

void apply_left(const StructuredRotation& rot, RealMatrix& a, bool transposed,
                ApplyStats* stats) {
    apply_left_impl(rot, a, transposed, stats);
}

void apply_left(const StructuredRotation& rot, ComplexMatrix& a, bool transposed,
                ApplyStats* stats) {
    if (rot.kind == Rotor::ud) {
        const std::size_t d = rot.dim();
        if (a.rows() != d) throw std::invalid_argument("apply_left: dimension mismatch");
        (void)transposed;  // U_d is diagonal, transposition changes nothing
        const cplx phase = std::exp(kI * rot.angle);
        cplx* last = a.row(d - 1);
        for (std::size_t j = 0; j < a.cols(); ++j) last[j] *= phase;
        if (stats) {
            stats->scalar_ops += a.cols();
            stats->rows_touched += 1;
        }
        return;
    }
    apply_left_impl(rot, a, transposed, stats);
}

void apply_collective_z_left(ComplexMatrix& a, double alpha, int m, ApplyStats* stats) {
    const std::size_t d = std::size_t{1} << m;
    if (a.rows() != d) throw std::invalid_argument("apply_collective_z_left: dimension mismatch");
    for (std::size_t r = 0; r < d; ++r) {
        const cplx phase = std::exp(kI * (alpha * (m - 2 * bit_weight(r))));
        cplx* row = a.row(r);
        for (std::size_t j = 0; j < a.cols(); ++j) row[j] *= phase;
    }
    if (stats) {
        stats->scalar_ops += d * a.cols();
        stats->rows_touched += d;
    }
}

CompressedState::CompressedState(const IsingSpec& spec, const TrotterSchedule& sched, Mode mode,
                                 NoiseSpec noise)
    : spec_(spec),
      sched_(sched),
      mode_(mode),
      noise_(noise),
      r0_(build_r0(mode == Mode::m_register ? spec.m() : spec.mhat(), sched.dt)),
      rng_(noise.seed) {
    if (sched.j_max != spec.j_max) {
        throw std::invalid_argument("CompressedState: schedule and spec j_max disagree");
    }
    if (mode_ == Mode::m_register) {
        rot_ = RealMatrix::identity(std::size_t{2} * spec.n);
    } else {
        w_ = ComplexMatrix::identity(spec.n);
    }
}

std::size_t CompressedState::dim() const {
    return mode_ == Mode::m_register ? std::size_t{2} * spec_.n : std::size_t(spec_.n);
}

void CompressedState::advance_to(int step) {
    if (step < cursor_) throw std::invalid_argument("advance_to: cannot step backwards");
    if (step > sched_.steps) throw std::invalid_argument("advance_to: step beyond schedule");
    while (cursor_ < step) {
        ++cursor_;
        const double x = 2.0 * coupling_at(sched_, cursor_) * sched_.dt;
        if (mode_ == Mode::m_register) {
            apply_left(r0_, rot_, false, &stats_);
            apply_left(build_rl(spec_.m(), x), rot_, false, &stats_);
        } else {
            apply_left(r0_, w_, true, &stats_);
            apply_left(build_rl(spec_.mhat(), x), w_, true, &stats_);
            apply_left(build_ud(spec_.mhat(), x), w_, false, &stats_);
            if (noise_.enabled && noise_.max_angle > 0) {
                const double alpha = noise_.max_angle * uniform01(rng_);
                noise_angles_.push_back(alpha);
                apply_collective_z_left(w_, alpha, spec_.mhat(), &stats_);
            }
        }
        ++stats_.steps;
    }
}

double CompressedState::magnetization() const {
    const int n = spec_.n;
    if (mode_ == Mode::m_register) {
        // (1/n) sum_k <2k-1| R S R^T |2k> with S = I (x) [[0,1],[-1,0]].
        double total = 0.0;
        for (int k = 0; k < n; ++k) {
            const double* u = rot_.row(2 * k);
            const double* v = rot_.row(2 * k + 1);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i];
            }
            total += acc;
        }
        return total / n;
    }
    // (1/n) Re tr(W (I (x) Y) W+ (I (x) Y)), expanded over the 2x2 blocks.
    double total = 0.0;
    for (int p = 0; p < n / 2; ++p) {
        const cplx* r0 = w_.row(2 * p);
        const cplx* r1 = w_.row(2 * p + 1);
        for (int j = 0; j < n / 2; ++j) {
            total += 2.0 * (r0[2 * j] * std::conj(r1[2 * j + 1])).real();
            total -= 2.0 * (r0[2 * j + 1] * std::conj(r1[2 * j])).real();
        }
    }
    return total / n;
}

double CompressedState::unitarity_residual() const {
    if (mode_ == Mode::m_register) return orthogonality_residual(rot_);
    return cising::unitarity_residual(w_);
}

namespace {

std::vector<int> checkpoint_steps(const TrotterSchedule& sched,
                                  const std::vector<double>& j_checkpoints) {
    std::vector<int> steps;
    steps.reserve(j_checkpoints.size());
    double prev = -1.0;
    for (double j : j_checkpoints) {
        if (j < prev) {
            throw std::invalid_argument("checkpoints must be sorted ascending");
        }
        prev = j;
        steps.push_back(steps_for(sched, j));
    }
    return steps;
}

MagnetizationCurve run_engine(const IsingSpec& spec, const TrotterSchedule& sched,
                              const std::vector<double>& j_checkpoints,
                              CompressedState::Mode mode, const NoiseSpec& noise) {
    CompressedState state(spec, sched, mode, noise);
    const std::vector<int> steps = checkpoint_steps(sched, j_checkpoints);
    MagnetizationCurve curve;
    curve.provenance = (mode == CompressedState::Mode::m_register) ? Provenance::compressed_m
                                                                   : Provenance::compressed_mhat;
    curve.meta = RunMeta{spec.n,        spec.j_max, sched.total_time, sched.steps,
                         sched.dt,      noise.seed, noise.enabled ? noise.max_angle : 0.0};
    for (std::size_t i = 0; i < steps.size(); ++i) {
        state.advance_to(steps[i]);
        curve.coupling.push_back(j_checkpoints[i]);
        curve.magnetization.push_back(state.magnetization());
    }
    const double resid = state.unitarity_residual();
    const double limit = (mode == CompressedState::Mode::m_register) ? 1e-8 : 1e-9;
    if (resid > limit) {
        std::ostringstream os;
        os << "accumulated product lost unitarity: residual " << resid;
        throw std::runtime_error(os.str());
    }
    curve.validate();
    return curve;
}

}  // namespace

MagnetizationCurve compressed_evolution_m(const IsingSpec& spec, const TrotterSchedule& sched,
                                          const std::vector<double>& j_checkpoints) {
    return run_engine(spec, sched, j_checkpoints, CompressedState::Mode::m_register, {});
}

MagnetizationCurve compressed_evolution_mhat(const IsingSpec& spec, const TrotterSchedule& sched,
                                             const std::vector<double>& j_checkpoints,
                                             const NoiseSpec& noise) {
    return run_engine(spec, sched, j_checkpoints, CompressedState::Mode::mhat_register, noise);
}

namespace {

struct BlockSplit {
    ComplexMatrix top;      // <0| . |0>
    ComplexMatrix bottom;   // <1| . |1>
    double off_diagonal;    // max |entry| of the mixed blocks
};

BlockSplit split_blocks(const ComplexMatrix& c) {
    const std::size_t dh = c.rows() / 2;
    BlockSplit out{ComplexMatrix(dh, dh), ComplexMatrix(dh, dh), 0.0};
    for (std::size_t i = 0; i < dh; ++i)
        for (std::size_t j = 0; j < dh; ++j) {
            out.top(i, j) = c(i, j);
            out.bottom(i, j) = c(dh + i, dh + j);
            out.off_diagonal = std::max(out.off_diagonal, std::abs(c(i, dh + j)));
            out.off_diagonal = std::max(out.off_diagonal, std::abs(c(dh + i, j)));
        }
    return out;
}

ComplexMatrix conj_by(const ComplexMatrix& v, const ComplexMatrix& a) {
    return mat_mul(mat_mul(v, a), conj_transpose(v));
}

ComplexMatrix x_conj_conjugate(const ComplexMatrix& t) {
    // X^(x)mhat T* X^(x)mhat: entry (i, j) -> conj(T(~i, ~j)).
    const std::size_t d = t.rows();
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) out(i, j) = std::conj(t(d - 1 - i, d - 1 - j));
    return out;
}

RealMatrix identity_kron_k(std::size_t half_dim) {
    RealMatrix s(2 * half_dim, 2 * half_dim);
    for (std::size_t k = 0; k < half_dim; ++k) {
        s(2 * k, 2 * k + 1) = 1.0;
        s(2 * k + 1, 2 * k) = -1.0;
    }
    return s;
}

double magnetization_from_rotation_dense(const RealMatrix& r) {
    const std::size_t n = r.rows() / 2;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double* u = r.row(2 * k);
        const double* v = r.row(2 * k + 1);
        for (std::size_t i = 0; i < n; ++i) {
            total += u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i];
        }
    }
    return total / n;
}

double magnetization_from_w_dense(const ComplexMatrix& w) {
    const std::size_t n = w.rows();
    double total = 0.0;
    for (std::size_t p = 0; p < n / 2; ++p) {
        const cplx* r0 = w.row(2 * p);
        const cplx* r1 = w.row(2 * p + 1);
        for (std::size_t j = 0; j < n / 2; ++j) {
            total += 2.0 * (r0[2 * j] * std::conj(r1[2 * j + 1])).real();
            total -= 2.0 * (r0[2 * j + 1] * std::conj(r1[2 * j])).real();
        }
    }
    return total / n;
}

}  // namespace

AppendixBReport verify_appendix_b(int m, const std::vector<double>& step_angles, double dt,
                                  double tol, Tamper tamper) {
    if (m < 2 || m > 7) throw std::invalid_argument("verify_appendix_b: m must be in 2..7");
    const int mh = m - 1;
    const std::size_t d = std::size_t{1} << m;
    const std::size_t dh = d / 2;

    AppendixBReport report;
    report.tol = tol;
    auto add = [&](const std::string& name, double resid) {
        report.items.push_back({name, resid, resid <= tol});
    };

    ComplexMatrix v(d, d);
    double v_resid = 0.0;
    if (tamper == Tamper::flip_v_sign) {
        v = build_v_tampered(m);
        v_resid = unitarity_residual(v);
    } else {
        v = build_v(m);
        v_resid = unitarity_residual(v);
    }
    add("a-v-unitary", v_resid);

    const StructuredRotation r0 = build_r0_oriented(m, dt, tamper == Tamper::flip_r0_sign);
    const StructuredRotation r0h = build_r0_oriented(mh, dt, tamper == Tamper::flip_r0_sign);
    const ComplexMatrix r0h_dense = r0h.to_dense();
    const ComplexMatrix r0h_t = transpose(r0h_dense);

    {
        const BlockSplit blocks = split_blocks(conj_by(v, r0.to_dense()));
        double resid = blocks.off_diagonal;
        resid = std::max(resid, max_abs_diff(blocks.top, r0h_t));
        resid = std::max(resid, max_abs_diff(blocks.bottom, r0h_dense));
        add("b-r0-blocks", resid);
    }

    {
        double resid = 0.0;
        for (double x : step_angles) {
            const BlockSplit blocks = split_blocks(conj_by(v, build_rl(m, x).to_dense()));
            const ComplexMatrix tl =
                mat_mul(build_ud(mh, x).to_dense(), transpose(build_rl(mh, x).to_dense()));
            resid = std::max(resid, blocks.off_diagonal);
            resid = std::max(resid, max_abs_diff(blocks.top, tl));
            resid = std::max(resid, max_abs_diff(blocks.bottom, x_conj_conjugate(tl)));
        }
        add("c-rl-blocks", resid);
    }

    {
        const ComplexMatrix s_m = to_complex(identity_kron_k(d / 2));
        const ComplexMatrix s_mh = to_complex(identity_kron_k(dh / 2));
        ComplexMatrix expect(d, d);
        for (std::size_t i = 0; i < dh; ++i)
            for (std::size_t j = 0; j < dh; ++j) {
                expect(i, j) = -s_mh(i, j);
                expect(dh + i, dh + j) = s_mh(i, j);
            }
        add("d-s-conjugation", max_abs_diff(conj_by(v, s_m), expect));
    }

    // Accumulated products for the sampled steps: the m-register evolution
    // conjugated by V must stay block-diagonal with the paired mhat-register
    // products on the diagonal.
    ComplexMatrix acc = ComplexMatrix::identity(d);
    ComplexMatrix w0 = ComplexMatrix::identity(dh);
    for (double x : step_angles) {
        acc = mat_mul(to_complex(mat_mul(build_rl(m, x).to_real_dense(), r0.to_real_dense())),
                      acc);
        ComplexMatrix step = mat_mul(build_ud(mh, x).to_dense(),
                                     mat_mul(transpose(build_rl(mh, x).to_dense()), r0h_t));
        w0 = mat_mul(step, w0);
    }
    {
        const BlockSplit blocks = split_blocks(conj_by(v, acc));
        double resid = blocks.off_diagonal;
        resid = std::max(resid, max_abs_diff(blocks.top, w0));
        resid = std::max(resid, max_abs_diff(blocks.bottom, x_conj_conjugate(w0)));
        add("e-w-pairing", resid);
    }

    {
        const double m_reg = magnetization_from_rotation_dense(real_part(acc, 1e-9));
        const double mhat_reg = magnetization_from_w_dense(w0);
        add("f-magnetization-equality", std::abs(m_reg - mhat_reg));
    }

    report.all_pass = true;
    for (const auto& item : report.items) report.all_pass = report.all_pass && item.pass;
    return report;
}

}  // namespace cising
