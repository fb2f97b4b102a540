#pragma once
// Microscopic Monte Carlo of molecule (and optionally enzyme) Brownian
// motion in a bounded reflecting box, with two degradation channels --
// enzymatic binding/degradation and light-gated photolysis -- observed by
// a passive spherical receiver.
//
// Layout and determinism: particle state is struct-of-arrays float32 (a
// float's 2^-23 relative step at box scale is ~1e-12 m, far below any
// length in the model, while halving memory traffic). All randomness is
// drawn from counter-based streams keyed by (master_seed, repetition,
// purpose), and every step consumes a fixed, state-independent amount of
// each stream, so a repetition's trajectory depends only on its seed pair
// -- never on scheduling, worker count, or the fate of other repetitions.
//
// Per-step cost is dominated by three fused, vectorized passes (normal
// generation, axis updates with single-fold reflection, reaction check);
// the no-reaction scenario measures a few ns per particle-step on one
// AVX2 core.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dbmc/analytic.hpp"
#include "dbmc/rng.hpp"
#include "dbmc/scenario.hpp"

namespace dbmc {

// Molecule fate. A bound molecule rides its enzyme as a complex; a
// degraded one is product and invisible to the receiver forever.
enum class MolState : uint8_t { free_mol = 0, bound = 1, degraded = 2 };

// Information molecules, struct-of-arrays.
struct ParticleSet {
    std::vector<float> x, y, z;              // m
    std::vector<MolState> state;
    std::vector<int32_t> bound_enzyme;       // index, -1 if none

    size_t size() const { return x.size(); }

    void resize(size_t n) {
        x.assign(n, 0.0f);
        y.assign(n, 0.0f);
        z.assign(n, 0.0f);
        state.assign(n, MolState::free_mol);
        bound_enzyme.assign(n, -1);
    }
};

// Stream purposes; combined with the repetition index they address the
// independent random streams of one repetition.
inline constexpr uint64_t kStreamDiffusion = 0;
inline constexpr uint64_t kStreamReaction = 1;
inline constexpr uint64_t kStreamEnzymeInit = 2;
inline constexpr uint64_t kStreamEnzymeDiffusion = 3;

inline uint64_t make_stream(uint64_t purpose, uint32_t repetition) {
    return (purpose << 32) | uint64_t(repetition);
}

// One diffusion step: every coordinate of every slot gets an independent
// Gaussian increment of standard deviation sqrt(2·D·dt). Increments are
// drawn axis-blocked (all x, then y, then z) and applied to dead slots
// too -- their positions are meaningless and this keeps the pass
// branch-free and the stream consumption state-independent.
inline void brownian_step(ParticleSet& ps, double D, double dt,
                          StreamCtx& ctx, BatchNormals& gen,
                          std::vector<float>& scratch) {
    if (!(dt > 0)) throw std::domain_error("dt must be > 0");
    size_t n = ps.size();
    scratch.resize(3 * n);
    gen.fill(ctx, scratch.data(), 3 * n);
    float sigma = float(std::sqrt(2.0 * D * dt));
    float* __restrict__ px = ps.x.data();
    float* __restrict__ py = ps.y.data();
    float* __restrict__ pz = ps.z.data();
    const float* __restrict__ zx = scratch.data();
    const float* __restrict__ zy = scratch.data() + n;
    const float* __restrict__ zz = scratch.data() + 2 * n;
    for (size_t i = 0; i < n; ++i) px[i] += sigma * zx[i];
    for (size_t i = 0; i < n; ++i) py[i] += sigma * zy[i];
    for (size_t i = 0; i < n; ++i) pz[i] += sigma * zz[i];
}

namespace detail {

// One mirror fold toward the box. Enough on its own whenever the input is
// within 2·bound of the box, which the validated step-size rule (per-step
// sigma at most an eighth of the half-extent) guarantees out to a 16-sigma
// excursion.
inline float reflect_once(float v, float bound) {
    float hi = 2.0f * bound - v;
    float lo = -2.0f * bound - v;
    return v > bound ? hi : (v < -bound ? lo : v);
}

}  // namespace detail

// Mirror-reflect every coordinate into [-half_extent, half_extent],
// applying x -> ±2·bound − x as often as needed; handles arbitrarily
// distant inputs. The engine's stepping loop fuses the single-fold variant
// into its update pass instead of calling this.
inline void reflect_boundary(ParticleSet& ps, double half_extent) {
    float bound = float(half_extent);
    for (std::vector<float>* arr : {&ps.x, &ps.y, &ps.z}) {
        for (float& v : *arr)
            while (v > bound || v < -bound) v = detail::reflect_once(v, bound);
    }
}

// Passive receiver: counts free information molecules inside the closed
// ball (boundary included). Never mutates anything.
inline uint64_t observe_receiver(const ParticleSet& ps, float cx, float cy,
                                 float cz, float radius) {
    const float* __restrict__ px = ps.x.data();
    const float* __restrict__ py = ps.y.data();
    const float* __restrict__ pz = ps.z.data();
    const MolState* __restrict__ st = ps.state.data();
    float r2 = radius * radius;
    uint64_t count = 0;
    for (size_t i = 0; i < ps.size(); ++i) {
        float dx = px[i] - cx, dy = py[i] - cy, dz = pz[i] - cz;
        float m = dx * dx + dy * dy + dz * dz;
        count += (st[i] == MolState::free_mol && m <= r2) ? 1 : 0;
    }
    return count;
}

// One repetition's sampled receiver counts.
struct ObservationSeries {
    std::vector<double> sample_times;    // k · sample_interval, k = 0..M
    std::vector<uint32_t> counts;
    uint32_t repetition_index = 0;
    uint64_t seed_used = 0;
};

// Pointwise statistics over repetitions.
struct AggregatedSeries {
    std::vector<double> sample_times;
    std::vector<double> mean;
    std::vector<double> stddev;          // sample std (n−1)
    std::vector<double> ci99_low, ci99_high;
    uint32_t repetitions = 0;
};

struct BudgetExceeded : std::runtime_error {
    uint64_t required, limit;
    BudgetExceeded(uint64_t req, uint64_t lim)
        : std::runtime_error("particle-step budget exceeded: run needs " +
                             std::to_string(req) + " molecule-steps, limit " +
                             std::to_string(lim)),
          required(req), limit(lim) {}
};

// The stepping core of one repetition. Owns all particle state and stream
// contexts; step() advances one dt. run_impulse() below is the packaged
// release-and-sample driver; the engine is public so property tests can
// interleave observation and stepping arbitrarily.
class SimEngine {
public:
    SimEngine(const ScenarioConfig& cfg, uint32_t repetition)
        : cfg_(cfg), rep_(repetition) {
        auto violations = validate(cfg);
        if (!violations.empty())
            throw std::invalid_argument("invalid config: " +
                                        violations.front().field + ": " +
                                        violations.front().message);
        D_ = diffusion_of(cfg.environment);
        L_ = cfg.environment.medium_half_extent;
        dt_ = cfg.simulation.timestep_dt;
        rx_[0] = -float(cfg.geometry.distance_d / 2.0);
        tx_[0] = +float(cfg.geometry.distance_d / 2.0);

        uint64_t seed = cfg.simulation.master_seed;
        diff_ctx_ = StreamCtx(seed, make_stream(kStreamDiffusion, rep_));
        react_ctx_ = StreamCtx(seed, make_stream(kStreamReaction, rep_));
        enz_init_ctx_ = StreamCtx(seed, make_stream(kStreamEnzymeInit, rep_));
        enz_diff_ctx_ =
            StreamCtx(seed, make_stream(kStreamEnzymeDiffusion, rep_));

        mols_.resize(cfg.transmission.molecules_N);
        std::fill(mols_.x.begin(), mols_.x.end(), tx_[0]);

        Scenario sc = cfg.simulation.scenario;
        if (sc == Scenario::enzyme &&
            cfg.simulation.enzyme_mode == EnzymeMode::microscopic)
            init_enzymes();
        if (sc == Scenario::enzyme &&
            cfg.simulation.enzyme_mode == EnzymeMode::well_mixed) {
            double E_tot = enzyme_concentration(cfg.enzyme, cfg.environment);
            p_wm_degrade_ =
                -std::expm1(-cfg.enzyme.binding_rate_k1 * E_tot * dt_);
        }
        if (sc == Scenario::photolysis) {
            J_ = resolve_photolysis_rate(cfg.photolysis);
            T_op_ = resolve_light_on_time(cfg.photolysis, cfg.geometry,
                                          cfg.environment);
            for (const Shell& s : cfg.photolysis.shells) {
                shell_r2_.push_back(float(s.outer_radius * s.outer_radius));
                shell_p_.push_back(float(-std::expm1(-J_ * s.weight * dt_)));
            }
        }
        if (sc == Scenario::enzyme) {
            p_unbind_ = -std::expm1(-cfg.enzyme.unbinding_rate_km1 * dt_);
            p_degrade_ = -std::expm1(-cfg.enzyme.degradation_rate_k2 * dt_);
        }
    }

    // Advance one timestep: diffuse, reflect, then apply the scenario's
    // reaction channel.
    void step() {
        diffuse_and_reflect();

        Scenario sc = cfg_.simulation.scenario;
        if (sc == Scenario::enzyme &&
            cfg_.simulation.enzyme_mode == EnzymeMode::microscopic) {
            step_enzymes();
            pin_bound_molecules();
            microscopic_reaction_pass();
        } else if (sc == Scenario::enzyme) {
            well_mixed_pass();
        } else if (sc == Scenario::photolysis) {
            // The gate compares the end-of-step time, so the first step
            // whose interval reaches T_op already sees light.
            if ((steps_done_ + 1) * dt_ >= T_op_) photolysis_pass();
        }
        ++steps_done_;
    }

    uint64_t observe() const {
        return observe_receiver(mols_, rx_[0], rx_[1], rx_[2],
                                float(cfg_.geometry.receiver_radius_r));
    }

    double time() const { return double(steps_done_) * dt_; }
    uint64_t steps_done() const { return steps_done_; }

    // Species census for conservation checks.
    struct Tally {
        uint64_t free_mol = 0, bound = 0, degraded = 0;
        uint64_t total() const { return free_mol + bound + degraded; }
    };
    Tally tally() const {
        Tally t;
        for (MolState s : mols_.state) {
            if (s == MolState::free_mol) ++t.free_mol;
            else if (s == MolState::bound) ++t.bound;
            else ++t.degraded;
        }
        return t;
    }

    const ParticleSet& molecules() const { return mols_; }

    // Enzyme positions, for diagnostics and seeding tests.
    const std::vector<float>& enzyme_x() const { return enz_x_; }
    const std::vector<float>& enzyme_y() const { return enz_y_; }
    const std::vector<float>& enzyme_z() const { return enz_z_; }

private:
    void init_enzymes() {
        size_t e = cfg_.enzyme.enzyme_count;
        enz_x_.resize(e); enz_y_.resize(e); enz_z_.resize(e);
        enz_free_.assign(e, 1);
        if (cfg_.enzyme.deployment_radius) {
            // Localized deployment: uniform over a ball around the
            // receiver, by rejection from its bounding cube.
            float R = float(*cfg_.enzyme.deployment_radius);
            std::vector<float> u(3 * std::max<size_t>(e, 64));
            size_t placed = 0;
            while (placed < e) {
                uniforms_.fill(enz_init_ctx_, u.data(), u.size());
                for (size_t i = 0; placed < e && i + 2 < u.size(); i += 3) {
                    float px = 2.0f * u[i] - 1.0f;
                    float py = 2.0f * u[i + 1] - 1.0f;
                    float pz = 2.0f * u[i + 2] - 1.0f;
                    if (px * px + py * py + pz * pz > 1.0f) continue;
                    enz_x_[placed] = rx_[0] + R * px;
                    enz_y_[placed] = rx_[1] + R * py;
                    enz_z_[placed] = rx_[2] + R * pz;
                    ++placed;
                }
            }
        } else {
            std::vector<float> u(3 * e);
            uniforms_.fill(enz_init_ctx_, u.data(), 3 * e);
            float L = float(L_);
            for (size_t i = 0; i < e; ++i) {
                enz_x_[i] = (2.0f * u[i] - 1.0f) * L;
                enz_y_[i] = (2.0f * u[e + i] - 1.0f) * L;
                enz_z_[i] = (2.0f * u[2 * e + i] - 1.0f) * L;
            }
        }
        D_enz_ = cfg_.enzyme.enzyme_D ? *cfg_.enzyme.enzyme_D : D_;
        double sumD = D_ + D_enz_;
        binding_radius_ = sumD > 0
            ? cfg_.enzyme.binding_rate_k1 / (4.0 * kPi * sumD)
            : 0.0;
        build_grid_geometry();
        grid_dirty_ = true;
    }

    void build_grid_geometry() {
        double span = 2.0 * L_;
        double want = std::max(binding_radius_, span / 64.0);
        grid_dim_ = std::max(1, int(span / want));
        grid_dim_ = std::min(grid_dim_, 64);
        cell_size_ = float(span / grid_dim_);
        size_t cells = size_t(grid_dim_) * grid_dim_ * grid_dim_;
        grid_head_.assign(cells, -1);
        grid_stamp_.assign(cells, 0);
        grid_next_.assign(enz_x_.size(), -1);
        grid_epoch_ = 0;
    }

    int cell_of(float x, float y, float z) const {
        float L = float(L_);
        auto idx = [&](float v) {
            int i = int((v + L) / cell_size_);
            return std::clamp(i, 0, grid_dim_ - 1);
        };
        return (idx(z) * grid_dim_ + idx(y)) * grid_dim_ + idx(x);
    }

    void rebuild_grid() {
        ++grid_epoch_;
        float rb = float(binding_radius_);
        for (int a = 0; a < 3; ++a) {
            ebb_lo_[a] = std::numeric_limits<float>::max();
            ebb_hi_[a] = std::numeric_limits<float>::lowest();
        }
        for (size_t e = 0; e < enz_x_.size(); ++e) {
            int c = cell_of(enz_x_[e], enz_y_[e], enz_z_[e]);
            if (grid_stamp_[c] != grid_epoch_) {
                grid_head_[c] = -1;
                grid_stamp_[c] = grid_epoch_;
            }
            grid_next_[e] = grid_head_[c];
            grid_head_[c] = int32_t(e);
            ebb_lo_[0] = std::min(ebb_lo_[0], enz_x_[e] - rb);
            ebb_hi_[0] = std::max(ebb_hi_[0], enz_x_[e] + rb);
            ebb_lo_[1] = std::min(ebb_lo_[1], enz_y_[e] - rb);
            ebb_hi_[1] = std::max(ebb_hi_[1], enz_y_[e] + rb);
            ebb_lo_[2] = std::min(ebb_lo_[2], enz_z_[e] - rb);
            ebb_hi_[2] = std::max(ebb_hi_[2], enz_z_[e] + rb);
        }
        grid_dirty_ = false;
    }

    // Diffusion update with the boundary fold fused into the same pass, so
    // positions stream through memory once per step. Identical arithmetic
    // to brownian_step followed by a single mirror fold; the validated
    // step-size rule makes one fold sufficient.
    void diffuse_and_reflect() {
        size_t n = mols_.size();
        normal_scratch_.resize(3 * n);
        normals_.fill(diff_ctx_, normal_scratch_.data(), 3 * n);
        float sigma = float(std::sqrt(2.0 * D_ * dt_));
        float bound = float(L_);
        float* __restrict__ px = mols_.x.data();
        float* __restrict__ py = mols_.y.data();
        float* __restrict__ pz = mols_.z.data();
        const float* __restrict__ zx = normal_scratch_.data();
        const float* __restrict__ zy = normal_scratch_.data() + n;
        const float* __restrict__ zz = normal_scratch_.data() + 2 * n;
        for (size_t i = 0; i < n; ++i)
            px[i] = detail::reflect_once(px[i] + sigma * zx[i], bound);
        for (size_t i = 0; i < n; ++i)
            py[i] = detail::reflect_once(py[i] + sigma * zy[i], bound);
        for (size_t i = 0; i < n; ++i)
            pz[i] = detail::reflect_once(pz[i] + sigma * zz[i], bound);
    }

    void step_enzymes() {
        if (!(D_enz_ > 0) || enz_x_.empty()) return;
        size_t e = enz_x_.size();
        enz_scratch_.resize(3 * e);
        normals_.fill(enz_diff_ctx_, enz_scratch_.data(), 3 * e);
        float sigma = float(std::sqrt(2.0 * D_enz_ * dt_));
        float bound = float(L_);
        for (size_t i = 0; i < e; ++i)
            enz_x_[i] = detail::reflect_once(enz_x_[i] + sigma * enz_scratch_[i],
                                             bound);
        for (size_t i = 0; i < e; ++i)
            enz_y_[i] = detail::reflect_once(
                enz_y_[i] + sigma * enz_scratch_[e + i], bound);
        for (size_t i = 0; i < e; ++i)
            enz_z_[i] = detail::reflect_once(
                enz_z_[i] + sigma * enz_scratch_[2 * e + i], bound);
        grid_dirty_ = true;
    }

    // Complexes sit at their enzyme's position.
    void pin_bound_molecules() {
        for (size_t i = 0; i < mols_.size(); ++i) {
            if (mols_.state[i] != MolState::bound) continue;
            int32_t e = mols_.bound_enzyme[i];
            mols_.x[i] = enz_x_[e];
            mols_.y[i] = enz_y_[e];
            mols_.z[i] = enz_z_[e];
        }
    }

    // One pass, molecules in ascending index. A free molecule binds the
    // nearest free enzyme within the binding radius (ties to the lower
    // enzyme index); a complex first tries degradation, then unbinding,
    // deciding both from one uniform. Each molecule is visited once, so
    // nothing binds and unbinds within the same step. Exactly N uniforms
    // are consumed regardless of state.
    void microscopic_reaction_pass() {
        if (grid_dirty_) rebuild_grid();
        size_t n = mols_.size();
        uniform_scratch_.resize(n);
        uniforms_.fill(react_ctx_, uniform_scratch_.data(), n);
        float rb = float(binding_radius_);
        float rb2 = rb * rb;
        int span = std::max(1, int(std::ceil(rb / cell_size_)));
        float L = float(L_);
        for (size_t i = 0; i < n; ++i) {
            if (mols_.state[i] == MolState::degraded) continue;
            if (mols_.state[i] == MolState::bound) {
                float u = uniform_scratch_[i];
                int32_t e = mols_.bound_enzyme[i];
                if (u < p_degrade_) {
                    mols_.state[i] = MolState::degraded;
                    mols_.bound_enzyme[i] = -1;
                    enz_free_[e] = 1;
                } else if (u < p_degrade_ + (1.0 - p_degrade_) * p_unbind_) {
                    mols_.state[i] = MolState::free_mol;
                    mols_.bound_enzyme[i] = -1;
                    enz_free_[e] = 1;
                }
                continue;
            }
            if (rb2 <= 0.0f) continue;
            // free molecule: nearest free enzyme within the binding radius
            float mx = mols_.x[i], my = mols_.y[i], mz = mols_.z[i];
            // cheap reject against the enzyme cloud's bounding box
            if (mx < ebb_lo_[0] || mx > ebb_hi_[0] || my < ebb_lo_[1] ||
                my > ebb_hi_[1] || mz < ebb_lo_[2] || mz > ebb_hi_[2])
                continue;
            auto axis_cell = [&](float v) {
                return std::clamp(int((v + L) / cell_size_), 0, grid_dim_ - 1);
            };
            int cx = axis_cell(mx), cy = axis_cell(my), cz = axis_cell(mz);
            int32_t best = -1;
            float best_d2 = rb2;
            for (int zc = std::max(0, cz - span);
                 zc <= std::min(grid_dim_ - 1, cz + span); ++zc)
                for (int yc = std::max(0, cy - span);
                     yc <= std::min(grid_dim_ - 1, cy + span); ++yc)
                    for (int xc = std::max(0, cx - span);
                         xc <= std::min(grid_dim_ - 1, cx + span); ++xc) {
                        int c = (zc * grid_dim_ + yc) * grid_dim_ + xc;
                        if (grid_stamp_[c] != grid_epoch_) continue;
                        for (int32_t e = grid_head_[c]; e >= 0;
                             e = grid_next_[e]) {
                            if (!enz_free_[e]) continue;
                            float dx = enz_x_[e] - mx, dy = enz_y_[e] - my,
                                  dz = enz_z_[e] - mz;
                            float d2 = dx * dx + dy * dy + dz * dz;
                            if (d2 < best_d2 ||
                                (d2 == best_d2 && best >= 0 && e < best)) {
                                best_d2 = d2;
                                best = e;
                            }
                        }
                    }
            if (best >= 0) {
                mols_.state[i] = MolState::bound;
                mols_.bound_enzyme[i] = best;
                enz_free_[best] = 0;
                mols_.x[i] = enz_x_[best];
                mols_.y[i] = enz_y_[best];
                mols_.z[i] = enz_z_[best];
            }
        }
    }

    // Spatially uniform degradation at the lower-bound model's rate.
    void well_mixed_pass() {
        size_t n = mols_.size();
        uniform_scratch_.resize(n);
        uniforms_.fill(react_ctx_, uniform_scratch_.data(), n);
        float p = float(p_wm_degrade_);
        for (size_t i = 0; i < n; ++i) {
            if (mols_.state[i] == MolState::free_mol &&
                uniform_scratch_[i] < p)
                mols_.state[i] = MolState::degraded;
        }
    }

    // Light on: degradation probability by shell of distance from the
    // receiver center, zero beyond the outermost shell.
    void photolysis_pass() {
        size_t n = mols_.size();
        uniform_scratch_.resize(n);
        uniforms_.fill(react_ctx_, uniform_scratch_.data(), n);
        size_t ns = shell_r2_.size();
        for (size_t i = 0; i < n; ++i) {
            if (mols_.state[i] != MolState::free_mol) continue;
            float dx = mols_.x[i] - rx_[0], dy = mols_.y[i] - rx_[1],
                  dz = mols_.z[i] - rx_[2];
            float d2 = dx * dx + dy * dy + dz * dz;
            size_t s = 0;
            while (s < ns && d2 > shell_r2_[s]) ++s;
            if (s == ns) continue;
            if (uniform_scratch_[i] < shell_p_[s])
                mols_.state[i] = MolState::degraded;
        }
    }

    ScenarioConfig cfg_;
    uint32_t rep_;
    double D_ = 0.0, D_enz_ = 0.0, L_ = 0.0, dt_ = 0.0;
    float rx_[3] = {0, 0, 0}, tx_[3] = {0, 0, 0};
    uint64_t steps_done_ = 0;

    ParticleSet mols_;
    std::vector<float> enz_x_, enz_y_, enz_z_;
    std::vector<uint8_t> enz_free_;
    double binding_radius_ = 0.0;
    double p_unbind_ = 0.0, p_degrade_ = 0.0, p_wm_degrade_ = 0.0;
    double J_ = 0.0, T_op_ = 0.0;
    std::vector<float> shell_r2_, shell_p_;

    // enzyme cell grid (linked lists, epoch-stamped heads)
    int grid_dim_ = 1;
    float cell_size_ = 0.0f;
    std::vector<int32_t> grid_head_, grid_next_;
    std::vector<uint32_t> grid_stamp_;
    uint32_t grid_epoch_ = 0;
    bool grid_dirty_ = true;
    // enzyme cloud bounding box, inflated by the binding radius
    float ebb_lo_[3] = {0, 0, 0}, ebb_hi_[3] = {0, 0, 0};

    StreamCtx diff_ctx_, react_ctx_, enz_init_ctx_, enz_diff_ctx_;
    BatchNormals normals_;
    BatchUniforms uniforms_;
    std::vector<float> normal_scratch_, uniform_scratch_, enz_scratch_;
};

// Release N molecules at the transmitter at t = 0 and sample the receiver
// on the configured grid (t = 0 included). Deterministic in
// (master_seed, repetition_index). max_particle_steps > 0 caps the run's
// molecule-steps (N × timesteps) and makes over-budget requests fail
// before any work is done.
inline ObservationSeries run_impulse(const ScenarioConfig& cfg,
                                     uint32_t repetition,
                                     uint64_t max_particle_steps = 0) {
    double dt = cfg.simulation.timestep_dt;
    uint64_t nsteps = uint64_t(std::llround(cfg.simulation.duration / dt));
    uint64_t every =
        uint64_t(std::llround(cfg.simulation.sample_interval / dt));
    uint64_t need = uint64_t(cfg.transmission.molecules_N) * nsteps;
    if (max_particle_steps > 0 && need > max_particle_steps)
        throw BudgetExceeded(need, max_particle_steps);

    SimEngine engine(cfg, repetition);
    ObservationSeries out;
    out.repetition_index = repetition;
    out.seed_used = cfg.simulation.master_seed;
    out.sample_times.push_back(0.0);
    out.counts.push_back(uint32_t(engine.observe()));
    for (uint64_t k = 1; k <= nsteps; ++k) {
        engine.step();
        if (k % every == 0) {
            out.sample_times.push_back(double(k / every) *
                                       cfg.simulation.sample_interval);
            out.counts.push_back(uint32_t(engine.observe()));
        }
    }
    return out;
}

// All repetitions of a run, fanned out over `workers` threads. Each
// repetition derives its streams from (master_seed, repetition_index)
// alone and results are collected by index, so every worker count --
// including one -- produces bitwise-identical output. The budget covers
// the whole run: repetitions × N × timesteps molecule-steps.
inline std::vector<ObservationSeries> run_impulse_many(
    const ScenarioConfig& cfg, unsigned workers,
    uint64_t max_particle_steps = 0) {
    uint32_t reps = cfg.simulation.repetitions;
    uint64_t nsteps = uint64_t(
        std::llround(cfg.simulation.duration / cfg.simulation.timestep_dt));
    uint64_t need =
        uint64_t(reps) * cfg.transmission.molecules_N * nsteps;
    if (max_particle_steps > 0 && need > max_particle_steps)
        throw BudgetExceeded(need, max_particle_steps);

    std::vector<ObservationSeries> runs(reps);
    if (workers == 0) workers = 1;
    if (workers > reps) workers = reps;
    if (workers == 1) {
        for (uint32_t rep = 0; rep < reps; ++rep)
            runs[rep] = run_impulse(cfg, rep);
        return runs;
    }

    std::atomic<uint32_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (uint32_t rep = next.fetch_add(1); rep < reps;
                     rep = next.fetch_add(1))
                    runs[rep] = run_impulse(cfg, rep);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return runs;
}

// Pointwise mean, sample standard deviation, and 99% normal-approximation
// confidence band over repetitions.
inline AggregatedSeries aggregate(const std::vector<ObservationSeries>& runs) {
    if (runs.empty()) throw std::domain_error("aggregate needs >= 1 series");
    const auto& grid = runs.front().sample_times;
    for (const auto& r : runs)
        if (r.sample_times != grid)
            throw std::domain_error("sample grids differ across repetitions");

    size_t m = grid.size();
    double n = double(runs.size());
    AggregatedSeries agg;
    agg.sample_times = grid;
    agg.repetitions = uint32_t(runs.size());
    agg.mean.resize(m);
    agg.stddev.resize(m);
    agg.ci99_low.resize(m);
    agg.ci99_high.resize(m);
    for (size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (const auto& r : runs) s += r.counts[i];
        double mean = s / n;
        double ss = 0.0;
        for (const auto& r : runs) {
            double d = double(r.counts[i]) - mean;
            ss += d * d;
        }
        double sd = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        double half = 2.576 * sd / std::sqrt(n);
        agg.mean[i] = mean;
        agg.stddev[i] = sd;
        agg.ci99_low[i] = mean - half;
        agg.ci99_high[i] = mean + half;
    }
    return agg;
}

}  // namespace dbmc
