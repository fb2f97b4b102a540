#pragma once
// Receiver-side evaluation chain: interference-to-total ratio, threshold
// detection, detection probability under binomial / Poisson / Gaussian
// counting models, bit-error probability, and threshold sweeps.
//
// Tail sums are accumulated in log space (log-gamma terms, scaled by the
// largest term) so counts up to 1e6 stay finite; whichever tail has fewer
// terms is summed directly and the other recovered by complement.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dbmc/analytic.hpp"
#include "dbmc/scenario.hpp"

namespace dbmc {

enum class DetectionMethod { binomial, poisson, gaussian };

inline const char* to_string(DetectionMethod m) {
    switch (m) {
        case DetectionMethod::binomial: return "binomial";
        case DetectionMethod::poisson: return "poisson";
        case DetectionMethod::gaussian: return "gaussian";
    }
    return "?";
}

struct DetectionResult {
    double threshold_zeta = 0.0;
    DetectionMethod method = DetectionMethod::binomial;
    double p_detect = 0.0;   // Pr(S >= zeta)
    double p_error = 0.0;    // P1 * (1 - p_detect)
    double eval_time = 0.0;  // s
};

struct ItrValue {
    double t_s = 0.0;
    double t_end = 0.0;
    double value = 0.0;  // fraction of arrivals after t_s; [0,1]
};

// Interference-to-total ratio from sampled counts: F(t) is the running sum
// of per-sample observations up to and including t, and the value is
// (F(t_end) - F(t_s)) / F(t_end) -- the share of all arrivals that land
// after the symbol period and bleed into the next one.
inline ItrValue itr_from_series(const std::vector<double>& times,
                                const std::vector<double>& counts,
                                double t_s, double t_end) {
    if (times.size() != counts.size())
        throw std::domain_error("times and counts must have equal length");
    if (!(t_s <= t_end))
        throw std::domain_error("t_s must be <= t_end");
    double f_ts = 0.0, f_tend = 0.0, acc = 0.0;
    for (size_t i = 0; i < times.size(); ++i) {
        acc += counts[i];
        if (times[i] <= t_s) f_ts = acc;
        if (times[i] <= t_end) f_tend = acc;
    }
    if (!(f_tend > 0))
        throw std::domain_error("metric undefined: cumulative count at t_end is 0");
    return {t_s, t_end, (f_tend - f_ts) / f_tend};
}

// Same ratio on an analytic expected-count curve, with F(t) the trapezoidal
// integral of the curve from its first grid point.
inline ItrValue itr_from_curve(const ImpulseCurve& curve, double t_s,
                               double t_end) {
    const auto& ts = curve.times;
    const auto& ys = curve.expected_counts;
    if (ts.size() < 2) throw std::domain_error("curve needs >= 2 points");
    if (!(t_s <= t_end))
        throw std::domain_error("t_s must be <= t_end");
    if (t_s < ts.front() || t_end > ts.back())
        throw std::domain_error("t_s and t_end must lie inside the curve grid");
    auto integral_to = [&](double t) {
        double acc = 0.0;
        for (size_t i = 1; i < ts.size(); ++i) {
            if (ts[i] <= t) {
                acc += 0.5 * (ys[i] + ys[i - 1]) * (ts[i] - ts[i - 1]);
            } else {
                double frac = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
                if (frac > 0) {
                    double yt = ys[i - 1] + frac * (ys[i] - ys[i - 1]);
                    acc += 0.5 * (yt + ys[i - 1]) * (t - ts[i - 1]);
                }
                break;
            }
        }
        return acc;
    };
    double f_tend = integral_to(t_end);
    if (!(f_tend > 0))
        throw std::domain_error("metric undefined: cumulative count at t_end is 0");
    return {t_s, t_end, (f_tend - integral_to(t_s)) / f_tend};
}

// Threshold comparison: the received count maps to bit 1 iff it reaches ζ.
inline int detect_bit(double count, double zeta) {
    return count >= zeta ? 1 : 0;
}

struct ProbResult {
    double value = 0.0;
    bool clamped = false;  // formula exceeded 1 and was cut back
};

// Probability that one released molecule is observed at time t under the
// photolysis model. The expected-count expression is not a true CDF, so
// large receivers at small distances can push it past 1; the value is
// clamped with a flag rather than returned out of range.
inline ProbResult single_molecule_prob(double t, const ScenarioConfig& c) {
    double J = resolve_photolysis_rate(c.photolysis);
    double T_op = resolve_light_on_time(c.photolysis, c.geometry, c.environment);
    double v = expected_count_photolysis(t, c.geometry, c.environment, 1.0, J,
                                         T_op, c.photolysis.continuity_mode);
    if (v > 1.0) return {1.0, true};
    return {v, false};
}

namespace detail {

// Sum of binomial pmf terms over [lo, hi], scaled by the largest log term.
inline double binom_sum(uint64_t N, double lp, double lq, double lbinom_n,
                        uint64_t lo, uint64_t hi) {
    auto logterm = [&](uint64_t q) {
        return lbinom_n - std::lgamma(double(q) + 1.0) -
               std::lgamma(double(N - q) + 1.0) + double(q) * lp +
               double(N - q) * lq;
    };
    double lmax = -1e300;
    for (uint64_t q = lo; q <= hi; ++q) lmax = std::max(lmax, logterm(q));
    if (lmax < -745.0) return 0.0;  // every term underflows
    double acc = 0.0;
    for (uint64_t q = lo; q <= hi; ++q) acc += std::exp(logterm(q) - lmax);
    return acc * std::exp(lmax);
}

}  // namespace detail

// Pr(S >= zeta) for S ~ Binomial(N, p).
inline double prob_detect_binomial(uint64_t N, double p, uint64_t zeta) {
    if (p < 0.0 || p > 1.0) throw std::domain_error("p must be in [0, 1]");
    if (zeta == 0) return 1.0;
    if (zeta > N) return 0.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lp = std::log(p), lq = std::log1p(-p);
    double lbn = std::lgamma(double(N) + 1.0);
    // Sum whichever side has fewer terms; complement the other.
    if (zeta <= N / 2)
        return 1.0 - detail::binom_sum(N, lp, lq, lbn, 0, zeta - 1);
    return detail::binom_sum(N, lp, lq, lbn, zeta, N);
}

// Pr(S >= zeta) for S ~ Poisson(mean).
inline double prob_detect_poisson(double mean, uint64_t zeta) {
    if (mean < 0.0) throw std::domain_error("mean must be >= 0");
    if (zeta == 0) return 1.0;
    if (mean == 0.0) return 0.0;
    double lm = std::log(mean);
    auto logterm = [&](uint64_t q) {
        return double(q) * lm - mean - std::lgamma(double(q) + 1.0);
    };
    if (double(zeta) <= mean) {
        // Lower tail has the fewer significant terms.
        double lmax = -1e300;
        for (uint64_t q = 0; q < zeta; ++q) lmax = std::max(lmax, logterm(q));
        double acc = 0.0;
        for (uint64_t q = 0; q < zeta; ++q) acc += std::exp(logterm(q) - lmax);
        return 1.0 - acc * std::exp(lmax);
    }
    // Upper tail: terms decay at least geometrically past the mode.
    double lmax = logterm(zeta);
    double acc = 0.0;
    for (uint64_t q = zeta;; ++q) {
        double t = std::exp(logterm(q) - lmax);
        acc += t;
        if (t < 1e-18 * acc) break;
        if (q > zeta + 40 && double(q) > 4.0 * mean + 100.0) break;
    }
    return acc * std::exp(lmax);
}

// Whether the Gaussian detector reports the upper tail Pr(S >= ζ)
// (complementary form) or the lower-tail ½[1 + erf(·)] expression the
// printed model states while labeling it Pr(S >= ζ).
enum class GaussianTail { upper, as_printed };

inline double prob_detect_gaussian(double mean, double variance, double zeta,
                                   GaussianTail mode = GaussianTail::upper) {
    if (!(variance > 0.0)) throw std::domain_error("variance must be > 0");
    double x = (zeta - mean) / std::sqrt(2.0 * variance);
    if (mode == GaussianTail::upper) return 0.5 * std::erfc(x);
    return 0.5 * (1.0 + std::erf(x));
}

// Pe = P1 · (1 − Pr(detect)) — only missed 1-bits contribute, since a
// transmitted 0 releases nothing and cannot cross the threshold.
inline double bit_error_probability(double p_detect, double P1) {
    return P1 * (1.0 - p_detect);
}

// Inputs a threshold sweep needs: trial count and per-molecule success
// probability at the evaluation time. mean = N·p and variance = N·p·(1−p)
// feed the Poisson and Gaussian models.
struct SweepInput {
    uint64_t N = 0;
    double p = 0.0;
};

inline std::vector<DetectionResult> threshold_sweep(
    SweepInput in, uint64_t zeta_start, uint64_t zeta_stop,
    DetectionMethod method, double P1, double eval_time) {
    if (zeta_stop < zeta_start)
        throw std::domain_error("threshold range must be non-empty");
    std::vector<DetectionResult> out;
    out.reserve(zeta_stop - zeta_start + 1);
    double mean = double(in.N) * in.p;
    double var = mean * (1.0 - in.p);
    for (uint64_t z = zeta_start; z <= zeta_stop; ++z) {
        double pd = 0.0;
        if (z == 0) {
            // Vacuous threshold: a count is never below zero, so detection
            // is certain under every model, including the Gaussian one
            // whose continuous tail would otherwise leak below zero.
            pd = 1.0;
        } else {
            switch (method) {
                case DetectionMethod::binomial:
                    pd = prob_detect_binomial(in.N, in.p, z);
                    break;
                case DetectionMethod::poisson:
                    pd = prob_detect_poisson(mean, z);
                    break;
                case DetectionMethod::gaussian:
                    pd = var > 0.0
                             ? prob_detect_gaussian(mean, var, double(z))
                             : (double(z) <= mean ? 1.0 : 0.0);
                    break;
            }
        }
        DetectionResult r;
        r.threshold_zeta = double(z);
        r.method = method;
        r.p_detect = pd;
        r.p_error = bit_error_probability(pd, P1);
        r.eval_time = eval_time;
        out.push_back(r);
    }
    return out;
}

// Index of the smallest-Pe entry; ties break toward the smaller threshold.
inline size_t argmin_pe(const std::vector<DetectionResult>& results) {
    if (results.empty()) throw std::domain_error("empty sweep");
    size_t best = 0;
    for (size_t i = 1; i < results.size(); ++i)
        if (results[i].p_error < results[best].p_error) best = i;
    return best;
}

// Empirical detection probability: the fraction of per-repetition counts
// reaching the threshold.
inline double empirical_p_detect(const std::vector<double>& counts,
                                 double zeta) {
    if (counts.empty()) throw std::domain_error("no counts");
    size_t hits = 0;
    for (double c : counts)
        if (c >= zeta) ++hits;
    return double(hits) / double(counts.size());
}

}  // namespace dbmc
