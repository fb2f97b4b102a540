#pragma once
// Counter-based random number generation for reproducible parallel Monte
// Carlo. The generator is Philox4x32-10: a keyed bijection from a 128-bit
// counter to four 32-bit words. Because output depends only on (key,
// counter), any repetition or worker can regenerate its exact stream from
// scratch -- results cannot depend on how work is scheduled.
//
// Stream addressing: the 128-bit counter is split into
//     low  64 bits = block index within the stream (increments per block)
//     high 64 bits = stream id (caller-chosen; e.g. repetition | purpose)
// and the 64-bit key is the user's master seed. One block yields four
// 32-bit words = four uniforms or four normals.
//
// Batch layout contract (applies to BatchNormals/BatchUniforms::fill of
// size n): the call consumes ceil(n/4) consecutive blocks. With B = n/4
// rounded down, block i < B contributes its words to four B-sized
// segments of the destination:
//     normals:  dst[i], dst[B+i]   from words (w0,w1) via Box-Muller
//               dst[2B+i], dst[3B+i] from words (w2,w3)
//     uniforms: dst[kB+i] from word k
// A remainder of n % 4 values comes from one extra block. The layout is
// part of the determinism contract: equal (key, stream, starting block,
// n) always produces the identical buffer.

#include <cstdint>
#include <cstring>
#include <cmath>
#include <vector>

namespace dbmc {

namespace detail {
inline constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;
}  // namespace detail

// One Philox4x32-10 block; reference form used by tests and tail handling.
inline void philox4x32_10(const uint32_t ctr[4], uint32_t k0, uint32_t k1,
                          uint32_t out[4]) {
    uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    for (int r = 0; r < 10; ++r) {
        if (r > 0) { k0 += detail::kPhiloxW0; k1 += detail::kPhiloxW1; }
        uint64_t p0 = uint64_t(detail::kPhiloxM0) * c0;
        uint64_t p1 = uint64_t(detail::kPhiloxM1) * c2;
        uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
        uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
        uint32_t t0 = hi1 ^ c1 ^ k0;
        uint32_t t2 = hi0 ^ c3 ^ k1;
        c0 = t0; c1 = lo1; c2 = t2; c3 = lo0;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
}

// Generation context: key (master seed), stream id, and the next block.
struct StreamCtx {
    uint32_t k0 = 0, k1 = 0;
    uint64_t stream = 0;
    uint64_t block = 0;

    StreamCtx() = default;
    StreamCtx(uint64_t master_seed, uint64_t stream_id)
        : k0(uint32_t(master_seed)), k1(uint32_t(master_seed >> 32)),
          stream(stream_id) {}
};

namespace detail {

// Blocks [base, base+n) of one stream into four word-lane arrays. The lane
// arrays are unit-stride so the round body vectorizes; rounds are unrolled
// by hand because a key-schedule branch inside the loop defeats the
// vectorizer.
inline void philox_fill4(uint32_t* __restrict__ o0, uint32_t* __restrict__ o1,
                         uint32_t* __restrict__ o2, uint32_t* __restrict__ o3,
                         uint64_t base, size_t n, uint64_t stream,
                         uint32_t k0, uint32_t k1) {
    const uint32_t s0 = uint32_t(stream), s1 = uint32_t(stream >> 32);
    for (size_t i = 0; i < n; ++i) {
        uint64_t b = base + uint64_t(i);
        uint32_t c0 = uint32_t(b), c1 = uint32_t(b >> 32), c2 = s0, c3 = s1;
        uint32_t kk0 = k0, kk1 = k1;
#define DBMC_PHILOX_ROUND                                           \
        {                                                           \
            uint64_t p0 = uint64_t(kPhiloxM0) * c0;                 \
            uint64_t p1 = uint64_t(kPhiloxM1) * c2;                 \
            uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);  \
            uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);  \
            uint32_t t0 = hi1 ^ c1 ^ kk0;                           \
            uint32_t t2 = hi0 ^ c3 ^ kk1;                           \
            c0 = t0; c1 = lo1; c2 = t2; c3 = lo0;                   \
        }
        DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
        kk0 += kPhiloxW0; kk1 += kPhiloxW1; DBMC_PHILOX_ROUND
#undef DBMC_PHILOX_ROUND
        o0[i] = c0; o1[i] = c1; o2[i] = c2; o3[i] = c3;
    }
}

// One Box-Muller pass: n word pairs (u[i], w[i]) -> standard normals
// za[i], zb[i]. Written select-free (log via the atanh series on the raw
// [1,2) mantissa, trig quadrant folded with floor arithmetic) so the loop
// vectorizes; needs -fno-math-errno -fno-trapping-math to keep sqrt and
// division branch-free. Absolute error vs. an exact transform of the same
// words is < 2e-4, far below Monte Carlo resolution.
inline void bm_pass(float* __restrict__ za, float* __restrict__ zb,
                    const uint32_t* __restrict__ u,
                    const uint32_t* __restrict__ w, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        float u1 = (float(u[i]) + 1.0f) * 2.3283064365386963e-10f;  // (0,1]
        float t  = float(w[i] >> 8) * 5.9604644775390625e-8f;       // [0,1)
        uint32_t bits; std::memcpy(&bits, &u1, 4);
        float ef = float(int(bits >> 23) - 127);
        uint32_t mbits = (bits & 0x007FFFFFu) | 0x3F800000u;
        float m; std::memcpy(&m, &mbits, 4);
        float v = (m - 1.0f) / (m + 1.0f);                          // [0,1/3]
        float v2 = v * v;
        float p = 0.0666666667f + v2 * (0.0769230769f + v2 * 0.0909090909f);
        p = 0.1111111111f + v2 * p;
        p = 0.1428571429f + v2 * p;
        p = 0.2f + v2 * p;
        p = 0.3333333333f + v2 * p;
        p = 1.0f + v2 * p;
        float lnu = ef * 0.693147181f + 2.0f * v * p;
        float r = std::sqrt(-2.0f * lnu);
        // angle 2*pi*t, reduced to [-pi/4, pi/4] around quadrant k
        float zq = t * 4.0f;
        float k = std::floor(zq + 0.5f);
        float g = (zq - k) * 1.57079633f;
        float g2 = g * g;
        float sg = g * (1.0f + g2 * (-0.166666667f + g2 * (8.33333333e-3f
                      + g2 * (-1.98412698e-4f + g2 * 2.75573192e-6f))));
        float cg = 1.0f + g2 * (-0.5f + g2 * (4.16666667e-2f
                      + g2 * (-1.38888889e-3f + g2 * 2.48015873e-5f)));
        float qm   = k - 4.0f * std::floor(k * 0.25f);        // k mod 4
        float swap = qm - 2.0f * std::floor(qm * 0.5f);       // odd quadrant
        float sneg = std::floor(qm * 0.5f);                   // qm in {2,3}
        float qp   = qm + 1.0f;
        float qp4  = qp - 4.0f * std::floor(qp * 0.25f);
        float cneg = std::floor(qp4 * 0.5f);                  // qm in {1,2}
        float sign_s = 1.0f - 2.0f * sneg;
        float sign_c = 1.0f - 2.0f * cneg;
        float co = sign_c * (cg + swap * (sg - cg));
        float si = sign_s * (sg + swap * (cg - sg));
        za[i] = r * co;
        zb[i] = r * si;
    }
}

// Word -> uniform float in [0,1) with 24-bit resolution (exact in float).
inline void u01_pass(float* __restrict__ dst, const uint32_t* __restrict__ src,
                     size_t n) {
    for (size_t i = 0; i < n; ++i)
        dst[i] = float(src[i] >> 8) * 5.9604644775390625e-8f;
}

}  // namespace detail

// Batch generator of standard normal floats. Owns lane scratch so repeated
// fills do not allocate. See the layout contract at the top of this header.
class BatchNormals {
public:
    void fill(StreamCtx& ctx, float* dst, size_t n) {
        size_t b = n / 4;
        if (b > 0) {
            reserve(b);
            detail::philox_fill4(w0_.data(), w1_.data(), w2_.data(), w3_.data(),
                                 ctx.block, b, ctx.stream, ctx.k0, ctx.k1);
            detail::bm_pass(dst, dst + b, w0_.data(), w1_.data(), b);
            detail::bm_pass(dst + 2 * b, dst + 3 * b, w2_.data(), w3_.data(), b);
        }
        size_t rem = n - 4 * b;
        if (rem > 0) {
            uint32_t ctr[4] = {uint32_t(ctx.block + b),
                               uint32_t((ctx.block + b) >> 32),
                               uint32_t(ctx.stream), uint32_t(ctx.stream >> 32)};
            uint32_t words[4];
            philox4x32_10(ctr, ctx.k0, ctx.k1, words);
            float z[4];
            detail::bm_pass(z, z + 1, words, words + 1, 1);
            detail::bm_pass(z + 2, z + 3, words + 2, words + 3, 1);
            for (size_t i = 0; i < rem; ++i) dst[4 * b + i] = z[i];
        }
        ctx.block += (n + 3) / 4;
    }

private:
    void reserve(size_t b) {
        if (w0_.size() < b) {
            w0_.resize(b); w1_.resize(b); w2_.resize(b); w3_.resize(b);
        }
    }
    std::vector<uint32_t> w0_, w1_, w2_, w3_;
};

// Batch generator of uniform floats in [0,1); same block accounting.
class BatchUniforms {
public:
    void fill(StreamCtx& ctx, float* dst, size_t n) {
        size_t b = n / 4;
        if (b > 0) {
            reserve(b);
            detail::philox_fill4(w0_.data(), w1_.data(), w2_.data(), w3_.data(),
                                 ctx.block, b, ctx.stream, ctx.k0, ctx.k1);
            detail::u01_pass(dst,         w0_.data(), b);
            detail::u01_pass(dst + b,     w1_.data(), b);
            detail::u01_pass(dst + 2 * b, w2_.data(), b);
            detail::u01_pass(dst + 3 * b, w3_.data(), b);
        }
        size_t rem = n - 4 * b;
        if (rem > 0) {
            uint32_t ctr[4] = {uint32_t(ctx.block + b),
                               uint32_t((ctx.block + b) >> 32),
                               uint32_t(ctx.stream), uint32_t(ctx.stream >> 32)};
            uint32_t words[4];
            philox4x32_10(ctr, ctx.k0, ctx.k1, words);
            float z[4];
            detail::u01_pass(z, words, 4);
            for (size_t i = 0; i < rem; ++i) dst[4 * b + i] = z[i];
        }
        ctx.block += (n + 3) / 4;
    }

private:
    void reserve(size_t b) {
        if (w0_.size() < b) {
            w0_.resize(b); w1_.resize(b); w2_.resize(b); w3_.resize(b);
        }
    }
    std::vector<uint32_t> w0_, w1_, w2_, w3_;
};

}  // namespace dbmc
